#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "nodetsp/geometry.hpp"

namespace nodetsp {

inline constexpr std::size_t kDefaultNeighborCount = 5;

struct NeighborFeature {
  Point location;
  double dist_to_current = 0.0;

  friend bool operator==(const NeighborFeature&, const NeighborFeature&) = default;
};

/// One node's feature row. In training mode `target` holds the coordinates
/// of the node's successor in the reference tour.
struct FeatureRow {
  int row_id = -1;
  Point cur;
  std::vector<NeighborFeature> neighbors;
  std::optional<Point> target;

  friend bool operator==(const FeatureRow&, const FeatureRow&) = default;
};

enum class EncodingMode { kTraining, kInference };

struct FeatureTable {
  std::size_t k = 0;
  EncodingMode mode = EncodingMode::kInference;
  std::vector<FeatureRow> rows;  // rows[i].row_id == i
};

struct TrainingOptions {
  // Drop the true successor from the neighbor candidates. Off by default:
  // with it off, neighbor 1 of every training row is the successor itself.
  bool exclude_target_from_neighbors = false;
};

// Neighbors ranked by distance to the current node.
FeatureTable encode_inference(const TspInstance& inst,
                              std::size_t k = kDefaultNeighborCount);

// Neighbors ranked by distance to the successor's location; the recorded
// distance feature is still measured from the current node.
FeatureTable encode_training(const TspInstance& inst, const Tour& reference,
                             std::size_t k = kDefaultNeighborCount,
                             TrainingOptions options = {});

// Successor of every node in the cyclic reference order.
std::vector<int> successors(const Tour& tour);

// Feature CSV: row_id,cur_x,cur_y,nb1_x,nb1_y,nb1_d,...[,next_x,next_y]
void write_feature_csv(std::ostream& out, const FeatureTable& table);
void write_feature_csv(const std::filesystem::path& path, const FeatureTable& table);

struct PredictionRow {
  int row_id = -1;
  double pred_x = 0.0;
  double pred_y = 0.0;
};

// Prediction CSV: row_id,pred_x,pred_y. Each expected id must appear exactly
// once; rows may arrive in any order and are returned sorted by row_id.
std::vector<PredictionRow> read_prediction_csv(std::istream& in,
                                               std::size_t expected_rows);
std::vector<PredictionRow> read_prediction_csv(const std::filesystem::path& path,
                                               std::size_t expected_rows);
void write_prediction_csv(std::ostream& out, const std::vector<PredictionRow>& rows);
void write_prediction_csv(const std::filesystem::path& path,
                          const std::vector<PredictionRow>& rows);

}  // namespace nodetsp
