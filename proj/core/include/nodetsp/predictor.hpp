#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nodetsp/encoding.hpp"
#include "nodetsp/geometry.hpp"

namespace nodetsp {

/// Predicted next-node location for every node, indexed by node.
struct PredictionSet {
  std::vector<Point> locations;

  std::size_t size() const noexcept { return locations.size(); }
};

PredictionSet to_prediction_set(const std::vector<PredictionRow>& rows);
std::vector<PredictionRow> to_prediction_rows(const PredictionSet& preds);

enum class PredictorKind {
  kOracle,    // successor coordinates from a reference tour
  kNearest,   // coordinates of neighbor 1
  kExternal,  // adapter process speaking the train/predict CSV protocol
  kReplay,    // archived prediction CSVs, <dir>/<instance id>.pred.csv
};

struct ExternalCommand {
  std::string command;
  std::filesystem::path working_dir;  // empty: a fresh temporary directory
  std::chrono::seconds timeout{600};
};

struct PredictorSpec {
  PredictorKind kind = PredictorKind::kNearest;
  ExternalCommand external;
  std::optional<std::filesystem::path> model_dir;  // pre-fitted adapter artifact
  std::filesystem::path replay_dir;

  static PredictorSpec of_kind(PredictorKind kind) {
    PredictorSpec spec;
    spec.kind = kind;
    return spec;
  }
  static PredictorSpec oracle() { return of_kind(PredictorKind::kOracle); }
  static PredictorSpec nearest() { return of_kind(PredictorKind::kNearest); }
  static PredictorSpec external_command(std::string command);
  static PredictorSpec replay(std::filesystem::path dir);

  // Accepts "oracle", "nearest", "cmd:<command>" and "replay:<dir>".
  static PredictorSpec parse(const std::string& text);

  std::string label() const;
};

/// A predictor ready to answer predict(). Builtins are stateless; the external
/// kind carries the model directory produced by fit() and serializes its
/// adapter invocations. Copies share the serialization lock.
class Predictor {
 public:
  explicit Predictor(PredictorSpec spec);

  const PredictorSpec& spec() const noexcept { return spec_; }

  // `reference` is required by the oracle kind only; `instance_id` by replay.
  PredictionSet predict(const FeatureTable& inference,
                        const std::optional<Tour>& reference = std::nullopt,
                        const std::string& instance_id = {}) const;

 private:
  PredictionSet predict_external(const FeatureTable& inference) const;

  PredictorSpec spec_;
  std::shared_ptr<std::mutex> adapter_lock_;
};

// Builtins: no-op. External: runs
//   <command> train --features <train.csv> --model-out <dir>
// and records <dir> for later predict calls. `model_out` defaults to a
// directory under the adapter's working directory.
Predictor fit(const PredictorSpec& spec, const FeatureTable& training,
              std::optional<std::filesystem::path> model_out = std::nullopt);

}  // namespace nodetsp
