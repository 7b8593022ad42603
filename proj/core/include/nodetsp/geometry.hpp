#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nodetsp {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

// Euclidean distance, evaluated as sqrt(dx*dx + dy*dy) with dx = a.x - b.x.
// Exactly symmetric: swapping arguments only flips the sign of dx and dy.
double distance(Point a, Point b) noexcept;

/// A Euclidean TSP instance: n >= 3 points in the unit square. Node index is
/// the position in nodes(); it never changes after construction.
class TspInstance {
 public:
  TspInstance(std::vector<Point> nodes, std::string id = {});

  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<Point>& nodes() const noexcept { return nodes_; }
  Point node(std::size_t i) const { return nodes_.at(i); }
  const std::string& id() const noexcept { return id_; }

  double dist(std::size_t i, std::size_t j) const {
    return distance(nodes_[i], nodes_[j]);
  }

 private:
  std::vector<Point> nodes_;
  std::string id_;
};

/// A candidate Hamiltonian cycle, stored as a visiting order. The last node
/// connects back to the first. Validity against an instance is checked by
/// validate_tour(), not by construction.
struct Tour {
  std::vector<int> order;

  std::size_t size() const noexcept { return order.size(); }
  friend bool operator==(const Tour&, const Tour&) = default;
};

enum class TourViolation { kNone, kWrongLength, kOutOfRange, kDuplicate };

struct TourVerdict {
  TourViolation violation = TourViolation::kNone;
  int node = -1;  // offending node for kOutOfRange / kDuplicate
  std::string message;

  bool valid() const noexcept { return violation == TourViolation::kNone; }
};

TourVerdict validate_tour(const TspInstance& inst, const Tour& tour);

// Throws Error(kInvalidTour) carrying the verdict message.
void require_valid_tour(const TspInstance& inst, const Tour& tour);

/// Total cycle length including the closing edge.
///
/// Edge lengths are summed in ascending order, so the result depends only on
/// the multiset of edges and is bit-identical under rotation and reversal.
double tour_length(const TspInstance& inst, const Tour& tour);

/// Undirected edge set of a tour as sorted (min, max) pairs.
std::vector<std::pair<int, int>> tour_edges(const Tour& tour);

struct Neighbor {
  int index = -1;
  double dist = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// The k nodes closest to `from`, skipping `exclude`, ordered by
/// (distance, index) ascending.
std::vector<Neighbor> k_nearest(const TspInstance& inst, Point from,
                                std::size_t k, std::span<const int> exclude = {});

/// n i.i.d. uniform points in [0,1)^2.
///
/// The generator is std::mt19937_64 seeded with `seed`; each coordinate is
/// (draw >> 11) * 2^-53, x before y, node by node. Both steps are fully
/// specified, so instances are identical across platforms and compilers.
TspInstance generate_instance(std::size_t n, std::uint64_t seed,
                              std::string id = {});

}  // namespace nodetsp
