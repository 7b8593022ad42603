#include "nodetsp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nodetsp/error.hpp"

namespace nodetsp {

double distance(Point a, Point b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

TspInstance::TspInstance(std::vector<Point> nodes, std::string id)
    : nodes_(std::move(nodes)), id_(std::move(id)) {
  if (nodes_.size() < 3) {
    throw Error(ErrorCode::kInvalidSize,
                "instance needs at least 3 nodes, got " +
                    std::to_string(nodes_.size()));
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Point p = nodes_[i];
    if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
      std::ostringstream os;
      os << "node " << i << " (" << p.x << ", " << p.y
         << ") lies outside the unit square";
      throw Error(ErrorCode::kPrecondition, os.str());
    }
  }
}

TourVerdict validate_tour(const TspInstance& inst, const Tour& tour) {
  const std::size_t n = inst.size();
  if (tour.size() != n) {
    return {TourViolation::kWrongLength, -1,
            "wrong length: tour has " + std::to_string(tour.size()) +
                " entries, instance has " + std::to_string(n) + " nodes"};
  }
  std::vector<char> seen(n, 0);
  for (int v : tour.order) {
    if (v < 0 || static_cast<std::size_t>(v) >= n) {
      return {TourViolation::kOutOfRange, v,
              "out-of-range node index " + std::to_string(v)};
    }
    if (seen[v]) {
      return {TourViolation::kDuplicate, v,
              "duplicate node " + std::to_string(v)};
    }
    seen[v] = 1;
  }
  return {};
}

void require_valid_tour(const TspInstance& inst, const Tour& tour) {
  if (auto verdict = validate_tour(inst, tour); !verdict.valid()) {
    throw Error(ErrorCode::kInvalidTour, "invalid tour: " + verdict.message);
  }
}

double tour_length(const TspInstance& inst, const Tour& tour) {
  require_valid_tour(inst, tour);
  const std::size_t n = tour.size();
  std::vector<double> edges(n);
  for (std::size_t p = 0; p < n; ++p) {
    edges[p] = inst.dist(tour.order[p], tour.order[(p + 1) % n]);
  }
  std::sort(edges.begin(), edges.end());
  double total = 0.0;
  for (double e : edges) total += e;
  return total;
}

std::vector<std::pair<int, int>> tour_edges(const Tour& tour) {
  const std::size_t n = tour.size();
  std::vector<std::pair<int, int>> edges;
  edges.reserve(n);
  for (std::size_t p = 0; p < n; ++p) {
    const int a = tour.order[p];
    const int b = tour.order[(p + 1) % n];
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

std::vector<Neighbor> k_nearest(const TspInstance& inst, Point from,
                                std::size_t k, std::span<const int> exclude) {
  const std::size_t n = inst.size();
  std::vector<char> skip(n, 0);
  for (int e : exclude) {
    if (e >= 0 && static_cast<std::size_t>(e) < n) skip[e] = 1;
  }
  std::vector<Neighbor> candidates;
  candidates.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!skip[i]) {
      candidates.push_back({static_cast<int>(i), distance(from, inst.nodes()[i])});
    }
  }
  if (k == 0 || candidates.size() < k) {
    throw Error(ErrorCode::kInsufficientCandidates,
                "k_nearest: requested " + std::to_string(k) + " of " +
                    std::to_string(candidates.size()) + " candidates");
  }
  auto closer = [](const Neighbor& a, const Neighbor& b) {
    return a.dist != b.dist ? a.dist < b.dist : a.index < b.index;
  };
  std::partial_sort(candidates.begin(), candidates.begin() + k,
                    candidates.end(), closer);
  candidates.resize(k);
  return candidates;
}

TspInstance generate_instance(std::size_t n, std::uint64_t seed,
                              std::string id) {
  if (n < 3) {
    throw Error(ErrorCode::kInvalidSize,
                "generate_instance: n must be >= 3, got " + std::to_string(n));
  }
  std::mt19937_64 rng(seed);
  auto unit = [&rng] {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  std::vector<Point> nodes(n);
  for (auto& p : nodes) {
    p.x = unit();
    p.y = unit();
  }
  return TspInstance(std::move(nodes), std::move(id));
}

}  // namespace nodetsp
