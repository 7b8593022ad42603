#pragma once

#include <iosfwd>
#include <vector>

#include "nodetsp/geometry.hpp"
#include "nodetsp/predictor.hpp"

namespace nodetsp {

inline constexpr std::size_t kDefaultSpatialNeighbors = 10;

/// Dense row-major n x n matrix.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  const std::vector<double>& data() const noexcept { return data_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// D(i, j): distance from node i's predicted next location to node j; D(i, i) = 0.
struct ScoreMatrix {
  SquareMatrix d;
};

// P(i, j): probability that i connects to j, one softmax over all n(n-1)
// off-diagonal entries of -D/tau. tau is the median of the finite nonzero
// off-diagonal scores.
struct ProbabilityMatrix {
  SquareMatrix p;
  double tau = 0.0;
};

struct EdgeCandidate {
  int i = -1;  // i < j
  int j = -1;
  double score = 0.0;

  friend bool operator==(const EdgeCandidate&, const EdgeCandidate&) = default;
};

// How the directed matrix P becomes an undirected edge score.
enum class Symmetrization {
  kMax,  // max(P(i,j), P(j,i))
  kSum,  // P(i,j) + P(j,i)
};

struct CandidateLists {
  std::vector<EdgeCandidate> spatial;
  std::vector<EdgeCandidate> full;
};

ScoreMatrix score_matrix(const TspInstance& inst, const PredictionSet& preds);

ProbabilityMatrix probability_matrix(const ScoreMatrix& scores);

// Median of the finite, strictly positive off-diagonal entries.
double score_median(const ScoreMatrix& scores);

// Spatial edges join each node with its m_spatial nearest nodes (by node
// coordinates, ties by index). Both lists are sorted by score descending,
// then (i, j) ascending.
CandidateLists candidate_edges(const TspInstance& inst, const ProbabilityMatrix& probs,
                               std::size_t m_spatial,
                               Symmetrization sym = Symmetrization::kMax);

// Greedy edge insertion: spatial list first, then the full list if the cycle
// is still incomplete. An edge is accepted when both ends have degree < 2 and
// it joins two components, or when it closes the cycle after n-1 edges.
// The tour starts at node 0 and heads toward node 0's lower-indexed neighbor.
Tour greedy_construct(std::size_t n, const std::vector<EdgeCandidate>& spatial,
                      const std::vector<EdgeCandidate>& full,
                      std::vector<EdgeCandidate>* accepted = nullptr);

struct DecodeOptions {
  std::size_t m_spatial = kDefaultSpatialNeighbors;  // clamped to n-1
  Symmetrization sym = Symmetrization::kMax;
};

struct DecodeTrace {
  ProbabilityMatrix probs;
  std::vector<EdgeCandidate> accepted;  // in acceptance order
};

Tour decode(const TspInstance& inst, const PredictionSet& preds, DecodeOptions options = {},
            DecodeTrace* trace = nullptr);

// Debug dump: "tau <v>", "n <n>", n rows of P, then "edges <count>" and one
// "i j score" line per accepted edge in acceptance order.
void write_decode_trace(std::ostream& out, const DecodeTrace& trace);

}  // namespace nodetsp
