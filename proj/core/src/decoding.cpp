#include "nodetsp/decoding.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "nodetsp/error.hpp"
#include "nodetsp/instance_io.hpp"

namespace nodetsp {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
};

bool edge_order(const EdgeCandidate& a, const EdgeCandidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.i != b.i) return a.i < b.i;
  return a.j < b.j;
}

EdgeCandidate make_candidate(const ProbabilityMatrix& probs, int a, int b, Symmetrization sym) {
  const int i = std::min(a, b);
  const int j = std::max(a, b);
  const double pij = probs.p(i, j);
  const double pji = probs.p(j, i);
  return {i, j, sym == Symmetrization::kSum ? pij + pji : std::max(pij, pji)};
}

}  // namespace

ScoreMatrix score_matrix(const TspInstance& inst, const PredictionSet& preds) {
  const std::size_t n = inst.size();
  if (preds.size() != n) {
    throw Error(ErrorCode::kIncompletePredictions,
                "expected " + std::to_string(n) + " predictions, got " +
                    std::to_string(preds.size()));
  }
  ScoreMatrix scores{SquareMatrix(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const Point po = preds.locations[i];
    if (!std::isfinite(po.x) || !std::isfinite(po.y)) {
      throw Error(ErrorCode::kIncompletePredictions,
                  "prediction for node " + std::to_string(i) + " is not finite");
    }
    for (std::size_t j = 0; j < n; ++j) {
      scores.d(i, j) = distance(po, inst.nodes()[j]);
    }
    scores.d(i, i) = 0.0;
  }
  return scores;
}

double score_median(const ScoreMatrix& scores) {
  const std::size_t n = scores.d.size();
  std::vector<double> kept;
  kept.reserve(n * (n - 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = scores.d(i, j);
      if (i != j && std::isfinite(v) && v != 0.0) kept.push_back(v);
    }
  }
  if (kept.empty()) {
    throw Error(ErrorCode::kDegenerateScores,
                "every off-diagonal score is zero or infinite; median undefined");
  }
  const std::size_t mid = kept.size() / 2;
  std::nth_element(kept.begin(), kept.begin() + mid, kept.end());
  const double upper = kept[mid];
  if (kept.size() % 2 == 1) return upper;
  const double lower = *std::max_element(kept.begin(), kept.begin() + mid);
  return (lower + upper) / 2.0;
}

ProbabilityMatrix probability_matrix(const ScoreMatrix& scores) {
  const std::size_t n = scores.d.size();
  if (n < 2) throw Error(ErrorCode::kPrecondition, "probability matrix needs n >= 2");
  ProbabilityMatrix probs{SquareMatrix(n), score_median(scores)};

  // Softmax over the off-diagonal logits -D/tau, shifted by their maximum.
  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) max_logit = std::max(max_logit, -scores.d(i, j) / probs.tau);
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double e = std::exp(-scores.d(i, j) / probs.tau - max_logit);
      probs.p(i, j) = e;
      total += e;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) probs.p(i, j) /= total;
    }
  }
  return probs;
}

CandidateLists candidate_edges(const TspInstance& inst, const ProbabilityMatrix& probs,
                               std::size_t m_spatial, Symmetrization sym) {
  const std::size_t n = inst.size();
  if (m_spatial < 1 || m_spatial > n - 1) {
    throw Error(ErrorCode::kPrecondition,
                "m_spatial must lie in [1, n-1], got " + std::to_string(m_spatial));
  }
  CandidateLists lists;

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(n * m_spatial);
  for (int i = 0; i < static_cast<int>(n); ++i) {
    const int self[] = {i};
    for (const Neighbor& nb : k_nearest(inst, inst.nodes()[i], m_spatial, self)) {
      pairs.emplace_back(std::min(i, nb.index), std::max(i, nb.index));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  lists.spatial.reserve(pairs.size());
  for (auto [i, j] : pairs) lists.spatial.push_back(make_candidate(probs, i, j, sym));

  lists.full.reserve(n * (n - 1) / 2);
  for (int i = 0; i < static_cast<int>(n); ++i) {
    for (int j = i + 1; j < static_cast<int>(n); ++j) {
      lists.full.push_back(make_candidate(probs, i, j, sym));
    }
  }
  std::sort(lists.spatial.begin(), lists.spatial.end(), edge_order);
  std::sort(lists.full.begin(), lists.full.end(), edge_order);
  return lists;
}

Tour greedy_construct(std::size_t n, const std::vector<EdgeCandidate>& spatial,
                      const std::vector<EdgeCandidate>& full,
                      std::vector<EdgeCandidate>* accepted) {
  if (n < 3) throw Error(ErrorCode::kPrecondition, "greedy_construct needs n >= 3");
  std::vector<std::array<int, 2>> adj(n, {-1, -1});
  std::vector<int> degree(n, 0);
  DisjointSets components(n);
  std::size_t placed = 0;

  auto scan = [&](const std::vector<EdgeCandidate>& edges) {
    for (const EdgeCandidate& e : edges) {
      if (placed == n) return;
      if (e.i == e.j || e.i < 0 || e.j < 0 || static_cast<std::size_t>(std::max(e.i, e.j)) >= n) {
        continue;
      }
      if (degree[e.i] >= 2 || degree[e.j] >= 2) continue;
      const bool joins = components.find(e.i) != components.find(e.j);
      if (!joins && placed != n - 1) continue;
      adj[e.i][degree[e.i]++] = e.j;
      adj[e.j][degree[e.j]++] = e.i;
      components.unite(e.i, e.j);
      ++placed;
      if (accepted) accepted->push_back(e);
    }
  };
  scan(spatial);
  if (placed < n) scan(full);
  if (placed < n) {
    throw Error(ErrorCode::kPrecondition,
                "candidate edges do not admit a Hamiltonian cycle; full list must cover all pairs");
  }

  Tour tour;
  tour.order.reserve(n);
  int prev = 0;
  int cur = std::min(adj[0][0], adj[0][1]);
  tour.order.push_back(0);
  while (cur != 0) {
    tour.order.push_back(cur);
    const int nxt = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
    prev = cur;
    cur = nxt;
  }
  return tour;
}

Tour decode(const TspInstance& inst, const PredictionSet& preds, DecodeOptions options,
            DecodeTrace* trace) {
  const ScoreMatrix scores = score_matrix(inst, preds);
  ProbabilityMatrix probs = probability_matrix(scores);
  const std::size_t m = std::clamp<std::size_t>(options.m_spatial, 1, inst.size() - 1);
  const CandidateLists lists = candidate_edges(inst, probs, m, options.sym);
  std::vector<EdgeCandidate> accepted;
  Tour tour = greedy_construct(inst.size(), lists.spatial, lists.full,
                               trace ? &accepted : nullptr);
  if (trace) {
    trace->probs = std::move(probs);
    trace->accepted = std::move(accepted);
  }
  return tour;
}

void write_decode_trace(std::ostream& out, const DecodeTrace& trace) {
  const std::size_t n = trace.probs.p.size();
  out << "tau " << format_double(trace.probs.tau) << '\n' << "n " << n << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out << (j ? " " : "") << format_double(trace.probs.p(i, j));
    }
    out << '\n';
  }
  out << "edges " << trace.accepted.size() << '\n';
  for (const auto& e : trace.accepted) {
    out << e.i << ' ' << e.j << ' ' << format_double(e.score) << '\n';
  }
}

}  // namespace nodetsp
