// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nodetsp/benchmark.hpp"
#include "nodetsp/decoding.hpp"
#include "nodetsp/encoding.hpp"
#include "nodetsp/exact.hpp"
#include "nodetsp/geometry.hpp"
#include "nodetsp/local_search.hpp"
#include "nodetsp/predictor.hpp"

using namespace nodetsp;

namespace {

// Pinned tolerances.
constexpr double kNormalizationTol = 1e-9;
constexpr double kScaleTol = 1e-12;
constexpr double kDominanceTol = 1e-9;
constexpr double kGapExampleTol = 0.005;
constexpr double kMaxPostTwoOptGap = 5.0;
constexpr double kRoundTripSeconds = 60.0;
constexpr double kEffectivenessSeconds = 300.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

Tour shuffled(std::size_t n, std::mt19937_64& rng) {
  Tour t;
  t.order.resize(n);
  std::iota(t.order.begin(), t.order.end(), 0);
  std::shuffle(t.order.begin(), t.order.end(), rng);
  return t;
}

double brute_force_length(const TspInstance& inst) {
  std::vector<int> rest(inst.size() - 1);
  std::iota(rest.begin(), rest.end(), 1);
  double best = INFINITY;
  do {
    Tour t{{0}};
    t.order.insert(t.order.end(), rest.begin(), rest.end());
    best = std::min(best, tour_length(inst, t));
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

bool distinct_coordinates(const TspInstance& inst) {
  std::set<std::pair<double, double>> seen;
  for (const auto& p : inst.nodes()) seen.insert({p.x, p.y});
  return seen.size() == inst.size();
}

Outcome oracle_round_trip() {
  const auto start = Clock::now();
  Outcome out;
  std::mt19937_64 rng(101);
  std::size_t checked = 0, mismatches = 0;
  std::uint64_t seed = 10'000;
  for (std::size_t n : {10u, 50u, 100u}) {
    for (int t = 0; t < 100; ++t) {
      auto inst = generate_instance(n, seed++, "rt");
      if (!distinct_coordinates(inst)) continue;
      LabeledInstance item{inst, std::nullopt};
      RunConfig cfg;
      if (n == 10) {
        item.reference = held_karp(inst).tour;
      } else {
        item.reference = shuffled(n, rng);
        cfg.m_spatial = n - 1;
      }
      const auto outcome = solve_instance(item, Predictor(PredictorSpec::oracle()), cfg);
      const double gap = gap_percent(tour_length(inst, *item.reference), tour_length(inst, outcome.tour));
      ++checked;
      if (tour_edges(outcome.tour) != tour_edges(*item.reference) || gap != 0.0) ++mismatches;
    }
  }
  const double secs = seconds_since(start);
  out.pass = mismatches == 0 && checked == 300 && secs < kRoundTripSeconds;
  out.detail = std::to_string(checked) + " instances, " + std::to_string(mismatches) +
               " mismatches, " + std::to_string(secs) + " s";
  return out;
}

Outcome greedy_fuzz() {
  Outcome out;
  std::mt19937_64 rng(202);
  std::size_t failures = 0;
  const std::size_t cases = 10'000;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t n = 4 + rng() % 125;
    std::vector<EdgeCandidate> full;
    for (int i = 0; i < static_cast<int>(n); ++i)
      for (int j = i + 1; j < static_cast<int>(n); ++j) {
        // Mix continuous scores with heavy ties.
        const double s = c % 3 == 0 ? static_cast<double>(rng() % 4)
                                    : std::uniform_real_distribution<double>(0, 1)(rng);
        full.push_back({i, j, s});
      }
    std::sort(full.begin(), full.end(), [](const auto& a, const auto& b) {
      return a.score != b.score ? a.score > b.score : std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });
    std::vector<EdgeCandidate> spatial;
    const std::size_t take = rng() % (3 * n);
    for (std::size_t s = 0; s < take; ++s) spatial.push_back(full[rng() % full.size()]);
    try {
      const Tour t = greedy_construct(n, spatial, full);
      if (!validate_tour(TspInstance(std::vector<Point>(n, Point{})), t).valid()) ++failures;
    } catch (const std::exception&) {
      ++failures;
    }
  }
  out.pass = failures == 0;
  out.detail = std::to_string(cases) + " cases, " + std::to_string(failures) + " failures";
  return out;
}

Outcome probability_normalization() {
  Outcome out;
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(0, 1);
  double worst_sum = 0, worst_scale = 0;
  bool diagonal_ok = true;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 3 + rng() % 60;
    const auto inst = generate_instance(n, 30'000 + t);
    PredictionSet preds;
    for (std::size_t i = 0; i < n; ++i) preds.locations.push_back({u(rng), u(rng)});
    const auto p = probability_matrix(score_matrix(inst, preds));
    double sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (p.p(i, i) != 0.0) diagonal_ok = false;
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) sum += p.p(i, j);
    }
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));

    const double c = 0.05 + 0.9 * u(rng);
    std::vector<Point> nodes;
    PredictionSet scaled;
    for (const auto& q : inst.nodes()) nodes.push_back({q.x * c, q.y * c});
    for (const auto& q : preds.locations) scaled.locations.push_back({q.x * c, q.y * c});
    const auto ps = probability_matrix(score_matrix(TspInstance(nodes), scaled));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        worst_scale = std::max(worst_scale, std::abs(p.p(i, j) - ps.p(i, j)));
  }
  out.pass = worst_sum <= kNormalizationTol && diagonal_ok && worst_scale <= kScaleTol;
  std::ostringstream d;
  d << "max |sum-1| = " << worst_sum << ", diagonal " << (diagonal_ok ? "zero" : "NONZERO")
    << ", max scale drift = " << worst_scale;
  out.detail = d.str();
  return out;
}

Outcome exact_dominance() {
  Outcome out;
  std::mt19937_64 rng(404);
  std::size_t violations = 0, bf_mismatch = 0, bf_checked = 0, pipelines = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 6 + rng() % 7;
    const auto inst = generate_instance(n, 40'000 + t);
    const auto opt = held_karp(inst);
    if (n <= 9) {
      ++bf_checked;
      if (brute_force_length(inst) != opt.length) ++bf_mismatch;
    }
    const LabeledInstance item{inst, opt.tour};
    for (const auto& spec : {PredictorSpec::oracle(), PredictorSpec::nearest()}) {
      for (bool two : {false, true}) {
        RunConfig cfg;
        cfg.k = std::min<std::size_t>(kDefaultNeighborCount, n - 1);
        cfg.use_two_opt = two;
        const auto outcome = solve_instance(item, Predictor(spec), cfg);
        ++pipelines;
        if (!validate_tour(inst, outcome.tour).valid() ||
            tour_length(inst, outcome.tour) < opt.length - kDominanceTol)
          ++violations;
      }
    }
  }
  out.pass = violations == 0 && bf_mismatch == 0 && bf_checked > 0;
  out.detail = std::to_string(pipelines) + " pipeline tours, " + std::to_string(violations) +
               " below optimum; brute force " + std::to_string(bf_checked) + " checked, " +
               std::to_string(bf_mismatch) + " mismatches";
  return out;
}

Outcome two_opt_contract() {
  Outcome out;
  std::mt19937_64 rng(505);
  std::size_t worsened = 0, not_idempotent = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 3 + rng() % 50;
    const auto inst = generate_instance(n, 50'000 + t);
    const Tour start = shuffled(n, rng);
    const Tour once = two_opt(inst, start);
    if (!validate_tour(inst, once).valid() || tour_length(inst, once) > tour_length(inst, start))
      ++worsened;
    if (two_opt(inst, once) != once) ++not_idempotent;
  }
  const TspInstance square({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  const Tour crossing{{0, 2, 1, 3}};
  const bool crossing_ok = tour_length(square, crossing) == 2.0 + 2.0 * std::sqrt(2.0) &&
                           tour_length(square, two_opt(square, crossing)) == 4.0;
  out.pass = worsened == 0 && not_idempotent == 0 && crossing_ok;
  out.detail = "1000 pairs, " + std::to_string(worsened) + " worsened, " +
               std::to_string(not_idempotent) + " not idempotent, crossing square " +
               (crossing_ok ? "-> 4.0" : "WRONG");
  return out;
}

Outcome gap_arithmetic() {
  Outcome out;
  const double g = gap_percent(5.65, 6.40);
  out.pass = std::abs(g - 13.27) <= kGapExampleTol;
  std::ostringstream d;
  d << "gap_percent(5.65, 6.40) = " << g;
  out.detail = d.str();
  return out;
}

Outcome two_opt_effectiveness() {
  const auto start = Clock::now();
  Outcome out;
  std::vector<LabeledInstance> set;
  for (int t = 0; t < 30; ++t) set.push_back({generate_instance(12, 60'000 + t, "e" + std::to_string(t)), std::nullopt});
  RunConfig cfg;
  cfg.baseline = BaselineKind::kHeldKarp;
  cfg.workers = 4;
  const Predictor nearest(PredictorSpec::nearest());
  const auto plain = run_benchmark(set, nearest, cfg);
  cfg.use_two_opt = true;
  const auto improved = run_benchmark(set, nearest, cfg);
  const double secs = seconds_since(start);
  out.pass = plain.count == 30 && improved.count == 30 && *improved.mean_gap < *plain.mean_gap &&
             *improved.mean_gap <= kMaxPostTwoOptGap && secs < kEffectivenessSeconds;
  std::ostringstream d;
  d << "mean gap " << *plain.mean_gap << "% -> " << *improved.mean_gap << "% after 2-opt, "
    << secs << " s";
  out.detail = d.str();
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle-round-trip", oracle_round_trip},
      {"greedy-validity-fuzz", greedy_fuzz},
      {"probability-normalization", probability_normalization},
      {"exact-dominance", exact_dominance},
      {"two-opt-contract", two_opt_contract},
      {"gap-arithmetic", gap_arithmetic},
      {"two-opt-effectiveness", two_opt_effectiveness},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
