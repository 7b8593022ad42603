#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nodetsp/decoding.hpp"
#include "nodetsp/encoding.hpp"
#include "nodetsp/instance_io.hpp"
#include "nodetsp/predictor.hpp"

namespace nodetsp {

// Signed: 100 * (achieved - baseline) / baseline. Throws kInvalidBaseline
// unless baseline > 0.
double gap_percent(double baseline, double achieved);

enum class BaselineKind { kReference, kHeldKarp };

struct RunConfig {
  std::size_t k = kDefaultNeighborCount;
  std::size_t m_spatial = kDefaultSpatialNeighbors;
  bool use_two_opt = false;
  // nullopt: default_two_opt_time_limit(n) per instance.
  std::optional<std::chrono::duration<double>> two_opt_time_limit;
  BaselineKind baseline = BaselineKind::kReference;
  std::size_t workers = 1;
  // When set, every instance's predictions are written to
  // <archive_dir>/<instance id>.pred.csv for replay.
  std::optional<std::filesystem::path> archive_dir;
  std::string method;  // defaults to the predictor label (+ "+2opt")
};

struct SolveOutcome {
  Tour tour;
  PredictionSet predictions;
};

// The per-instance pipeline: encode at config.k, predict, decode with
// config.m_spatial, then 2-opt when config.use_two_opt.
SolveOutcome solve_instance(const LabeledInstance& item, const Predictor& predictor,
                            const RunConfig& config);

struct RunRecord {
  std::string instance_id;
  std::string method;
  std::size_t n = 0;
  bool ok = false;
  std::string error;  // set when !ok
  Tour tour;
  double length = 0.0;
  std::optional<double> baseline_length;
  std::optional<double> gap;  // percent, signed
  double wall_seconds = 0.0;  // encode + predict + decode (+ 2-opt)
  std::size_t k = 0;
  std::size_t m_spatial = 0;
  bool two_opt = false;
  std::string predictor;
};

struct BenchmarkReport {
  std::vector<RunRecord> records;
  std::size_t count = 0;     // successful records
  std::size_t failures = 0;
  double mean_length = 0.0;
  std::optional<double> mean_gap;
  // Echoed metadata for the summary table.
  std::optional<double> adaptation_seconds;
  std::optional<std::size_t> training_samples;

  // Recomputes count/failures/means from records, in record order.
  void aggregate();
};

/// Runs encode -> predict -> decode (-> 2-opt) on every instance and scores
/// it against the chosen baseline. Adapter failures are recorded per instance
/// and excluded from the aggregates; precondition violations throw.
BenchmarkReport run_benchmark(const std::vector<LabeledInstance>& instances,
                              const Predictor& predictor, const RunConfig& config);

// Header: instance_id,method,n,status,length,baseline_length,gap_percent,
//         wall_seconds,k,m_spatial,two_opt,predictor,error
void write_report_csv(std::ostream& out, const BenchmarkReport& report);
void write_report_csv(const std::filesystem::path& path, const BenchmarkReport& report);

// Human-readable table. Gaps are shown signed and clamped at zero.
void write_summary(std::ostream& out, const BenchmarkReport& report);

struct SweepPoint {
  std::size_t k = 0;
  std::optional<double> mean_gap;
  std::size_t instances = 0;
  std::size_t failures = 0;
  double adaptation_seconds = 0.0;
};

/// For every k: fit on the training sample encoded at k, benchmark the eval
/// set at the same k.
std::vector<SweepPoint> sweep_k(const LabeledInstance& train,
                                const std::vector<LabeledInstance>& eval,
                                const PredictorSpec& predictor_template,
                                std::span<const std::size_t> k_values, RunConfig config);

// Header: k,mean_gap_percent,instances
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);

}  // namespace nodetsp
