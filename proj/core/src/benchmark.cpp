#include "nodetsp/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <thread>

#include "nodetsp/error.hpp"
#include "nodetsp/exact.hpp"
#include "nodetsp/local_search.hpp"

namespace nodetsp {
namespace {

using clock_type = std::chrono::steady_clock;

bool is_recordable_failure(ErrorCode code) {
  return code == ErrorCode::kAdapter || code == ErrorCode::kProtocol ||
         code == ErrorCode::kIncompletePredictions;
}

void check_preconditions(const std::vector<LabeledInstance>& instances, const RunConfig& config) {
  if (config.k == 0) throw Error(ErrorCode::kPrecondition, "k must be >= 1");
  for (const auto& item : instances) {
    const auto& inst = item.instance;
    if (inst.size() < config.k + 1) {
      throw Error(ErrorCode::kInsufficientCandidates,
                  "instance " + inst.id() + " has " + std::to_string(inst.size()) +
                      " nodes, too few for k=" + std::to_string(config.k));
    }
    if (config.baseline == BaselineKind::kHeldKarp && inst.size() > kHeldKarpMaxNodes) {
      throw Error(ErrorCode::kSizeCap, "held-karp baseline needs n <= " +
                                           std::to_string(kHeldKarpMaxNodes) + "; instance " +
                                           inst.id() + " has " + std::to_string(inst.size()));
    }
    if (config.baseline == BaselineKind::kReference) {
      if (!item.reference) {
        throw Error(ErrorCode::kPrecondition,
                    "reference baseline requested but instance " + inst.id() + " has no tour");
      }
      require_valid_tour(inst, *item.reference);
    }
  }
}

RunRecord run_one(const LabeledInstance& item, const Predictor& predictor, const RunConfig& config,
                  const std::string& method) {
  const TspInstance& inst = item.instance;
  RunRecord rec;
  rec.instance_id = inst.id();
  rec.method = method;
  rec.n = inst.size();
  rec.k = config.k;
  rec.m_spatial = config.m_spatial;
  rec.two_opt = config.use_two_opt;
  rec.predictor = predictor.spec().label();

  rec.baseline_length = config.baseline == BaselineKind::kHeldKarp
                            ? held_karp(inst).length
                            : tour_length(inst, *item.reference);

  const auto start = clock_type::now();
  try {
    SolveOutcome outcome = solve_instance(item, predictor, config);
    if (config.archive_dir) {
      write_prediction_csv(*config.archive_dir / (inst.id() + ".pred.csv"),
                           to_prediction_rows(outcome.predictions));
    }
    Tour tour = std::move(outcome.tour);
    rec.length = tour_length(inst, tour);
    rec.tour = std::move(tour);
    rec.ok = true;
  } catch (const Error& e) {
    if (!is_recordable_failure(e.code())) throw;
    rec.ok = false;
    rec.error = e.what();
  }
  rec.wall_seconds = std::chrono::duration<double>(clock_type::now() - start).count();
  if (rec.ok) rec.gap = gap_percent(*rec.baseline_length, rec.length);
  return rec;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

SolveOutcome solve_instance(const LabeledInstance& item, const Predictor& predictor,
                            const RunConfig& config) {
  const TspInstance& inst = item.instance;
  const FeatureTable table = encode_inference(inst, config.k);
  SolveOutcome outcome;
  outcome.predictions = predictor.predict(table, item.reference, inst.id());
  outcome.tour = decode(inst, outcome.predictions, DecodeOptions{config.m_spatial});
  if (config.use_two_opt) {
    const auto limit = config.two_opt_time_limit ? config.two_opt_time_limit
                                                 : default_two_opt_time_limit(inst.size());
    outcome.tour = two_opt(inst, std::move(outcome.tour), limit);
  }
  return outcome;
}

double gap_percent(double baseline, double achieved) {
  if (!(baseline > 0.0)) {
    throw Error(ErrorCode::kInvalidBaseline, "baseline length must be positive");
  }
  return 100.0 * (achieved - baseline) / baseline;
}

void BenchmarkReport::aggregate() {
  count = 0;
  failures = 0;
  double length_sum = 0.0;
  double gap_sum = 0.0;
  std::size_t gaps = 0;
  for (const auto& rec : records) {
    if (!rec.ok) {
      ++failures;
      continue;
    }
    ++count;
    length_sum += rec.length;
    if (rec.gap) {
      gap_sum += *rec.gap;
      ++gaps;
    }
  }
  mean_length = count ? length_sum / static_cast<double>(count) : 0.0;
  mean_gap = gaps ? std::optional<double>(gap_sum / static_cast<double>(gaps)) : std::nullopt;
}

BenchmarkReport run_benchmark(const std::vector<LabeledInstance>& instances,
                              const Predictor& predictor, const RunConfig& config) {
  check_preconditions(instances, config);
  if (config.archive_dir) std::filesystem::create_directories(*config.archive_dir);
  const std::string method =
      !config.method.empty() ? config.method
                             : predictor.spec().label() + (config.use_two_opt ? "+2opt" : "");

  BenchmarkReport report;
  report.records.resize(instances.size());
  const std::size_t workers =
      std::clamp<std::size_t>(config.workers, 1, std::max<std::size_t>(instances.size(), 1));

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_lock;
  auto work = [&] {
    for (std::size_t idx; (idx = next.fetch_add(1)) < instances.size();) {
      try {
        report.records[idx] = run_one(instances[idx], predictor, config, method);
      } catch (...) {
        std::lock_guard lock(error_lock);
        if (!first_error) first_error = std::current_exception();
        next = instances.size();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (first_error) std::rethrow_exception(first_error);
  report.aggregate();
  return report;
}

void write_report_csv(std::ostream& out, const BenchmarkReport& report) {
  out << "instance_id,method,n,status,length,baseline_length,gap_percent,wall_seconds,k,"
         "m_spatial,two_opt,predictor,error\n";
  out << std::setprecision(17);
  for (const auto& r : report.records) {
    out << csv_field(r.instance_id) << ',' << csv_field(r.method) << ',' << r.n << ','
        << (r.ok ? "ok" : "failed") << ',';
    if (r.ok) out << r.length;
    out << ',';
    if (r.baseline_length) out << *r.baseline_length;
    out << ',';
    if (r.gap) out << *r.gap;
    out << ',' << r.wall_seconds << ',' << r.k << ',' << r.m_spatial << ','
        << (r.two_opt ? 1 : 0) << ',' << r.predictor << ',' << csv_field(r.error) << '\n';
  }
}

void write_report_csv(const std::filesystem::path& path, const BenchmarkReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  write_report_csv(out, report);
}

void write_summary(std::ostream& out, const BenchmarkReport& report) {
  const std::string method = report.records.empty() ? "-" : report.records.front().method;
  out << std::fixed << std::setprecision(2);
  out << std::left << std::setw(20) << "method" << std::right << std::setw(10) << "length"
      << std::setw(10) << "gap(%)" << std::setw(10) << "gap>=0" << std::setw(12) << "adapt(s)"
      << std::setw(8) << "data" << std::setw(8) << "count" << std::setw(8) << "failed" << '\n';
  out << std::left << std::setw(20) << method << std::right << std::setw(10)
      << report.mean_length;
  if (report.mean_gap) {
    out << std::setw(10) << *report.mean_gap << std::setw(10) << std::max(0.0, *report.mean_gap);
  } else {
    out << std::setw(10) << "n/a" << std::setw(10) << "n/a";
  }
  if (report.adaptation_seconds) {
    out << std::setw(12) << *report.adaptation_seconds;
  } else {
    out << std::setw(12) << "n/a";
  }
  if (report.training_samples) {
    out << std::setw(8) << *report.training_samples;
  } else {
    out << std::setw(8) << "n/a";
  }
  out << std::setw(8) << report.count << std::setw(8) << report.failures << '\n';
  out.unsetf(std::ios::floatfield);
}

std::vector<SweepPoint> sweep_k(const LabeledInstance& train,
                                const std::vector<LabeledInstance>& eval,
                                const PredictorSpec& predictor_template,
                                std::span<const std::size_t> k_values, RunConfig config) {
  if (eval.empty()) throw Error(ErrorCode::kPrecondition, "sweep_k needs a non-empty eval set");
  if (!train.reference) {
    throw Error(ErrorCode::kPrecondition, "sweep_k training sample needs a reference tour");
  }
  std::vector<SweepPoint> points;
  for (std::size_t k : k_values) {
    if (k == 0) throw Error(ErrorCode::kPrecondition, "k values must be >= 1");
    SweepPoint point;
    point.k = k;
    const auto start = clock_type::now();
    const Predictor predictor =
        fit(predictor_template, encode_training(train.instance, *train.reference, k));
    point.adaptation_seconds = std::chrono::duration<double>(clock_type::now() - start).count();

    RunConfig at_k = config;
    at_k.k = k;
    if (config.archive_dir) at_k.archive_dir = *config.archive_dir / ("k" + std::to_string(k));
    const BenchmarkReport report = run_benchmark(eval, predictor, at_k);
    point.mean_gap = report.mean_gap;
    point.instances = report.count;
    point.failures = report.failures;
    points.push_back(point);
  }
  return points;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
  out << "k,mean_gap_percent,instances\n" << std::setprecision(17);
  for (const auto& p : points) {
    out << p.k << ',';
    if (p.mean_gap) out << *p.mean_gap;
    out << ',' << p.instances << '\n';
  }
}

}  // namespace nodetsp
