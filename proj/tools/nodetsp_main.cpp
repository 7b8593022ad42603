// nodetsp: command-line front end for instance generation, decoding,
// benchmarking and the neighbor-count sweep.
//
// Exit codes: 0 success, 1 pipeline error (including per-instance adapter
// failures in bench), 2 usage error. Errors are printed to stderr as one JSON
// object per line.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <thread>

#include "nodetsp/benchmark.hpp"
#include "nodetsp/decoding.hpp"
#include "nodetsp/error.hpp"
#include "nodetsp/exact.hpp"
#include "nodetsp/instance_io.hpp"
#include "nodetsp/local_search.hpp"

namespace fs = std::filesystem;
using namespace nodetsp;

namespace {

constexpr int kExitPipeline = 1;
constexpr int kExitUsage = 2;

void report_error(std::string_view kind, const std::string& message) {
  nlohmann::json j{{"status", "error"}, {"kind", kind}, {"message", message}};
  std::cerr << j.dump() << '\n';
}

struct PipelineFlags {
  std::string instances;
  std::string predictor = "nearest";
  std::size_t k = kDefaultNeighborCount;
  std::size_t m_spatial = kDefaultSpatialNeighbors;
  bool two_opt = false;
  double time_limit = -1.0;  // seconds; < 0 means the per-size default
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::string train;         // instance file with a reference tour, for fitting
  std::string model;         // pre-fitted adapter model directory
  std::string adapter_dir;   // adapter working directory
  double adapter_timeout = 600.0;
  std::string archive;       // directory for prediction CSVs
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f, bool with_instances = true) {
  if (with_instances) {
    cmd->add_option("--instances", f.instances, "instance file or directory")->required();
  }
  cmd->add_option("--predictor", f.predictor, "oracle | nearest | cmd:<adapter> | replay:<dir>")
      ->capture_default_str();
  cmd->add_option("--k", f.k, "neighbors per feature row")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--m-spatial", f.m_spatial, "spatial k-NN edges per node")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--two-opt", f.two_opt, "apply 2-opt after decoding");
  cmd->add_option("--time-limit", f.time_limit, "2-opt time limit in seconds per instance");
  cmd->add_option("--workers", f.workers, "parallel instances")->capture_default_str();
  cmd->add_option("--train", f.train, "training instance file (first instance, needs a tour)");
  cmd->add_option("--model", f.model, "pre-fitted adapter model directory");
  cmd->add_option("--adapter-dir", f.adapter_dir, "adapter working directory");
  cmd->add_option("--adapter-timeout", f.adapter_timeout, "adapter timeout in seconds")
      ->capture_default_str();
  cmd->add_option("--archive", f.archive, "write <id>.pred.csv for every instance here");
}

LabeledInstance load_training_sample(const std::string& path) {
  auto items = read_instance_set(path);
  if (items.empty() || !items.front().reference) {
    throw Error(ErrorCode::kPrecondition, "training file " + path + " needs an instance with a tour");
  }
  return items.front();
}

PredictorSpec make_spec(const PipelineFlags& f) {
  PredictorSpec spec = PredictorSpec::parse(f.predictor);
  spec.external.timeout = std::chrono::seconds(static_cast<long>(f.adapter_timeout));
  if (!f.adapter_dir.empty()) spec.external.working_dir = f.adapter_dir;
  if (!f.model.empty()) spec.model_dir = fs::path(f.model);
  return spec;
}

struct FittedPredictor {
  Predictor predictor;
  std::optional<double> adaptation_seconds;
};

FittedPredictor make_predictor(const PipelineFlags& f) {
  PredictorSpec spec = make_spec(f);
  if (f.train.empty()) return {Predictor(std::move(spec)), std::nullopt};
  const LabeledInstance sample = load_training_sample(f.train);
  const auto start = std::chrono::steady_clock::now();
  Predictor fitted = fit(spec, encode_training(sample.instance, *sample.reference, f.k));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(fitted), secs};
}

RunConfig make_config(const PipelineFlags& f) {
  RunConfig config;
  config.k = f.k;
  config.m_spatial = f.m_spatial;
  config.use_two_opt = f.two_opt;
  if (f.time_limit >= 0.0) config.two_opt_time_limit = std::chrono::duration<double>(f.time_limit);
  config.workers = f.workers;
  if (!f.archive.empty()) config.archive_dir = fs::path(f.archive);
  return config;
}

BaselineKind parse_baseline(const std::string& text) {
  if (text == "ref") return BaselineKind::kReference;
  if (text == "held-karp") return BaselineKind::kHeldKarp;
  throw Error(ErrorCode::kPrecondition, "unknown baseline '" + text + "' (expected ref|held-karp)");
}

std::vector<std::size_t> parse_k_range(const std::string& text) {
  std::vector<std::size_t> ks;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto dash = part.find('-');
    try {
      if (dash == std::string::npos) {
        ks.push_back(std::stoul(part));
      } else {
        const std::size_t lo = std::stoul(part.substr(0, dash));
        const std::size_t hi = std::stoul(part.substr(dash + 1));
        for (std::size_t k = lo; k <= hi; ++k) ks.push_back(k);
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kPrecondition, "bad --k-range element '" + part + "'");
    }
  }
  if (ks.empty()) throw Error(ErrorCode::kPrecondition, "--k-range is empty");
  return ks;
}

// --- subcommands ---

struct GenerateFlags {
  std::size_t n = 50;
  std::size_t count = 1;
  std::uint64_t seed = 1;
  std::string out;
  std::string reference = "none";
  std::size_t restarts = 20;
};

int run_generate(const GenerateFlags& f) {
  if (f.reference != "none" && f.reference != "held-karp" && f.reference != "two-opt") {
    throw Error(ErrorCode::kPrecondition, "--reference must be none|held-karp|two-opt");
  }
  fs::create_directories(f.out);
  for (std::size_t i = 0; i < f.count; ++i) {
    // Per-instance seed: seed + i * golden-ratio increment (mod 2^64).
    const std::uint64_t seed = f.seed + i * 0x9E3779B97F4A7C15ULL;
    std::ostringstream id;
    id << "tsp" << f.n << "-s" << f.seed << "-" << std::setw(4) << std::setfill('0') << i;
    const TspInstance inst = generate_instance(f.n, seed, id.str());
    std::optional<Tour> tour;
    if (f.reference == "held-karp") tour = held_karp(inst).tour;
    if (f.reference == "two-opt") tour = multi_start_two_opt(inst, f.restarts, seed);
    write_instance(fs::path(f.out) / (id.str() + ".tsp"), inst, tour);
  }
  std::cout << "wrote " << f.count << " instance(s) to " << f.out << '\n';
  return 0;
}

int run_solve(const PipelineFlags& f, const std::string& out_path) {
  const auto items = read_instance_set(f.instances);
  const FittedPredictor fp = make_predictor(f);
  const RunConfig config = make_config(f);
  if (config.archive_dir) fs::create_directories(*config.archive_dir);

  std::ofstream out;
  if (!out_path.empty()) {
    out.open(out_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + out_path);
  }
  std::cout << std::setprecision(17);
  for (const auto& item : items) {
    const SolveOutcome outcome = solve_instance(item, fp.predictor, config);
    if (config.archive_dir) {
      write_prediction_csv(*config.archive_dir / (item.instance.id() + ".pred.csv"),
                           to_prediction_rows(outcome.predictions));
    }
    std::cout << item.instance.id() << ' ' << tour_length(item.instance, outcome.tour) << '\n';
    if (out) write_instance(out, item.instance, outcome.tour);
  }
  return 0;
}

int run_bench(const PipelineFlags& f, const std::string& baseline, const std::string& report_path) {
  const auto items = read_instance_set(f.instances);
  const FittedPredictor fp = make_predictor(f);
  RunConfig config = make_config(f);
  config.baseline = parse_baseline(baseline);
  BenchmarkReport report = run_benchmark(items, fp.predictor, config);
  report.adaptation_seconds = fp.adaptation_seconds;
  if (!f.train.empty()) report.training_samples = 1;
  if (!report_path.empty()) write_report_csv(fs::path(report_path), report);
  write_summary(std::cout, report);
  if (report.failures > 0) {
    report_error("adapter", std::to_string(report.failures) + " instance(s) failed; see report");
    return kExitPipeline;
  }
  return 0;
}

int run_sweep(const PipelineFlags& f, const std::string& k_range, const std::string& baseline,
              const std::string& out_path) {
  const LabeledInstance train = load_training_sample(f.train);
  const auto eval = read_instance_set(f.instances);
  RunConfig config = make_config(f);
  config.baseline = parse_baseline(baseline);
  const auto ks = parse_k_range(k_range);
  const auto points = sweep_k(train, eval, make_spec(f), ks, config);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + out_path);
    write_sweep_csv(out, points);
  }
  write_sweep_csv(std::cout, points);
  std::size_t failures = 0;
  for (const auto& p : points) failures += p.failures;
  return failures ? kExitPipeline : 0;
}

int run_exact(const std::string& instances, const std::string& out_path) {
  const auto items = read_instance_set(instances);
  std::ofstream out;
  if (!out_path.empty()) {
    out.open(out_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + out_path);
  }
  std::cout << std::setprecision(17);
  for (const auto& item : items) {
    const ExactSolution sol = held_karp(item.instance);
    std::cout << item.instance.id() << ' ' << sol.length << '\n';
    if (out) write_instance(out, item.instance, sol.tour);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nodetsp: next-node prediction decoding and benchmarking for Euclidean TSP"};
  app.require_subcommand(1);

  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "emit random unit-square instances");
  generate->add_option("--n", gen.n, "nodes per instance")->required()->check(CLI::Range(3, 1 << 20));
  generate->add_option("--count", gen.count, "number of instances")->capture_default_str();
  generate->add_option("--seed", gen.seed, "base seed")->capture_default_str();
  generate->add_option("--out", gen.out, "output directory")->required();
  generate->add_option("--reference", gen.reference, "attach tours: none | held-karp | two-opt")
      ->capture_default_str();
  generate->add_option("--restarts", gen.restarts, "two-opt reference restarts")->capture_default_str();

  PipelineFlags solve_flags;
  std::string solve_out;
  auto* solve = app.add_subcommand("solve", "decode tours for a set of instances");
  add_pipeline_flags(solve, solve_flags);
  solve->add_option("--out", solve_out, "write instances with tours (canonical format)");

  PipelineFlags bench_flags;
  std::string bench_baseline = "ref";
  std::string bench_report;
  auto* bench = app.add_subcommand("bench", "benchmark against reference tours or Held-Karp");
  add_pipeline_flags(bench, bench_flags);
  bench->add_option("--baseline", bench_baseline, "ref | held-karp")->capture_default_str();
  bench->add_option("--report", bench_report, "report CSV path");

  PipelineFlags sweep_flags;
  std::string sweep_eval, sweep_range = "1-40", sweep_baseline = "ref", sweep_out;
  auto* sweep = app.add_subcommand("sweep-k", "mean gap per neighbor count");
  add_pipeline_flags(sweep, sweep_flags, false);
  sweep->add_option("--eval", sweep_eval, "evaluation instance file or directory")->required();
  sweep->add_option("--k-range", sweep_range, "e.g. 1-40 or 1,2,5,10")->capture_default_str();
  sweep->add_option("--baseline", sweep_baseline, "ref | held-karp")->capture_default_str();
  sweep->add_option("--out", sweep_out, "sweep CSV path");

  std::string exact_instances, exact_out;
  auto* exact = app.add_subcommand("exact", "Held-Karp optimal tours (n <= 16)");
  exact->add_option("--instances", exact_instances, "instance file or directory")->required();
  exact->add_option("--out", exact_out, "write instances with optimal tours");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", e.what());
    return kExitUsage;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*solve) return run_solve(solve_flags, solve_out);
    if (*bench) return run_bench(bench_flags, bench_baseline, bench_report);
    if (*sweep) {
      if (sweep_flags.train.empty()) {
        report_error("usage", "sweep-k requires --train");
        return kExitUsage;
      }
      sweep_flags.instances = sweep_eval;
      return run_sweep(sweep_flags, sweep_range, sweep_baseline, sweep_out);
    }
    if (*exact) return run_exact(exact_instances, exact_out);
  } catch (const Error& e) {
    report_error(to_string(e.code()), e.what());
    return kExitPipeline;
  } catch (const std::exception& e) {
    report_error("internal", e.what());
    return kExitPipeline;
  }
  return kExitUsage;
}
