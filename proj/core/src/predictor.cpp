#include "nodetsp/predictor.hpp"

#include <unistd.h>

#include <atomic>

#include "nodetsp/error.hpp"
#include "nodetsp/process.hpp"

namespace nodetsp {
namespace {

namespace fs = std::filesystem;

unsigned next_sequence() {
  static std::atomic<unsigned> counter{0};
  return counter.fetch_add(1);
}

fs::path resolve_workdir(const ExternalCommand& ext) {
  fs::path dir = ext.working_dir;
  if (dir.empty()) {
    dir = fs::temp_directory_path() / ("nodetsp-adapter-" + std::to_string(::getpid()));
  }
  fs::create_directories(dir);
  return fs::absolute(dir);
}

void run_adapter(const ExternalCommand& ext, const std::string& args, const fs::path& cwd,
                 const char* phase) {
  const std::string command = ext.command + " " + args;
  const ProcessResult result =
      run_shell(command, cwd, std::chrono::duration_cast<std::chrono::milliseconds>(ext.timeout));
  if (result.ok()) return;
  std::string why;
  if (result.timed_out) {
    why = "timed out after " + std::to_string(ext.timeout.count()) + " s";
  } else if (result.signal != 0) {
    why = "killed by signal " + std::to_string(result.signal);
  } else {
    why = "exit code " + std::to_string(result.exit_code);
  }
  throw Error(ErrorCode::kAdapter, std::string("adapter ") + phase + " failed (" + why +
                                       "): " + command + "\n" + result.output);
}

}  // namespace

PredictionSet to_prediction_set(const std::vector<PredictionRow>& rows) {
  PredictionSet preds;
  preds.locations.resize(rows.size());
  for (const auto& r : rows) preds.locations.at(r.row_id) = {r.pred_x, r.pred_y};
  return preds;
}

std::vector<PredictionRow> to_prediction_rows(const PredictionSet& preds) {
  std::vector<PredictionRow> rows;
  rows.reserve(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) {
    rows.push_back({static_cast<int>(i), preds.locations[i].x, preds.locations[i].y});
  }
  return rows;
}

PredictorSpec PredictorSpec::external_command(std::string command) {
  auto spec = of_kind(PredictorKind::kExternal);
  spec.external.command = std::move(command);
  return spec;
}

PredictorSpec PredictorSpec::replay(std::filesystem::path dir) {
  auto spec = of_kind(PredictorKind::kReplay);
  spec.replay_dir = std::move(dir);
  return spec;
}

PredictorSpec PredictorSpec::parse(const std::string& text) {
  if (text == "oracle") return oracle();
  if (text == "nearest") return nearest();
  if (text.rfind("cmd:", 0) == 0) return external_command(text.substr(4));
  if (text.rfind("replay:", 0) == 0) return replay(text.substr(7));
  throw Error(ErrorCode::kPrecondition,
              "unknown predictor '" + text + "' (expected oracle|nearest|cmd:...|replay:...)");
}

std::string PredictorSpec::label() const {
  switch (kind) {
    case PredictorKind::kOracle: return "oracle";
    case PredictorKind::kNearest: return "nearest";
    case PredictorKind::kExternal: return "external";
    case PredictorKind::kReplay: return "replay";
  }
  return "unknown";
}

Predictor::Predictor(PredictorSpec spec)
    : spec_(std::move(spec)), adapter_lock_(std::make_shared<std::mutex>()) {
  if (spec_.kind == PredictorKind::kExternal && spec_.external.command.empty()) {
    throw Error(ErrorCode::kPrecondition, "external predictor needs a non-empty command");
  }
}

PredictionSet Predictor::predict(const FeatureTable& inference,
                                 const std::optional<Tour>& reference,
                                 const std::string& instance_id) const {
  if (inference.mode != EncodingMode::kInference) {
    throw Error(ErrorCode::kPrecondition, "predict expects an inference-mode feature table");
  }
  const std::size_t n = inference.rows.size();
  PredictionSet preds;
  switch (spec_.kind) {
    case PredictorKind::kOracle: {
      if (!reference) {
        throw Error(ErrorCode::kMissingContext, "oracle predictor needs a reference tour");
      }
      if (reference->size() != n) {
        throw Error(ErrorCode::kInvalidTour, "reference tour does not match the feature table");
      }
      const std::vector<int> next = successors(*reference);
      preds.locations.reserve(n);
      for (std::size_t i = 0; i < n; ++i) preds.locations.push_back(inference.rows[next[i]].cur);
      return preds;
    }
    case PredictorKind::kNearest:
      preds.locations.reserve(n);
      for (const auto& row : inference.rows) {
        preds.locations.push_back(row.neighbors.front().location);
      }
      return preds;
    case PredictorKind::kExternal:
      return predict_external(inference);
    case PredictorKind::kReplay:
      if (instance_id.empty()) {
        throw Error(ErrorCode::kMissingContext, "replay predictor needs an instance id");
      }
      return to_prediction_set(
          read_prediction_csv(spec_.replay_dir / (instance_id + ".pred.csv"), n));
  }
  return preds;
}

PredictionSet Predictor::predict_external(const FeatureTable& inference) const {
  if (!spec_.model_dir) {
    throw Error(ErrorCode::kMissingContext,
                "external predictor has no model directory; call fit() or set model_dir");
  }
  std::lock_guard lock(*adapter_lock_);
  const fs::path cwd = resolve_workdir(spec_.external);
  const unsigned seq = next_sequence();
  const fs::path features = cwd / ("infer-" + std::to_string(seq) + ".csv");
  const fs::path out = cwd / ("pred-" + std::to_string(seq) + ".csv");
  write_feature_csv(features, inference);
  run_adapter(spec_.external,
              "predict --features " + shell_quote(features.string()) + " --model " +
                  shell_quote(fs::absolute(*spec_.model_dir).string()) + " --out " +
                  shell_quote(out.string()),
              cwd, "predict");
  PredictionSet preds;
  try {
    preds = to_prediction_set(read_prediction_csv(out, inference.rows.size()));
  } catch (const Error& e) {
    throw Error(ErrorCode::kAdapter, std::string("adapter produced a bad prediction csv: ") + e.what());
  }
  std::error_code ec;
  fs::remove(features, ec);
  fs::remove(out, ec);
  return preds;
}

Predictor fit(const PredictorSpec& spec, const FeatureTable& training,
              std::optional<std::filesystem::path> model_out) {
  if (training.mode != EncodingMode::kTraining) {
    throw Error(ErrorCode::kPrecondition, "fit expects a training-mode feature table");
  }
  if (spec.kind != PredictorKind::kExternal) return Predictor(spec);

  if (spec.external.command.empty()) {
    throw Error(ErrorCode::kPrecondition, "external predictor needs a non-empty command");
  }
  const fs::path cwd = resolve_workdir(spec.external);
  const unsigned seq = next_sequence();
  const fs::path features = cwd / ("train-" + std::to_string(seq) + ".csv");
  const fs::path model = fs::absolute(model_out.value_or(cwd / ("model-" + std::to_string(seq))));
  write_feature_csv(features, training);
  run_adapter(spec.external,
              "train --features " + shell_quote(features.string()) + " --model-out " +
                  shell_quote(model.string()),
              cwd, "train");
  if (!fs::exists(model)) {
    throw Error(ErrorCode::kAdapter, "adapter train succeeded but wrote no model at " + model.string());
  }
  PredictorSpec fitted = spec;
  fitted.model_dir = model;
  return Predictor(std::move(fitted));
}

}  // namespace nodetsp
