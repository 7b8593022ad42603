#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <random>

#include "nodetsp/predictor.hpp"
#include "test_support.hpp"

using namespace nodetsp;
namespace fs = std::filesystem;

namespace {

std::string stub(const std::string& mode = "") {
  std::string cmd = "sh " + std::string(NODETSP_TEST_DATA_DIR) + "/stub_adapter.sh";
  if (!mode.empty()) cmd += " " + mode;
  return cmd;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("nodetsp-predictor-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

PredictorSpec external(const std::string& mode, const fs::path& workdir) {
  auto spec = PredictorSpec::external_command(stub(mode));
  spec.external.working_dir = workdir;
  return spec;
}

}  // namespace

TEST(Predictor, OracleReturnsSuccessorCoordinates) {
  const auto inst = generate_instance(12, 3);
  std::mt19937_64 rng(3);
  const Tour ref = testkit::random_permutation(12, rng);
  const auto next = successors(ref);
  const auto preds = Predictor(PredictorSpec::oracle()).predict(encode_inference(inst), ref);
  ASSERT_EQ(preds.size(), 12u);
  for (int i = 0; i < 12; ++i) EXPECT_EQ(preds.locations[i], inst.node(next[i]));
}

TEST(Predictor, OracleNeedsReference) {
  EXPECT_ERROR_CODE(Predictor(PredictorSpec::oracle()).predict(encode_inference(testkit::corners(), 2)),
                    ErrorCode::kMissingContext);
}

TEST(Predictor, NearestReturnsFirstNeighbor) {
  const auto inst = generate_instance(15, 4);
  const auto table = encode_inference(inst, 3);
  const auto preds = Predictor(PredictorSpec::nearest()).predict(table);
  for (int i = 0; i < 15; ++i) {
    const auto want = testkit::sorted_candidates(inst, inst.node(i), {i}).front();
    EXPECT_EQ(preds.locations[i], inst.node(want));
  }
}

TEST(Predictor, PredictRejectsTrainingTable) {
  const auto table = encode_training(testkit::corners(), Tour{{0, 1, 2, 3}}, 2);
  EXPECT_ERROR_CODE(Predictor(PredictorSpec::nearest()).predict(table), ErrorCode::kPrecondition);
}

TEST(Predictor, FitRejectsInferenceTable) {
  EXPECT_ERROR_CODE(fit(PredictorSpec::nearest(), encode_inference(testkit::corners(), 2)),
                    ErrorCode::kPrecondition);
}

TEST(Predictor, SpecParsing) {
  EXPECT_EQ(PredictorSpec::parse("oracle").kind, PredictorKind::kOracle);
  EXPECT_EQ(PredictorSpec::parse("nearest").kind, PredictorKind::kNearest);
  const auto ext = PredictorSpec::parse("cmd:python adapter.py");
  EXPECT_EQ(ext.kind, PredictorKind::kExternal);
  EXPECT_EQ(ext.external.command, "python adapter.py");
  const auto rep = PredictorSpec::parse("replay:/tmp/preds");
  EXPECT_EQ(rep.kind, PredictorKind::kReplay);
  EXPECT_EQ(rep.replay_dir, fs::path("/tmp/preds"));
  EXPECT_ERROR_CODE(PredictorSpec::parse("magic"), ErrorCode::kPrecondition);
  EXPECT_ERROR_CODE(Predictor(PredictorSpec::external_command("")), ErrorCode::kPrecondition);
}

TEST(ExternalPredictor, TrainThenPredict) {
  const auto dir = scratch("ok");
  const auto inst = generate_instance(20, 6);
  std::mt19937_64 rng(6);
  const Tour ref = testkit::random_permutation(20, rng);
  const auto model = fit(external("", dir), encode_training(inst, ref), dir / "model");
  ASSERT_TRUE(model.spec().model_dir.has_value());
  EXPECT_TRUE(fs::exists(dir / "model" / "rows.txt"));
  const auto preds = model.predict(encode_inference(inst));
  for (int i = 0; i < 20; ++i) EXPECT_EQ(preds.locations[i], inst.node(i));
}

TEST(ExternalPredictor, RowsMergedById) {
  const auto dir = scratch("reverse");
  const auto inst = generate_instance(20, 7);
  auto spec = external("--reverse", dir);
  fs::create_directories(dir / "m");
  spec.model_dir = dir / "m";
  const auto preds = Predictor(spec).predict(encode_inference(inst));
  for (int i = 0; i < 20; ++i) EXPECT_EQ(preds.locations[i], inst.node(i));
}

TEST(ExternalPredictor, PredictWithoutModel) {
  EXPECT_ERROR_CODE(Predictor(external("", scratch("nomodel"))).predict(encode_inference(testkit::corners(), 2)),
                    ErrorCode::kMissingContext);
}

TEST(ExternalPredictor, FailuresAreAdapterErrors) {
  const auto inst = generate_instance(10, 8);
  const auto table = encode_inference(inst);
  for (const std::string mode : {"--fail", "--garbage", "--drop"}) {
    const auto dir = scratch("mode" + mode);
    auto spec = external(mode, dir);
    fs::create_directories(dir / "m");
    spec.model_dir = dir / "m";
    EXPECT_ERROR_CODE(Predictor(spec).predict(table), ErrorCode::kAdapter);
  }
  EXPECT_ERROR_CODE(fit(external("--fail", scratch("trainfail")),
                        encode_training(inst, Tour{{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}})),
                    ErrorCode::kAdapter);
}

TEST(ExternalPredictor, TimeoutKillsAdapter) {
  const auto dir = scratch("timeout");
  auto spec = external("--sleep", dir);
  spec.external.timeout = std::chrono::seconds(1);
  fs::create_directories(dir / "m");
  spec.model_dir = dir / "m";
  const auto start = std::chrono::steady_clock::now();
  try {
    Predictor(spec).predict(encode_inference(testkit::corners(), 2));
    ADD_FAILURE() << "expected a timeout";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAdapter);
    EXPECT_NE(std::string(e.what()).find("timed out"), std::string::npos);
  }
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(10));
}

TEST(ReplayPredictor, ReadsArchivedCsv) {
  const auto dir = scratch("replay");
  write_prediction_csv(dir / "sq.pred.csv", {{0, 0.5, 0.5}, {1, 0, 0}, {2, 1, 1}, {3, 0.25, 0}});
  const auto table = encode_inference(testkit::corners(), 2);
  const auto preds = Predictor(PredictorSpec::replay(dir)).predict(table, std::nullopt, "sq");
  EXPECT_EQ(preds.locations[3], (Point{0.25, 0}));
  EXPECT_ERROR_CODE(Predictor(PredictorSpec::replay(dir)).predict(table), ErrorCode::kMissingContext);
  EXPECT_ERROR_CODE(Predictor(PredictorSpec::replay(dir)).predict(table, std::nullopt, "absent"),
                    ErrorCode::kProtocol);
}
