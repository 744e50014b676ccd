#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "proxlearn/serialize.hpp"

using namespace proxlearn;

TEST_CASE("signal batch round trip") {
  const LevyModel model{LevyKind::CompoundPoisson, 0.6};
  const SignalBatch batch = make_batch(model, 25, 3, 1.3, 55);
  const json j = batch_to_json(batch);
  CHECK(j.at("model") == "compound-poisson");
  CHECK(j.at("lambda") == 0.6);
  CHECK(j.at("n") == 25);

  const SignalBatch back = batch_from_json(j);
  CHECK(back.clean == batch.clean);
  CHECK(back.noisy == batch.noisy);
  CHECK(back.noise_variance == batch.noise_variance);
  CHECK(back.seed == batch.seed);

  // serialization is byte-stable
  CHECK(batch_to_json(back).dump() == j.dump());
}

TEST_CASE("malformed batches are rejected") {
  const SignalBatch batch =
      make_batch({LevyKind::BrownianMotion, 0.0}, 10, 2, 1.0, 1);
  json j = batch_to_json(batch);
  j["noisy"].erase(1);
  CHECK_THROWS_AS(batch_from_json(j), std::invalid_argument);
}

TEST_CASE("spline artifact round trip") {
  SplineArtifact artifact{
      soft_threshold_spline(3, 0.5, 12, 1.0, SplineMode::Antisymmetric),
      1.0,
      TrainingMeta{2e-4, 1000, 10, 2.0, 42, "constrained"},
      std::nullopt};
  const json j = spline_artifact_to_json(artifact);
  const SplineArtifact back = spline_artifact_from_json(j);
  CHECK(back.spline.coeffs() == artifact.spline.coeffs());
  CHECK(back.spline.mode() == SplineMode::Antisymmetric);
  CHECK(back.spline.delta() == 0.5);
  CHECK(back.trained_sigma2 == 1.0);
  REQUIRE(back.meta.has_value());
  CHECK(back.meta->mode == "constrained");
  CHECK(back.constrained());
  CHECK_FALSE(back.scale_lambda.has_value());

  // scale_lambda survives
  SplineArtifact scaled = artifact;
  scaled.scale_lambda = 3.16;
  const SplineArtifact back2 =
      spline_artifact_from_json(spline_artifact_to_json(scaled));
  CHECK(back2.scale_lambda == 3.16);
}

TEST_CASE("penalty csv format") {
  PenaltyCurve curve;
  curve.u_grid = {-1.0, 0.0, 1.0};
  curve.phi_values = {1.0, 0.0, 1.0};
  curve.phi_prime_values = {-1.0, 0.0, 1.0};
  const std::string csv = penalty_to_csv(curve);
  CHECK(csv.rfind("u,phi,phi_prime\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("fnv1a64 hashing") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64_hex("hello") == fnv1a64_hex("hello"));
  CHECK(fnv1a64_hex("hello") != fnv1a64_hex("hellp"));
  CHECK(fnv1a64_hex("x").size() == 16);
}

TEST_CASE("manifest lists hashes of written files") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "proxlearn_manifest_test";
  fs::create_directories(dir);
  write_text_file(dir / "a.txt", "alpha");
  write_text_file(dir / "b.txt", "beta");
  write_manifest(dir, {"a.txt", "b.txt"});

  const json manifest = json::parse(read_text_file(dir / "manifest.json"));
  REQUIRE(manifest.at("files").size() == 2);
  CHECK(manifest["files"][0]["name"] == "a.txt");
  CHECK(manifest["files"][0]["bytes"] == 5);
  CHECK(manifest["files"][0]["fnv1a64"] == fnv1a64_hex("alpha"));
  fs::remove_all(dir);
}

TEST_CASE("trace export") {
  AdmmTrace trace;
  trace.x_final = {1.0, 2.0};
  json j = trace_to_json(trace);
  CHECK(j.contains("x_final"));
  CHECK_FALSE(j.contains("cost_per_iter"));
  trace.cost_per_iter = {3.0, 2.0, 1.0};
  j = trace_to_json(trace);
  CHECK(j.at("cost_per_iter").size() == 3);
}
