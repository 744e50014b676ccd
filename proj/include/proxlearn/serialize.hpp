#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "proxlearn/admm.hpp"
#include "proxlearn/experiments.hpp"
#include "proxlearn/shrinkage_spline.hpp"
#include "proxlearn/signal_model.hpp"

namespace proxlearn {

using json = nlohmann::json;

struct TrainingMeta {
  double gamma = 0.0;
  int iters = 0;
  int K = 0;
  double mu = 0.0;
  std::uint64_t seed = 0;
  std::string mode;  // "constrained" | "unconstrained"
};

// Shrinkage spline plus optional training/scaling metadata, the on-disk form.
struct SplineArtifact {
  ShrinkageSpline spline;
  std::optional<double> trained_sigma2;
  std::optional<TrainingMeta> meta;
  std::optional<double> scale_lambda;

  bool constrained() const { return meta && meta->mode == "constrained"; }
};

std::string model_name(const LevyModel& model);
LevyModel model_from_json(const json& j);

json batch_to_json(const SignalBatch& batch);
SignalBatch batch_from_json(const json& j);

json spline_artifact_to_json(const SplineArtifact& artifact);
SplineArtifact spline_artifact_from_json(const json& j);

json trace_to_json(const AdmmTrace& trace);

json report_to_json(const ExperimentReport& report);

// Tidy CSV: sigma2, estimator, signal_idx, delta_snr_db.
std::string report_to_csv(const ExperimentReport& report);

// Columns u, phi, phi_prime.
std::string penalty_to_csv(const PenaltyCurve& curve);

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// Stable content hash of a spline, used for report provenance.
std::string spline_fingerprint(const ShrinkageSpline& spline);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

// manifest.json in `dir` listing each file's size and fnv1a64 hash.
void write_manifest(const std::filesystem::path& dir,
                    const std::vector<std::string>& filenames);

}  // namespace proxlearn
