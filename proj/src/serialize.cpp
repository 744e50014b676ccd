#include "proxlearn/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace proxlearn {

std::string model_name(const LevyModel& model) {
  return model.kind == LevyKind::BrownianMotion ? "brownian-motion"
                                                : "compound-poisson";
}

LevyModel model_from_json(const json& j) {
  LevyModel model;
  const std::string name = j.at("model").get<std::string>();
  if (name == "brownian-motion") {
    model.kind = LevyKind::BrownianMotion;
  } else if (name == "compound-poisson") {
    model.kind = LevyKind::CompoundPoisson;
    model.poisson_rate = j.at("lambda").get<double>();
  } else {
    throw std::invalid_argument("unknown model name: " + name);
  }
  return model;
}

json batch_to_json(const SignalBatch& batch) {
  json j;
  j["model"] = model_name(batch.model);
  if (batch.model.kind == LevyKind::CompoundPoisson)
    j["lambda"] = batch.model.poisson_rate;
  j["n"] = batch.length();
  j["sigma2"] = batch.noise_variance;
  j["seed"] = batch.seed;
  j["clean"] = batch.clean;
  j["noisy"] = batch.noisy;
  return j;
}

SignalBatch batch_from_json(const json& j) {
  SignalBatch batch;
  batch.model = model_from_json(j);
  batch.noise_variance = j.at("sigma2").get<double>();
  batch.seed = j.at("seed").get<std::uint64_t>();
  batch.clean = j.at("clean").get<std::vector<std::vector<double>>>();
  batch.noisy = j.at("noisy").get<std::vector<std::vector<double>>>();
  if (batch.clean.size() != batch.noisy.size())
    throw std::invalid_argument("batch: clean/noisy count mismatch");
  const std::size_t n = j.at("n").get<std::size_t>();
  for (std::size_t s = 0; s < batch.clean.size(); ++s)
    if (batch.clean[s].size() != n || batch.noisy[s].size() != n)
      throw std::invalid_argument("batch: signal length mismatch");
  return batch;
}

namespace {

std::string mode_name(SplineMode mode) {
  return mode == SplineMode::General ? "general" : "antisymmetric";
}

SplineMode mode_from_name(const std::string& name) {
  if (name == "general") return SplineMode::General;
  if (name == "antisymmetric") return SplineMode::Antisymmetric;
  throw std::invalid_argument("unknown spline mode: " + name);
}

}  // namespace

json spline_artifact_to_json(const SplineArtifact& artifact) {
  const ShrinkageSpline& s = artifact.spline;
  json j;
  j["kernel_order"] = s.kernel_order();
  j["delta"] = s.delta();
  j["m_half"] = s.m_half();
  j["mode"] = mode_name(s.mode());
  j["coeffs"] = s.coeffs();
  if (artifact.trained_sigma2)
    j["trained_sigma2"] = *artifact.trained_sigma2;
  if (artifact.meta) {
    j["training_meta"] = {{"gamma", artifact.meta->gamma},
                          {"iters", artifact.meta->iters},
                          {"K", artifact.meta->K},
                          {"mu", artifact.meta->mu},
                          {"seed", artifact.meta->seed},
                          {"mode", artifact.meta->mode}};
  }
  if (artifact.scale_lambda) j["scale_lambda"] = *artifact.scale_lambda;
  return j;
}

SplineArtifact spline_artifact_from_json(const json& j) {
  ShrinkageSpline spline(j.at("kernel_order").get<int>(),
                         j.at("delta").get<double>(),
                         j.at("m_half").get<int>(),
                         mode_from_name(j.at("mode").get<std::string>()),
                         j.at("coeffs").get<std::vector<double>>());
  SplineArtifact artifact{std::move(spline), std::nullopt, std::nullopt,
                          std::nullopt};
  if (j.contains("trained_sigma2") && !j["trained_sigma2"].is_null())
    artifact.trained_sigma2 = j["trained_sigma2"].get<double>();
  if (j.contains("training_meta") && !j["training_meta"].is_null()) {
    const json& m = j["training_meta"];
    artifact.meta = TrainingMeta{
        m.at("gamma").get<double>(),        m.at("iters").get<int>(),
        m.at("K").get<int>(),               m.at("mu").get<double>(),
        m.at("seed").get<std::uint64_t>(),  m.at("mode").get<std::string>()};
  }
  if (j.contains("scale_lambda") && !j["scale_lambda"].is_null())
    artifact.scale_lambda = j["scale_lambda"].get<double>();
  return artifact;
}

json trace_to_json(const AdmmTrace& trace) {
  json j;
  j["x_final"] = trace.x_final;
  if (!trace.cost_per_iter.empty()) j["cost_per_iter"] = trace.cost_per_iter;
  return j;
}

json report_to_json(const ExperimentReport& report) {
  json j;
  j["model"] = model_name(report.model);
  if (report.model.kind == LevyKind::CompoundPoisson)
    j["lambda"] = report.model.poisson_rate;
  j["n"] = report.signal_length;
  j["seed"] = report.seed;
  j["wall_time_s"] = report.wall_time_s;
  j["cells"] = json::array();
  for (const ReportCell& c : report.cells) {
    j["cells"].push_back(
        {{"sigma2", c.sigma2},
         {"estimator", c.estimator},
         {"mean_db", c.mean_db},
         {"std_db", c.std_db},
         {"per_signal_db", c.per_signal_db},
         {"provenance",
          {{"train_seed", c.provenance.train_seed},
           {"test_seed", c.provenance.test_seed},
           {"spline_hash", c.provenance.spline_hash},
           {"params", c.provenance.params}}}});
  }
  return j;
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "sigma2,estimator,signal_idx,delta_snr_db\n";
  for (const ReportCell& c : report.cells)
    for (std::size_t s = 0; s < c.per_signal_db.size(); ++s)
      out << c.sigma2 << ',' << c.estimator << ',' << s << ','
          << c.per_signal_db[s] << '\n';
  return out.str();
}

std::string penalty_to_csv(const PenaltyCurve& curve) {
  std::ostringstream out;
  out.precision(17);
  out << "u,phi,phi_prime\n";
  for (std::size_t i = 0; i < curve.u_grid.size(); ++i)
    out << curve.u_grid[i] << ',' << curve.phi_values[i] << ','
        << curve.phi_prime_values[i] << '\n';
  return out.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string fnv1a64_hex(std::string_view bytes) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::string spline_fingerprint(const ShrinkageSpline& spline) {
  const SplineArtifact artifact{spline, std::nullopt, std::nullopt,
                                std::nullopt};
  return fnv1a64_hex(spline_artifact_to_json(artifact).dump());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_manifest(const std::filesystem::path& dir,
                    const std::vector<std::string>& filenames) {
  json files = json::array();
  for (const std::string& name : filenames) {
    const std::string bytes = read_text_file(dir / name);
    files.push_back({{"name", name},
                     {"bytes", bytes.size()},
                     {"fnv1a64", fnv1a64_hex(bytes)}});
  }
  json manifest;
  manifest["files"] = files;
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace proxlearn
