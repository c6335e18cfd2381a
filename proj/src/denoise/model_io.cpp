#include "mmdiff/denoise/model_io.hpp"

#include <cstdio>

#include "mmdiff/core/error.hpp"

namespace mmdiff::denoise {

namespace {

// Model files are inputs, so values round-trip at full precision.
std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

std::string join_full(const Vec& v) {
  std::string out;
  for (int i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_full(v[i]);
  }
  return out;
}

Vec vec_from_list(const std::vector<double>& values) {
  Vec out(static_cast<int>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    out[static_cast<int>(i)] = values[i];
  return out;
}

void parse_mixture_core(const Config& cfg, const std::string& section,
                        Vec& weights, Mat& means, double& sigma0) {
  weights = vec_from_list(cfg.get_double_list(section, "weights"));
  sigma0 = cfg.get_double(section, "sigma0");
  const int K = static_cast<int>(weights.size());
  if (K < 1) throw ConfigError("model: no components in " + section);
  const std::vector<double> first =
      cfg.get_double_list(section, "mean_0");
  means.resize(K, static_cast<int>(first.size()));
  for (int k = 0; k < K; ++k) {
    const std::vector<double> row =
        cfg.get_double_list(section, "mean_" + std::to_string(k));
    if (static_cast<int>(row.size()) != means.cols())
      throw ConfigError("model: inconsistent mean dimensions in " + section);
    for (int j = 0; j < means.cols(); ++j) means(k, j) = row[static_cast<std::size_t>(j)];
  }
}

void write_mixture_core(Config& cfg, const std::string& section,
                        const Vec& weights, const Mat& means, double sigma0) {
  cfg.set(section, "weights", join_full(weights));
  cfg.set(section, "sigma0", format_full(sigma0));
  for (int k = 0; k < means.rows(); ++k)
    cfg.set(section, "mean_" + std::to_string(k),
            join_full(means.row(k).transpose()));
}

}  // namespace

GaussianMixture parse_gaussian_mixture(const Config& cfg) {
  GaussianMixture model;
  parse_mixture_core(cfg, "gaussian_mixture", model.weights, model.means,
                     model.sigma0);
  model.validate();
  return model;
}

DiscreteTable parse_discrete_table(const Config& cfg) {
  DiscreteTable table;
  table.L = static_cast<int>(cfg.get_int("discrete_table", "length"));
  table.V = static_cast<int>(cfg.get_int("discrete_table", "vocab"));
  table.probs = vec_from_list(cfg.get_double_list("discrete_table", "probs"));
  table.validate();
  return table;
}

CoupledToyModel parse_coupled_toy(const Config& cfg) {
  CoupledToyModel model;
  parse_mixture_core(cfg, "coupled_toy", model.weights, model.means,
                     model.sigma0);
  model.L = static_cast<int>(cfg.get_int("coupled_toy", "length"));
  model.V = static_cast<int>(cfg.get_int("coupled_toy", "vocab"));
  model.component_position =
      static_cast<int>(cfg.get_int("coupled_toy", "component_position"));
  const int K = model.components();
  model.tables.assign(static_cast<std::size_t>(K),
                      Mat::Zero(model.L, model.V));
  for (int c = 0; c < K; ++c) {
    for (int p = 0; p < model.L; ++p) {
      const std::string key =
          "table_" + std::to_string(c) + "_" + std::to_string(p);
      if (p == model.component_position && !cfg.has("coupled_toy", key))
        continue;  // row is ignored by the model
      const std::vector<double> row = cfg.get_double_list("coupled_toy", key);
      if (static_cast<int>(row.size()) != model.V)
        throw ConfigError("model: table row " + key + " must have V entries");
      for (int v = 0; v < model.V; ++v)
        model.tables[static_cast<std::size_t>(c)](p, v) =
            row[static_cast<std::size_t>(v)];
    }
  }
  model.validate();
  return model;
}

Config to_config(const GaussianMixture& model) {
  Config cfg;
  cfg.set("model", "kind", std::string("gaussian_mixture"));
  write_mixture_core(cfg, "gaussian_mixture", model.weights, model.means,
                     model.sigma0);
  return cfg;
}

Config to_config(const DiscreteTable& model) {
  Config cfg;
  cfg.set("model", "kind", std::string("discrete_table"));
  cfg.set("discrete_table", "length", static_cast<std::int64_t>(model.L));
  cfg.set("discrete_table", "vocab", static_cast<std::int64_t>(model.V));
  cfg.set("discrete_table", "probs", join_full(model.probs));
  return cfg;
}

Config to_config(const CoupledToyModel& model) {
  Config cfg;
  cfg.set("model", "kind", std::string("coupled_toy"));
  write_mixture_core(cfg, "coupled_toy", model.weights, model.means,
                     model.sigma0);
  cfg.set("coupled_toy", "length", static_cast<std::int64_t>(model.L));
  cfg.set("coupled_toy", "vocab", static_cast<std::int64_t>(model.V));
  cfg.set("coupled_toy", "component_position",
          static_cast<std::int64_t>(model.component_position));
  for (int c = 0; c < model.components(); ++c)
    for (int p = 0; p < model.L; ++p)
      cfg.set("coupled_toy",
              "table_" + std::to_string(c) + "_" + std::to_string(p),
              join_full(model.tables[static_cast<std::size_t>(c)]
                            .row(p)
                            .transpose()));
  return cfg;
}

std::string model_kind(const Config& cfg) {
  return cfg.get_string("model", "kind");
}

std::unique_ptr<Denoiser> load_denoiser(const Config& cfg) {
  const std::string kind = model_kind(cfg);
  if (kind == "gaussian_mixture")
    return std::make_unique<GmmDenoiser>(parse_gaussian_mixture(cfg));
  if (kind == "discrete_table")
    return std::make_unique<TableDenoiser>(parse_discrete_table(cfg));
  if (kind == "coupled_toy")
    return std::make_unique<CoupledDenoiser>(parse_coupled_toy(cfg));
  throw ConfigError("model: unknown kind '" + kind + "'");
}

std::unique_ptr<Denoiser> load_denoiser_file(const std::string& path) {
  return load_denoiser(Config::load(path));
}

}  // namespace mmdiff::denoise
