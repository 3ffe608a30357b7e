#include "sbolab/config.hpp"

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>

#include <json.hpp>

#include "sbolab/estimates.hpp"
#include "sbolab/fourier.hpp"

namespace sbolab {
namespace {

using nlohmann::json;

std::string join(const std::string& a, const char* b) {
  return a.empty() ? std::string(b) : a + "." + b;
}

struct Collector {
  std::vector<ConfigError>* errors;
  void add(std::string path, std::string message) {
    errors->push_back({std::move(path), std::move(message)});
  }
};

bool is_pow2(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed, Collector& c) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) c.add(join(path, it.key().c_str()), "unknown key");
  }
}

// Each reader applies the key only when present and well-typed; a type
// mismatch is recorded and the default is kept so validation can continue.
void read_double(const json& obj, const char* key, const std::string& path,
                 Collector& c, double& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number()) {
    c.add(join(path, key), "expected a number");
    return;
  }
  out = it->get<double>();
}

void read_uint(const json& obj, const char* key, const std::string& path,
               Collector& c, std::uint64_t& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number_unsigned()) {
    c.add(join(path, key), "expected a nonnegative integer");
    return;
  }
  out = it->get<std::uint64_t>();
}

void read_int_nonneg(const json& obj, const char* key, const std::string& path,
                     Collector& c, int& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number_integer() || it->get<long long>() < 0) {
    c.add(join(path, key), "expected a nonnegative integer");
    return;
  }
  out = static_cast<int>(it->get<long long>());
}

void read_bool(const json& obj, const char* key, const std::string& path,
               Collector& c, bool& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_boolean()) {
    c.add(join(path, key), "expected a boolean");
    return;
  }
  out = it->get<bool>();
}

void read_string(const json& obj, const char* key, const std::string& path,
                 Collector& c, std::string& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_string()) {
    c.add(join(path, key), "expected a string");
    return;
  }
  out = it->get<std::string>();
}

bool expect_object(const json& j, const std::string& path, Collector& c) {
  if (j.is_object()) return true;
  c.add(path, "expected an object");
  return false;
}

const char* family_to_string(InitDataSpec::Family f) {
  switch (f) {
    case InitDataSpec::Family::gaussian: return "gaussian";
    case InitDataSpec::Family::plane_wave: return "plane_wave";
    case InitDataSpec::Family::random_band_limited:
      return "random_band_limited";
    case InitDataSpec::Family::file: return "file";
  }
  return "gaussian";
}

void parse_spec(const json& j, const std::string& path, Collector& c,
                InitDataSpec& spec) {
  if (!expect_object(j, path, c)) return;
  check_keys(j, path,
             {"family", "amplitude", "width", "center", "wavenumber", "band",
              "decay", "seed", "base_length", "path"},
             c);
  if (auto it = j.find("family"); it != j.end()) {
    if (!it->is_string()) {
      c.add(join(path, "family"), "expected a string");
    } else {
      const std::string name = it->get<std::string>();
      if (name == "gaussian") {
        spec.family = InitDataSpec::Family::gaussian;
      } else if (name == "plane_wave") {
        spec.family = InitDataSpec::Family::plane_wave;
      } else if (name == "random_band_limited") {
        spec.family = InitDataSpec::Family::random_band_limited;
      } else if (name == "file") {
        spec.family = InitDataSpec::Family::file;
      } else {
        c.add(join(path, "family"), "unknown family '" + name + "'");
      }
    }
  }
  read_double(j, "amplitude", path, c, spec.amplitude);
  read_double(j, "width", path, c, spec.width);
  read_double(j, "center", path, c, spec.center);
  read_double(j, "wavenumber", path, c, spec.wavenumber);
  read_int_nonneg(j, "band", path, c, spec.band);
  read_double(j, "decay", path, c, spec.decay);
  std::uint64_t seed = spec.seed;
  read_uint(j, "seed", path, c, seed);
  spec.seed = seed;
  read_double(j, "base_length", path, c, spec.base_length);
  read_string(j, "path", path, c, spec.path);

  // Family-specific constraints, mirrored from the evaluation layer so a bad
  // config fails at parse time with a path instead of mid-run.
  switch (spec.family) {
    case InitDataSpec::Family::gaussian:
      if (!(spec.width > 0.0)) c.add(join(path, "width"), "width must be positive");
      break;
    case InitDataSpec::Family::plane_wave:
      break;
    case InitDataSpec::Family::random_band_limited:
      if (spec.band < 1) c.add(join(path, "band"), "band must be at least 1");
      if (!(spec.base_length > 0.0)) {
        c.add(join(path, "base_length"), "base_length must be positive");
      }
      break;
    case InitDataSpec::Family::file:
      if (spec.path.empty()) c.add(join(path, "path"), "path must not be empty");
      break;
  }
}

void parse_pair(const json& j, const std::string& path, Collector& c,
                InitPair& pair) {
  if (!expect_object(j, path, c)) return;
  check_keys(j, path, {"u0", "v0"}, c);
  if (auto it = j.find("u0"); it != j.end()) {
    parse_spec(*it, join(path, "u0"), c, pair.u0);
  }
  if (auto it = j.find("v0"); it != j.end()) {
    parse_spec(*it, join(path, "v0"), c, pair.v0);
  }
}

json spec_json(const InitDataSpec& s) {
  json j;
  j["family"] = family_to_string(s.family);
  j["amplitude"] = s.amplitude;
  j["width"] = s.width;
  j["center"] = s.center;
  j["wavenumber"] = s.wavenumber;
  j["band"] = s.band;
  j["decay"] = s.decay;
  j["seed"] = static_cast<std::uint64_t>(s.seed);
  j["base_length"] = s.base_length;
  j["path"] = s.path;
  return j;
}

json pair_json(const InitPair& p) {
  json j;
  j["u0"] = spec_json(p.u0);
  j["v0"] = spec_json(p.v0);
  return j;
}

}  // namespace

ConfigResult parse_config(const std::string& text) {
  ConfigResult result;
  Collector c{&result.errors};

  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    c.add("", std::string("invalid JSON: ") + e.what());
    return result;
  }
  if (!root.is_object()) {
    c.add("", "top-level value must be an object");
    return result;
  }

  RunConfig cfg;
  check_keys(root, "",
             {"grid", "params", "init", "init_b", "horizon", "controls",
              "diagnostics", "seed"},
             c);

  if (auto it = root.find("grid"); it != root.end()) {
    if (expect_object(*it, "grid", c)) {
      check_keys(*it, "grid", {"L", "N"}, c);
      read_double(*it, "L", "grid", c, cfg.L);
      std::uint64_t n = cfg.N;
      read_uint(*it, "N", "grid", c, n);
      cfg.N = static_cast<std::size_t>(n);
      if (!(cfg.L > 0.0)) c.add("grid.L", "L must be positive");
      if (cfg.N < 8 || !is_pow2(cfg.N)) {
        c.add("grid.N", "N must be a power of two, at least 8");
      }
    }
  }

  if (auto it = root.find("params"); it != root.end()) {
    if (expect_object(*it, "params", c)) {
      check_keys(*it, "params", {"beta", "rho", "lambda"}, c);
      read_double(*it, "beta", "params", c, cfg.params.beta);
      read_double(*it, "rho", "params", c, cfg.params.rho);
      read_double(*it, "lambda", "params", c, cfg.params.lambda);
      if (!(cfg.params.lambda > 0.0 && cfg.params.lambda <= 1.0)) {
        c.add("params.lambda", "lambda must be in (0,1]");
      }
    }
  }

  if (auto it = root.find("init"); it != root.end()) {
    parse_pair(*it, "init", c, cfg.init);
  }
  if (auto it = root.find("init_b"); it != root.end()) {
    InitPair b;
    parse_pair(*it, "init_b", c, b);
    cfg.init_b = std::move(b);
  }

  if (auto it = root.find("horizon"); it != root.end()) {
    if (expect_object(*it, "horizon", c)) {
      check_keys(*it, "horizon", {"T", "auto_from_apriori", "A_s"}, c);
      const bool has_t = it->contains("T");
      read_bool(*it, "auto_from_apriori", "horizon", c,
                cfg.horizon.auto_from_apriori);
      if (has_t && cfg.horizon.auto_from_apriori) {
        c.add("horizon", "specify either T or auto_from_apriori, not both");
      }
      if (it->contains("A_s") && !cfg.horizon.auto_from_apriori) {
        c.add("horizon.A_s", "A_s requires auto_from_apriori");
      }
      read_double(*it, "T", "horizon", c, cfg.horizon.T);
      read_double(*it, "A_s", "horizon", c, cfg.horizon.a_s);
      if (!cfg.horizon.auto_from_apriori && !(cfg.horizon.T > 0.0)) {
        c.add("horizon.T", "T must be positive");
      }
      if (cfg.horizon.auto_from_apriori && !(cfg.horizon.a_s > 0.0)) {
        c.add("horizon.A_s", "A_s must be positive");
      }
    }
  }

  if (auto it = root.find("controls"); it != root.end()) {
    if (expect_object(*it, "controls", c)) {
      check_keys(*it, "controls",
                 {"rel_tol", "dt_init", "dt_min", "dt_max", "cadence"}, c);
      read_double(*it, "rel_tol", "controls", c, cfg.controls.rel_tol);
      read_double(*it, "dt_init", "controls", c, cfg.controls.dt_init);
      read_double(*it, "dt_min", "controls", c, cfg.controls.dt_min);
      read_double(*it, "dt_max", "controls", c, cfg.controls.dt_max);
      read_double(*it, "cadence", "controls", c, cfg.controls.cadence);
      if (!(cfg.controls.rel_tol > 0.0)) {
        c.add("controls.rel_tol", "rel_tol must be positive");
      }
      if (!(cfg.controls.dt_init > 0.0)) {
        c.add("controls.dt_init", "dt_init must be positive");
      }
      if (!(cfg.controls.dt_min > 0.0)) {
        c.add("controls.dt_min", "dt_min must be positive");
      }
      if (!(cfg.controls.dt_max >= cfg.controls.dt_min)) {
        c.add("controls.dt_max", "dt_max must be at least dt_min");
      }
      if (!(cfg.controls.cadence > 0.0)) {
        c.add("controls.cadence", "cadence must be positive");
      }
    }
  }

  if (auto it = root.find("diagnostics"); it != root.end()) {
    if (expect_object(*it, "diagnostics", c)) {
      check_keys(*it, "diagnostics", {"s", "delta", "eps", "oversample"}, c);
      read_double(*it, "s", "diagnostics", c, cfg.diagnostics.s);
      read_double(*it, "delta", "diagnostics", c, cfg.diagnostics.delta);
      read_double(*it, "eps", "diagnostics", c, cfg.diagnostics.eps);
      std::uint64_t ov = cfg.diagnostics.oversample;
      read_uint(*it, "oversample", "diagnostics", c, ov);
      cfg.diagnostics.oversample = static_cast<std::size_t>(ov);
      if (!(cfg.diagnostics.s >= 0.5)) {
        c.add("diagnostics.s", "s must be at least 1/2");
      }
      if (!(cfg.diagnostics.delta >= 0.0 && cfg.diagnostics.delta <= 1.0)) {
        c.add("diagnostics.delta", "delta must be in [0, 1]");
      }
      if (!(cfg.diagnostics.eps > 0.0)) {
        c.add("diagnostics.eps", "eps must be positive");
      }
      if (!is_pow2(cfg.diagnostics.oversample)) {
        c.add("diagnostics.oversample", "oversample must be a power of two");
      }
    }
  }

  read_uint(root, "seed", "", c, cfg.seed);

  if (result.errors.empty()) result.config = std::move(cfg);
  return result;
}

std::string dump_config(const RunConfig& config) {
  json j;
  j["grid"] = {{"L", config.L}, {"N", static_cast<std::uint64_t>(config.N)}};
  j["params"] = {{"beta", config.params.beta},
                 {"rho", config.params.rho},
                 {"lambda", config.params.lambda}};
  j["init"] = pair_json(config.init);
  if (config.init_b) j["init_b"] = pair_json(*config.init_b);
  if (config.horizon.auto_from_apriori) {
    j["horizon"] = {{"auto_from_apriori", true}, {"A_s", config.horizon.a_s}};
  } else {
    j["horizon"] = {{"T", config.horizon.T}};
  }
  j["controls"] = {{"rel_tol", config.controls.rel_tol},
                   {"dt_init", config.controls.dt_init},
                   {"dt_min", config.controls.dt_min},
                   {"dt_max", config.controls.dt_max},
                   {"cadence", config.controls.cadence}};
  j["diagnostics"] = {
      {"s", config.diagnostics.s},
      {"delta", config.diagnostics.delta},
      {"eps", config.diagnostics.eps},
      {"oversample", static_cast<std::uint64_t>(config.diagnostics.oversample)}};
  j["seed"] = config.seed;
  return j.dump(2) + "\n";
}

double resolve_horizon(const RunConfig& config) {
  if (!config.horizon.auto_from_apriori) return config.horizon.T;
  const GridPtr grid = make_grid(config.L, config.N);
  const ComplexField u = eval_complex(config.init.u0, grid);
  const RealField v = eval_real(config.init.v0, grid);
  return apriori_time(joint_norm(u, v, config.diagnostics.s), config.horizon.a_s);
}

}  // namespace sbolab
