#include "bohmlab/cli/config.hpp"

#include <fstream>
#include <set>

#include "bohmlab/errors.hpp"

namespace bohmlab::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& section,
                const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key())) {
      throw ConfigError("unknown key: " + (section.empty() ? "" : section + ".") + item.key());
    }
  }
}

std::string qualify(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

double get_double(const json& obj, const std::string& section, const std::string& key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError("expected number for key: " + qualify(section, key));
  return v.get<double>();
}

int get_int(const json& obj, const std::string& section, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ConfigError("expected integer for key: " + qualify(section, key));
  }
  return v.get<int>();
}

std::uint64_t get_u64(const json& obj, const std::string& section, const std::string& key,
                      std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw ConfigError("expected integer for key: " + qualify(section, key));
  }
  return v.get<std::uint64_t>();
}

bool get_bool(const json& obj, const std::string& section, const std::string& key,
              bool fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError("expected boolean for key: " + qualify(section, key));
  return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& section, const std::string& key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError("expected string for key: " + qualify(section, key));
  return v.get<std::string>();
}

std::vector<double> get_double_array(const json& obj, const std::string& section,
                                     const std::string& key, std::vector<double> fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_array() || v.empty()) {
    throw ConfigError("expected non-empty array for key: " + qualify(section, key));
  }
  std::vector<double> out;
  for (const auto& item : v) {
    if (!item.is_number()) {
      throw ConfigError("expected numbers in array: " + qualify(section, key));
    }
    out.push_back(item.get<double>());
  }
  return out;
}

RampSchedule::Shape parse_shape(const std::string& s) {
  if (s == "sin2" || s == "sin-squared") return RampSchedule::Shape::SinSquared;
  if (s == "linear") return RampSchedule::Shape::Linear;
  if (s == "smoothstep") return RampSchedule::Shape::Smoothstep;
  throw ConfigError("unknown ramp.shape: " + s);
}

std::string shape_name(RampSchedule::Shape s) {
  switch (s) {
    case RampSchedule::Shape::SinSquared:
      return "sin2";
    case RampSchedule::Shape::Linear:
      return "linear";
    case RampSchedule::Shape::Smoothstep:
      return "smoothstep";
  }
  return "sin2";
}

BasePotentialSpec::Family parse_family(const std::string& s) {
  if (s == "harmonic") return BasePotentialSpec::Family::Harmonic;
  if (s == "box") return BasePotentialSpec::Family::Box;
  throw ConfigError("unknown potential.family: " + s);
}

std::string family_name(BasePotentialSpec::Family f) {
  return f == BasePotentialSpec::Family::Harmonic ? "harmonic" : "box";
}

}  // namespace

RunConfig default_config() { return RunConfig{}; }

RunConfig lemma_config() {
  RunConfig c;
  c.protective.run_id = "lemma";
  c.protective.lambda = 0.5;
  c.protective.total_time = 5.0;
  c.protective.ensemble.count = 9;
  c.protective.numerics.frame_stride = 1;
  c.protective.numerics.fidelity_stride = 0;
  return c;
}

RunConfig parse_config(const json& doc, RunConfig base) {
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  check_keys(doc, "",
             {"run_id", "method", "lambda", "refine_factor", "dump_density", "grid",
              "constants", "potential", "bump", "ramp", "ensemble", "numerics", "eigen",
              "interval", "initial_state", "sweep"});

  RunConfig c = std::move(base);
  ProtectiveConfig& p = c.protective;

  p.run_id = get_string(doc, "", "run_id", p.run_id);
  p.lambda = get_double(doc, "", "lambda", p.lambda);
  c.refine_factor = get_int(doc, "", "refine_factor", c.refine_factor);
  if (c.refine_factor < 1) throw ConfigError("refine_factor must be >= 1");
  c.dump_density = get_bool(doc, "", "dump_density", c.dump_density);

  const std::string method = get_string(doc, "", "method", "");
  if (!method.empty()) {
    if (method == "ode") {
      p.run_ode = true;
      p.run_quantile = false;
    } else if (method == "quantile") {
      p.run_ode = false;
      p.run_quantile = true;
    } else if (method == "both") {
      p.run_ode = p.run_quantile = true;
    } else {
      throw ConfigError("unknown method: " + method);
    }
  }

  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    check_keys(g, "grid", {"x_min", "x_max", "n"});
    p.grid.x_min = get_double(g, "grid", "x_min", p.grid.x_min);
    p.grid.x_max = get_double(g, "grid", "x_max", p.grid.x_max);
    p.grid.n = get_int(g, "grid", "n", p.grid.n);
    if (p.grid.n < 16) throw ConfigError("grid.n must be >= 16");
  }
  if (doc.contains("constants")) {
    const auto& g = doc.at("constants");
    check_keys(g, "constants", {"hbar", "mass"});
    p.consts.hbar = get_double(g, "constants", "hbar", p.consts.hbar);
    p.consts.mass = get_double(g, "constants", "mass", p.consts.mass);
    if (!p.consts.valid()) throw ConfigError("constants.hbar and constants.mass must be > 0");
  }
  if (doc.contains("potential")) {
    const auto& g = doc.at("potential");
    check_keys(g, "potential", {"family", "k", "center"});
    p.base.family = parse_family(get_string(g, "potential", "family", family_name(p.base.family)));
    p.base.k = get_double(g, "potential", "k", p.base.k);
    p.base.center = get_double(g, "potential", "center", p.base.center);
  }
  if (doc.contains("bump")) {
    const auto& g = doc.at("bump");
    check_keys(g, "bump", {"center", "width"});
    p.bump_center = get_double(g, "bump", "center", p.bump_center);
    p.bump_width = get_double(g, "bump", "width", p.bump_width);
    if (!(p.bump_width > 0.0)) throw ConfigError("bump.width must be > 0");
  }
  if (doc.contains("ramp")) {
    const auto& g = doc.at("ramp");
    check_keys(g, "ramp", {"shape", "total_time"});
    p.ramp_shape = parse_shape(get_string(g, "ramp", "shape", shape_name(p.ramp_shape)));
    p.total_time = get_double(g, "ramp", "total_time", p.total_time);
    if (!(p.total_time > 0.0)) throw ConfigError("ramp.total_time must be > 0");
  }
  if (doc.contains("ensemble")) {
    const auto& g = doc.at("ensemble");
    check_keys(g, "ensemble", {"count", "spacing", "seed"});
    p.ensemble.count = get_int(g, "ensemble", "count", p.ensemble.count);
    if (p.ensemble.count < 1) throw ConfigError("ensemble.count must be >= 1");
    const std::string spacing =
        get_string(g, "ensemble", "spacing", p.ensemble.sampled ? "sampled" : "equispaced");
    if (spacing == "equispaced") {
      p.ensemble.sampled = false;
    } else if (spacing == "sampled") {
      p.ensemble.sampled = true;
    } else {
      throw ConfigError("unknown ensemble.spacing: " + spacing);
    }
    p.ensemble.seed = get_u64(g, "ensemble", "seed", p.ensemble.seed);
  }
  if (doc.contains("numerics")) {
    const auto& g = doc.at("numerics");
    check_keys(g, "numerics",
               {"dt", "frame_stride", "substeps", "fidelity_stride", "max_dt_ratio"});
    p.numerics.dt = get_double(g, "numerics", "dt", p.numerics.dt);
    if (!(p.numerics.dt > 0.0)) throw ConfigError("numerics.dt must be > 0");
    p.numerics.frame_stride = get_int(g, "numerics", "frame_stride", p.numerics.frame_stride);
    if (p.numerics.frame_stride < 1) throw ConfigError("numerics.frame_stride must be >= 1");
    p.numerics.substeps = get_int(g, "numerics", "substeps", p.numerics.substeps);
    if (p.numerics.substeps < 1) throw ConfigError("numerics.substeps must be >= 1");
    p.numerics.fidelity_stride =
        get_int(g, "numerics", "fidelity_stride", p.numerics.fidelity_stride);
    if (p.numerics.fidelity_stride < 0) {
      throw ConfigError("numerics.fidelity_stride must be >= 0");
    }
    p.numerics.max_dt_ratio = get_double(g, "numerics", "max_dt_ratio", p.numerics.max_dt_ratio);
  }
  if (doc.contains("eigen")) {
    const auto& g = doc.at("eigen");
    check_keys(g, "eigen", {"count"});
    c.eigen_count = get_int(g, "eigen", "count", c.eigen_count);
    if (c.eigen_count < 1) throw ConfigError("eigen.count must be >= 1");
  }
  if (doc.contains("interval")) {
    const auto& g = doc.at("interval");
    check_keys(g, "interval", {"lo", "hi"});
    const double lo = get_double(g, "interval", "lo", 0.0);
    const double hi = get_double(g, "interval", "hi", 0.0);
    if (!(lo < hi)) throw ConfigError("interval.lo must be < interval.hi");
    p.interval = std::make_pair(lo, hi);
  }
  if (doc.contains("initial_state")) {
    const auto& g = doc.at("initial_state");
    check_keys(g, "initial_state", {"type", "sigma", "center"});
    const std::string type = get_string(
        g, "initial_state", "type",
        c.initial_state.type == InitialStateConfig::Type::Ground ? "ground" : "gaussian");
    if (type == "ground") {
      c.initial_state.type = InitialStateConfig::Type::Ground;
    } else if (type == "gaussian") {
      c.initial_state.type = InitialStateConfig::Type::Gaussian;
    } else {
      throw ConfigError("unknown initial_state.type: " + type);
    }
    c.initial_state.sigma = get_double(g, "initial_state", "sigma", c.initial_state.sigma);
    if (!(c.initial_state.sigma > 0.0)) throw ConfigError("initial_state.sigma must be > 0");
    c.initial_state.center = get_double(g, "initial_state", "center", c.initial_state.center);
  }
  if (doc.contains("sweep")) {
    const auto& g = doc.at("sweep");
    check_keys(g, "sweep", {"lambdas", "total_times"});
    c.sweep.lambdas = get_double_array(g, "sweep", "lambdas", c.sweep.lambdas);
    c.sweep.total_times = get_double_array(g, "sweep", "total_times", c.sweep.total_times);
  }
  return c;
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error in " + path.string() + ": " + e.what());
  }
  return parse_config(doc, std::move(base));
}

json config_to_json(const RunConfig& c) {
  const ProtectiveConfig& p = c.protective;
  json doc;
  doc["run_id"] = p.run_id;
  doc["method"] = p.run_ode && p.run_quantile ? "both" : (p.run_ode ? "ode" : "quantile");
  doc["lambda"] = p.lambda;
  doc["refine_factor"] = c.refine_factor;
  doc["dump_density"] = c.dump_density;
  doc["grid"] = {{"x_min", p.grid.x_min}, {"x_max", p.grid.x_max}, {"n", p.grid.n}};
  doc["constants"] = {{"hbar", p.consts.hbar}, {"mass", p.consts.mass}};
  doc["potential"] = {{"family", family_name(p.base.family)},
                      {"k", p.base.k},
                      {"center", p.base.center}};
  doc["bump"] = {{"center", p.bump_center}, {"width", p.bump_width}};
  doc["ramp"] = {{"shape", shape_name(p.ramp_shape)}, {"total_time", p.total_time}};
  doc["ensemble"] = {{"count", p.ensemble.count},
                     {"spacing", p.ensemble.sampled ? "sampled" : "equispaced"},
                     {"seed", p.ensemble.seed}};
  doc["numerics"] = {{"dt", p.numerics.dt},
                     {"frame_stride", p.numerics.frame_stride},
                     {"substeps", p.numerics.substeps},
                     {"fidelity_stride", p.numerics.fidelity_stride},
                     {"max_dt_ratio", p.numerics.max_dt_ratio}};
  doc["eigen"] = {{"count", c.eigen_count}};
  if (p.interval) {
    doc["interval"] = {{"lo", p.interval->first}, {"hi", p.interval->second}};
  }
  doc["initial_state"] = {
      {"type", c.initial_state.type == InitialStateConfig::Type::Ground ? "ground" : "gaussian"},
      {"sigma", c.initial_state.sigma},
      {"center", c.initial_state.center}};
  doc["sweep"] = {{"lambdas", c.sweep.lambdas}, {"total_times", c.sweep.total_times}};
  return doc;
}

void apply_refine(RunConfig& config) {
  const int f = config.refine_factor;
  if (f <= 1) return;
  ProtectiveConfig& p = config.protective;
  p.grid.n = (p.grid.n - 1) * f + 1;
  p.numerics.dt /= static_cast<double>(f);
  p.numerics.substeps *= f;
}

}  // namespace bohmlab::cli
