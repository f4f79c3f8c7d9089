#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include "spinpulse/error.hpp"

namespace spinpulse::cli {
namespace {

using nlohmann::json;

constexpr const char* kConfigPrefix = "# config: ";

struct NamedExperiment {
  Experiment value;
  const char* name;
};

constexpr NamedExperiment kExperiments[] = {
    {Experiment::EffectiveParams, "effective-params"},
    {Experiment::Propagate, "propagate"},
    {Experiment::Compare, "compare"},
    {Experiment::TailorSweep, "tailor-sweep"},
    {Experiment::Figure1, "figure1"},
    {Experiment::Scaling, "scaling"},
};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  require_object(j, where);
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) fail(where, "unknown key '" + item.key() + "'");
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "expected a finite number");
  return v;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj.at(key), where + "." + key) : fallback;
}

double required_number(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) fail(where, std::string("missing '") + key + "'");
  return number(obj.at(key), where + "." + key);
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> fixed_list(const json& j, std::size_t n, const std::string& where) {
  std::vector<double> v = number_list(j, where);
  if (v.size() != n) fail(where, "expected " + std::to_string(n) + " numbers");
  return v;
}

std::string model_name(const json& obj, const std::string& where) {
  if (!obj.contains("model") || !obj.at("model").is_string()) fail(where, "missing string 'model'");
  return obj.at("model").get<std::string>();
}

json normalize_pulse(const json& in) {
  const std::string where = "pulse";
  require_object(in, where);
  if (!in.contains("family") || !in.at("family").is_string()) fail(where, "missing string 'family'");
  const std::string family = in.at("family").get<std::string>();
  json out;
  out["family"] = family;
  if (family == "sech2") {
    check_keys(in, where, {"family", "j0", "tau", "t0"});
    out["j0"] = required_number(in, "j0", where);
    out["tau"] = required_number(in, "tau", where);
    out["t0"] = number_or(in, "t0", 0.0, where);
  } else if (family == "tailored_sech2") {
    check_keys(in, where, {"family", "lambda", "j0_ref", "tau_ref", "t0"});
    out["lambda"] = number_or(in, "lambda", std::numbers::pi, where);
    out["j0_ref"] = number_or(in, "j0_ref", 1.0, where);
    out["tau_ref"] = number_or(in, "tau_ref", std::numbers::pi, where);
    out["t0"] = number_or(in, "t0", 0.0, where);
  } else if (family == "tabulated") {
    check_keys(in, where, {"family", "times", "values", "t0"});
    if (!in.contains("times") || !in.contains("values")) fail(where, "tabulated pulse needs 'times' and 'values'");
    out["times"] = number_list(in.at("times"), where + ".times");
    out["values"] = number_list(in.at("values"), where + ".values");
    out["t0"] = in.contains("t0") && !in.at("t0").is_null() ? json(number(in.at("t0"), where + ".t0"))
                                                             : json(nullptr);
  } else {
    fail(where, "unknown family '" + family + "' (sech2, tailored_sech2, tabulated)");
  }
  return out;
}

json normalize_table(const json& in, std::size_t width, const std::string& where) {
  if (!in.contains("times") || !in.contains("values")) fail(where, "tabulated model needs 'times' and 'values'");
  json out;
  out["model"] = "tabulated";
  out["times"] = number_list(in.at("times"), where + ".times");
  const json& values = in.at("values");
  if (!values.is_array()) fail(where + ".values", "expected an array");
  out["values"] = json::array();
  for (std::size_t i = 0; i < values.size(); ++i) {
    out["values"].push_back(fixed_list(values[i], width, where + ".values[" + std::to_string(i) + "]"));
  }
  return out;
}

json normalize_beta(const json& in) {
  const std::string where = "anisotropy.beta";
  require_object(in, where);
  const std::string model = model_name(in, where);
  json out;
  out["model"] = model;
  if (model == "linear") {
    check_keys(in, where, {"model", "beta1"});
    out["beta1"] = in.contains("beta1") ? fixed_list(in.at("beta1"), 3, where + ".beta1")
                                        : std::vector<double>{0.0, 0.0, 0.0};
  } else if (model == "skewed_linear") {
    check_keys(in, where, {"model", "beta1", "skew"});
    if (!in.contains("beta1") || !in.contains("skew")) fail(where, "skewed_linear needs 'beta1' and 'skew'");
    out["beta1"] = fixed_list(in.at("beta1"), 3, where + ".beta1");
    out["skew"] = fixed_list(in.at("skew"), 3, where + ".skew");
  } else if (model == "tabulated") {
    check_keys(in, where, {"model", "times", "values"});
    out = normalize_table(in, 3, where);
  } else {
    fail(where, "unknown model '" + model + "' (linear, skewed_linear, tabulated)");
  }
  return out;
}

json normalize_gamma(const json& in) {
  const std::string where = "anisotropy.gamma";
  require_object(in, where);
  const std::string model = model_name(in, where);
  json out;
  out["model"] = model;
  if (model == "none" || model == "rotated_exchange") {
    check_keys(in, where, {"model"});
  } else if (model == "proportional_to_j") {
    check_keys(in, where, {"model", "gamma0"});
    if (!in.contains("gamma0")) fail(where, "proportional_to_j needs 'gamma0' [xx, yy, zz, xy, xz, yz]");
    out["gamma0"] = fixed_list(in.at("gamma0"), 6, where + ".gamma0");
  } else if (model == "tabulated") {
    check_keys(in, where, {"model", "times", "values"});
    out = normalize_table(in, 6, where);
  } else {
    fail(where, "unknown model '" + model + "' (none, rotated_exchange, proportional_to_j, tabulated)");
  }
  return out;
}

json normalize_anisotropy(const json& in) {
  check_keys(in, "anisotropy", {"beta", "gamma"});
  json out;
  out["beta"] = normalize_beta(in.contains("beta") ? in.at("beta") : json{{"model", "linear"}});
  out["gamma"] = normalize_gamma(in.contains("gamma") ? in.at("gamma") : json{{"model", "none"}});
  return out;
}

QuadratureSpec parse_quadrature(const json& in) {
  const std::string where = "quadrature";
  check_keys(in, where, {"base_order", "rtol", "abs_floor", "max_order"});
  QuadratureSpec q;
  auto order = [&](const char* key, int fallback) {
    if (!in.contains(key)) return fallback;
    const json& v = in.at(key);
    if (!v.is_number_integer() || v.get<long>() < 2 || v.get<long>() > (1L << 20)) {
      fail(where + "." + key, "expected an integer in [2, 2^20]");
    }
    return v.get<int>();
  };
  q.base_order = order("base_order", q.base_order);
  q.max_order = order("max_order", q.max_order);
  q.rtol = number_or(in, "rtol", q.rtol, where);
  q.abs_floor = number_or(in, "abs_floor", q.abs_floor, where);
  if (q.max_order < q.base_order) fail(where, "max_order below base_order");
  if (!(q.rtol > 0.0)) fail(where + ".rtol", "must be > 0");
  if (!(q.abs_floor >= 0.0)) fail(where + ".abs_floor", "must be >= 0");
  return q;
}

void check_rtol(double rtol) {
  if (!(rtol > 0.0 && rtol < 1.0)) throw ConfigError("rtol must lie in (0, 1)");
}

void check_tol(double tol) {
  if (!(tol >= 1e-13 && tol <= 1e-6)) throw ConfigError("propagation tol must lie in [1e-13, 1e-6]");
}

OutputFormat parse_format(const json& j) {
  if (!j.is_string()) fail("format", "expected \"csv\" or \"jsonl\"");
  const std::string s = j.get<std::string>();
  if (s == "csv") return OutputFormat::Csv;
  if (s == "jsonl") return OutputFormat::JsonLines;
  fail("format", "expected \"csv\" or \"jsonl\", got '" + s + "'");
}

Vec3 vec3(const json& j) { return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()}; }

SymMat3 sym(const json& j) {
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
          j[3].get<double>(), j[4].get<double>(), j[5].get<double>()};
}

}  // namespace

std::string to_string(Experiment e) {
  for (const auto& n : kExperiments) {
    if (n.value == e) return n.name;
  }
  return "unknown";
}

std::optional<Experiment> parse_experiment(const std::string& name) {
  for (const auto& n : kExperiments) {
    if (name == n.name) return n.value;
  }
  return std::nullopt;
}

nlohmann::json ExperimentConfig::resolved() const {
  json j;
  j["experiment"] = to_string(experiment);
  j["pulse"] = pulse;
  if (!anisotropy.is_null()) j["anisotropy"] = anisotropy;
  j["quadrature"] = {{"base_order", quadrature.base_order},
                     {"rtol", quadrature.rtol},
                     {"abs_floor", quadrature.abs_floor},
                     {"max_order", quadrature.max_order}};
  j["propagation"] = {{"tol", propagation_tol}};
  if (!sweep.empty()) j["sweep"] = {{"lambda", sweep}};
  if (!scales.empty()) j["scales"] = scales;
  j["format"] = format == OutputFormat::Csv ? "csv" : "jsonl";
  return j;
}

nlohmann::json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  if (!text.empty() && text.front() == '#') {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line) && !line.empty() && line.front() == '#') {
      if (line.rfind(kConfigPrefix, 0) == 0) {
        try {
          return json::parse(line.substr(std::char_traits<char>::length(kConfigPrefix)));
        } catch (const json::parse_error& e) {
          throw ConfigError("embedded config in '" + path.string() + "' is not valid JSON: " + e.what());
        }
      }
    }
    throw ConfigError("'" + path.string() + "' has a comment header but no config line");
  }
  try {
    return json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

ExperimentConfig parse_config(const nlohmann::json& j, Experiment command, const Overrides& overrides) {
  check_keys(j, "config",
             {"experiment", "pulse", "anisotropy", "quadrature", "propagation", "sweep", "scales",
              "output", "format"});
  ExperimentConfig cfg;
  cfg.experiment = command;

  if (j.contains("experiment")) {
    const json& e = j.at("experiment");
    if (!e.is_string() || parse_experiment(e.get<std::string>()) != command) {
      fail("experiment", "config is for '" + (e.is_string() ? e.get<std::string>() : e.dump()) +
                             "' but the command is '" + to_string(command) + "'");
    }
  }

  const bool tailored_only = command == Experiment::TailorSweep || command == Experiment::Figure1;
  if (j.contains("pulse")) {
    cfg.pulse = normalize_pulse(j.at("pulse"));
  } else if (tailored_only) {
    cfg.pulse = normalize_pulse(json{{"family", "tailored_sech2"}});
  } else {
    fail("config", "missing 'pulse'");
  }
  if (tailored_only && cfg.pulse.at("family") != "tailored_sech2") {
    fail("pulse", to_string(command) + " needs the tailored_sech2 family");
  }

  if (command != Experiment::Figure1) {
    cfg.anisotropy = normalize_anisotropy(j.contains("anisotropy") ? j.at("anisotropy") : json::object());
  } else if (j.contains("anisotropy")) {
    fail("anisotropy", "figure1 takes no anisotropy");
  }
  if (command == Experiment::TailorSweep && cfg.anisotropy.at("beta").at("model") != "linear") {
    fail("anisotropy.beta", "tailor-sweep needs the linear model");
  }

  if (j.contains("quadrature")) cfg.quadrature = parse_quadrature(j.at("quadrature"));
  if (j.contains("propagation")) {
    check_keys(j.at("propagation"), "propagation", {"tol"});
    cfg.propagation_tol = number_or(j.at("propagation"), "tol", cfg.propagation_tol, "propagation");
  }
  if (overrides.rtol) {
    check_rtol(*overrides.rtol);
    cfg.quadrature.rtol = *overrides.rtol;
  }
  if (overrides.tol) cfg.propagation_tol = *overrides.tol;
  check_tol(cfg.propagation_tol);

  if (j.contains("sweep")) {
    if (command == Experiment::Scaling) fail("sweep", "scaling runs at the pulse's own lambda");
    check_keys(j.at("sweep"), "sweep", {"lambda"});
    if (!j.at("sweep").contains("lambda")) fail("sweep", "missing 'lambda'");
    cfg.sweep = number_list(j.at("sweep").at("lambda"), "sweep.lambda");
    if (cfg.sweep.empty()) fail("sweep.lambda", "empty list");
    for (double l : cfg.sweep) {
      if (!(l > 0.0)) fail("sweep.lambda", "entries must be > 0");
    }
    std::sort(cfg.sweep.begin(), cfg.sweep.end());
  }

  if (command == Experiment::Scaling) {
    if (!j.contains("scales")) fail("config", "scaling needs 'scales'");
    cfg.scales = number_list(j.at("scales"), "scales");
    if (cfg.scales.size() < 3) fail("scales", "at least three scales are needed");
    for (double c : cfg.scales) {
      if (!(c > 0.0)) fail("scales", "entries must be > 0");
    }
    std::sort(cfg.scales.begin(), cfg.scales.end());
  } else if (j.contains("scales")) {
    fail("scales", "only the scaling experiment takes scales");
  }

  if (j.contains("output")) {
    if (!j.at("output").is_string()) fail("output", "expected a path");
    cfg.output = j.at("output").get<std::string>();
  }
  if (overrides.output) cfg.output = overrides.output;
  if (j.contains("format")) cfg.format = parse_format(j.at("format"));
  if (overrides.format) cfg.format = *overrides.format;

  // Build once so physical nonsense (negative widths, bad tables) is a config error.
  try {
    if (cfg.experiment != Experiment::TailorSweep && cfg.experiment != Experiment::Figure1) {
      build_pulse(cfg.pulse);
    } else {
      tailored_params(std::numbers::pi, cfg.pulse.at("j0_ref").get<double>(),
                      cfg.pulse.at("tau_ref").get<double>());
    }
    if (!cfg.anisotropy.is_null()) build_anisotropy(cfg.anisotropy);
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid physical parameters: ") + e.what());
  }
  return cfg;
}

PulseProfile build_pulse(const nlohmann::json& pulse, std::optional<double> lambda) {
  const std::string family = pulse.at("family").get<std::string>();
  const double t0 = pulse.at("t0").is_null() ? 0.0 : pulse.at("t0").get<double>();
  if (family == "sech2") {
    const double tau = pulse.at("tau").get<double>();
    const double j0 = lambda ? *lambda / tau : pulse.at("j0").get<double>();
    return PulseProfile::sech2(j0, tau, t0);
  }
  if (family == "tailored_sech2") {
    return PulseProfile::tailored_sech2(lambda.value_or(pulse.at("lambda").get<double>()),
                                        pulse.at("j0_ref").get<double>(),
                                        pulse.at("tau_ref").get<double>(), t0);
  }
  auto times = pulse.at("times").get<std::vector<double>>();
  auto values = pulse.at("values").get<std::vector<double>>();
  auto make = [&](std::vector<double> v) {
    return pulse.at("t0").is_null() ? PulseProfile::tabulated(times, std::move(v))
                                    : PulseProfile::tabulated(times, std::move(v), t0);
  };
  PulseProfile p = make(values);
  if (!lambda) return p;
  if (!(p.lambda() > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "cannot rescale a zero tabulated pulse to lambda");
  }
  for (double& v : values) v *= *lambda / p.lambda();
  return make(std::move(values));
}

AnisotropyProfile build_anisotropy(const nlohmann::json& anisotropy) {
  AnisotropyProfile a;
  const json& b = anisotropy.at("beta");
  const std::string bm = b.at("model").get<std::string>();
  if (bm == "linear") {
    a.beta = LinearInJ{vec3(b.at("beta1"))};
  } else if (bm == "skewed_linear") {
    a.beta = SkewedLinearInJ{vec3(b.at("beta1")), vec3(b.at("skew"))};
  } else {
    std::vector<Vec3> values;
    for (const json& v : b.at("values")) values.push_back(vec3(v));
    a.beta = TabulatedBeta(b.at("times").get<std::vector<double>>(), std::move(values));
  }

  const json& g = anisotropy.at("gamma");
  const std::string gm = g.at("model").get<std::string>();
  if (gm == "none") {
    a.gamma = NoGamma{};
  } else if (gm == "rotated_exchange") {
    a.gamma = RotatedExchange{};
  } else if (gm == "proportional_to_j") {
    a.gamma = ProportionalToJ{sym(g.at("gamma0"))};
  } else {
    std::vector<SymMat3> values;
    for (const json& v : g.at("values")) values.push_back(sym(v));
    a.gamma = TabulatedGamma(g.at("times").get<std::vector<double>>(), std::move(values));
  }
  return a;
}

std::vector<double> sweep_points(const ExperimentConfig& cfg) {
  if (!cfg.sweep.empty()) return cfg.sweep;
  if (cfg.experiment == Experiment::Figure1 || cfg.experiment == Experiment::TailorSweep) {
    std::vector<double> grid;
    for (int k = 1; k <= 7; ++k) grid.push_back(k * std::numbers::pi / 4.0);
    return grid;
  }
  return {build_pulse(cfg.pulse).lambda()};
}

}  // namespace spinpulse::cli
