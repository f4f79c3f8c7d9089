#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "spinpulse/effective_hamiltonian.hpp"
#include "spinpulse/error.hpp"
#include "spinpulse/gate_analysis.hpp"
#include "spinpulse/propagator.hpp"

namespace spinpulse::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTailorTolerance = 1e-9;

bool row_level(ErrorCode code) {
  switch (code) {
    case ErrorCode::ResonantLambda:
    case ErrorCode::LambdaOutOfRange:
    case ErrorCode::BranchAmbiguous:
    case ErrorCode::IsotropicCoefficientAnomalous:
    case ErrorCode::NonSymmetricResidual:
    case ErrorCode::BetaTooLarge:
      return true;
    default:
      return false;
  }
}

std::string lambda_label(double lambda) { return "lambda=" + format_double(lambda); }

/// Runs one sweep point. Row-level errors come back as the status string;
/// the rest are rethrown with the command and lambda attached.
template <class F>
std::string guarded(const ExperimentConfig& cfg, double lambda, std::vector<std::string>& warnings,
                    F&& body) {
  try {
    body();
    return "ok";
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) {
      throw ConfigError(to_string(cfg.experiment) + " at " + lambda_label(lambda) + ": " + e.what());
    }
    if (!row_level(e.code())) {
      throw NumericalFailure(to_string(cfg.experiment) + " failed at " + lambda_label(lambda) + ": " +
                             e.what());
    }
    warnings.push_back(lambda_label(lambda) + ": " + e.what());
    return std::string(to_string(e.code()));
  }
}

PulseProfile pulse_for(const ExperimentConfig& cfg, double lambda) {
  return cfg.sweep.empty() ? build_pulse(cfg.pulse) : build_pulse(cfg.pulse, lambda);
}

void append_param_columns(std::vector<std::string>& cols, const std::string& prefix) {
  for (const char* block : {"alpha", "beta", "mu"}) {
    for (const char* c : {"x", "y", "z"}) cols.push_back(prefix + block + "_" + c);
  }
  for (const char* c : {"xx", "yy", "zz", "xy", "xz", "yz"}) cols.push_back(prefix + "gamma_" + c);
}

void append_params(std::vector<Cell>& row, const AnisotropyParams* p) {
  if (p == nullptr) {
    row.insert(row.end(), AnisotropyParams::kCount, Cell{kNaN});
    return;
  }
  for (double v : p->to_array()) row.emplace_back(v);
}

void append_vec3(std::vector<Cell>& row, const Vec3* v) {
  for (int i = 0; i < 3; ++i) row.emplace_back(v ? (*v)[i] : kNaN);
}

double relative_deviation(const Vec3& value, const Vec3& reference) {
  const double scale = reference.norm();
  return scale > 0.0 ? (value - reference).norm() / scale : (value - reference).norm();
}

CommandResult effective_params_cmd(const ExperimentConfig& cfg) {
  CommandResult r;
  Table& t = r.table;
  t.columns = {"lambda", "status"};
  append_param_columns(t.columns, "");
  for (const char* c : {"lambda_beta", "lambda_alpha", "near_resonance", "in_trust_region"}) t.columns.push_back(c);
  for (const char* b : {"alpha", "beta", "mu", "gamma"}) {
    t.columns.push_back(std::string(b) + "_order");
    t.columns.push_back(std::string(b) + "_change");
  }
  const AnisotropyProfile a = build_anisotropy(cfg.anisotropy);

  for (double lambda : sweep_points(cfg)) {
    std::optional<PerturbativeResult> res;
    const std::string status = guarded(cfg, lambda, r.warnings, [&] {
      res = effective_params(pulse_for(cfg, lambda), a, cfg.quadrature);
    });
    std::vector<Cell> row{lambda, status};
    append_params(row, res ? &res->params : nullptr);
    const Validity v = res ? validity_of(res->params, lambda) : Validity{kNaN, kNaN, resonance_distance(lambda) < kResonanceGuard};
    row.insert(row.end(), {v.lambda_beta, v.lambda_alpha, v.near_resonance, res ? v.in_trust_region() : false});
    for (const QuadratureInfo* info : {res ? &res->alpha_info : nullptr, res ? &res->beta_info : nullptr,
                                       res ? &res->mu_info : nullptr, res ? &res->gamma_info : nullptr}) {
      row.emplace_back(info ? static_cast<long>(info->order) : 0L);
      row.emplace_back(info ? info->change : kNaN);
    }
    t.add_row(std::move(row));
  }
  return r;
}

CommandResult propagate_cmd(const ExperimentConfig& cfg) {
  CommandResult r;
  Table& t = r.table;
  t.columns = {"lambda", "status", "steps_used", "unitarity_drift", "estimated_error",
               "det_re", "det_im", "distance_to_unperturbed"};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const std::string base = "u" + std::to_string(i) + std::to_string(j);
      t.columns.push_back(base + "_re");
      t.columns.push_back(base + "_im");
    }
  }
  const AnisotropyProfile a = build_anisotropy(cfg.anisotropy);

  for (double lambda : sweep_points(cfg)) {
    const PulseProfile p = pulse_for(cfg, lambda);
    std::optional<PropagationResult> res;
    const std::string status = guarded(cfg, lambda, r.warnings, [&] { res = propagate(p, a, cfg.propagation_tol); });
    std::vector<Cell> row{lambda, status};
    if (!res) {
      row.insert(row.end(), t.columns.size() - row.size(), Cell{kNaN});
      row[2] = 0L;
      t.add_row(std::move(row));
      continue;
    }
    const Complex det = res->gate.determinant();
    row.insert(row.end(), {res->steps_used, res->unitarity_drift, res->estimated_error, det.real(), det.imag(),
                           gate_distance(res->gate, unperturbed_full_gate(p)).frobenius_phase_free});
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        row.emplace_back(res->gate(i, j).real());
        row.emplace_back(res->gate(i, j).imag());
      }
    }
    t.add_row(std::move(row));
  }
  return r;
}

CommandResult compare_cmd(const ExperimentConfig& cfg) {
  CommandResult r;
  Table& t = r.table;
  t.columns = {"lambda", "status", "distance", "fidelity", "first_order_distance",
               "first_order_fidelity", "unitarity_drift", "steps_used", "propagation_error",
               "lambda_beta", "lambda_alpha", "near_resonance", "in_trust_region",
               "isotropic_coefficient", "discrepancy_alpha", "discrepancy_beta", "discrepancy_mu",
               "discrepancy_gamma"};
  append_param_columns(t.columns, "predicted_");
  append_param_columns(t.columns, "extracted_");
  t.columns.push_back("issues");
  const AnisotropyProfile a = build_anisotropy(cfg.anisotropy);

  for (double lambda : sweep_points(cfg)) {
    const PulseProfile p = pulse_for(cfg, lambda);
    std::optional<GateReport> rep;
    std::string status = guarded(cfg, lambda, r.warnings, [&] {
      rep = run_comparison(p, a, cfg.quadrature, cfg.propagation_tol);
    });
    std::string issues;
    if (rep) {
      for (const StageIssue& issue : rep->issues) {
        if (!issues.empty()) issues += ";";
        issues += issue.stage + ":" + std::string(to_string(issue.code));
        r.warnings.push_back(lambda_label(lambda) + ": " + issue.stage + ": " + issue.message);
      }
      if (!rep->issues.empty()) status = std::string(to_string(rep->issues.front().code));
    }
    auto opt = [](const auto& o, auto f) -> double { return o ? f(*o) : kNaN; };
    std::vector<Cell> row{lambda, status};
    if (!rep) {
      row.insert(row.end(), t.columns.size() - row.size() - 1, Cell{kNaN});
      row.emplace_back(issues);
      t.add_row(std::move(row));
      continue;
    }
    row.insert(row.end(), {
        opt(rep->distance, [](const GateDistance& d) { return d.frobenius_phase_free; }),
        opt(rep->distance, [](const GateDistance& d) { return d.fidelity; }),
        opt(rep->first_order_distance, [](const GateDistance& d) { return d.frobenius_phase_free; }),
        opt(rep->first_order_distance, [](const GateDistance& d) { return d.fidelity; }),
        rep->unitarity_drift, rep->steps_used, rep->propagation_error,
        rep->validity.lambda_beta, rep->validity.lambda_alpha, rep->validity.near_resonance,
        rep->predicted ? rep->validity.in_trust_region() : false,
        opt(rep->extracted, [](const ExtractionResult& e) { return e.isotropic_coefficient; }),
        opt(rep->discrepancy, [](const BlockDiscrepancy& d) { return d.alpha; }),
        opt(rep->discrepancy, [](const BlockDiscrepancy& d) { return d.beta; }),
        opt(rep->discrepancy, [](const BlockDiscrepancy& d) { return d.mu; }),
        opt(rep->discrepancy, [](const BlockDiscrepancy& d) { return d.gamma; })});
    append_params(row, rep->predicted ? &rep->predicted->params : nullptr);
    append_params(row, rep->extracted ? &rep->extracted->params : nullptr);
    row.emplace_back(issues);
    t.add_row(std::move(row));
  }
  return r;
}

CommandResult tailor_sweep_cmd(const ExperimentConfig& cfg) {
  CommandResult r;
  Table& t = r.table;
  t.columns = {"lambda", "status", "j0", "tau", "beta_bar_x", "beta_bar_y", "beta_bar_z",
               "closed_form_x", "closed_form_y", "closed_form_z", "closed_form_deviation",
               "reference_deviation"};
  const AnisotropyProfile a = build_anisotropy(cfg.anisotropy);
  const Vec3 beta1 = std::get<LinearInJ>(a.beta).beta1;
  const double j0_ref = cfg.pulse.at("j0_ref").get<double>();
  const Vec3 reference = closed_form_beta_bar(beta1, j0_ref, std::numbers::pi);

  double max_reference = 0.0;
  double max_closed = 0.0;
  long ok_rows = 0;
  for (double lambda : sweep_points(cfg)) {
    std::optional<PulseProfile> p;
    std::optional<Vec3> numeric, closed;
    const std::string status = guarded(cfg, lambda, r.warnings, [&] {
      p = build_pulse(cfg.pulse, lambda);
      numeric = beta_bar(*p, a, cfg.quadrature).value;
      closed = closed_form_beta_bar(beta1, p->j0(), lambda);
    });
    std::vector<Cell> row{lambda, status, p ? p->j0() : kNaN, p ? p->tau() : kNaN};
    append_vec3(row, numeric ? &*numeric : nullptr);
    append_vec3(row, closed ? &*closed : nullptr);
    if (numeric) {
      const double dc = relative_deviation(*numeric, *closed);
      const double dr = relative_deviation(*numeric, reference);
      max_closed = std::max(max_closed, dc);
      max_reference = std::max(max_reference, dr);
      ++ok_rows;
      row.insert(row.end(), {dc, dr});
    } else {
      row.insert(row.end(), {kNaN, kNaN});
    }
    t.add_row(std::move(row));
  }
  const bool constant = ok_rows > 0 && max_reference <= kTailorTolerance;
  t.summary = {{"rows_ok", ok_rows},
               {"max_reference_deviation", ok_rows ? max_reference : kNaN},
               {"max_closed_form_deviation", ok_rows ? max_closed : kNaN},
               {"constant_within_1e-9", constant}};
  if (ok_rows > 0 && !constant) {
    r.warnings.push_back("tailored beta_bar varies by " + format_double(max_reference) + " across the sweep");
    r.exit_code = kExitNumerical;
  }
  return r;
}

CommandResult figure1_cmd(const ExperimentConfig& cfg) {
  CommandResult r;
  Table& t = r.table;
  const double j0_ref = cfg.pulse.at("j0_ref").get<double>();
  const double tau_ref = cfg.pulse.at("tau_ref").get<double>();

  std::vector<PulseProfile> pulses;
  t.columns = {"t_over_tau_ref"};
  for (double lambda : sweep_points(cfg)) {
    try {
      pulses.push_back(build_pulse(cfg.pulse, lambda));
    } catch (const Error& e) {
      throw ConfigError("figure1 at " + lambda_label(lambda) + ": " + e.what());
    }
    char name[64];
    std::snprintf(name, sizeof name, "j_over_j0_ref_lambda_%.6g", lambda);
    t.columns.push_back(name);
  }
  const auto widest = std::max_element(pulses.begin(), pulses.end(), [](const auto& x, const auto& y) {
    return x.tau() < y.tau();
  });
  const TimeGrid w = widest->window();
  constexpr int kSamples = 1001;
  for (int k = 0; k < kSamples; ++k) {
    const double time = w.t_min + (w.t_max - w.t_min) * k / (kSamples - 1);
    std::vector<Cell> row{time / tau_ref};
    for (const PulseProfile& p : pulses) row.emplace_back(p.j(time) / j0_ref);
    t.add_row(std::move(row));
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < pulses.size(); ++i) decreasing = decreasing && pulses[i].j0() < pulses[i - 1].j0();
  t.summary = {{"time_unit", tau_ref}, {"height_unit", j0_ref}, {"peaks_strictly_decreasing", decreasing}};
  return r;
}

CommandResult scaling_cmd(const ExperimentConfig& cfg) {
  CommandResult r;
  Table& t = r.table;
  t.columns = {"scale", "first_order_distance", "second_order_distance", "alpha_norm", "beta_norm"};
  const PulseProfile p = build_pulse(cfg.pulse);
  const AnisotropyProfile a = build_anisotropy(cfg.anisotropy);
  ScalingStudy study;
  guarded(cfg, p.lambda(), r.warnings, [&] {
    study = scaling_study(p, a, cfg.scales, cfg.quadrature, cfg.propagation_tol);
  });
  if (study.rows.empty()) {
    throw NumericalFailure("scaling failed at " + lambda_label(p.lambda()) + ": " + r.warnings.back());
  }
  for (const ScalingRow& row : study.rows) {
    t.add_row({row.scale, row.first_order_distance, row.second_order_distance, row.alpha_norm, row.beta_norm});
  }
  const bool present = study.first_order_slope && study.second_order_slope;
  t.summary = {{"lambda", p.lambda()},
               {"first_order_slope", study.first_order_slope.value_or(kNaN)},
               {"second_order_slope", study.second_order_slope.value_or(kNaN)},
               {"slopes_present", present}};
  if (!present) r.warnings.push_back("distances at the propagation noise floor; slopes not reported");
  return r;
}

}  // namespace

CommandResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::EffectiveParams: return effective_params_cmd(cfg);
    case Experiment::Propagate: return propagate_cmd(cfg);
    case Experiment::Compare: return compare_cmd(cfg);
    case Experiment::TailorSweep: return tailor_sweep_cmd(cfg);
    case Experiment::Figure1: return figure1_cmd(cfg);
    case Experiment::Scaling: return scaling_cmd(cfg);
  }
  throw ConfigError("unknown experiment");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pulsed anisotropic exchange gates: effective Hamiltonians and brute-force checks"};
  app.name("spinpulse");
  std::string command;
  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
  std::optional<double> rtol;
  std::optional<double> tol;
  std::vector<std::string> names;
  for (Experiment e : {Experiment::EffectiveParams, Experiment::Propagate, Experiment::Compare,
                       Experiment::TailorSweep, Experiment::Figure1, Experiment::Scaling}) {
    names.push_back(to_string(e));
  }
  app.add_option("command", command, "Experiment to run")->required()->check(CLI::IsMember(names));
  app.add_option("--config", config_path, "JSON config, or an earlier output file")->required();
  app.add_option("--out", out_path, "Output file (default: config 'output', else stdout)");
  app.add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  app.add_option("--rtol", rtol, "Quadrature relative tolerance");
  app.add_option("--tol", tol, "Propagation tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
  }

  ExperimentConfig cfg;
  CommandResult result;
  try {
    Overrides o;
    o.output = out_path;
    if (format) o.format = *format == "csv" ? OutputFormat::Csv : OutputFormat::JsonLines;
    o.rtol = rtol;
    o.tol = tol;
    cfg = parse_config(load_config_file(config_path), *parse_experiment(command), o);
    result = run_experiment(cfg);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "numerical failure: " << command << ": " << e.what() << '\n';
    return kExitNumerical;
  }

  std::ostringstream text;
  write_header(text, cfg);
  write_table(text, result.table, cfg.format);
  if (cfg.output) {
    std::ofstream file(*cfg.output, std::ios::binary);
    if (!(file << text.str())) {
      err << "config error: cannot write '" << *cfg.output << "'\n";
      return kExitConfig;
    }
  } else {
    out << text.str();
  }
  for (const std::string& w : result.warnings) err << "warning: " << w << '\n';
  return result.exit_code;
}

}  // namespace spinpulse::cli
