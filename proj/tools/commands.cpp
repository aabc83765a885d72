#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "spinet/csv.hpp"

namespace spinet::cli {

namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string join_path(const std::string& dir, const std::string& file) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / file).string();
}

std::string mode_name(Mode m) { return m == Mode::energy_transport ? "energy-transport" : "drift-diffusion"; }

void add_run_meta(CsvTable& t, const RunConfig& cfg, const DeviceProfile& d, const DeviceGrid& g) {
  t.add_meta("preset", d.name);
  t.add_meta("m", std::to_string(g.m));
  t.add_meta("dx", g.dx);
  t.add_meta("dt", cfg.dt);
  t.add_meta("threshold", cfg.threshold);
  t.add_meta("bias_V", d.bias_V);
  t.add_meta("thermal_voltage_V", d.thermal_voltage_V);
  t.add_meta("mode", mode_name(parse_mode(cfg.mode)));
}

CsvTable profile_table(const SimState& s, const DeviceGrid& g) {
  CsvTable t;
  t.columns = {"x", "n0", "n1", "n2", "n3", "W0", "T", "V"};
  for (int k = 0; k < g.m; ++k)
    t.rows.push_back({g.x_center(k), s.n0[k], s.nv[k][0], s.nv[k][1], s.nv[k][2], s.W0[k], s.T[k], s.V[k]});
  return t;
}

CsvTable convergence_table(const ConvergenceReport& r, int stride) {
  CsvTable t;
  t.columns = {"step", "residual"};
  const long n = static_cast<long>(r.residuals.size());
  for (long k = 0; k < n; ++k)
    if ((k + 1) % stride == 0 || k + 1 == n) t.rows.push_back({static_cast<double>(k + 1), r.residuals[k]});
  return t;
}

double max_polarization(const DeviceProfile& d) {
  double p = 0.0;
  for (const Region& r : d.regions) p = std::max(p, r.polarization);
  return p;
}

void validate_run(const RunConfig& cfg) {
  if (cfg.m < 3) throw std::invalid_argument("m must be at least 3");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(cfg.threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
  if (cfg.max_steps < 1) throw std::invalid_argument("max-steps must be positive");
  if (cfg.history_stride < 1) throw std::invalid_argument("history-stride must be positive");
  parse_mode(cfg.mode);
}

SteadyOptions steady_options(const RunConfig& cfg) {
  SteadyOptions o;
  o.dt = cfg.dt;
  o.threshold = cfg.threshold;
  o.max_steps = cfg.max_steps;
  return o;
}

MomentPoint parse_bc(const std::string& value) {
  std::istringstream is(value);
  MomentPoint p;
  if (!(is >> p.n0 >> p.W0 >> p.Wv[0] >> p.Wv[1] >> p.Wv[2]))
    throw std::invalid_argument("boundary metadata expects 'n0 W0 Wx Wy Wz', got '" + value + "'");
  return p;
}

std::string point_text(const MomentPoint& p) {
  std::ostringstream os;
  os << format_number(p.n0) << ' ' << format_number(p.W0) << ' ' << format_number(p.Wv[0]) << ' '
     << format_number(p.Wv[1]) << ' ' << format_number(p.Wv[2]);
  return os.str();
}

}  // namespace

std::string output_directory(const std::string& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv("SPINET_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

Mode parse_mode(const std::string& name) {
  if (name == "energy-transport") return Mode::energy_transport;
  if (name == "drift-diffusion") return Mode::drift_diffusion;
  throw std::invalid_argument("unknown mode '" + name + "'; valid modes: energy-transport, drift-diffusion");
}

DeviceProfile resolve_profile(const DeviceSelection& sel) {
  DeviceProfile d = sel.config_path.empty() ? preset_by_name(sel.preset) : read_profile_file(sel.config_path);
  if (sel.polarization >= 0.0) {
    if (!(sel.polarization < 1.0)) throw std::invalid_argument("polarization must lie in [0,1)");
    d = d.with_polarization(sel.polarization);
  }
  if (sel.has_bias) d.bias_V = sel.bias_V;
  d.validate();
  return d;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& err) {
  DeviceProfile d;
  DeviceGrid g;
  try {
    validate_run(cfg);
    d = resolve_profile(cfg.device);
    g = sample_on_grid(d, cfg.m);
  } catch (const std::exception& e) {
    err << "simulate: " << e.what() << '\n';
    return invalid_input;
  }
  SteadyResult r;
  try {
    const auto progress = [&](long s, double res) {
      if (!cfg.quiet && s % 50000 == 0) err << "step " << s << " residual " << format_number(res) << '\n';
    };
    r = steady_state(g, scheme_params(d, parse_mode(cfg.mode)), steady_options(cfg), progress);
  } catch (const std::invalid_argument& e) {
    err << "simulate: " << e.what() << '\n';
    return invalid_input;
  } catch (const std::exception& e) {
    err << "simulate: run failed: " << e.what() << '\n';
    return not_converged;
  }
  const std::string dir = output_directory(cfg.output_dir);
  try {
    CsvTable prof = profile_table(r.state, g);
    add_run_meta(prof, cfg, d, g);
    prof.add_meta("polarization", max_polarization(d));
    prof.add_meta("steps", std::to_string(r.report.steps));
    prof.add_meta("final_residual", r.report.final_residual);
    prof.add_meta("converged", r.report.converged ? "true" : "false");
    write_csv_file(join_path(dir, "n_profile.csv"), prof);
    CsvTable conv = convergence_table(r.report, cfg.history_stride);
    add_run_meta(conv, cfg, d, g);
    write_csv_file(join_path(dir, "convergence.csv"), conv);
  } catch (const std::exception& e) {
    err << "simulate: " << e.what() << '\n';
    return invalid_input;
  }
  if (!r.report.converged) {
    err << "simulate: no steady state after " << r.report.steps << " steps, residual "
        << format_number(r.report.final_residual) << " (trace in convergence.csv)\n";
    return not_converged;
  }
  return ok;
}

int cmd_sweep(const SweepConfig& cfg, std::ostream& err) {
  DeviceProfile base;
  try {
    validate_run(cfg.run);
    if (cfg.p_values.empty()) throw std::invalid_argument("empty polarization list");
    for (double p : cfg.p_values)
      if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("sweep value " + fmt_g(p) + " outside [0,1)");
    base = resolve_profile(cfg.run.device);
    sample_on_grid(base, cfg.run.m);
  } catch (const std::exception& e) {
    err << "sweep: " << e.what() << '\n';
    return invalid_input;
  }
  const std::size_t n = cfg.p_values.size();
  std::vector<SteadyResult> results(n);
  std::vector<std::string> failures(n);
  std::vector<DeviceGrid> grids(n);
  {
    std::vector<std::thread> workers;
    for (std::size_t j = 0; j < n; ++j) {
      workers.emplace_back([&, j] {
        try {
          const DeviceProfile d = base.with_polarization(cfg.p_values[j]);
          grids[j] = sample_on_grid(d, cfg.run.m);
          results[j] = steady_state(grids[j], scheme_params(d, parse_mode(cfg.run.mode)), steady_options(cfg.run));
          if (!results[j].report.converged) failures[j] = "not converged";
        } catch (const std::exception& e) {
          failures[j] = e.what();
        }
      });
    }
    for (auto& w : workers) w.join();
  }
  const std::string dir = output_directory(cfg.run.output_dir);
  CsvTable temps, summary;
  temps.columns.push_back("x");
  summary.columns = {"p", "max_T", "converged", "steps", "final_residual"};
  const DeviceGrid g = sample_on_grid(base, cfg.run.m);
  std::vector<std::size_t> kept;
  for (std::size_t j = 0; j < n; ++j) {
    const SteadyResult& r = results[j];
    const bool have_state = r.state.size() == cfg.run.m;
    const double maxT = have_state ? *std::max_element(r.state.T.begin(), r.state.T.end()) : 0.0;
    summary.rows.push_back({cfg.p_values[j], maxT, failures[j].empty() ? 1.0 : 0.0,
                            static_cast<double>(r.report.steps), r.report.final_residual});
    if (have_state) {
      kept.push_back(j);
      temps.columns.push_back("T_p" + fmt_g(cfg.p_values[j]));
    }
    if (!failures[j].empty()) err << "sweep: p = " << fmt_g(cfg.p_values[j]) << ": " << failures[j] << '\n';
  }
  for (int k = 0; k < g.m; ++k) {
    std::vector<double> row{g.x_center(k)};
    for (std::size_t j : kept) row.push_back(results[j].state.T[k]);
    temps.rows.push_back(std::move(row));
  }
  for (CsvTable* t : {&temps, &summary}) add_run_meta(*t, cfg.run, base, g);
  try {
    write_csv_file(join_path(dir, "sweep_T.csv"), temps);
    write_csv_file(join_path(dir, "sweep_summary.csv"), summary);
  } catch (const std::exception& e) {
    err << "sweep: " << e.what() << '\n';
    return invalid_input;
  }
  for (const auto& f : failures)
    if (!f.empty()) return not_converged;
  return ok;
}

int cmd_entropy_check(const EntropyCheckConfig& cfg, std::ostream& err) {
  EntropyTrajectory tr;
  try {
    if (cfg.run.m < 3) throw std::invalid_argument("m must be at least 3");
    if (!(cfg.run.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (cfg.run.steps < 1) throw std::invalid_argument("steps must be positive");
    SimState s = perturbed_uniform_state(cfg.run.m, cfg.seed, cfg.uniform ? 0.0 : cfg.amplitude);
    tr = entropy_trajectory_run(s, cfg.run);
  } catch (const std::invalid_argument& e) {
    err << "entropy-check: " << e.what() << '\n';
    return invalid_input;
  } catch (const std::exception& e) {
    err << "entropy-check: run failed: " << e.what() << '\n';
    return not_converged;
  }
  CsvTable t;
  t.columns = {"step", "H", "production", "violation"};
  const auto& series = tr.report.series;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const double v = k == 0 ? 0.0 : std::max(0.0, series[k].H - series[k - 1].H);
    t.rows.push_back({static_cast<double>(series[k].step), series[k].H, series[k].production, v});
  }
  t.add_meta("m", std::to_string(cfg.run.m));
  t.add_meta("steps", std::to_string(cfg.run.steps));
  t.add_meta("dt", cfg.run.dt);
  t.add_meta("D0", cfg.run.D0);
  t.add_meta("tau_sf", cfg.run.tau_sf);
  t.add_meta("seed", std::to_string(cfg.seed));
  t.add_meta("amplitude", cfg.uniform ? 0.0 : cfg.amplitude);
  t.add_meta("tolerance", cfg.run.tolerance);
  t.add_meta("max_violation", tr.report.max_violation);
  t.add_meta("max_mass_drift", tr.max_mass_drift);
  t.add_meta("monotone", tr.report.monotone_nonincreasing ? "true" : "false");
  try {
    write_csv_file(join_path(output_directory(cfg.output_dir), "entropy.csv"), t);
  } catch (const std::exception& e) {
    err << "entropy-check: " << e.what() << '\n';
    return invalid_input;
  }
  if (!tr.report.monotone_nonincreasing) {
    err << "entropy-check: H1 increased by " << format_number(tr.report.max_violation) << " (tolerance "
        << format_number(cfg.run.tolerance) << ")\n";
    return not_converged;
  }
  return ok;
}

int cmd_model2_step(const Model2StepConfig& cfg, std::ostream& err) {
  Model2State prev;
  Model2Boundary bc;
  CsvTable in;
  try {
    in = read_csv_file(cfg.input);
    const int cn = in.column("n0"), cw = in.column("W0");
    const int cx = in.column("Wx"), cy = in.column("Wy"), cz = in.column("Wz");
    for (const auto& row : in.rows) {
      prev.n0.push_back(row[cn]);
      prev.W0.push_back(row[cw]);
      prev.Wv.emplace_back(row[cx], row[cy], row[cz]);
    }
    if (prev.size() < 3) throw std::invalid_argument("need at least 3 cells");
    const std::string* l = in.find_meta("bc_left");
    const std::string* r = in.find_meta("bc_right");
    bc.left = l ? parse_bc(*l) : MomentPoint{prev.n0.front(), prev.W0.front(), prev.Wv.front()};
    bc.right = r ? parse_bc(*r) : MomentPoint{prev.n0.back(), prev.W0.back(), prev.Wv.back()};
    check_model2_admissible(prev, bc);
    if (!(cfg.h > 0.0) || !(cfg.tau_sf > 0.0)) throw std::invalid_argument("h and tau_sf must be positive");
  } catch (const std::exception& e) {
    err << "model2-step: " << e.what() << '\n';
    return invalid_input;
  }
  Model2Result res;
  try {
    res = solve_time_step(prev, cfg.h, cfg.tau_sf, bc, cfg.options);
  } catch (const std::exception& e) {
    err << "model2-step: " << e.what() << '\n';
    return invalid_input;
  }
  const int m = prev.size();
  CsvTable out;
  out.columns = {"x", "n0", "W0", "Wx", "Wy", "Wz"};
  if (res.state.size() == m)
    for (int k = 0; k < m; ++k)
      out.rows.push_back({(k + 0.5) / m, res.state.n0[k], res.state.W0[k], res.state.Wv[k][0], res.state.Wv[k][1],
                          res.state.Wv[k][2]});
  out.add_meta("input", cfg.input);
  out.add_meta("h", cfg.h);
  out.add_meta("tau_sf", cfg.tau_sf);
  out.add_meta("bc_left", point_text(bc.left));
  out.add_meta("bc_right", point_text(bc.right));
  out.add_meta("initial_iterate", "transform_forward(previous state)");
  const Model2Certificate& c = res.certificate;
  const char* status = res.status == Model2Status::converged       ? "converged"
                       : res.status == Model2Status::not_converged ? "not_converged"
                                                                   : "certificate_violation";
  out.footer = {{"certificate.status", status},
                {"certificate.iterations", std::to_string(res.iterations)},
                {"certificate.residual", format_number(c.residual)},
                {"certificate.min_n0", format_number(c.min_n0)},
                {"certificate.min_W0", format_number(c.min_W0)},
                {"certificate.min_W0_over_n0", format_number(c.min_W0_over_n0)},
                {"certificate.min_v0_minus_abs_v", format_number(c.min_v_margin)},
                {"certificate.max_u_over_v0_times_eps", format_number(c.truncation_ratio)},
                {"certificate.sup_abs_W_over_W0", format_number(c.sup_W_ratio)},
                {"certificate.margin", format_number(c.margin)},
                {"certificate.direct_residual", format_number(c.direct_residual)},
                {"certificate.eps", format_number(c.eps)},
                {"certificate.H2_prev", format_number(c.H2_prev)},
                {"certificate.H2", format_number(c.H2)}};
  try {
    write_csv_file(join_path(output_directory(cfg.output_dir), "model2_state.csv"), out);
  } catch (const std::exception& e) {
    err << "model2-step: " << e.what() << '\n';
    return invalid_input;
  }
  if (res.status == Model2Status::not_converged) {
    err << "model2-step: no convergence after " << res.iterations << " iterations, residual "
        << format_number(c.residual) << '\n';
    return not_converged;
  }
  if (res.status == Model2Status::certificate_violation) {
    err << "model2-step: certificate violated:";
    for (const auto& v : c.violations()) err << " [" << v << "]";
    err << '\n';
    return certificate_violation;
  }
  return ok;
}

int cmd_presets(const std::string& show, std::ostream& out, std::ostream& err) {
  if (show.empty()) {
    for (const auto& n : preset_names()) out << n << '\n';
    return ok;
  }
  try {
    write_profile(out, preset_by_name(show));
  } catch (const std::exception& e) {
    err << "presets: " << e.what() << '\n';
    return invalid_input;
  }
  return ok;
}

namespace {

void add_device_options(CLI::App* app, DeviceSelection& sel) {
  app->add_option("--preset", sel.preset, "built-in device (see 'presets')");
  app->add_option("--config", sel.config_path, "device config file; overrides --preset");
  app->add_option("--polarization,-p", sel.polarization, "polarization in the magnetic regions");
  app->add_option_function<double>(
      "--bias", [&sel](double v) {
        sel.has_bias = true;
        sel.bias_V = v;
      },
      "applied bias in volts");
}

void add_run_options(CLI::App* app, RunConfig& cfg) {
  add_device_options(app, cfg.device);
  app->add_option("--m", cfg.m, "cell count")->capture_default_str();
  app->add_option("--dt", cfg.dt, "time step")->capture_default_str();
  app->add_option("--threshold", cfg.threshold, "steady-state threshold")->capture_default_str();
  app->add_option("--max-steps", cfg.max_steps, "step limit")->capture_default_str();
  app->add_option("--mode", cfg.mode, "energy-transport or drift-diffusion")->capture_default_str();
  app->add_option("--output-dir,-o", cfg.output_dir, "output directory (default $SPINET_OUTPUT_DIR or .)");
  app->add_option("--history-stride", cfg.history_stride, "write every n-th residual")->capture_default_str();
  app->add_flag("--quiet,-q", cfg.quiet, "no progress output");
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"spinet: spin energy-transport simulator"};
  app.require_subcommand(1);

  RunConfig sim;
  auto* simulate = app.add_subcommand("simulate", "steady state of a device");
  add_run_options(simulate, sim);

  SweepConfig sweep;
  auto* sw = app.add_subcommand("sweep", "steady states over a list of polarizations");
  add_run_options(sw, sweep.run);
  sw->add_option("--p-list", sweep.p_values, "comma-separated polarizations")->delimiter(',')->capture_default_str();

  EntropyCheckConfig ent;
  auto* ec = app.add_subcommand("entropy-check", "field-free zero-flux entropy trajectory");
  ec->add_option("--m", ent.run.m, "cell count")->capture_default_str();
  ec->add_option("--steps", ent.run.steps, "number of steps")->capture_default_str();
  ec->add_option("--dt", ent.run.dt, "time step")->capture_default_str();
  ec->add_option("--D0", ent.run.D0, "diffusion coefficient")->capture_default_str();
  ec->add_option("--tau-sf", ent.run.tau_sf, "spin-flip time")->capture_default_str();
  ec->add_option("--tolerance", ent.run.tolerance, "per-step increase allowed")->capture_default_str();
  ec->add_option("--seed", ent.seed, "perturbation seed")->capture_default_str();
  ec->add_option("--amplitude", ent.amplitude, "perturbation amplitude")->capture_default_str();
  ec->add_flag("--uniform", ent.uniform, "start from the uniform state");
  ec->add_option("--output-dir,-o", ent.output_dir, "output directory");

  Model2StepConfig m2;
  std::string spin_source = "lagged";
  auto* ms = app.add_subcommand("model2-step", "one time step of the second model");
  ms->add_option("--input,-i", m2.input, "previous state CSV (n0, W0, Wx, Wy, Wz)")->required();
  ms->add_option("--dt", m2.h, "time step h")->capture_default_str();
  ms->add_option("--tau-sf", m2.tau_sf, "spin-flip time")->capture_default_str();
  ms->add_option("--tol", m2.options.tol, "fixed-point tolerance")->capture_default_str();
  ms->add_option("--max-iter", m2.options.max_iter, "iteration limit")->capture_default_str();
  ms->add_option("--damping", m2.options.damping, "initial damping")->capture_default_str();
  ms->add_option("--eps", m2.options.eps_trunc, "truncation epsilon (<= 0: automatic)")->capture_default_str();
  ms->add_option("--spin-source", spin_source, "lagged or explicit")->capture_default_str();
  ms->add_option("--output-dir,-o", m2.output_dir, "output directory");

  std::string show;
  auto* pr = app.add_subcommand("presets", "list built-in devices");
  pr->add_option("--show", show, "print the config of one preset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : invalid_input;
  }

  if (*simulate) return cmd_simulate(sim, std::cerr);
  if (*sw) return cmd_sweep(sweep, std::cerr);
  if (*ec) return cmd_entropy_check(ent, std::cerr);
  if (*ms) {
    if (spin_source == "lagged") {
      m2.options.spin_source = SpinSource::lagged_coefficient;
    } else if (spin_source == "explicit") {
      m2.options.spin_source = SpinSource::explicit_source;
    } else {
      std::cerr << "model2-step: unknown spin source '" << spin_source << "'; valid: lagged, explicit\n";
      return invalid_input;
    }
    return cmd_model2_step(m2, std::cerr);
  }
  return cmd_presets(show, std::cout, std::cerr);
}

}  // namespace spinet::cli
