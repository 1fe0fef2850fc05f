#include "waveuio/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include "waveuio/certificates.hpp"
#include "waveuio/errors.hpp"
#include "waveuio/io.hpp"
#include "waveuio/scenarios.hpp"
#include "waveuio/series_csv.hpp"
#include "waveuio/synthesis.hpp"
#include "waveuio/wavesim.hpp"

#ifndef WAVEUIO_VERSION
#define WAVEUIO_VERSION "dev"
#endif

namespace waveuio::cli {

namespace fs = std::filesystem;

namespace {

SystemSpec load_valid_system(const fs::path& path, std::ostream& err) {
  SystemSpec sys = system_from_json(read_json_file(path));
  const ValidationReport report = validate_system(sys);
  for (const auto& w : report.warnings) err << "warning: " << path.string() << ": " << w << '\n';
  if (!report.ok()) {
    std::string msg = "invalid system '" + path.string() + "':";
    for (const auto& v : report.violations) msg += "\n  - " + v;
    throw ConfigError(msg);
  }
  return sys;
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

// p and g are reported when P and Gamma are scalar multiples of I.
std::optional<double> scalar_of(const Matrix& m) {
  const double s = m(0, 0);
  if ((m - s * Matrix::Identity(m.rows(), m.cols())).norm() == 0.0) return s;
  return std::nullopt;
}

Json certificate_document(const Certificate& c) {
  Json j = to_json(c);
  if (auto p = scalar_of(c.P)) j["p"] = *p;
  if (auto g = scalar_of(c.Gamma)) j["g"] = *g;
  return j;
}

SearchAxis axis_from_json(const Json& j, const char* name, std::size_t default_points) {
  if (!j.contains(name)) throw ConfigError(std::string("ranges: missing axis '") + name + "'");
  const Json& a = j.at(name);
  if (!a.is_array() || a.size() < 2 || a.size() > 3) {
    throw ConfigError(std::string("ranges: axis '") + name + "' must be [lo, hi] or [lo, hi, points]");
  }
  SearchAxis axis;
  axis.lo = a[0].get<double>();
  axis.hi = a[1].get<double>();
  axis.points = a.size() == 3 ? a[2].get<std::size_t>() : default_points;
  return axis;
}

void print_report(std::ostream& out, const char* title, const CertificateReport& r) {
  out << title << ": " << (r.pass ? "pass" : "FAIL") << '\n';
  auto line = [&](const char* name, const Condition& c) {
    out << "  " << name << " max eig = " << format_double(c.max_eig)
        << (c.holds ? "  (< 0)" : "  (not < 0)") << '\n';
  };
  if (r.pi) line("Pi", *r.pi);
  if (r.second_ineq) line("-dPD1+dP^2+g^2T'T", *r.second_ineq);
  if (r.theta) line("Theta", *r.theta);
  if (r.a44_max_eig) out << "  a44 max eig = " << format_double(*r.a44_max_eig) << '\n';
  line("Gamma-I", r.gamma_condition);
  out << "  delta = " << format_double(r.delta) << ", bound = " << format_double(r.delta_bound)
      << (r.delta_ok ? "  (ok)" : "  (violated)") << '\n';
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_synthesize(const SynthesizeArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const SystemSpec sys = load_valid_system(args.system, err);
    const SynthesisSolution sol = solve_scalar_m(sys, args.alpha_scale);
    ensure_parent(args.out);
    write_json_file(args.out, to_json(sol));
    out << "observer written to " << args.out.string() << " (alpha = " << format_double(sol.alpha)
        << ", null space dimension " << sol.nullspace_dim
        << ", max residual = " << format_double(sol.residuals.max_residual) << ")\n";
    return kOk;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
}

int cmd_certify(const CertifyArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const SystemSpec sys = load_valid_system(args.system, err);
    const ObserverSpec obs = observer_from_json(read_json_file(args.observer));
    require_consistent_shapes(sys, obs);

    Json doc;
    bool ok = false;
    if (args.mode == "check") {
      if (!args.certificate) throw ConfigError("check mode needs --cert <certificate.json>");
      Certificate cert = certificate_from_json(read_json_file(*args.certificate), sys.n);
      if (args.mu) cert.mu = *args.mu;
      const CertificateReport t1 = check_theorem1(sys, obs, cert);
      doc = certificate_document(cert);
      doc["mode"] = "check";
      doc["report"]["stability"] = to_json(t1);
      print_report(out, "asymptotic stability", t1);
      ok = t1.pass;
      if (cert.mu) {
        const CertificateReport t2 = check_theorem2(sys, obs, cert);
        doc["report"]["hinf"] = to_json(t2);
        print_report(out, "H-infinity performance", t2);
        ok = ok && t2.pass;
      }
    } else if (args.mode == "search") {
      if (!args.ranges) throw ConfigError("search mode needs --ranges <ranges.json>");
      const Json r = read_json_file(*args.ranges);
      const std::size_t points = r.value("points", std::size_t{20});
      SearchSpec spec;
      spec.p = axis_from_json(r, "p", points);
      spec.g = axis_from_json(r, "g", points);
      spec.delta = axis_from_json(r, "delta", points);
      if (r.contains("mu")) spec.mu = axis_from_json(r, "mu", points);
      spec.threads = args.threads;
      const SearchResult res = search_certificate(sys, obs, spec);
      doc = certificate_document(res.certificate);
      doc["mode"] = "search";
      doc["feasible"] = res.feasible;
      doc["evaluated"] = res.evaluated;
      doc["report"][spec.mu ? "hinf" : "stability"] = to_json(res.report);
      print_report(out, res.feasible ? "best certificate" : "least-violating point", res.report);
      if (!res.feasible) {
        out << "no feasible grid point; blocking condition(s): "
            << join(res.report.failed_conditions()) << '\n';
      }
      ok = res.feasible;
    } else {
      throw ConfigError("unknown certify mode '" + args.mode + "' (expected check or search)");
    }
    doc["pass"] = ok;
    ensure_parent(args.out);
    write_json_file(args.out, doc);
    return ok ? kOk : kCertificateFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  Json manifest = {{"tool", "waveuio"},
                   {"version", WAVEUIO_VERSION},
                   {"command", "simulate"},
                   {"inputs",
                    {{"system", args.system.string()},
                     {"observer", args.observer.string()},
                     {"scenario", args.scenario}}},
                   {"outputs", Json::array()}};
  int code = kOk;
  std::error_code ec;
  fs::create_directories(args.out_dir, ec);

  try {
    SimulationSetup setup;
    setup.system = load_valid_system(args.system, err);
    setup.observer = observer_from_json(read_json_file(args.observer));

    Scenario scenario;
    if (fs::exists(args.scenario)) {
      scenario = scenario_from_json(read_json_file(args.scenario), setup.system);
    } else if (is_builtin_scenario(args.scenario)) {
      scenario = builtin_scenario(args.scenario);
    } else {
      throw ConfigError("scenario '" + args.scenario + "' is neither a file nor a built-in name");
    }
    GridConfig grid = scenario.grid;
    if (args.nx) grid.nx = *args.nx;
    if (args.dt) grid.dt = *args.dt;
    if (args.tfinal) grid.t_final = *args.tfinal;
    if (args.override_cfl) grid.override_cfl = true;
    if (is_builtin_scenario(scenario.name) && grid.nx != scenario.grid.nx) {
      resample_builtin(scenario, grid);
    }
    scenario.grid = grid;

    manifest["parameters"] = {{"scenario", scenario.name}, {"grid", to_json(grid)},
                              {"control", to_json(scenario.control)},
                              {"disturbance", to_json(scenario.disturbance)}};
    if (scenario.certificate) manifest["parameters"]["certificate"] = certificate_document(*scenario.certificate);

    setup.initial = scenario.initial;
    setup.control = scenario.control;
    setup.disturbance = scenario.disturbance;
    setup.grid = grid;
    setup.certificate = scenario.certificate;

    const SimResult result = simulate(setup);
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';

    const fs::path series = args.out_dir / "series.csv";
    const fs::path snapshots = args.out_dir / "snapshots.csv";
    {
      std::ofstream os(series);
      if (!os) throw ConfigError("cannot write '" + series.string() + "'");
      write_series_csv(os, result);
    }
    manifest["outputs"].push_back(series.string());
    {
      std::ofstream os(snapshots);
      if (!os) throw ConfigError("cannot write '" + snapshots.string() + "'");
      write_snapshots_csv(os, result);
    }
    manifest["outputs"].push_back(snapshots.string());

    const double e0 = result.e_norm.front();
    const double e1 = result.e_norm.back();
    Json summary = {{"steps", result.times.size() - 1},
                    {"courant", result.courant},
                    {"e_norm_initial", e0},
                    {"e_norm_final", e1},
                    {"decay_ratio", e0 > 0.0 ? e1 / e0 : 0.0}};
    if (result.hinf_ratio) summary["hinf_ratio"] = *result.hinf_ratio;
    manifest["summary"] = summary;
    manifest["warnings"] = result.warnings;

    out << "simulated " << scenario.name << ": " << result.times.size() - 1 << " steps, ||e|| "
        << format_double(e0) << " -> " << format_double(e1);
    if (result.hinf_ratio) out << ", hinf ratio " << format_double(*result.hinf_ratio);
    out << '\n';
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    manifest["error"] = e.what();
    manifest["diverged_at_step"] = e.step();
    code = kDiverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    manifest["error"] = e.what();
    code = kInvalidInput;
  }

  const fs::path manifest_path = args.out_dir / "manifest.json";
  manifest["outputs"].push_back(manifest_path.string());
  manifest["status"] = code == kOk ? "ok" : "error";
  manifest["exit_code"] = code;
  manifest["duration_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    write_json_file(manifest_path, manifest);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    if (code == kOk) code = kInvalidInput;
  }
  return code;
}

int cmd_report(const ReportArgs& args, std::ostream& out, std::ostream& err) {
  try {
    std::ifstream in(args.series);
    if (!in) throw ConfigError("cannot open '" + args.series.string() + "'");
    const CsvTable table = read_csv(in);
    for (const char* col : {"t", "e_norm", "eps_norm", "xi", "d_norm", "int_e_sq", "int_d_sq"}) {
      if (!table.has(col)) throw ConfigError(std::string("series is missing column '") + col + "'");
    }
    if (table.rows < 2) throw ConfigError("insufficient data: series needs at least two rows");

    const auto& e = table.at("e_norm");
    const auto& xi = table.at("xi");
    const double e0 = e.front();
    const double e1 = e.back();
    const bool degenerate = e0 == 0.0;
    const double decay = degenerate ? 0.0 : e1 / e0;

    bool has_xi = true;
    double max_xi_increase = 0.0;
    for (std::size_t k = 0; k < xi.size(); ++k) {
      if (std::isnan(xi[k])) has_xi = false;
    }
    if (has_xi) {
      max_xi_increase = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 1; k < xi.size(); ++k) {
        max_xi_increase = std::max(max_xi_increase, xi[k] - xi[k - 1]);
      }
    }

    out << "rows: " << table.rows << '\n';
    out << "t_final: " << format_double(table.at("t").back()) << '\n';
    out << "e_norm_initial: " << format_double(e0) << '\n';
    out << "e_norm_final: " << format_double(e1) << '\n';
    out << "decay_ratio: " << format_double(decay) << (degenerate ? " (degenerate: zero initial error)" : "")
        << '\n';
    if (has_xi) {
      out << "max_xi_increase: " << format_double(max_xi_increase) << '\n';
    } else {
      out << "max_xi_increase: n/a (no certificate)\n";
    }
    const double ed = table.at("int_e_sq").back();
    const double dd = table.at("int_d_sq").back();
    if (dd > 0.0) {
      out << "hinf_ratio: " << format_double(ed / dd) << '\n';
    } else if (degenerate && ed == 0.0) {
      out << "hinf_ratio: 0 (degenerate: no disturbance and no error)\n";
    } else {
      out << "hinf_ratio: n/a (d == 0)\n";
    }
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
}

// ---------------------------------------------------------------------------

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unknown-input observer synthesis, certification and simulation for coupled wave equations"};
  app.set_version_flag("--version", std::string(WAVEUIO_VERSION));
  app.require_subcommand(1);

  SynthesizeArgs syn;
  auto* synthesize = app.add_subcommand("synthesize", "Solve the observer matching equations with M = alpha I");
  synthesize->add_option("system", syn.system, "system.json")->required();
  synthesize->add_option("--alpha-scale", syn.alpha_scale, "Value of alpha in M = alpha I");
  synthesize->add_option("--out", syn.out, "Output observer.json");

  CertifyArgs cer;
  auto* certify = app.add_subcommand("certify", "Check or search stability / H-infinity certificates");
  certify->add_option("system", cer.system, "system.json")->required();
  certify->add_option("observer", cer.observer, "observer.json")->required();
  certify->add_option("--mode", cer.mode, "check or search")->check(CLI::IsMember({"check", "search"}));
  certify->add_option("--cert", cer.certificate, "certificate.json to check");
  certify->add_option("--ranges", cer.ranges, "ranges.json for search mode");
  certify->add_option("--mu", cer.mu, "H-infinity level (overrides the certificate)");
  certify->add_option("--threads", cer.threads, "Search worker threads (0 = all cores)");
  certify->add_option("--out", cer.out, "Output certificate.json");

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Co-simulate plant and observer");
  simulate_cmd->add_option("system", sim.system, "system.json")->required();
  simulate_cmd->add_option("observer", sim.observer, "observer.json")->required();
  simulate_cmd->add_option("scenario", sim.scenario, "scenario.json or built-in name")->required();
  simulate_cmd->add_option("--nx", sim.nx, "Grid intervals N");
  simulate_cmd->add_option("--dt", sim.dt, "Time step");
  simulate_cmd->add_option("--tfinal", sim.tfinal, "Final time");
  simulate_cmd->add_flag("--override-cfl", sim.override_cfl, "Run even above the Courant limit");
  simulate_cmd->add_option("--out", sim.out_dir, "Output directory");

  ReportArgs rep;
  auto* report = app.add_subcommand("report", "Summarize a series.csv");
  report->add_option("series", rep.series, "series.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kInvalidInput;
  }

  if (*synthesize) return cmd_synthesize(syn, out, err);
  if (*certify) return cmd_certify(cer, out, err);
  if (*simulate_cmd) return cmd_simulate(sim, out, err);
  if (*report) return cmd_report(rep, out, err);
  return kInvalidInput;
}

}  // namespace waveuio::cli
