// Command-line front end: analyze | gqe | flow | sweep.
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "admflow/admflow.hpp"

namespace fs = std::filesystem;
using namespace admflow;
using ordered_json = nlohmann::ordered_json;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::optional<int> n_override;
  std::optional<double> t_end_override;
};

RunConfig load_config(const CommonOpts& opts) {
  std::ifstream in(opts.config_path);
  if (!in)
    throw Error(ErrorKind::InvalidInput,
                "cannot open config file: " + opts.config_path);
  std::stringstream ss;
  ss << in.rdbuf();
  RunConfig cfg = parse_config(ss.str());
  if (!opts.out_dir.empty()) cfg.outputs.dir = opts.out_dir;
  if (opts.n_override) cfg.flow.n = *opts.n_override;
  if (opts.t_end_override) cfg.flow.t_end = *opts.t_end_override;
  validate(cfg.flow);
  return cfg;
}

void ensure_out_dir(const RunConfig& cfg) {
  fs::create_directories(cfg.outputs.dir);
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
  fs::path p = fs::path(cfg.outputs.dir) / name;
  std::ofstream os(p);
  if (!os)
    throw Error(ErrorKind::InvalidInput, "cannot write " + p.string());
  return os;
}

ordered_json poly_json(const Polynomial& p) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : p.coefficients()) arr.push_back(format_rational(c));
  return arr;
}

struct Analysis {
  InvariantBundle inv;
  SingleRootResult root;
  bool hypothesis_met = false;
  // below valid only when hypothesis_met
  double k0 = 0.0;
  double mt0 = 0.0;
  FanoParameters fano;
  bool anticanonical = false;
  StabilityReport stability;
  ProfileReport profile_report;
};

Analysis analyze_data(const AdmissibleData& data) {
  Analysis a{build_invariants(data), {}, false};
  boundary_structure_check(a.inv);
  a.root = single_root_check(a.inv);
  a.mt0 = mt(a.inv, 0.0);
  a.fano = fano_parameters(data);
  a.anticanonical = fano_residual(a.inv, a.fano).is_zero();
  if (!a.root.single) return a;
  a.hypothesis_met = true;
  a.k0 = solve_k0(a.inv);
  GQEProfile prof = build_profile(a.inv, a.k0);
  a.profile_report = verify_profile(prof);
  a.stability = q_function(prof).report;
  return a;
}

ordered_json analysis_json(const Analysis& a) {
  ordered_json j;
  j["p_c"] = poly_json(a.inv.p_c);
  j["P"] = poly_json(a.inv.P);
  j["P_deflated"] = poly_json(a.inv.P_deflated);
  j["alpha0"] = format_rational(a.inv.alpha0);
  j["beta0"] = format_rational(a.inv.beta0);
  j["mean_scalar_curvature"] = format_rational(a.inv.beta0 / a.inv.alpha0);
  j["root_count"] = a.root.count;
  if (a.root.bracket) {
    j["root_bracket"] = {format_rational(a.root.bracket->lo),
                         format_rational(a.root.bracket->hi)};
    j["root"] = a.root.bracket->midpoint();
  }
  j["hypothesis_met"] = a.hypothesis_met;
  j["fano"] = {{"lambda", format_rational(a.fano.lambda)},
               {"C", format_rational(a.fano.C)},
               {"m", a.fano.m},
               {"anticanonical", a.anticanonical}};
  if (!a.hypothesis_met) return j;
  j["k0"] = a.k0;
  j["mt0"] = a.mt0;
  j["profile_ok"] = a.profile_report.all_pass;
  j["stability"] = {{"q_min", a.stability.q_min},
                    {"q_max", a.stability.q_max},
                    {"q_boundary", {a.stability.q_boundary_m1,
                                    a.stability.q_boundary_p1}},
                    {"condition_holds", a.stability.condition_holds},
                    {"xi_eta_min", a.stability.xi_eta_min},
                    {"log_concavity_holds", a.stability.log_concavity_holds}};
  return j;
}

void print_analysis(std::ostream& os, const Analysis& a) {
  os << "p_c      = " << a.inv.p_c.to_string("z") << "\n";
  os << "P        = " << a.inv.P.to_string() << "\n";
  os << "alpha0   = " << format_rational(a.inv.alpha0)
     << "   beta0 = " << format_rational(a.inv.beta0)
     << "   mean Scal = " << format_rational(a.inv.beta0 / a.inv.alpha0) << "\n";
  os << "roots of P in (-1,1): " << a.root.count;
  if (a.root.bracket) os << "  (near " << a.root.bracket->midpoint() << ")";
  os << "\n";
  os << "fano: lambda = " << format_rational(a.fano.lambda)
     << ", C = " << format_rational(a.fano.C) << ", m = " << a.fano.m
     << (a.anticanonical ? "  [anticanonical class]" : "  [generic class]")
     << "\n";
  if (!a.hypothesis_met) {
    os << "hypothesis not met: P must have exactly one root in (-1,1)\n";
    return;
  }
  os << "MT(0)    = " << format_full(a.mt0) << "\n";
  os << "k0       = " << format_full(a.k0) << "\n";
  os << "profile  : " << (a.profile_report.all_pass ? "all checks pass"
                                                    : "CHECKS FAILED")
     << "\n";
  os << "condition (Q < 0 on [-1,1]): "
     << (a.stability.condition_holds ? "holds" : "FAILS")
     << "  q_min = " << format_full(a.stability.q_min)
     << "  q_max = " << format_full(a.stability.q_max) << "  Q(-1) = "
     << format_full(a.stability.q_boundary_m1)
     << "  Q(1) = " << format_full(a.stability.q_boundary_p1) << "\n";
}

int cmd_analyze(const CommonOpts& opts) {
  RunConfig cfg = load_config(opts);
  ensure_out_dir(cfg);
  Analysis a = analyze_data(cfg.data);
  print_analysis(std::cout, a);
  auto os = open_out(cfg, "analysis.json");
  os << analysis_json(a).dump(2) << "\n";
  return a.hypothesis_met ? 0 : 2;
}

int cmd_gqe(const CommonOpts& opts) {
  RunConfig cfg = load_config(opts);
  ensure_out_dir(cfg);
  InvariantBundle inv = build_invariants(cfg.data);
  GQEProfile prof = build_profile(inv);
  ReducedFlow solver(prof, cfg.flow);
  auto os = open_out(cfg, "gqe_profile.csv");
  write_profile_csv(os, solver.grid(), solver.theta_inf());
  std::cout << "k0 = " << format_full(prof.k0()) << "\n"
            << "wrote gqe_profile.csv (" << solver.grid().size() << " rows)\n";
  return 0;
}

int cmd_flow(const CommonOpts& opts) {
  RunConfig cfg = load_config(opts);
  ensure_out_dir(cfg);
  Analysis a = analyze_data(cfg.data);
  if (!a.hypothesis_met) {
    print_analysis(std::cout, a);
    return 2;
  }
  if (!a.stability.condition_holds)
    std::cout << "warning: condition Q < 0 fails (q_max = "
              << format_full(a.stability.q_max)
              << "); decay is not guaranteed, proceeding anyway\n";

  GQEProfile prof = build_profile(a.inv, a.k0);
  ReducedFlow solver(prof, cfg.flow);
  FlowState st = solver.initial_state(cfg.initial);
  {
    auto os = open_out(cfg, "snapshot_initial.csv");
    write_snapshot_csv(os, st, solver.velocity(st));
  }
  Trajectory traj = solver.run(st);
  {
    auto os = open_out(cfg, "trajectory.csv");
    write_trajectory_csv(os, traj);
  }
  {
    auto os = open_out(cfg, "snapshot_final.csv");
    write_snapshot_csv(os, traj.final_state, solver.velocity(traj.final_state));
  }
  DecayFit fit = decay_fit(traj);
  std::cout << (traj.converged ? "converged" : "did not converge") << " at t = "
            << format_full(traj.final_state.time)
            << ", sup|phi| = " << format_full(traj.final_state.diagnostics.sup_phi)
            << "\n";
  if (fit.defined)
    std::cout << "decay rate = " << format_full(fit.rate)
              << " (r^2 = " << format_full(fit.r_squared) << ")\n";
  else
    std::cout << "decay rate undefined (too few nonzero samples)\n";
  return 0;
}

unsigned sweep_threads(std::size_t jobs) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("AF_THREADS")) {
    long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return std::min<unsigned>(hw, static_cast<unsigned>(jobs));
}

struct SweepRow {
  Rational scale;
  double k0 = 0.0, mt0 = 0.0, qmin = 0.0, decay_rate = 0.0;
  bool condition = false, ok = false;
  std::string error;
};

int cmd_sweep(const CommonOpts& opts) {
  RunConfig cfg = load_config(opts);
  if (cfg.sweep_scales.empty())
    throw Error(ErrorKind::InvalidInput, "config has no sweep.scales");
  ensure_out_dir(cfg);

  std::vector<SweepRow> rows(cfg.sweep_scales.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= cfg.sweep_scales.size()) break;
      SweepRow& row = rows[i];
      row.scale = cfg.sweep_scales[i];
      try {
        AdmissibleData data = cfg.data;
        for (auto& f : data.factors) f.x *= row.scale;
        Analysis a = analyze_data(data);
        if (!a.hypothesis_met) {
          row.error = "hypothesis not met";
          continue;
        }
        row.k0 = a.k0;
        row.mt0 = a.mt0;
        row.qmin = a.stability.q_min;
        row.condition = a.stability.condition_holds;
        GQEProfile prof = build_profile(a.inv, a.k0);
        ReducedFlow solver(prof, cfg.flow);
        FlowState st = solver.initial_state(cfg.initial);
        Trajectory traj = solver.run(st);
        DecayFit fit = decay_fit(traj);
        row.decay_rate = fit.defined ? fit.rate
                                     : std::numeric_limits<double>::quiet_NaN();
        fs::path dir = fs::path(cfg.outputs.dir) / ("scale_" + std::to_string(i));
        fs::create_directories(dir);
        std::ofstream os(dir / "trajectory.csv");
        write_trajectory_csv(os, traj);
        row.ok = true;
      } catch (const Error& e) {
        row.error = e.what();
      }
    }
  };
  unsigned nthreads = sweep_threads(cfg.sweep_scales.size());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  auto os = open_out(cfg, "sweep.csv");
  os << "scale,k0,mt0,qmin,condition_holds,decay_rate\n";
  for (const auto& row : rows) {
    if (!row.ok) {
      std::cout << "scale " << format_rational(row.scale)
                << " failed: " << row.error << "\n";
      continue;
    }
    os << format_rational(row.scale) << ',' << format_full(row.k0) << ','
       << format_full(row.mt0) << ',' << format_full(row.qmin) << ','
       << (row.condition ? 1 : 0) << ',' << format_full(row.decay_rate) << '\n';
  }
  std::cout << "wrote sweep.csv (" << rows.size() << " scales)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reduced modified Kaehler-Ricci flow on admissible bundles"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "JSON configuration file")
        ->required();
    sub->add_option("--out", opts.out_dir, "output directory (overrides config)");
    sub->add_option("--n", opts.n_override, "grid intervals override");
    sub->add_option("--t-end", opts.t_end_override, "time horizon override");
  };
  CLI::App* analyze = app.add_subcommand("analyze", "class invariants, k0, stability report");
  CLI::App* gqe = app.add_subcommand("gqe", "emit the GQE profile as CSV");
  CLI::App* flow = app.add_subcommand("flow", "integrate the reduced flow");
  CLI::App* sweep = app.add_subcommand("sweep", "analyze + flow across x-scales");
  for (CLI::App* sub : {analyze, gqe, flow, sweep}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return cmd_analyze(opts);
    if (gqe->parsed()) return cmd_gqe(opts);
    if (flow->parsed()) return cmd_flow(opts);
    if (sweep->parsed()) return cmd_sweep(opts);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return e.kind() == ErrorKind::HypothesisNotMet ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
