#include "qtrans/cli.hpp"

#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qtrans/asymptotics.hpp"
#include "qtrans/error.hpp"
#include "qtrans/gradient.hpp"
#include "qtrans/kinematic.hpp"
#include "qtrans/optimizer.hpp"
#include "qtrans/report.hpp"
#include "qtrans/scattering.hpp"

namespace qtrans::cli {

namespace {

// Prints `text` and mirrors it to `path` when given.
void emit(std::ostream& out, const std::string& text, const std::string& path) {
  out << text;
  if (!path.empty()) write_text(path, text);
}

struct AscentFlags {
  AscentConfig cfg;
  std::optional<double> box_min;
  std::optional<double> box_max;

  void attach(CLI::App* cmd) {
    cmd->add_option("--max-iters", cfg.max_iters, "Iteration limit")->capture_default_str();
    cmd->add_option("--grad-tol", cfg.grad_tol, "Stop when max|g| <= grad-tol")->capture_default_str();
    cmd->add_option("--t-tol", cfg.t_tol, "Stop when 1 - T <= t-tol")->capture_default_str();
    cmd->add_option("--step0", cfg.step0, "Initial line-search step")->capture_default_str();
    cmd->add_option("--backtrack", cfg.backtrack, "Backtracking factor")->capture_default_str();
    cmd->add_option("--armijo", cfg.armijo, "Armijo constant")->capture_default_str();
    cmd->add_option("--samples", cfg.samples_per_cell, "Kernel samples per cell")->capture_default_str();
    cmd->add_option("--box-min", box_min, "Lower clamp for every cell");
    cmd->add_option("--box-max", box_max, "Upper clamp for every cell");
    cmd->add_option("--seed", cfg.seed, "Seed")->capture_default_str();
  }

  AscentConfig resolve() const {
    AscentConfig c = cfg;
    if (box_min.has_value() != box_max.has_value()) {
      throw ValidationError("--box-min and --box-max must be given together");
    }
    if (box_min) c.box = Box{*box_min, *box_max};
    validate(c);
    return c;
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transmission control through compact-support potentials", "qtrans"};
  app.require_subcommand(1);

  std::function<int()> action;

  std::string potential_path, out_path;
  double energy = 1.0;

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Scattering amplitudes at one energy (JSON)");
  solve_cmd->add_option("--potential", potential_path, "Potential file")->required();
  solve_cmd->add_option("--energy", energy, "Energy E > 0")->required();
  solve_cmd->add_option("--out", out_path, "Also write the JSON here");
  solve_cmd->callback([&] {
    action = [&] {
      const PotentialSpec spec = read_spec(potential_path);
      emit(out, solution_json(solve(spec, energy).amplitudes), out_path);
      return kSuccess;
    };
  });

  // sweep
  double emin = 0.0, emax = 0.0;
  int n_energies = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "T(E) on a uniform energy grid (CSV)");
  sweep_cmd->add_option("--potential", potential_path, "Potential file")->required();
  sweep_cmd->add_option("--emin", emin, "Lowest energy")->required();
  sweep_cmd->add_option("--emax", emax, "Highest energy")->required();
  sweep_cmd->add_option("--n", n_energies, "Number of energies (>= 2)")->required();
  sweep_cmd->add_option("--out", out_path, "Also write the CSV here");
  sweep_cmd->callback([&] {
    action = [&] {
      if (!(emin > 0.0 && emin < emax)) throw ValidationError("sweep requires 0 < emin < emax");
      if (n_energies < 2) throw ValidationError("sweep requires n >= 2");
      const PotentialSpec spec = read_spec(potential_path);
      std::vector<double> energies(static_cast<std::size_t>(n_energies));
      for (int i = 0; i < n_energies; ++i) {
        energies[static_cast<std::size_t>(i)] =
            i + 1 == n_energies ? emax : emin + (emax - emin) * i / (n_energies - 1);
      }
      emit(out, energy_sweep_csv(energies, transmission_sweep(spec, energies)), out_path);
      return kSuccess;
    };
  });

  // grad
  std::size_t samples = kDefaultSamplesPerCell;
  std::string quadrature = "analytic";
  auto* grad_cmd = app.add_subcommand("grad", "Gradient kernel g(x) = dT/dV(x) (CSV)");
  grad_cmd->add_option("--potential", potential_path, "Potential file")->required();
  grad_cmd->add_option("--energy", energy, "Energy E > 0")->required();
  grad_cmd->add_option("--samples", samples, "Samples per cell")->capture_default_str();
  grad_cmd->add_option("--out", out_path, "Also write the CSV here");
  grad_cmd->callback([&] {
    action = [&] {
      const PotentialSpec spec = read_spec(potential_path);
      emit(out, kernel_csv(analytic_gradient(spec, energy, samples)), out_path);
      return kSuccess;
    };
  });

  // gradcheck
  double fd_h = 1e-5;
  auto* check_cmd = app.add_subcommand("gradcheck", "Analytic cell gradient vs central differences (JSON)");
  check_cmd->add_option("--potential", potential_path, "Potential file")->required();
  check_cmd->add_option("--energy", energy, "Energy E > 0")->required();
  check_cmd->set_help_flag("--help", "Print this help message and exit");
  check_cmd->add_option("--h", fd_h, "Finite-difference step")->capture_default_str();
  check_cmd->add_option("--samples", samples, "Samples per cell")->capture_default_str();
  check_cmd->add_option("--quadrature", quadrature, "analytic | trapezoid")
      ->check(CLI::IsMember({"analytic", "trapezoid"}))
      ->capture_default_str();
  check_cmd->add_option("--out", out_path, "Also write the JSON here");
  check_cmd->callback([&] {
    action = [&] {
      if (!(fd_h > 0.0)) throw ValidationError("--h must be > 0");
      const PotentialSpec spec = read_spec(potential_path);
      const auto quad = quadrature == "trapezoid" ? CellQuadrature::Trapezoid : CellQuadrature::Analytic;
      const GradientKernel g = analytic_gradient(spec, energy, samples, quad);
      const std::vector<double> fd = fd_gradient(spec, energy, fd_h);
      const GradientComparison c = compare_gradients(g.cell_gradient, fd);
      emit(out, gradcheck_json(c, g, fd, fd_h), out_path);
      if (!c.trivial && c.cosine < 0.999) {
        err << "gradcheck: cosine similarity " << c.cosine << " < 0.999\n";
        return kNumericalFailure;
      }
      return kSuccess;
    };
  });

  // optimize
  AscentFlags opt_flags;
  std::string trajectory_path;
  std::optional<double> opt_hessian_h;
  auto* opt_cmd = app.add_subcommand("optimize", "Gradient ascent of T from one potential (JSON + CSV)");
  opt_cmd->add_option("--potential", potential_path, "Potential file")->required();
  opt_cmd->add_option("--energy", energy, "Energy E > 0")->required();
  opt_flags.attach(opt_cmd);
  opt_cmd->add_option("--hessian-h", opt_hessian_h, "Probe the FD Hessian at the endpoint with this step");
  opt_cmd->add_option("--out", out_path, "Also write the run report JSON here");
  opt_cmd->add_option("--trajectory", trajectory_path, "Write the (iter, T) trajectory CSV here");
  opt_cmd->callback([&] {
    action = [&] {
      const AscentConfig cfg = opt_flags.resolve();
      const PotentialSpec spec = read_spec(potential_path);
      RunReport r = ascend(spec, energy, cfg);
      if (opt_hessian_h) r.hessian_max_eig = hessian_probe(r.final_spec, energy, *opt_hessian_h).max_eigenvalue;
      emit(out, run_report_json(r, energy), out_path);
      if (!trajectory_path.empty()) write_text(trajectory_path, trajectory_csv(r));
      return kSuccess;
    };
  });

  // landscape
  AscentFlags land_flags;
  land_flags.cfg.t_tol = 1e-10;
  std::size_t starts = 100, cells = 8;
  double amplitude = 3.0;
  MultiStartOptions ms_opts;
  auto* land_cmd = app.add_subcommand("landscape", "Multi-start trap search (JSON); exit 3 on a trap");
  land_cmd->add_option("--starts", starts, "Number of random starts")->capture_default_str();
  land_cmd->add_option("--cells", cells, "Cells per potential")->capture_default_str();
  land_cmd->add_option("--amplitude", amplitude, "Cells uniform in [-amplitude, amplitude]")->capture_default_str();
  land_cmd->add_option("--energy", energy, "Energy E > 0")->capture_default_str();
  land_cmd->add_option("--half-width", ms_opts.half_width, "Support half-width a")->capture_default_str();
  land_cmd->add_option("--threads", ms_opts.threads, "Worker threads (0: all cores)")->capture_default_str();
  land_cmd->add_option("--hessian-h", ms_opts.hessian_h, "FD Hessian step at endpoints")->capture_default_str();
  land_flags.attach(land_cmd);
  land_cmd->add_option("--out", out_path, "Also write the summary JSON here");
  land_cmd->callback([&] {
    action = [&] {
      const AscentConfig cfg = land_flags.resolve();
      const MultiStartSummary s = multi_start(starts, cells, amplitude, energy, cfg, ms_opts);
      emit(out, summary_json(s), out_path);
      if (s.traps > 0) {
        err << "landscape: " << s.traps << " refinement-surviving trap(s) found\n";
        return kTrapDetected;
      }
      return kSuccess;
    };
  });

  // kinematic
  std::size_t kin_n = 1000;
  double radius = 10.0;
  std::uint64_t kin_seed = 0;
  auto* kin_cmd = app.add_subcommand("kinematic", "T over sampled SU(1,1) points (CSV)");
  kin_cmd->add_option("--n", kin_n, "Number of points")->capture_default_str();
  kin_cmd->add_option("--radius", radius, "Sample |z| <= radius")->capture_default_str();
  kin_cmd->add_option("--seed", kin_seed, "Seed")->capture_default_str();
  kin_cmd->add_option("--out", out_path, "Also write the CSV here");
  kin_cmd->callback([&] {
    action = [&] {
      emit(out, kinematic_csv(kinematic_scan(kin_n, radius, kin_seed)), out_path);
      return kSuccess;
    };
  });

  // asymptotic
  std::vector<double> x_list{50.0, 100.0, 200.0, 400.0};
  std::vector<double> eta_list{1e-4};
  PhaseIntegralCase base;
  std::string branch = "both";
  auto* asy_cmd = app.add_subcommand("asymptotic", "Stationary-phase convergence sweep (CSV)");
  asy_cmd->add_option("--x-list", x_list, "Increasing x values")->delimiter(',')->capture_default_str();
  asy_cmd->add_option("--eta-list", eta_list, "Decreasing eta values (0: the eta -> 0 limit)")
      ->delimiter(',')
      ->capture_default_str();
  asy_cmd->add_option("--energy", base.center_energy, "Center energy E_i")->capture_default_str();
  asy_cmd->add_option("--sigma", base.sigma, "Gaussian profile width")->capture_default_str();
  asy_cmd->add_option("--branch", branch, "forward | backward | both")
      ->check(CLI::IsMember({"forward", "backward", "both"}))
      ->capture_default_str();
  asy_cmd->add_option("--out", out_path, "Also write the CSV here");
  asy_cmd->callback([&] {
    action = [&] {
      std::vector<BranchSweep> sweeps;
      for (PhaseBranch b : {PhaseBranch::Forward, PhaseBranch::Backward}) {
        if (branch == "forward" && b != PhaseBranch::Forward) continue;
        if (branch == "backward" && b != PhaseBranch::Backward) continue;
        PhaseIntegralCase c = base;
        c.branch = b;
        sweeps.push_back({b, convergence_sweep(c, x_list, eta_list)});
      }
      for (double eta : eta_list) {
        if (eta >= base.sigma) err << "asymptotic: eta = " << eta << " >= sigma: regularization dominates\n";
      }
      emit(out, phase_sweep_csv(sweeps), out_path);
      return kSuccess;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "qtrans: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    return action();
  } catch (const NumericalError& e) {
    err << "qtrans: numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const ValidationError& e) {
    err << "qtrans: " << e.what() << "\n";
    return kUsageError;
  } catch (const ParseError& e) {
    err << "qtrans: " << e.what() << "\n";
    return kUsageError;
  } catch (const IoError& e) {
    err << "qtrans: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace qtrans::cli
