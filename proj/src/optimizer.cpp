#include "qtrans/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <Eigen/Eigenvalues>

#include "qtrans/error.hpp"
#include "qtrans/rng.hpp"
#include "qtrans/scattering.hpp"
#include "qtrans/simd/kernels.hpp"

namespace qtrans {

void validate(const AscentConfig& cfg) {
  if (cfg.max_iters < 1) throw ValidationError("max_iters must be >= 1");
  if (!(cfg.grad_tol > 0.0)) throw ValidationError("grad_tol must be > 0");
  if (!(cfg.t_tol > 0.0)) throw ValidationError("t_tol must be > 0");
  if (!(cfg.step0 > 0.0)) throw ValidationError("step0 must be > 0");
  if (!(cfg.backtrack > 0.0 && cfg.backtrack < 1.0)) throw ValidationError("backtrack must be in (0,1)");
  if (!(cfg.armijo > 0.0 && cfg.armijo < 1.0)) throw ValidationError("armijo must be in (0,1)");
  if (cfg.max_backtracks < 1) throw ValidationError("max_backtracks must be >= 1");
  if (cfg.samples_per_cell == 0) throw ValidationError("samples_per_cell must be >= 1");
  if (cfg.box && !(cfg.box->lo <= cfg.box->hi)) throw ValidationError("box: lo must be <= hi");
}

std::string_view to_string(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::ConvergedT1: return "converged_T1";
    case RunStatus::ConvergedCritical: return "converged_critical";
    case RunStatus::IterLimit: return "iter_limit";
    case RunStatus::Stalled: return "stalled";
  }
  return "unknown";
}

namespace {

void project(std::vector<double>& cells, const std::optional<Box>& box) {
  if (!box) return;
  for (double& v : cells) v = std::clamp(v, box->lo, box->hi);
}

bool touches_box(const std::vector<double>& cells, const std::optional<Box>& box) {
  if (!box) return false;
  return std::any_of(cells.begin(), cells.end(),
                     [&](double v) { return v == box->lo || v == box->hi; });
}

// Largest gradient component that is not blocked by an active bound.
double projected_grad_max(const std::vector<double>& cells, const std::vector<double>& grad,
                          const std::optional<Box>& box) {
  double m = 0.0;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    const bool blocked = box && ((cells[j] == box->hi && grad[j] > 0.0) ||
                                 (cells[j] == box->lo && grad[j] < 0.0));
    if (!blocked) m = std::max(m, std::abs(grad[j]));
  }
  return m;
}

}  // namespace

RunReport ascend(const PotentialSpec& spec, double energy, const AscentConfig& cfg) {
  validate(spec);
  validate(cfg);
  detail::require_scattering_energy(energy);

  PotentialSpec current = spec;
  project(current.cells, cfg.box);
  GradientKernel grad = analytic_gradient(current, energy, cfg.samples_per_cell);

  RunReport report;
  report.trajectory.push_back({0, grad.T});

  int iter = 0;
  PotentialSpec trial = current;
  for (;;) {
    if (1.0 - grad.T <= cfg.t_tol) {
      report.status = RunStatus::ConvergedT1;
      break;
    }
    const bool boundary = touches_box(current.cells, cfg.box);
    if (grad.max_abs() <= cfg.grad_tol ||
        (boundary && projected_grad_max(current.cells, grad.cell_gradient, cfg.box) <= cfg.grad_tol)) {
      report.status = RunStatus::ConvergedCritical;
      break;
    }
    if (iter >= cfg.max_iters) {
      report.status = RunStatus::IterLimit;
      break;
    }

    const std::vector<double>& d = grad.cell_gradient;
    double t = cfg.step0;
    bool accepted = false;
    double trial_T = 0.0;
    for (int bt = 0; bt < cfg.max_backtracks; ++bt, t *= cfg.backtrack) {
      for (std::size_t j = 0; j < d.size(); ++j) trial.cells[j] = current.cells[j] + t * d[j];
      project(trial.cells, cfg.box);
      double predicted = 0.0;
      for (std::size_t j = 0; j < d.size(); ++j) predicted += d[j] * (trial.cells[j] - current.cells[j]);
      if (!(predicted > 0.0)) continue;
      try {
        trial_T = transmission(trial, energy);
      } catch (const NumericalError&) {
        continue;
      }
      if (trial_T >= grad.T + cfg.armijo * predicted) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      report.status = RunStatus::Stalled;
      break;
    }
    ++iter;
    std::swap(current, trial);
    grad = analytic_gradient(current, energy, cfg.samples_per_cell);
    report.trajectory.push_back({iter, grad.T});
  }

  report.iterations = iter;
  report.final_T = grad.T;
  report.final_abs_A = grad.abs_A;
  report.max_abs_g = grad.max_abs();
  report.on_box_boundary = touches_box(current.cells, cfg.box);
  report.final_spec = std::move(current);
  return report;
}

HessianProbe hessian_probe(const PotentialSpec& spec, double energy, double h) {
  validate(spec);
  if (!(h > 0.0)) throw ValidationError("hessian step h must be > 0");
  const std::size_t n = spec.size();
  HessianProbe probe;
  probe.n = n;
  probe.matrix.assign(n * n, 0.0);

  PotentialSpec work = spec;
  auto T_at = [&](std::size_t i, double di, std::size_t j, double dj) {
    work.cells = spec.cells;
    work.cells[i] += di;
    work.cells[j] += dj;
    return transmission(work, energy);
  };
  const double t0 = transmission(spec, energy);
  for (std::size_t i = 0; i < n; ++i) {
    probe.matrix[i * n + i] = (T_at(i, h, i, 0.0) - 2.0 * t0 + T_at(i, -h, i, 0.0)) / (h * h);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = (T_at(i, h, j, h) - T_at(i, h, j, -h) - T_at(i, -h, j, h) + T_at(i, -h, j, -h)) /
                       (4.0 * h * h);
      probe.matrix[i * n + j] = v;
      probe.matrix[j * n + i] = v;
    }
  }
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      probe.matrix.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  probe.max_eigenvalue = solver.eigenvalues().maxCoeff();
  return probe;
}

MultiStartSummary multi_start(std::size_t n_starts, std::size_t n_cells, double amplitude,
                              double energy, const AscentConfig& cfg, const MultiStartOptions& opts) {
  if (n_starts == 0) throw ValidationError("n_starts must be >= 1");
  validate(cfg);
  detail::require_scattering_energy(energy);

  MultiStartSummary s;
  s.n_starts = n_starts;
  s.n_cells = n_cells;
  s.amplitude = amplitude;
  s.energy = energy;
  s.config = cfg;
  s.seeds.resize(n_starts);
  for (std::size_t i = 0; i < n_starts; ++i) s.seeds[i] = mix_seed(cfg.seed, i);
  std::vector<PotentialSpec> starts;
  starts.reserve(n_starts);
  for (std::size_t i = 0; i < n_starts; ++i) {
    starts.push_back(sample_random(n_cells, amplitude, s.seeds[i], opts.half_width));
  }
  s.runs.resize(n_starts);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n_starts;) {
      RunReport r = ascend(starts[i], energy, cfg);
      if (opts.probe_hessian) r.hessian_max_eig = hessian_probe(r.final_spec, energy, opts.hessian_h).max_eigenvalue;
      s.runs[i] = std::move(r);
    }
  };
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_starts));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t i = 0; i < n_starts; ++i) {
    const RunReport& r = s.runs[i];
    s.worst_T = std::min(s.worst_T, r.final_T);
    if (r.hessian_max_eig) {
      s.worst_hessian_eig = std::max(s.worst_hessian_eig.value_or(*r.hessian_max_eig), *r.hessian_max_eig);
    }
    switch (r.status) {
      case RunStatus::ConvergedT1: ++s.converged_t1; break;
      case RunStatus::IterLimit: ++s.iter_limit; break;
      case RunStatus::Stalled: ++s.stalled; break;
      case RunStatus::ConvergedCritical: {
        ++s.converged_critical;
        if (r.on_box_boundary) {
          ++s.boundary_critical;
          break;
        }
        // A cell-space critical point is only a candidate; re-test it on finer cells.
        CandidateTrap c{i, {}, {}, false};
        c.refined2 = ascend(refine(r.final_spec, 2), energy, cfg).status;
        c.refined4 = ascend(refine(r.final_spec, 4), energy, cfg).status;
        c.survives = c.refined2 == RunStatus::ConvergedCritical && c.refined4 == RunStatus::ConvergedCritical;
        if (c.survives) ++s.traps;
        s.candidates.push_back(c);
        break;
      }
    }
  }
  return s;
}

}  // namespace qtrans
