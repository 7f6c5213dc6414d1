#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qtrans/gradient.hpp"
#include "qtrans/potential.hpp"

namespace qtrans {

struct Box {
  double lo;
  double hi;
};

struct AscentConfig {
  int max_iters = 5000;
  double grad_tol = 1e-8;
  double t_tol = 1e-3;  // converged when 1 - T <= t_tol
  double step0 = 0.5;
  double backtrack = 0.5;
  double armijo = 1e-4;
  int max_backtracks = 60;
  std::optional<Box> box;
  std::uint64_t seed = 0;
  std::size_t samples_per_cell = kDefaultSamplesPerCell;
};

/// Throws ValidationError if a field is out of range.
void validate(const AscentConfig& cfg);

enum class RunStatus { ConvergedT1, ConvergedCritical, IterLimit, Stalled };

std::string_view to_string(RunStatus s) noexcept;

struct TrajectoryPoint {
  int iteration;
  double T;
};

struct RunReport {
  std::vector<TrajectoryPoint> trajectory;  // accepted iterates, starting with the initial point
  PotentialSpec final_spec;
  double final_T = 0.0;
  double final_abs_A = 0.0;
  double max_abs_g = 0.0;
  int iterations = 0;
  RunStatus status = RunStatus::IterLimit;
  // Some cell sits on a box face at the end of the run; a critical point here
  // may be a constrained one and is outside the unconstrained landscape claim.
  bool on_box_boundary = false;
  std::optional<double> hessian_max_eig;
};

/// Projected gradient ascent on the cell heights with Armijo backtracking.
///
/// Every line search starts at step0 and backtracks by cfg.backtrack until
///   T(P(V + t g)) >= T(V) + armijo * g . (P(V + t g) - V).
/// Stopping order: 1 - T <= t_tol, then max|g| <= grad_tol, then max_iters.
/// max_backtracks consecutive rejections end the run as Stalled.
RunReport ascend(const PotentialSpec& spec, double energy, const AscentConfig& cfg);

struct HessianProbe {
  std::size_t n = 0;
  std::vector<double> matrix;  // row-major, symmetric
  double max_eigenvalue = 0.0;

  double operator()(std::size_t i, std::size_t j) const { return matrix[i * n + j]; }
};

/// Central second differences of T in cell coordinates.
HessianProbe hessian_probe(const PotentialSpec& spec, double energy, double h);

struct MultiStartOptions {
  double half_width = 1.0;
  unsigned threads = 0;  // 0: hardware concurrency
  bool probe_hessian = true;
  double hessian_h = 1e-4;
};

struct CandidateTrap {
  std::size_t start;
  // Status after re-running the ascent from the 2x and 4x refined endpoint.
  RunStatus refined2;
  RunStatus refined4;
  bool survives;
};

struct MultiStartSummary {
  std::size_t n_starts = 0;
  std::size_t n_cells = 0;
  double amplitude = 0.0;
  double energy = 0.0;
  AscentConfig config;
  std::vector<std::uint64_t> seeds;
  std::vector<RunReport> runs;  // ordered by start index

  std::size_t converged_t1 = 0;
  std::size_t converged_critical = 0;  // all ConvergedCritical, incl. boundary ones
  std::size_t boundary_critical = 0;   // ConvergedCritical with a clamped cell
  std::size_t iter_limit = 0;
  std::size_t stalled = 0;
  std::vector<CandidateTrap> candidates;
  std::size_t traps = 0;  // refinement-surviving, interior
  double worst_T = 1.0;
  std::optional<double> worst_hessian_eig;
};

/// Seed for start i is derived from cfg.seed and i; results do not depend on
/// thread count or completion order.
MultiStartSummary multi_start(std::size_t n_starts, std::size_t n_cells, double amplitude,
                              double energy, const AscentConfig& cfg,
                              const MultiStartOptions& opts = {});

}  // namespace qtrans
