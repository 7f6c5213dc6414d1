#pragma once

// Machine-readable exports: JSON for single-object results, CSV for series.
// Numbers are written in shortest round-trip form, so outputs are
// bit-comparable across runs.

#include <filesystem>
#include <string>
#include <vector>

#include "qtrans/asymptotics.hpp"
#include "qtrans/gradient.hpp"
#include "qtrans/kinematic.hpp"
#include "qtrans/optimizer.hpp"
#include "qtrans/scattering.hpp"

namespace qtrans {

std::string format_number(double v);

std::string solution_json(const ScatteringAmplitudes& s);
std::string wavefield_csv(const WaveField& f);
std::string energy_sweep_csv(const std::vector<double>& energies, const std::vector<double>& T);

std::string kernel_csv(const GradientKernel& g);
std::string criticality_json(const CriticalityReport& r, double energy, double tol);
std::string gradcheck_json(const GradientComparison& c, const GradientKernel& analytic,
                           const std::vector<double>& fd, double h);

std::string run_report_json(const RunReport& r, double energy);
std::string trajectory_csv(const RunReport& r);
std::string summary_json(const MultiStartSummary& s);

std::string kinematic_csv(const std::vector<KinematicSample>& samples);

struct BranchSweep {
  PhaseBranch branch;
  std::vector<SweepRow> rows;
};
std::string phase_sweep_csv(const std::vector<BranchSweep>& sweeps);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace qtrans
