#include "qtrans/report.hpp"

#include <array>
#include <charconv>
#include <fstream>

#include <json.hpp>

#include "qtrans/error.hpp"

namespace qtrans {

using ojson = nlohmann::ordered_json;

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

void put_complex(ojson& j, const std::string& name, cplx z) {
  j[name + "_re"] = z.real();
  j[name + "_im"] = z.imag();
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

ojson run_json(const RunReport& r) {
  ojson j;
  j["status"] = std::string(to_string(r.status));
  j["iterations"] = r.iterations;
  j["final_T"] = r.final_T;
  j["final_abs_A"] = r.final_abs_A;
  j["max_abs_g"] = r.max_abs_g;
  j["on_box_boundary"] = r.on_box_boundary;
  j["hessian_max_eig"] = r.hessian_max_eig ? ojson(*r.hessian_max_eig) : ojson(nullptr);
  j["final_potential"] = {{"half_width", r.final_spec.half_width}, {"cells", r.final_spec.cells}};
  return j;
}

}  // namespace

std::string solution_json(const ScatteringAmplitudes& s) {
  ojson j;
  j["E"] = s.energy;
  j["T"] = s.T;
  j["R"] = s.R;
  put_complex(j, "A", s.A);
  put_complex(j, "B", s.B);
  put_complex(j, "C", s.C);
  put_complex(j, "D", s.D);
  return dump(j);
}

std::string wavefield_csv(const WaveField& f) {
  std::string out = "x,re_psi1,im_psi1,re_psi2,im_psi2\n";
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    out += format_number(f.grid[i]) + ',' + format_number(f.psi1[i].real()) + ',' +
           format_number(f.psi1[i].imag()) + ',' + format_number(f.psi2[i].real()) + ',' +
           format_number(f.psi2[i].imag()) + '\n';
  }
  return out;
}

std::string energy_sweep_csv(const std::vector<double>& energies, const std::vector<double>& T) {
  std::string out = "E,T,R\n";
  for (std::size_t i = 0; i < energies.size(); ++i) {
    out += format_number(energies[i]) + ',' + format_number(T[i]) + ',' + format_number(1.0 - T[i]) + '\n';
  }
  return out;
}

std::string kernel_csv(const GradientKernel& g) {
  std::string out = "x,g\n";
  for (std::size_t i = 0; i < g.grid.size(); ++i) {
    out += format_number(g.grid[i]) + ',' + format_number(g.values[i]) + '\n';
  }
  return out;
}

std::string criticality_json(const CriticalityReport& r, double energy, double tol) {
  ojson j;
  j["E"] = energy;
  j["tol"] = tol;
  j["critical"] = r.critical;
  j["T"] = r.T;
  j["abs_A"] = r.abs_A;
  j["max_abs_g"] = r.max_abs_g;
  return dump(j);
}

std::string gradcheck_json(const GradientComparison& c, const GradientKernel& analytic,
                           const std::vector<double>& fd, double h) {
  ojson j;
  j["E"] = analytic.energy;
  j["h"] = h;
  j["cosine"] = c.cosine;
  j["rel_l2"] = c.rel_l2;
  j["trivial"] = c.trivial;
  j["T"] = analytic.T;
  j["analytic"] = analytic.cell_gradient;
  j["fd"] = fd;
  return dump(j);
}

std::string run_report_json(const RunReport& r, double energy) {
  ojson j;
  j["E"] = energy;
  const ojson body = run_json(r);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return dump(j);
}

std::string trajectory_csv(const RunReport& r) {
  std::string out = "iter,T\n";
  for (const auto& p : r.trajectory) out += std::to_string(p.iteration) + ',' + format_number(p.T) + '\n';
  return out;
}

std::string summary_json(const MultiStartSummary& s) {
  ojson j;
  j["n_starts"] = s.n_starts;
  j["n_cells"] = s.n_cells;
  j["amplitude"] = s.amplitude;
  j["E"] = s.energy;
  j["seed"] = s.config.seed;
  j["config"] = {{"max_iters", s.config.max_iters}, {"grad_tol", s.config.grad_tol},
                 {"t_tol", s.config.t_tol},         {"step0", s.config.step0},
                 {"backtrack", s.config.backtrack}, {"armijo", s.config.armijo},
                 {"samples_per_cell", s.config.samples_per_cell}};
  if (s.config.box) j["config"]["box"] = {s.config.box->lo, s.config.box->hi};
  j["converged_T1"] = s.converged_t1;
  j["converged_critical"] = s.converged_critical;
  j["boundary_critical"] = s.boundary_critical;
  j["iter_limit"] = s.iter_limit;
  j["stalled"] = s.stalled;
  j["traps"] = s.traps;
  j["worst_T"] = s.worst_T;
  j["worst_hessian_eig"] = s.worst_hessian_eig ? ojson(*s.worst_hessian_eig) : ojson(nullptr);
  ojson cands = ojson::array();
  for (const auto& c : s.candidates) {
    cands.push_back({{"start", c.start},
                     {"refined2", std::string(to_string(c.refined2))},
                     {"refined4", std::string(to_string(c.refined4))},
                     {"survives", c.survives}});
  }
  j["candidates"] = cands;
  ojson runs = ojson::array();
  for (std::size_t i = 0; i < s.runs.size(); ++i) {
    ojson r = run_json(s.runs[i]);
    r["start"] = i;
    r["seed"] = s.seeds[i];
    runs.push_back(std::move(r));
  }
  j["runs"] = runs;
  return dump(j);
}

std::string kinematic_csv(const std::vector<KinematicSample>& samples) {
  std::string out = "abs_z,T\n";
  for (const auto& s : samples) out += format_number(s.abs_z) + ',' + format_number(s.T) + '\n';
  return out;
}

std::string phase_sweep_csv(const std::vector<BranchSweep>& sweeps) {
  std::string out = "branch,x,eta,re,im,rel_error\n";
  for (const auto& sw : sweeps) {
    const char* b = sw.branch == PhaseBranch::Forward ? "forward" : "backward";
    for (const auto& r : sw.rows) {
      out += std::string(b) + ',' + format_number(r.x) + ',' + format_number(r.eta) + ',' +
             format_number(r.value.real()) + ',' + format_number(r.value.imag()) + ',' +
             format_number(r.rel_error) + '\n';
    }
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write output file: " + path.string());
  out << text;
  if (!out) throw IoError("failed writing output file: " + path.string());
}

}  // namespace qtrans
