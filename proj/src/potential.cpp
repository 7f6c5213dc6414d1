#include "qtrans/potential.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qtrans/error.hpp"
#include "qtrans/rng.hpp"

namespace qtrans {

const PotentialSpec& validate(const PotentialSpec& spec) {
  if (spec.cells.empty()) throw ValidationError("cells: empty cell list");
  if (!std::isfinite(spec.half_width)) throw ValidationError("half_width: non-finite value");
  if (spec.half_width <= 0.0) throw ValidationError("half_width: non-positive half_width");
  for (std::size_t j = 0; j < spec.cells.size(); ++j) {
    if (!std::isfinite(spec.cells[j])) {
      throw ValidationError("cells[" + std::to_string(j) + "]: non-finite cell value");
    }
  }
  return spec;
}

PotentialSpec free_potential(std::size_t n_cells, double half_width) {
  if (n_cells == 0) throw ValidationError("n_cells must be >= 1");
  return validate(PotentialSpec{half_width, std::vector<double>(n_cells, 0.0)});
}

PotentialSpec square_barrier(double v0, double width, std::size_t n_cells) {
  if (n_cells == 0) throw ValidationError("n_cells must be >= 1");
  return validate(PotentialSpec{0.5 * width, std::vector<double>(n_cells, v0)});
}

PotentialSpec sample_random(std::size_t n_cells, double amplitude, std::uint64_t seed,
                            double half_width) {
  if (n_cells == 0) throw ValidationError("n_cells must be >= 1");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw ValidationError("amplitude must be finite and >= 0");
  }
  PotentialSpec spec{half_width, std::vector<double>(n_cells)};
  Rng rng(seed);
  for (double& v : spec.cells) v = rng.uniform(-amplitude, amplitude);
  return validate(spec);
}

PotentialSpec refine(const PotentialSpec& spec, std::size_t factor) {
  validate(spec);
  if (factor == 0) throw ValidationError("refinement factor must be >= 1");
  PotentialSpec out{spec.half_width, {}};
  out.cells.reserve(spec.size() * factor);
  for (double v : spec.cells) out.cells.insert(out.cells.end(), factor, v);
  return out;
}

std::string to_json_text(const PotentialSpec& spec) {
  validate(spec);
  nlohmann::ordered_json j;
  j["half_width"] = spec.half_width;
  j["cells"] = spec.cells;
  return j.dump() + "\n";
}

PotentialSpec from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed potential file: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("potential file must hold a single object");
  if (!j.contains("half_width")) throw ParseError("schema: missing field half_width");
  if (!j.contains("cells")) throw ParseError("schema: missing field cells");
  const auto& hw = j.at("half_width");
  if (!hw.is_number()) throw ParseError("schema: half_width is not a number");
  const auto& cells = j.at("cells");
  if (!cells.is_array()) throw ParseError("schema: cells is not an array");

  PotentialSpec spec;
  spec.half_width = hw.get<double>();
  spec.cells.reserve(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!cells[i].is_number()) {
      throw ParseError("schema: cells[" + std::to_string(i) + "] is not numeric");
    }
    spec.cells.push_back(cells[i].get<double>());
  }
  return validate(spec);
}

PotentialSpec read_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open potential file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

void write_spec(const PotentialSpec& spec, const std::filesystem::path& path) {
  const std::string text = to_json_text(spec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write potential file: " + path.string());
  out << text;
}

}  // namespace qtrans
