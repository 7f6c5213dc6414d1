#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace qtrans {

/// Piecewise-constant potential with compact support [-half_width, half_width].
///
/// The support is split into cells.size() uniform cells; cell j covers
/// [-a + j*w, -a + (j+1)*w] with w = 2a/N. Units are m = 1/2, hbar = 1, so
/// energies and squared wavenumbers coincide. V(x) = 0 outside the support.
struct PotentialSpec {
  double half_width = 1.0;
  std::vector<double> cells;

  std::size_t size() const noexcept { return cells.size(); }
  double cell_width() const noexcept {
    return 2.0 * half_width / static_cast<double>(cells.size());
  }
  double cell_left(std::size_t j) const noexcept {
    return -half_width + static_cast<double>(j) * cell_width();
  }
  // Right edges are computed from j + 1 rather than by adding the width so
  // that the last edge is exactly +half_width.
  double cell_right(std::size_t j) const noexcept {
    return j + 1 == cells.size() ? half_width : cell_left(j + 1);
  }

  bool operator==(const PotentialSpec&) const = default;
};

/// Returns `spec` unchanged, or throws ValidationError naming the bad field.
const PotentialSpec& validate(const PotentialSpec& spec);

/// Zero potential on [-half_width, half_width] with n_cells cells.
PotentialSpec free_potential(std::size_t n_cells = 1, double half_width = 1.0);

/// Rectangular barrier of height v0 and total width `width`, split into n_cells.
PotentialSpec square_barrier(double v0, double width, std::size_t n_cells = 1);

/// Cells drawn i.i.d. uniform on [-amplitude, amplitude]. A pure function of
/// its arguments (the generator is fully specified, not implementation-defined).
PotentialSpec sample_random(std::size_t n_cells, double amplitude, std::uint64_t seed,
                            double half_width = 1.0);

/// Splits every cell into `factor` equal sub-cells with the same height.
PotentialSpec refine(const PotentialSpec& spec, std::size_t factor);

/// {"half_width": <number>, "cells": [<numbers>]}
std::string to_json_text(const PotentialSpec& spec);
PotentialSpec from_json_text(const std::string& text);

PotentialSpec read_spec(const std::filesystem::path& path);
void write_spec(const PotentialSpec& spec, const std::filesystem::path& path);

}  // namespace qtrans
