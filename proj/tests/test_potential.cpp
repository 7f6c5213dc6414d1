#include <doctest.h>

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "qtrans/error.hpp"
#include "qtrans/potential.hpp"
#include "qtrans/rng.hpp"

using namespace qtrans;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qtrans_test_potential_" + name);
}

void write_raw(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

bool bit_equal(const PotentialSpec& a, const PotentialSpec& b) {
  if (std::bit_cast<std::uint64_t>(a.half_width) != std::bit_cast<std::uint64_t>(b.half_width)) return false;
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a.cells[i]) != std::bit_cast<std::uint64_t>(b.cells[i])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("validate accepts the free particle") {
  const PotentialSpec s{1.0, {0.0}};
  CHECK(&validate(s) == &s);
}

TEST_CASE("validate names the offending field") {
  CHECK_THROWS_WITH_AS(validate(PotentialSpec{1.0, {}}), doctest::Contains("empty cell list"), ValidationError);
  CHECK_THROWS_WITH_AS(validate(PotentialSpec{-1.0, {2.0}}), doctest::Contains("non-positive half_width"),
                       ValidationError);
  CHECK_THROWS_WITH_AS(validate(PotentialSpec{0.0, {2.0}}), doctest::Contains("half_width"), ValidationError);
  CHECK_THROWS_WITH_AS(validate(PotentialSpec{1.0, {0.0, std::nan("")}}), doctest::Contains("cells[1]"),
                       ValidationError);
  CHECK_THROWS_AS(validate(PotentialSpec{1.0, {std::numeric_limits<double>::infinity()}}), ValidationError);
}

TEST_CASE("cell geometry tiles the support exactly") {
  const PotentialSpec s{0.7, std::vector<double>(7, 1.0)};
  CHECK(s.cell_left(0) == -0.7);
  CHECK(s.cell_right(6) == 0.7);
  for (std::size_t j = 0; j + 1 < s.size(); ++j) CHECK(s.cell_right(j) == s.cell_left(j + 1));
}

TEST_CASE("sample_random") {
  SUBCASE("zero amplitude gives zero cells") {
    const auto s = sample_random(4, 0.0, 7);
    CHECK(s.cells == std::vector<double>(4, 0.0));
  }
  SUBCASE("deterministic in the seed") {
    CHECK(sample_random(4, 3.0, 7) == sample_random(4, 3.0, 7));
    CHECK(sample_random(4, 3.0, 7) != sample_random(4, 3.0, 8));
  }
  SUBCASE("values stay within the amplitude") {
    const auto s = sample_random(1000, 3.0, 1);
    for (double v : s.cells) {
      CHECK(v >= -3.0);
      CHECK(v < 3.0);
    }
  }
  SUBCASE("precondition violations") {
    CHECK_THROWS_AS(sample_random(0, 1.0, 1), ValidationError);
    CHECK_THROWS_AS(sample_random(3, -1.0, 1), ValidationError);
  }
}

TEST_CASE("write then read returns the same spec") {
  const PotentialSpec s{1.0, {2.0, 0.5}};
  const auto path = temp_file("roundtrip.json");
  write_spec(s, path);
  CHECK(read_spec(path) == s);
  std::filesystem::remove(path);
}

TEST_CASE("serialization round trip is bit-exact for arbitrary finite values") {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    PotentialSpec s;
    s.half_width = std::ldexp(rng.uniform(0.5, 1.0), static_cast<int>(rng.uniform(-40, 40)));
    const auto n = 1 + static_cast<std::size_t>(rng.uniform(0, 20));
    for (std::size_t i = 0; i < n; ++i) {
      const double mant = rng.uniform(-1.0, 1.0);
      s.cells.push_back(std::ldexp(mant, static_cast<int>(rng.uniform(-1070, 1020))));
    }
    if (trial == 0) s.cells.push_back(-0.0);
    if (trial == 1) s.cells.push_back(std::numeric_limits<double>::denorm_min());
    if (trial == 2) s.cells.push_back(std::numeric_limits<double>::max());
    CHECK(bit_equal(from_json_text(to_json_text(s)), s));
  }
}

TEST_CASE("malformed files are rejected") {
  CHECK_THROWS_WITH_AS(from_json_text(R"({"half_width": 1.0, "cells": ["x"]})"), doctest::Contains("cells[0]"),
                       ParseError);
  CHECK_THROWS_WITH_AS(from_json_text(R"({"cells": [1.0]})"), doctest::Contains("half_width"), ParseError);
  CHECK_THROWS_WITH_AS(from_json_text(R"({"half_width": 1.0})"), doctest::Contains("cells"), ParseError);
  CHECK_THROWS_AS(from_json_text(R"({"half_width": 1.0, "cells": [1.0)"), ParseError);
  CHECK_THROWS_AS(from_json_text("[1, 2]"), ParseError);
  CHECK_THROWS_AS(from_json_text(R"({"half_width": "1", "cells": [1.0]})"), ParseError);
  CHECK_THROWS_AS(from_json_text(R"({"half_width": 1.0, "cells": []})"), ValidationError);

  const auto path = temp_file("bad.json");
  write_raw(path, R"({"half_width": 1.0, "cells": ["x"]})");
  CHECK_THROWS_AS(read_spec(path), ParseError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_spec(temp_file("does_not_exist.json")), IoError);
}

TEST_CASE("refine repeats each cell") {
  const PotentialSpec s{1.0, {1.0, -2.0}};
  const auto r = refine(s, 3);
  CHECK(r.half_width == 1.0);
  CHECK(r.cells == std::vector<double>{1.0, 1.0, 1.0, -2.0, -2.0, -2.0});
  CHECK(refine(s, 1) == s);
  CHECK_THROWS_AS(refine(s, 0), ValidationError);
}
