// Named invariant suites behind the `check` subcommand. Each row reports a
// measured defect against its tolerance; suites are deterministic given the
// seed.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "virdet/cocycle.hpp"

namespace virdet {

struct CheckRow {
  std::string name;
  double defect = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct CheckConfig {
  std::uint64_t seed = 7;
  int n_theta = 256;
  int n_x = 129;
  int unif_modes = 48;
  double h = 0.02;
  double charge = 1.0;
  bool quick = false;  // trims the seeded batteries for unit-test use
};

std::vector<CheckRow> check_pairing(const CheckConfig& cfg);
std::vector<CheckRow> check_detline(const CheckConfig& cfg);
std::vector<CheckRow> check_uniformize(const CheckConfig& cfg);
std::vector<CheckRow> check_cocycle(const CheckConfig& cfg);
std::vector<CheckRow> check_zeta(const CheckConfig& cfg);
std::vector<CheckRow> check_all(const CheckConfig& cfg);

// Seeded helper shared by suites and tests: a small random real or complex
// vector field with harmonics <= kmax.
VectorField random_field(std::mt19937_64& rng, int kmax, bool complex_part,
                         double amp = 1.0, int order = 128);

}  // namespace virdet
