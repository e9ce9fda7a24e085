#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "schmidt_forge/error.hpp"
#include "schmidt_forge/spectrum.hpp"

namespace schmidt_forge {

/// One point of the single-parameter interpolation baseline: squared
/// coefficients move linearly toward 1/D as xi goes from 0 to 1.
struct InterpPoint {
  double xi = 0.0;
  SchmidtSpectrum spectrum;
  double success_prob = 1.0;
  Measures measures;
};

inline InterpPoint interpolate(const SchmidtSpectrum& s, double xi) {
  if (!(xi >= 0.0 && xi <= 1.0))
    throw Error(ErrorKind::XiOutOfRange, "xi = " + std::to_string(xi));
  const double d = static_cast<double>(s.dim());
  const double a_min_sq = s.min_sq();
  if (xi > 0.0 && a_min_sq <= 0.0)
    throw Error(ErrorKind::RankDeficient,
                "interpolation with xi > 0 needs every coefficient positive");

  std::vector<double> b(s.dim());
  for (std::size_t m = 0; m < s.dim(); ++m) b[m] = s[m] + (1.0 / d - s[m]) * xi;

  const double p = xi == 0.0 ? 1.0 : 1.0 / (1.0 - xi + xi / (d * a_min_sq));
  auto spectrum = make_spectrum(b);
  const auto m = measures(spectrum);
  return {xi, std::move(spectrum), p, m};
}

inline std::vector<InterpPoint> interp_sweep(const SchmidtSpectrum& s,
                                             std::span<const double> grid) {
  std::vector<InterpPoint> out;
  out.reserve(grid.size());
  for (double xi : grid) out.push_back(interpolate(s, xi));
  return out;
}

}  // namespace schmidt_forge
