#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "schmidt_forge/error.hpp"
#include "schmidt_forge/parallel.hpp"
#include "schmidt_forge/spectrum.hpp"

namespace schmidt_forge {

struct SampleSpec {
  std::size_t dim = 2;
  std::uint64_t seed = 0;
  std::size_t count = 1;
};

/// D×D matrix of independent standard complex Gaussians.
inline Eigen::MatrixXcd complex_gaussian_matrix(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = {normal(rng), normal(rng)};
  return g;
}

/// Haar-induced spectrum from one generator: normalized squared singular
/// values of a complex Gaussian matrix, in descending order.
inline SchmidtSpectrum haar_spectrum(std::size_t dim, std::mt19937_64& rng) {
  const Eigen::MatrixXcd g = complex_gaussian_matrix(dim, rng);
  const Eigen::MatrixXcd gram = g * g.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  std::vector<double> sq(eig.eigenvalues().data(), eig.eigenvalues().data() + dim);
  for (double& v : sq) v = std::max(v, 0.0);
  std::sort(sq.begin(), sq.end(), std::greater<>());
  return make_spectrum(sq, InputKind::squared, /*normalize=*/true);
}

/// `count` spectra; spectrum i is drawn from a generator seeded with seed + i,
/// so results do not depend on the degree of parallelism.
inline std::vector<SchmidtSpectrum> sample_haar_spectrum(const SampleSpec& spec) {
  if (spec.dim < 2) throw Error(ErrorKind::DimensionTooSmall, "sample dim must be >= 2");
  if (spec.count < 1) throw Error(ErrorKind::OutOfRange, "sample count must be >= 1");
  std::vector<std::optional<SchmidtSpectrum>> slots(spec.count);
  parallel_for(spec.count, [&](std::size_t i) {
    std::mt19937_64 rng(spec.seed + i);
    slots[i] = haar_spectrum(spec.dim, rng);
  });
  std::vector<SchmidtSpectrum> out;
  out.reserve(spec.count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace schmidt_forge
