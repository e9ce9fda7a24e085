#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "schmidt_forge/error.hpp"

namespace schmidt_forge {

/// Tolerance on Σ a_m² for spectra held in memory.
inline constexpr double kStoredNormTol = 1e-12;
/// Tolerance on Σ a_m² accepted at ingestion when renormalization is off.
inline constexpr double kIngestNormTol = 1e-9;

enum class InputKind { squared, amplitudes };

class SchmidtSpectrum;
namespace detail {
struct SpectrumAccess;
}

/// Squared Schmidt coefficients of a bipartite pure state. Entries are
/// nonnegative and sum to one; zeros (rank-deficient states) are allowed.
/// Construct through make_spectrum().
class SchmidtSpectrum {
 public:
  std::size_t dim() const noexcept { return sq_.size(); }
  std::span<const double> sq_coeffs() const noexcept { return sq_; }
  double operator[](std::size_t m) const { return sq_[m]; }

  double min_sq() const { return *std::min_element(sq_.begin(), sq_.end()); }
  double max_sq() const { return *std::max_element(sq_.begin(), sq_.end()); }
  std::size_t rank() const {
    return static_cast<std::size_t>(
        std::count_if(sq_.begin(), sq_.end(), [](double v) { return v > 0.0; }));
  }

  friend bool operator==(const SchmidtSpectrum&, const SchmidtSpectrum&) = default;

 private:
  explicit SchmidtSpectrum(std::vector<double> sq) : sq_(std::move(sq)) {}
  friend SchmidtSpectrum make_spectrum(std::span<const double>, InputKind, bool);
  friend struct detail::SpectrumAccess;

  std::vector<double> sq_;
};

namespace detail {
// Rebuilds a spectrum from entries already known to be valid (permutations).
struct SpectrumAccess {
  static SchmidtSpectrum from_trusted(std::vector<double> sq) {
    return SchmidtSpectrum(std::move(sq));
  }
};
}  // namespace detail

/// Validates and (optionally) normalizes raw coefficients.
///
/// With `normalize` unset the squared entries must already sum to one within
/// kIngestNormTol; a residual above kStoredNormTol is then divided out so
/// stored spectra always meet the tighter bound. Spectra that already meet it
/// are stored bit-for-bit.
inline SchmidtSpectrum make_spectrum(std::span<const double> values,
                                     InputKind kind = InputKind::squared,
                                     bool normalize = false) {
  if (values.empty()) throw Error(ErrorKind::EmptyInput, "no coefficients given");
  if (values.size() < 2)
    throw Error(ErrorKind::DimensionTooSmall, "a spectrum needs dim >= 2");

  std::vector<double> sq(values.begin(), values.end());
  for (std::size_t m = 0; m < sq.size(); ++m) {
    if (!(sq[m] >= 0.0))
      throw Error(ErrorKind::NegativeEntry,
                  "entry " + std::to_string(m) + " is negative or NaN");
    if (kind == InputKind::amplitudes) sq[m] *= sq[m];
  }

  const double sum = std::accumulate(sq.begin(), sq.end(), 0.0);
  if (!std::isfinite(sum) || sum <= 0.0)
    throw Error(ErrorKind::NotNormalized, "coefficients cannot be normalized");
  if (!normalize && std::abs(sum - 1.0) > kIngestNormTol)
    throw Error(ErrorKind::NotNormalized,
                "squared coefficients sum to " + std::to_string(sum));
  if (normalize || std::abs(sum - 1.0) > kStoredNormTol) {
    for (double& v : sq) v /= sum;
  }
  for (double& v : sq) v = std::min(v, 1.0);
  return SchmidtSpectrum(std::move(sq));
}

inline SchmidtSpectrum make_spectrum(std::initializer_list<double> values,
                                     InputKind kind = InputKind::squared,
                                     bool normalize = false) {
  return make_spectrum(std::span<const double>(values.begin(), values.size()), kind,
                       normalize);
}

/// Entanglement measures of a pure bipartite state with the given spectrum.
struct Measures {
  double concurrence = 0.0;     ///< I-Concurrence C
  double concurrence_sq = 0.0;  ///< C²
  double schmidt_number = 1.0;  ///< K = 1 / purity
  double purity = 1.0;          ///< Tr ρ₁² = Σ a_m⁴
};

/// Measures from a purity value for a D-dimensional system.
inline Measures measures_from_purity(double purity, std::size_t dim) {
  const double d = static_cast<double>(dim);
  Measures out;
  out.purity = purity;
  out.schmidt_number = 1.0 / purity;
  out.concurrence_sq = (d / (d - 1.0)) * (1.0 - purity);
  out.concurrence = std::sqrt(std::max(0.0, out.concurrence_sq));
  return out;
}

inline double purity_of(std::span<const double> sq) {
  double p = 0.0;
  for (double v : sq) p += v * v;
  return p;
}

inline Measures measures(const SchmidtSpectrum& s) {
  return measures_from_purity(purity_of(s.sq_coeffs()), s.dim());
}

/// A descending copy of a spectrum. `permutation[k]` is the original index of
/// the k-th largest coefficient (0-based).
struct SortedSpectrum {
  SchmidtSpectrum spectrum;
  std::vector<std::size_t> permutation;
};

/// Stable descending sort; ties keep their original relative order.
inline SortedSpectrum sort_descending(const SchmidtSpectrum& s) {
  std::vector<std::size_t> perm(s.dim());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t i, std::size_t j) { return s[i] > s[j]; });
  std::vector<double> sorted(s.dim());
  for (std::size_t k = 0; k < perm.size(); ++k) sorted[k] = s[perm[k]];
  return {detail::SpectrumAccess::from_trusted(std::move(sorted)), std::move(perm)};
}

/// Scatters values given in sorted order back to original positions.
inline std::vector<double> unsort(std::span<const double> sorted_values,
                                  std::span<const std::size_t> permutation) {
  if (sorted_values.size() != permutation.size())
    throw Error(ErrorKind::DimensionMismatch, "permutation length differs");
  std::vector<double> out(sorted_values.size());
  for (std::size_t k = 0; k < permutation.size(); ++k) out[permutation[k]] = sorted_values[k];
  return out;
}

}  // namespace schmidt_forge
