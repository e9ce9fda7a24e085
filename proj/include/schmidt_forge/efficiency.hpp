#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schmidt_forge/error.hpp"
#include "schmidt_forge/spectrum.hpp"

namespace schmidt_forge {

/// Relative slack on the crop-level feasibility test (level <= a_n²).
inline constexpr double kFeasibilityTol = 1e-12;
/// Distance from 1/D below which a reference is treated as full concentration.
inline constexpr double kStandardTol = 1e-12;

enum class ReferenceKind { p_ref, c_ref, c_ref_sq, k_ref };

/// Reference entanglement level inside the efficiency payoff. Stored as a
/// reference purity in [1/D, 1]; the concurrence and Schmidt-number views are
/// derived from it.
class ReferenceLevel {
 public:
  double p_ref() const noexcept { return p_ref_; }
  std::size_t dim() const noexcept { return dim_; }
  double c_ref_sq() const noexcept {
    const double d = static_cast<double>(dim_);
    return (d / (d - 1.0)) * (1.0 - p_ref_);
  }
  double k_ref() const noexcept { return 1.0 / p_ref_; }

 private:
  ReferenceLevel(double p, std::size_t dim) : p_ref_(p), dim_(dim) {}
  friend ReferenceLevel reference_from(ReferenceKind, double, std::size_t);

  double p_ref_;
  std::size_t dim_;
};

inline ReferenceLevel reference_from(ReferenceKind kind, double value, std::size_t dim) {
  if (dim < 2) throw Error(ErrorKind::DimensionTooSmall, "reference needs dim >= 2");
  const double d = static_cast<double>(dim);
  auto in_range = [](double v, double lo, double hi) {
    return v >= lo - kStandardTol && v <= hi + kStandardTol;
  };
  double p = 0.0;
  switch (kind) {
    case ReferenceKind::p_ref:
      if (!in_range(value, 1.0 / d, 1.0))
        throw Error(ErrorKind::OutOfRange, "p_ref must lie in [1/D, 1]");
      p = value;
      break;
    case ReferenceKind::c_ref:
      if (!in_range(value, 0.0, 1.0))
        throw Error(ErrorKind::OutOfRange, "c_ref must lie in [0, 1]");
      p = 1.0 - ((d - 1.0) / d) * value * value;
      break;
    case ReferenceKind::c_ref_sq:
      if (!in_range(value, 0.0, 1.0))
        throw Error(ErrorKind::OutOfRange, "c_ref_sq must lie in [0, 1]");
      p = 1.0 - ((d - 1.0) / d) * value;
      break;
    case ReferenceKind::k_ref:
      if (!in_range(value, 1.0, d))
        throw Error(ErrorKind::OutOfRange, "k_ref must lie in [1, D]");
      p = 1.0 / value;
      break;
  }
  return ReferenceLevel(std::clamp(p, 1.0 / d, 1.0), dim);
}

/// Diagonal filter amplitudes and how they were obtained. `y` are squared
/// amplitudes, `x` the unnormalized post-filter coefficients a_m² y_m. All
/// index sets refer to the caller's (unsorted) ordering.
struct ConcentrationPlan {
  std::vector<double> y;
  std::vector<double> z;
  std::vector<double> x;
  std::size_t n_opt = 0;
  double crop_level = 0.0;
  std::vector<std::size_t> cropped_indices;
  std::vector<std::size_t> permutation;
};

struct ConcentrationOutcome {
  ConcentrationPlan plan;
  double p_success = 1.0;
  SchmidtSpectrum post_spectrum;
  Measures post_measures;
  std::optional<double> q_value;  ///< set when a reference level applies
  std::optional<double> p_ref;
  std::optional<double> p_fix;
};

namespace detail {

inline void check_box(const SchmidtSpectrum& s, std::span<const double> y) {
  if (y.size() != s.dim())
    throw Error(ErrorKind::DimensionMismatch, "plan has " + std::to_string(y.size()) +
                                                  " entries, spectrum has " +
                                                  std::to_string(s.dim()));
  for (std::size_t m = 0; m < y.size(); ++m)
    if (!(y[m] >= 0.0 && y[m] <= 1.0))
      throw Error(ErrorKind::YOutOfBox, "y[" + std::to_string(m) + "] outside [0, 1]");
}

}  // namespace detail

/// Efficiency payoff Q(y) = (D/(D-1)) [P_ref (Σ a² y)² − Σ a⁴ y²], i.e.
/// p_s² (C² − C_ref²) written as a quadratic form in y.
inline double efficiency_q(const SchmidtSpectrum& s, std::span<const double> y,
                           const ReferenceLevel& ref) {
  detail::check_box(s, y);
  long double sum = 0.0L, sum_sq = 0.0L;
  for (std::size_t m = 0; m < y.size(); ++m) {
    const long double x = static_cast<long double>(s[m]) * y[m];
    sum += x;
    sum_sq += x * x;
  }
  const long double d = static_cast<long double>(s.dim());
  return static_cast<double>((d / (d - 1.0L)) * (ref.p_ref() * sum * sum - sum_sq));
}

/// Plan carrying only the amplitudes; provenance fields stay empty.
inline ConcentrationPlan plan_from_y(const SchmidtSpectrum& s, std::span<const double> y) {
  detail::check_box(s, y);
  ConcentrationPlan plan;
  plan.y.assign(y.begin(), y.end());
  plan.z.resize(y.size());
  plan.x.resize(y.size());
  for (std::size_t m = 0; m < y.size(); ++m) {
    plan.z[m] = std::sqrt(y[m]);
    plan.x[m] = s[m] * y[m];
  }
  return plan;
}

/// Post-filter state and probability for an arbitrary plan.
inline ConcentrationOutcome apply_plan(const SchmidtSpectrum& s, ConcentrationPlan plan,
                                       std::optional<ReferenceLevel> ref = std::nullopt) {
  detail::check_box(s, plan.y);
  if (ref && ref->dim() != s.dim())
    throw Error(ErrorKind::DimensionMismatch, "reference built for another dimension");
  long double p = 0.0L;
  for (std::size_t m = 0; m < s.dim(); ++m) p += static_cast<long double>(s[m]) * plan.y[m];
  if (!(p > 0.0L)) throw Error(ErrorKind::ZeroProbability, "plan never succeeds");

  const double ps = static_cast<double>(p);
  std::vector<double> post(s.dim());
  for (std::size_t m = 0; m < s.dim(); ++m)
    post[m] = static_cast<double>(static_cast<long double>(s[m]) * plan.y[m] / p);
  auto post_spectrum = make_spectrum(post);
  const auto post_measures = measures(post_spectrum);

  ConcentrationOutcome out{std::move(plan), ps, std::move(post_spectrum), post_measures,
                           std::nullopt, std::nullopt, std::nullopt};
  if (ref) {
    out.q_value = efficiency_q(s, out.plan.y, *ref);
    out.p_ref = ref->p_ref();
  }
  return out;
}

inline ConcentrationOutcome apply_plan(const SchmidtSpectrum& s, std::span<const double> y,
                                       std::optional<ReferenceLevel> ref = std::nullopt) {
  return apply_plan(s, plan_from_y(s, y), ref);
}

namespace detail {

// Crops the n largest coefficients (sorted order) to `level` and leaves the
// rest untouched. Shared by both planners.
inline ConcentrationPlan prefix_crop_plan(const SchmidtSpectrum& s, const SortedSpectrum& sorted,
                                          std::size_t n, double level) {
  const std::size_t dim = s.dim();
  std::vector<double> y_sorted(dim, 1.0);
  for (std::size_t k = 0; k < n; ++k)
    y_sorted[k] = std::min(1.0, level / sorted.spectrum[k]);

  ConcentrationPlan plan = plan_from_y(s, unsort(y_sorted, sorted.permutation));
  plan.n_opt = n;
  plan.crop_level = level;
  plan.cropped_indices.assign(sorted.permutation.begin(),
                              sorted.permutation.begin() + static_cast<std::ptrdiff_t>(n));
  std::sort(plan.cropped_indices.begin(), plan.cropped_indices.end());
  plan.permutation = sorted.permutation;
  return plan;
}

// Suffix sums: tail[n] = Σ_{k >= n} sorted[k] (0-based), tail[D] = 0.
inline std::vector<double> tail_sums(const SchmidtSpectrum& sorted) {
  std::vector<double> tail(sorted.dim() + 1, 0.0);
  for (std::size_t k = sorted.dim(); k-- > 0;) tail[k] = tail[k + 1] + sorted[k];
  return tail;
}

}  // namespace detail

/// Maximizes the efficiency payoff over the unit box in closed form.
///
/// The optimum crops the n_opt largest squared coefficients to the common
/// level α_n = P β_n / (1 − n P), β_n being the weight of the untouched tail;
/// n_opt is the largest n with α_n <= a_n² and n P < 1. When no n qualifies
/// the identity plan is optimal. At P_ref = 1/D the plan is the full
/// Procrustean filter z_m = a_min / a_m.
inline ConcentrationOutcome optimal_plan_efficiency(const SchmidtSpectrum& s,
                                                    const ReferenceLevel& ref) {
  const std::size_t dim = s.dim();
  if (ref.dim() != dim)
    throw Error(ErrorKind::DimensionMismatch, "reference built for another dimension");
  const double d = static_cast<double>(dim);
  const double p_ref = ref.p_ref();

  // Below 1/rank the only non-negative payoff is the null filter.
  const std::size_t rank = s.rank();
  if (static_cast<double>(rank) * p_ref < 1.0 - kStandardTol)
    throw Error(ErrorKind::RankDeficientFullConcentration,
                "reference purity below 1/rank cannot be reached by any filter");

  const auto sorted = sort_descending(s);
  if (std::abs(p_ref - 1.0 / d) <= kStandardTol) {
    const double a_min_sq = s.min_sq();
    auto plan = detail::prefix_crop_plan(s, sorted, dim, a_min_sq);
    // The smallest coefficient passes with y = 1 exactly. Every x_m equals
    // a_min², so the probability and post state take their exact values.
    std::fill(plan.x.begin(), plan.x.end(), a_min_sq);
    auto out = apply_plan(s, std::move(plan), ref);
    out.p_success = d * a_min_sq;
    out.post_spectrum = detail::SpectrumAccess::from_trusted(std::vector<double>(dim, 1.0 / d));
    out.post_measures = measures(out.post_spectrum);
    return out;
  }

  const auto tail = detail::tail_sums(sorted.spectrum);
  std::size_t n_opt = 0;
  double level = 0.0;
  for (std::size_t n = 1; n <= dim; ++n) {
    const double nd = static_cast<double>(n);
    if (!(nd < 1.0 / p_ref - kStandardTol)) break;
    const double alpha = p_ref * tail[n] / (1.0 - nd * p_ref);
    const double a_n_sq = sorted.spectrum[n - 1];
    if (alpha <= a_n_sq * (1.0 + kFeasibilityTol)) {
      n_opt = n;
      level = alpha;
    }
  }
  auto plan = detail::prefix_crop_plan(s, sorted, n_opt, level);
  return apply_plan(s, std::move(plan), ref);
}

}  // namespace schmidt_forge
