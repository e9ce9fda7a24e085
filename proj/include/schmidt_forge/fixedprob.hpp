#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "schmidt_forge/efficiency.hpp"
#include "schmidt_forge/error.hpp"
#include "schmidt_forge/spectrum.hpp"

namespace schmidt_forge {

/// Fixed success probability for the minimum-purity planner.
struct FixedProbRequest {
  double p_fix = 1.0;
};

inline FixedProbRequest fixed_prob_request(double p_fix) {
  if (!(p_fix > 0.0 && p_fix <= 1.0 + kStandardTol))
    throw Error(ErrorKind::PFixOutOfRange, "p_fix must lie in (0, 1]");
  return {std::min(p_fix, 1.0)};
}

/// Most entangled post-filter state reachable with success probability
/// exactly p_fix. Crops the n_opt largest squared coefficients to
/// κ_n = (p_fix − β_n) / n with n_opt the largest n satisfying 0 <= κ_n <= a_n².
inline ConcentrationOutcome optimal_plan_fixed(const SchmidtSpectrum& s,
                                               FixedProbRequest req) {
  const double p_fix = fixed_prob_request(req.p_fix).p_fix;
  const std::size_t dim = s.dim();
  const auto sorted = sort_descending(s);
  if (p_fix == 1.0) {
    // y = 1 is the only point with Σ a² y = 1 inside the box
    auto out = apply_plan(s, detail::prefix_crop_plan(s, sorted, 0, 0.0));
    out.p_fix = p_fix;
    return out;
  }
  const auto tail = detail::tail_sums(sorted.spectrum);

  std::size_t n_opt = 0;
  double level = 0.0;
  for (std::size_t n = 1; n <= dim; ++n) {
    const double kappa = (p_fix - tail[n]) / static_cast<double>(n);
    const double a_n_sq = sorted.spectrum[n - 1];
    if (kappa >= -kStandardTol && kappa <= a_n_sq * (1.0 + kFeasibilityTol)) {
      n_opt = n;
      level = std::max(kappa, 0.0);
    }
  }
  if (n_opt == 0 && std::abs(p_fix - 1.0) > kStandardTol)
    throw Error(ErrorKind::Infeasible, "no crop level reproduces p_fix");

  auto plan = detail::prefix_crop_plan(s, sorted, n_opt, level);
  auto out = apply_plan(s, std::move(plan));
  out.p_fix = p_fix;
  return out;
}

/// Feeds the efficiency optimum's success probability to the fixed-probability
/// planner and reports whether both produce the same x vector within `tol`.
inline bool duality_check(const SchmidtSpectrum& s, const ReferenceLevel& ref,
                          double tol = 1e-10) {
  const auto eff = optimal_plan_efficiency(s, ref);
  const auto fixed = optimal_plan_fixed(s, {eff.p_success});
  for (std::size_t m = 0; m < s.dim(); ++m)
    if (std::abs(eff.plan.x[m] - fixed.plan.x[m]) > tol) return false;
  return true;
}

}  // namespace schmidt_forge
