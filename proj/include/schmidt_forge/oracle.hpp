#pragma once

// Independent verifiers for the closed-form planners: active-set enumeration
// of critical points, a multi-start projected-gradient QP solver, the
// relative-difference metrics, and the unreferenced-payoff / non-diagonal
// filter properties.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "schmidt_forge/efficiency.hpp"
#include "schmidt_forge/error.hpp"
#include "schmidt_forge/fixedprob.hpp"
#include "schmidt_forge/parallel.hpp"
#include "schmidt_forge/spectrum.hpp"

namespace schmidt_forge {

/// Placement of one variable x_m in the box [0, a_m²].
enum class Role : unsigned char { zero, outer, inner };

/// A (zero, outer, inner) partition and its critical point. `level` is the
/// shared value of the inner variables (α for the payoff, κ for fixed
/// probability). `value` is ℚ = αβ − γ in payoff mode and the post purity in
/// fixed-probability mode.
struct Configuration {
  std::vector<std::size_t> zero_set;
  std::vector<std::size_t> outer_set;
  std::vector<std::size_t> inner_set;
  double level = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::size_t n = 0;
  double value = 0.0;
  bool feasible = false;

  /// Critical point in x coordinates.
  std::vector<double> x(const SchmidtSpectrum& s) const {
    std::vector<double> out(s.dim(), 0.0);
    for (auto k : outer_set) out[k] = s[k];
    for (auto l : inner_set) out[l] = std::min(level, s[l]);
    return out;
  }
};

struct OracleReport {
  std::vector<double> best_y;
  double best_value = 0.0;  ///< Q (payoff mode) or purity (fixed-probability mode)
  std::size_t configurations_tested = 0;
  std::optional<double> delta_y_relative;
  std::optional<double> delta_q_relative;
  bool converged = true;
  std::size_t iterations = 0;
};

struct RelativeDiffs {
  std::optional<double> delta_y;  ///< empty when y_num has a zero entry
  std::optional<double> delta_q;  ///< empty when q_num is zero
};

/// Mean relative deviation of y and relative deviation of the objective,
/// both normalized by the numerical solution.
inline RelativeDiffs relative_diffs(std::span<const double> y_num, std::span<const double> y_alg,
                                    double q_num, double q_alg) {
  if (y_num.size() != y_alg.size() || y_num.empty())
    throw Error(ErrorKind::DimensionMismatch, "relative_diffs needs equal, nonempty vectors");
  RelativeDiffs out;
  if (std::none_of(y_num.begin(), y_num.end(), [](double v) { return v == 0.0; })) {
    double acc = 0.0;
    for (std::size_t m = 0; m < y_num.size(); ++m)
      acc += std::abs((y_num[m] - y_alg[m]) / y_num[m]);
    out.delta_y = acc / static_cast<double>(y_num.size());
  }
  if (q_num != 0.0) out.delta_q = std::abs((q_num - q_alg) / q_num);
  return out;
}

// ---------------------------------------------------------------------------
// Configuration enumeration

namespace detail {

inline double payoff_scale(std::size_t dim) {
  const double d = static_cast<double>(dim);
  return d / (d - 1.0);
}

inline std::vector<double> y_from_x(const SchmidtSpectrum& s, std::span<const double> x) {
  std::vector<double> y(s.dim(), 1.0);
  for (std::size_t m = 0; m < s.dim(); ++m)
    if (s[m] > 0.0) y[m] = std::clamp(x[m] / s[m], 0.0, 1.0);
  return y;
}

inline Configuration partition(const SchmidtSpectrum& s, std::span<const Role> roles) {
  if (roles.size() != s.dim())
    throw Error(ErrorKind::DimensionMismatch, "role vector length differs from dim");
  Configuration c;
  long double beta = 0.0L, gamma = 0.0L;
  for (std::size_t m = 0; m < roles.size(); ++m) {
    switch (roles[m]) {
      case Role::zero: c.zero_set.push_back(m); break;
      case Role::outer:
        c.outer_set.push_back(m);
        beta += s[m];
        gamma += static_cast<long double>(s[m]) * s[m];
        break;
      case Role::inner: c.inner_set.push_back(m); break;
    }
  }
  c.beta = static_cast<double>(beta);
  c.gamma = static_cast<double>(gamma);
  c.n = c.inner_set.size();
  return c;
}

inline double min_inner(const SchmidtSpectrum& s, const Configuration& c) {
  double lo = std::numeric_limits<double>::infinity();
  for (auto l : c.inner_set) lo = std::min(lo, s[l]);
  return lo;
}

}  // namespace detail

/// Critical point of the payoff restricted to one configuration.
inline Configuration evaluate_configuration(const SchmidtSpectrum& s, const ReferenceLevel& ref,
                                            std::span<const Role> roles) {
  Configuration c = detail::partition(s, roles);
  const long double p = ref.p_ref();
  const long double beta = c.beta, gamma = c.gamma;
  if (c.n == 0) {
    c.feasible = true;
    c.value = static_cast<double>(p * beta * beta - gamma);
    return c;
  }
  const long double denom = 1.0L - static_cast<long double>(c.n) * p;
  if (!(denom > kStandardTol)) return c;
  const long double alpha = p * beta / denom;
  c.level = static_cast<double>(alpha);
  c.feasible = alpha >= 0.0L && c.level <= detail::min_inner(s, c) * (1.0 + kFeasibilityTol);
  c.value = static_cast<double>(alpha * beta - gamma);
  return c;
}

/// Critical point of Σ x² subject to Σ x = p_fix within one configuration.
inline Configuration evaluate_configuration_fixed(const SchmidtSpectrum& s, double p_fix,
                                                  std::span<const Role> roles) {
  Configuration c = detail::partition(s, roles);
  const long double p = p_fix;
  if (c.n == 0) {
    c.feasible = std::abs(c.beta - p_fix) <= kStandardTol;
    c.value = static_cast<double>(c.gamma / (p * p));
    return c;
  }
  const long double kappa = (p - c.beta) / static_cast<long double>(c.n);
  c.level = static_cast<double>(std::max(kappa, 0.0L));
  c.feasible = kappa >= -kStandardTol && c.level <= detail::min_inner(s, c) * (1.0 + kFeasibilityTol);
  c.value = static_cast<double>((c.gamma + c.n * kappa * kappa) / (p * p));
  return c;
}

/// Calls fn(roles) for every configuration: 2^D outer/inner splits, or 3^D
/// zero/outer/inner splits when `include_zero_sets` is set.
template <class Fn>
void for_each_configuration(std::size_t dim, bool include_zero_sets, Fn&& fn) {
  const std::size_t base = include_zero_sets ? 3 : 2;
  std::size_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) total *= base;
  std::vector<Role> roles(dim);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    for (std::size_t m = 0; m < dim; ++m) {
      const std::size_t digit = rest % base;
      rest /= base;
      roles[m] = include_zero_sets ? static_cast<Role>(digit)
                                   : (digit == 0 ? Role::outer : Role::inner);
    }
    fn(std::span<const Role>(roles));
  }
}

inline constexpr std::size_t kMaxEnumerationDim = 14;
inline constexpr std::size_t kMaxZeroSetEnumerationDim = 10;

namespace detail {

inline void check_enumeration_dim(std::size_t dim, bool include_zero_sets) {
  const std::size_t cap = include_zero_sets ? kMaxZeroSetEnumerationDim : kMaxEnumerationDim;
  if (dim > cap)
    throw Error(ErrorKind::DimensionTooLarge,
                "enumeration capped at D = " + std::to_string(cap));
}

}  // namespace detail

/// Best feasible critical point of the payoff over all configurations.
/// `best_value` is the payoff Q including the D/(D−1) factor. Deltas compare
/// against the closed-form plan when that plan exists.
inline OracleReport enumerate_configurations(const SchmidtSpectrum& s, const ReferenceLevel& ref,
                                             bool include_zero_sets = false) {
  detail::check_enumeration_dim(s.dim(), include_zero_sets);
  OracleReport report;
  std::optional<Configuration> best;
  for_each_configuration(s.dim(), include_zero_sets, [&](std::span<const Role> roles) {
    ++report.configurations_tested;
    auto c = evaluate_configuration(s, ref, roles);
    if (c.feasible && (!best || c.value > best->value)) best = std::move(c);
  });
  // The identity corner is always feasible, so `best` is set.
  const auto x = best->x(s);
  report.best_y = detail::y_from_x(s, x);
  report.best_value = detail::payoff_scale(s.dim()) * best->value;

  try {
    const auto alg = optimal_plan_efficiency(s, ref);
    const auto d = relative_diffs(report.best_y, alg.plan.y, report.best_value, *alg.q_value);
    report.delta_y_relative = d.delta_y;
    report.delta_q_relative = d.delta_q;
  } catch (const Error&) {
  }
  return report;
}

/// Minimum post purity over fixed-probability configurations. With
/// `prefix_only` the candidates are the crops of the n largest coefficients;
/// otherwise every outer/inner split is scored.
inline OracleReport enumerate_configurations_fixed(const SchmidtSpectrum& s, double p_fix,
                                                   bool prefix_only = false) {
  if (!(p_fix > 0.0 && p_fix <= 1.0)) throw Error(ErrorKind::PFixOutOfRange, "p_fix in (0, 1]");
  if (!prefix_only) detail::check_enumeration_dim(s.dim(), false);
  OracleReport report;
  std::optional<Configuration> best;
  auto consider = [&](std::span<const Role> roles) {
    ++report.configurations_tested;
    auto c = evaluate_configuration_fixed(s, p_fix, roles);
    if (c.feasible && (!best || c.value < best->value)) best = std::move(c);
  };
  if (prefix_only) {
    const auto sorted = sort_descending(s);
    std::vector<Role> roles(s.dim(), Role::outer);
    for (std::size_t n = 1; n <= s.dim(); ++n) {
      roles[sorted.permutation[n - 1]] = Role::inner;
      consider(roles);
    }
  } else {
    for_each_configuration(s.dim(), false, consider);
  }
  if (!best) throw Error(ErrorKind::Infeasible, "no configuration reaches p_fix");
  report.best_y = detail::y_from_x(s, best->x(s));
  report.best_value = best->value;

  const auto alg = optimal_plan_fixed(s, {p_fix});
  const auto d = relative_diffs(report.best_y, alg.plan.y, report.best_value,
                                alg.post_measures.purity);
  report.delta_y_relative = d.delta_y;
  report.delta_q_relative = d.delta_q;
  return report;
}

// ---------------------------------------------------------------------------
// Numerical QP ascent

struct AscentOptions {
  std::size_t restarts = 32;
  /// Stop when the sup-norm of the projected gradient step falls below
  /// tol · max_m a_m².
  double tol = 1e-12;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 100000;
  /// Also start from the closed-form optimum.
  bool seed_with_analytical = true;
};

namespace detail {

struct AscentRun {
  std::vector<double> x;
  double objective = -std::numeric_limits<double>::infinity();
  bool converged = false;
  std::size_t iterations = 0;
};

// Spectral projected gradient (Barzilai–Borwein steps, nonmonotone Armijo
// backtracking) maximizing P (Σx)² − Σx² over 0 <= x <= ub. Working in
// x = a² y keeps the Hessian 2(P 11ᵀ − I) well conditioned.
inline AscentRun spg_ascent(std::span<const double> ub, double p_ref, std::vector<double> x,
                            double tol_abs, std::size_t max_iterations) {
  const std::size_t dim = ub.size();
  auto objective = [&](const std::vector<double>& v) {
    long double sum = 0.0L, sq = 0.0L;
    for (double e : v) {
      sum += e;
      sq += static_cast<long double>(e) * e;
    }
    return static_cast<double>(p_ref * sum * sum - sq);
  };
  // Gradient of the minimized function −Q.
  auto gradient = [&](const std::vector<double>& v, std::vector<double>& g) {
    long double sum = 0.0L;
    for (double e : v) sum += e;
    const double ps = static_cast<double>(p_ref * sum);
    for (std::size_t m = 0; m < dim; ++m) g[m] = 2.0 * (v[m] - ps);
  };
  auto project = [&](double v, std::size_t m) { return std::clamp(v, 0.0, ub[m]); };

  constexpr std::size_t kMemory = 10;
  constexpr double kArmijo = 1e-4;
  constexpr double kStepMin = 1e-12, kStepMax = 1e12;

  for (std::size_t m = 0; m < dim; ++m) x[m] = project(x[m], m);
  std::vector<double> g(dim), g_new(dim), d(dim), trial(dim);
  gradient(x, g);
  double f = -objective(x);
  std::vector<double> history{f};
  double step = 0.5;

  AscentRun run;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    double pg = 0.0;
    for (std::size_t m = 0; m < dim; ++m) pg = std::max(pg, std::abs(project(x[m] - g[m], m) - x[m]));
    if (pg < tol_abs) {
      run.converged = true;
      run.iterations = it;
      break;
    }
    double slope = 0.0;
    for (std::size_t m = 0; m < dim; ++m) {
      d[m] = project(x[m] - step * g[m], m) - x[m];
      slope += g[m] * d[m];
    }
    const double f_ref = *std::max_element(history.begin(), history.end());
    double t = 1.0, f_trial = 0.0;
    for (;;) {
      for (std::size_t m = 0; m < dim; ++m) trial[m] = project(x[m] + t * d[m], m);
      f_trial = -objective(trial);
      if (f_trial <= f_ref + kArmijo * t * slope || t < 1e-20) break;
      t *= 0.5;
    }
    gradient(trial, g_new);
    double ss = 0.0, sy = 0.0;
    for (std::size_t m = 0; m < dim; ++m) {
      const double sm = trial[m] - x[m];
      ss += sm * sm;
      sy += sm * (g_new[m] - g[m]);
    }
    step = sy > 0.0 ? std::clamp(ss / sy, kStepMin, kStepMax) : kStepMax;
    x.swap(trial);
    g.swap(g_new);
    f = f_trial;
    history.push_back(f);
    if (history.size() > kMemory) history.erase(history.begin());
    run.iterations = it + 1;
  }
  run.objective = -f;
  run.x = std::move(x);
  return run;
}

}  // namespace detail

/// Multi-start box-projected ascent of the payoff. Starts: `restarts` random
/// interior points, the y = 1 corner and, optionally, the closed-form plan.
/// Reports the best local maximizer; `converged` tells whether that start met
/// the tolerance.
inline OracleReport numeric_qp_ascent(const SchmidtSpectrum& s, const ReferenceLevel& ref,
                                      const AscentOptions& opts = {}) {
  if (opts.restarts < 1) throw Error(ErrorKind::OutOfRange, "restarts must be >= 1");
  if (!(opts.tol > 0.0)) throw Error(ErrorKind::OutOfRange, "tol must be positive");
  if (ref.dim() != s.dim())
    throw Error(ErrorKind::DimensionMismatch, "reference built for another dimension");
  const std::size_t dim = s.dim();
  const auto ub = s.sq_coeffs();

  std::optional<ConcentrationOutcome> alg;
  try {
    alg = optimal_plan_efficiency(s, ref);
  } catch (const Error&) {
  }

  std::vector<std::vector<double>> starts;
  starts.emplace_back(ub.begin(), ub.end());  // y = 1
  if (opts.seed_with_analytical && alg) starts.push_back(alg->plan.x);
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    std::mt19937_64 rng(opts.seed + r);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> x(dim);
    for (std::size_t m = 0; m < dim; ++m) x[m] = ub[m] * unit(rng);
    starts.push_back(std::move(x));
  }

  const double tol_abs = opts.tol * s.max_sq();
  std::vector<detail::AscentRun> runs(starts.size());
  std::vector<double> scores(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    runs[i] = detail::spg_ascent(ub, ref.p_ref(), starts[i], tol_abs, opts.max_iterations);
    scores[i] = efficiency_q(s, detail::y_from_x(s, runs[i].x), ref);
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (scores[i] > scores[best]) best = i;

  OracleReport report;
  report.best_y = detail::y_from_x(s, runs[best].x);
  report.best_value = scores[best];
  report.configurations_tested = starts.size();
  report.converged = runs[best].converged;
  report.iterations = runs[best].iterations;
  if (alg) {
    const auto d = relative_diffs(report.best_y, alg->plan.y, report.best_value, *alg->q_value);
    report.delta_y_relative = d.delta_y;
    report.delta_q_relative = d.delta_q;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Payoff properties

/// p_s² C² without a reference: (D/(D−1)) [(Σ a² y)² − Σ a⁴ y²].
inline double unreferenced_payoff(const SchmidtSpectrum& s, std::span<const double> y) {
  detail::check_box(s, y);
  long double sum = 0.0L, sq = 0.0L;
  for (std::size_t m = 0; m < s.dim(); ++m) {
    const long double x = static_cast<long double>(s[m]) * y[m];
    sum += x;
    sq += x * x;
  }
  return detail::payoff_scale(s.dim()) * static_cast<double>(sum * sum - sq);
}

/// True when no sampled filter beats the identity on the unreferenced payoff.
inline bool appendix_a_check(const SchmidtSpectrum& s, std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::OutOfRange, "trials must be >= 1");
  const std::vector<double> ones(s.dim(), 1.0);
  const double at_identity = unreferenced_payoff(s, ones);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> y(s.dim());
  for (std::size_t t = 0; t < trials; ++t) {
    for (double& v : y) v = unit(rng);
    if (unreferenced_payoff(s, y) > at_identity + 1e-12) return false;
  }
  return true;
}

struct NonDiagonalPayoff {
  double q_full = 0.0;  ///< payoff including off-diagonal filter terms
  double q_diag = 0.0;  ///< same filter with off-diagonals removed
};

/// Payoff of a general filter A with A†A = Π, and of its diagonal part.
/// Π must be Hermitian positive semidefinite with spectral norm <= 1.
inline NonDiagonalPayoff appendix_b_check(const SchmidtSpectrum& s, const Eigen::MatrixXcd& pi,
                                          const ReferenceLevel& ref) {
  const auto n = static_cast<Eigen::Index>(s.dim());
  if (pi.rows() != n || pi.cols() != n)
    throw Error(ErrorKind::DimensionMismatch, "Π must be D×D");
  constexpr double kTol = 1e-12;
  if ((pi - pi.adjoint()).cwiseAbs().maxCoeff() > kTol)
    throw Error(ErrorKind::NotPSD, "Π is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(pi, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -kTol) throw Error(ErrorKind::NotPSD, "Π has a negative eigenvalue");
  if (eig.eigenvalues().maxCoeff() > 1.0 + kTol)
    throw Error(ErrorKind::SpectralBoundViolated, "Π has an eigenvalue above 1");

  long double ps = 0.0L, diag_sq = 0.0L, off_sq = 0.0L;
  for (Eigen::Index m = 0; m < n; ++m) {
    const long double am = s[static_cast<std::size_t>(m)];
    const long double pmm = pi(m, m).real();
    ps += am * pmm;
    diag_sq += am * am * pmm * pmm;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == m) continue;
      off_sq += am * static_cast<long double>(s[static_cast<std::size_t>(k)]) * std::norm(pi(m, k));
    }
  }
  const long double scale = detail::payoff_scale(s.dim());
  const long double diag = ref.p_ref() * ps * ps - diag_sq;
  return {static_cast<double>(scale * (diag - off_sq)), static_cast<double>(scale * diag)};
}

/// Random Π = G†G / λ_max(G†G) with G complex Gaussian.
inline Eigen::MatrixXcd random_psd_contraction(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = {normal(rng), normal(rng)};
  Eigen::MatrixXcd pi = g.adjoint() * g;
  pi = 0.5 * (pi + pi.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(pi, Eigen::EigenvaluesOnly);
  return pi / eig.eigenvalues().maxCoeff();
}

/// Uniform box sample mapped onto {Σ a² y = p_fix, 0 <= y <= 1} by shrinking
/// toward y = 0 (excess probability) or toward y = 1 (deficit).
inline std::vector<double> random_feasible_y(const SchmidtSpectrum& s, double p_fix,
                                             std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> y(s.dim());
  for (double& v : y) v = unit(rng);
  long double p = 0.0L;
  for (std::size_t m = 0; m < s.dim(); ++m) p += static_cast<long double>(s[m]) * y[m];
  const double ps = static_cast<double>(p);
  if (ps > p_fix) {
    for (double& v : y) v *= p_fix / ps;
  } else if (ps < p_fix) {
    const double shrink = (1.0 - p_fix) / (1.0 - ps);
    for (double& v : y) v = 1.0 - (1.0 - v) * shrink;
  }
  for (double& v : y) v = std::clamp(v, 0.0, 1.0);
  return y;
}

}  // namespace schmidt_forge
