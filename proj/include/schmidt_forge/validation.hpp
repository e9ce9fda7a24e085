#pragma once

// Randomized cross-checks of the planners against the oracles, used by the
// `validate` subcommand.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "schmidt_forge/efficiency.hpp"
#include "schmidt_forge/fixedprob.hpp"
#include "schmidt_forge/io.hpp"
#include "schmidt_forge/oracle.hpp"
#include "schmidt_forge/parallel.hpp"
#include "schmidt_forge/sampling.hpp"

namespace schmidt_forge {

struct Instance {
  SchmidtSpectrum spectrum;
  double p_ref;  ///< log-uniform in [1/D, 1]
  double p_fix;  ///< uniform in (0, 1]
};

/// Instance `index` of a seeded stream: D uniform in [dim_min, dim_max] and a
/// Haar-induced spectrum.
inline Instance random_instance(std::uint64_t seed, std::size_t index, std::size_t dim_min,
                                std::size_t dim_max) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + index);
  std::uniform_int_distribution<std::size_t> pick_dim(dim_min, dim_max);
  const std::size_t dim = pick_dim(rng);
  auto spectrum = haar_spectrum(dim, rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_d = std::log(static_cast<double>(dim));
  const double p_ref = std::exp(-log_d * unit(rng));
  const double p_fix = 1.0 - unit(rng);  // (0, 1]
  return {std::move(spectrum), std::min(std::max(p_ref, 1.0 / dim), 1.0), p_fix};
}

struct SuiteResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::string first_failure;
  bool passed() const { return failed == 0; }
};

struct ValidationConfig {
  std::size_t dim_min = 3;
  std::size_t dim_max = 10;
  std::size_t instances = 500;
  std::uint64_t seed = 1;
  std::size_t box_samples = 1000;
  std::size_t identity_trials = 10000;
  std::size_t filter_trials = 100;
};

namespace detail {

inline std::string format_q(double a, double b) {
  return "(" + format_double(a) + " vs " + format_double(b) + ")";
}

template <class Check>
SuiteResult run_suite(const std::string& name, const ValidationConfig& cfg, Check&& check) {
  std::vector<std::string> failures(cfg.instances);
  parallel_for(cfg.instances, [&](std::size_t i) {
    auto inst = random_instance(cfg.seed, i, cfg.dim_min, cfg.dim_max);
    failures[i] = check(inst, i);
  });
  SuiteResult r{name, cfg.instances, 0, {}};
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (failures[i].empty()) continue;
    if (r.failed++ == 0) r.first_failure = "instance " + std::to_string(i) + ": " + failures[i];
  }
  return r;
}

}  // namespace detail

inline std::vector<SuiteResult> run_validation(const ValidationConfig& cfg) {
  if (cfg.dim_max < cfg.dim_min || cfg.dim_min < 2)
    throw Error(ErrorKind::OutOfRange, "need 2 <= dim_min <= dim_max");
  if (cfg.dim_max > kMaxEnumerationDim)
    throw Error(ErrorKind::DimensionTooLarge,
                "validation enumerates configurations; dim_max <= " +
                    std::to_string(kMaxEnumerationDim));
  std::vector<SuiteResult> results;

  results.push_back(detail::run_suite(
      "efficiency-vs-enumeration", cfg, [&](const Instance& inst, std::size_t i) -> std::string {
        const auto& s = inst.spectrum;
        const auto ref = reference_from(ReferenceKind::p_ref, inst.p_ref, s.dim());
        const auto alg = optimal_plan_efficiency(s, ref);
        const auto en = enumerate_configurations(s, ref);
        const double q = *alg.q_value;
        if (std::abs(q - en.best_value) > 1e-10 * std::abs(en.best_value))
          return "Q mismatch " + detail::format_q(q, en.best_value);
        for (std::size_t m = 0; m < s.dim(); ++m)
          if (std::abs(alg.plan.y[m] - en.best_y[m]) > 1e-9) return "y mismatch";
        std::mt19937_64 rng(cfg.seed + 7919 * i);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<double> y(s.dim());
        for (std::size_t t = 0; t < cfg.box_samples; ++t) {
          for (double& v : y) v = unit(rng);
          if (efficiency_q(s, y, ref) > q + 1e-10) return "random box point beats plan";
        }
        if (q < 0.0) return "negative payoff";
        return {};
      }));

  results.push_back(detail::run_suite(
      "fixedprob-optimality", cfg, [&](const Instance& inst, std::size_t i) -> std::string {
        const auto& s = inst.spectrum;
        const auto alg = optimal_plan_fixed(s, {inst.p_fix});
        if (std::abs(alg.p_success - inst.p_fix) > 1e-12) return "p_success != p_fix";
        const double purity = alg.post_measures.purity;
        if (purity > enumerate_configurations_fixed(s, inst.p_fix, true).best_value + 1e-10)
          return "prefix crop beats plan";
        if (purity > enumerate_configurations_fixed(s, inst.p_fix, false).best_value + 1e-10)
          return "configuration beats plan";
        std::mt19937_64 rng(cfg.seed + 104729 * i);
        for (std::size_t t = 0; t < cfg.box_samples; ++t) {
          const auto y = random_feasible_y(s, inst.p_fix, rng);
          if (purity > apply_plan(s, y).post_measures.purity + 1e-10)
            return "random feasible point beats plan";
        }
        return {};
      }));

  results.push_back(detail::run_suite(
      "duality", cfg, [&](const Instance& inst, std::size_t) -> std::string {
        const auto ref = reference_from(ReferenceKind::p_ref, inst.p_ref, inst.spectrum.dim());
        return duality_check(inst.spectrum, ref) ? std::string{} : "x vectors differ";
      }));

  results.push_back(detail::run_suite(
      "numeric-ascent-agreement", cfg, [&](const Instance& inst, std::size_t i) -> std::string {
        const auto& s = inst.spectrum;
        const auto ref = reference_from(ReferenceKind::p_ref, inst.p_ref, s.dim());
        AscentOptions opts;
        opts.restarts = 8;
        opts.seed = cfg.seed + i;
        opts.seed_with_analytical = false;
        const auto num = numeric_qp_ascent(s, ref, opts);
        const auto en = enumerate_configurations(s, ref);
        if (std::abs(num.best_value - en.best_value) > 1e-8 * std::abs(en.best_value))
          return "ascent and enumeration disagree " + detail::format_q(num.best_value, en.best_value);
        return {};
      }));

  results.push_back(detail::run_suite(
      "zero-elimination", cfg, [&](const Instance& inst, std::size_t) -> std::string {
        const auto& s = inst.spectrum;
        if (s.dim() > 8) return {};
        const auto ref = reference_from(ReferenceKind::p_ref, inst.p_ref, s.dim());
        const double without_zeros = enumerate_configurations(s, ref, false).best_value;
        const double with_zeros = enumerate_configurations(s, ref, true).best_value;
        if (with_zeros > without_zeros + 1e-14) return "a configuration with zeros wins";
        return {};
      }));

  results.push_back(detail::run_suite(
      "unreferenced-payoff-identity", cfg, [&](const Instance& inst, std::size_t i) -> std::string {
        return appendix_a_check(inst.spectrum, cfg.identity_trials, cfg.seed + i)
                   ? std::string{}
                   : "a filter beats the identity";
      }));

  results.push_back(detail::run_suite(
      "diagonal-filter-suffices", cfg, [&](const Instance& inst, std::size_t i) -> std::string {
        const auto& s = inst.spectrum;
        const auto ref = reference_from(ReferenceKind::p_ref, inst.p_ref, s.dim());
        std::mt19937_64 rng(cfg.seed + 15485863 * i);
        for (std::size_t t = 0; t < cfg.filter_trials; ++t) {
          const auto r = appendix_b_check(s, random_psd_contraction(s.dim(), rng), ref);
          if (r.q_full > r.q_diag + 1e-12) return "off-diagonal terms raised the payoff";
        }
        return {};
      }));

  return results;
}

}  // namespace schmidt_forge
