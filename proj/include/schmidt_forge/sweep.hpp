#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "schmidt_forge/efficiency.hpp"
#include "schmidt_forge/error.hpp"
#include "schmidt_forge/fixedprob.hpp"
#include "schmidt_forge/interp.hpp"
#include "schmidt_forge/io.hpp"
#include "schmidt_forge/parallel.hpp"

namespace schmidt_forge {

enum class SweepMode { efficiency, fixedprob, interp };

namespace detail {

inline double parse_number(std::string_view tok, std::size_t dim) {
  if (tok == "D") return static_cast<double>(dim);
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc{} || ptr != end || tok.empty())
    throw Error(ErrorKind::GridSyntax, "bad number '" + std::string(tok) + "'");
  return v;
}

// "0.5", "1/D", "3/4", "D"
inline double parse_bound(std::string_view tok, std::size_t dim) {
  const auto slash = tok.find('/');
  if (slash == std::string_view::npos) return parse_number(tok, dim);
  const double den = parse_number(tok.substr(slash + 1), dim);
  if (den == 0.0) throw Error(ErrorKind::GridSyntax, "zero denominator in grid bound");
  return parse_number(tok.substr(0, slash), dim) / den;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace detail

/// Grid syntax: `lin:a:b:n`, `log:a:b:n` (n points, endpoints included) or
/// `list:v1,v2,...`. Bounds accept fractions and the token D, e.g. `1/D`.
inline std::vector<double> parse_grid(std::string_view spec, std::size_t dim) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos)
    throw Error(ErrorKind::GridSyntax, "expected lin:, log: or list: prefix");
  const auto kind = spec.substr(0, colon);
  const auto body = spec.substr(colon + 1);

  if (kind == "list") {
    std::vector<double> out;
    for (auto tok : detail::split(body, ',')) out.push_back(detail::parse_bound(tok, dim));
    return out;
  }
  const auto parts = detail::split(body, ':');
  if (parts.size() != 3) throw Error(ErrorKind::GridSyntax, "expected <kind>:a:b:n");
  const double a = detail::parse_bound(parts[0], dim);
  const double b = detail::parse_bound(parts[1], dim);
  const double nd = detail::parse_number(parts[2], dim);
  if (!(nd >= 1.0) || nd != std::floor(nd))
    throw Error(ErrorKind::GridSyntax, "point count must be a positive integer");
  const auto n = static_cast<std::size_t>(nd);

  std::vector<double> out(n);
  if (kind == "lin") {
    for (std::size_t k = 0; k < n; ++k)
      out[k] = n == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
  } else if (kind == "log") {
    if (!(a > 0.0 && b > 0.0)) throw Error(ErrorKind::GridSyntax, "log grid needs positive bounds");
    const double la = std::log(a), lb = std::log(b);
    for (std::size_t k = 0; k < n; ++k)
      out[k] = n == 1 ? a : std::exp(la + (lb - la) * static_cast<double>(k) / static_cast<double>(n - 1));
  } else {
    throw Error(ErrorKind::GridSyntax, "unknown grid kind '" + std::string(kind) + "'");
  }
  if (n > 1) {
    out.front() = a;
    out.back() = b;
  }
  return out;
}

/// Default grid spec per mode for a D-dimensional spectrum.
inline std::string default_grid(SweepMode mode) {
  switch (mode) {
    case SweepMode::efficiency: return "log:1/D:1:100";
    case SweepMode::fixedprob: return "lin:0.01:1:100";
    case SweepMode::interp: return "lin:0:1:101";
  }
  return {};
}

inline std::vector<ConcentrationOutcome> efficiency_sweep(const SchmidtSpectrum& s,
                                                          std::span<const double> p_ref_grid) {
  std::vector<std::optional<ConcentrationOutcome>> slots(p_ref_grid.size());
  parallel_for(p_ref_grid.size(), [&](std::size_t i) {
    slots[i] = optimal_plan_efficiency(
        s, reference_from(ReferenceKind::p_ref, p_ref_grid[i], s.dim()));
  });
  std::vector<ConcentrationOutcome> out;
  for (auto& o : slots) out.push_back(std::move(*o));
  return out;
}

inline std::vector<ConcentrationOutcome> fixedprob_sweep(const SchmidtSpectrum& s,
                                                         std::span<const double> p_fix_grid) {
  std::vector<std::optional<ConcentrationOutcome>> slots(p_fix_grid.size());
  parallel_for(p_fix_grid.size(), [&](std::size_t i) {
    slots[i] = optimal_plan_fixed(s, fixed_prob_request(p_fix_grid[i]));
  });
  std::vector<ConcentrationOutcome> out;
  for (auto& o : slots) out.push_back(std::move(*o));
  return out;
}

// CSV: ',' separator, '.' decimal point, LF endings, header first.

inline std::string efficiency_sweep_csv(std::span<const ConcentrationOutcome> rows) {
  std::string out = "p_ref,n_opt,p_success,purity,schmidt_number,concurrence_sq,q_value\n";
  for (const auto& r : rows) {
    out += format_double(r.p_ref.value_or(NAN)) + ',' + std::to_string(r.plan.n_opt) + ',' +
           format_double(r.p_success) + ',' + format_double(r.post_measures.purity) + ',' +
           format_double(r.post_measures.schmidt_number) + ',' +
           format_double(r.post_measures.concurrence_sq) + ',' +
           format_double(r.q_value.value_or(NAN)) + '\n';
  }
  return out;
}

inline std::string fixedprob_sweep_csv(std::span<const ConcentrationOutcome> rows) {
  std::string out = "p_fix,n_opt,p_success,purity,schmidt_number,concurrence_sq\n";
  for (const auto& r : rows) {
    out += format_double(r.p_fix.value_or(NAN)) + ',' + std::to_string(r.plan.n_opt) + ',' +
           format_double(r.p_success) + ',' + format_double(r.post_measures.purity) + ',' +
           format_double(r.post_measures.schmidt_number) + ',' +
           format_double(r.post_measures.concurrence_sq) + '\n';
  }
  return out;
}

inline std::string interp_sweep_csv(std::span<const InterpPoint> rows) {
  std::string out = "xi,p_success,purity,schmidt_number,concurrence_sq\n";
  for (const auto& r : rows) {
    out += format_double(r.xi) + ',' + format_double(r.success_prob) + ',' +
           format_double(r.measures.purity) + ',' + format_double(r.measures.schmidt_number) +
           ',' + format_double(r.measures.concurrence_sq) + '\n';
  }
  return out;
}

inline std::string outcomes_json(std::span<const ConcentrationOutcome> rows) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += outcome_to_json(rows[i]);
    if (i + 1 < rows.size()) out.insert(out.size() - 1, ",");
  }
  return out + "]\n";
}

inline std::string interp_points_json(std::span<const InterpPoint> rows) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += detail::JsonWriter()
               .field("xi", rows[i].xi)
               .field("p_success", rows[i].success_prob)
               .field("spectrum", rows[i].spectrum.sq_coeffs())
               .field("purity", rows[i].measures.purity)
               .field("schmidt_number", rows[i].measures.schmidt_number)
               .field("concurrence_sq", rows[i].measures.concurrence_sq)
               .str();
    if (i + 1 < rows.size()) out.insert(out.size() - 1, ",");
  }
  return out + "]\n";
}

}  // namespace schmidt_forge
