#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "schmidt_forge/efficiency.hpp"
#include "schmidt_forge/error.hpp"
#include "schmidt_forge/oracle.hpp"
#include "schmidt_forge/spectrum.hpp"

namespace schmidt_forge {

/// 17 significant digits; every double round-trips exactly.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

class JsonWriter {
 public:
  JsonWriter() { out_ << '{'; }

  JsonWriter& field(std::string_view key, double v) { return raw(key, format_double(v)); }
  JsonWriter& field(std::string_view key, std::size_t v) { return raw(key, std::to_string(v)); }
  JsonWriter& field(std::string_view key, bool v) { return raw(key, v ? "true" : "false"); }
  JsonWriter& field(std::string_view key, std::optional<double> v) {
    return raw(key, v ? format_double(*v) : "null");
  }
  JsonWriter& field(std::string_view key, std::span<const double> v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
    return raw(key, s + "]");
  }
  JsonWriter& field(std::string_view key, std::span<const std::size_t> v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return raw(key, s + "]");
  }
  std::string str() const { return out_.str() + "\n}\n"; }

 private:
  JsonWriter& raw(std::string_view key, const std::string& value) {
    out_ << (first_ ? "\n  \"" : ",\n  \"") << key << "\": " << value;
    first_ = false;
    return *this;
  }
  std::ostringstream out_;
  bool first_ = true;
};

inline void line_column(std::string_view text, std::size_t byte, std::size_t& line,
                        std::size_t& column) {
  line = 1;
  column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
}

inline nlohmann::json parse_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 0, column = 0;
    line_column(text, e.byte, line, column);
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ", column " +
                                           std::to_string(column) + ": " + e.what());
  }
}

template <class T>
T get_field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw Error(ErrorKind::SchemaError, std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::SchemaError, std::string("field \"") + key + "\": " + e.what());
  }
}

inline std::optional<double> get_optional_double(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_field<double>(j, key);
}

}  // namespace detail

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Spectrum: {"dim": int, "squared_coefficients": [float, ...]}

inline std::string spectrum_to_json(const SchmidtSpectrum& s) {
  return detail::JsonWriter()
      .field("dim", s.dim())
      .field("squared_coefficients", s.sq_coeffs())
      .str();
}

inline SchmidtSpectrum spectrum_from_json(const std::string& text) {
  const auto j = detail::parse_json(text);
  const auto dim = detail::get_field<std::size_t>(j, "dim");
  const auto sq = detail::get_field<std::vector<double>>(j, "squared_coefficients");
  if (sq.size() != dim)
    throw Error(ErrorKind::SchemaError, "dim does not match the coefficient count");
  try {
    return make_spectrum(sq);
  } catch (const Error& e) {
    throw Error(ErrorKind::SchemaError, e.what());
  }
}

inline SchmidtSpectrum read_spectrum(const std::filesystem::path& path) {
  return spectrum_from_json(read_text(path));
}

inline void write_spectrum(const SchmidtSpectrum& s, const std::filesystem::path& path) {
  write_text(path, spectrum_to_json(s));
}

inline std::string measures_to_json(const Measures& m) {
  return detail::JsonWriter()
      .field("purity", m.purity)
      .field("schmidt_number", m.schmidt_number)
      .field("concurrence", m.concurrence)
      .field("concurrence_sq", m.concurrence_sq)
      .str();
}

// ---------------------------------------------------------------------------
// Outcome. Payoff outcomes carry "p_ref", fixed-probability outcomes "p_fix".
// "cropped_indices" and "permutation" are appended so plans re-parse without
// loss.

namespace detail {

inline JsonWriter outcome_writer(const ConcentrationOutcome& o) {
  JsonWriter w;
  if (o.p_fix)
    w.field("p_fix", *o.p_fix);
  else
    w.field("p_ref", o.p_ref);
  w.field("n_opt", o.plan.n_opt)
      .field("crop_level", o.plan.crop_level)
      .field("y", std::span<const double>(o.plan.y))
      .field("p_success", o.p_success)
      .field("post_spectrum", o.post_spectrum.sq_coeffs())
      .field("purity", o.post_measures.purity)
      .field("schmidt_number", o.post_measures.schmidt_number)
      .field("concurrence_sq", o.post_measures.concurrence_sq)
      .field("q_value", o.q_value)
      .field("cropped_indices", std::span<const std::size_t>(o.plan.cropped_indices))
      .field("permutation", std::span<const std::size_t>(o.plan.permutation));
  return w;
}

inline ConcentrationOutcome outcome_from_object(const nlohmann::json& j) {
  ConcentrationOutcome o{{}, 1.0, make_spectrum({0.5, 0.5}), {}, std::nullopt, std::nullopt,
                         std::nullopt};
  o.p_ref = get_optional_double(j, "p_ref");
  o.p_fix = get_optional_double(j, "p_fix");
  o.plan.n_opt = get_field<std::size_t>(j, "n_opt");
  o.plan.crop_level = get_field<double>(j, "crop_level");
  o.plan.y = get_field<std::vector<double>>(j, "y");
  o.p_success = get_field<double>(j, "p_success");
  const auto post = get_field<std::vector<double>>(j, "post_spectrum");
  if (post.size() != o.plan.y.size())
    throw Error(ErrorKind::SchemaError, "post_spectrum and y differ in length");
  try {
    o.post_spectrum = make_spectrum(post);
  } catch (const Error& e) {
    throw Error(ErrorKind::SchemaError, e.what());
  }
  o.post_measures = measures_from_purity(get_field<double>(j, "purity"), post.size());
  o.post_measures.schmidt_number = get_field<double>(j, "schmidt_number");
  o.post_measures.concurrence_sq = get_field<double>(j, "concurrence_sq");
  o.post_measures.concurrence = std::sqrt(std::max(0.0, o.post_measures.concurrence_sq));
  o.q_value = get_optional_double(j, "q_value");
  if (j.contains("cropped_indices"))
    o.plan.cropped_indices = get_field<std::vector<std::size_t>>(j, "cropped_indices");
  if (j.contains("permutation"))
    o.plan.permutation = get_field<std::vector<std::size_t>>(j, "permutation");

  for (double y : o.plan.y)
    if (!(y >= 0.0 && y <= 1.0)) throw Error(ErrorKind::SchemaError, "y outside [0, 1]");
  o.plan.z.resize(o.plan.y.size());
  o.plan.x.resize(o.plan.y.size());
  for (std::size_t m = 0; m < o.plan.y.size(); ++m) {
    o.plan.z[m] = std::sqrt(o.plan.y[m]);
    // a_m² y_m = p_s · post_m
    o.plan.x[m] = o.p_success * post[m];
  }
  return o;
}

}  // namespace detail

inline std::string outcome_to_json(const ConcentrationOutcome& o) {
  return detail::outcome_writer(o).str();
}

inline ConcentrationOutcome outcome_from_json(const std::string& text) {
  return detail::outcome_from_object(detail::parse_json(text));
}

inline ConcentrationOutcome read_outcome(const std::filesystem::path& path) {
  return outcome_from_json(read_text(path));
}

inline void write_outcome(const ConcentrationOutcome& o, const std::filesystem::path& path) {
  write_text(path, outcome_to_json(o));
}

/// Oracle report: the outcome of its best point plus search diagnostics.
inline std::string oracle_report_to_json(const ConcentrationOutcome& best,
                                         const OracleReport& r) {
  return detail::outcome_writer(best)
      .field("configurations_tested", r.configurations_tested)
      .field("delta_y_relative", r.delta_y_relative)
      .field("delta_q_relative", r.delta_q_relative)
      .field("converged", r.converged)
      .str();
}

}  // namespace schmidt_forge
