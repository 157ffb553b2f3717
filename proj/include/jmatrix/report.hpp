#pragma once

#include <json.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "jmatrix/format.hpp"
#include "jmatrix/jacspec.hpp"
#include "jmatrix/polynomial.hpp"
#include "jmatrix/rational.hpp"
#include "jmatrix/scalar.hpp"
#include "jmatrix/tdop.hpp"

namespace jmatrix {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kSchema = "jmatrix/1";

/// Field order is insertion order, so identical runs serialize identically.
using Json = nlohmann::ordered_json;

enum class OutputFormat { Json, Csv };

struct Tolerances {
  double block_tol = 1e-12;
  double quad_rtol = 1e-10;
  double residual_tol = 1e-9;

  void validate() const {
    if (!(block_tol > 0 && quad_rtol > 0 && residual_tol > 0)) {
      throw Error(ErrorCode::InvalidArgument, "tolerances must be positive");
    }
  }
};

struct RunConfig {
  std::string command;
  Mode mode = Mode::Float;
  Tolerances tolerances;
  OutputFormat format = OutputFormat::Json;
  std::string path;  ///< empty for stdout
};

/// Rationals as "p/q" strings; doubles as numbers (shortest round trip), non-finite as strings.
inline Json to_json(const Rational& r) { return r.str(); }
inline Json to_json(double v) {
  if (!std::isfinite(v)) return format_double(v);
  return v;
}
inline Json to_json(const Scalar& s) { return s.mode() == Mode::Exact ? to_json(s.exact()) : to_json(s.value()); }

template <class T>
Json to_json(const std::vector<T>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

template <class T>
Json to_json(const Polynomial<T>& p) {
  Json out = Json::array();
  for (const auto& c : p.coeffs()) out.push_back(to_json(c));
  return out;
}

template <class T>
Json to_json(const Tridiagonalization<T>& t) {
  Json out;
  out["A_n"] = to_json(t.An);
  out["B_n"] = to_json(t.Bn);
  out["C_n"] = to_json(t.Cn);
  Json y = Json::array();
  for (const auto& p : t.y) y.push_back(to_json(p));
  out["y"] = std::move(y);
  out["repaired_rows"] = t.repaired_rows;
  out["defective_rows"] = t.defective_rows;
  return out;
}

inline Json to_json(const SpectrumResult& s) {
  Json out;
  out["block"] = {s.block.first, s.block.second};
  out["eigenvalues"] = to_json(s.eigenvalues);
  Json vecs = Json::array();
  for (const auto& v : s.vectors) vecs.push_back(to_json(v));
  out["vectors"] = std::move(vecs);
  return out;
}

inline Json to_json(const QuadratureRule& r) {
  Json out;
  out["nodes"] = to_json(r.nodes);
  out["weights"] = to_json(r.weights);
  out["total_mass"] = to_json(r.total_mass);
  return out;
}

inline Json to_json(const Tolerances& t) {
  Json out;
  out["block_tol"] = t.block_tol;
  out["quad_rtol"] = t.quad_rtol;
  out["residual_tol"] = t.residual_tol;
  return out;
}

/// Report skeleton: schema, version, command, mode, tolerances, echoed inputs.
inline Json make_report(const RunConfig& cfg, Json inputs) {
  Json out;
  out["schema"] = kSchema;
  out["version"] = kVersion;
  out["command"] = cfg.command;
  out["mode"] = std::string(to_string(cfg.mode));
  out["tolerances"] = to_json(cfg.tolerances);
  out["inputs"] = std::move(inputs);
  return out;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// node,weight rows.
inline std::string quadrature_csv(const QuadratureRule& r) {
  std::ostringstream os;
  os << "node,weight\n";
  for (std::size_t i = 0; i < r.nodes.size(); ++i) os << format_double(r.nodes[i]) << ',' << format_double(r.weights[i]) << '\n';
  return os.str();
}

/// Cells containing a comma or quote are quoted, with quotes doubled.
inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

/// Generic CSV: one header row, then rows of already formatted cells.
inline std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_cell(header[i]);
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
    os << '\n';
  }
  return os.str();
}

}  // namespace jmatrix
