#pragma once

// JSON forms of the library types (nlohmann/json):
//   FFElem      [c_0, ..., c_{D-1}]
//   FieldSpec   {p, s, D, modulus}
//   series      {ram, prec, terms: [[e, FFElem], ...]}, e ascending
//   matrix      row-major array of rows of series
//   GammaElem   {k, G: [[poly]], H: [[poly]]}, poly = [FFElem, ...] by ascending theta-degree
//   PolyT       [series, ...] by ascending T-degree

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tmotive/context.hpp"
#include "tmotive/fpoly.hpp"
#include "tmotive/latticemap.hpp"
#include "tmotive/polyt.hpp"

namespace tmotive::io {

using nlohmann::json;

namespace detail {

inline void expect(bool cond, const std::string& what) { require(cond, ErrorKind::schema, what); }

inline std::int64_t as_int(const json& j, const std::string& what) {
  expect(j.is_number_integer(), what + ": expected an integer");
  return j.get<std::int64_t>();
}

}  // namespace detail

inline json to_json(const FieldSpec& s) { return {{"p", s.p}, {"s", s.s}, {"D", s.D}, {"modulus", s.modulus}}; }

inline FieldSpec field_spec_from_json(const json& j) {
  detail::expect(j.is_object(), "FieldSpec must be an object");
  FieldSpec s;
  s.p = static_cast<int>(detail::as_int(j.at("p"), "p"));
  s.s = static_cast<int>(detail::as_int(j.at("s"), "s"));
  s.D = j.contains("D") ? static_cast<int>(detail::as_int(j.at("D"), "D")) : 4 * s.s;
  if (j.contains("modulus")) {
    detail::expect(j.at("modulus").is_array(), "modulus must be an array");
    for (const auto& c : j.at("modulus")) s.modulus.push_back(static_cast<int>(detail::as_int(c, "modulus entry")));
  }
  return s;
}

inline json to_json(const FFElem& x) { return x.coeffs(); }

inline FFElem ffelem_from_json(const FieldPtr& f, const json& j) {
  detail::expect(j.is_array() && static_cast<int>(j.size()) == f->spec().D,
                 "FFElem must be an array of " + std::to_string(f->spec().D) + " integers");
  std::vector<int> d;
  for (const auto& c : j) {
    const auto v = detail::as_int(c, "FFElem digit");
    detail::expect(v >= 0 && v < f->p(), "FFElem digit out of range [0, p)");
    d.push_back(static_cast<int>(v));
  }
  return FFElem::from_digits(f, d);
}

inline json to_json(const CinfElem& x) {
  json terms = json::array();
  for (auto [e, c] : x.terms()) terms.push_back(json::array({e, to_json(FFElem(x.field(), c))}));
  return {{"ram", x.ram()}, {"prec", x.prec()}, {"terms", terms}};
}

inline CinfElem series_from_json(const FieldPtr& f, const json& j) {
  detail::expect(j.is_object() && j.contains("ram") && j.contains("prec") && j.contains("terms"),
                 "series must be an object with ram, prec and terms");
  const auto ram = detail::as_int(j.at("ram"), "ram");
  const auto prec = detail::as_int(j.at("prec"), "prec");
  detail::expect(ram > 0, "ram must be positive");
  detail::expect(j.at("terms").is_array(), "terms must be an array");
  std::vector<CinfElem::Term> terms;
  std::int64_t last = std::numeric_limits<std::int64_t>::min();
  for (const auto& t : j.at("terms")) {
    detail::expect(t.is_array() && t.size() == 2, "term must be [e, FFElem]");
    const auto e = detail::as_int(t[0], "exponent");
    detail::expect(e > last, "terms must be sorted by strictly ascending exponent");
    detail::expect(e < prec, "term exponent must lie below prec");
    last = e;
    const FFElem c = ffelem_from_json(f, t[1]);
    if (c.code() != 0) terms.push_back({e, c.code()});
  }
  return CinfElem::from_terms(f, ram, prec, std::move(terms));
}

inline json to_json(const CMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline CMatrix matrix_from_json(const FieldPtr& f, const json& j) {
  detail::expect(j.is_array() && !j.empty(), "matrix must be a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  detail::expect(cols > 0, "matrix rows must be non-empty arrays");
  CMatrix m(j.size(), cols, CinfElem());
  for (std::size_t i = 0; i < j.size(); ++i) {
    detail::expect(j[i].is_array() && j[i].size() == cols, "matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = series_from_json(f, j[i][c]);
  }
  return m;
}

inline json to_json(const FPoly& p) {
  json out = json::array();
  for (std::size_t j = 0; j < p.codes().size(); ++j) out.push_back(to_json(p.coeff(j)));
  return out;
}

inline FPoly fpoly_from_json(const FieldPtr& f, const json& j) {
  detail::expect(j.is_array(), "polynomial must be an array of FFElem");
  std::vector<Code> c;
  for (const auto& x : j) c.push_back(ffelem_from_json(f, x).code());
  return FPoly(f, std::move(c));
}

inline json to_json(const FPMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline FPMatrix fpmatrix_from_json(const FieldPtr& f, const json& j) {
  detail::expect(j.is_array() && !j.empty() && j[0].is_array() && !j[0].empty(), "polynomial matrix must be a non-empty array of rows");
  const std::size_t cols = j[0].size();
  FPMatrix m(j.size(), cols, FPoly(f));
  for (std::size_t i = 0; i < j.size(); ++i) {
    detail::expect(j[i].is_array() && j[i].size() == cols, "polynomial matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = fpoly_from_json(f, j[i][c]);
  }
  return m;
}

inline json to_json(const GammaElem& g) { return {{"k", g.k}, {"G", to_json(g.G)}, {"H", to_json(g.H)}}; }

inline GammaElem gamma_from_json(const FieldPtr& f, const json& j) {
  detail::expect(j.is_object() && j.contains("k") && j.contains("G") && j.contains("H"), "gamma must be an object with k, G and H");
  GammaElem g;
  g.k = static_cast<long>(detail::as_int(j.at("k"), "k"));
  detail::expect(g.k >= 0, "k must be non-negative");
  g.G = fpmatrix_from_json(f, j.at("G"));
  g.H = fpmatrix_from_json(f, j.at("H"));
  return g;
}

inline json to_json(const PolyT& p) {
  json out = json::array();
  for (const auto& c : p.coeffs()) out.push_back(to_json(c));
  return out;
}

inline json to_json(const PMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::schema, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::exception& e) {
    fail(ErrorKind::schema, path + ": " + e.what());
  }
}

/// Runs `f`, turning JSON access errors (missing keys, wrong types) into schema errors.
template <class F>
auto with_schema(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    fail(ErrorKind::schema, e.what());
  }
}

}  // namespace tmotive::io
