#pragma once

// Polynomials in T with C_infty coefficients. T commutes with everything and
// is fixed by the Frobenius twist, which acts on coefficients only.

#include <cstddef>
#include <vector>

#include "tmotive/cinf.hpp"
#include "tmotive/matrix.hpp"

namespace tmotive {

class PolyT {
 public:
  PolyT() = default;
  explicit PolyT(std::vector<CinfElem> coeffs) : c_(std::move(coeffs)) {}
  static PolyT constant(const CinfElem& c) { return PolyT({c}); }
  /// T - a.
  static PolyT linear(const CinfElem& a) {
    return PolyT({-a, CinfElem::one(a.field(), a.ram(), kExactPrec)});
  }

  const std::vector<CinfElem>& coeffs() const { return c_; }
  std::size_t size() const { return c_.size(); }
  bool empty() const { return c_.empty(); }
  const CinfElem& operator[](std::size_t j) const { return c_[j]; }

  /// Index of the last coefficient that is nonzero to precision, or -1.
  long degree() const {
    for (std::size_t j = c_.size(); j-- > 0;)
      if (!c_[j].is_zero()) return static_cast<long>(j);
    return -1;
  }
  /// Drops trailing coefficients that are zero to precision.
  PolyT trimmed() const {
    PolyT out = *this;
    while (!out.c_.empty() && out.c_.back().is_zero()) out.c_.pop_back();
    return out;
  }
  /// Coefficient j, or a zero carrying `like`'s field and ramification.
  CinfElem coeff_or_zero(std::size_t j, const CinfElem& like) const {
    return j < c_.size() ? c_[j] : CinfElem::zero(like.field(), like.ram(), kExactPrec);
  }

  friend PolyT operator+(const PolyT& f, const PolyT& g) { return combine(f, g, false); }
  friend PolyT operator-(const PolyT& f, const PolyT& g) { return combine(f, g, true); }
  PolyT operator-() const {
    PolyT out = *this;
    for (auto& x : out.c_) x = -x;
    return out;
  }
  friend PolyT operator*(const PolyT& f, const PolyT& g) {
    if (f.c_.empty() || g.c_.empty()) return {};
    std::vector<CinfElem> r;
    r.reserve(f.c_.size() + g.c_.size() - 1);
    for (std::size_t k = 0; k + 1 < f.c_.size() + g.c_.size(); ++k) {
      CinfElem acc;
      bool first = true;
      for (std::size_t i = 0; i < f.c_.size(); ++i) {
        if (k < i || k - i >= g.c_.size()) continue;
        CinfElem term = f.c_[i] * g.c_[k - i];
        acc = first ? term : acc + term;
        first = false;
      }
      r.push_back(std::move(acc));
    }
    return PolyT(std::move(r));
  }
  friend PolyT operator*(const CinfElem& s, const PolyT& f) {
    PolyT out = f;
    for (auto& x : out.c_) x = s * x;
    return out;
  }

  /// Coefficientwise q^i-th power; T is untouched.
  PolyT twist(std::int64_t i) const {
    PolyT out = *this;
    for (auto& x : out.c_) x = x.twist(i);
    return out;
  }

  /// Horner evaluation at T = z.
  CinfElem eval(const CinfElem& z) const {
    require(!c_.empty(), ErrorKind::domain, "evaluation of an empty polynomial");
    CinfElem acc = c_.back();
    for (std::size_t j = c_.size() - 1; j-- > 0;) acc = acc * z + c_[j];
    return acc;
  }

  bool operator==(const PolyT& o) const { return c_ == o.c_; }

 private:
  static PolyT combine(const PolyT& f, const PolyT& g, bool negate) {
    const std::size_t n = std::max(f.c_.size(), g.c_.size());
    std::vector<CinfElem> r;
    r.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (j >= g.c_.size()) r.push_back(f.c_[j]);
      else if (j >= f.c_.size()) r.push_back(negate ? -g.c_[j] : g.c_[j]);
      else r.push_back(negate ? f.c_[j] - g.c_[j] : f.c_[j] + g.c_[j]);
    }
    return PolyT(std::move(r));
  }

  std::vector<CinfElem> c_;
};

using PMatrix = Matrix<PolyT>;

inline PMatrix twist(const PMatrix& m, std::int64_t i) {
  return m.map([i](const PolyT& f) { return f.twist(i); });
}

/// Lifts a C_infty matrix to constant polynomials.
inline PMatrix as_poly_matrix(const CMatrix& m) {
  return m.map([](const CinfElem& x) { return PolyT::constant(x); });
}

/// Determinant by cofactor expansion along the first row (sizes here are <= 6).
inline PolyT determinant(const PMatrix& m) {
  require(m.square() && m.rows() > 0, ErrorKind::domain, "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  PolyT acc;
  bool first = true;
  for (std::size_t j = 0; j < n; ++j) {
    PMatrix minor(n - 1, n - 1, PolyT{});
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = m(r, c);
    PolyT term = m(0, j) * determinant(minor);
    if (j % 2 == 1) term = -term;
    acc = first ? term : acc + term;
    first = false;
  }
  return acc;
}

}  // namespace tmotive
