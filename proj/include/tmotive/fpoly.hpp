#pragma once

// Polynomials with coefficients in the ambient finite field, in one variable
// (theta for elements of F_q[theta], T for elements of F_{q^2}[T]).

#include <cstddef>
#include <vector>

#include "tmotive/context.hpp"
#include "tmotive/ffield.hpp"
#include "tmotive/matrix.hpp"

namespace tmotive {

class FPoly {
 public:
  FPoly() = default;
  explicit FPoly(FieldPtr f, std::vector<Code> c = {}) : f_(std::move(f)), c_(std::move(c)) { trim(); }
  static FPoly constant(const FFElem& c) { return FPoly(c.field(), {c.code()}); }
  static FPoly monomial(const FFElem& c, std::size_t deg) {
    std::vector<Code> v(deg + 1, 0);
    v[deg] = c.code();
    return FPoly(c.field(), std::move(v));
  }

  const FieldPtr& field() const { return f_; }
  const std::vector<Code>& codes() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  FFElem coeff(std::size_t j) const { return {f_, j < c_.size() ? c_[j] : 0}; }
  bool is_constant() const { return c_.size() <= 1; }
  bool in_fq() const {
    for (Code c : c_)
      if (!f_->in_subfield_q(c)) return false;
    return true;
  }

  friend FPoly operator+(const FPoly& a, const FPoly& b) { return combine(a, b, false); }
  friend FPoly operator-(const FPoly& a, const FPoly& b) { return combine(a, b, true); }
  FPoly operator-() const {
    FPoly out = *this;
    for (auto& c : out.c_) c = f_->neg(c);
    return out;
  }
  friend FPoly operator*(const FPoly& a, const FPoly& b) {
    const FieldPtr& f = a.f_ ? a.f_ : b.f_;
    if (a.c_.empty() || b.c_.empty()) return FPoly(f);
    std::vector<Code> r(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = f->add(r[i + j], f->mul(a.c_[i], b.c_[j]));
    return FPoly(f, std::move(r));
  }
  FPoly scaled(const FFElem& s) const {
    FPoly out = *this;
    for (auto& c : out.c_) c = f_->mul(c, s.code());
    out.trim();
    return out;
  }
  /// Coefficientwise Frobenius x -> x^{q^i}.
  FPoly frobenius(std::int64_t i) const {
    FPoly out = *this;
    for (auto& c : out.c_) c = f_->frobenius(c, i);
    return out;
  }

  /// Value at theta as a series, at the context's constant precision.
  CinfElem at_theta(const Context& ctx) const {
    std::vector<CinfElem::Term> terms;
    for (std::size_t j = 0; j < c_.size(); ++j)
      if (c_[j] != 0) terms.push_back({-static_cast<std::int64_t>(j) * ctx.ram, c_[j]});
    return CinfElem::from_terms(ctx.field, ctx.ram, ctx.const_prec(), std::move(terms));
  }
  /// Value at a field element.
  FFElem at(const FFElem& x) const {
    Code acc = 0;
    for (std::size_t j = c_.size(); j-- > 0;) acc = f_->add(f_->mul(acc, x.code()), c_[j]);
    return {f_, acc};
  }

  bool operator==(const FPoly& o) const { return c_ == o.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  static FPoly combine(const FPoly& a, const FPoly& b, bool negate) {
    const FieldPtr& f = a.f_ ? a.f_ : b.f_;
    std::vector<Code> r(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t j = 0; j < r.size(); ++j) {
      const Code x = j < a.c_.size() ? a.c_[j] : 0;
      const Code y = j < b.c_.size() ? b.c_[j] : 0;
      r[j] = negate ? f->sub(x, y) : f->add(x, y);
    }
    return FPoly(f, std::move(r));
  }

  FieldPtr f_;
  std::vector<Code> c_;
};

using FPMatrix = Matrix<FPoly>;

inline FPMatrix fp_identity(const FieldPtr& f, std::size_t n) {
  FPMatrix m(n, n, FPoly(f));
  for (std::size_t i = 0; i < n; ++i) m(i, i) = FPoly::constant(FFElem::one(f));
  return m;
}

inline long degree(const FPMatrix& m) {
  long d = -1;
  for (const auto& x : m.data()) d = std::max(d, x.degree());
  return d;
}

/// Entrywise value at theta.
inline CMatrix at_theta(const FPMatrix& m, const Context& ctx) {
  return m.map([&ctx](const FPoly& p) { return p.at_theta(ctx); });
}

/// Determinant by cofactor expansion (sizes here are <= 6).
inline FPoly determinant(const FPMatrix& m) {
  require(m.square() && m.rows() > 0, ErrorKind::domain, "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  FPoly acc(m(0, 0).field());
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j).is_zero()) continue;
    FPMatrix minor(n - 1, n - 1, FPoly(m(0, 0).field()));
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0, cc = 0; c < n; ++c)
        if (c != j) minor(r - 1, cc++) = m(r, c);
    const FPoly term = m(0, j) * determinant(minor);
    acc = (j % 2 == 1) ? acc - term : acc + term;
  }
  return acc;
}

/// True when det is a nonzero constant, i.e. m is invertible over the polynomial ring.
inline bool is_unimodular(const FPMatrix& m) {
  const FPoly d = determinant(m);
  return d.degree() == 0;
}

}  // namespace tmotive
