#pragma once

// Working context shared by the function-field computations: the ambient
// field with its omega, the ramification N of the series, the target
// absolute precision P and the neighbourhood / slack thresholds.

#include <cstdint>

#include "tmotive/cinf.hpp"
#include "tmotive/ffield.hpp"
#include "tmotive/matrix.hpp"

namespace tmotive {

struct Context {
  FieldPtr field;
  FFElem omega;
  std::int64_t ram = 8;     // N, default q^2 - 1
  std::int64_t prec = 200;  // P, exponent units at ramification N
  std::int64_t slack = 10;  // exponent units lost to precision bookkeeping
  std::int64_t guard = 72;  // extra precision carried by exact constants
  std::int64_t vmin = 8;    // neighbourhood threshold v(A) >= vmin / N

  static Context make(int p, int s, int D = 0, std::int64_t prec = 200, std::int64_t ram = 0, std::int64_t slack = 10) {
    Context c;
    c.field = Field::create(p, s, D);
    c.omega = Omega::of(c.field).value;
    const auto q = static_cast<std::int64_t>(c.field->q());
    c.ram = ram > 0 ? ram : q * q - 1;
    c.prec = prec;
    c.slack = slack;
    c.guard = q * q * c.ram;
    c.vmin = c.ram;
    require(prec > 4 * slack, ErrorKind::domain, "precision must exceed 4 * slack");
    return c;
  }

  Context with_prec(std::int64_t p) const {
    Context c = *this;
    c.prec = p;
    require(p > 4 * slack, ErrorKind::domain, "precision must exceed 4 * slack");
    return c;
  }

  std::int64_t q() const { return static_cast<std::int64_t>(field->q()); }
  std::int64_t const_prec() const { return prec + guard; }

  CinfElem zero() const { return CinfElem::zero(field, ram, const_prec()); }
  CinfElem one() const { return CinfElem::one(field, ram, const_prec()); }
  CinfElem theta() const { return CinfElem::theta(field, ram, const_prec()); }
  CinfElem constant(const FFElem& c) const { return CinfElem::constant(c, ram, const_prec()); }
  /// c * t^{e/N} known to the working precision P.
  CinfElem monomial(const FFElem& c, std::int64_t e) const { return CinfElem::monomial(c, e, ram, prec); }
  /// theta^{q^i} - theta^{q^j} at constant precision.
  CinfElem theta_ij(std::int64_t i, std::int64_t j) const { return tmotive::theta_ij(field, ram, const_prec(), i, j); }
  /// theta^k for k >= 0.
  CinfElem theta_pow(std::int64_t k) const { return CinfElem::monomial(FFElem::one(field), -k * ram, ram, const_prec()); }

  CMatrix identity(std::size_t n) const { return identity_matrix(field, n, ram, const_prec()); }
  CMatrix zeros(std::size_t r, std::size_t c) const { return zero_matrix(field, r, c, ram, const_prec()); }
};

}  // namespace tmotive
