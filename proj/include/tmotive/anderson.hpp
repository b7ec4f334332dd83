#pragma once

// T-motives M(A) given by T e = theta e + A tau e + tau^2 e: validation, the
// tau-action on the C_infty[T]-basis (e, tau e), and the exponential
// Exp_A(z) = sum_i C_i z^{(i)}.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tmotive/context.hpp"
#include "tmotive/matrix.hpp"
#include "tmotive/polyt.hpp"

namespace tmotive {

struct TMotive {
  std::size_t n = 0;
  CMatrix A;
  Context ctx;
  bool base_point = false;  // A == 0, i.e. M(0) is the n-th power of the rank-2 Carlitz module

  std::size_t rank() const { return 2 * n; }
};

/// Rejects matrices with an entry outside the neighbourhood v >= vmin / N.
inline TMotive make_tmotive(const Context& ctx, CMatrix A) {
  require(A.square() && A.rows() > 0, ErrorKind::domain, "A must be a non-empty square matrix");
  bool zero = true;
  for (const auto& x : A.data()) {
    require(x.field() && x.field()->spec() == ctx.field->spec(), ErrorKind::domain, "entry of A over the wrong field");
    // order/ram >= vmin/N, cross-multiplied.
    if (!x.is_zero()) {
      zero = false;
      require(x.order() * ctx.ram >= ctx.vmin * x.ram(), ErrorKind::domain,
              "entry of A has valuation " + x.valuation().str() + " below the neighbourhood threshold");
    }
  }
  TMotive m;
  m.n = A.rows();
  m.A = std::move(A);
  m.ctx = ctx;
  m.base_point = zero;
  return m;
}

/// The base point M(0), with A exactly zero (constant precision).
inline TMotive base_motive(const Context& ctx, std::size_t n) { return make_tmotive(ctx, ctx.zeros(n, n)); }

/// tau f = R_A f for f = (e, tau e): R_A = [[0, E], [(T - theta) E, -A]].
inline PMatrix tau_matrix(const TMotive& M) {
  const auto& ctx = M.ctx;
  const std::size_t n = M.n;
  PMatrix R(2 * n, 2 * n, PolyT::constant(ctx.zero()));
  for (std::size_t i = 0; i < n; ++i) {
    R(i, n + i) = PolyT::constant(ctx.one());
    R(n + i, i) = PolyT::linear(ctx.theta());
    for (std::size_t j = 0; j < n; ++j) R(n + i, n + j) = PolyT::constant(-M.A(i, j));
  }
  return R;
}

/// Coefficients of the exponential, C[0] = E_n.
struct ExpCoeffs {
  std::vector<CMatrix> C;
  std::size_t imax() const { return C.size() - 1; }
};

/// Extends C by the recursion obtained from Exp(theta z) = theta Exp(z) +
/// A Exp(z)^{(1)} + Exp(z)^{(2)}:
///   C_i = (theta^{q^i} - theta)^{-1} (A C_{i-1}^{(1)} + C_{i-2}^{(2)}).
inline void extend_exp_coeffs(const TMotive& M, ExpCoeffs& coeffs, std::size_t imax) {
  const auto& ctx = M.ctx;
  if (coeffs.C.empty()) coeffs.C.push_back(ctx.identity(M.n));
  for (std::size_t i = coeffs.C.size(); i <= imax; ++i) {
    CMatrix br = M.A * twist(coeffs.C[i - 1], 1);
    if (i >= 2) br = br + twist(coeffs.C[i - 2], 2);
    const CinfElem inv = ctx.theta_ij(static_cast<std::int64_t>(i), 0).inverse();
    CMatrix Ci = inv * br;
    require(min_prec(Ci) > 0, ErrorKind::precision, "precision exhausted at C_" + std::to_string(i));
    coeffs.C.push_back(std::move(Ci));
  }
}

inline ExpCoeffs exp_coeffs(const TMotive& M, std::size_t imax) {
  ExpCoeffs c;
  extend_exp_coeffs(M, c, imax);
  return c;
}

namespace detail {

// Rational lower bound num/den for the valuation of C_i z^{(i)}, with den the
// common ramification.
struct TermBound {
  std::int64_t num;
  std::int64_t den;
  bool at_least(std::int64_t units, std::int64_t ram) const { return num * ram >= units * den; }
};

inline TermBound term_bound(const CMatrix& Ci, const CMatrix& z, std::int64_t qi) {
  const std::int64_t r = std::lcm(Ci(0, 0).ram(), z(0, 0).ram());
  std::int64_t vc = std::numeric_limits<std::int64_t>::max(), vz = vc;
  for (const auto& x : Ci.data()) vc = std::min(vc, x.order() * (r / x.ram()));
  for (const auto& x : z.data()) vz = std::min(vz, x.order() * (r / x.ram()));
  if (vc >= kExactPrec / 2 || vz >= kExactPrec / 2) return {kExactPrec / 2, 1};
  return {vc + detail::checked_mul(qi, vz), r};
}

}  // namespace detail

/// sum_{i <= imax} C_i z^{(i)} for a column z. The tail is certified from the
/// last two terms: if both have valuation >= W >= 0 (and v(A) >= 0), every
/// later term does too, so the result's precision is capped at W.
inline CMatrix exp_eval(const ExpCoeffs& coeffs, const CMatrix& z) {
  require(z.cols() == 1 && z.rows() == coeffs.C.front().rows(), ErrorKind::domain, "z must be an n x 1 column");
  require(coeffs.C.size() >= 2, ErrorKind::domain, "need at least C_0 and C_1");
  const auto q = static_cast<std::int64_t>(z(0, 0).field()->q());
  CMatrix acc = coeffs.C[0] * z;
  std::int64_t qi = 1;
  detail::TermBound prev{0, 1}, last = detail::term_bound(coeffs.C[0], z, 1);
  for (std::size_t i = 1; i < coeffs.C.size(); ++i) {
    qi = detail::checked_mul(qi, q);
    acc = acc + coeffs.C[i] * twist(z, static_cast<std::int64_t>(i));
    prev = last;
    last = detail::term_bound(coeffs.C[i], z, qi);
  }
  // Tail bound W = min(prev, last), expressed in exponent units of acc.
  const std::int64_t ram = acc(0, 0).ram();
  auto floor_units = [ram](const detail::TermBound& b) {
    const std::int64_t num = detail::checked_mul(b.num, ram);
    return num >= 0 ? num / b.den : -((-num + b.den - 1) / b.den);
  };
  const std::int64_t W = std::min(floor_units(prev), floor_units(last));
  const std::int64_t need = min_prec(acc);
  if (W < need) {
    if (W < 0)
      fail(ErrorKind::non_contraction,
           "exponential series not yet decaying at i = " + std::to_string(coeffs.imax()) +
               " (term valuation bound " + std::to_string(W) + "/" + std::to_string(ram) + ")");
    fail(ErrorKind::non_contraction, "exponential tail not certified to the working precision at i = " +
                                         std::to_string(coeffs.imax()) + " (bound " + std::to_string(W) + ")");
  }
  return acc;
}

/// exp_eval that grows `cache` until the tail is certified (at most 64 terms).
inline CMatrix exp_apply(const TMotive& M, ExpCoeffs& cache, const CMatrix& z) {
  std::size_t imax = std::max<std::size_t>(cache.C.empty() ? 1 : cache.imax(), 1);
  for (;;) {
    extend_exp_coeffs(M, cache, imax);
    ExpCoeffs view;
    view.C.assign(cache.C.begin(), cache.C.begin() + static_cast<std::ptrdiff_t>(imax + 1));
    try {
      return exp_eval(view, z);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::non_contraction || imax >= 64) throw;
    }
    ++imax;
  }
}

/// Exp(theta z) - [theta Exp(z) + A Exp(z)^{(1)} + Exp(z)^{(2)}].
inline CMatrix functional_residual(const TMotive& M, ExpCoeffs& cache, const CMatrix& z) {
  const CMatrix e = exp_apply(M, cache, z);
  const CMatrix lhs = exp_apply(M, cache, M.ctx.theta() * z);
  return lhs - (M.ctx.theta() * e + M.A * twist(e, 1) + twist(e, 2));
}

}  // namespace tmotive
