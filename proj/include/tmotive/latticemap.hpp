#pragma once

// Period lattices of the T-motives M(A) near the base point, their Siegel
// matrices Z = E2 E1^{-1}, the Moebius action of gamma on Z, and the first
// order behaviour of A -> mu13(A) at 0.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tmotive/anderson.hpp"
#include "tmotive/context.hpp"
#include "tmotive/fpoly.hpp"
#include "tmotive/matrix.hpp"

namespace tmotive {

struct RootStats {
  int iterations = 0;
  std::vector<std::int64_t> residual_orders;  // order of Exp_A(z) before each step
};

/// The zero of Exp_A near `anchor` (an n x 1 column), found by z <- z - Exp_A(z).
/// The iteration must contract: the residual order has to increase strictly.
inline CMatrix perturbed_root(const TMotive& M, ExpCoeffs& cache, const CMatrix& anchor, RootStats* stats = nullptr) {
  require(anchor.cols() == 1 && anchor.rows() == M.n, ErrorKind::domain, "anchor must be an n x 1 column");
  CMatrix z = anchor;
  std::int64_t last = std::numeric_limits<std::int64_t>::min();
  for (int it = 0; it < 200; ++it) {
    const CMatrix r = exp_apply(M, cache, z);
    const std::int64_t ord = min_order(r);
    if (stats) {
      stats->iterations = it;
      stats->residual_orders.push_back(ord);
    }
    bool zero = true;
    for (const auto& x : r.data()) zero = zero && x.is_zero();
    if (zero) return truncate(z, std::min({min_prec(z), min_prec(r), M.ctx.prec}));
    require(ord > last, ErrorKind::non_contraction,
            "root iteration stalled: residual order " + std::to_string(ord) + " after " + std::to_string(last));
    last = ord;
    z = z - r;
  }
  fail(ErrorKind::non_contraction, "root iteration did not converge in 200 steps");
}

/// Period y0 of the rank-2 Carlitz module T e = theta e + tau^2 e, normalised
/// as the root of Exp_0 near c_root(-(theta^{q^2} - theta), q^2 - 1).
inline CinfElem carlitz_period(const Context& ctx, RootStats* stats = nullptr) {
  const TMotive M = base_motive(ctx, 1);
  const std::int64_t q = ctx.q();
  const CinfElem guess = (-ctx.theta_ij(2, 0)).root(q * q - 1);
  ExpCoeffs cache;
  CMatrix z(1, 1, guess);
  return perturbed_root(M, cache, z, stats)(0, 0);
}

/// Rows are the lattice vectors divided by y0; the first n rows lie near y0 e_i,
/// the last n near omega y0 e_i.
struct Lattice {
  std::size_t n = 0;
  CMatrix basis;  // 2n x n
  std::vector<RootStats> stats;

  CMatrix E1() const { return basis.block(0, 0, n, n); }
  CMatrix E2() const { return basis.block(n, 0, n, n); }
};

/// Lattice from arbitrary anchors (rows of a 2n x n matrix, already multiplied by y0).
inline Lattice lattice_from_anchors(const TMotive& M, const CinfElem& y0, const CMatrix& anchors) {
  require(anchors.rows() == 2 * M.n && anchors.cols() == M.n, ErrorKind::domain, "need 2n anchors of length n");
  Lattice L;
  L.n = M.n;
  L.basis = M.ctx.zeros(2 * M.n, M.n);
  const CinfElem y0inv = y0.inverse();
  ExpCoeffs cache;
  for (std::size_t r = 0; r < 2 * M.n; ++r) {
    RootStats st;
    const CMatrix z = perturbed_root(M, cache, anchors.block(r, 0, 1, M.n).transpose(), &st);
    for (std::size_t j = 0; j < M.n; ++j) L.basis(r, j) = z(j, 0) * y0inv;
    L.stats.push_back(std::move(st));
  }
  return L;
}

inline CMatrix standard_anchors(const Context& ctx, const CinfElem& y0, std::size_t n) {
  CMatrix a = ctx.zeros(2 * n, n);
  const CinfElem wy0 = y0.scaled(ctx.omega);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = y0;
    a(n + i, i) = wy0;
  }
  return a;
}

inline Lattice lattice_of(const TMotive& M, const CinfElem& y0) {
  return lattice_from_anchors(M, y0, standard_anchors(M.ctx, y0, M.n));
}

inline CMatrix siegel_of(const Lattice& L) { return L.E2() * inverse(L.E1()); }

/// The lattice (E; Z) attached to a Siegel matrix.
inline CMatrix mu34(const Context& ctx, const CMatrix& Z) {
  require(Z.square(), ErrorKind::domain, "Z must be square");
  CMatrix out = ctx.zeros(2 * Z.rows(), Z.rows());
  out.set_block(0, 0, ctx.identity(Z.rows()));
  out.set_block(Z.rows(), 0, Z);
  return out;
}

inline CMatrix mu13(const TMotive& M, const CinfElem& y0) { return siegel_of(lattice_of(M, y0)); }

/// (P Z + Q)(R Z + S)^{-1} for gamma = [[P, Q], [R, S]] over F_q[theta].
inline CMatrix mobius(const Context& ctx, const FPMatrix& gamma, const CMatrix& Z) {
  const std::size_t n = Z.rows();
  require(Z.square() && gamma.rows() == 2 * n && gamma.cols() == 2 * n, ErrorKind::domain, "gamma must be 2n x 2n");
  const CMatrix g = at_theta(gamma, ctx);
  const CMatrix num = g.block(0, 0, n, n) * Z + g.block(0, n, n, n);
  const CMatrix den = g.block(n, 0, n, n) * Z + g.block(n, n, n, n);
  return num * inverse(den);
}

/// Element [[G, omega^2 H], [H, G]] of the stabiliser of omega E, with G, H over F_q[theta].
struct GammaElem {
  long k = 0;  // degree bound
  FPMatrix G, H;

  std::size_t n() const { return G.rows(); }

  FPMatrix matrix(const FFElem& omega) const {
    const std::size_t m = n();
    const FFElem w2 = omega * omega;
    FPMatrix out(2 * m, 2 * m, FPoly(omega.field()));
    out.set_block(0, 0, G);
    out.set_block(0, m, H.map([&w2](const FPoly& p) { return p.scaled(w2); }));
    out.set_block(m, 0, H);
    out.set_block(m, m, G);
    return out;
  }

  /// Shape, F_q coefficients, the degree bound and invertibility over F_q[theta].
  void validate(const FFElem& omega) const {
    require(G.square() && H.square() && G.rows() == H.rows() && G.rows() > 0, ErrorKind::domain,
            "G and H must be square of equal size");
    for (const FPMatrix* m : {&G, &H})
      for (const auto& x : m->data()) {
        require(x.in_fq(), ErrorKind::domain, "gamma entries must have coefficients in F_q");
        require(x.degree() <= k, ErrorKind::domain, "gamma entry exceeds the degree bound k");
      }
    const FPoly d = determinant(matrix(omega));
    require(d.degree() == 0, ErrorKind::domain, "gamma is not invertible over F_q[theta]");
  }

  FFElem det(const FFElem& omega) const { return determinant(matrix(omega)).coeff(0); }
};

/// The transpose-conjugate J gamma^t J = [[G^t, omega^2 H^t], [H^t, G^t]].
inline GammaElem gamma_sharp(const GammaElem& g) { return {g.k, g.G.transpose(), g.H.transpose()}; }

/// First-order data at the base point:
///   d10  = sum_m y0^{q^{2m+1}} C_{2m}(0)^{(1)} / (theta^{q^{2m+1}} - theta),
///   d10p = the same sum with omega y0 in place of y0,
///   l1   = (omega d10 - d10p) / y0.
struct FirstOrder {
  CinfElem d10, d10p, l1;
  int terms = 0;
};

inline FirstOrder first_order(const Context& ctx, const CinfElem& y0) {
  const TMotive M0 = base_motive(ctx, 1);
  ExpCoeffs c;
  const CinfElem wy0 = y0.scaled(ctx.omega);
  FirstOrder out{ctx.zero(), ctx.zero(), ctx.zero(), 0};
  const std::int64_t target = ctx.prec;
  std::int64_t last = std::numeric_limits<std::int64_t>::min();
  for (std::int64_t m = 0; m < 16; ++m) {
    extend_exp_coeffs(M0, c, static_cast<std::size_t>(2 * m));
    const CinfElem w = c.C[static_cast<std::size_t>(2 * m)](0, 0).twist(1) * ctx.theta_ij(2 * m + 1, 0).inverse();
    const CinfElem a = y0.twist(2 * m + 1) * w;
    const CinfElem b = wy0.twist(2 * m + 1) * w;
    out.d10 = out.d10 + a;
    out.d10p = out.d10p + b;
    out.terms = static_cast<int>(m + 1);
    const std::int64_t ord = a.order();
    require(ord > last, ErrorKind::non_contraction, "first-order series not decaying");
    last = ord;
    if (ord >= target) break;
  }
  require(last >= target, ErrorKind::non_contraction, "first-order series tail not certified");
  out.d10 = out.d10.truncate(target);
  out.d10p = out.d10p.truncate(target);
  out.l1 = (out.d10.scaled(ctx.omega) - out.d10p) / y0;
  return out;
}

/// F_q-linear functional lambda(x) = Tr_{F_{p^D}/F_q}(kappa x) with lambda(F_q) = 0
/// and lambda(omega) != 0.
inline Code rank_functional_kappa(const Field& F) {
  const std::int64_t deg = F.spec().D / F.spec().s;
  auto tr = [&](Code x) {
    Code acc = 0;
    for (std::int64_t j = 0; j < deg; ++j) acc = F.add(acc, F.frobenius(x, j));
    return acc;
  };
  for (Code k = 1; k < F.size(); ++k)
    if (tr(k) == 0 && tr(F.mul(k, F.omega())) != 0) return k;
  fail(ErrorKind::domain, "no functional separating omega from F_q");
}

/// Certificate that the rows of (E; Z) are independent over F_q((1/theta)):
/// applying lambda to the integral-exponent coefficients of Z gives a matrix
/// with determinant nonzero to precision.
struct RankCertificate {
  bool ok = false;
  CinfElem det;
};

inline RankCertificate rank_certificate(const Context& ctx, const CMatrix& Z) {
  const Field& F = *ctx.field;
  const std::int64_t deg = F.spec().D / F.spec().s;
  const Code kappa = rank_functional_kappa(F);
  const CMatrix LZ = Z.map([&](const CinfElem& x) {
    std::vector<CinfElem::Term> terms;
    for (auto [e, c] : x.terms()) {
      if (e % x.ram() != 0) continue;
      Code acc = 0;
      for (std::int64_t j = 0; j < deg; ++j) acc = F.add(acc, F.frobenius(F.mul(kappa, c), j));
      if (acc != 0) terms.push_back({e, acc});
    }
    return CinfElem::from_terms(x.field(), x.ram(), x.prec(), std::move(terms));
  });
  RankCertificate rc;
  rc.det = determinant(LZ);
  rc.ok = !rc.det.is_zero();
  return rc;
}

/// Slope of a -> mu13(a) at 0 for n = 1, from a = t^{e1} and a = t^{e2}.
struct SlopeReport {
  CinfElem slope1, slope2, predicted;
  std::int64_t v_pred = 0;        // order of the prediction (exponent units)
  std::int64_t v_between = 0;     // order of slope1 - slope2
  std::int64_t v_to_pred = 0;     // order of slope1 - predicted
  bool ok = false;
};

inline SlopeReport slope_check(const Context& ctx, const CinfElem& y0, std::int64_t e1, std::int64_t e2) {
  const FirstOrder fo = first_order(ctx, y0);
  auto slope = [&](std::int64_t e) {
    const CinfElem a = ctx.monomial(FFElem::one(ctx.field), e);
    CMatrix A(1, 1, a);
    const CMatrix Z = mu13(make_tmotive(ctx, A), y0);
    return (Z(0, 0) - ctx.constant(ctx.omega)) / a;
  };
  SlopeReport r{slope(e1), slope(e2), fo.l1};
  require(!fo.l1.is_zero(), ErrorKind::precision, "predicted slope is zero to precision");
  r.v_pred = fo.l1.order();
  r.v_between = (r.slope1 - r.slope2).order();
  r.v_to_pred = (r.slope1 - fo.l1).order();
  r.ok = r.v_between > r.v_pred && r.v_to_pred > r.v_pred;
  return r;
}

}  // namespace tmotive
