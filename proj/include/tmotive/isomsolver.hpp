#pragma once

// Isomorphisms M(A) -> M(B) induced by gamma in the stabiliser of omega E:
// the map alpha to GL_n(F_{q^2}[T]), the ansatz
//   Phi11 = sum_{i<k} (U_i + S_i) T^i + U_k T^k,  Phi12 = sum_{i<k} V_i T^i,
// its linearisation W1 X = W2 vec(A) and the Picard solver for X = (B, S, V).

#include <cstdint>
#include <string>
#include <vector>

#include "tmotive/anderson.hpp"
#include "tmotive/context.hpp"
#include "tmotive/fpoly.hpp"
#include "tmotive/latticemap.hpp"
#include "tmotive/matrix.hpp"
#include "tmotive/modrecover.hpp"
#include "tmotive/polyt.hpp"

namespace tmotive {

// ---------------------------------------------------------------- alpha

/// alpha(gamma) = G(T) + omega H(T), with T substituted for theta.
struct AlphaImage {
  long k = 0;
  FPMatrix U;  // n x n over F_{q^2}[T]

  std::size_t n() const { return U.rows(); }
  /// Coefficient U_j as a constant series matrix.
  CMatrix coeff(const Context& ctx, long j) const {
    return U.map([&](const FPoly& x) { return ctx.constant(x.coeff(static_cast<std::size_t>(j))); });
  }
  /// U_j^{(1)}: coefficientwise q-th power.
  CMatrix coeff_twisted(const Context& ctx, long j) const {
    return U.map([&](const FPoly& x) { return ctx.constant(frobenius(x.coeff(static_cast<std::size_t>(j)), 1)); });
  }
  FFElem det() const { return determinant(U).coeff(0); }
};

inline AlphaImage alpha(const Context& ctx, const GammaElem& g) {
  g.validate(ctx.omega);
  AlphaImage a;
  a.k = g.k;
  a.U = g.G;
  for (std::size_t i = 0; i < g.n(); ++i)
    for (std::size_t j = 0; j < g.n(); ++j) a.U(i, j) = g.G(i, j) + g.H(i, j).scaled(ctx.omega);
  return a;
}

/// Splits U = G + omega H with G, H over F_q: G = (U + U^q)/2, H = (U - U^q)/(2 omega).
inline GammaElem alpha_inverse(const Context& ctx, const AlphaImage& a) {
  const FFElem half = FFElem::from_int(ctx.field, 2).inverse();
  const FFElem h = (FFElem::from_int(ctx.field, 2) * ctx.omega).inverse();
  GammaElem g{a.k, a.U, a.U};
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) {
      const FPoly& u = a.U(i, j);
      const FPoly ub = u.frobenius(1);
      g.G(i, j) = (u + ub).scaled(half);
      g.H(i, j) = (u - ub).scaled(h);
    }
  g.validate(ctx.omega);
  return g;
}

/// Reads the blocks of a 2n x 2n matrix as (G, omega^2 H; H, G), rejecting other shapes.
inline GammaElem gamma_from_matrix(const Context& ctx, const FPMatrix& m, long k) {
  require(m.square() && m.rows() % 2 == 0 && m.rows() > 0, ErrorKind::domain, "gamma must be 2n x 2n");
  const std::size_t n = m.rows() / 2;
  GammaElem g{k, m.block(n, n, n, n), m.block(n, 0, n, n)};
  const FFElem w2 = ctx.omega * ctx.omega;
  require(m.block(0, 0, n, n) == g.G, ErrorKind::domain, "gamma is not in the stabiliser: diagonal blocks differ");
  require(m.block(0, n, n, n) == g.H.map([&w2](const FPoly& x) { return x.scaled(w2); }), ErrorKind::domain,
          "gamma is not in the stabiliser: upper-right block is not omega^2 times lower-left");
  g.validate(ctx.omega);
  return g;
}

// ---------------------------------------------------------------- vectorisation

/// Row-major flattening to an n^2 x 1 column.
inline CMatrix vec(const CMatrix& m) {
  CMatrix v(m.rows() * m.cols(), 1, m(0, 0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) v(i * m.cols() + j, 0) = m(i, j);
  return v;
}

inline CMatrix unvec(const CMatrix& v, std::size_t n, std::size_t offset = 0) {
  CMatrix m(n, n, v(0, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = v(offset + i * n + j, 0);
  return m;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols(), a(0, 0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t r = 0; r < b.rows(); ++r)
        for (std::size_t c = 0; c < b.cols(); ++c) out(i * b.rows() + r, j * b.cols() + c) = a(i, j) * b(r, c);
  return out;
}

/// vec(X M) = left_op(X) vec(M) and vec(M X) = right_op(X) vec(M).
struct VecOps {
  Context ctx;
  std::size_t n;
  CMatrix left(const CMatrix& x) const { return kron(x, ctx.identity(n)); }
  CMatrix right(const CMatrix& x) const { return kron(ctx.identity(n), x.transpose()); }
};

// ---------------------------------------------------------------- linear system

/// Unknown blocks: 0 -> B, 1..k -> S_0..S_{k-1}, k+1..2k -> V_0..V_{k-1}.
/// Equation blocks: 0..k-1 from the T^i coefficients of
///   Phi11 - A Phi12^{(1)} = Phi11^{(2)} - Phi12^{(2)} B^{(1)},
/// k..2k from the T^j coefficients (j = 0..k) of
///   (T - theta) Phi12 - A Phi11^{(1)} = (T - theta^q) Phi12^{(2)} - Phi11 B.
struct LinearSystem {
  std::size_t n = 0;
  long k = 0;
  CMatrix W1, W2;
  CinfElem det_series;
  FFElem detW1;
  bool det_constant = false;     // det W1 is a nonzero constant to precision
  bool layout_check = false;     // the unambiguous blocks of the reference layout
  bool closing_identity = false; // (W1^{-1})_{B rows} W2 = L(U(theta)^{-1}) R(Ubar(theta))
};

inline LinearSystem build_linear_system(const Context& ctx, const AlphaImage& a) {
  const std::size_t n = a.n();
  const long k = a.k;
  require(degree(a.U) <= k, ErrorKind::domain, "alpha(gamma) exceeds the degree bound k");
  const std::size_t nn = n * n;
  const std::size_t blocks = static_cast<std::size_t>(2 * k + 1);
  const VecOps ops{ctx, n};
  LinearSystem s;
  s.n = n;
  s.k = k;
  s.W1 = ctx.zeros(blocks * nn, blocks * nn);
  s.W2 = ctx.zeros(blocks * nn, nn);
  const CMatrix En = ctx.identity(nn);
  const auto K = static_cast<std::size_t>(k);
  for (std::size_t i = 0; i < K; ++i) s.W1.set_block(i * nn, (1 + i) * nn, En);
  for (std::size_t j = 0; j <= K; ++j) {
    const std::size_t row = (K + j) * nn;
    s.W1.set_block(row, 0, ops.left(a.coeff(ctx, static_cast<long>(j))));
    if (j >= 1) s.W1.set_block(row, (K + 1 + j - 1) * nn, En);
    if (j < K) s.W1.set_block(row, (K + 1 + j) * nn, ctx.theta() * (-En));
    s.W2.set_block(row, 0, ops.right(a.coeff_twisted(ctx, static_cast<long>(j))));
  }

  s.det_series = determinant(s.W1);
  s.det_constant = !s.det_series.is_zero() && s.det_series.order() == 0 && s.det_series.terms().size() == 1;
  s.detW1 = s.det_series.is_zero() ? FFElem::zero(ctx.field) : s.det_series.coeff(0);

  // Reference layout: rows (0 | E_k | 0), (M21 | 0 | J_k(-theta)), ((U_k)_(l) | 0 | E at V_{k-1}).
  bool ok = true;
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t c = 0; c < blocks; ++c) ok = ok && (s.W1.block(i * nn, c * nn, nn, nn) == (c == 1 + i ? En : ctx.zeros(nn, nn)));
  for (std::size_t j = 0; j < K; ++j)
    for (std::size_t c = 0; c < K; ++c) {
      const CMatrix blk = s.W1.block((K + j) * nn, (K + 1 + c) * nn, nn, nn);
      const CMatrix want = c == j ? ctx.theta() * (-En) : (c + 1 == j ? En : ctx.zeros(nn, nn));
      ok = ok && blk == want;
    }
  ok = ok && s.W1.block(2 * K * nn, 0, nn, nn) == ops.left(a.coeff(ctx, k));
  s.layout_check = ok;

  if (!s.det_series.is_zero()) {
    const CMatrix sol = inverse(s.W1) * s.W2;
    const CMatrix Uth = at_theta(a.U, ctx);
    const CMatrix Ubar = at_theta(a.U.map([](const FPoly& x) { return x.frobenius(1); }), ctx);
    const CMatrix want = ops.left(inverse(Uth)) * ops.right(Ubar);
    s.closing_identity = agrees(sol.block(0, 0, nn, nn), want);
  }
  return s;
}

// ---------------------------------------------------------------- solver

struct ResidualReport {
  std::vector<std::string> names;
  std::vector<std::int64_t> orders;  // lower bound on the valuation, exponent units
  std::vector<bool> zero;            // zero to precision
  std::int64_t min_order() const {
    std::int64_t v = std::numeric_limits<std::int64_t>::max();
    for (auto o : orders) v = std::min(v, o);
    return v;
  }
};

struct IsoSolution {
  std::size_t n = 0;
  long k = 0;
  CMatrix B, B_first_order;
  std::vector<CMatrix> S, V;
  PMatrix Phi;
  LinearSystem system;
  std::vector<std::int64_t> update_orders;
  ResidualReport residuals;
  PolyT det_phi;
  bool det_phi_unit = false;
};

inline std::int64_t poly_order(const PolyT& f) {
  std::int64_t v = std::numeric_limits<std::int64_t>::max();
  for (const auto& c : f.coeffs()) v = std::min(v, c.order());
  return v;
}

inline std::int64_t poly_order(const PMatrix& m) {
  std::int64_t v = std::numeric_limits<std::int64_t>::max();
  for (const auto& f : m.data()) v = std::min(v, poly_order(f));
  return v;
}

inline bool poly_zero(const PMatrix& m) {
  for (const auto& f : m.data())
    for (const auto& c : f.coeffs())
      if (!c.is_zero()) return false;
  return true;
}

inline PMatrix scalar_poly(const PolyT& s, const PMatrix& m) { return m.map([&s](const PolyT& x) { return s * x; }); }

/// The four block relations and the matrix identity R_A Phi - Phi^{(1)} R_B.
inline ResidualReport morphism_residual(const Context& ctx, const CMatrix& A, const CMatrix& B, const PMatrix& Phi) {
  const std::size_t n = A.rows();
  require(Phi.rows() == 2 * n && Phi.cols() == 2 * n && B.rows() == n, ErrorKind::domain, "shape mismatch in morphism residual");
  const PMatrix P11 = Phi.block(0, 0, n, n), P12 = Phi.block(0, n, n, n);
  const PMatrix P21 = Phi.block(n, 0, n, n), P22 = Phi.block(n, n, n, n);
  const PMatrix pA = as_poly_matrix(A), pB = as_poly_matrix(B);
  const PolyT Tt = PolyT::linear(ctx.theta());
  const PolyT Tq = PolyT::linear(ctx.theta().twist(1));
  const PMatrix P11t = twist(P11, 1), P12t = twist(P12, 1), P12tt = twist(P12, 2), P22t = twist(P22, 1);

  ResidualReport r;
  auto add = [&](const std::string& name, const PMatrix& m) {
    r.names.push_back(name);
    r.orders.push_back(poly_order(m));
    r.zero.push_back(poly_zero(m));
  };
  add("phi21", P21 - scalar_poly(Tt, P12t));
  add("phi22", P22 - (P11t - P12t * pB));
  add("tau_e", scalar_poly(Tt, P11) - pA * P21 - scalar_poly(Tt, P22t));
  add("tau2_e", scalar_poly(Tt, P12) - pA * P11t - (scalar_poly(Tq, P12tt) - P11 * pB));

  TMotive MA = make_tmotive(ctx, A), MB = make_tmotive(ctx, B);
  add("equivariance", tau_matrix(MA) * Phi - twist(Phi, 1) * tau_matrix(MB));
  return r;
}

namespace detail {

// Nonlinear remainder of the equations, in the order of LinearSystem's rows.
inline CMatrix iso_nonlinear(const Context& ctx, const CMatrix& A, const std::vector<CMatrix>& S, const std::vector<CMatrix>& V,
                             const CMatrix& B, long k) {
  const std::size_t n = A.rows(), nn = n * n;
  const auto K = static_cast<std::size_t>(k);
  CMatrix out = ctx.zeros((2 * K + 1) * nn, 1);
  const CMatrix Bt = twist(B, 1);
  for (std::size_t i = 0; i < K; ++i)
    out.set_block(i * nn, 0, vec(twist(S[i], 2) + A * twist(V[i], 1) - twist(V[i], 2) * Bt));
  const CinfElem thq = ctx.theta().twist(1);
  for (std::size_t j = 0; j <= K; ++j) {
    CMatrix e = ctx.zeros(n, n);
    if (j < K) e = e + A * twist(S[j], 1) - thq * twist(V[j], 2) - S[j] * B;
    if (j >= 1) e = e + twist(V[j - 1], 2);
    out.set_block((K + j) * nn, 0, vec(e));
  }
  return out;
}

inline void iso_unpack(const CMatrix& X, std::size_t n, long k, CMatrix& B, std::vector<CMatrix>& S, std::vector<CMatrix>& V) {
  const std::size_t nn = n * n;
  const auto K = static_cast<std::size_t>(k);
  B = unvec(X, n, 0);
  S.clear();
  V.clear();
  for (std::size_t i = 0; i < K; ++i) S.push_back(unvec(X, n, (1 + i) * nn));
  for (std::size_t i = 0; i < K; ++i) V.push_back(unvec(X, n, (1 + K + i) * nn));
}

}  // namespace detail

/// Phi from the ansatz, with Phi21 = (T - theta) Phi12^{(1)} and Phi22 = Phi11^{(1)} - Phi12^{(1)} B.
inline PMatrix assemble_phi(const Context& ctx, const AlphaImage& a, const std::vector<CMatrix>& S, const std::vector<CMatrix>& V,
                            const CMatrix& B) {
  const std::size_t n = a.n();
  const auto K = static_cast<std::size_t>(a.k);
  PMatrix P11(n, n, PolyT()), P12(n, n, PolyT());
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<CinfElem> f, g;
      for (std::size_t i = 0; i <= K; ++i) {
        CinfElem u = ctx.constant(a.U(r, c).coeff(i));
        if (i < K) u = u + S[i](r, c);
        f.push_back(u);
        if (i < K) g.push_back(V[i](r, c));
      }
      P11(r, c) = PolyT(f);
      P12(r, c) = K > 0 ? PolyT(g) : PolyT::constant(ctx.zero());
    }
  const PolyT Tt = PolyT::linear(ctx.theta());
  const PMatrix P12t = twist(P12, 1);
  PMatrix Phi(2 * n, 2 * n, PolyT());
  Phi.set_block(0, 0, P11);
  Phi.set_block(0, n, P12);
  Phi.set_block(n, 0, scalar_poly(Tt, P12t));
  Phi.set_block(n, n, twist(P11, 1) - P12t * as_poly_matrix(B));
  return Phi;
}

inline IsoSolution solve_iso(const Context& ctx, const CMatrix& A, const GammaElem& gamma) {
  const AlphaImage a = alpha(ctx, gamma);
  const std::size_t n = a.n();
  require(A.rows() == n && A.square(), ErrorKind::domain, "A and gamma have different sizes");
  make_tmotive(ctx, A);
  IsoSolution sol;
  sol.n = n;
  sol.k = a.k;
  sol.system = build_linear_system(ctx, a);
  require(!sol.system.det_series.is_zero(), ErrorKind::singular, "W1 is singular to precision");
  const CMatrix W1inv = inverse(sol.system.W1);
  const CMatrix rhs0 = sol.system.W2 * vec(A);
  CMatrix X = W1inv * rhs0;
  sol.B_first_order = unvec(X, n, 0);
  std::int64_t last = std::numeric_limits<std::int64_t>::min();
  bool done = false;
  for (int it = 0; it < 200 && !done; ++it) {
    CMatrix B;
    std::vector<CMatrix> S, V;
    detail::iso_unpack(X, n, a.k, B, S, V);
    const CMatrix Xn = W1inv * (rhs0 + detail::iso_nonlinear(ctx, A, S, V, B, a.k));
    const CMatrix d = Xn - X;
    const std::int64_t ord = min_order(d);
    sol.update_orders.push_back(ord);
    bool zero = true;
    for (const auto& x : d.data()) zero = zero && x.is_zero();
    X = Xn;
    if (zero) {
      done = true;
      break;
    }
    require(ord > last, ErrorKind::non_contraction,
            "Picard update stalled: order " + std::to_string(ord) + " after " + std::to_string(last));
    last = ord;
  }
  require(done, ErrorKind::non_contraction, "Picard iteration did not converge in 200 steps");
  detail::iso_unpack(X, n, a.k, sol.B, sol.S, sol.V);
  sol.Phi = assemble_phi(ctx, a, sol.S, sol.V, sol.B);
  sol.residuals = morphism_residual(ctx, A, sol.B, sol.Phi);
  sol.det_phi = determinant(sol.Phi).trimmed();
  sol.det_phi_unit = sol.det_phi.degree() == 0 && sol.det_phi[0].order() == 0;
  return sol;
}

// ---------------------------------------------------------------- end to end

struct IsoReport {
  IsoSolution sol;
  CMatrix ZA, ZB;
  FFElem det_gamma, det_alpha;
  std::int64_t level = 0;          // required agreement order for the Siegel comparison
  bool residuals_ok = false;       // every residual order >= prec - slack
  bool detw1_eq_det_gamma = false; // det W1 == det gamma
  bool detw1_in_fq = false;
  bool detw1_vs_alpha = false;     // det W1 == +-(det alpha(gamma))^n
  bool norm_alpha_eq_det_gamma = false;
  bool siegel_literal = false;     // mobius(gamma, Z_B) == Z_A
  bool siegel_sharp = false;       // mobius(gamma_sharp, Z_A) == Z_B
  bool lattice_equal = false;
  long lattice_degree = -1;
};

inline bool agree_to(const CMatrix& a, const CMatrix& b, std::int64_t level) {
  const CMatrix d = a - b;
  return min_order(d) >= level && min_prec(d) >= level;
}

inline IsoReport iso_check(const Context& ctx, const CinfElem& y0, const CMatrix& A, const GammaElem& gamma) {
  IsoReport r;
  r.sol = solve_iso(ctx, A, gamma);
  const std::size_t n = r.sol.n;
  r.residuals_ok = r.sol.residuals.min_order() >= ctx.prec - ctx.slack;
  r.det_gamma = gamma.det(ctx.omega);
  r.det_alpha = alpha(ctx, gamma).det();
  const FFElem dw = r.sol.system.detW1;
  r.detw1_eq_det_gamma = r.sol.system.det_constant && dw == r.det_gamma;
  r.detw1_in_fq = r.sol.system.det_constant && frobenius(dw, 1) == dw;
  const FFElem an = r.det_alpha.pow(static_cast<std::int64_t>(n));
  r.detw1_vs_alpha = dw == an || dw == -an;
  r.norm_alpha_eq_det_gamma = r.det_alpha * frobenius(r.det_alpha, 1) == r.det_gamma;

  const TMotive MA = make_tmotive(ctx, A), MB = make_tmotive(ctx, r.sol.B);
  const Lattice LA = lattice_of(MA, y0), LB = lattice_of(MB, y0);
  r.ZA = siegel_of(LA);
  r.ZB = siegel_of(LB);
  r.level = ctx.prec - 2 * ctx.slack;
  const FFElem w = ctx.omega;
  r.siegel_literal = agree_to(mobius(ctx, gamma.matrix(w), r.ZB), r.ZA, r.level);
  r.siegel_sharp = agree_to(mobius(ctx, gamma_sharp(gamma).matrix(w), r.ZA), r.ZB, r.level);
  const auto rec = recover_change_of_basis(ctx, LA.basis, LB.basis, 2 * gamma.k + 4);
  r.lattice_equal = rec.has_value();
  r.lattice_degree = rec ? rec->degree : -1;
  return r;
}

}  // namespace tmotive
