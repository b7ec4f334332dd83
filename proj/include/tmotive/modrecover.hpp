#pragma once

// Recovering a change of basis C over F_q[theta] between two lattices given
// by truncated series bases, by solving the F_p-linear system that the
// coefficients of C satisfy.

#include <cstdint>
#include <optional>
#include <vector>

#include "tmotive/context.hpp"
#include "tmotive/fpoly.hpp"
#include "tmotive/matrix.hpp"

namespace tmotive {

/// Dense matrix over F_p, row-major.
class FpMatrix {
 public:
  FpMatrix(std::size_t rows, std::size_t cols, int p) : rows_(rows), cols_(cols), p_(p), a_(rows * cols, 0) {}
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  int p() const { return p_; }
  int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  int operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  /// Basis of {x : M x = 0}.
  std::vector<std::vector<int>> nullspace() const {
    FpMatrix m = *this;
    std::vector<std::size_t> pivcol;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
      std::size_t piv = rows_;
      for (std::size_t i = r; i < rows_; ++i)
        if (m(i, c) != 0) {
          piv = i;
          break;
        }
      if (piv == rows_) continue;
      if (piv != r)
        for (std::size_t j = 0; j < cols_; ++j) std::swap(m(piv, j), m(r, j));
      const int inv = inverse_mod(m(r, c));
      for (std::size_t j = c; j < cols_; ++j) m(r, j) = m(r, j) * inv % p_;
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == r || m(i, c) == 0) continue;
        const int f = m(i, c);
        for (std::size_t j = c; j < cols_; ++j) m(i, j) = ((m(i, j) - f * m(r, j)) % p_ + p_) % p_;
      }
      pivcol.push_back(c);
      ++r;
    }
    std::vector<bool> is_piv(cols_, false);
    for (auto c : pivcol) is_piv[c] = true;
    std::vector<std::vector<int>> out;
    for (std::size_t fcol = 0; fcol < cols_; ++fcol) {
      if (is_piv[fcol]) continue;
      std::vector<int> x(cols_, 0);
      x[fcol] = 1;
      for (std::size_t i = 0; i < pivcol.size(); ++i) x[pivcol[i]] = (p_ - m(i, fcol)) % p_;
      out.push_back(std::move(x));
    }
    return out;
  }

 private:
  int inverse_mod(int a) const {
    int r = 1;
    for (int e = p_ - 2, b = a; e > 0; e >>= 1, b = b * b % p_)
      if (e & 1) r = r * b % p_;
    return r;
  }

  std::size_t rows_, cols_;
  int p_;
  std::vector<int> a_;
};

struct Recovery {
  long degree = -1;        // degree bound at which a unimodular C was found
  FPMatrix C;              // 2n x 2n over F_q[theta]
  std::size_t kernel_dim = 0;
};

namespace detail {

// Series coefficient digits of a CMatrix entry, at ramification r, for exponents in [lo, hi).
inline void add_digits(FpMatrix& sys, std::size_t col, std::size_t row0, const CinfElem& x, std::int64_t r,
                       std::int64_t lo, std::int64_t hi, int D) {
  const CinfElem y = x.lift(r);
  const auto& F = *y.field();
  for (auto [e, c] : y.terms()) {
    if (e < lo) fail(ErrorKind::precision, "series term below the equation window");
    if (e >= hi) break;
    for (int d = 0; d < D; ++d) {
      const int v = F.digit(c, d);
      if (v == 0) continue;
      int& cell = sys(row0 + static_cast<std::size_t>(e - lo) * static_cast<std::size_t>(D) + static_cast<std::size_t>(d), col);
      cell = (cell + v) % F.p();
    }
  }
}

}  // namespace detail

/// Kernel of C -> Z_Y (C11 X1 + C12 X2) - (C21 X1 + C22 X2) over coefficient
/// polynomials of degree <= d, where X = (X1; X2) and Y have Siegel matrix Z_Y.
/// Each kernel element is returned as a 2n x 2n polynomial matrix.
inline std::vector<FPMatrix> change_of_basis_kernel(const Context& ctx, const CMatrix& X, const CMatrix& Y, long d) {
  const std::size_t n = X.cols();
  require(X.rows() == 2 * n && Y.rows() == 2 * n && Y.cols() == n, ErrorKind::domain, "lattice bases must be 2n x n");
  const CMatrix ZY = Y.block(n, 0, n, n) * inverse(Y.block(0, 0, n, n));
  const CMatrix X1 = X.block(0, 0, n, n), X2 = X.block(n, 0, n, n);
  const Field& F = *ctx.field;
  const int D = F.spec().D;
  const auto basis = F.subfield_basis();
  const std::size_t s = basis.size();
  const std::size_t ncols = 4 * n * n * static_cast<std::size_t>(d + 1) * s;

  // Column contributions as n x n series matrices.
  struct Col {
    std::size_t blk, r, c;
    long m;
    std::size_t b;
  };
  std::vector<Col> cols;
  std::vector<CMatrix> contrib;
  cols.reserve(ncols);
  for (std::size_t blk = 0; blk < 4; ++blk)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        for (long m = 0; m <= d; ++m)
          for (std::size_t b = 0; b < s; ++b) {
            const CinfElem w = ctx.theta_pow(m).scaled(FFElem(ctx.field, basis[b]));
            const CMatrix& Xs = (blk == 0 || blk == 2) ? X1 : X2;
            CMatrix out = ctx.zeros(n, n);
            for (std::size_t i = 0; i < n; ++i)
              for (std::size_t j = 0; j < n; ++j) {
                if (blk < 2)
                  out(i, j) = w * ZY(i, r) * Xs(c, j);
                else if (i == r)
                  out(i, j) = -(w * Xs(c, j));
              }
            cols.push_back({blk, r, c, m, b});
            contrib.push_back(std::move(out));
          }

  std::int64_t ram = 1, lo = std::numeric_limits<std::int64_t>::max();
  for (const auto& M : contrib)
    for (const auto& x : M.data()) ram = std::lcm(ram, x.ram());
  std::int64_t hi = detail::checked_mul(ctx.prec - ctx.slack, ram / ctx.ram);
  for (const auto& M : contrib)
    for (const auto& x : M.data()) {
      const CinfElem y = x.lift(ram);
      hi = std::min(hi, y.prec());
      lo = std::min(lo, y.order());
    }
  lo = std::min(lo, hi);
  require(hi - lo > 0, ErrorKind::precision, "no precision left for the change-of-basis equations");
  const std::size_t per_entry = static_cast<std::size_t>(hi - lo) * static_cast<std::size_t>(D);
  FpMatrix sys(n * n * per_entry, cols.size(), F.p());
  for (std::size_t k = 0; k < cols.size(); ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) detail::add_digits(sys, k, (i * n + j) * per_entry, contrib[k](i, j), ram, lo, hi, D);

  std::vector<FPMatrix> out;
  for (const auto& v : sys.nullspace()) {
    FPMatrix C(2 * n, 2 * n, FPoly(ctx.field));
    std::vector<std::vector<Code>> coef(4 * n * n, std::vector<Code>(static_cast<std::size_t>(d + 1), 0));
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (v[k] == 0) continue;
      const auto& cl = cols[k];
      Code& slot = coef[(cl.blk * n + cl.r) * n + cl.c][static_cast<std::size_t>(cl.m)];
      slot = F.add(slot, F.mul(F.from_int(v[k]), basis[cl.b]));
    }
    for (std::size_t blk = 0; blk < 4; ++blk)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
          C((blk / 2) * n + r, (blk % 2) * n + c) = FPoly(ctx.field, coef[(blk * n + r) * n + c]);
    out.push_back(std::move(C));
  }
  return out;
}

/// Smallest-degree unimodular C with Y ~ C X, searching degrees 0..dmax and
/// F_p-combinations of the kernel basis (at most p^8 of them per degree).
inline std::optional<Recovery> recover_change_of_basis(const Context& ctx, const CMatrix& X, const CMatrix& Y, long dmax) {
  const int p = ctx.field->p();
  for (long d = 0; d <= dmax; ++d) {
    const auto ker = change_of_basis_kernel(ctx, X, Y, d);
    if (ker.empty()) continue;
    const std::size_t dim = std::min<std::size_t>(ker.size(), 8);
    std::vector<int> coeff(dim, 0);
    for (;;) {
      std::size_t i = 0;
      while (i < dim && ++coeff[i] == p) coeff[i++] = 0;
      if (i == dim) break;
      FPMatrix C(ker[0].rows(), ker[0].cols(), FPoly(ctx.field));
      for (std::size_t k = 0; k < dim; ++k)
        if (coeff[k] != 0) {
          const FFElem s = FFElem::from_int(ctx.field, coeff[k]);
          C = C + ker[k].map([&s](const FPoly& x) { return x.scaled(s); });
        }
      const FPoly det = determinant(C);
      if (det.degree() == 0 && det.in_fq()) return Recovery{d, C, ker.size()};
    }
  }
  return std::nullopt;
}

/// Z_Y (C11 X1 + C12 X2) - (C21 X1 + C22 X2) for a given C.
inline CMatrix change_of_basis_residual(const Context& ctx, const CMatrix& X, const CMatrix& Y, const FPMatrix& C) {
  const std::size_t n = X.cols();
  require(C.rows() == 2 * n && C.cols() == 2 * n, ErrorKind::domain, "C must be 2n x 2n");
  const CMatrix ZY = Y.block(n, 0, n, n) * inverse(Y.block(0, 0, n, n));
  const CMatrix CX = at_theta(C, ctx) * X;
  return ZY * CX.block(0, 0, n, n) - CX.block(n, 0, n, n);
}

/// Row lattices X and Y (2n x n) generate the same F_q[theta]-module.
inline bool same_lattice(const Context& ctx, const CMatrix& X, const CMatrix& Y, long dmax) {
  return recover_change_of_basis(ctx, X, Y, dmax).has_value();
}

}  // namespace tmotive
