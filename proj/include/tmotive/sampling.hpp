#pragma once

// Seeded random inputs: small series and matrices, elements of the
// stabiliser of omega E, and constant unimodular matrices over F_q.

#include <cstdint>
#include <random>
#include <vector>

#include "tmotive/context.hpp"
#include "tmotive/fpoly.hpp"
#include "tmotive/isomsolver.hpp"
#include "tmotive/latticemap.hpp"

namespace tmotive {

class Sampler {
 public:
  Sampler(const Context& ctx, std::uint64_t seed) : ctx_(ctx), rng_(seed) {}

  std::uint64_t uniform(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng_); }

  FFElem element() { return {ctx_.field, static_cast<Code>(uniform(ctx_.field->size()))}; }
  FFElem nonzero_element() { return {ctx_.field, static_cast<Code>(1 + uniform(ctx_.field->size() - 1))}; }
  FFElem fq_element() {
    const auto els = ctx_.field->subfield_elements();
    return {ctx_.field, els[uniform(els.size())]};
  }
  FFElem fq2_element() {
    const auto& F = *ctx_.field;
    for (;;) {
      const Code c = static_cast<Code>(uniform(F.size()));
      if (F.frobenius(c, 2) == c) return {ctx_.field, c};
    }
  }

  /// Sum of `terms` monomials with exponents in [vmin, vmin + span) and random
  /// coefficients; exact, so it carries the context's constant precision.
  CinfElem small_series(std::int64_t vmin, std::int64_t span, int terms) {
    std::vector<CinfElem::Term> t;
    const FFElem lead = nonzero_element();
    t.push_back({vmin, lead.code()});
    for (int i = 1; i < terms; ++i) {
      const std::int64_t e = vmin + 1 + static_cast<std::int64_t>(uniform(static_cast<std::uint64_t>(span)));
      t.push_back({e, element().code()});
    }
    return CinfElem::from_terms(ctx_.field, ctx_.ram, ctx_.const_prec(), std::move(t));
  }

  /// n x n matrix with every entry of order >= vmin; entries vanish with probability 1/4.
  CMatrix small_matrix(std::size_t n, std::int64_t vmin, std::int64_t span = 16, int terms = 3) {
    CMatrix m = ctx_.zeros(n, n);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (uniform(4) != 0) {
          m(i, j) = small_series(vmin + static_cast<std::int64_t>(uniform(4)), span, terms);
          any = true;
        }
    if (!any) m(0, 0) = small_series(vmin, span, terms);
    return m;
  }

  CMatrix small_column(std::size_t n, std::int64_t vmin, std::int64_t span = 16, int terms = 3) {
    CMatrix m = ctx_.zeros(n, 1);
    for (std::size_t i = 0; i < n; ++i) m(i, 0) = small_series(vmin + static_cast<std::int64_t>(uniform(4)), span, terms);
    return m;
  }

  /// Random polynomial over F_{q^2} of degree <= d.
  FPoly fq2_poly(long d) {
    std::vector<Code> c;
    for (long j = 0; j <= d; ++j) c.push_back(fq2_element().code());
    return FPoly(ctx_.field, std::move(c));
  }
  FPoly fq_poly(long d) {
    std::vector<Code> c;
    for (long j = 0; j <= d; ++j) c.push_back(fq_element().code());
    return FPoly(ctx_.field, std::move(c));
  }

  /// U in GL_n(F_{q^2}[T]) of degree <= k as a product of elementary and
  /// diagonal unit matrices, mapped back to the stabiliser. For n = 1 only
  /// constants are invertible, so U = c.
  GammaElem gamma_s0(std::size_t n, long k) {
    const FieldPtr& f = ctx_.field;
    FPMatrix U = fp_identity(f, n);
    for (std::size_t i = 0; i < n; ++i) {
      FFElem c = fq2_element();
      while (c.is_zero()) c = fq2_element();
      U(i, i) = FPoly::constant(c);
    }
    if (n > 1)
      for (int step = 0; step < 3; ++step) {
        const std::size_t i = uniform(n);
        std::size_t j = uniform(n - 1);
        if (j >= i) ++j;
        FPMatrix Em = fp_identity(f, n);
        Em(i, j) = fq2_poly(static_cast<long>(uniform(static_cast<std::uint64_t>(k) + 1)));
        const FPMatrix cand = uniform(2) ? Em * U : U * Em;
        if (degree(cand) <= k) U = cand;
      }
    return alpha_inverse(ctx_, AlphaImage{k, U});
  }

  /// gamma with entries of degree <= 1 over F_q, usually outside the stabiliser,
  /// and invertible over F_q[theta].
  FPMatrix gamma_any(std::size_t n) {
    const FieldPtr& f = ctx_.field;
    for (;;) {
      FPMatrix m = fp_identity(f, 2 * n);
      for (int step = 0; step < 4; ++step) {
        const std::size_t i = uniform(2 * n);
        std::size_t j = uniform(2 * n - 1);
        if (j >= i) ++j;
        FPMatrix Em = fp_identity(f, 2 * n);
        Em(i, j) = fq_poly(1);
        const FPMatrix cand = m * Em;
        if (degree(cand) <= 1) m = cand;
      }
      if (degree(m) >= 1) return m;
    }
  }

  /// Constant 2n x 2n matrix over F_q with nonzero determinant.
  FPMatrix constant_unimodular(std::size_t n) {
    for (;;) {
      FPMatrix m(2 * n, 2 * n, FPoly(ctx_.field));
      for (auto i = 0u; i < 2 * n; ++i)
        for (auto j = 0u; j < 2 * n; ++j) m(i, j) = FPoly::constant(fq_element());
      if (determinant(m).degree() == 0) return m;
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  Context ctx_;
  std::mt19937_64 rng_;
};

}  // namespace tmotive
