#include <gtest/gtest.h>

#include "test_util.hpp"
#include "tmotive/isomsolver.hpp"
#include "tmotive/latticemap.hpp"
#include "tmotive/sampling.hpp"

using namespace tmotive;
using tmotive::test::ctx3;
using tmotive::test::el;
using tmotive::test::error_kind;

namespace {

const CinfElem& y0() {
  static const CinfElem y = carlitz_period(ctx3());
  return y;
}

CMatrix omega_e(const Context& c, std::size_t n) { return c.constant(c.omega) * c.identity(n); }

}  // namespace

TEST(Period, ValuationAndRoot) {
  const Context& c = ctx3();
  EXPECT_EQ(y0().valuation().str(), "-9/8");
  ExpCoeffs cache;
  const TMotive M = base_motive(c, 1);
  EXPECT_TRUE(exp_apply(M, cache, CMatrix(1, 1, y0()))(0, 0).is_zero());
  EXPECT_TRUE(exp_apply(M, cache, CMatrix(1, 1, y0().scaled(c.omega)))(0, 0).is_zero());
  // y0^8 = -theta20 to leading order
  EXPECT_EQ(y0().pow(8).leading_coeff(), -FFElem::one(c.field));
}

TEST(Siegel, BasePointIsOmegaE) {
  const Context& c = ctx3();
  for (std::size_t n : {1u, 2u}) EXPECT_TRUE(agrees(mu13(base_motive(c, n), y0()), omega_e(c, n)));
}

TEST(Siegel, Mu34RoundTrip) {
  const Context& c = ctx3();
  Sampler s(c, 3);
  const CMatrix Z = s.small_matrix(2, -4);
  Lattice L;
  L.n = 2;
  L.basis = mu34(c, Z);
  EXPECT_TRUE(agrees(siegel_of(L), Z));
}

TEST(Siegel, StabiliserFixesOmegaE) {
  const Context& c = ctx3();
  Sampler s(c, 5);
  for (std::size_t n : {1u, 2u})
    for (int i = 0; i < 5; ++i) {
      const GammaElem g = s.gamma_s0(n, 2);
      const CMatrix img = mobius(c, g.matrix(c.omega), omega_e(c, n));
      EXPECT_GE(min_prec(img), c.prec);
      EXPECT_EQ(truncate(img, c.prec), truncate(omega_e(c, n), c.prec));
    }
}

TEST(Siegel, MobiusIsAnAction) {
  const Context& c = ctx3();
  Sampler s(c, 9);
  const CMatrix Z = omega_e(c, 2) + s.small_matrix(2, 8);
  const FPMatrix g1 = s.gamma_any(2), g2 = s.gamma_any(2);
  const CMatrix lhs = mobius(c, g1 * g2, Z);
  const CMatrix rhs = mobius(c, g1, mobius(c, g2, Z));
  EXPECT_TRUE(agree_to(lhs, rhs, c.prec - 2 * c.slack));
}

TEST(Siegel, FirstOrderLawForDiagonalPerturbation) {
  // For A = a E, mu13(A) = mu13(a) E; the scalar slope matches l1.
  const Context& c = ctx3();
  const CinfElem a = c.monomial(el(c, 1), 10 * c.ram);
  const CMatrix Z = mu13(make_tmotive(c, a * c.identity(2)), y0());
  const FirstOrder fo = first_order(c, y0());
  const CinfElem slope = (Z(0, 0) - c.constant(c.omega)) / a;
  EXPECT_GT((slope - fo.l1).order(), fo.l1.order());
  EXPECT_GT(Z(0, 1).order(), (a * fo.l1).order());
}

TEST(FirstOrder, LeadingTermOfD10) {
  const Context& c = ctx3();
  const FirstOrder fo = first_order(c, y0());
  // m = 0 term: y0^q / theta10
  const CinfElem t0 = y0().twist(1) / c.theta_ij(1, 0);
  EXPECT_EQ(fo.d10.order(), t0.order());
  EXPECT_EQ(fo.d10.leading_coeff(), t0.leading_coeff());
  EXPECT_EQ(fo.l1.valuation().str(), "3/4");
  EXPECT_NE(fo.d10p, fo.d10.scaled(c.omega));
}

TEST(SlopeCheck, Passes) {
  const Context& c = ctx3();
  const SlopeReport r = slope_check(c, y0(), 8 * c.ram, 12 * c.ram);
  EXPECT_TRUE(r.ok);
}

TEST(RankCertificate, AcceptsLatticeRejectsRationalZ) {
  const Context& c = ctx3();
  EXPECT_TRUE(rank_certificate(c, mu13(base_motive(c, 2), y0())).ok);
  // Z with coefficients in F_q: (E; Z) spans a rank-n module over F_q((1/theta)).
  CMatrix Z = c.zeros(2, 2);
  Z(0, 0) = c.theta() + c.one();
  Z(1, 1) = c.constant(el(c, 2));
  Z(0, 1) = c.theta_pow(2);
  EXPECT_FALSE(rank_certificate(c, Z).ok);
}

TEST(Gamma, ValidateRejects) {
  const Context& c = ctx3();
  const FieldPtr& f = c.field;
  GammaElem g{0, fp_identity(f, 1), FPMatrix(1, 1, FPoly(f))};
  EXPECT_NO_THROW(g.validate(c.omega));
  GammaElem big{0, FPMatrix(1, 1, FPoly::monomial(FFElem::one(f), 1)), FPMatrix(1, 1, FPoly(f))};
  EXPECT_EQ(error_kind([&] { big.validate(c.omega); }), ErrorKind::domain);
  GammaElem nonfq{0, FPMatrix(1, 1, FPoly::constant(c.omega)), FPMatrix(1, 1, FPoly(f))};
  EXPECT_EQ(error_kind([&] { nonfq.validate(c.omega); }), ErrorKind::domain);
  GammaElem sing{0, FPMatrix(1, 1, FPoly(f)), FPMatrix(1, 1, FPoly(f))};
  EXPECT_EQ(error_kind([&] { sing.validate(c.omega); }), ErrorKind::domain);
}

TEST(Lattice, RootIterationContracts) {
  const Context& c = ctx3();
  Sampler s(c, 13);
  const TMotive M = make_tmotive(c, s.small_matrix(2, c.vmin));
  const Lattice L = lattice_of(M, y0());
  ASSERT_EQ(L.stats.size(), 4u);
  for (const auto& st : L.stats)
    for (std::size_t i = 1; i < st.residual_orders.size(); ++i) EXPECT_GT(st.residual_orders[i], st.residual_orders[i - 1]);
  ExpCoeffs cache;
  for (std::size_t r = 0; r < 4; ++r) {
    const CMatrix z = y0() * L.basis.block(r, 0, 1, 2).transpose();
    for (const auto& x : exp_apply(M, cache, z).data()) EXPECT_GE(x.order(), c.prec - c.slack);
  }
}
