#include <gtest/gtest.h>

#include "test_util.hpp"
#include "tmotive/cinf.hpp"
#include "tmotive/polyt.hpp"

using namespace tmotive;
using tmotive::test::error_kind;

namespace {

const FieldPtr& F() {
  static const FieldPtr f = Field::create(3, 1);
  return f;
}

FFElem c(std::int64_t n) { return FFElem::from_int(F(), n); }

CinfElem series(std::int64_t ram, std::int64_t prec, std::vector<CinfElem::Term> t) {
  return CinfElem::from_terms(F(), ram, prec, std::move(t));
}

}  // namespace

TEST(Cinf, ThetaDifferenceHasTwoTerms) {
  const CinfElem t20 = theta_ij(F(), 1, 50, 2, 0);
  ASSERT_EQ(t20.terms().size(), 2u);
  EXPECT_EQ(t20.terms()[0].first, -9);
  EXPECT_EQ(t20.terms()[1].first, -1);
  EXPECT_EQ(FFElem(F(), t20.terms()[0].second), c(1));
  EXPECT_EQ(FFElem(F(), t20.terms()[1].second), c(-1));
  EXPECT_EQ(t20.valuation().str(), "-9");
}

TEST(Cinf, InverseTimesSelfIsOne) {
  const CinfElem x = series(1, 40, {{-2, 1}, {0, 2}, {3, 1}});
  const CinfElem y = x * x.inverse();
  EXPECT_TRUE((y - CinfElem::one(F(), 1, y.prec())).is_zero());
  EXPECT_GE(y.prec(), 40 + 2);
}

TEST(Cinf, GeometricSeriesInverse) {
  // (1 - t)^{-1} = 1 + t + t^2 + ...
  const CinfElem x = series(1, 20, {{0, 1}, {1, F()->neg(1)}});
  const CinfElem inv = x.inverse();
  for (std::int64_t e = 0; e < inv.prec(); ++e) EXPECT_EQ(inv.coeff(e), c(1));
}

TEST(Cinf, TwistScalesExponentsAndFrobeniusCoefficients) {
  const FFElem w = Omega::of(F()).value;
  const CinfElem x = CinfElem::monomial(w, 2, 1, 30) + CinfElem::monomial(c(1), 5, 1, 30);
  const CinfElem y = x.twist(1);
  EXPECT_EQ(y.prec(), 90);
  EXPECT_EQ(y.coeff(6), -w);
  EXPECT_EQ(y.coeff(15), c(1));
  EXPECT_EQ(y.twist(-1), x);
  // (x y)^{(1)} = x^{(1)} y^{(1)} and (x + y)^{(1)} = x^{(1)} + y^{(1)}
  const CinfElem z = series(1, 30, {{-1, 1}, {4, w.code()}});
  EXPECT_TRUE(((x * z).twist(1)).agrees_with(x.twist(1) * z.twist(1)));
  EXPECT_TRUE(((x + z).twist(1)).agrees_with(x.twist(1) + z.twist(1)));
}

TEST(Cinf, SquareRootOfOnePlusT) {
  const CinfElem x = series(1, 12, {{0, 1}, {1, 1}});
  const CinfElem r = x.root(2);
  EXPECT_TRUE((r * r - x).is_zero());
  // sqrt(1 + t) = 1 + t/2 - t^2/8 + ... = 1 + 2t + t^2 + ... over F_3
  EXPECT_EQ(r.coeff(0), c(1));
  EXPECT_EQ(r.coeff(1), c(2));
  EXPECT_EQ(r.coeff(2), c(1));
}

TEST(Cinf, EighthRootRaisesRamification) {
  const CinfElem t20 = theta_ij(F(), 1, 60, 2, 0);
  const CinfElem y = (-t20).root(8);
  EXPECT_EQ(y.ram(), 8);
  EXPECT_EQ(y.valuation().str(), "-9/8");
  EXPECT_TRUE((y.pow(8) + t20.lift(8)).is_zero());
}

TEST(Cinf, ValuationIsMultiplicativeAndUltrametric) {
  const CinfElem x = series(2, 40, {{-3, 1}, {1, 2}});
  const CinfElem y = series(2, 40, {{5, 2}, {6, 1}});
  EXPECT_EQ((x * y).order(), x.order() + y.order());
  EXPECT_GE((x + y).order(), std::min(x.order(), y.order()));
  EXPECT_EQ((x * y).valuation().str(), "1");
}

TEST(Cinf, PrecisionOfProductIsSound) {
  // Truncating the inputs at a higher precision never changes the product below its stated precision.
  const CinfElem x = series(1, 20, {{-2, 1}, {0, 2}, {7, 1}});
  const CinfElem y = series(1, 25, {{1, 1}, {3, 2}});
  const CinfElem xh = series(1, 60, {{-2, 1}, {0, 2}, {7, 1}, {30, 1}});
  const CinfElem yh = series(1, 60, {{1, 1}, {3, 2}, {40, 2}});
  const CinfElem lo = x * y, hi = xh * yh;
  EXPECT_EQ(lo.prec(), std::min(20 + 1, 25 - 2));
  EXPECT_TRUE(lo.agrees_with(hi));
  const CinfElem li = x.inverse(), hii = xh.inverse();
  EXPECT_TRUE(li.agrees_with(hii));
}

TEST(Cinf, AdditionKeepsSmallerPrecision) {
  const CinfElem x = series(1, 10, {{0, 1}});
  const CinfElem y = series(1, 30, {{12, 1}});
  const CinfElem s = x + y;
  EXPECT_EQ(s.prec(), 10);
  EXPECT_EQ(s.terms().size(), 1u);
}

TEST(Cinf, LiftPreservesValue) {
  const CinfElem x = series(2, 10, {{-1, 1}, {3, 2}});
  const CinfElem y = x.lift(6);
  EXPECT_EQ(y.ram(), 6);
  EXPECT_EQ(y.prec(), 30);
  EXPECT_EQ(y.coeff(-3), c(1));
  EXPECT_EQ(y.coeff(9), c(2));
  EXPECT_TRUE(x.agrees_with(y));
}

TEST(Cinf, Errors) {
  const CinfElem z = CinfElem::zero(F(), 1, 10);
  EXPECT_EQ(error_kind([&] { z.inverse(); }), ErrorKind::precision);
  EXPECT_EQ(error_kind([&] { z.valuation(); }), ErrorKind::precision);
  const CinfElem x = series(1, 10, {{0, 1}});
  EXPECT_EQ(error_kind([&] { x.root(3); }), ErrorKind::domain);
  EXPECT_EQ(error_kind([&] { x.lift(3).lift(4); }), ErrorKind::domain);
  const CinfElem odd = series(1, 10, {{1, 1}});
  EXPECT_EQ(error_kind([&] { odd.twist(-1); }), ErrorKind::domain);
}

TEST(PolyT, ArithmeticAndEvaluation) {
  const CinfElem a = series(1, 30, {{-1, 1}});
  const CinfElem b = series(1, 30, {{2, 2}});
  const PolyT f = PolyT::linear(a), g = PolyT::linear(b);
  const PolyT h = f * g;
  EXPECT_EQ(h.degree(), 2);
  EXPECT_TRUE(h.eval(a).is_zero());
  EXPECT_TRUE(h.eval(b).is_zero());
  const CinfElem x = series(1, 30, {{0, 1}, {1, 1}});
  EXPECT_TRUE(h.eval(x).agrees_with(f.eval(x) * g.eval(x)));
  EXPECT_TRUE((f - f).trimmed().empty() || (f - f).trimmed().degree() == -1);
  EXPECT_TRUE(h.twist(1).eval(x.twist(1)).agrees_with(h.eval(x).twist(1)));
}
