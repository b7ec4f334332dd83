#include <gtest/gtest.h>

#include "test_util.hpp"
#include "tmotive/anderson.hpp"
#include "tmotive/sampling.hpp"

using namespace tmotive;
using tmotive::test::ctx3;
using tmotive::test::el;
using tmotive::test::error_kind;

TEST(Exp, BasePointCoefficientsAreCarlitzProducts) {
  const Context& c = ctx3();
  const ExpCoeffs C = exp_coeffs(base_motive(c, 1), 4);
  EXPECT_TRUE(C.C[1](0, 0).is_zero());
  EXPECT_TRUE(C.C[3](0, 0).is_zero());
  EXPECT_TRUE(C.C[2](0, 0).agrees_with(c.theta_ij(2, 0).inverse()));
  EXPECT_TRUE(C.C[4](0, 0).agrees_with((c.theta_ij(4, 2) * c.theta_ij(4, 0)).inverse()));
}

TEST(Exp, FirstCoefficientIsAOverTheta10) {
  const Context& c = ctx3();
  const CinfElem a = c.monomial(el(c, 1), 8) + c.monomial(el(c, 2), 11);
  const ExpCoeffs C = exp_coeffs(make_tmotive(c, CMatrix(1, 1, a)), 2);
  EXPECT_TRUE(C.C[1](0, 0).agrees_with(a / c.theta_ij(1, 0)));
  // C_2 = (A C_1^{(1)} + 1) / theta20
  const CinfElem c2 = (a * C.C[1](0, 0).twist(1) + c.one()) / c.theta_ij(2, 0);
  EXPECT_TRUE(C.C[2](0, 0).agrees_with(c2));
}

TEST(Exp, EvaluationIsTermByTerm) {
  const Context& c = ctx3();
  const TMotive M = base_motive(c, 1);
  ExpCoeffs C = exp_coeffs(M, 12);
  const CMatrix z(1, 1, c.monomial(el(c, 1), 8));
  CinfElem manual = c.zero();
  for (std::size_t i = 0; i <= 12; ++i) manual = manual + C.C[i](0, 0) * z(0, 0).twist(static_cast<std::int64_t>(i));
  EXPECT_TRUE(exp_eval(C, z)(0, 0).agrees_with(manual));
  ExpCoeffs cache;
  EXPECT_TRUE(exp_apply(M, cache, z)(0, 0).agrees_with(manual));
}

TEST(Exp, FqLinear) {
  const Context& c = ctx3();
  Sampler s(c, 7);
  for (std::size_t n : {1u, 2u}) {
    const TMotive M = make_tmotive(c, s.small_matrix(n, c.vmin));
    ExpCoeffs cache;
    const CMatrix z1 = s.small_column(n, -20), z2 = s.small_column(n, -15);
    const CMatrix lhs = exp_apply(M, cache, z1 + z2);
    const CMatrix rhs = exp_apply(M, cache, z1) + exp_apply(M, cache, z2);
    EXPECT_TRUE(agrees(lhs, rhs));
    const CinfElem two = c.constant(el(c, 2));
    EXPECT_TRUE(agrees(exp_apply(M, cache, two * z1), two * exp_apply(M, cache, z1)));
  }
}

TEST(Exp, FunctionalEquationResidualVanishes) {
  const Context& c = ctx3();
  Sampler s(c, 11);
  for (std::size_t n : {1u, 2u}) {
    const TMotive M = make_tmotive(c, s.small_matrix(n, c.vmin));
    ExpCoeffs cache;
    const CMatrix r = functional_residual(M, cache, s.small_column(n, -12));
    for (const auto& x : r.data()) EXPECT_TRUE(x.is_zero());
  }
}

TEST(Exp, TauMatrixShape) {
  const Context& c = ctx3();
  const CinfElem a = c.monomial(el(c, 1), 8);
  const PMatrix R = tau_matrix(make_tmotive(c, CMatrix(1, 1, a)));
  EXPECT_EQ(R(0, 0).degree(), -1);
  EXPECT_EQ(R(0, 1).degree(), 0);
  EXPECT_EQ(R(1, 0).degree(), 1);
  EXPECT_TRUE(R(1, 1)[0].agrees_with(-a));
}

TEST(Exp, RejectsOutsideNeighbourhood) {
  const Context& c = ctx3();
  EXPECT_EQ(error_kind([&] { make_tmotive(c, CMatrix(1, 1, c.monomial(el(c, 1), 7))); }), ErrorKind::domain);
  EXPECT_EQ(error_kind([&] { make_tmotive(c, CMatrix(1, 1, c.theta())); }), ErrorKind::domain);
  EXPECT_EQ(error_kind([&] { make_tmotive(c, c.zeros(1, 2)); }), ErrorKind::domain);
  const Context c5 = Context::make(5, 1);
  EXPECT_EQ(error_kind([&] { make_tmotive(c, c5.zeros(1, 1)); }), ErrorKind::domain);
}
