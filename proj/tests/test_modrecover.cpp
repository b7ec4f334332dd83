#include <gtest/gtest.h>

#include "test_util.hpp"
#include "tmotive/latticemap.hpp"
#include "tmotive/modrecover.hpp"
#include "tmotive/sampling.hpp"

using namespace tmotive;
using tmotive::test::ctx3;

TEST(FpMatrix, NullspaceIsKernel) {
  FpMatrix m(2, 4, 3);
  const int rows[2][4] = {{1, 2, 0, 1}, {0, 1, 1, 2}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = rows[i][j];
  const auto ns = m.nullspace();
  ASSERT_EQ(ns.size(), 2u);
  for (const auto& v : ns)
    for (int i = 0; i < 2; ++i) {
      int acc = 0;
      for (int j = 0; j < 4; ++j) acc += m(i, j) * v[j];
      EXPECT_EQ(acc % 3, 0);
    }
}

TEST(FpMatrix, FullRankHasTrivialNullspace) {
  FpMatrix m(3, 3, 5);
  for (int i = 0; i < 3; ++i) m(i, i) = i + 1;
  EXPECT_TRUE(m.nullspace().empty());
}

class Recover : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { y0_ = new CinfElem(carlitz_period(ctx3())); }
  static void TearDownTestSuite() { delete y0_; }
  static CinfElem* y0_;
};
CinfElem* Recover::y0_ = nullptr;

TEST_F(Recover, FindsChangeOfBasisForMobiusImage) {
  const Context& c = ctx3();
  Sampler s(c, 21);
  for (std::size_t n : {1u, 2u}) {
    const CMatrix Z = mu13(make_tmotive(c, s.small_matrix(n, c.vmin)), *y0_);
    const FPMatrix g = s.gamma_any(n);
    const CMatrix X = mu34(c, Z), Y = mu34(c, mobius(c, g, Z));
    const auto rec = recover_change_of_basis(c, X, Y, 2);
    ASSERT_TRUE(rec.has_value());
    EXPECT_LE(rec->degree, 1);
    const FPoly d = determinant(rec->C);
    EXPECT_EQ(d.degree(), 0);
    EXPECT_TRUE(d.in_fq());
    for (const auto& x : change_of_basis_residual(c, X, Y, rec->C).data()) EXPECT_GE(x.order(), c.prec - 2 * c.slack);
  }
}

TEST_F(Recover, WrongMatrixLeavesResidual) {
  const Context& c = ctx3();
  Sampler s(c, 22);
  const CMatrix Z = mu13(make_tmotive(c, s.small_matrix(1, c.vmin)), *y0_);
  const CMatrix Y = mu34(c, mobius(c, s.gamma_any(1), Z));
  const CMatrix r = change_of_basis_residual(c, mu34(c, Z), Y, fp_identity(c.field, 2));
  EXPECT_FALSE(r(0, 0).is_zero());
}

TEST_F(Recover, DistinctLatticesAreNotEqual) {
  const Context& c = ctx3();
  const CMatrix Z = mu13(base_motive(c, 1), *y0_);
  // Z + theta^{-1}/2-ish perturbation: not a Mobius image of Z over F_q[theta].
  const CMatrix Z2 = Z + CMatrix(1, 1, c.monomial(FFElem::one(c.field), 3));
  EXPECT_FALSE(same_lattice(c, mu34(c, Z), mu34(c, Z2), 2));
}
