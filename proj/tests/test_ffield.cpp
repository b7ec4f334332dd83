#include <gtest/gtest.h>

#include "test_util.hpp"
#include "tmotive/ffield.hpp"

using namespace tmotive;
using tmotive::test::error_kind;

TEST(Field, SizesAndSubfield) {
  const auto F = Field::create(3, 1);
  EXPECT_EQ(F->size(), 81u);
  EXPECT_EQ(F->q(), 3u);
  EXPECT_EQ(F->subfield_elements().size(), 3u);
  const auto F5 = Field::create(5, 1);
  EXPECT_EQ(F5->size(), 625u);
  EXPECT_EQ(F5->subfield_elements().size(), 5u);
}

TEST(Field, AxiomsExhaustive) {
  const auto F = Field::create(3, 1);
  const Code n = F->size();
  for (Code a = 0; a < n; ++a) {
    EXPECT_EQ(F->add(a, F->neg(a)), 0u);
    EXPECT_EQ(F->mul(a, 1), a);
    if (a != 0) {
      EXPECT_EQ(F->mul(a, F->inv(a)), 1u);
    }
    for (Code b = 0; b < n; b += 7) {
      EXPECT_EQ(F->add(a, b), F->add(b, a));
      EXPECT_EQ(F->mul(a, b), F->mul(b, a));
      for (Code c = 0; c < n; c += 11) EXPECT_EQ(F->mul(a, F->add(b, c)), F->add(F->mul(a, b), F->mul(a, c)));
    }
  }
}

TEST(Field, FrobeniusIsAdditiveAndMultiplicative) {
  const auto F = Field::create(3, 1);
  for (Code a = 0; a < F->size(); ++a)
    for (Code b = 0; b < F->size(); b += 5) {
      EXPECT_EQ(F->frobenius(F->add(a, b), 1), F->add(F->frobenius(a, 1), F->frobenius(b, 1)));
      EXPECT_EQ(F->frobenius(F->mul(a, b), 1), F->mul(F->frobenius(a, 1), F->frobenius(b, 1)));
    }
  for (Code a = 0; a < F->size(); ++a) {
    EXPECT_EQ(F->frobenius(a, 1), F->pow(a, 3));
    EXPECT_EQ(F->frobenius(a, 4), a);
    EXPECT_EQ(F->frobenius(F->frobenius(a, -1), 1), a);
  }
}

TEST(Field, OmegaSquaresIntoFqButIsNotInFq) {
  const auto F = Field::create(3, 1);
  const FFElem w = Omega::of(F).value;
  const FFElem w2 = w * w;
  EXPECT_EQ(w2, FFElem::from_int(F, 2));
  EXPECT_EQ(w.code(), 42u);
  EXPECT_EQ(frobenius(w, 1), -w);
  EXPECT_EQ(frobenius(w, 2), w);
}

TEST(Field, OmegaForQ5) {
  const auto F = Field::create(5, 1);
  const FFElem w = Omega::of(F).value;
  EXPECT_NE(frobenius(w, 1), w);
  EXPECT_EQ(frobenius(w * w, 1), w * w);
}

TEST(Field, EvenCharacteristicHasNoOmega) {
  const auto F = Field::create(2, 1);
  EXPECT_EQ(error_kind([&] { Omega::of(F); }), ErrorKind::domain);
}

TEST(Field, FindRootMatchesBruteForce) {
  const auto F = Field::create(3, 1);
  // X^8 = c has a root iff c is an 8th power.
  for (Code c = 1; c < F->size(); ++c) {
    const std::vector<Code> poly{F->neg(c), 0, 0, 0, 0, 0, 0, 0, 1};
    const auto r = F->find_root(poly);
    bool exists = false;
    for (Code x = 0; x < F->size(); ++x) exists = exists || F->pow(x, 8) == c;
    EXPECT_EQ(r.has_value(), exists);
    if (r) {
      EXPECT_EQ(F->pow(*r, 8), c);
    }
  }
}

TEST(Field, PrimitiveRootOrders) {
  const auto F = Field::create(3, 1);
  const Code zeta = F->exp_of(5);  // order 80 / gcd(5, 80) = 16
  EXPECT_EQ(F->pow(zeta, 16), 1u);
  for (int e = 1; e < 16; ++e) EXPECT_NE(F->pow(zeta, e), 1u);
}

TEST(Field, DigitsRoundTrip) {
  const auto F = Field::create(3, 1);
  for (Code a = 0; a < F->size(); ++a) EXPECT_EQ(F->from_digits(F->digits(a)), a);
}

TEST(Field, Errors) {
  const auto F = Field::create(3, 1);
  EXPECT_EQ(error_kind([&] { F->inv(0); }), ErrorKind::domain);
  EXPECT_EQ(error_kind([&] { Field::create(4, 1); }), ErrorKind::domain);
  EXPECT_EQ(error_kind([&] { Field::create(3, 1, 3); }), ErrorKind::domain);
  EXPECT_EQ(error_kind([&] { Field::create(FieldSpec{3, 1, 4, {1, 0, 0, 0, 1}}); }), ErrorKind::domain);
  const auto G = Field::create(5, 1);
  EXPECT_EQ(error_kind([&] { FFElem::one(F) + FFElem::one(G); }), ErrorKind::domain);
  const std::vector<int> bad{3, 0, 0, 0};
  EXPECT_EQ(error_kind([&] { F->from_digits(bad); }), ErrorKind::domain);
}
