#include <gtest/gtest.h>

#include <random>

#include "diffinv/gcalg.hpp"

using namespace diffinv;

namespace {
GCElement P(const char* s) { return parse_element(s, 3, 3); }
}  // namespace

TEST(SignNormalize, Transposition) {
  const std::vector<unsigned> f{2, 1};
  const SignedMask s = sign_normalize(f);
  EXPECT_EQ(s.mask, 0b011u);
  EXPECT_EQ(s.sign, -1);
  EXPECT_FALSE(s.zero);
}

TEST(SignNormalize, SortedIsPositive) {
  const std::vector<unsigned> f{1, 2, 3};
  EXPECT_EQ(sign_normalize(f).sign, 1);
}

TEST(SignNormalize, CyclicShiftIsEven) {
  const std::vector<unsigned> f{3, 1, 2};
  const SignedMask s = sign_normalize(f);
  EXPECT_EQ(s.mask, 0b111u);
  EXPECT_EQ(s.sign, 1);
}

TEST(SignNormalize, RepeatIsZero) {
  const std::vector<unsigned> f{1, 3, 1};
  EXPECT_TRUE(sign_normalize(f).zero);
}

TEST(GCMul, OddGeneratorsAnticommute) { EXPECT_EQ(P("y2") * P("y1"), -P("y1*y2")); }

TEST(GCMul, OddSquareVanishes) { EXPECT_TRUE((P("y1") * P("y1")).is_zero()); }

TEST(GCMul, C1SquaredVanishes) {
  const GCElement c1 = P("x1*y1+x2*y2+x3*y3");
  EXPECT_TRUE((c1 * c1).is_zero());
}

TEST(GCMul, DisjointMasksNoSign) { EXPECT_EQ(P("x1*y1") * P("x2*y2"), P("x1*x2*y1*y2")); }

TEST(GCMul, RankMismatchRejected) { EXPECT_THROW(P("x1") * parse_element("x1", 2, 3), DomainError); }

TEST(Printing, CoefficientConventions) {
  EXPECT_EQ(to_string(P("x1^2+x2^2+x3^2")), "x1^2+x2^2+x3^2");
  EXPECT_EQ(to_string(P("2*x1")), "-x1");
  EXPECT_EQ(to_string(P("y2*y1")), "-y1*y2");
  EXPECT_EQ(to_string(GCElement(3, 3)), "0");
  EXPECT_EQ(to_string(GCElement::constant(1, 3, 3)), "1");
  EXPECT_EQ(to_string(parse_element("3*x1", 3, 7)), "3*x1");
}

TEST(Printing, ParseRoundTrip) {
  for (const char* s : {"x1*y2*y3-x2*y1*y3+x3*y1*y2", "x1^4*x3^2+x1^2*x2^4+x2^2*x3^4", "-y1*y2*y3+1"}) {
    const GCElement f = P(s);
    EXPECT_EQ(P(to_string(f).c_str()), f) << s;
  }
}

TEST(Parsing, Errors) {
  EXPECT_THROW(P(""), ParseError);
  EXPECT_THROW(P("x4"), ParseError);
  EXPECT_THROW(P("x1+"), ParseError);
  EXPECT_THROW(P("z1"), ParseError);
}

TEST(BidegreeBasisTest, LinearForms) {
  const auto b = bidegree_basis({1, 0}, 3);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0].to_string(), "x1");
  EXPECT_EQ(b[1].to_string(), "x2");
  EXPECT_EQ(b[2].to_string(), "x3");
}

TEST(BidegreeBasisTest, TopExteriorDegree) {
  const auto b = bidegree_basis({0, 3}, 3);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].to_string(), "y1*y2*y3");
}

TEST(BidegreeBasisTest, Size21) { EXPECT_EQ(bidegree_basis({2, 1}, 3).size(), 18u); }

TEST(BidegreeBasisTest, DescendingAndCoordinatesRoundTrip) {
  const BidegreeBasis bb({4, 2}, 3, 3);
  for (std::size_t k = 1; k < bb.size(); ++k) EXPECT_GT(bb.monomials()[k - 1], bb.monomials()[k]);
  const GCElement f = P("x1^2*x2*x3*y1*y3-x3^4*y2*y3");
  EXPECT_EQ(bb.element(bb.coordinates(f)), f);
}

// Graded-commutativity laws on random homogeneous elements.
class KoszulProperties : public ::testing::Test {
 protected:
  GCElement random_element(Bidegree bd) {
    GCElement f(3, 3);
    std::uniform_int_distribution<int> c(0, 2);
    for (const auto& m : bidegree_basis(bd, 3)) f.add_term(m, c(rng));
    return f;
  }
  Bidegree random_bidegree() {
    std::uniform_int_distribution<int> x(0, 3), y(0, 3);
    return {x(rng), y(rng)};
  }
  std::mt19937 rng{20240611};
};

TEST_F(KoszulProperties, GradedCommutativity) {
  for (int n = 0; n < 60; ++n) {
    const Bidegree a = random_bidegree(), b = random_bidegree();
    const GCElement f = random_element(a), g = random_element(b);
    const int sign = (a.ydeg * b.ydeg) % 2 ? -1 : 1;
    EXPECT_EQ(f * g, (g * f).scaled(sign));
  }
}

TEST_F(KoszulProperties, Associativity) {
  for (int n = 0; n < 40; ++n) {
    const GCElement f = random_element(random_bidegree()), g = random_element(random_bidegree()),
                    h = random_element(random_bidegree());
    EXPECT_EQ((f * g) * h, f * (g * h));
  }
}

TEST_F(KoszulProperties, Distributivity) {
  for (int n = 0; n < 40; ++n) {
    const Bidegree b = random_bidegree();
    const GCElement f = random_element(random_bidegree()), g = random_element(b), h = random_element(b);
    EXPECT_EQ(f * (g + h), f * g + f * h);
  }
}

TEST_F(KoszulProperties, OddElementsSquareToZero) {
  for (int n = 0; n < 40; ++n) {
    std::uniform_int_distribution<int> x(0, 3);
    const int y = n % 2 ? 1 : 3;
    const GCElement f = random_element({x(rng), y});
    EXPECT_TRUE((f * f).is_zero());
  }
}

TEST_F(KoszulProperties, BidegreesAdd) {
  for (int n = 0; n < 40; ++n) {
    const Bidegree a = random_bidegree(), b = random_bidegree();
    const GCElement prod = random_element(a) * random_element(b);
    if (!prod.is_zero()) EXPECT_EQ(*prod.bidegree(), a + b);
  }
}
