#include <gtest/gtest.h>

#include "diffinv/fixtures.hpp"
#include "diffinv/series.hpp"
#include "oracles.hpp"

using namespace diffinv;

namespace {
const Fixture& fx() {
  static const Fixture f = build_fixture();
  return f;
}
RationalSeries over(IntPolynomial num, std::vector<int> degrees) {
  return RationalSeries(std::move(num), IntPolynomial::hsop_denominator(degrees));
}
std::vector<long long> as_ll(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }
}  // namespace

TEST(IntPoly, ArithmeticAndPrinting) {
  const IntPolynomial a{1, 1};
  EXPECT_EQ((a * a).to_string(), "1+2*t+t^2");
  EXPECT_EQ(IntPolynomial::one_minus_t_pow(2).to_string(), "1-t^2");
  EXPECT_EQ(IntPolynomial{}.to_string(), "0");
  EXPECT_EQ(IntPolynomial({0, -2, 0, 3}).to_string(), "-2*t+3*t^3");
}

TEST(IntPoly, ExactDivision) {
  const IntPolynomial d = IntPolynomial::hsop_denominator({2, 3});
  EXPECT_EQ(*(d * IntPolynomial{1, 5}).divide_exact(d), IntPolynomial({1, 5}));
  EXPECT_FALSE(IntPolynomial({1, 1}).divide_exact(IntPolynomial({0, 2})).has_value());
}

TEST(IntPoly, OverflowDetected) {
  const IntPolynomial big = IntPolynomial::constant(1LL << 62);
  EXPECT_THROW(big * IntPolynomial::constant(4), ConsistencyError);
}

TEST(IntPoly, Gcd) {
  const IntPolynomial a = IntPolynomial{1, 1} * IntPolynomial{1, 0, 1};
  const IntPolynomial b = IntPolynomial{1, 1} * IntPolynomial{2, 3};
  EXPECT_EQ(gcd(a, b), IntPolynomial({1, 1}));
}

TEST(SeriesExpand, Binomials) { EXPECT_EQ(over({1}, {1, 1, 1}).expand(4), std::vector<long long>({1, 3, 6, 10, 15})); }

TEST(SeriesExpand, InvariantSeries) {
  EXPECT_EQ(over({1, 0, 0, 0, 0, 0, 1}, {2, 3, 4}).expand(6), std::vector<long long>({1, 0, 1, 1, 2, 1, 4}));
}

TEST(SeriesExpand, RelativeSeries) { EXPECT_EQ(over({0, 1, 1}, {2, 2, 2}).expand(5), std::vector<long long>({0, 1, 1, 3, 3, 6})); }

TEST(SeriesExpand, AgreesWithNaiveConvolution) {
  const std::vector<std::pair<std::vector<long long>, std::vector<int>>> cases{
      {{1, 0, 0, 0, 0, 0, 1}, {2, 3, 4}}, {{0, 1, 1}, {2, 2, 2}}, {{1, -1, 3}, {1, 5}}, {{2}, {}}};
  for (const auto& [num, degs] : cases) EXPECT_EQ(over(num, degs).expand(30), oracle::expand_over_geometric(num, degs, 30));
}

TEST(SeriesDisplay, FactoredDenominators) {
  EXPECT_EQ(over({0, 1, 1}, {2, 2, 2}).to_string(), "(t+t^2)/(1-t^2)^3");
  EXPECT_EQ(over({1, 0, 0, 0, 0, 0, 1}, {2, 3, 4}).to_string(), "(1+t^6)/((1-t^2)(1-t^3)(1-t^4))");
  EXPECT_EQ(over({1}, {1, 1, 1}).to_string(), "1/(1-t)^3");
  EXPECT_EQ(over({0, 1}, {}).to_string(), "t");
}

TEST(SeriesEquality, RationalFunctionEquality) {
  EXPECT_EQ(over({0, 1, 1}, {2, 2, 2}), over({0, 1}, {1, 2, 2}));
  EXPECT_EQ(over({0, 1, 1}, {2, 2, 2}).reduced().denominator(), IntPolynomial::hsop_denominator({1, 2, 2}));
  EXPECT_FALSE(over({0, 1, 1}, {2, 2, 2}) == over({0, 1}, {2, 2, 2}));
}

TEST(Molien, HbarWithChi) {
  const RationalSeries m = molien(*fx().hbar, fx().chi.descend(fx().rho_h, fx().hbar));
  EXPECT_EQ(m, over({0, 1, 1}, {2, 2, 2}));
  EXPECT_EQ(m.to_string(), "(t+t^2)/(1-t^2)^3");
}

TEST(Molien, TrivialGroup) {
  const GroupPtr triv = make_group({FpMatrix::identity(3, 3)});
  const RationalSeries m = molien(*triv, LinearCharacter::trivial(triv));
  EXPECT_EQ(m, over({1}, {1, 1, 1}));
  EXPECT_EQ(m.to_string(), "1/(1-t)^3");
}

TEST(Molien, ModularGroupRefused) {
  const GroupPtr img = fx().rho.image_group();
  EXPECT_THROW(molien(*img, LinearCharacter::trivial(img)), ModularError);
}

TEST(Molien, ConventionsAgreeForRealCharacters) {
  // chi takes values +-1, so chi and its inverse coincide
  const auto chi = fx().chi.descend(fx().rho_h, fx().hbar);
  EXPECT_EQ(molien(*fx().hbar, chi, CharacterConvention::direct), molien(*fx().hbar, chi, CharacterConvention::inverse));
}

TEST(Molien, ConventionMattersForComplexCharacter) {
  // cyclic group of order 4 in F5, generated by diag(2, 1, 1); chi(g) = 2
  const GroupPtr c4 = make_group({FpMatrix::square({2, 0, 0, 0, 1, 0, 0, 0, 1}, 5)});
  const auto chi = LinearCharacter::from_generator_values(c4, {2});
  const InvariantContext ctx(Representation::natural(c4), chi);
  std::vector<long long> dims;
  for (int d = 0; d <= 12; ++d) dims.push_back(static_cast<long long>(ctx.dimension({d, 0})));
  EXPECT_EQ(molien(*c4, chi, CharacterConvention::direct).expand(12), dims);
  EXPECT_NE(molien(*c4, chi, CharacterConvention::inverse).expand(12), dims);
}

TEST(RewriteOverHsop, RelativeSeriesOver234) {
  const HsopNumerator r = rewrite_over_hsop(over({0, 1, 1}, {2, 2, 2}), {2, 3, 4});
  EXPECT_EQ(r.numerator, IntPolynomial({0, 1, 1, 2, 1, 1}));
  EXPECT_EQ(r.numerator.to_string(), "t+t^2+2*t^3+t^4+t^5");
  EXPECT_TRUE(r.nonnegative);
}

TEST(RewriteOverHsop, InvariantSeries) {
  EXPECT_EQ(rewrite_over_hsop(over({1, 0, 0, 0, 0, 0, 1}, {2, 3, 4}), {2, 3, 4}).numerator, IntPolynomial({1, 0, 0, 0, 0, 0, 1}));
}

TEST(RewriteOverHsop, PolynomialRingOver234) {
  const HsopNumerator r = rewrite_over_hsop(over({1}, {1, 1, 1}), {2, 3, 4});
  const IntPolynomial expected = IntPolynomial{1, 1} * IntPolynomial{1, 1} * IntPolynomial{1, 0, 1} * IntPolynomial{1, 1, 1};
  EXPECT_EQ(r.numerator, expected);
  EXPECT_EQ(r.numerator.degree(), 6);
  long long sum = 0;
  for (auto c : r.numerator.coeffs()) sum += c;
  EXPECT_EQ(sum, 24);
}

TEST(RewriteOverHsop, NotFree) { EXPECT_THROW(rewrite_over_hsop(over({1}, {1, 1, 1}), {2, 2}), NotFreeError); }

TEST(HilbertFromDims, ReconstructsInvariantSeries) {
  const auto r = hilbert_from_dims(as_ll(oracle::kInvariantDims), {2, 3, 4});
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->to_string(), "(1+t^6)/((1-t^2)(1-t^3)(1-t^4))");
}

TEST(HilbertFromDims, ShortTableIsInconclusive) {
  const std::vector<std::size_t> head(oracle::kInvariantDims.begin(), oracle::kInvariantDims.begin() + 8);
  EXPECT_FALSE(hilbert_from_dims(as_ll(head), {2, 3, 4}).has_value());
}

class MolienProperties : public ::testing::Test {};

TEST_F(MolienProperties, HbarChiMatchesBruteForce) {
  const RationalSeries m = molien(*fx().hbar, fx().chi.descend(fx().rho_h, fx().hbar));
  std::vector<long long> dims;
  for (int d = 0; d <= 20; ++d) dims.push_back(static_cast<long long>(fx().h_chi_ctx->dimension({d, 0})));
  EXPECT_EQ(m.expand(20), dims);
}

TEST_F(MolienProperties, HbarTrivialMatchesBruteForce) {
  const RationalSeries m = molien(*fx().hbar, LinearCharacter::trivial(fx().hbar));
  std::vector<long long> dims;
  for (int d = 0; d <= 20; ++d) dims.push_back(static_cast<long long>(fx().h_ctx->dimension({d, 0})));
  EXPECT_EQ(m.expand(20), dims);
  EXPECT_EQ(m, over({1, 0, 0, 1}, {2, 2, 2}));
}

TEST_F(MolienProperties, NonModularGroupInLargerCharacteristic) {
  // permutation matrices over F5: order 6 is prime to 5
  const GroupPtr s3 = make_group({FpMatrix::square({0, 1, 0, 0, 0, 1, 1, 0, 0}, 5), FpMatrix::square({0, 1, 0, 1, 0, 0, 0, 0, 1}, 5)});
  ASSERT_EQ(s3->order(), 6u);
  const InvariantContext ctx(Representation::natural(s3));
  const RationalSeries m = molien(*s3, LinearCharacter::trivial(s3));
  EXPECT_EQ(m, over({1}, {1, 2, 3}));
  std::vector<long long> dims;
  for (int d = 0; d <= 12; ++d) dims.push_back(static_cast<long long>(ctx.dimension({d, 0})));
  EXPECT_EQ(m.expand(12), dims);
}
