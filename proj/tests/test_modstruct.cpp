#include <gtest/gtest.h>

#include "diffinv/fixtures.hpp"
#include "diffinv/modstruct.hpp"
#include "oracles.hpp"

using namespace diffinv;

namespace {
const Fixture& fx() {
  static const Fixture f = build_fixture();
  return f;
}
GCElement P(const char* s) { return parse_element(s, 3, 3); }
GCElement one() { return GCElement::constant(1, 3, 3); }
}  // namespace

TEST(Hsop, InvariantParameters) { EXPECT_TRUE(hsop_check(fx().elements({"a1", "a2", "a3"}), 3)); }

TEST(Hsop, SquaresOfCoordinates) { EXPECT_TRUE(hsop_check({P("x1^2"), P("x2^2"), P("x3^2")}, 3)); }

TEST(Hsop, DependentTripleFails) { EXPECT_FALSE(hsop_check({fx()["a1"], fx()["a2"], fx()["a1"] * fx()["a2"]}, 3)); }

TEST(Hsop, WrongCountRejected) { EXPECT_THROW(hsop_check({fx()["a1"], fx()["a2"]}, 3), DomainError); }

TEST(Hsop, MixedDegreeRejected) { EXPECT_THROW(hsop_check({P("x1+x2^2"), fx()["a2"], fx()["a3"]}, 3), DomainError); }

TEST(ASpan, OneAndBFillInvariants) {
  const auto dims = a_span_dims({one(), fx()["b"]}, *fx().hsop, 0, 20);
  EXPECT_EQ(dims, oracle::kInvariantDims);
}

TEST(ASpan, RelativeGeneratorsFillRelativeInvariants) {
  const auto dims = a_span_dims(fx().elements(fx().relative_names), *fx().hsop, 0, 20);
  EXPECT_EQ(dims, oracle::kRelativeDims);
}

TEST(ASpan, EmptySetIsZero) { EXPECT_EQ(a_span_dims({}, *fx().hsop, 0, 6), std::vector<std::size_t>(7, 0)); }

TEST(Generation, RelativeGeneratorsToDegree20) {
  EXPECT_TRUE(generation_check(fx().elements(fx().relative_names), *fx().hsop, *fx().h_chi_ctx, 0, 20).ok);
}

TEST(Generation, DroppingTopGeneratorFailsAtDegree5) {
  auto gens = fx().elements(fx().relative_names);
  gens.pop_back();
  const auto r = generation_check(gens, *fx().hsop, *fx().h_chi_ctx, 0, 20);
  EXPECT_FALSE(r.ok);
  ASSERT_TRUE(r.failure && r.witness);
  EXPECT_EQ(*r.failure, Bidegree({5, 0}));
  EXPECT_TRUE(fx().h_chi_ctx->is_fixed(*r.witness));
}

TEST(Generation, OneAndBToDegree20) { EXPECT_TRUE(generation_check({one(), fx()["b"]}, *fx().hsop, *fx().g_ctx, 0, 20).ok); }

TEST(Generation, NonInvariantGeneratorRejected) {
  EXPECT_FALSE(generation_check({P("x1")}, *fx().hsop, *fx().g_ctx, 0, 4).ok);
}

TEST(FindGenerators, InvariantsNeedOneAndDegreeSix) {
  const GeneratorReport r = find_module_generators(*fx().hsop, *fx().g_ctx, 0, 20);
  EXPECT_EQ(r.degrees(), std::vector<int>({0, 6}));
  EXPECT_EQ(r.numerator, IntPolynomial({1, 0, 0, 0, 0, 0, 1}));
  // the degree-6 generator and b agree modulo the A-span of 1
  const BidegreeBasis& bb = fx().g_ctx->coordinates({6, 0});
  const EchelonSpan ones = a_span({one()}, *fx().hsop, bb);
  EXPECT_FALSE(in_span(fx()["b"], ones, bb));
  const GCElement g6 = r.generators[1].element;
  bool related = false;
  for (long long c : {1, 2}) related = related || in_span(g6 - fx()["b"].scaled(c), ones, bb);
  EXPECT_TRUE(related);
}

TEST(FindGenerators, RelativeDegrees) {
  EXPECT_EQ(find_module_generators(*fx().hsop, *fx().h_chi_ctx, 0, 20).degrees(), std::vector<int>({1, 2, 3, 3, 4, 5}));
}

TEST(FindGenerators, EmptyFamilyWindow) { EXPECT_TRUE(find_module_generators(*fx().hsop, *fx().h_chi_ctx, 0, 0).generators.empty()); }

TEST(Freeness, TriangleForEverySummand) {
  const std::vector<std::pair<int, std::vector<GCElement>>> fams{
      {0, {one(), fx()["b"]}},
      {1, fx().elements({"c1", "c2", "c3", "c4", "c5", "c6"})},
      {2, fx().elements({"d1", "d2", "d3", "d4", "d5", "d6"})},
      {3, {fx()["w"], fx()["bw"]}},
  };
  for (const auto& [y, gens] : fams) {
    const auto c = freeness_triangle(gens, *fx().hsop, *fx().g_ctx, y, 20);
    EXPECT_TRUE(c.ok) << "ydeg " << y;
  }
  EXPECT_TRUE(freeness_triangle(fx().elements(fx().relative_names), *fx().hsop, *fx().h_chi_ctx, 0, 20).ok);
}

TEST(Theta, NamedValues) {
  const auto& f = fx();
  EXPECT_EQ(theta(f["r1"], 1, f.rho, f.reps, f.h_chi_ctx.get()), f["c1"]);
  EXPECT_EQ(theta(f["r2"], 1, f.rho, f.reps, f.h_chi_ctx.get()), f["c2"]);
  EXPECT_EQ(theta(f["r1"], 2, f.rho, f.reps, f.h_chi_ctx.get()), f["d1"]);
  EXPECT_EQ(theta(f["r2"], 2, f.rho, f.reps, f.h_chi_ctx.get()), f["d2"]);
}

TEST(Theta, AllSixGeneratorsMapToNamedCovariants) {
  const auto& f = fx();
  for (int k = 1; k <= 6; ++k) {
    const std::string r = "r" + std::to_string(k);
    EXPECT_EQ(theta(f[r], 1, f.rho, f.reps), f["c" + std::to_string(k)]) << r;
    EXPECT_EQ(theta(f[r], 2, f.rho, f.reps), f["d" + std::to_string(k)]) << r;
  }
}

TEST(Theta, RejectsNonRelativeInvariant) {
  EXPECT_THROW(theta(P("x2"), 1, fx().rho, fx().reps, fx().h_chi_ctx.get()), DomainError);
}

TEST(Theta, IsALinear) {
  const auto& f = fx();
  const GCElement a = f["a1"] * f["a2"] + f["a3"].scaled(2);
  for (const auto& r : f.relative_names)
    for (int i = 1; i <= 2; ++i) EXPECT_EQ(theta(a * f[r], i, f.rho, f.reps), a * theta(f[r], i, f.rho, f.reps));
}

TEST(ThetaIso, HoldsToDegree20) {
  const auto r = theta_iso_check(*fx().g_ctx, *fx().h_chi_ctx, *fx().h, fx().reps, 20);
  EXPECT_TRUE(r.ok) << r.detail;
}

TEST(ThetaIso, NonTransversalFails) {
  const std::size_t t = fx().g->index(fx().t);
  EXPECT_FALSE(theta_iso_check(*fx().g_ctx, *fx().h_chi_ctx, *fx().h, {0, t, t}, 4).ok);
}

TEST(ThetaIso, DegreeZeroWindow) { EXPECT_TRUE(theta_iso_check(*fx().g_ctx, *fx().h_chi_ctx, *fx().h, fx().reps, 0).ok); }

TEST(MinimalGenerators, ProfileAndTotal) {
  const MinimalGenerators mg = minimal_algebra_generators(*fx().g_ctx, 20, 3);
  EXPECT_EQ(mg.total(), 14u);
  std::map<Bidegree, std::size_t> prof;
  for (const auto& e : mg.entries) prof[e.bidegree] = e.representatives.size();
  const std::map<Bidegree, std::size_t> expected{{{2, 0}, 1}, {{3, 0}, 1}, {{4, 0}, 1}, {{6, 0}, 1}, {{1, 1}, 1},
                                                 {{2, 1}, 1}, {{3, 1}, 2}, {{4, 1}, 1}, {{5, 1}, 1}, {{1, 2}, 1},
                                                 {{2, 2}, 1}, {{3, 2}, 1}, {{0, 3}, 1}};
  EXPECT_EQ(prof, expected);
}

TEST(MinimalGenerators, SmallWindowAlreadyComplete) {
  EXPECT_EQ(minimal_algebra_generators(*fx().g_ctx, 6, 3).total(), 14u);
}

TEST(MinimalGenerators, NamedElementsSpanComplements) {
  const auto& f = fx();
  const auto named = f.elements(f.minimal_names);
  for (const auto& e : minimal_algebra_generators(*f.g_ctx, 8, 3).entries) {
    std::vector<GCElement> cands;
    for (const auto& g : named)
      if (g.bidegree() == e.bidegree) cands.push_back(g);
    EXPECT_TRUE(spans_complement(*f.g_ctx, named, e.bidegree, cands)) << e.bidegree.to_string();
  }
}

TEST(MinimalGenerators, AdjoinedD1LeavesNoComplement) {
  const auto& f = fx();
  const Bidegree bd{1, 2};
  const EchelonSpan dec = decomposables(*f.g_ctx, f.elements(f.minimal_names), bd);
  EXPECT_EQ(f.g_ctx->dimension(bd) - dec.dimension(), 1u);
  DenseMatrix m = dec.echelon;
  m.append_row(f.g_ctx->coordinates(bd).coordinates(f["d1"]));
  EXPECT_EQ(rank_of(m), f.g_ctx->dimension(bd));
}

TEST(MinimalGenerators, EachNamedGeneratorIsIndecomposable) {
  const auto& f = fx();
  const auto named = f.elements(f.minimal_names);
  for (const auto& g : named) EXPECT_FALSE(in_decomposables(*f.g_ctx, named, g)) << to_string(g);
}

TEST(MinimalGenerators, ObsoleteCovariants) {
  const auto named = fx().elements(fx().minimal_names);
  for (const char* n : {"d4", "d5", "d6"}) EXPECT_TRUE(is_obsolete(*fx().g_ctx, named, fx()[n])) << n;
  for (const auto& g : named) EXPECT_FALSE(is_obsolete(*fx().g_ctx, named, g)) << to_string(g);
}

TEST(Relations, ReferenceRelationsHoldExactly) {
  const auto& f = fx();
  const std::vector<std::string> dn{"d1", "d2", "d3", "d4", "d5", "d6"};
  for (const auto& rel : f.expect->relations) {
    const RelationRecord r = relation_extract(f[rel.first] * f[rel.second], f.elements(dn), *f.hsop, rel.left);
    EXPECT_TRUE(r.in_span && r.unique && r.residual_zero) << rel.left;
    std::map<std::pair<std::vector<unsigned>, std::string>, long long> got, want;
    for (const auto& t : r.terms) got[{t.a_exponents, dn[t.generator]}] = t.coefficient.centered();
    for (const auto& t : rel.right) want[{t.a_exponents, t.generator}] = t.coefficient;
    EXPECT_EQ(got, want) << rel.left << " = " << to_string(r, *f.hsop, dn);
  }
}

TEST(Relations, C1SquaredIsZero) {
  const RelationRecord r = relation_extract(fx()["c1"] * fx()["c1"], fx().elements({"d1", "d2"}), *fx().hsop);
  EXPECT_TRUE(r.in_span && r.residual_zero);
  EXPECT_TRUE(r.terms.empty());
}

TEST(Relations, NotInSpan) {
  const RelationRecord r = relation_extract(fx()["d3"], fx().elements({"d1", "d2"}), *fx().hsop);
  EXPECT_FALSE(r.in_span);
  EXPECT_EQ(to_string(r, *fx().hsop, {"d1", "d2"}), "not in span");
}
