#include <gtest/gtest.h>

#include <random>

#include "diffinv/fixtures.hpp"
#include "diffinv/grouprep.hpp"

using namespace diffinv;

namespace {
const Fixture& fx() {
  static const Fixture f = build_fixture();
  return f;
}
GCElement P(const char* s) { return parse_element(s, 3, 3); }
}  // namespace

TEST(Closure, BinaryTetrahedralHasOrder24) { EXPECT_EQ(fx().g->order(), 24u); }

TEST(Closure, ImageHasOrder12) { EXPECT_EQ(fx().rho.image_group()->order(), 12u); }

TEST(Closure, TrivialGroup) { EXPECT_EQ(make_group({FpMatrix::identity(3, 3)})->order(), 1u); }

TEST(Closure, SingularGeneratorRejected) { EXPECT_THROW(make_group({FpMatrix::square({1, 1, 1, 1}, 3)}), DomainError); }

TEST(Closure, QuaternionSubgroup) {
  EXPECT_EQ(fx().h->order(), 8u);
  EXPECT_EQ(fx().hbar->order(), 4u);
  EXPECT_TRUE(is_subgroup(*fx().g, *fx().h));
}

TEST(DualAction, PermutationAndDiagonalAreSelfDual) {
  const FpMatrix rt = FpMatrix::square({0, 1, 0, 0, 0, 1, 1, 0, 0}, 3);
  const FpMatrix ri = FpMatrix::square({1, 0, 0, 0, -1, 0, 0, 0, -1}, 3);
  EXPECT_EQ(dual_action_matrix(rt), rt);
  EXPECT_EQ(dual_action_matrix(ri), ri);
}

TEST(DualAction, Unipotent) {
  EXPECT_EQ(dual_action_matrix(FpMatrix::square({1, 1, 0, 1}, 3)), FpMatrix::square({1, 0, -1, 1}, 3));
}

TEST(ConjugationRep, ImagesInColumnConvention) {
  // images satisfy g v_j = sum_i M(i, j) v_i, so the transpose is the row-convention matrix
  EXPECT_EQ(fx().rho.image_of(fx().t).transpose(), FpMatrix::square({0, 1, 0, 0, 0, 1, 1, 0, 0}, 3));
  EXPECT_EQ(fx().rho.image_of(fx().i), FpMatrix::square({1, 0, 0, 0, -1, 0, 0, 0, -1}, 3));
  EXPECT_EQ(fx().rho.image_of(fx().j), FpMatrix::square({-1, 0, 0, 0, -1, 0, 0, 0, 1}, 3));
}

TEST(ConjugationRep, KernelIsPlusMinusIdentity) {
  const auto k = fx().rho.kernel();
  ASSERT_EQ(k.size(), 2u);
  EXPECT_TRUE(fx().rho.image_of(FpMatrix::identity(2, 3).scaled(-1)).is_identity());
}

TEST(ConjugationRep, DependentBasisRejected) {
  const auto v1 = FpMatrix::square({0, 1, -1, 0}, 3);
  EXPECT_THROW(conjugation_rep(fx().g, {v1, v1, FpMatrix::square({1, -1, -1, -1}, 3)}), DomainError);
}

TEST(Action, TShiftsIndices) {
  EXPECT_EQ(act(fx().rho, fx().g->index(fx().t), P("x1")), P("x2"));
  EXPECT_EQ(act(fx().rho, fx().g->index(fx().t), P("y3")), P("y1"));
}

TEST(Action, ISignsAndProducts) {
  EXPECT_EQ(act(fx().rho, fx().g->index(fx().i), P("x2*x3")), P("x2*x3"));
  EXPECT_EQ(act(fx().rho, fx().g->index(fx().i), P("x2")), P("-x2"));
}

TEST(Action, JNegatesX1) { EXPECT_EQ(act(fx().rho, fx().g->index(fx().j), P("x1")), P("-x1")); }

TEST(Transversal, ThreeCosetsOfH) {
  const auto tr = transversal(*fx().g, *fx().h);
  EXPECT_EQ(tr.representatives.size(), 3u);
  EXPECT_TRUE(is_transversal(*fx().g, *fx().h, fx().reps));
  const std::size_t t = fx().g->index(fx().t);
  EXPECT_FALSE(is_transversal(*fx().g, *fx().h, {0, t, t}));
}

TEST(Transversal, WholeGroupAndCentre) {
  EXPECT_EQ(transversal(*fx().g, *fx().g).representatives, std::vector<std::size_t>({0}));
  const GroupPtr centre = make_group({FpMatrix::identity(2, 3).scaled(-1)});
  EXPECT_EQ(transversal(*fx().g, *centre).representatives.size(), 12u);
}

TEST(Transversal, NonSubgroupRejected) {
  const GroupPtr other = make_group({FpMatrix::square({1, 0, 1, 1}, 5)});
  EXPECT_THROW(transversal(*fx().g, *other), DomainError);
}

TEST(Character, ChiValues) {
  EXPECT_EQ(fx().chi.value_of(fx().i).centered(), 1);
  EXPECT_EQ(fx().chi.value_of(fx().j).centered(), -1);
  EXPECT_EQ(fx().chi.value_of(fx().k).centered(), -1);
  EXPECT_THROW(LinearCharacter::from_generator_values(fx().g, {1, -1}), DomainError);
}

TEST(ModuleIso, StandardPhiIsIsomorphism) {
  const auto r = verify_module_iso(fx().rho, *fx().h, fx().chi, fx().reps, FpMatrix::identity(3, 3));
  EXPECT_TRUE(r.ok) << r.detail;
}

TEST(ModuleIso, FlippedCharacterFailsAtI) {
  const auto chi = LinearCharacter::from_generator_values(fx().h, {-1, -1});
  const auto r = verify_module_iso(fx().rho, *fx().h, chi, fx().reps, FpMatrix::identity(3, 3));
  EXPECT_FALSE(r.ok);
  ASSERT_TRUE(r.witness_generator.has_value());
  EXPECT_EQ(fx().g->generators()[*r.witness_generator], fx().i);
}

TEST(ModuleIso, TrivialModuleOverWholeGroup) {
  const Representation triv(fx().g, std::vector<FpMatrix>(fx().g->order(), FpMatrix::identity(1, 3)));
  const auto r = verify_module_iso(triv, *fx().g, LinearCharacter::trivial(fx().g), {0}, FpMatrix::identity(1, 3));
  EXPECT_TRUE(r.ok) << r.detail;
}

// The action is a left action by algebra automorphisms.
class ActionProperties : public ::testing::Test {
 protected:
  GCElement random_element() {
    std::uniform_int_distribution<int> d(0, 3), c(0, 2);
    GCElement f(3, 3);
    const Bidegree bd{d(rng), d(rng)};
    for (const auto& m : bidegree_basis(bd, 3)) f.add_term(m, c(rng));
    return f;
  }
  std::size_t random_group_element() { return std::uniform_int_distribution<std::size_t>(0, fx().g->order() - 1)(rng); }
  std::mt19937 rng{7};
};

TEST_F(ActionProperties, Composition) {
  for (int n = 0; n < 50; ++n) {
    const std::size_t g = random_group_element(), h = random_group_element();
    const GCElement f = random_element();
    EXPECT_EQ(act(fx().rho, fx().g->product(g, h), f), act(fx().rho, g, act(fx().rho, h, f)));
  }
}

TEST_F(ActionProperties, IdentityActsTrivially) {
  for (int n = 0; n < 20; ++n) {
    const GCElement f = random_element();
    EXPECT_EQ(act(fx().rho, fx().g->identity(), f), f);
  }
}

TEST_F(ActionProperties, Multiplicative) {
  for (int n = 0; n < 50; ++n) {
    const std::size_t g = random_group_element();
    const GCElement a = random_element(), b = random_element();
    EXPECT_EQ(act(fx().rho, g, a * b), act(fx().rho, g, a) * act(fx().rho, g, b));
  }
}

TEST_F(ActionProperties, RepresentationIsHomomorphism) {
  const auto& g = *fx().g;
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t b = 0; b < g.order(); ++b)
      EXPECT_EQ(fx().rho.image(g.product(a, b)), fx().rho.image(a) * fx().rho.image(b));
}
