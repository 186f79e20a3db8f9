#include <gtest/gtest.h>

#include "scat_util.hpp"
#include "simploc/flatten.hpp"
#include "test_util.hpp"

using namespace simploc;
using testutil::classifying_monoid;
using testutil::same_by_names;

namespace {

/// Monotone maps [n] -> [m] by brute force over all functions.
long count_monotone(int n, int m) {
  long total = 0, functions = 1;
  for (int i = 0; i <= n; ++i) functions *= m + 1;
  for (long code = 0; code < functions; ++code) {
    long rest = code;
    int prev = -1;
    bool ok = true;
    for (int i = 0; i <= n; ++i) {
      int v = static_cast<int>(rest % (m + 1));
      rest /= m + 1;
      if (v < prev) ok = false;
      prev = v;
    }
    total += ok;
  }
  return total;
}

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::size_t flat_hom_count(const Flattening& f, Index x1, int n1, Index x2, int n2) {
  return f.rel.cat.hom(f.flat.object(x1, n1), f.flat.object(x2, n2)).size();
}

std::vector<TruncatedSimplicialCategory> count_law_inputs() {
  std::vector<TruncatedSimplicialCategory> out;
  out.push_back(promote(cats::chain3(), 2));
  out.push_back(classifying_monoid(2, 2));
  out.push_back(hammock_localization(minimal_relative(cats::span()), 2, 2).scat);
  for (const auto& c : testutil::generated_categories(3, 3, 5, 41)) out.push_back(promote(c, 2));
  return out;
}

}  // namespace

TEST(Flatten, TerminalCounts) {
  auto f = flatten(promote(cats::terminal(), 1));
  EXPECT_EQ(f.rel.cat.object_count(), 2);
  for (int m = 0; m <= 1; ++m)
    for (int n = 0; n <= 1; ++n) {
      EXPECT_EQ(static_cast<long>(flat_hom_count(f, 0, m, 0, n)), count_monotone(n, m));
      EXPECT_EQ(count_monotone(n, m), binomial(m + n + 1, n + 1));
    }
  EXPECT_EQ(f.rel.weq.count(), static_cast<std::size_t>(f.rel.cat.morphism_count()));
  EXPECT_TRUE(validate_relative(f.rel).ok());
}

TEST(Flatten, CountLaw) {
  for (const auto& a : count_law_inputs()) {
    auto f = flatten(a);
    EXPECT_TRUE(validate_category(f.rel.cat).ok());
    EXPECT_TRUE(validate_relative(f.rel).ok());
    const int top = a.truncation();
    for (Index x = 0; x < a.object_count(); ++x)
      for (Index y = 0; y < a.object_count(); ++y)
        for (int n1 = 0; n1 <= top; ++n1)
          for (int n2 = 0; n2 <= top; ++n2)
            EXPECT_EQ(static_cast<long>(flat_hom_count(f, x, n1, y, n2)),
                      count_monotone(n2, n1) * a.hom(x, y).size(n2));
  }
}

TEST(Flatten, BidIsIdentityPart) {
  auto a = promote(cats::chain3(), 1);
  auto f = flatten(a);
  for (Index m : f.rel.weq.members()) {
    auto [x, n1] = f.flat.base[f.rel.cat.dom(m)];
    auto [y, n2] = f.flat.base[f.rel.cat.cod(m)];
    EXPECT_EQ(x, y);
    (void)n1;
    (void)n2;
  }
  // (id, q2) after (id, q1) is (id, q1 q2).
  Index x = a.object("X");
  auto s = SimplicialOperator::codegeneracy(0, 0);  // [1] -> [0]
  auto d = SimplicialOperator::coface(1, 0);        // [0] -> [1]
  Index up = f.flat.morphism(f.flat.object(x, 0), f.flat.object(x, 1), f.level_morphism[a.pair(x, x)][1][a.identity_at(x, 1)], s);
  Index down = f.flat.morphism(f.flat.object(x, 1), f.flat.object(x, 0), f.level_morphism[a.pair(x, x)][0][a.identity(x)], d);
  ASSERT_NE(up, kNone);
  ASSERT_NE(down, kNone);
  Index loop = f.rel.cat.compose(down, up);
  EXPECT_TRUE(f.rel.is_weq(loop));
  EXPECT_TRUE(f.rel.cat.is_identity(loop));  // s after d is the identity of [0]
}

TEST(Flatten, RejectsInvalidInput) {
  auto a = promote(cats::chain3(), 1);
  a.set_composer([](Index, Index, Index, int, Index, Index) { return Index{7}; });
  EXPECT_THROW(flatten(a), InputError);
}

TEST(Grothendieck, Examples) {
  auto t = grothendieck(constant_diagram(cats::terminal(), 2));
  EXPECT_EQ(t.cat.object_count(), 3);
  for (int m = 0; m <= 2; ++m)
    for (int n = 0; n <= 2; ++n)
      EXPECT_EQ(static_cast<long>(t.cat.hom(t.object(0, m), t.object(0, n)).size()), binomial(m + n + 1, n + 1));

  auto c = cats::chain3();
  auto g = grothendieck(constant_diagram(c, 1));
  EXPECT_TRUE(validate_category(g.cat).ok());
  for (Index x = 0; x < 3; ++x)
    for (Index y = 0; y < 3; ++y)
      for (int m = 0; m <= 1; ++m)
        for (int n = 0; n <= 1; ++n)
          EXPECT_EQ(static_cast<long>(g.cat.hom(g.object(x, m), g.object(y, n)).size()),
                    binomial(m + n + 1, n + 1) * static_cast<long>(c.hom(x, y).size()));

  auto zero = grothendieck(constant_diagram(c, 0));
  EXPECT_EQ(zero.cat.morphism_count(), c.morphism_count());
  EXPECT_EQ(find_equivalence(zero.cat, c, 100000).outcome, SearchOutcome::Found);
}

TEST(Grothendieck, RejectsBrokenDiagram) {
  auto d = constant_diagram(cats::walking_arrow(), 1);
  d.action.at(SimplicialOperator::identity(1)).object_map = {1, 0};
  EXPECT_THROW(grothendieck(d), InputError);
}

TEST(Grothendieck, AgreesWithFlatten) {
  for (const auto& a : count_law_inputs()) {
    auto f = flatten(a);
    auto g = grothendieck(level_diagram(a));
    EXPECT_TRUE(same_by_names(f.rel.cat, g.cat));
  }
}

TEST(Flatten, Functoriality) {
  auto arrow = cats::walking_arrow("f");
  auto chain = cats::chain3();
  auto term = cats::terminal();
  for (const char* target : {"f", "g", "gf"}) {
    CatFunctor f;
    Index t = chain.morphism(target);
    f.object_map = {chain.dom(t), chain.cod(t)};
    f.morphism_map.assign(arrow.morphism_count(), kNone);
    f.morphism_map[arrow.identity(0)] = chain.identity(chain.dom(t));
    f.morphism_map[arrow.identity(1)] = chain.identity(chain.cod(t));
    f.morphism_map[arrow.morphism("f")] = t;
    CatFunctor g{{0, 0, 0}, std::vector<Index>(chain.morphism_count(), term.identity(0))};

    auto a = promote(arrow, 1), b = promote(chain, 1), c = promote(term, 1);
    auto sf = promote_functor(arrow, chain, f, 1), sg = promote_functor(chain, term, g, 1);
    auto fa = flatten(a), fb = flatten(b), fc = flatten(c);
    auto bf = flatten_functor(a, fa, b, fb, sf);
    auto bg = flatten_functor(b, fb, c, fc, sg);
    auto bgf = flatten_functor(a, fa, c, fc, compose_simplicial_functors(b, sg, sf));
    EXPECT_TRUE(validate_relative_functor(fa.rel, fb.rel, RelativeFunctor{bf}).ok());
    auto composite = compose_functors(bg, bf);
    EXPECT_EQ(composite.object_map, bgf.object_map);
    EXPECT_EQ(composite.morphism_map, bgf.morphism_map);
  }
}

TEST(RelativizationUnit, Examples) {
  auto r = with_weq(cats::chain3(), {"f"});
  auto loc = hammock_localization(r, 1, 3);
  auto flat = flatten(loc.scat);
  auto unit = relativization_unit(r, loc, flat);
  EXPECT_TRUE(validate_relative_functor(r, unit.target, unit.functor).ok());
  const auto& f = unit.functor.underlying;
  for (Index x = 0; x < 3; ++x) {
    EXPECT_EQ(f.object_map[x], flat.flat.object(x, 0));
    EXPECT_EQ(f.morphism_map[r.cat.identity(x)], unit.target.cat.identity(f.object_map[x]));
  }
  EXPECT_EQ(unit.target.cat.compose(f.morphism_map[r.cat.morphism("g")], f.morphism_map[r.cat.morphism("f")]),
            f.morphism_map[r.cat.morphism("gf")]);
  EXPECT_TRUE(unit.target.is_weq(f.morphism_map[r.cat.morphism("f")]));
  EXPECT_FALSE(unit.target.is_weq(f.morphism_map[r.cat.morphism("g")]));
}
