#include <gtest/gtest.h>

#include <random>

#include "hammock_gen.hpp"
#include "simploc/hammock.hpp"
#include "suite.hpp"
#include "test_util.hpp"

using namespace simploc;

namespace {

Hammock row_hammock(const FiniteCategory& c, Index source, std::vector<Direction> dirs, std::vector<Index> maps) {
  Hammock h;
  h.source = source;
  h.width = static_cast<int>(maps.size());
  h.directions = std::move(dirs);
  std::vector<Index> nodes{source};
  for (int i = 0; i < h.width; ++i)
    nodes.push_back(h.directions[i] == Direction::Forward ? c.cod(maps[i]) : c.dom(maps[i]));
  h.sink = nodes.back();
  h.nodes = {nodes};
  h.horizontal = {maps};
  return h;
}

RelativeSimplicialCategory constant_relscat(const RelativeCategory& r, int truncation) {
  auto rs = minimal_relative(promote(r.cat, truncation));
  for (Index w : r.weq.members()) {
    Index x = r.cat.dom(w), y = r.cat.cod(w);
    auto hom = r.cat.hom(x, y);
    Index pos = static_cast<Index>(std::find(hom.begin(), hom.end(), w) - hom.begin());
    for (int k = 0; k <= truncation; ++k) rs.sub[rs.ambient.pair(x, y)][k].insert(pos);
  }
  close_subobject(rs);
  return rs;
}

/// Oracle word for a level-0 hammock.
ZigzagWord word_of(const Hammock& h) {
  ZigzagWord w;
  for (int c = 0; c < h.width; ++c)
    w.push_back(h.directions[c] == Direction::Forward ? forward_letter(h.horizontal[0][c])
                                                       : backward_letter(h.horizontal[0][c]));
  return w;
}

}  // namespace

TEST(Reduce, Examples) {
  auto c = cats::chain3();
  Index f = c.morphism("f"), g = c.morphism("g");
  auto id = identity_hammock(c, c.object("X"), 0);
  EXPECT_EQ(*reduce(c, id), id);

  auto fg = row_hammock(c, c.object("X"), {Direction::Forward, Direction::Forward}, {f, g});
  auto merged = reduce(c, fg);
  ASSERT_TRUE(merged);
  EXPECT_EQ(merged->width, 1);
  EXPECT_EQ(merged->horizontal[0][0], c.morphism("gf"));

  Index idy = c.identity(c.object("Y"));
  auto padded = row_hammock(c, c.object("X"), {Direction::Forward, Direction::Forward, Direction::Forward}, {f, idy, g});
  auto left = reduce(c, padded, ReductionOrder::Leftmost);
  auto right = reduce(c, padded, ReductionOrder::Rightmost);
  ASSERT_TRUE(left && right);
  EXPECT_EQ(*left, *right);
  EXPECT_EQ(left->width, 1);
  EXPECT_EQ(left->horizontal[0][0], c.morphism("gf"));

  auto back = row_hammock(c, c.object("Y"), {Direction::Backward, Direction::Forward}, {f, c.identity(c.object("X"))});
  auto r = reduce(c, back);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->width, 1);
  EXPECT_EQ(r->sink, c.object("X"));
}

TEST(Reduce, ConfluenceOnRandomGrids) {
  std::mt19937 rng(11);
  auto cats_ = testutil::generated_categories(12, 3, 6, 5);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto r = testutil::everything_weak(cats_[trial % cats_.size()]);
    int width = 1 + static_cast<int>(rng() % 5), height = static_cast<int>(rng() % 3);
    auto h = testutil::random_hammock(rng, r, width, height);
    ASSERT_TRUE(h);
    ASSERT_TRUE(validate_hammock(r, *h).ok());
    auto a = reduce(r.cat, *h, ReductionOrder::Leftmost);
    auto b = reduce(r.cat, *h, ReductionOrder::Rightmost);
    ASSERT_TRUE(a && b);
    EXPECT_EQ(*a, *b);
    EXPECT_TRUE(is_reduced(r.cat, *a));
    EXPECT_TRUE(validate_hammock(r, *a).ok());
    ++checked;
  }
  EXPECT_EQ(checked, 300);
}

TEST(Hammock, ValidationCatchesBrokenGrids) {
  auto r = with_weq(cats::walking_arrow("w"), {"w"});
  auto h = arrow_hammock(r.cat, r.cat.morphism("w"), 1);
  EXPECT_TRUE(validate_hammock(r, h).ok());
  h.directions[0] = Direction::Backward;
  EXPECT_FALSE(validate_hammock(r, h).ok());

  auto plain = minimal_relative(cats::walking_arrow("f"));
  auto b = row_hammock(plain.cat, 1, {Direction::Backward}, {plain.cat.morphism("f")});
  EXPECT_EQ(validate_hammock(plain, b).count("hammock-weq"), 1u);
}

TEST(Compose, Examples) {
  auto r = with_weq(cats::chain3(), {"f"});
  const auto& c = r.cat;
  auto f = arrow_hammock(c, c.morphism("f"), 0), g = arrow_hammock(c, c.morphism("g"), 0);
  EXPECT_EQ(*compose_hammocks(c, f, identity_hammock(c, c.object("X"), 0)), f);
  EXPECT_EQ(*compose_hammocks(c, identity_hammock(c, c.object("Y"), 0), f), f);
  EXPECT_EQ(*compose_hammocks(c, g, f), arrow_hammock(c, c.morphism("gf"), 0));
  EXPECT_THROW(concatenate(f, g), InputError);

  // [w] after [w^-1] lands in the component of the identity.
  auto walk = with_weq(cats::walking_arrow("w"), {"w"});
  auto loc = hammock_localization(walk, 1, 4);
  Index w = walk.cat.morphism("w");
  auto inv = row_hammock(walk.cat, 1, {Direction::Backward}, {w});
  auto both = compose_hammocks(walk.cat, arrow_hammock(walk.cat, w, 0), inv);
  ASSERT_TRUE(both);
  const auto& yy = loc.space(1, 1);
  auto comps = pi0(yy.simplices);
  Index s = yy.find(0, hammock_key(*both));
  ASSERT_NE(s, kNone);
  EXPECT_EQ(comps.label[s], comps.label[yy.find(0, hammock_key(identity_hammock(walk.cat, 1, 0)))]);
}

TEST(MappingSpace, Examples) {
  auto plain = minimal_relative(cats::chain3());
  for (Index x = 0; x < 3; ++x)
    for (Index y = 0; y < 3; ++y) {
      auto m = mapping_space(plain, x, y, 2, 3);
      EXPECT_EQ(m.simplices.size(0), static_cast<Index>(plain.cat.hom(x, y).size()));
      EXPECT_EQ(pi0(m.simplices).classes, m.simplices.size(0));
      EXPECT_EQ(m.verdict, Stabilization::Stable);
    }

  auto walk = with_weq(cats::walking_arrow("w"), {"w"});
  auto yx = mapping_space(walk, 1, 0, 1, 4);
  auto inv = row_hammock(walk.cat, 1, {Direction::Backward}, {walk.cat.morphism("w")});
  EXPECT_NE(yx.find(0, hammock_key(inv)), kNone);

  auto xx = mapping_space(walk, 0, 0, 1, 4);
  EXPECT_EQ(pi0(xx.simplices).classes, 1);
  EXPECT_EQ(xx.verdict, Stabilization::Stable);
  auto oracle = oracle_localized_homset(walk, 0, 0, 8);
  EXPECT_TRUE(oracle.determined);
  EXPECT_EQ(oracle.classes.size(), 1u);

  EXPECT_THROW(mapping_space(walk, 0, 0, 0, 2), InputError);
}

TEST(MappingSpace, WidthOneIsBoundLimitedAcrossObjects) {
  auto walk = with_weq(cats::walking_arrow("w"), {"w"});
  EXPECT_EQ(mapping_space(walk, 0, 1, 1, 1).verdict, Stabilization::BoundLimited);
  EXPECT_EQ(mapping_space(walk, 0, 1, 1, 3).verdict, Stabilization::Stable);
}

TEST(MappingSpace, SimplicialIdentitiesOnSuite) {
  for (const auto& [name, r] : testutil::relative_suite()) {
    auto loc = hammock_localization(r, 2, 3);
    for (Index x = 0; x < r.cat.object_count(); ++x)
      for (Index y = 0; y < r.cat.object_count(); ++y)
        EXPECT_TRUE(validate_simplicial_set(loc.space(x, y).simplices).ok()) << name;
    EXPECT_TRUE(validate_scat(loc.scat, {false, true}).ok()) << name;
  }
}

TEST(MappingSpace, AgreesWithWordOracle) {
  for (const auto& [name, r] : testutil::relative_suite()) {
    auto loc = hammock_localization(r, 1, 4);
    for (Index x = 0; x < r.cat.object_count(); ++x) {
      ZigzagSaturation words(r, x, 8);
      for (Index y = 0; y < r.cat.object_count(); ++y) {
        const auto& m = loc.space(x, y);
        auto oracle = oracle_localized_homset(r, x, y, 8);
        if (m.verdict != Stabilization::Stable || !oracle.determined) continue;
        auto comps = pi0(m.simplices);
        std::vector<Index> ids;
        for (const auto& key : m.keys[0]) {
          Index id = words.find(word_of(hammock_from_key(r.cat, key)));
          ASSERT_NE(id, kNone) << name;
          ids.push_back(id);
        }
        EXPECT_EQ(words.partition_of(ids), comps) << name << " " << x << "->" << y;
        EXPECT_EQ(static_cast<std::size_t>(comps.classes), oracle.classes.size()) << name << " " << x << "->" << y;
      }
    }
  }
}

TEST(Localization, Examples) {
  auto plain = minimal_relative(cats::chain3());
  auto loc = hammock_localization(plain, 2, 3);
  auto p = promote(plain.cat, 2);
  for (Index x = 0; x < 3; ++x)
    for (Index y = 0; y < 3; ++y)
      for (int k = 0; k <= 2; ++k) EXPECT_EQ(loc.scat.hom(x, y).size(k), p.hom(x, y).size(k));
  EXPECT_EQ(loc.bounds.verdict, Stabilization::Stable);
  EXPECT_EQ(find_equivalence(homotopy_category(loc.scat), plain.cat, 100000).outcome, SearchOutcome::Found);

  auto t = hammock_localization(minimal_relative(cats::terminal()), 2, 3);
  EXPECT_EQ(t.scat.object_count(), 1);
  for (int k = 0; k <= 2; ++k) EXPECT_EQ(t.scat.hom(0, 0).size(k), 1);

  auto walk = hammock_localization(with_weq(cats::walking_arrow("w"), {"w"}), 1, 4);
  EXPECT_EQ(walk.bounds.verdict, Stabilization::Stable);
  auto ho = homotopy_category(walk.scat);
  EXPECT_EQ(find_equivalence(ho, cats::walking_isomorphism(), 100000).outcome, SearchOutcome::Found);
}

TEST(Localization, WeakEquivalencesBecomeIsomorphisms) {
  for (const auto& [name, r] : testutil::relative_suite()) {
    auto loc = hammock_localization(r, 1, 4);
    if (loc.bounds.verdict != Stabilization::Stable) continue;
    auto ho = homotopy_data(loc.scat);
    auto e = embed(loc);
    for (Index w : r.weq.members()) {
      Index x = r.cat.dom(w), y = r.cat.cod(w);
      auto hom = r.cat.hom(x, y);
      Index pos = static_cast<Index>(std::find(hom.begin(), hom.end(), w) - hom.begin());
      std::size_t p = loc.scat.pair(x, y);
      Index s = e.hom_maps[p](0, pos);
      EXPECT_TRUE(is_isomorphism(ho.cat, ho.morphism[p][ho.components[p].label[s]])) << name;
    }
  }
}

TEST(Embed, Examples) {
  auto r = with_weq(cats::chain3(), {"f"});
  auto loc = hammock_localization(r, 2, 3);
  auto p = promote(r.cat, 2);
  auto e = embed(loc);
  EXPECT_TRUE(validate_simplicial_functor(p, loc.scat, e).ok());
  Index x = r.cat.object("X");
  EXPECT_EQ(loc.space(x, x).keys[0][e.hom_maps[p.pair(x, x)](0, 0)], hammock_key(identity_hammock(r.cat, x, 0)));

  auto plain = minimal_relative(cats::span());
  auto ploc = hammock_localization(plain, 2, 3);
  auto pe = embed(ploc);
  auto pp = promote(plain.cat, 2);
  EXPECT_EQ(check_dk(pp, ploc.scat, pe, 100000).verdict, Verdict::Pass);
  for (std::size_t pair = 0; pair < pe.hom_maps.size(); ++pair)
    for (int k = 0; k <= 2; ++k) {
      auto level = pe.hom_maps[pair].levels[k];
      std::sort(level.begin(), level.end());
      EXPECT_EQ(std::adjacent_find(level.begin(), level.end()), level.end());
    }
}

TEST(RelscatLocalization, Examples) {
  auto c = cats::chain3();
  auto rs = minimal_relative(promote(c, 1));
  auto out = hammock_localization_relscat(rs, 1, 2);
  for (Index x = 0; x < 3; ++x)
    for (Index y = 0; y < 3; ++y)
      for (int k = 0; k <= 1; ++k) EXPECT_EQ(out.scat.hom(x, y).size(k), static_cast<Index>(c.hom(x, y).size()));
  EXPECT_EQ(find_equivalence(homotopy_category(out.scat), c, 100000).outcome, SearchOutcome::Found);

  auto t = hammock_localization_relscat(minimal_relative(promote(cats::terminal(), 1)), 1, 2);
  EXPECT_EQ(t.scat.hom(0, 0).size(0), 1);
  EXPECT_EQ(t.scat.hom(0, 0).size(1), 1);
}

TEST(RelscatLocalization, ConstantInputMatchesDirectLocalization) {
  for (const auto& [name, r] : testutil::relative_suite()) {
    auto direct = hammock_localization(r, 1, 3);
    auto rs = constant_relscat(r, 1);
    auto diag = hammock_localization_relscat(rs, 1, 3);
    EXPECT_TRUE(validate_scat(diag.scat, {false, true}).ok()) << name;
    for (Index x = 0; x < r.cat.object_count(); ++x)
      for (Index y = 0; y < r.cat.object_count(); ++y)
        for (int k = 0; k <= 1; ++k) EXPECT_EQ(diag.scat.hom(x, y).size(k), direct.scat.hom(x, y).size(k)) << name;
    auto emb = relscat_embedding(rs, diag);
    EXPECT_TRUE(validate_simplicial_functor(rs.ambient, diag.scat, emb).ok()) << name;
  }
}

TEST(RelscatLocalization, LocalizedEmbeddingIsWellDefined) {
  auto r = with_weq(cats::walking_arrow("w"), {"w"});
  auto loc = hammock_localization(r, 1, 2);
  auto rs = localization_with_weq(loc);
  auto rep = validate_relscat(rs, {false, true});
  EXPECT_TRUE(rep.ok()) << (rep.ok() ? "" : rep.violations[0].kind + ": " + rep.violations[0].message);
  auto target = hammock_localization_relscat(rs, 1, 2);
  auto lc = localized_embedding(loc, target);
  EXPECT_TRUE(validate_simplicial_functor(loc.scat, target.scat, lc).ok());
}
