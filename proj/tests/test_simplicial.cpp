#include <gtest/gtest.h>

#include "simploc/simplicial.hpp"
#include "test_util.hpp"

using namespace simploc;

namespace {

/// Simplicial subset of the standard k-simplex consisting of the monotone
/// maps [n] -> [k] whose image has at most `dim` + 1 points.
TruncatedSimplicialSet simplex_skeleton(int k, int dim, int truncation) {
  TruncatedSimplicialSet x(truncation);
  std::vector<std::vector<SimplicialOperator>> level(truncation + 1);
  auto image_size = [](const SimplicialOperator& op) {
    std::set<int> s(op.images.begin(), op.images.end());
    return static_cast<int>(s.size());
  };
  for (int n = 0; n <= truncation; ++n)
    for (const auto& op : monotone_maps(n, k))
      if (image_size(op) <= dim + 1) {
        level[n].push_back(op);
        x.add_simplex(n, format_operator(op));
      }
  for (int n = 0; n <= truncation; ++n)
    for (Index s = 0; s < x.size(n); ++s) {
      for (int i = 0; n > 0 && i <= n; ++i)
        x.set_face(n, i, s, *x.find(n - 1, format_operator(compose_operators(SimplicialOperator::coface(n, i), level[n][s]))));
      for (int i = 0; n < truncation && i <= n; ++i)
        x.set_degeneracy(n, i, s,
                         *x.find(n + 1, format_operator(compose_operators(SimplicialOperator::codegeneracy(n, i), level[n][s]))));
    }
  return x;
}

std::vector<FiniteCategory> small_suite() {
  auto v = testutil::generated_categories(12, 4, 8, 101);
  v.push_back(cats::walking_arrow());
  v.push_back(cats::walking_isomorphism());
  v.push_back(cats::cyclic_group(3));
  v.push_back(cats::span());
  return v;
}

}  // namespace

TEST(Operators, ComposeExamples) {
  auto q = SimplicialOperator::coface(2, 0);
  EXPECT_EQ(compose_operators(q, SimplicialOperator::identity(2)), q);
  EXPECT_EQ(compose_operators(SimplicialOperator::identity(1), q), q);

  auto d0_01 = SimplicialOperator{0, 1, {1}};
  auto d0_12 = SimplicialOperator{1, 2, {1, 2}};
  EXPECT_EQ(compose_operators(d0_01, d0_12), (SimplicialOperator{0, 2, {2}}));

  // Codegeneracy [1] -> [0] followed by the coface [0] -> [1] hitting 1.
  auto s = compose_operators(SimplicialOperator::codegeneracy(0, 0), SimplicialOperator::coface(1, 0));
  std::vector<int> expected;
  for (int v : SimplicialOperator::codegeneracy(0, 0).images) expected.push_back(SimplicialOperator::coface(1, 0).images[v]);
  EXPECT_EQ(s.images, expected);
  EXPECT_EQ(s.images, (std::vector<int>{1, 1}));

  EXPECT_THROW(compose_operators(SimplicialOperator::identity(1), SimplicialOperator::identity(2)), InputError);
}

TEST(Operators, CompositionIsAssociative) {
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b)
      for (int c = 0; c <= 2; ++c)
        for (int d = 0; d <= 2; ++d)
          for (const auto& p : monotone_maps(a, b))
            for (const auto& q : monotone_maps(b, c))
              for (const auto& r : monotone_maps(c, d))
                EXPECT_EQ(compose_operators(compose_operators(p, q), r), compose_operators(p, compose_operators(q, r)));
}

TEST(Operators, MonotoneMapCountIsBinomial) {
  auto binom = [](int n, int k) {
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  for (int m = 0; m <= 4; ++m)
    for (int n = 0; n <= 4; ++n) EXPECT_EQ(static_cast<long>(monotone_maps(m, n).size()), binom(m + n + 1, m + 1));
}

TEST(Nerve, Examples) {
  auto t = nerve(cats::terminal(), 2);
  for (int n = 0; n <= 2; ++n) EXPECT_EQ(t.size(n), 1);

  auto a = nerve(cats::walking_arrow(), 1);
  EXPECT_EQ(a.size(0), 2);
  EXPECT_EQ(a.size(1), 3);

  auto d = nerve(cats::discrete(2), 2);
  for (int n = 0; n <= 2; ++n) EXPECT_EQ(d.size(n), 2);
  for (int n = 1; n <= 2; ++n)
    for (bool deg : d.degenerate(n)) EXPECT_TRUE(deg);
}

TEST(Nerve, RejectsPartialTables) {
  FiniteCategoryBuilder b;
  Index x = b.add_object("X"), y = b.add_object("Y"), z = b.add_object("Z");
  b.add_morphism("f", x, y);
  b.add_morphism("g", y, z);
  EXPECT_THROW(nerve(b.build(), 2), InputError);
}

TEST(Nerve, SimplicialIdentitiesHold) {
  for (const auto& c : small_suite())
    for (int n = 0; n <= 3; ++n) {
      auto report = validate_simplicial_set(nerve(c, n));
      EXPECT_TRUE(report.ok()) << (report.ok() ? "" : report.violations.front().message);
    }
}

TEST(Nerve, OperatorActionMatchesDirectChains) {
  for (const auto& c : small_suite()) {
    const int top = 3;
    auto x = nerve(c, top);
    for (int n = 0; n <= top; ++n)
      for (Index s = 0; s < x.size(n); ++s) {
        // vertices of the chain
        std::vector<Index> chain, verts;
        if (n == 0) {
          verts.push_back(s);
        } else {
          std::string name = x.name(n, s);
          std::size_t start = 0;
          for (;;) {
            auto bar = name.find('|', start);
            chain.push_back(c.morphism(name.substr(start, bar == std::string::npos ? std::string::npos : bar - start)));
            if (bar == std::string::npos) break;
            start = bar + 1;
          }
          verts.push_back(c.dom(chain[0]));
          for (Index m : chain) verts.push_back(c.cod(m));
        }
        auto path = [&](int i, int j) {
          Index m = c.identity(verts[i]);
          for (int k = i; k < j; ++k) m = c.compose(chain[k], m);
          return m;
        };
        for (int m = 0; m <= top; ++m)
          for (const auto& op : monotone_maps(m, n)) {
            std::string expected;
            if (m == 0) {
              expected = c.object_name(verts[op.images[0]]);
            } else {
              for (int i = 0; i < m; ++i) expected += (i ? "|" : "") + c.morphism_name(path(op.images[i], op.images[i + 1]));
            }
            EXPECT_EQ(x.name(m, x.act(op, s)), expected);
          }
      }
  }
}

TEST(Simplicial, PresheafLaw) {
  std::vector<TruncatedSimplicialSet> sets{nerve(cats::linear_order(3), 3), nerve(cats::cyclic_group(2), 3),
                                           simplex_skeleton(3, 1, 3), simplex_skeleton(2, 2, 3)};
  for (const auto& x : sets) {
    const int top = x.truncation();
    for (int a = 0; a <= top; ++a)
      for (int b = 0; b <= top; ++b)
        for (int c = 0; c <= top; ++c)
          for (const auto& p : monotone_maps(a, b))
            for (const auto& q : monotone_maps(b, c))
              for (Index s = 0; s < x.size(c); ++s)
                EXPECT_EQ(x.act(compose_operators(p, q), s), x.act(p, x.act(q, s)));
    for (int n = 0; n <= top; ++n)
      for (Index s = 0; s < x.size(n); ++s) EXPECT_EQ(x.act(SimplicialOperator::identity(n), s), s);
  }
}

TEST(Simplicial, ValidatorCatchesBrokenFace) {
  auto x = simplex_skeleton(2, 2, 2);
  ASSERT_TRUE(validate_simplicial_set(x).ok());
  Index top = *x.find(2, "[0,1,2]");
  x.set_face(2, 0, top, x.face(2, 1, top));
  EXPECT_FALSE(validate_simplicial_set(x).ok());
  EXPECT_GT(validate_simplicial_set(x).count("simplicial-identity"), 0u);
}

TEST(Pi0, Examples) {
  auto disc = discrete_simplicial_set({"a", "b", "c"}, 2);
  EXPECT_EQ(pi0(disc).classes, 3);
  EXPECT_EQ(pi0(nerve(cats::walking_arrow(), 1)).classes, 1);
  auto sum = cats::coproduct(cats::chain3(), cats::span());
  EXPECT_EQ(pi0(nerve(sum, 1)).classes, pi0(nerve(cats::chain3(), 1)).classes + pi0(nerve(cats::span(), 1)).classes);
  EXPECT_THROW(pi0(discrete_simplicial_set({"a"}, 0)), InputError);
}

TEST(Pi0, MatchesConnectivityOfCategory) {
  for (const auto& c : small_suite()) {
    // Direct graph search on objects.
    std::vector<int> comp(c.object_count(), -1);
    int count = 0;
    for (Index o = 0; o < c.object_count(); ++o) {
      if (comp[o] != -1) continue;
      std::vector<Index> stack{o};
      comp[o] = count;
      while (!stack.empty()) {
        Index v = stack.back();
        stack.pop_back();
        for (Index m = 0; m < c.morphism_count(); ++m) {
          Index other = c.dom(m) == v ? c.cod(m) : c.cod(m) == v ? c.dom(m) : kNone;
          if (other != kNone && comp[other] == -1) {
            comp[other] = count;
            stack.push_back(other);
          }
        }
      }
      ++count;
    }
    auto p = pi0(nerve(c, 1));
    EXPECT_EQ(p.classes, count);
    for (Index a = 0; a < c.object_count(); ++a)
      for (Index b = 0; b < c.object_count(); ++b) EXPECT_EQ(p.label[a] == p.label[b], comp[a] == comp[b]);
  }
}

TEST(Homology, Examples) {
  for (const auto& c : {cats::terminal(), cats::linear_order(3), cats::chain3(), cats::walking_arrow()}) {
    auto h = homology(nerve(c, 3));
    ASSERT_EQ(h.groups.size(), 3u);
    EXPECT_EQ(h.groups[0].free_rank, 1u);
    for (const auto& g : h.groups) EXPECT_TRUE(g.torsion.empty());
    for (std::size_t k = 1; k < h.groups.size(); ++k) EXPECT_EQ(h.groups[k].free_rank, 0u);
  }
  auto two = homology(discrete_simplicial_set({"a", "b"}, 2));
  EXPECT_EQ(two.groups[0].free_rank, 2u);

  auto circle = homology(simplex_skeleton(2, 1, 2));
  ASSERT_EQ(circle.groups.size(), 2u);
  EXPECT_EQ(circle.groups[0].free_rank, 1u);
  EXPECT_EQ(circle.groups[1].free_rank, 1u);
  EXPECT_TRUE(circle.groups[1].torsion.empty());
}

TEST(Homology, CyclicGroupNerveHasTorsion) {
  // B(Z/2): H_1 = Z/2, H_2 = 0.
  auto h = homology(nerve(cats::cyclic_group(2), 3));
  EXPECT_EQ(h.groups[1].free_rank, 0u);
  ASSERT_EQ(h.groups[1].torsion.size(), 1u);
  EXPECT_EQ(h.groups[1].torsion[0], 2);
  EXPECT_EQ(h.groups[2].free_rank, 0u);
  EXPECT_TRUE(h.groups[2].torsion.empty());
}

TEST(Homology, DegreeZeroRankCountsComponents) {
  for (const auto& c : small_suite()) {
    auto x = nerve(c, 2);
    auto h = homology(x);
    EXPECT_EQ(h.groups[0].free_rank, static_cast<std::size_t>(pi0(x).classes));
    EXPECT_TRUE(h.groups[0].torsion.empty());
  }
}

TEST(Smith, DiagonalAndTorsion) {
  SparseIntMatrix m(2, 2);
  m.add(0, 0, 2);
  m.add(1, 1, 3);
  auto r = smith_normal_form(m);
  EXPECT_EQ(r.rank, 2u);
  ASSERT_EQ(r.torsion.size(), 1u);
  EXPECT_EQ(r.torsion[0], 6);

  SparseIntMatrix z(3, 3);
  z.add(0, 0, 2);
  z.add(0, 1, 4);
  z.add(1, 0, 4);
  z.add(1, 1, 8);
  z.add(2, 2, 1);
  auto rz = smith_normal_form(z);
  EXPECT_EQ(rz.rank, 2u);  // the 2x2 block has determinant 0
  ASSERT_EQ(rz.torsion.size(), 1u);
  EXPECT_EQ(rz.torsion[0], 2);
}

TEST(Nerve, Functoriality) {
  auto a = cats::chain3();
  auto b = cats::linear_order(3);
  auto t = cats::terminal();
  // F: chain3 -> linear_order(3), G: linear_order(3) -> terminal
  CatFunctor f{{0, 1, 2}, {}};
  for (Index m = 0; m < a.morphism_count(); ++m) {
    Index img = kNone;
    for (Index n : b.hom(f.object_map[a.dom(m)], f.object_map[a.cod(m)])) img = n;
    f.morphism_map.push_back(img);
  }
  ASSERT_TRUE(validate_functor(a, b, f).ok());
  CatFunctor g{{0, 0, 0}, std::vector<Index>(b.morphism_count(), 0)};
  ASSERT_TRUE(validate_functor(b, t, g).ok());
  auto na = nerve(a, 2), nb = nerve(b, 2), nt = nerve(t, 2);
  auto nf = nerve_map(a, b, f, na, nb), ng = nerve_map(b, t, g, nb, nt);
  auto ngf = nerve_map(a, t, compose_functors(g, f), na, nt);
  EXPECT_TRUE(validate_simplicial_map(na, nb, nf).ok());
  EXPECT_EQ(compose_maps(ng, nf).levels, ngf.levels);
}

TEST(Diagonal, Examples) {
  // Constant in the outer direction.
  auto x = nerve(cats::linear_order(2), 2);
  BisimplicialSet constant;
  for (int p = 0; p <= 2; ++p) constant.columns.push_back(x);
  constant.faces.resize(3);
  constant.degeneracies.resize(3);
  for (int p = 0; p <= 2; ++p) {
    for (int i = 0; p > 0 && i <= p; ++i) constant.faces[p].push_back(identity_map(x));
    for (int i = 0; p < 2 && i <= p; ++i) constant.degeneracies[p].push_back(identity_map(x));
  }
  auto d = diagonal(constant, 2);
  EXPECT_TRUE(validate_simplicial_set(d).ok());
  for (int n = 0; n <= 2; ++n) {
    ASSERT_EQ(d.size(n), x.size(n));
    for (Index s = 0; s < x.size(n); ++s) {
      for (int i = 0; n > 0 && i <= n; ++i) EXPECT_EQ(d.face(n, i, s), x.face(n, i, s));
      for (int i = 0; n < 2 && i <= n; ++i) EXPECT_EQ(d.degeneracy(n, i, s), x.degeneracy(n, i, s));
    }
  }

  // Point everywhere.
  auto pt = discrete_simplicial_set({"*"}, 2);
  BisimplicialSet point{{pt, pt, pt}, {{}, {identity_map(pt), identity_map(pt)},
                                       {identity_map(pt), identity_map(pt), identity_map(pt)}},
                        {{identity_map(pt)}, {identity_map(pt), identity_map(pt)}, {}}};
  auto dp = diagonal(point, 2);
  for (int n = 0; n <= 2; ++n) EXPECT_EQ(dp.size(n), 1);

  // Nerve in the outer direction, discrete in the inner direction.
  BisimplicialSet outer;
  for (int p = 0; p <= 2; ++p) {
    std::vector<std::string> pts;
    for (Index s = 0; s < x.size(p); ++s) pts.push_back(x.name(p, s));
    outer.columns.push_back(discrete_simplicial_set(pts, 2));
  }
  outer.faces.resize(3);
  outer.degeneracies.resize(3);
  auto constant_map = [](std::vector<Index> images, int levels) {
    SimplicialMap f;
    for (int n = 0; n <= levels; ++n) f.levels.push_back(images);
    return f;
  };
  for (int p = 0; p <= 2; ++p) {
    for (int i = 0; p > 0 && i <= p; ++i) {
      std::vector<Index> img;
      for (Index s = 0; s < x.size(p); ++s) img.push_back(x.face(p, i, s));
      outer.faces[p].push_back(constant_map(img, 2));
    }
    for (int i = 0; p < 2 && i <= p; ++i) {
      std::vector<Index> img;
      for (Index s = 0; s < x.size(p); ++s) img.push_back(x.degeneracy(p, i, s));
      outer.degeneracies[p].push_back(constant_map(img, 2));
    }
  }
  auto dn = diagonal(outer, 2);
  EXPECT_TRUE(validate_simplicial_set(dn).ok());
  for (int n = 0; n <= 2; ++n)
    for (Index s = 0; s < x.size(n); ++s) {
      EXPECT_EQ(dn.name(n, s), x.name(n, s));
      for (int i = 0; n > 0 && i <= n; ++i) EXPECT_EQ(dn.face(n, i, s), x.face(n, i, s));
    }
  EXPECT_THROW(diagonal(outer, 3), InputError);
}
