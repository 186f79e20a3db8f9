#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "simploc/hammock.hpp"
#include "simploc/relcat.hpp"
#include "simploc/scat.hpp"

namespace simploc {

/// A simplicial diagram of categories truncated at N: a category per level
/// and, for every monotone map q: [m] -> [n] with m, n <= N, a functor
/// q^*: level n -> level m.
struct SimplicialDiagram {
  std::vector<FiniteCategory> levels;
  std::map<SimplicialOperator, CatFunctor> action;

  [[nodiscard]] int truncation() const { return static_cast<int>(levels.size()) - 1; }
  [[nodiscard]] const CatFunctor& operator_functor(const SimplicialOperator& q) const {
    auto it = action.find(q);
    if (it == action.end()) throw InputError("diagram has no functor for " + format_operator(q));
    return it->second;
  }
};

inline SimplicialDiagram constant_diagram(const FiniteCategory& c, int truncation) {
  SimplicialDiagram d;
  for (int n = 0; n <= truncation; ++n) d.levels.push_back(c);
  for (int m = 0; m <= truncation; ++m)
    for (int n = 0; n <= truncation; ++n)
      for (const auto& q : monotone_maps(m, n)) d.action.emplace(q, identity_functor(c));
  return d;
}

/// Functors q^* valid, identities act trivially and (q p)^* = p^* q^*.
inline ValidationReport validate_diagram(const SimplicialDiagram& d) {
  ValidationReport report;
  const int top = d.truncation();
  for (const auto& level : d.levels) report.append(validate_category(level));
  if (!report.ok()) return report;
  for (int m = 0; m <= top; ++m)
    for (int n = 0; n <= top; ++n)
      for (const auto& q : monotone_maps(m, n)) {
        auto it = d.action.find(q);
        if (it == d.action.end()) {
          report.add("diagram-missing", "no functor for " + format_operator(q));
          continue;
        }
        auto r = validate_functor(d.levels[n], d.levels[m], it->second);
        for (auto& v : r.violations) v.message = format_operator(q) + ": " + v.message;
        report.append(r);
        if (q.is_identity() && !(it->second.object_map == identity_functor(d.levels[n]).object_map &&
                                 it->second.morphism_map == identity_functor(d.levels[n]).morphism_map))
          report.add("diagram-identity", "identity operator on level " + std::to_string(n) + " acts nontrivially");
      }
  if (!report.ok()) return report;
  for (int a = 0; a <= top; ++a)
    for (int b = 0; b <= top; ++b)
      for (int c = 0; c <= top; ++c)
        for (const auto& p : monotone_maps(a, b))
          for (const auto& q : monotone_maps(b, c)) {
            auto lhs = d.action.at(compose_operators(p, q));
            auto rhs = compose_functors(d.action.at(p), d.action.at(q));
            if (lhs.object_map != rhs.object_map || lhs.morphism_map != rhs.morphism_map)
              report.add("diagram-composition", "(" + format_operator(q) + " after " + format_operator(p) +
                                                    ") does not act as the composite");
          }
  return report;
}

/// The Grothendieck construction of a diagram together with its lookup tables.
struct FlatCategory {
  FiniteCategory cat;
  int truncation = 0;
  std::vector<std::vector<Index>> objects;  ///< [level][object of that level] -> flat object
  std::vector<std::pair<Index, int>> base;  ///< flat object -> (object, level)
  /// Flat morphism (A1,n1) -> (A2,n2) from the level-n2 morphism a and the
  /// operator q: [n2] -> [n1].
  std::map<std::tuple<Index, Index, Index, SimplicialOperator>, Index> morphisms;

  [[nodiscard]] Index object(Index a, int level) const { return objects.at(level).at(a); }
  [[nodiscard]] Index morphism(Index source, Index target, Index a, const SimplicialOperator& q) const {
    auto it = morphisms.find({source, target, a, q});
    return it == morphisms.end() ? kNone : it->second;
  }
};

namespace detail {

inline std::string flat_morphism_name(const std::string& a, const SimplicialOperator& q) {
  return "(" + a + ";q=" + format_operator(q) + "/" + std::to_string(q.target_dim) + ")";
}

}  // namespace detail

/// Objects (A, n); morphisms (a, q) with q: [n2] -> [n1] and a: q^*A1 -> A2 in
/// level n2; (a2, q2)(a1, q1) = (a2 q2^*(a1), q1 q2). Composites missing in a
/// level stay unrecorded.
inline FlatCategory grothendieck(const SimplicialDiagram& d) {
  const int top = d.truncation();
  if (top < 0) throw InputError("grothendieck: empty diagram");
  if (auto rep = validate_diagram(d); !rep.ok())
    throw InputError("grothendieck: " + rep.violations.front().kind + ": " + rep.violations.front().message);
  FlatCategory out;
  out.truncation = top;
  FiniteCategoryBuilder b;
  out.objects.resize(static_cast<std::size_t>(top) + 1);
  for (int n = 0; n <= top; ++n) {
    const auto& lv = d.levels[n];
    for (Index a = 0; a < lv.object_count(); ++a) {
      Index o = b.add_object("(" + lv.object_name(a) + "," + std::to_string(n) + ")",
                             detail::flat_morphism_name(lv.morphism_name(lv.identity(a)), SimplicialOperator::identity(n)));
      out.objects[n].push_back(o);
      out.base.emplace_back(a, n);
      out.morphisms[{o, o, lv.identity(a), SimplicialOperator::identity(n)}] = b.identity(o);
    }
  }
  const Index flat_objects = static_cast<Index>(out.base.size());
  for (Index s = 0; s < flat_objects; ++s)
    for (Index t = 0; t < flat_objects; ++t) {
      auto [a1, n1] = out.base[s];
      auto [a2, n2] = out.base[t];
      const auto& lv = d.levels[n2];
      for (const auto& q : monotone_maps(n2, n1)) {
        Index pulled = d.action.at(q).object_map[a1];
        for (Index a : lv.hom(pulled, a2)) {
          std::tuple<Index, Index, Index, SimplicialOperator> key{s, t, a, q};
          if (out.morphisms.count(key)) continue;
          out.morphisms[key] = b.add_morphism(detail::flat_morphism_name(lv.morphism_name(a), q), s, t);
        }
      }
    }
  for (const auto& [k1, m1] : out.morphisms) {
    const auto& [s, t, a1, q1] = k1;
    for (Index u = 0; u < flat_objects; ++u) {
      auto [a3, n3] = out.base[u];
      (void)a3;
      for (const auto& q2 : monotone_maps(n3, q1.source_dim)) {
        const auto& f = d.action.at(q2);
        Index pulled = f.morphism_map[a1];
        const auto& lv = d.levels[n3];
        for (Index a2 : lv.hom(lv.cod(pulled), out.base[u].first)) {
          Index m2 = out.morphism(t, u, a2, q2);
          Index a = lv.compose(a2, pulled);
          if (a == kNone) continue;
          Index m = out.morphism(s, u, a, compose_operators(q2, q1));
          b.set_composite(m2, m1, m);
        }
      }
    }
  }
  out.cat = b.build();
  return out;
}

/// The simplicial category viewed as a diagram of its level categories.
inline SimplicialDiagram level_diagram(const TruncatedSimplicialCategory& a) {
  SimplicialDiagram d;
  const int top = a.truncation();
  const Index n = a.object_count();
  std::vector<LevelCategory> levels;
  for (int k = 0; k <= top; ++k) levels.push_back(level_category(a, k));
  for (int p = 0; p <= top; ++p)
    for (int q = 0; q <= top; ++q)
      for (const auto& op : monotone_maps(p, q)) {
        CatFunctor f;
        for (Index x = 0; x < n; ++x) f.object_map.push_back(x);
        f.morphism_map.assign(levels[q].cat.morphism_count(), kNone);
        for (Index x = 0; x < n; ++x)
          for (Index y = 0; y < n; ++y)
            for (Index s = 0; s < a.hom(x, y).size(q); ++s)
              f.morphism_map[levels[q].morphism[a.pair(x, y)][s]] =
                  levels[p].morphism[a.pair(x, y)][a.hom(x, y).act(op, s)];
        d.action.emplace(op, std::move(f));
      }
  for (auto& lv : levels) d.levels.push_back(std::move(lv.cat));
  return d;
}

/// The flattening bA with its weak equivalences bid (maps (a, q) with a a
/// degenerate identity).
struct Flattening {
  FlatCategory flat;
  RelativeCategory rel;
  /// (pair, level, simplex) -> level-category morphism, for lookups.
  std::vector<std::vector<std::vector<Index>>> level_morphism;
};

inline Flattening flatten(const TruncatedSimplicialCategory& a) {
  if (auto rep = validate_scat(a, {false, true}); !rep.ok())
    throw InputError("flatten: " + rep.violations.front().kind + ": " + rep.violations.front().message);
  const int top = a.truncation();
  const Index n = a.object_count();
  Flattening out;
  out.level_morphism.resize(static_cast<std::size_t>(n) * n);
  std::vector<LevelCategory> levels;
  for (int k = 0; k <= top; ++k) levels.push_back(level_category(a, k));
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      for (int k = 0; k <= top; ++k) out.level_morphism[a.pair(x, y)].push_back(levels[k].morphism[a.pair(x, y)]);

  auto& flat = out.flat;
  flat.truncation = top;
  flat.objects.resize(static_cast<std::size_t>(top) + 1);
  FiniteCategoryBuilder b;
  for (Index x = 0; x < n; ++x)
    for (int k = 0; k <= top; ++k) {
      Index id = a.identity_at(x, k);
      Index o = b.add_object("(" + a.object_name(x) + "," + std::to_string(k) + ")",
                             detail::flat_morphism_name(levels[k].cat.morphism_name(levels[k].morphism[a.pair(x, x)][id]),
                                                        SimplicialOperator::identity(k)));
      flat.objects[k].push_back(o);
    }
  for (int k = 0; k <= top; ++k)
    for (Index x = 0; x < n; ++x) {
      Index o = flat.objects[k][x];
      if (static_cast<std::size_t>(o) >= flat.base.size()) flat.base.resize(static_cast<std::size_t>(o) + 1);
      flat.base[o] = {x, k};
      flat.morphisms[{o, o, levels[k].morphism[a.pair(x, x)][a.identity_at(x, k)], SimplicialOperator::identity(k)}] =
          b.identity(o);
    }
  // Hom blocks: simplex-major, operators in lexicographic order.
  const Index flat_objects = static_cast<Index>(flat.base.size());
  for (Index s = 0; s < flat_objects; ++s)
    for (Index t = 0; t < flat_objects; ++t) {
      auto [x, n1] = flat.base[s];
      auto [y, n2] = flat.base[t];
      const auto& lv = levels[n2];
      for (Index simplex = 0; simplex < a.hom(x, y).size(n2); ++simplex)
        for (const auto& q : monotone_maps(n2, n1)) {
          Index m = lv.morphism[a.pair(x, y)][simplex];
          std::tuple<Index, Index, Index, SimplicialOperator> key{s, t, m, q};
          if (flat.morphisms.count(key)) continue;
          flat.morphisms[key] = b.add_morphism(detail::flat_morphism_name(lv.cat.morphism_name(m), q), s, t);
        }
    }
  IndexSet bid_seed;
  std::vector<std::tuple<Index, Index, Index>> composites;
  for (const auto& [k1, m1] : flat.morphisms) {
    const auto& [s, t, a1, q1] = k1;
    auto [x, n1] = flat.base[s];
    auto [y, n2] = flat.base[t];
    Index s1 = kNone;  // simplex index of a1 in hom(x, y) at level n2
    {
      const auto& row = levels[n2].morphism[a.pair(x, y)];
      s1 = static_cast<Index>(std::find(row.begin(), row.end(), a1) - row.begin());
    }
    for (Index u = 0; u < flat_objects; ++u) {
      auto [z, n3] = flat.base[u];
      for (const auto& q2 : monotone_maps(n3, n2)) {
        Index pulled = a.hom(x, y).act(q2, s1);
        for (Index s2 = 0; s2 < a.hom(y, z).size(n3); ++s2) {
          Index comp = a.compose(x, y, z, n3, s2, pulled);
          if (comp == kNone) continue;
          Index m2 = flat.morphism(t, u, levels[n3].morphism[a.pair(y, z)][s2], q2);
          Index m = flat.morphism(s, u, levels[n3].morphism[a.pair(x, z)][comp], compose_operators(q2, q1));
          b.set_composite(m2, m1, m);
        }
      }
    }
  }
  flat.cat = b.build();
  IndexSet bid(static_cast<std::size_t>(flat.cat.morphism_count()));
  for (const auto& [key, m] : flat.morphisms) {
    const auto& [s, t, lm, q] = key;
    auto [x, n1] = flat.base[s];
    auto [y, n2] = flat.base[t];
    if (x == y && lm == levels[n2].morphism[a.pair(x, x)][a.identity_at(x, n2)]) bid.insert(m);
  }
  out.rel = RelativeCategory{flat.cat, std::move(bid)};
  return out;
}

/// bF: (A, n) -> (F A, n), (a, q) -> (F a, q).
inline CatFunctor flatten_functor(const TruncatedSimplicialCategory& src, const Flattening& fsrc,
                                  const TruncatedSimplicialCategory& tgt, const Flattening& ftgt,
                                  const SimplicialFunctor& f) {
  CatFunctor out;
  for (auto [x, k] : fsrc.flat.base) out.object_map.push_back(ftgt.flat.object(f.object_map[x], k));
  out.morphism_map.assign(fsrc.flat.cat.morphism_count(), kNone);
  for (const auto& [key, m] : fsrc.flat.morphisms) {
    const auto& [s, t, lm, q] = key;
    auto [x, n1] = fsrc.flat.base[s];
    auto [y, n2] = fsrc.flat.base[t];
    const auto& row = fsrc.level_morphism[src.pair(x, y)][n2];
    Index simplex = static_cast<Index>(std::find(row.begin(), row.end(), lm) - row.begin());
    Index fx = f.object_map[x], fy = f.object_map[y];
    Index image = f.hom_maps[src.pair(x, y)](n2, simplex);
    out.morphism_map[m] = ftgt.flat.morphism(out.object_map[s], out.object_map[t],
                                             ftgt.level_morphism[tgt.pair(fx, fy)][n2][image], q);
  }
  return out;
}

/// The map (C, W) -> (bL^H(C,W), bid u W): X -> (X, 0), f -> ([f], id).
struct RelativizationUnit {
  RelativeCategory target;
  RelativeFunctor functor;
};

inline RelativizationUnit relativization_unit(const RelativeCategory& r, const HammockLocalization& loc,
                                              const Flattening& flat) {
  const auto& c = r.cat;
  auto e = embed(loc);
  const auto id0 = SimplicialOperator::identity(0);
  CatFunctor f;
  for (Index x = 0; x < c.object_count(); ++x) f.object_map.push_back(flat.flat.object(x, 0));
  f.morphism_map.assign(c.morphism_count(), kNone);
  for (Index x = 0; x < c.object_count(); ++x)
    for (Index y = 0; y < c.object_count(); ++y) {
      auto hom = c.hom(x, y);
      std::size_t p = loc.scat.pair(x, y);
      for (std::size_t i = 0; i < hom.size(); ++i) {
        Index simplex = e.hom_maps[p](0, static_cast<Index>(i));
        f.morphism_map[hom[i]] = flat.flat.morphism(f.object_map[x], f.object_map[y], flat.level_morphism[p][0][simplex], id0);
      }
    }
  IndexSet image(static_cast<std::size_t>(flat.rel.cat.morphism_count()));
  for (Index w : r.weq.members()) image.insert(f.morphism_map[w]);
  return {union_weq(flat.rel, image), RelativeFunctor{std::move(f)}};
}

}  // namespace simploc
