#pragma once

#include <map>
#include <random>
#include <tuple>
#include <string>
#include <vector>

#include "simploc/fincat.hpp"

namespace testutil {

using simploc::FiniteCategory;
using simploc::FiniteCategoryBuilder;
using simploc::Index;

/// Thin category: reflexive-transitive closure of a random relation.
inline FiniteCategory random_preorder(std::mt19937& rng, int objects) {
  std::vector<std::vector<bool>> rel(objects, std::vector<bool>(objects, false));
  for (int i = 0; i < objects; ++i) rel[i][i] = true;
  for (int i = 0; i < objects; ++i)
    for (int j = 0; j < objects; ++j)
      if (i != j && rng() % 3 == 0) rel[i][j] = true;
  for (int k = 0; k < objects; ++k)
    for (int i = 0; i < objects; ++i)
      for (int j = 0; j < objects; ++j)
        if (rel[i][k] && rel[k][j]) rel[i][j] = true;
  FiniteCategoryBuilder b;
  for (int i = 0; i < objects; ++i) b.add_object("P" + std::to_string(i));
  std::vector<std::vector<Index>> arrow(objects, std::vector<Index>(objects, simploc::kNone));
  for (int i = 0; i < objects; ++i)
    for (int j = 0; j < objects; ++j)
      if (rel[i][j])
        arrow[i][j] = i == j ? b.identity(i) : b.add_morphism("p" + std::to_string(i) + std::to_string(j), i, j);
  for (int i = 0; i < objects; ++i)
    for (int j = 0; j < objects; ++j)
      for (int k = 0; k < objects; ++k)
        if (rel[i][j] && rel[j][k]) b.set_composite(arrow[j][k], arrow[i][j], arrow[i][k]);
  return b.build();
}

/// Free category on a random acyclic graph (objects in order, edges go up).
/// Returns an empty optional-like category (0 objects) when too large.
inline FiniteCategory random_path_category(std::mt19937& rng, int objects, int max_morphisms) {
  std::vector<std::tuple<int, int, std::string>> edges;
  for (int i = 0; i < objects; ++i)
    for (int j = i + 1; j < objects; ++j) {
      int mult = static_cast<int>(rng() % 4 == 0 ? 2 : rng() % 2);
      for (int m = 0; m < mult; ++m) edges.emplace_back(i, j, "e" + std::to_string(edges.size()));
    }
  // paths[i][j] = list of edge sequences
  std::vector<std::vector<std::vector<std::vector<int>>>> paths(objects, std::vector<std::vector<std::vector<int>>>(objects));
  for (int len = 1; len < objects; ++len) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      auto [s, t, name] = edges[e];
      if (len == 1) {
        paths[s][t].push_back({static_cast<int>(e)});
        continue;
      }
      for (int u = 0; u < objects; ++u)
        for (const auto& p : paths[u][s])
          if (static_cast<int>(p.size()) == len - 1) {
            auto q = p;
            q.push_back(static_cast<int>(e));
            paths[u][t].push_back(q);
          }
    }
  }
  std::size_t total = 0;
  for (auto& row : paths)
    for (auto& ps : row) total += ps.size();
  if (static_cast<int>(total) > max_morphisms) return FiniteCategory{};
  FiniteCategoryBuilder b;
  for (int i = 0; i < objects; ++i) b.add_object("Q" + std::to_string(i));
  std::map<std::vector<int>, Index> idx;
  for (int s = 0; s < objects; ++s)
    for (int t = 0; t < objects; ++t)
      for (const auto& p : paths[s][t]) {
        std::string name;
        for (std::size_t k = 0; k < p.size(); ++k) name += (k ? "." : "") + std::get<2>(edges[p[k]]);
        idx[p] = b.add_morphism(name, s, t);
      }
  for (const auto& [p, m] : idx)
    for (const auto& [q, n] : idx)
      if (std::get<1>(edges[p.back()]) == std::get<0>(edges[q.front()])) {
        auto pq = p;
        pq.insert(pq.end(), q.begin(), q.end());
        b.set_composite(n, m, idx.at(pq));
      }
  return b.build();
}

/// One-object monoids: cyclic groups and the idempotent monoid {e, a}.
inline FiniteCategory random_monoid(std::mt19937& rng) {
  if (rng() % 3 == 0) {
    FiniteCategoryBuilder b;
    Index o = b.add_object("M");
    Index a = b.add_morphism("a", o, o);
    b.set_composite(a, a, a);
    return b.build();
  }
  return simploc::cats::cyclic_group(2 + static_cast<int>(rng() % 3));
}

inline std::size_t non_identity_count(const FiniteCategory& c) {
  return static_cast<std::size_t>(c.morphism_count() - c.object_count());
}

/// Valid finite categories with at most max_objects objects and
/// max_morphisms non-identity morphisms, deterministic in seed.
inline std::vector<FiniteCategory> generated_categories(int count, int max_objects, int max_morphisms,
                                                        unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<FiniteCategory> out;
  while (static_cast<int>(out.size()) < count) {
    int kind = static_cast<int>(rng() % 4);
    int objs = 1 + static_cast<int>(rng() % max_objects);
    FiniteCategory c;
    if (kind == 0) {
      c = random_preorder(rng, objs);
    } else if (kind == 1) {
      c = random_path_category(rng, objs, max_morphisms + objs);
      if (c.object_count() == 0) continue;
    } else if (kind == 2) {
      c = random_monoid(rng);
    } else {
      if (objs < 2) continue;
      c = simploc::cats::coproduct(random_preorder(rng, objs - 1), random_monoid(rng));
    }
    if (c.object_count() > max_objects || static_cast<int>(non_identity_count(c)) > max_morphisms) continue;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace testutil
