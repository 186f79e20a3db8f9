#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "simploc/fincat.hpp"
#include "simploc/simplicial.hpp"

namespace simploc {

/// A category enriched in truncated simplicial sets: a fixed object set,
/// a simplicial set per ordered pair of objects and levelwise composition.
///
/// Composition is supplied as a function so that large or lazily computed
/// composition laws (hammock localizations) need no materialized table. It
/// may return kNone where the composite is not represented.
class TruncatedSimplicialCategory {
 public:
  /// (a, b, c, level, g in hom(b,c), f in hom(a,b)) -> g o f in hom(a,c)
  using Composer = std::function<Index(Index, Index, Index, int, Index, Index)>;

  TruncatedSimplicialCategory() = default;
  TruncatedSimplicialCategory(std::vector<std::string> objects, int truncation)
      : objects_(std::move(objects)), truncation_(truncation) {
    if (truncation < 0) throw InputError("truncation must be nonnegative");
    for (std::size_t i = 0; i < objects_.size(); ++i) {
      if (!object_index_.emplace(objects_[i], static_cast<Index>(i)).second)
        throw InputError("duplicate object '" + objects_[i] + "'");
    }
    homs_.assign(objects_.size() * objects_.size(), TruncatedSimplicialSet(truncation));
    identities_.assign(objects_.size(), kNone);
  }

  [[nodiscard]] Index object_count() const { return static_cast<Index>(objects_.size()); }
  [[nodiscard]] const std::string& object_name(Index a) const { return objects_.at(a); }
  [[nodiscard]] const std::vector<std::string>& objects() const { return objects_; }
  [[nodiscard]] Index object(const std::string& name) const {
    auto it = object_index_.find(name);
    if (it == object_index_.end()) throw InputError("unknown object '" + name + "'");
    return it->second;
  }
  [[nodiscard]] int truncation() const { return truncation_; }

  [[nodiscard]] std::size_t pair(Index a, Index b) const { return static_cast<std::size_t>(a) * objects_.size() + b; }
  [[nodiscard]] const TruncatedSimplicialSet& hom(Index a, Index b) const { return homs_.at(pair(a, b)); }
  void set_hom(Index a, Index b, TruncatedSimplicialSet x) {
    if (x.truncation() != truncation_) throw InputError("hom truncation differs from the category's");
    homs_.at(pair(a, b)) = std::move(x);
  }

  /// The identity 0-simplex of hom(a, a).
  [[nodiscard]] Index identity(Index a) const { return identities_.at(a); }
  void set_identity(Index a, Index vertex) { identities_.at(a) = vertex; }
  /// Identity at level n: the n-fold degeneracy of the level-0 identity.
  [[nodiscard]] Index identity_at(Index a, int level) const {
    return hom(a, a).degenerate_vertex(identity(a), level);
  }

  void set_composer(Composer c) { composer_ = std::move(c); }
  [[nodiscard]] Index compose(Index a, Index b, Index c, int level, Index g, Index f) const {
    if (!composer_) return kNone;
    return composer_(a, b, c, level, g, f);
  }

 private:
  std::vector<std::string> objects_;
  std::unordered_map<std::string, Index> object_index_;
  int truncation_ = 0;
  std::vector<TruncatedSimplicialSet> homs_;
  std::vector<Index> identities_;
  Composer composer_;
};

/// Explicit composition table keyed by (a, b, c, level, g, f).
class CompositionTable {
 public:
  void set(Index a, Index b, Index c, int level, Index g, Index f, Index gf) {
    table_[{a, b, c, static_cast<Index>(level), g, f}] = gf;
  }
  [[nodiscard]] Index get(Index a, Index b, Index c, int level, Index g, Index f) const {
    auto it = table_.find({a, b, c, static_cast<Index>(level), g, f});
    return it == table_.end() ? kNone : it->second;
  }
  [[nodiscard]] std::size_t size() const { return table_.size(); }

  TruncatedSimplicialCategory::Composer composer() const {
    auto shared = std::make_shared<const CompositionTable>(*this);
    return [shared](Index a, Index b, Index c, int level, Index g, Index f) {
      return shared->get(a, b, c, level, g, f);
    };
  }

 private:
  struct KeyHash {
    std::size_t operator()(const std::array<Index, 6>& k) const noexcept {
      return VectorHash{}(std::vector<Index>(k.begin(), k.end()));
    }
  };
  std::unordered_map<std::array<Index, 6>, Index, KeyHash> table_;
};

struct ScatValidationOptions {
  bool require_total = true;
  bool check_associativity = true;
};

/// Levelwise category axioms and compatibility of composition with faces
/// and degeneracies.
inline ValidationReport validate_scat(const TruncatedSimplicialCategory& a, ScatValidationOptions opt = {}) {
  ValidationReport report;
  const Index n_obj = a.object_count();
  const int top = a.truncation();
  for (Index x = 0; x < n_obj; ++x)
    for (Index y = 0; y < n_obj; ++y) {
      auto sub = validate_simplicial_set(a.hom(x, y));
      for (auto& v : sub.violations)
        report.add(v.kind, "hom(" + a.object_name(x) + ", " + a.object_name(y) + "): " + v.message);
    }
  for (Index x = 0; x < n_obj; ++x)
    if (a.identity(x) < 0 || a.identity(x) >= a.hom(x, x).size(0))
      report.add("identity-missing", "no identity for " + a.object_name(x));
  if (!report.ok()) return report;

  auto where = [&](Index x, Index y, Index z, int n) {
    return a.object_name(x) + "->" + a.object_name(y) + "->" + a.object_name(z) + " at level " + std::to_string(n);
  };
  for (Index x = 0; x < n_obj; ++x)
    for (Index y = 0; y < n_obj; ++y)
      for (Index z = 0; z < n_obj; ++z)
        for (int n = 0; n <= top; ++n) {
          const auto& f_set = a.hom(x, y);
          const auto& g_set = a.hom(y, z);
          for (Index g = 0; g < g_set.size(n); ++g)
            for (Index f = 0; f < f_set.size(n); ++f) {
              Index gf = a.compose(x, y, z, n, g, f);
              if (gf == kNone) {
                if (opt.require_total)
                  report.add("missing-composite", "(" + g_set.name(n, g) + ", " + f_set.name(n, f) + ") " + where(x, y, z, n));
                continue;
              }
              if (gf < 0 || gf >= a.hom(x, z).size(n)) {
                report.add("composite-range", "composite out of range " + where(x, y, z, n));
                continue;
              }
              for (int i = 0; n > 0 && i <= n; ++i) {
                Index lhs = a.hom(x, z).face(n, i, gf);
                Index rhs = a.compose(x, y, z, n - 1, g_set.face(n, i, g), f_set.face(n, i, f));
                if (rhs != kNone && lhs != rhs)
                  report.add("composition-face", "d" + std::to_string(i) + " of (" + g_set.name(n, g) + ", " +
                                                     f_set.name(n, f) + ") " + where(x, y, z, n));
              }
              for (int i = 0; n < top && i <= n; ++i) {
                Index lhs = a.hom(x, z).degeneracy(n, i, gf);
                Index rhs = a.compose(x, y, z, n + 1, g_set.degeneracy(n, i, g), f_set.degeneracy(n, i, f));
                if (rhs != kNone && lhs != rhs)
                  report.add("composition-degeneracy", "s" + std::to_string(i) + " of (" + g_set.name(n, g) + ", " +
                                                           f_set.name(n, f) + ") " + where(x, y, z, n));
              }
            }
        }
  for (Index x = 0; x < n_obj; ++x)
    for (Index y = 0; y < n_obj; ++y)
      for (int n = 0; n <= top; ++n)
        for (Index f = 0; f < a.hom(x, y).size(n); ++f) {
          Index left = a.compose(x, y, y, n, a.identity_at(y, n), f);
          Index right = a.compose(x, x, y, n, f, a.identity_at(x, n));
          if ((left != kNone && left != f) || (right != kNone && right != f))
            report.add("unit-law", "unit law fails for " + a.hom(x, y).name(n, f) + " in hom(" + a.object_name(x) +
                                       ", " + a.object_name(y) + ")");
        }
  if (!opt.check_associativity) return report;
  for (Index w = 0; w < n_obj; ++w)
    for (Index x = 0; x < n_obj; ++x)
      for (Index y = 0; y < n_obj; ++y)
        for (Index z = 0; z < n_obj; ++z)
          for (int n = 0; n <= top; ++n)
            for (Index f = 0; f < a.hom(w, x).size(n); ++f)
              for (Index g = 0; g < a.hom(x, y).size(n); ++g) {
                Index gf = a.compose(w, x, y, n, g, f);
                if (gf == kNone) continue;
                for (Index h = 0; h < a.hom(y, z).size(n); ++h) {
                  Index hg = a.compose(x, y, z, n, h, g);
                  if (hg == kNone) continue;
                  Index l = a.compose(w, y, z, n, h, gf), r = a.compose(w, x, z, n, hg, f);
                  if (l != kNone && r != kNone && l != r)
                    report.add("associativity", "associativity fails at level " + std::to_string(n) + " for (" +
                                                    a.hom(y, z).name(n, h) + ", " + a.hom(x, y).name(n, g) + ", " +
                                                    a.hom(w, x).name(n, f) + ")");
                }
              }
  return report;
}

/// The simplicial category with discrete hom-sets C(a, b).
inline TruncatedSimplicialCategory promote(const FiniteCategory& c, int truncation) {
  TruncatedSimplicialCategory a(
      [&] {
        std::vector<std::string> names;
        for (Index o = 0; o < c.object_count(); ++o) names.push_back(c.object_name(o));
        return names;
      }(),
      truncation);
  auto position = std::make_shared<std::vector<Index>>(c.morphism_count(), kNone);
  for (Index x = 0; x < c.object_count(); ++x)
    for (Index y = 0; y < c.object_count(); ++y) {
      std::vector<std::string> names;
      for (Index m : c.hom(x, y)) {
        (*position)[m] = static_cast<Index>(names.size());
        names.push_back(c.morphism_name(m));
      }
      a.set_hom(x, y, discrete_simplicial_set(names, truncation));
    }
  for (Index x = 0; x < c.object_count(); ++x) a.set_identity(x, (*position)[c.identity(x)]);
  auto cat = std::make_shared<const FiniteCategory>(c);
  a.set_composer([cat, position](Index x, Index y, Index z, int, Index g, Index f) -> Index {
    Index gm = cat->hom(y, z)[g], fm = cat->hom(x, y)[f];
    Index gf = cat->compose(gm, fm);
    return gf == kNone ? kNone : (*position)[gf];
  });
  return a;
}

/// Simplicial functor: an object map and one simplicial map per hom.
struct SimplicialFunctor {
  std::vector<Index> object_map;
  std::vector<SimplicialMap> hom_maps;  ///< indexed by pair(a, b) of the source
};

inline SimplicialFunctor identity_simplicial_functor(const TruncatedSimplicialCategory& a) {
  SimplicialFunctor f;
  for (Index x = 0; x < a.object_count(); ++x) f.object_map.push_back(x);
  for (Index x = 0; x < a.object_count(); ++x)
    for (Index y = 0; y < a.object_count(); ++y) f.hom_maps.push_back(identity_map(a.hom(x, y)));
  return f;
}

/// g after f.
inline SimplicialFunctor compose_simplicial_functors(const TruncatedSimplicialCategory& mid, const SimplicialFunctor& g,
                                                     const SimplicialFunctor& f) {
  SimplicialFunctor out;
  for (Index o : f.object_map) out.object_map.push_back(g.object_map[o]);
  const Index n = static_cast<Index>(f.object_map.size());
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      out.hom_maps.push_back(compose_maps(g.hom_maps[mid.pair(f.object_map[x], f.object_map[y])],
                                          f.hom_maps[static_cast<std::size_t>(x) * n + y]));
  return out;
}

/// Discrete enrichment of an ordinary functor.
inline SimplicialFunctor promote_functor(const FiniteCategory& src, const FiniteCategory& tgt, const CatFunctor& f,
                                         int truncation) {
  std::vector<Index> position(tgt.morphism_count(), kNone);
  for (Index x = 0; x < tgt.object_count(); ++x)
    for (Index y = 0; y < tgt.object_count(); ++y) {
      auto h = tgt.hom(x, y);
      for (std::size_t i = 0; i < h.size(); ++i) position[h[i]] = static_cast<Index>(i);
    }
  SimplicialFunctor out;
  out.object_map = f.object_map;
  for (Index x = 0; x < src.object_count(); ++x)
    for (Index y = 0; y < src.object_count(); ++y) {
      std::vector<Index> level;
      for (Index m : src.hom(x, y)) level.push_back(position[f.morphism_map[m]]);
      out.hom_maps.push_back(SimplicialMap{std::vector<std::vector<Index>>(truncation + 1, level)});
    }
  return out;
}

inline ValidationReport validate_simplicial_functor(const TruncatedSimplicialCategory& src,
                                                    const TruncatedSimplicialCategory& tgt,
                                                    const SimplicialFunctor& f) {
  ValidationReport report;
  const Index n = src.object_count();
  if (f.object_map.size() != static_cast<std::size_t>(n) ||
      f.hom_maps.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    report.add("functor-shape", "object map or hom maps do not cover the source");
    return report;
  }
  for (Index o : f.object_map)
    if (o < 0 || o >= tgt.object_count()) {
      report.add("functor-shape", "object map leaves the target");
      return report;
    }
  if (src.truncation() > tgt.truncation()) report.add("functor-shape", "target truncation is smaller than source");
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      std::string label = "hom(" + src.object_name(x) + ", " + src.object_name(y) + ")";
      report.append(validate_simplicial_map(src.hom(x, y), tgt.hom(f.object_map[x], f.object_map[y]),
                                            f.hom_maps[src.pair(x, y)], label));
    }
  if (!report.ok()) return report;
  for (Index x = 0; x < n; ++x)
    if (f.hom_maps[src.pair(x, x)](0, src.identity(x)) != tgt.identity(f.object_map[x]))
      report.add("functor-identity", "identity of " + src.object_name(x) + " is not preserved");
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      for (Index z = 0; z < n; ++z)
        for (int lv = 0; lv <= src.truncation(); ++lv)
          for (Index g = 0; g < src.hom(y, z).size(lv); ++g)
            for (Index h = 0; h < src.hom(x, y).size(lv); ++h) {
              Index gh = src.compose(x, y, z, lv, g, h);
              if (gh == kNone) continue;
              Index fx = f.object_map[x], fy = f.object_map[y], fz = f.object_map[z];
              Index img = tgt.compose(fx, fy, fz, lv, f.hom_maps[src.pair(y, z)](lv, g), f.hom_maps[src.pair(x, y)](lv, h));
              if (img != kNone && img != f.hom_maps[src.pair(x, z)](lv, gh))
                report.add("functor-composition", "composite (" + src.hom(y, z).name(lv, g) + ", " +
                                                      src.hom(x, y).name(lv, h) + ") is not preserved");
            }
  return report;
}

// ---------------------------------------------------------------------------
// Homotopy category

/// The homotopy category together with the class data it was built from.
struct HomotopyCategory {
  FiniteCategory cat;
  std::vector<Partition> components;         ///< per pair: labels of the 0-simplices
  std::vector<std::vector<Index>> morphism;  ///< per pair: class -> morphism of cat
  std::vector<std::vector<Index>> representative;  ///< per pair: class -> 0-simplex
};

/// pi_0 of every mapping space with the induced composition.
///
/// The composite of two classes is read off every pair of representatives
/// whose composite is represented; disagreeing pairs raise ConsistencyError
/// and a class pair without any represented composite raises BoundError.
/// A nonzero members_per_class only looks at the first that many vertices
/// of each class (plus the identity), which is what makes large skeletal
/// mapping spaces tractable; well-definedness is then only sampled.
inline HomotopyCategory homotopy_data(const TruncatedSimplicialCategory& a, std::size_t members_per_class = 0) {
  if (a.truncation() < 1) throw InputError("homotopy category needs truncation >= 1");
  const Index n = a.object_count();
  HomotopyCategory out;
  out.components.resize(static_cast<std::size_t>(n) * n);
  out.morphism.resize(out.components.size());
  out.representative.resize(out.components.size());
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      auto p = pi0(a.hom(x, y));
      out.representative[a.pair(x, y)].assign(static_cast<std::size_t>(p.classes), kNone);
      for (std::size_t s = 0; s < p.label.size(); ++s) {
        Index& rep = out.representative[a.pair(x, y)][p.label[s]];
        if (rep == kNone) rep = static_cast<Index>(s);
      }
      if (x == y) out.representative[a.pair(x, y)][p.label[a.identity(x)]] = a.identity(x);
      out.components[a.pair(x, y)] = std::move(p);
    }

  // Per pair: the vertices that take part in composition.
  std::vector<std::vector<Index>> members(out.components.size());
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      const auto& p = out.components[a.pair(x, y)];
      auto& m = members[a.pair(x, y)];
      if (members_per_class == 0) {
        for (Index s = 0; s < a.hom(x, y).size(0); ++s) m.push_back(s);
        continue;
      }
      std::vector<std::size_t> taken(static_cast<std::size_t>(p.classes), 0);
      for (Index s = 0; s < a.hom(x, y).size(0); ++s) {
        bool keep = taken[p.label[s]] < members_per_class || (x == y && s == a.identity(x));
        if (keep) {
          ++taken[p.label[s]];
          m.push_back(s);
        }
      }
    }

  FiniteCategoryBuilder b;
  std::unordered_map<std::string, int> used;
  auto unique = [&](const std::string& name, Index x, Index y) {
    std::string out_name = name;
    if (used.count(out_name) || b.find_object(out_name))
      out_name = name + " [" + a.object_name(x) + "->" + a.object_name(y) + "]";
    while (used.count(out_name)) out_name += "'";
    used[out_name] = 1;
    return out_name;
  };
  for (Index x = 0; x < n; ++x) {
    Index id = a.identity(x);
    b.add_object(a.object_name(x), unique(a.hom(x, x).name(0, id), x, x));
  }
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      const auto& p = out.components[a.pair(x, y)];
      auto& morph = out.morphism[a.pair(x, y)];
      morph.assign(static_cast<std::size_t>(p.classes), kNone);
      for (Index k = 0; k < p.classes; ++k) {
        Index rep = out.representative[a.pair(x, y)][k];
        if (x == y && rep == a.identity(x)) {
          morph[k] = b.identity(x);
          continue;
        }
        morph[k] = b.add_morphism(unique(a.hom(x, y).name(0, rep), x, y), x, y);
      }
    }

  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      for (Index z = 0; z < n; ++z) {
        const auto& pf = out.components[a.pair(x, y)];
        const auto& pg = out.components[a.pair(y, z)];
        const auto& pgf = out.components[a.pair(x, z)];
        std::vector<Index> result(static_cast<std::size_t>(pg.classes) * pf.classes, kNone);
        for (Index g : members[a.pair(y, z)])
          for (Index f : members[a.pair(x, y)]) {
            Index gf = a.compose(x, y, z, 0, g, f);
            if (gf == kNone) continue;
            Index& slot = result[static_cast<std::size_t>(pg.label[g]) * pf.classes + pf.label[f]];
            Index cls = pgf.label[gf];
            if (slot == kNone) {
              slot = cls;
            } else if (slot != cls) {
              throw ConsistencyError("induced composition on components is not well defined: (" +
                                     a.hom(y, z).name(0, g) + ", " + a.hom(x, y).name(0, f) + ") in " +
                                     a.object_name(x) + "->" + a.object_name(y) + "->" + a.object_name(z));
            }
          }
        for (Index kg = 0; kg < pg.classes; ++kg)
          for (Index kf = 0; kf < pf.classes; ++kf) {
            Index cls = result[static_cast<std::size_t>(kg) * pf.classes + kf];
            if (cls == kNone)
              throw BoundError("no represented composite for classes of " +
                               a.hom(y, z).name(0, out.representative[a.pair(y, z)][kg]) + " and " +
                               a.hom(x, y).name(0, out.representative[a.pair(x, y)][kf]));
            b.set_composite(out.morphism[a.pair(y, z)][kg], out.morphism[a.pair(x, y)][kf],
                            out.morphism[a.pair(x, z)][cls]);
          }
      }
  out.cat = b.build();
  return out;
}

inline FiniteCategory homotopy_category(const TruncatedSimplicialCategory& a, std::size_t members_per_class = 0) {
  return homotopy_data(a, members_per_class).cat;
}

/// The functor on homotopy categories induced by a simplicial functor.
inline CatFunctor induced_homotopy_functor(const TruncatedSimplicialCategory& src, const HomotopyCategory& hsrc,
                                           const TruncatedSimplicialCategory& tgt, const HomotopyCategory& htgt,
                                           const SimplicialFunctor& f) {
  CatFunctor out;
  out.object_map = f.object_map;
  out.morphism_map.assign(hsrc.cat.morphism_count(), kNone);
  for (Index x = 0; x < src.object_count(); ++x)
    for (Index y = 0; y < src.object_count(); ++y) {
      const auto& reps = hsrc.representative[src.pair(x, y)];
      std::size_t tp = tgt.pair(f.object_map[x], f.object_map[y]);
      for (std::size_t k = 0; k < reps.size(); ++k) {
        Index image = f.hom_maps[src.pair(x, y)](0, reps[k]);
        out.morphism_map[hsrc.morphism[src.pair(x, y)][k]] = htgt.morphism[tp][htgt.components[tp].label[image]];
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// Relative simplicial categories and neglectability

/// A simplicial category with a levelwise subobject of its hom data.
struct RelativeSimplicialCategory {
  TruncatedSimplicialCategory ambient;
  std::vector<std::vector<IndexSet>> sub;  ///< [pair][level]

  [[nodiscard]] bool contains(Index a, Index b, int level, Index s) const {
    return sub[ambient.pair(a, b)][level].contains(s);
  }
};

/// The subobject containing exactly the degenerate identities.
inline RelativeSimplicialCategory minimal_relative(TruncatedSimplicialCategory a) {
  RelativeSimplicialCategory r{std::move(a), {}};
  const Index n = r.ambient.object_count();
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      std::vector<IndexSet> levels;
      for (int lv = 0; lv <= r.ambient.truncation(); ++lv) {
        IndexSet s(static_cast<std::size_t>(r.ambient.hom(x, y).size(lv)));
        if (x == y) s.insert(r.ambient.identity_at(x, lv));
        levels.push_back(std::move(s));
      }
      r.sub.push_back(std::move(levels));
    }
  return r;
}

/// Closes the given simplices (and degenerate identities) under faces,
/// degeneracies and represented composition.
inline void close_subobject(RelativeSimplicialCategory& r) {
  const auto& a = r.ambient;
  const Index n = a.object_count();
  const int top = a.truncation();
  for (Index x = 0; x < n; ++x)
    for (int lv = 0; lv <= top; ++lv) r.sub[a.pair(x, x)][lv].insert(a.identity_at(x, lv));
  bool changed = true;
  while (changed) {
    changed = false;
    auto add = [&](Index x, Index y, int lv, Index s) {
      if (s != kNone && !r.sub[a.pair(x, y)][lv].contains(s)) {
        r.sub[a.pair(x, y)][lv].insert(s);
        changed = true;
      }
    };
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y)
        for (int lv = 0; lv <= top; ++lv)
          for (Index s : r.sub[a.pair(x, y)][lv].members()) {
            for (int i = 0; lv > 0 && i <= lv; ++i) add(x, y, lv - 1, a.hom(x, y).face(lv, i, s));
            for (int i = 0; lv < top && i <= lv; ++i) add(x, y, lv + 1, a.hom(x, y).degeneracy(lv, i, s));
          }
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y)
        for (Index z = 0; z < n; ++z)
          for (int lv = 0; lv <= top; ++lv)
            for (Index g : r.sub[a.pair(y, z)][lv].members())
              for (Index f : r.sub[a.pair(x, y)][lv].members()) add(x, z, lv, a.compose(x, y, z, lv, g, f));
  }
}

inline ValidationReport validate_relscat(const RelativeSimplicialCategory& r,
                                         ScatValidationOptions opt = {}) {
  ValidationReport report = validate_scat(r.ambient, opt);
  const auto& a = r.ambient;
  const Index n = a.object_count();
  const int top = a.truncation();
  if (r.sub.size() != static_cast<std::size_t>(n) * n) {
    report.add("sub-shape", "subobject does not cover every pair of objects");
    return report;
  }
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      const auto& levels = r.sub[a.pair(x, y)];
      if (levels.size() != static_cast<std::size_t>(top) + 1) {
        report.add("sub-shape", "subobject has the wrong number of levels");
        return report;
      }
      for (int lv = 0; lv <= top; ++lv)
        if (levels[lv].universe() != static_cast<std::size_t>(a.hom(x, y).size(lv))) {
          report.add("sub-shape", "subobject level size mismatch");
          return report;
        }
    }
  for (Index x = 0; x < n; ++x)
    for (int lv = 0; lv <= top; ++lv)
      if (!r.contains(x, x, lv, a.identity_at(x, lv)))
        report.add("sub-identity", "subobject lacks the identity of " + a.object_name(x) + " at level " +
                                       std::to_string(lv));
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      for (int lv = 0; lv <= top; ++lv)
        for (Index s : r.sub[a.pair(x, y)][lv].members()) {
          for (int i = 0; lv > 0 && i <= lv; ++i)
            if (!r.contains(x, y, lv - 1, a.hom(x, y).face(lv, i, s)))
              report.add("sub-face", "subobject not closed under d" + std::to_string(i) + " at " +
                                         a.hom(x, y).name(lv, s));
          for (int i = 0; lv < top && i <= lv; ++i)
            if (!r.contains(x, y, lv + 1, a.hom(x, y).degeneracy(lv, i, s)))
              report.add("sub-degeneracy", "subobject not closed under s" + std::to_string(i) + " at " +
                                               a.hom(x, y).name(lv, s));
        }
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      for (Index z = 0; z < n; ++z)
        for (int lv = 0; lv <= top; ++lv)
          for (Index g : r.sub[a.pair(y, z)][lv].members())
            for (Index f : r.sub[a.pair(x, y)][lv].members()) {
              Index gf = a.compose(x, y, z, lv, g, f);
              if (gf != kNone && !r.contains(x, z, lv, gf))
                report.add("sub-closure", "subobject lacks the composite of (" + a.hom(y, z).name(lv, g) + ", " +
                                              a.hom(x, y).name(lv, f) + ")");
            }
  return report;
}

struct NeglectabilityResult {
  bool neglectable = true;
  std::string witness;  ///< first sub 0-simplex whose class is not invertible
};

/// Every 0-simplex of the subobject becomes an isomorphism in pi_0.
inline NeglectabilityResult is_neglectable(const RelativeSimplicialCategory& r) {
  const auto& a = r.ambient;
  auto ho = homotopy_data(a);
  NeglectabilityResult out;
  for (Index x = 0; x < a.object_count() && out.neglectable; ++x)
    for (Index y = 0; y < a.object_count(); ++y) {
      std::size_t p = a.pair(x, y);
      bool bad = false;
      for (Index s : r.sub[p][0].members()) {
        Index m = ho.morphism[p][ho.components[p].label[s]];
        if (!is_isomorphism(ho.cat, m)) {
          out.neglectable = false;
          out.witness = a.hom(x, y).name(0, s);
          bad = true;
          break;
        }
      }
      if (bad) break;
    }
  return out;
}

// ---------------------------------------------------------------------------
// DK certificates

enum class Verdict { Pass, Fail, Undetermined };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass(partial)";
    case Verdict::Fail: return "Fail";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "?";
}

struct PairCertificate {
  Index source = kNone, target = kNone;
  bool pi0_bijective = false;
  std::string pi0_witness;
  std::vector<HomologyComparison> homology;

  [[nodiscard]] bool ok() const {
    if (!pi0_bijective) return false;
    for (const auto& h : homology)
      if (!h.iso) return false;
    return true;
  }
};

struct DkCertificate {
  int truncation = 0;
  std::vector<PairCertificate> pairs;
  bool ho_equivalence = false;
  std::string ho_witness;
  Verdict verdict = Verdict::Undetermined;
  std::string witness;
};

/// Partial certificate that f is a DK-equivalence: pi_0 bijections and
/// homology isomorphisms in degrees below the truncation on every mapping
/// space, and an equivalence of homotopy categories.
///
/// `budget` bounds the total number of simplices fed to homology; beyond it
/// the verdict is Undetermined.
inline DkCertificate check_dk(const TruncatedSimplicialCategory& src, const TruncatedSimplicialCategory& tgt,
                              const SimplicialFunctor& f, std::size_t budget = static_cast<std::size_t>(-1)) {
  auto report = validate_simplicial_functor(src, tgt, f);
  if (!report.ok()) throw InputError("check_dk: invalid functor: " + report.violations.front().message);
  DkCertificate cert;
  cert.truncation = std::min(src.truncation(), tgt.truncation());
  if (cert.truncation < 1) throw InputError("check_dk needs truncation >= 1");

  std::size_t work = 0;
  for (Index x = 0; x < src.object_count(); ++x)
    for (Index y = 0; y < src.object_count(); ++y)
      for (int lv = 0; lv <= cert.truncation; ++lv)
        work += static_cast<std::size_t>(src.hom(x, y).size(lv)) +
                static_cast<std::size_t>(tgt.hom(f.object_map[x], f.object_map[y]).size(lv));
  if (work > budget) {
    cert.verdict = Verdict::Undetermined;
    cert.witness = "budget: " + std::to_string(work) + " simplices exceed " + std::to_string(budget);
    return cert;
  }

  for (Index x = 0; x < src.object_count(); ++x)
    for (Index y = 0; y < src.object_count(); ++y) {
      PairCertificate pc;
      pc.source = x;
      pc.target = y;
      const auto& hx = src.hom(x, y);
      const auto& hy = tgt.hom(f.object_map[x], f.object_map[y]);
      const auto& fm = f.hom_maps[src.pair(x, y)];
      auto p = pi0(hx), q = pi0(hy);
      std::vector<Index> image(static_cast<std::size_t>(p.classes), kNone);
      std::vector<bool> hit(static_cast<std::size_t>(q.classes), false);
      pc.pi0_bijective = p.classes == q.classes;
      if (!pc.pi0_bijective)
        pc.pi0_witness = std::to_string(p.classes) + " components map to " + std::to_string(q.classes);
      for (Index s = 0; s < hx.size(0) && pc.pi0_bijective; ++s) {
        Index k = q.label[fm(0, s)];
        Index& slot = image[p.label[s]];
        if (slot == kNone) {
          if (hit[k]) {
            pc.pi0_bijective = false;
            pc.pi0_witness = "two components map to the component of " + hy.name(0, fm(0, s));
          }
          slot = k;
          hit[k] = true;
        }
      }
      pc.homology = compare_homology(hx, hy, fm);
      cert.pairs.push_back(std::move(pc));
    }

  try {
    auto hs = homotopy_data(src);
    auto ht = homotopy_data(tgt);
    auto hf = induced_homotopy_functor(src, hs, tgt, ht, f);
    auto check = check_equivalence_functor(hs.cat, ht.cat, hf);
    cert.ho_equivalence = check.ok();
    cert.ho_witness = check.witness;
  } catch (const BoundError& e) {
    cert.verdict = Verdict::Undetermined;
    cert.witness = std::string("homotopy category: ") + e.what();
    return cert;
  }

  cert.verdict = Verdict::Pass;
  for (const auto& pc : cert.pairs) {
    if (pc.ok()) continue;
    cert.verdict = Verdict::Fail;
    std::string where = "(" + src.object_name(pc.source) + ", " + src.object_name(pc.target) + ")";
    if (!pc.pi0_bijective) {
      cert.witness = "pi0 not bijective on " + where + ": " + pc.pi0_witness;
    } else {
      for (const auto& h : pc.homology)
        if (!h.iso) {
          cert.witness = "homology differs on " + where + " in degree " + std::to_string(h.degree);
          break;
        }
    }
    break;
  }
  if (cert.verdict == Verdict::Pass && !cert.ho_equivalence) {
    cert.verdict = Verdict::Fail;
    cert.witness = "homotopy categories: " + cert.ho_witness;
  }
  return cert;
}

}  // namespace simploc
