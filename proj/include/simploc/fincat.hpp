#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "simploc/core.hpp"

namespace simploc {

struct MorphismInfo {
  std::string name;
  Index dom = kNone;
  Index cod = kNone;
};

/// One problem found by a validator.
struct Violation {
  std::string kind;
  std::string message;
};

/// Exhaustive list of violations; empty means valid.
struct ValidationReport {
  std::vector<Violation> violations;

  [[nodiscard]] bool ok() const { return violations.empty(); }
  [[nodiscard]] std::size_t count(std::string_view kind) const {
    return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                  [&](const Violation& v) { return v.kind == kind; }));
  }
  void add(std::string kind, std::string message) {
    violations.push_back({std::move(kind), std::move(message)});
  }
  void append(const ValidationReport& other) {
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  }
};

class FiniteCategoryBuilder;

/// A finite category given by an explicit composition table.
///
/// Values are immutable once built. The table may be partial: a composable
/// pair without a recorded composite is reported by validate_category, and
/// compose() returns kNone for it. Width-bounded localizations produce such
/// partial categories on purpose.
class FiniteCategory {
 public:
  FiniteCategory() = default;

  [[nodiscard]] Index object_count() const { return static_cast<Index>(objects_.size()); }
  [[nodiscard]] Index morphism_count() const { return static_cast<Index>(morphisms_.size()); }

  [[nodiscard]] const std::string& object_name(Index o) const { return objects_.at(o); }
  [[nodiscard]] const std::string& morphism_name(Index m) const { return morphisms_.at(m).name; }
  [[nodiscard]] Index dom(Index m) const { return morphisms_[m].dom; }
  [[nodiscard]] Index cod(Index m) const { return morphisms_[m].cod; }
  [[nodiscard]] Index identity(Index o) const { return identity_[o]; }
  [[nodiscard]] bool is_identity(Index m) const {
    return morphisms_[m].dom == morphisms_[m].cod && identity_[morphisms_[m].dom] == m;
  }

  [[nodiscard]] std::optional<Index> find_object(const std::string& name) const {
    auto it = object_index_.find(name);
    if (it == object_index_.end()) return std::nullopt;
    return it->second;
  }
  [[nodiscard]] std::optional<Index> find_morphism(const std::string& name) const {
    auto it = morphism_index_.find(name);
    if (it == morphism_index_.end()) return std::nullopt;
    return it->second;
  }
  Index object(const std::string& name) const {
    if (auto o = find_object(name)) return *o;
    throw InputError("unknown object '" + name + "'");
  }
  Index morphism(const std::string& name) const {
    if (auto m = find_morphism(name)) return *m;
    throw InputError("unknown morphism '" + name + "'");
  }

  /// Morphisms a -> b in index order.
  [[nodiscard]] std::span<const Index> hom(Index a, Index b) const {
    return homs_[static_cast<std::size_t>(a) * objects_.size() + b];
  }
  [[nodiscard]] std::span<const Index> outgoing(Index o) const { return outgoing_[o]; }
  [[nodiscard]] std::span<const Index> incoming(Index o) const { return incoming_[o]; }

  /// g after f; kNone when not composable or not recorded.
  [[nodiscard]] Index compose(Index g, Index f) const {
    if (morphisms_[f].cod != morphisms_[g].dom) return kNone;
    return compose_[g][in_pos_[f]];
  }

  [[nodiscard]] bool is_total() const {
    for (const auto& row : compose_)
      for (Index v : row)
        if (v == kNone) return false;
    return true;
  }

  struct StrayEntry {
    Index g, f, gf;
    std::string reason;
  };
  /// Table entries that could not be placed (non-composable pair, conflicts).
  [[nodiscard]] const std::vector<StrayEntry>& stray_entries() const { return stray_; }

  friend bool operator==(const FiniteCategory& a, const FiniteCategory& b) {
    if (a.objects_ != b.objects_ || a.identity_ != b.identity_ || a.compose_ != b.compose_) return false;
    if (a.morphisms_.size() != b.morphisms_.size()) return false;
    for (std::size_t i = 0; i < a.morphisms_.size(); ++i) {
      const auto& x = a.morphisms_[i];
      const auto& y = b.morphisms_[i];
      if (x.name != y.name || x.dom != y.dom || x.cod != y.cod) return false;
    }
    return true;
  }

 private:
  friend class FiniteCategoryBuilder;

  std::vector<std::string> objects_;
  std::unordered_map<std::string, Index> object_index_;
  std::vector<MorphismInfo> morphisms_;
  std::unordered_map<std::string, Index> morphism_index_;
  std::vector<Index> identity_;
  std::vector<std::vector<Index>> homs_;
  std::vector<std::vector<Index>> outgoing_;
  std::vector<std::vector<Index>> incoming_;
  std::vector<Index> in_pos_;
  std::vector<std::vector<Index>> compose_;
  std::vector<StrayEntry> stray_;
};

/// Incremental construction of a FiniteCategory.
///
/// Identities are created with their objects; composites with an identity
/// are implied by the unit laws unless recorded explicitly.
class FiniteCategoryBuilder {
 public:
  Index add_object(const std::string& name, const std::string& identity_name) {
    if (name.empty()) throw InputError("object names must be nonempty");
    if (object_index_.count(name)) throw InputError("duplicate object '" + name + "'");
    Index o = static_cast<Index>(objects_.size());
    objects_.push_back(name);
    object_index_.emplace(name, o);
    identity_.push_back(add_morphism(identity_name, o, o));
    return o;
  }
  Index add_object(const std::string& name) { return add_object(name, "id_" + name); }

  Index add_morphism(const std::string& name, Index dom, Index cod) {
    if (name.empty()) throw InputError("morphism names must be nonempty");
    if (morphism_index_.count(name)) throw InputError("duplicate morphism '" + name + "'");
    if (dom < 0 || cod < 0 || dom >= static_cast<Index>(objects_.size()) ||
        cod >= static_cast<Index>(objects_.size()))
      throw InputError("morphism '" + name + "' has an unknown endpoint");
    Index m = static_cast<Index>(morphisms_.size());
    morphisms_.push_back({name, dom, cod});
    morphism_index_.emplace(name, m);
    return m;
  }

  void set_composite(Index g, Index f, Index gf) {
    auto key = std::make_pair(g, f);
    auto it = composites_.find(key);
    if (it != composites_.end()) {
      if (it->second != gf) conflicts_.push_back({g, f, gf, "conflicting composite"});
      return;
    }
    composites_.emplace(key, gf);
  }

  [[nodiscard]] std::optional<Index> find_object(const std::string& name) const {
    auto it = object_index_.find(name);
    if (it == object_index_.end()) return std::nullopt;
    return it->second;
  }
  [[nodiscard]] std::optional<Index> find_morphism(const std::string& name) const {
    auto it = morphism_index_.find(name);
    if (it == morphism_index_.end()) return std::nullopt;
    return it->second;
  }
  [[nodiscard]] Index identity(Index o) const { return identity_.at(o); }
  [[nodiscard]] Index morphism_count() const { return static_cast<Index>(morphisms_.size()); }
  [[nodiscard]] Index object_count() const { return static_cast<Index>(objects_.size()); }

  FiniteCategory build() const {
    FiniteCategory c;
    c.objects_ = objects_;
    c.object_index_ = object_index_;
    c.morphisms_ = morphisms_;
    c.morphism_index_ = morphism_index_;
    c.identity_ = identity_;
    const std::size_t n = objects_.size();
    c.homs_.assign(n * n, {});
    c.outgoing_.assign(n, {});
    c.incoming_.assign(n, {});
    c.in_pos_.assign(morphisms_.size(), kNone);
    for (std::size_t m = 0; m < morphisms_.size(); ++m) {
      const auto& info = morphisms_[m];
      c.homs_[static_cast<std::size_t>(info.dom) * n + info.cod].push_back(static_cast<Index>(m));
      c.outgoing_[info.dom].push_back(static_cast<Index>(m));
      c.in_pos_[m] = static_cast<Index>(c.incoming_[info.cod].size());
      c.incoming_[info.cod].push_back(static_cast<Index>(m));
    }
    c.compose_.assign(morphisms_.size(), {});
    for (std::size_t g = 0; g < morphisms_.size(); ++g)
      c.compose_[g].assign(c.incoming_[morphisms_[g].dom].size(), kNone);

    for (const auto& [key, gf] : composites_) {
      auto [g, f] = key;
      if (morphisms_[f].cod != morphisms_[g].dom) {
        c.stray_.push_back({g, f, gf, "composite given for a non-composable pair"});
        continue;
      }
      c.compose_[g][c.in_pos_[f]] = gf;
    }
    for (std::size_t m = 0; m < morphisms_.size(); ++m) {
      const auto& info = morphisms_[m];
      Index mi = static_cast<Index>(m);
      Index& left = c.compose_[identity_[info.cod]][c.in_pos_[m]];
      if (left == kNone) left = mi;
      Index& right = c.compose_[m][c.in_pos_[identity_[info.dom]]];
      if (right == kNone) right = mi;
    }
    c.stray_.insert(c.stray_.end(), conflicts_.begin(), conflicts_.end());
    return c;
  }

 private:
  std::vector<std::string> objects_;
  std::unordered_map<std::string, Index> object_index_;
  std::vector<MorphismInfo> morphisms_;
  std::unordered_map<std::string, Index> morphism_index_;
  std::vector<Index> identity_;
  std::map<std::pair<Index, Index>, Index> composites_;
  std::vector<FiniteCategory::StrayEntry> conflicts_;
};

/// Functor between finite categories, given on objects and morphisms.
struct CatFunctor {
  std::vector<Index> object_map;
  std::vector<Index> morphism_map;

  friend bool operator==(const CatFunctor&, const CatFunctor&) = default;
};

inline CatFunctor identity_functor(const FiniteCategory& c) {
  CatFunctor f;
  f.object_map.resize(c.object_count());
  f.morphism_map.resize(c.morphism_count());
  std::iota(f.object_map.begin(), f.object_map.end(), Index{0});
  std::iota(f.morphism_map.begin(), f.morphism_map.end(), Index{0});
  return f;
}

/// g after f.
inline CatFunctor compose_functors(const CatFunctor& g, const CatFunctor& f) {
  CatFunctor out;
  for (Index o : f.object_map) out.object_map.push_back(g.object_map[o]);
  for (Index m : f.morphism_map) out.morphism_map.push_back(g.morphism_map[m]);
  return out;
}

inline ValidationReport validate_category(const FiniteCategory& c) {
  ValidationReport report;
  const auto name = [&](Index m) { return c.morphism_name(m); };
  for (const auto& s : c.stray_entries())
    report.add(s.reason == "conflicting composite" ? "conflicting-composite" : "stray-composite",
               s.reason + ": (" + name(s.g) + ", " + name(s.f) + ") -> " + name(s.gf));

  for (Index o = 0; o < c.object_count(); ++o) {
    Index id = c.identity(o);
    if (c.dom(id) != o || c.cod(id) != o)
      report.add("identity-type", "identity " + name(id) + " is not an endomorphism of " + c.object_name(o));
  }

  for (Index g = 0; g < c.morphism_count(); ++g) {
    for (Index f : c.incoming(c.dom(g))) {
      Index gf = c.compose(g, f);
      if (gf == kNone) {
        report.add("missing-composite", "missing composite (" + name(g) + ", " + name(f) + ")");
        continue;
      }
      if (c.dom(gf) != c.dom(f) || c.cod(gf) != c.cod(g))
        report.add("composite-type", "composite of (" + name(g) + ", " + name(f) + ") is " + name(gf) +
                                         " with the wrong endpoints");
    }
  }

  for (Index m = 0; m < c.morphism_count(); ++m) {
    if (c.compose(c.identity(c.cod(m)), m) != m)
      report.add("unit-law", "id_" + c.object_name(c.cod(m)) + " o " + name(m) + " != " + name(m));
    if (c.compose(m, c.identity(c.dom(m))) != m)
      report.add("unit-law", name(m) + " o id_" + c.object_name(c.dom(m)) + " != " + name(m));
  }

  for (Index f = 0; f < c.morphism_count(); ++f) {
    for (Index g : c.outgoing(c.cod(f))) {
      Index gf = c.compose(g, f);
      if (gf == kNone || c.cod(gf) != c.cod(g)) continue;
      for (Index h : c.outgoing(c.cod(g))) {
        Index hg = c.compose(h, g);
        if (hg == kNone || c.dom(hg) != c.dom(g)) continue;
        Index left = c.compose(h, gf);
        Index right = c.compose(hg, f);
        if (left == kNone || right == kNone) continue;
        if (left != right)
          report.add("associativity", "associativity fails for (" + name(h) + ", " + name(g) + ", " +
                                          name(f) + ")");
      }
    }
  }
  return report;
}

inline ValidationReport validate_functor(const FiniteCategory& src, const FiniteCategory& tgt,
                                         const CatFunctor& f) {
  ValidationReport report;
  if (f.object_map.size() != static_cast<std::size_t>(src.object_count()) ||
      f.morphism_map.size() != static_cast<std::size_t>(src.morphism_count())) {
    report.add("functor-shape", "object or morphism map does not cover the source");
    return report;
  }
  for (Index o : f.object_map)
    if (o < 0 || o >= tgt.object_count()) {
      report.add("functor-shape", "object map leaves the target");
      return report;
    }
  for (Index m : f.morphism_map)
    if (m < 0 || m >= tgt.morphism_count()) {
      report.add("functor-shape", "morphism map leaves the target");
      return report;
    }
  for (Index m = 0; m < src.morphism_count(); ++m) {
    Index fm = f.morphism_map[m];
    if (tgt.dom(fm) != f.object_map[src.dom(m)] || tgt.cod(fm) != f.object_map[src.cod(m)])
      report.add("functor-endpoints", src.morphism_name(m) + " is sent to " + tgt.morphism_name(fm) +
                                          " with mismatched endpoints");
  }
  for (Index o = 0; o < src.object_count(); ++o)
    if (f.morphism_map[src.identity(o)] != tgt.identity(f.object_map[o]))
      report.add("functor-identity", "identity of " + src.object_name(o) + " is not preserved");
  for (Index g = 0; g < src.morphism_count(); ++g)
    for (Index h : src.incoming(src.dom(g))) {
      Index gh = src.compose(g, h);
      if (gh == kNone) continue;
      Index image = tgt.compose(f.morphism_map[g], f.morphism_map[h]);
      if (image == kNone) continue;
      if (image != f.morphism_map[gh])
        report.add("functor-composition", "composite (" + src.morphism_name(g) + ", " + src.morphism_name(h) +
                                              ") is not preserved");
    }
  return report;
}

/// Some m' with m' o m = id_dom and m o m' = id_cod, if any.
inline std::optional<Index> inverse_of(const FiniteCategory& c, Index m) {
  for (Index cand : c.hom(c.cod(m), c.dom(m)))
    if (c.compose(cand, m) == c.identity(c.dom(m)) && c.compose(m, cand) == c.identity(c.cod(m)))
      return cand;
  return std::nullopt;
}

inline bool is_isomorphism(const FiniteCategory& c, Index m) {
  if (m < 0 || m >= c.morphism_count()) throw InputError("morphism index out of range");
  return inverse_of(c, m).has_value();
}

inline bool is_isomorphism(const FiniteCategory& c, const std::string& name) {
  return is_isomorphism(c, c.morphism(name));
}

/// Objects up to isomorphism.
inline Partition isomorphism_classes(const FiniteCategory& c) {
  UnionFind uf(static_cast<std::size_t>(c.object_count()));
  for (Index m = 0; m < c.morphism_count(); ++m)
    if (c.dom(m) != c.cod(m) && inverse_of(c, m)) uf.unite(c.dom(m), c.cod(m));
  return Partition::from_labels(uf.labels());
}

inline IndexSet identities(const FiniteCategory& c) {
  IndexSet s(static_cast<std::size_t>(c.morphism_count()));
  for (Index o = 0; o < c.object_count(); ++o) s.insert(c.identity(o));
  return s;
}

/// Smallest set containing the generators and all identities that is closed
/// under (recorded) composition.
inline IndexSet composition_closure(const FiniteCategory& c, const IndexSet& generators) {
  IndexSet closed = identities(c);
  closed.merge(generators);
  std::vector<Index> work = closed.members();
  while (!work.empty()) {
    Index m = work.back();
    work.pop_back();
    auto try_add = [&](Index x) {
      if (x != kNone && !closed.contains(x)) {
        closed.insert(x);
        work.push_back(x);
      }
    };
    for (Index g : c.outgoing(c.cod(m)))
      if (closed.contains(g)) try_add(c.compose(g, m));
    for (Index f : c.incoming(c.dom(m)))
      if (closed.contains(f)) try_add(c.compose(m, f));
  }
  return closed;
}

/// Violations of "wide subcategory": missing identities or missing composites.
inline ValidationReport validate_wide_subcategory(const FiniteCategory& c, const IndexSet& s,
                                                   const std::string& label = "subcategory") {
  ValidationReport report;
  if (s.universe() != static_cast<std::size_t>(c.morphism_count())) {
    report.add("subcategory-shape", label + " is not a morphism set of this category");
    return report;
  }
  for (Index o = 0; o < c.object_count(); ++o)
    if (!s.contains(c.identity(o)))
      report.add("subcategory-identity", label + " is missing the identity of " + c.object_name(o));
  for (Index g : s.members())
    for (Index f : c.incoming(c.dom(g))) {
      if (!s.contains(f)) continue;
      Index gf = c.compose(g, f);
      if (gf != kNone && !s.contains(gf))
        report.add("subcategory-closure", label + " lacks the composite " + c.morphism_name(gf) + " of (" +
                                              c.morphism_name(g) + ", " + c.morphism_name(f) + ")");
    }
  return report;
}

/// Smallest subcategory containing two wide subcategories.
inline IndexSet subcategory_span(const FiniteCategory& c, const IndexSet& u, const IndexSet& v) {
  for (const auto* s : {&u, &v}) {
    auto report = validate_wide_subcategory(c, *s);
    if (!report.ok()) throw InputError("subcategory_span: " + report.violations.front().message);
  }
  IndexSet gens = u;
  gens.merge(v);
  return composition_closure(c, gens);
}

/// The subcategory on all objects with the given morphisms, as a category.
inline FiniteCategory induced_subcategory(const FiniteCategory& c, const IndexSet& s) {
  FiniteCategoryBuilder b;
  std::vector<Index> remap(c.morphism_count(), kNone);
  for (Index o = 0; o < c.object_count(); ++o) {
    b.add_object(c.object_name(o), c.morphism_name(c.identity(o)));
    remap[c.identity(o)] = b.identity(o);
  }
  for (Index m : s.members())
    if (remap[m] == kNone) remap[m] = b.add_morphism(c.morphism_name(m), c.dom(m), c.cod(m));
  for (Index g : s.members())
    for (Index f : c.incoming(c.dom(g)))
      if (s.contains(f)) {
        Index gf = c.compose(g, f);
        if (gf != kNone && s.contains(gf)) b.set_composite(remap[g], remap[f], remap[gf]);
      }
  return b.build();
}

// ---------------------------------------------------------------------------
// Equivalences

/// An equivalence of categories with explicit quasi-inverse.
struct Equivalence {
  CatFunctor forward;
  CatFunctor backward;
  std::vector<Index> unit;    ///< per source object x: iso x -> GF(x)
  std::vector<Index> counit;  ///< per target object y: iso FG(y) -> y
};

enum class SearchOutcome { Found, None, Undetermined };

inline const char* to_string(SearchOutcome o) {
  switch (o) {
    case SearchOutcome::Found: return "Found";
    case SearchOutcome::None: return "None";
    case SearchOutcome::Undetermined: return "Undetermined";
  }
  return "?";
}

struct EquivalenceSearch {
  SearchOutcome outcome = SearchOutcome::None;
  std::optional<Equivalence> witness;
  std::size_t nodes = 0;
};

/// Outcome of checking one given functor for being an equivalence.
struct FunctorEquivalenceCheck {
  bool fully_faithful = false;
  bool essentially_surjective = false;
  std::string witness;  ///< first failure, human readable
  std::optional<Equivalence> equivalence;

  [[nodiscard]] bool ok() const { return fully_faithful && essentially_surjective; }
};

namespace detail {

/// The unique m : a -> b with F(m) = target, if F is faithful on that hom.
inline Index preimage(const FiniteCategory& src, const CatFunctor& f, Index a, Index b, Index target) {
  for (Index m : src.hom(a, b))
    if (f.morphism_map[m] == target) return m;
  return kNone;
}

}  // namespace detail

/// Checks full faithfulness and essential surjectivity of a functor and, on
/// success, completes it to an equivalence with quasi-inverse and natural
/// isomorphisms.
inline FunctorEquivalenceCheck check_equivalence_functor(const FiniteCategory& src, const FiniteCategory& tgt,
                                                         const CatFunctor& f) {
  FunctorEquivalenceCheck out;
  for (Index a = 0; a < src.object_count() && out.witness.empty(); ++a)
    for (Index b = 0; b < src.object_count(); ++b) {
      auto h = src.hom(a, b);
      auto th = tgt.hom(f.object_map[a], f.object_map[b]);
      std::vector<Index> images;
      for (Index m : h) images.push_back(f.morphism_map[m]);
      std::sort(images.begin(), images.end());
      bool injective = std::adjacent_find(images.begin(), images.end()) == images.end();
      if (!injective || images.size() != th.size()) {
        out.witness = "not fully faithful on (" + src.object_name(a) + ", " + src.object_name(b) + "): " +
                      std::to_string(h.size()) + " -> " + std::to_string(th.size()) +
                      (injective ? "" : " (not injective)");
        break;
      }
    }
  out.fully_faithful = out.witness.empty();

  // phi[y]: some iso F(x) -> y, with chosen[y] = x.
  std::vector<Index> chosen(tgt.object_count(), kNone), phi(tgt.object_count(), kNone);
  for (Index y = 0; y < tgt.object_count(); ++y) {
    for (Index x = 0; x < src.object_count() && chosen[y] == kNone; ++x) {
      Index fx = f.object_map[x];
      for (Index m : tgt.hom(fx, y))
        if (inverse_of(tgt, m)) {
          chosen[y] = x;
          phi[y] = m;
          break;
        }
    }
    if (chosen[y] == kNone) {
      if (out.witness.empty())
        out.witness = "not essentially surjective: " + tgt.object_name(y) + " is missed";
      out.essentially_surjective = false;
      return out;
    }
  }
  out.essentially_surjective = true;
  if (!out.fully_faithful) return out;

  Equivalence eq;
  eq.forward = f;
  eq.backward.object_map = chosen;
  eq.backward.morphism_map.assign(tgt.morphism_count(), kNone);
  for (Index g = 0; g < tgt.morphism_count(); ++g) {
    Index y = tgt.dom(g), y2 = tgt.cod(g);
    Index phi2_inv = *inverse_of(tgt, phi[y2]);
    Index conj = tgt.compose(phi2_inv, tgt.compose(g, phi[y]));
    if (conj == kNone) throw ConsistencyError("quasi-inverse: composite not recorded in target");
    Index m = detail::preimage(src, f, chosen[y], chosen[y2], conj);
    if (m == kNone) throw ConsistencyError("quasi-inverse: fully faithful functor lacks a preimage");
    eq.backward.morphism_map[g] = m;
  }
  eq.counit = phi;
  eq.unit.assign(src.object_count(), kNone);
  for (Index x = 0; x < src.object_count(); ++x) {
    Index fx = f.object_map[x];
    Index inv = *inverse_of(tgt, phi[fx]);  // F x -> F G F x
    eq.unit[x] = detail::preimage(src, f, x, chosen[fx], inv);
    if (eq.unit[x] == kNone) throw ConsistencyError("unit component lacks a preimage");
  }
  out.equivalence = std::move(eq);
  return out;
}

namespace detail {

/// Backtracking search for fully faithful morphism maps over a fixed object
/// map, with forced propagation along composites.
class MorphismMapSearch {
 public:
  MorphismMapSearch(const FiniteCategory& src, const FiniteCategory& tgt, std::vector<Index> object_map,
                    std::size_t& nodes, std::size_t budget)
      : src_(src), tgt_(tgt), object_map_(std::move(object_map)), nodes_(nodes), budget_(budget) {
    image_.assign(src.morphism_count(), kNone);
    used_.resize(static_cast<std::size_t>(src.object_count()) * src.object_count());
  }

  /// Found / None / Undetermined; result in morphism_map() when Found.
  SearchOutcome run() {
    for (Index o = 0; o < src_.object_count(); ++o)
      if (!assign(src_.identity(o), tgt_.identity(object_map_[o]))) return SearchOutcome::None;
    return recurse(0);
  }

  [[nodiscard]] const std::vector<Index>& morphism_map() const { return image_; }

 private:
  std::vector<Index>& used(Index a, Index b) {
    return used_[static_cast<std::size_t>(a) * src_.object_count() + b];
  }

  bool is_used(Index m, Index t) {
    auto& u = used(src_.dom(m), src_.cod(m));
    return std::find(u.begin(), u.end(), t) != u.end();
  }

  /// Assigns m -> t and propagates; records everything on the trail.
  bool assign(Index m, Index t) {
    std::vector<std::pair<Index, Index>> queue{{m, t}};
    while (!queue.empty()) {
      auto [x, tx] = queue.back();
      queue.pop_back();
      if (image_[x] != kNone) {
        if (image_[x] != tx) return false;
        continue;
      }
      if (tx == kNone) return false;
      if (tgt_.dom(tx) != object_map_[src_.dom(x)] || tgt_.cod(tx) != object_map_[src_.cod(x)]) return false;
      if (is_used(x, tx)) return false;
      image_[x] = tx;
      used(src_.dom(x), src_.cod(x)).push_back(tx);
      trail_.push_back(x);
      for (Index g : src_.outgoing(src_.cod(x))) {
        if (image_[g] == kNone) continue;
        Index gx = src_.compose(g, x);
        if (gx == kNone) continue;
        queue.emplace_back(gx, tgt_.compose(image_[g], tx));
      }
      for (Index f : src_.incoming(src_.dom(x))) {
        if (image_[f] == kNone) continue;
        Index xf = src_.compose(x, f);
        if (xf == kNone) continue;
        queue.emplace_back(xf, tgt_.compose(tx, image_[f]));
      }
    }
    return true;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      Index x = trail_.back();
      trail_.pop_back();
      used(src_.dom(x), src_.cod(x)).pop_back();
      image_[x] = kNone;
    }
  }

  SearchOutcome recurse(Index from) {
    Index m = from;
    while (m < src_.morphism_count() && image_[m] != kNone) ++m;
    if (m == src_.morphism_count()) return SearchOutcome::Found;
    bool undetermined = false;
    for (Index t : tgt_.hom(object_map_[src_.dom(m)], object_map_[src_.cod(m)])) {
      if (is_used(m, t)) continue;
      if (++nodes_ > budget_) return SearchOutcome::Undetermined;
      std::size_t mark = trail_.size();
      if (assign(m, t)) {
        auto r = recurse(m + 1);
        if (r == SearchOutcome::Found) return r;
        if (r == SearchOutcome::Undetermined) undetermined = true;
      }
      undo_to(mark);
      if (undetermined) return SearchOutcome::Undetermined;
    }
    return SearchOutcome::None;
  }

  const FiniteCategory& src_;
  const FiniteCategory& tgt_;
  std::vector<Index> object_map_;
  std::size_t& nodes_;
  std::size_t budget_;
  std::vector<Index> image_;
  std::vector<std::vector<Index>> used_;
  std::vector<Index> trail_;
};

}  // namespace detail

/// Searches for an equivalence c1 -> c2.
///
/// Any equivalence can be conjugated by isomorphisms into one that sends
/// every object to a fixed representative of its image's isomorphism class,
/// so the search runs over bijections between isomorphism classes (ordered
/// by hom-degree data, pruned on hom-set cardinalities) and then over
/// fully faithful morphism maps. `budget` bounds the number of search nodes.
inline EquivalenceSearch find_equivalence(const FiniteCategory& c1, const FiniteCategory& c2, std::size_t budget) {
  EquivalenceSearch result;
  const Partition p1 = isomorphism_classes(c1);
  const Partition p2 = isomorphism_classes(c2);
  if (p1.classes != p2.classes) {
    result.outcome = SearchOutcome::None;
    return result;
  }
  const auto b1 = p1.blocks();
  const auto b2 = p2.blocks();
  const Index k = p1.classes;
  auto homsize = [](const FiniteCategory& c, Index a, Index b) { return c.hom(a, b).size(); };
  auto signature = [&](const FiniteCategory& c, const std::vector<std::vector<Index>>& blocks, Index cls) {
    Index r = blocks[cls].front();
    std::vector<std::size_t> sig{homsize(c, r, r)};
    std::vector<std::size_t> outs, ins;
    for (const auto& other : blocks) {
      outs.push_back(homsize(c, r, other.front()));
      ins.push_back(homsize(c, other.front(), r));
    }
    std::sort(outs.begin(), outs.end());
    std::sort(ins.begin(), ins.end());
    sig.insert(sig.end(), outs.begin(), outs.end());
    sig.insert(sig.end(), ins.begin(), ins.end());
    return sig;
  };
  std::vector<std::vector<std::size_t>> sig1(k), sig2(k);
  for (Index i = 0; i < k; ++i) {
    sig1[i] = signature(c1, b1, i);
    sig2[i] = signature(c2, b2, i);
  }
  std::vector<Index> order(k);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return sig1[a] > sig1[b]; });

  std::vector<Index> assignment(k, kNone);
  std::vector<bool> taken(k, false);
  bool undetermined = false;

  std::function<bool(std::size_t)> place = [&](std::size_t depth) -> bool {
    if (depth == order.size()) {
      std::vector<Index> object_map(c1.object_count());
      for (Index x = 0; x < c1.object_count(); ++x) object_map[x] = b2[assignment[p1.label[x]]].front();
      detail::MorphismMapSearch search(c1, c2, object_map, result.nodes, budget);
      auto r = search.run();
      if (r == SearchOutcome::Found) {
        CatFunctor f{object_map, search.morphism_map()};
        auto check = check_equivalence_functor(c1, c2, f);
        if (!check.equivalence) throw ConsistencyError("equivalence search produced a non-equivalence");
        result.witness = std::move(check.equivalence);
        return true;
      }
      if (r == SearchOutcome::Undetermined) undetermined = true;
      return false;
    }
    Index cls = order[depth];
    for (Index cand = 0; cand < k; ++cand) {
      if (taken[cand] || sig1[cls] != sig2[cand]) continue;
      bool consistent = true;
      for (std::size_t d = 0; d < depth && consistent; ++d) {
        Index other = order[d];
        Index r1 = b1[cls].front(), o1 = b1[other].front();
        Index r2 = b2[cand].front(), o2 = b2[assignment[other]].front();
        consistent = homsize(c1, r1, o1) == homsize(c2, r2, o2) && homsize(c1, o1, r1) == homsize(c2, o2, r2);
      }
      if (!consistent) continue;
      if (++result.nodes > budget) {
        undetermined = true;
        return false;
      }
      taken[cand] = true;
      assignment[cls] = cand;
      if (place(depth + 1)) return true;
      taken[cand] = false;
      assignment[cls] = kNone;
      if (undetermined) return false;
    }
    return false;
  };

  if (place(0))
    result.outcome = SearchOutcome::Found;
  else
    result.outcome = undetermined ? SearchOutcome::Undetermined : SearchOutcome::None;
  return result;
}

// ---------------------------------------------------------------------------
// Small standard categories, used by tests, examples and the CLI.

namespace cats {

inline FiniteCategory terminal() {
  FiniteCategoryBuilder b;
  b.add_object("*");
  return b.build();
}

/// n objects, identities only.
inline FiniteCategory discrete(int n) {
  FiniteCategoryBuilder b;
  for (int i = 0; i < n; ++i) b.add_object("O" + std::to_string(i));
  return b.build();
}

/// X --f--> Y
inline FiniteCategory walking_arrow(const std::string& arrow = "f") {
  FiniteCategoryBuilder b;
  Index x = b.add_object("X");
  Index y = b.add_object("Y");
  b.add_morphism(arrow, x, y);
  return b.build();
}

/// X --f--> Y --g--> X with g f = id, f g = id.
inline FiniteCategory walking_isomorphism() {
  FiniteCategoryBuilder b;
  Index x = b.add_object("X");
  Index y = b.add_object("Y");
  Index f = b.add_morphism("f", x, y);
  Index g = b.add_morphism("g", y, x);
  b.set_composite(g, f, b.identity(x));
  b.set_composite(f, g, b.identity(y));
  return b.build();
}

/// The totally ordered set 0 < 1 < ... < n-1 as a category; the arrow
/// i -> j is named "i<j".
inline FiniteCategory linear_order(int n) {
  FiniteCategoryBuilder b;
  for (int i = 0; i < n; ++i) b.add_object(std::to_string(i));
  std::vector<std::vector<Index>> arrow(n, std::vector<Index>(n, kNone));
  for (int i = 0; i < n; ++i) arrow[i][i] = b.identity(i);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) arrow[i][j] = b.add_morphism(std::to_string(i) + "<" + std::to_string(j), i, j);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k) b.set_composite(arrow[j][k], arrow[i][j], arrow[i][k]);
  return b.build();
}

/// X --f--> Y --g--> Z with composite gf.
inline FiniteCategory chain3() {
  FiniteCategoryBuilder b;
  Index x = b.add_object("X");
  Index y = b.add_object("Y");
  Index z = b.add_object("Z");
  Index f = b.add_morphism("f", x, y);
  Index g = b.add_morphism("g", y, z);
  Index gf = b.add_morphism("gf", x, z);
  b.set_composite(g, f, gf);
  return b.build();
}

/// B <--l-- A --r--> C
inline FiniteCategory span() {
  FiniteCategoryBuilder b;
  Index a = b.add_object("A");
  Index l = b.add_object("B");
  Index r = b.add_object("C");
  b.add_morphism("l", a, l);
  b.add_morphism("r", a, r);
  return b.build();
}

/// One object with morphisms e^0..e^{n-1}, composition adding exponents mod n.
inline FiniteCategory cyclic_group(int n) {
  FiniteCategoryBuilder b;
  Index o = b.add_object("G", "e0");
  std::vector<Index> e{b.identity(o)};
  for (int i = 1; i < n; ++i) e.push_back(b.add_morphism("e" + std::to_string(i), o, o));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b.set_composite(e[i], e[j], e[(i + j) % n]);
  return b.build();
}

/// n objects, exactly one morphism between any two (all isomorphisms).
inline FiniteCategory indiscrete(int n) {
  FiniteCategoryBuilder b;
  for (int i = 0; i < n; ++i) b.add_object("P" + std::to_string(i));
  std::vector<std::vector<Index>> arrow(n, std::vector<Index>(n, kNone));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      arrow[i][j] = i == j ? b.identity(i) : b.add_morphism("P" + std::to_string(i) + ">P" + std::to_string(j), i, j);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) b.set_composite(arrow[j][k], arrow[i][j], arrow[i][k]);
  return b.build();
}

/// Disjoint union; object and morphism names are prefixed with "L." / "R.".
inline FiniteCategory coproduct(const FiniteCategory& a, const FiniteCategory& c) {
  FiniteCategoryBuilder b;
  std::vector<Index> ma(a.morphism_count()), mc(c.morphism_count());
  for (Index o = 0; o < a.object_count(); ++o) {
    Index n = b.add_object("L." + a.object_name(o), "L." + a.morphism_name(a.identity(o)));
    ma[a.identity(o)] = b.identity(n);
  }
  for (Index o = 0; o < c.object_count(); ++o) {
    Index n = b.add_object("R." + c.object_name(o), "R." + c.morphism_name(c.identity(o)));
    mc[c.identity(o)] = b.identity(n);
  }
  const Index shift = a.object_count();
  for (Index m = 0; m < a.morphism_count(); ++m)
    if (!a.is_identity(m)) ma[m] = b.add_morphism("L." + a.morphism_name(m), a.dom(m), a.cod(m));
  for (Index m = 0; m < c.morphism_count(); ++m)
    if (!c.is_identity(m)) mc[m] = b.add_morphism("R." + c.morphism_name(m), c.dom(m) + shift, c.cod(m) + shift);
  for (Index g = 0; g < a.morphism_count(); ++g)
    for (Index f : a.incoming(a.dom(g)))
      if (Index gf = a.compose(g, f); gf != kNone) b.set_composite(ma[g], ma[f], ma[gf]);
  for (Index g = 0; g < c.morphism_count(); ++g)
    for (Index f : c.incoming(c.dom(g)))
      if (Index gf = c.compose(g, f); gf != kNone) b.set_composite(mc[g], mc[f], mc[gf]);
  return b.build();
}

}  // namespace cats

}  // namespace simploc
