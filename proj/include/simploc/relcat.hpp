#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "simploc/fincat.hpp"

namespace simploc {

/// A category together with a wide subcategory of weak equivalences.
struct RelativeCategory {
  FiniteCategory cat;
  IndexSet weq;

  [[nodiscard]] bool is_weq(Index m) const { return weq.contains(m); }
};

/// Weak equivalences are the identities only.
inline RelativeCategory minimal_relative(FiniteCategory c) {
  IndexSet ids = identities(c);
  return {std::move(c), std::move(ids)};
}

/// Relative category with the named morphisms (plus identities) as weak
/// equivalences; no closure is taken.
inline RelativeCategory with_weq(FiniteCategory c, const std::vector<std::string>& names) {
  IndexSet w = identities(c);
  for (const auto& n : names) w.insert(c.morphism(n));
  return {std::move(c), std::move(w)};
}

/// Functor preserving weak equivalences.
struct RelativeFunctor {
  CatFunctor underlying;
};

inline ValidationReport validate_relative(const RelativeCategory& r) {
  ValidationReport report = validate_category(r.cat);
  report.append(validate_wide_subcategory(r.cat, r.weq, "weq"));
  return report;
}

inline ValidationReport validate_relative_functor(const RelativeCategory& src, const RelativeCategory& tgt,
                                                  const RelativeFunctor& f) {
  ValidationReport report = validate_functor(src.cat, tgt.cat, f.underlying);
  if (!report.ok()) return report;
  for (Index m : src.weq.members())
    if (!tgt.weq.contains(f.underlying.morphism_map[m]))
      report.add("weq-preservation", "weak equivalence " + src.cat.morphism_name(m) + " is sent to " +
                                         tgt.cat.morphism_name(f.underlying.morphism_map[m]) +
                                         ", which is not a weak equivalence");
  return report;
}

/// Adds `extra` to the weak equivalences and closes under composition.
inline RelativeCategory union_weq(const RelativeCategory& r, const IndexSet& extra) {
  if (extra.universe() != static_cast<std::size_t>(r.cat.morphism_count()))
    throw InputError("union_weq: morphism set does not belong to this category");
  IndexSet gens = r.weq;
  gens.merge(extra);
  return {r.cat, composition_closure(r.cat, gens)};
}

// ---------------------------------------------------------------------------
// Bounded zigzag-word oracle for the localized hom-sets C[W^-1](x, y).

/// A zigzag word in path order. Letter 2m is m traversed forwards, letter
/// 2m+1 is the weak equivalence m traversed backwards. Identity letters never
/// occur; the empty word is the identity.
using ZigzagWord = std::vector<Index>;

inline Index forward_letter(Index m) { return 2 * m; }
inline Index backward_letter(Index m) { return 2 * m + 1; }
inline Index letter_morphism(Index l) { return l / 2; }
inline bool letter_is_backward(Index l) { return (l & 1) != 0; }

inline std::string format_word(const FiniteCategory& c, const ZigzagWord& w, Index source) {
  if (w.empty()) return "id(" + c.object_name(source) + ")";
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ";";
    s += c.morphism_name(letter_morphism(w[i]));
    if (letter_is_backward(w[i])) s += "^-1";
  }
  return s;
}

/// All identity-free zigzag words from one source of length <= max_len,
/// with the equivalence closure of single rewrites computed by union-find.
///
/// Rewrites: composing adjacent forward letters, cancelling w;w^-1 and
/// w^-1;w, and sliding squares g;w^-1 <-> v^-1;g' whenever g v = w g' in C.
/// Identity letters produced by a rewrite are dropped on the spot, which
/// accounts for the degenerate squares in which one side is an identity.
class ZigzagSaturation {
 public:
  ZigzagSaturation(const RelativeCategory& r, Index source, int max_len)
      : r_(&r), source_(source), max_len_(max_len) {
    if (max_len < 0) throw InputError("max_len must be nonnegative");
    enumerate();
    saturate();
  }

  [[nodiscard]] Index source() const { return source_; }
  [[nodiscard]] int max_len() const { return max_len_; }
  [[nodiscard]] std::size_t word_count() const { return words_.size(); }
  [[nodiscard]] const ZigzagWord& word(Index id) const { return words_[id]; }
  [[nodiscard]] Index target(Index id) const { return target_[id]; }

  /// Word id, or kNone if the word is not in the bounded set.
  [[nodiscard]] Index find(const ZigzagWord& w) const {
    auto it = index_.find(w);
    return it == index_.end() ? kNone : it->second;
  }

  /// Class of a word among words to the same target; kNone if unknown.
  [[nodiscard]] Index class_of(const ZigzagWord& w) const {
    Index id = find(w);
    return id == kNone ? kNone : class_label_[id];
  }

  /// Word ids ending at y, in canonical (length, lexicographic) order.
  [[nodiscard]] std::vector<Index> words_to(Index y, int up_to_len) const {
    std::vector<Index> out;
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (target_[i] == y && static_cast<int>(words_[i].size()) <= up_to_len) out.push_back(static_cast<Index>(i));
    return out;
  }

  /// Class labels (renumbered by first occurrence) of the given words.
  [[nodiscard]] Partition partition_of(const std::vector<Index>& ids) const {
    std::unordered_map<Index, Index> relabel;
    std::vector<Index> labels;
    for (Index id : ids) {
      auto [it, inserted] = relabel.emplace(class_label_[id], static_cast<Index>(relabel.size()));
      labels.push_back(it->second);
    }
    return Partition::from_labels(std::move(labels));
  }

 private:
  void add_word(ZigzagWord w, Index tgt) {
    Index id = static_cast<Index>(words_.size());
    index_.emplace(w, id);
    words_.push_back(std::move(w));
    target_.push_back(tgt);
  }

  void enumerate() {
    const auto& c = r_->cat;
    add_word({}, source_);
    std::size_t level_begin = 0;
    for (int len = 1; len <= max_len_; ++len) {
      std::size_t level_end = words_.size();
      for (std::size_t i = level_begin; i < level_end; ++i) {
        // Copy: add_word may reallocate words_.
        ZigzagWord base = words_[i];
        Index at = target_[i];
        std::vector<std::pair<Index, Index>> letters;  // (letter, new endpoint)
        for (Index m : c.outgoing(at))
          if (!c.is_identity(m)) letters.emplace_back(forward_letter(m), c.cod(m));
        for (Index m : c.incoming(at))
          if (!c.is_identity(m) && r_->is_weq(m)) letters.emplace_back(backward_letter(m), c.dom(m));
        std::sort(letters.begin(), letters.end());
        for (auto [l, next] : letters) {
          ZigzagWord w = base;
          w.push_back(l);
          add_word(std::move(w), next);
        }
      }
      level_begin = level_end;
    }
  }

  void link(UnionFind& uf, Index id, const ZigzagWord& prefix, const std::vector<Index>& middle,
            const ZigzagWord& word, std::size_t resume) {
    ZigzagWord out = prefix;
    for (Index l : middle)
      if (!r_->cat.is_identity(letter_morphism(l))) out.push_back(l);
    out.insert(out.end(), word.begin() + static_cast<std::ptrdiff_t>(resume), word.end());
    Index other = find(out);
    if (other != kNone) uf.unite(id, other);
  }

  void saturate() {
    const auto& c = r_->cat;
    UnionFind uf(words_.size());
    for (std::size_t id = 0; id < words_.size(); ++id) {
      const ZigzagWord w = words_[id];
      for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        ZigzagWord prefix(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
        Index a = w[i], b = w[i + 1];
        Index ma = letter_morphism(a), mb = letter_morphism(b);
        bool ba = letter_is_backward(a), bb = letter_is_backward(b);
        if (!ba && !bb) {
          Index comp = c.compose(mb, ma);
          if (comp != kNone) link(uf, static_cast<Index>(id), prefix, {forward_letter(comp)}, w, i + 2);
        }
        if (ma == mb && ba != bb) link(uf, static_cast<Index>(id), prefix, {}, w, i + 2);
        if (!ba && bb) {
          // g ; w^-1  ->  v^-1 ; g'   with g v = w g'
          Index g = ma, wv = mb;
          Index corner_a = c.dom(g), corner_c = c.dom(wv);
          for (Index v : c.incoming(corner_a)) {
            if (!r_->is_weq(v)) continue;
            Index gv = c.compose(g, v);
            if (gv == kNone) continue;
            for (Index g2 : c.hom(c.dom(v), corner_c)) {
              if (c.compose(wv, g2) != gv) continue;
              link(uf, static_cast<Index>(id), prefix, {backward_letter(v), forward_letter(g2)}, w, i + 2);
            }
          }
        }
        if (ba && !bb) {
          // v^-1 ; g'  ->  g ; w^-1   with g v = w g'
          Index v = ma, g2 = mb;
          Index corner_a = c.cod(v), corner_c = c.cod(g2);
          for (Index wv : c.outgoing(corner_c)) {
            if (!r_->is_weq(wv)) continue;
            Index wg = c.compose(wv, g2);
            if (wg == kNone) continue;
            for (Index g : c.hom(corner_a, c.cod(wv))) {
              if (c.compose(g, v) != wg) continue;
              link(uf, static_cast<Index>(id), prefix, {forward_letter(g), backward_letter(wv)}, w, i + 2);
            }
          }
        }
      }
    }
    class_label_ = uf.labels();
  }

  const RelativeCategory* r_;
  Index source_;
  int max_len_;
  std::vector<ZigzagWord> words_;
  std::vector<Index> target_;
  std::unordered_map<ZigzagWord, Index, VectorHash> index_;
  std::vector<Index> class_label_;
};

struct ZigzagClass {
  ZigzagWord representative;  ///< shortest, then lexicographically least
  std::string name;
  std::size_t size = 0;  ///< number of words of length <= max_len in the class
};

struct LocalizedHomset {
  bool determined = false;
  int max_len = 0;
  std::vector<ZigzagClass> classes;
};

namespace detail {

inline std::vector<ZigzagClass> zigzag_classes(const RelativeCategory& r, const ZigzagSaturation& s, Index y,
                                               int len) {
  auto ids = s.words_to(y, len);
  Partition p = s.partition_of(ids);
  std::vector<ZigzagClass> out(static_cast<std::size_t>(p.classes));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto& cls = out[p.label[i]];
    if (cls.size++ == 0) {
      cls.representative = s.word(ids[i]);
      cls.name = format_word(r.cat, cls.representative, s.source());
    }
  }
  return out;
}

}  // namespace detail

/// Localized hom-set x -> y by bounded word saturation; determined only if
/// the class structure of the words up to max_len is unchanged when the
/// bound is raised to max_len + 2.
inline LocalizedHomset oracle_localized_homset(const RelativeCategory& r, Index x, Index y, int max_len) {
  ZigzagSaturation low(r, x, max_len);
  ZigzagSaturation high(r, x, max_len + 2);
  LocalizedHomset out;
  out.max_len = max_len;
  out.classes = detail::zigzag_classes(r, low, y, max_len);
  auto ids_low = low.words_to(y, max_len);
  std::vector<Index> ids_high;
  for (Index id : ids_low) ids_high.push_back(high.find(low.word(id)));
  bool same_partition = low.partition_of(ids_low) == high.partition_of(ids_high);
  bool no_new_classes = high.partition_of(high.words_to(y, max_len + 2)).classes ==
                        static_cast<Index>(out.classes.size());
  out.determined = same_partition && no_new_classes;
  return out;
}

}  // namespace simploc
