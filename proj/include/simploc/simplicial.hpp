#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "simploc/fincat.hpp"
#include "simploc/smith.hpp"

namespace simploc {

/// A monotone map [source_dim] -> [target_dim] in the simplex category.
/// It acts on simplices contravariantly, carrying target_dim-simplices to
/// source_dim-simplices.
struct SimplicialOperator {
  int source_dim = 0;
  int target_dim = 0;
  std::vector<int> images;

  [[nodiscard]] bool valid() const {
    if (source_dim < 0 || target_dim < 0 || images.size() != static_cast<std::size_t>(source_dim) + 1) return false;
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (images[i] < 0 || images[i] > target_dim) return false;
      if (i && images[i] < images[i - 1]) return false;
    }
    return true;
  }
  [[nodiscard]] bool is_identity() const { return source_dim == target_dim && valid() && images.back() == target_dim && images.front() == 0 && is_injective(); }
  [[nodiscard]] bool is_injective() const {
    for (std::size_t i = 1; i < images.size(); ++i)
      if (images[i] == images[i - 1]) return false;
    return true;
  }
  [[nodiscard]] bool is_surjective() const {
    return images.front() == 0 && images.back() == target_dim &&
           [&] {
             for (std::size_t i = 1; i < images.size(); ++i)
               if (images[i] - images[i - 1] > 1) return false;
             return true;
           }();
  }

  static SimplicialOperator identity(int n) {
    SimplicialOperator op{n, n, {}};
    for (int i = 0; i <= n; ++i) op.images.push_back(i);
    return op;
  }
  /// The coface [n-1] -> [n] skipping i (acts as the face d_i).
  static SimplicialOperator coface(int n, int i) {
    SimplicialOperator op{n - 1, n, {}};
    for (int k = 0; k < n; ++k) op.images.push_back(k < i ? k : k + 1);
    return op;
  }
  /// The codegeneracy [n+1] -> [n] hitting i twice (acts as s_i).
  static SimplicialOperator codegeneracy(int n, int i) {
    SimplicialOperator op{n + 1, n, {}};
    for (int k = 0; k <= n + 1; ++k) op.images.push_back(k <= i ? k : k - 1);
    return op;
  }

  friend bool operator==(const SimplicialOperator&, const SimplicialOperator&) = default;
  friend auto operator<=>(const SimplicialOperator&, const SimplicialOperator&) = default;
};

/// p followed by q, i.e. the monotone map q o p.
inline SimplicialOperator compose_operators(const SimplicialOperator& p, const SimplicialOperator& q) {
  if (!p.valid() || !q.valid()) throw InputError("compose_operators: invalid operator");
  if (p.target_dim != q.source_dim)
    throw InputError("compose_operators: dimension mismatch " + std::to_string(p.target_dim) + " vs " +
                     std::to_string(q.source_dim));
  SimplicialOperator out{p.source_dim, q.target_dim, {}};
  for (int v : p.images) out.images.push_back(q.images[v]);
  return out;
}

/// All monotone maps [m] -> [n] in lexicographic order of image lists.
inline std::vector<SimplicialOperator> monotone_maps(int m, int n) {
  std::vector<SimplicialOperator> out;
  SimplicialOperator cur{m, n, std::vector<int>(static_cast<std::size_t>(m) + 1, 0)};
  for (;;) {
    out.push_back(cur);
    int k = m;
    while (k >= 0 && cur.images[k] == n) --k;
    if (k < 0) break;
    ++cur.images[k];
    for (int j = k + 1; j <= m; ++j) cur.images[j] = cur.images[k];
  }
  return out;
}

inline std::string format_operator(const SimplicialOperator& op) {
  std::string s = "[";
  for (std::size_t i = 0; i < op.images.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(op.images[i]);
  }
  return s + "]";
}

/// A simplicial set restricted to dimensions 0..truncation, stored through
/// its face and degeneracy maps.
class TruncatedSimplicialSet {
 public:
  TruncatedSimplicialSet() = default;
  explicit TruncatedSimplicialSet(int truncation)
      : truncation_(truncation),
        names_(static_cast<std::size_t>(truncation) + 1),
        index_(static_cast<std::size_t>(truncation) + 1),
        faces_(static_cast<std::size_t>(truncation) + 1),
        degeneracies_(static_cast<std::size_t>(truncation) + 1) {
    if (truncation < 0) throw InputError("truncation must be nonnegative");
    for (int n = 0; n <= truncation; ++n) {
      faces_[n].resize(n == 0 ? 0 : static_cast<std::size_t>(n) + 1);
      degeneracies_[n].resize(n == truncation ? 0 : static_cast<std::size_t>(n) + 1);
    }
  }

  [[nodiscard]] int truncation() const { return truncation_; }
  [[nodiscard]] Index size(int level) const { return static_cast<Index>(names_.at(level).size()); }
  [[nodiscard]] const std::string& name(int level, Index s) const { return names_.at(level).at(s); }

  [[nodiscard]] std::optional<Index> find(int level, const std::string& name) const {
    auto it = index_.at(level).find(name);
    if (it == index_[level].end()) return std::nullopt;
    return it->second;
  }

  Index add_simplex(int level, const std::string& name) {
    if (index_.at(level).count(name))
      throw InputError("duplicate simplex '" + name + "' at level " + std::to_string(level));
    Index s = size(level);
    names_[level].push_back(name);
    index_[level].emplace(name, s);
    for (auto& f : faces_[level]) f.push_back(kNone);
    for (auto& d : degeneracies_[level]) d.push_back(kNone);
    return s;
  }

  void set_face(int level, int i, Index s, Index t) { faces_.at(level).at(i).at(s) = t; }
  void set_degeneracy(int level, int i, Index s, Index t) { degeneracies_.at(level).at(i).at(s) = t; }

  /// d_i : X_level -> X_{level-1}
  [[nodiscard]] Index face(int level, int i, Index s) const { return faces_[level][i][s]; }
  /// s_i : X_level -> X_{level+1}
  [[nodiscard]] Index degeneracy(int level, int i, Index s) const { return degeneracies_[level][i][s]; }

  /// Action of a monotone map [m] -> [n] on an n-simplex, through its
  /// factorization into a surjection followed by an injection: faces are
  /// applied first, then degeneracies.
  [[nodiscard]] Index act(const SimplicialOperator& op, Index s) const {
    if (!op.valid()) throw InputError("act: invalid operator");
    if (op.source_dim > truncation_ || op.target_dim > truncation_)
      throw InputError("act: operator beyond truncation");
    std::vector<int> distinct;
    for (int v : op.images)
      if (distinct.empty() || distinct.back() != v) distinct.push_back(v);
    int level = op.target_dim;
    Index cur = s;
    for (int j = op.target_dim; j >= 0 && cur != kNone; --j) {
      if (std::find(distinct.begin(), distinct.end(), j) != distinct.end()) continue;
      cur = face(level, j, cur);
      --level;
    }
    // Now cur is a k-simplex with k = distinct.size() - 1; insert repeats.
    for (std::size_t p = 0; p + 1 < op.images.size() && cur != kNone; ++p)
      if (op.images[p] == op.images[p + 1]) {
        cur = degeneracy(level, static_cast<int>(p), cur);
        ++level;
      }
    return cur;
  }

  /// Simplices in the image of some degeneracy.
  [[nodiscard]] std::vector<bool> degenerate(int level) const {
    std::vector<bool> out(static_cast<std::size_t>(size(level)), false);
    if (level == 0) return out;
    for (const auto& d : degeneracies_[level - 1])
      for (Index t : d)
        if (t != kNone) out[t] = true;
    return out;
  }

  /// n-fold degeneracy s_0 ... s_0 of a 0-simplex.
  [[nodiscard]] Index degenerate_vertex(Index v, int level) const {
    Index cur = v;
    for (int n = 0; n < level; ++n) cur = degeneracy(n, 0, cur);
    return cur;
  }

 private:
  int truncation_ = 0;
  std::vector<std::vector<std::string>> names_;
  std::vector<std::unordered_map<std::string, Index>> index_;
  std::vector<std::vector<std::vector<Index>>> faces_;
  std::vector<std::vector<std::vector<Index>>> degeneracies_;
};

/// Every simplex of every level is fixed by all operators: a constant
/// simplicial set on the given points.
inline TruncatedSimplicialSet discrete_simplicial_set(const std::vector<std::string>& points, int truncation) {
  TruncatedSimplicialSet x(truncation);
  for (int n = 0; n <= truncation; ++n)
    for (const auto& p : points) x.add_simplex(n, p);
  for (int n = 0; n <= truncation; ++n)
    for (Index s = 0; s < x.size(n); ++s) {
      for (int i = 0; n > 0 && i <= n; ++i) x.set_face(n, i, s, s);
      for (int i = 0; n < truncation && i <= n; ++i) x.set_degeneracy(n, i, s, s);
    }
  return x;
}

/// Checks that all structure maps are defined and the simplicial identities
/// hold wherever both sides live inside the truncation.
inline ValidationReport validate_simplicial_set(const TruncatedSimplicialSet& x) {
  ValidationReport report;
  const int top = x.truncation();
  auto where = [&](int n, Index s) { return "'" + x.name(n, s) + "' (level " + std::to_string(n) + ")"; };
  for (int n = 0; n <= top; ++n)
    for (Index s = 0; s < x.size(n); ++s) {
      for (int i = 0; n > 0 && i <= n; ++i) {
        Index t = x.face(n, i, s);
        if (t < 0 || t >= x.size(n - 1)) report.add("undefined-face", "d" + std::to_string(i) + " of " + where(n, s));
      }
      for (int i = 0; n < top && i <= n; ++i) {
        Index t = x.degeneracy(n, i, s);
        if (t < 0 || t >= x.size(n + 1))
          report.add("undefined-degeneracy", "s" + std::to_string(i) + " of " + where(n, s));
      }
    }
  if (!report.ok()) return report;

  auto id = [](int a, int b) { return std::to_string(a) + "," + std::to_string(b); };
  for (int n = 0; n <= top; ++n)
    for (Index s = 0; s < x.size(n); ++s) {
      // d_i d_j = d_{j-1} d_i for i < j
      for (int j = 0; n >= 2 && j <= n; ++j)
        for (int i = 0; i < j; ++i)
          if (x.face(n - 1, i, x.face(n, j, s)) != x.face(n - 1, j - 1, x.face(n, i, s)))
            report.add("simplicial-identity", "d" + std::to_string(i) + "d" + std::to_string(j) + " on " + where(n, s));
      if (n >= top) continue;
      for (int j = 0; j <= n; ++j) {
        Index sj = x.degeneracy(n, j, s);
        for (int i = 0; i <= n + 1; ++i) {
          Index lhs = x.face(n + 1, i, sj);
          Index rhs;
          if (i == j || i == j + 1)
            rhs = s;
          else if (i < j)
            rhs = x.degeneracy(n - 1, j - 1, x.face(n, i, s));
          else
            rhs = x.degeneracy(n - 1, j, x.face(n, i - 1, s));
          if (lhs != rhs) report.add("simplicial-identity", "d_i s_j (i,j=" + id(i, j) + ") on " + where(n, s));
        }
        // s_i s_j = s_{j+1} s_i for i <= j
        if (n + 1 < top)
          for (int i = 0; i <= j; ++i)
            if (x.degeneracy(n + 1, i, sj) != x.degeneracy(n + 1, j + 1, x.degeneracy(n, i, s)))
              report.add("simplicial-identity", "s_i s_j (i,j=" + id(i, j) + ") on " + where(n, s));
      }
    }
  return report;
}

/// A map of truncated simplicial sets, one index map per level.
struct SimplicialMap {
  std::vector<std::vector<Index>> levels;

  [[nodiscard]] Index operator()(int level, Index s) const { return levels[level][s]; }
};

inline SimplicialMap identity_map(const TruncatedSimplicialSet& x) {
  SimplicialMap f;
  for (int n = 0; n <= x.truncation(); ++n) {
    f.levels.emplace_back(static_cast<std::size_t>(x.size(n)));
    std::iota(f.levels.back().begin(), f.levels.back().end(), Index{0});
  }
  return f;
}

/// g after f.
inline SimplicialMap compose_maps(const SimplicialMap& g, const SimplicialMap& f) {
  SimplicialMap out;
  for (std::size_t n = 0; n < f.levels.size(); ++n) {
    out.levels.emplace_back();
    for (Index s : f.levels[n]) out.levels.back().push_back(s == kNone ? kNone : g.levels[n][s]);
  }
  return out;
}

inline ValidationReport validate_simplicial_map(const TruncatedSimplicialSet& x, const TruncatedSimplicialSet& y,
                                                const SimplicialMap& f, const std::string& label = "map") {
  ValidationReport report;
  const int top = std::min(x.truncation(), y.truncation());
  if (f.levels.size() < static_cast<std::size_t>(top) + 1) {
    report.add("map-shape", label + " does not cover all levels");
    return report;
  }
  for (int n = 0; n <= top; ++n) {
    if (f.levels[n].size() != static_cast<std::size_t>(x.size(n))) {
      report.add("map-shape", label + " has the wrong size at level " + std::to_string(n));
      return report;
    }
    for (Index t : f.levels[n])
      if (t < 0 || t >= y.size(n)) {
        report.add("map-shape", label + " leaves the target at level " + std::to_string(n));
        return report;
      }
  }
  for (int n = 0; n <= top; ++n)
    for (Index s = 0; s < x.size(n); ++s) {
      for (int i = 0; n > 0 && i <= n; ++i)
        if (f(n - 1, x.face(n, i, s)) != y.face(n, i, f(n, s)))
          report.add("map-face", label + " does not commute with d" + std::to_string(i) + " on '" + x.name(n, s) + "'");
      for (int i = 0; n < top && i <= n; ++i)
        if (f(n + 1, x.degeneracy(n, i, s)) != y.degeneracy(n, i, f(n, s)))
          report.add("map-degeneracy",
                     label + " does not commute with s" + std::to_string(i) + " on '" + x.name(n, s) + "'");
    }
  return report;
}

// ---------------------------------------------------------------------------
// Nerve

namespace detail {

inline std::string chain_name(const FiniteCategory& c, const std::vector<Index>& chain) {
  std::string s;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (i) s += "|";
    s += c.morphism_name(chain[i]);
  }
  return s;
}

}  // namespace detail

/// Nerve truncated at N: k-simplices are composable chains of k morphisms
/// (level 0 holds the objects). Requires a total composition table.
inline TruncatedSimplicialSet nerve(const FiniteCategory& c, int truncation) {
  if (!c.is_total()) throw InputError("nerve: composition table is partial");
  TruncatedSimplicialSet x(truncation);
  std::vector<std::unordered_map<std::vector<Index>, Index, VectorHash>> index(truncation + 1);
  std::vector<std::vector<std::vector<Index>>> chains(truncation + 1);
  for (Index o = 0; o < c.object_count(); ++o) {
    x.add_simplex(0, c.object_name(o));
    chains[0].push_back({o});  // level 0 stores the object
  }
  for (int k = 1; k <= truncation; ++k) {
    for (const auto& prev : chains[k - 1]) {
      Index end = k == 1 ? prev[0] : c.cod(prev.back());
      for (Index m : c.outgoing(end)) {
        std::vector<Index> ch = k == 1 ? std::vector<Index>{} : prev;
        ch.push_back(m);
        index[k].emplace(ch, static_cast<Index>(chains[k].size()));
        chains[k].push_back(ch);
        x.add_simplex(k, detail::chain_name(c, ch));
      }
    }
  }
  auto lookup = [&](int k, const std::vector<Index>& ch) -> Index {
    if (k == 0) return ch[0];
    return index[k].at(ch);
  };
  auto vertex = [&](const std::vector<Index>& ch, int i) -> Index {
    return i == 0 ? c.dom(ch[0]) : c.cod(ch[i - 1]);
  };
  for (int k = 1; k <= truncation; ++k)
    for (Index s = 0; s < x.size(k); ++s) {
      const auto& ch = chains[k][s];
      for (int i = 0; i <= k; ++i) {
        std::vector<Index> f;
        if (k == 1) {
          f = {i == 0 ? c.cod(ch[0]) : c.dom(ch[0])};
        } else if (i == 0) {
          f.assign(ch.begin() + 1, ch.end());
        } else if (i == k) {
          f.assign(ch.begin(), ch.end() - 1);
        } else {
          f.assign(ch.begin(), ch.begin() + (i - 1));
          f.push_back(c.compose(ch[i], ch[i - 1]));
          f.insert(f.end(), ch.begin() + (i + 1), ch.end());
        }
        x.set_face(k, i, s, lookup(k - 1, f));
      }
    }
  for (int k = 0; k < truncation; ++k)
    for (Index s = 0; s < x.size(k); ++s) {
      for (int i = 0; i <= k; ++i) {
        std::vector<Index> d;
        if (k == 0) {
          d = {c.identity(chains[0][s][0])};
        } else {
          const auto& ch = chains[k][s];
          d.assign(ch.begin(), ch.begin() + i);
          d.push_back(c.identity(vertex(ch, i)));
          d.insert(d.end(), ch.begin() + i, ch.end());
        }
        x.set_degeneracy(k, i, s, lookup(k + 1, d));
      }
    }
  return x;
}

/// The simplicial map nerve(F) : nerve(src) -> nerve(tgt).
inline SimplicialMap nerve_map(const FiniteCategory& src, const FiniteCategory& tgt, const CatFunctor& f,
                               const TruncatedSimplicialSet& nsrc, const TruncatedSimplicialSet& ntgt) {
  SimplicialMap out;
  for (int k = 0; k <= nsrc.truncation(); ++k) {
    out.levels.emplace_back();
    for (Index s = 0; s < nsrc.size(k); ++s) {
      const std::string& name = nsrc.name(k, s);
      std::string image;
      if (k == 0) {
        image = tgt.object_name(f.object_map[src.object(name)]);
      } else {
        std::size_t start = 0;
        bool first = true;
        for (;;) {
          std::size_t bar = name.find('|', start);
          std::string part = name.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
          if (!first) image += "|";
          image += tgt.morphism_name(f.morphism_map[src.morphism(part)]);
          first = false;
          if (bar == std::string::npos) break;
          start = bar + 1;
        }
      }
      auto t = ntgt.find(k, image);
      out.levels.back().push_back(t ? *t : kNone);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// pi_0 and homology

/// Components of the 1-skeleton: vertices joined by d1(s) -- d0(s).
inline Partition pi0(const TruncatedSimplicialSet& x) {
  if (x.truncation() < 1) throw InputError("pi0 needs truncation >= 1");
  UnionFind uf(static_cast<std::size_t>(x.size(0)));
  for (Index s = 0; s < x.size(1); ++s) uf.unite(x.face(1, 1, s), x.face(1, 0, s));
  return Partition::from_labels(uf.labels());
}

struct HomologyGroup {
  int degree = 0;
  std::size_t free_rank = 0;
  std::vector<BigInt> torsion;

  friend bool operator==(const HomologyGroup&, const HomologyGroup&) = default;
};

struct ChainComplexReport {
  int truncation = 0;
  std::vector<HomologyGroup> groups;  ///< degrees 0..truncation-1
};

/// The normalized chain complex: nondegenerate simplices per level and the
/// boundary matrices between them.
struct NormalizedChains {
  std::vector<std::vector<Index>> basis;     ///< nondegenerate simplices per level
  std::vector<std::vector<Index>> position;  ///< simplex -> basis position or kNone

  [[nodiscard]] std::size_t rank(int level) const { return basis[level].size(); }
};

inline NormalizedChains normalized_chains(const TruncatedSimplicialSet& x) {
  NormalizedChains out;
  for (int n = 0; n <= x.truncation(); ++n) {
    auto deg = x.degenerate(n);
    out.basis.emplace_back();
    out.position.emplace_back(static_cast<std::size_t>(x.size(n)), kNone);
    for (Index s = 0; s < x.size(n); ++s)
      if (!deg[s]) {
        out.position[n][s] = static_cast<Index>(out.basis[n].size());
        out.basis[n].push_back(s);
      }
  }
  return out;
}

/// Boundary d_level : N_level -> N_{level-1}, rows indexed by N_{level-1}.
inline SparseIntMatrix boundary_matrix(const TruncatedSimplicialSet& x, const NormalizedChains& ch, int level) {
  SparseIntMatrix m(ch.rank(level - 1), ch.rank(level));
  for (std::size_t col = 0; col < ch.basis[level].size(); ++col) {
    Index s = ch.basis[level][col];
    for (int i = 0; i <= level; ++i) {
      Index pos = ch.position[level - 1][x.face(level, i, s)];
      if (pos != kNone) m.add(static_cast<std::size_t>(pos), col, i % 2 == 0 ? 1 : -1);
    }
  }
  return m;
}

/// Integral homology of the normalized chains in degrees 0..N-1; degree N
/// is not reported since its cycles cannot be bounded inside the truncation.
inline ChainComplexReport homology(const TruncatedSimplicialSet& x) {
  if (x.truncation() < 1) throw InputError("homology needs truncation >= 1");
  ChainComplexReport report;
  report.truncation = x.truncation();
  auto ch = normalized_chains(x);
  std::vector<SmithResult> snf(static_cast<std::size_t>(x.truncation()) + 1);
  for (int n = 1; n <= x.truncation(); ++n) snf[n] = smith_normal_form(boundary_matrix(x, ch, n));
  for (int k = 0; k < x.truncation(); ++k) {
    HomologyGroup g;
    g.degree = k;
    std::size_t out_rank = k == 0 ? 0 : snf[k].rank;
    g.free_rank = ch.rank(k) - out_rank - snf[k + 1].rank;
    g.torsion = snf[k + 1].torsion;
    report.groups.push_back(std::move(g));
  }
  return report;
}

/// How a simplicial map acts on homology in one degree.
struct HomologyComparison {
  int degree = 0;
  HomologyGroup source, target;
  std::size_t induced_rank = 0;  ///< rank of the induced map over the rationals
  bool iso = false;              ///< equal groups and induced map of full rank
};

/// Per-degree comparison in degrees 0..N-1 for f : X -> Y.
///
/// The rank of f_* on H_k over Q equals rank(M) - rank(d_k^X) - rank(d_{k+1}^Y)
/// for the block matrix M = [[d_k^X, 0], [f_k, d_{k+1}^Y]], since the image
/// of M restricted to cycles of X is f(Z_k X) + B_k Y. All ranks come from
/// the Smith form, which computes the rational rank exactly.
inline std::vector<HomologyComparison> compare_homology(const TruncatedSimplicialSet& x,
                                                        const TruncatedSimplicialSet& y, const SimplicialMap& f) {
  const int top = std::min(x.truncation(), y.truncation());
  if (top < 1) throw InputError("compare_homology needs truncation >= 1");
  auto cx = normalized_chains(x), cy = normalized_chains(y);
  std::vector<SmithResult> sx(top + 1), sy(top + 1);
  for (int n = 1; n <= top; ++n) {
    sx[n] = smith_normal_form(boundary_matrix(x, cx, n));
    sy[n] = smith_normal_form(boundary_matrix(y, cy, n));
  }
  std::vector<HomologyComparison> out;
  for (int k = 0; k < top; ++k) {
    HomologyComparison cmp;
    cmp.degree = k;
    cmp.source = {k, cx.rank(k) - (k ? sx[k].rank : 0) - sx[k + 1].rank, sx[k + 1].torsion};
    cmp.target = {k, cy.rank(k) - (k ? sy[k].rank : 0) - sy[k + 1].rank, sy[k + 1].torsion};
    const std::size_t top_rows = k ? cx.rank(k - 1) : 0;
    SparseIntMatrix m(top_rows + cy.rank(k), cx.rank(k) + cy.rank(k + 1));
    if (k > 0) {
      auto dx = boundary_matrix(x, cx, k);
      for (std::size_t r = 0; r < dx.rows(); ++r)
        for (const auto& [c, v] : dx.row(r)) m.add(r, static_cast<std::size_t>(c), v);
    }
    for (std::size_t col = 0; col < cx.basis[k].size(); ++col) {
      Index image = f(k, cx.basis[k][col]);
      Index pos = cy.position[k][image];
      if (pos != kNone) m.add(top_rows + static_cast<std::size_t>(pos), col, 1);
    }
    auto dy = boundary_matrix(y, cy, k + 1);
    for (std::size_t r = 0; r < dy.rows(); ++r)
      for (const auto& [c, v] : dy.row(r)) m.add(top_rows + r, cx.rank(k) + static_cast<std::size_t>(c), v);
    std::size_t rank_m = smith_normal_form(std::move(m)).rank;
    cmp.induced_rank = rank_m - (k ? sx[k].rank : 0) - sy[k + 1].rank;
    cmp.iso = cmp.source == cmp.target && cmp.induced_rank == cmp.source.free_rank;
    out.push_back(std::move(cmp));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bisimplicial sets and the diagonal

/// A simplicial object in truncated simplicial sets: column p is X_{p,*},
/// with the p-direction structure given by simplicial maps between columns.
struct BisimplicialSet {
  std::vector<TruncatedSimplicialSet> columns;
  std::vector<std::vector<SimplicialMap>> faces;         ///< faces[p][i] : column p -> column p-1
  std::vector<std::vector<SimplicialMap>> degeneracies;  ///< degeneracies[p][i] : column p -> column p+1
};

/// Level n of the diagonal is X_{n,n}; structure maps act in both directions.
inline TruncatedSimplicialSet diagonal(const BisimplicialSet& b, int truncation) {
  if (b.columns.size() < static_cast<std::size_t>(truncation) + 1)
    throw InputError("diagonal: not enough columns for the requested truncation");
  for (int p = 0; p <= truncation; ++p) {
    if (b.columns[p].truncation() < truncation) throw InputError("diagonal: column truncation too small");
    if (p > 0 && b.faces.size() <= static_cast<std::size_t>(p)) throw InputError("diagonal: missing faces");
    if (p < truncation && b.degeneracies.size() <= static_cast<std::size_t>(p))
      throw InputError("diagonal: missing degeneracies");
  }
  TruncatedSimplicialSet x(truncation);
  for (int n = 0; n <= truncation; ++n)
    for (Index s = 0; s < b.columns[n].size(n); ++s) x.add_simplex(n, b.columns[n].name(n, s));
  for (int n = 0; n <= truncation; ++n)
    for (Index s = 0; s < x.size(n); ++s) {
      for (int i = 0; n > 0 && i <= n; ++i) {
        Index outer = b.faces[n][i](n, s);
        x.set_face(n, i, s, outer == kNone ? kNone : b.columns[n - 1].face(n, i, outer));
      }
      for (int i = 0; n < truncation && i <= n; ++i) {
        Index outer = b.degeneracies[n][i](n, s);
        x.set_degeneracy(n, i, s, outer == kNone ? kNone : b.columns[n + 1].degeneracy(n, i, outer));
      }
    }
  return x;
}

}  // namespace simploc
