#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "simploc/relcat.hpp"
#include "simploc/scat.hpp"

namespace simploc {

enum class Direction : std::uint8_t { Forward = 0, Backward = 1 };

/// A commutative grid of height k+1 rows between a fixed source and sink.
///
/// Row i is a zigzag node[i][0] = source, ..., node[i][width] = sink. A
/// forward column c carries node[i][c] -> node[i][c+1], a backward column the
/// weak equivalence node[i][c+1] -> node[i][c]. Verticals run from row i to
/// row i+1 and are weak equivalences; the two end columns of verticals are
/// identities.
struct Hammock {
  Index source = kNone, sink = kNone;
  int width = 0;
  int height = 0;
  std::vector<Direction> directions;
  std::vector<std::vector<Index>> nodes;       ///< [height+1][width+1]
  std::vector<std::vector<Index>> horizontal;  ///< [height+1][width]
  std::vector<std::vector<Index>> vertical;    ///< [height][width+1]

  friend bool operator==(const Hammock&, const Hammock&) = default;
};

using HammockKey = std::vector<Index>;

/// The width-0 hammock of the given height.
inline Hammock identity_hammock(const FiniteCategory& c, Index x, int height) {
  Hammock h;
  h.source = h.sink = x;
  h.height = height;
  h.nodes.assign(static_cast<std::size_t>(height) + 1, {x});
  h.horizontal.assign(static_cast<std::size_t>(height) + 1, {});
  h.vertical.assign(static_cast<std::size_t>(height), {c.identity(x)});
  return h;
}

/// [m] repeated in every row with identity verticals; width 0 for identities.
inline Hammock arrow_hammock(const FiniteCategory& c, Index m, int height) {
  if (c.is_identity(m)) return identity_hammock(c, c.dom(m), height);
  Hammock h;
  h.source = c.dom(m);
  h.sink = c.cod(m);
  h.width = 1;
  h.height = height;
  h.directions = {Direction::Forward};
  h.nodes.assign(static_cast<std::size_t>(height) + 1, {h.source, h.sink});
  h.horizontal.assign(static_cast<std::size_t>(height) + 1, {m});
  h.vertical.assign(static_cast<std::size_t>(height), {c.identity(h.source), c.identity(h.sink)});
  return h;
}

/// Serialization: source, sink, width, height, directions, then per row the
/// interior nodes and the horizontals, then per vertical row the interior
/// verticals.
inline HammockKey hammock_key(const Hammock& h) {
  HammockKey k{h.source, h.sink, h.width, h.height};
  for (auto d : h.directions) k.push_back(static_cast<Index>(d));
  for (int i = 0; i <= h.height; ++i) {
    for (int c = 1; c < h.width; ++c) k.push_back(h.nodes[i][c]);
    for (int c = 0; c < h.width; ++c) k.push_back(h.horizontal[i][c]);
  }
  for (int i = 0; i < h.height; ++i)
    for (int c = 1; c < h.width; ++c) k.push_back(h.vertical[i][c]);
  return k;
}

inline Hammock hammock_from_key(const FiniteCategory& cat, const HammockKey& k) {
  Hammock h;
  std::size_t p = 0;
  h.source = k[p++];
  h.sink = k[p++];
  h.width = k[p++];
  h.height = k[p++];
  for (int c = 0; c < h.width; ++c) h.directions.push_back(static_cast<Direction>(k[p++]));
  h.nodes.assign(static_cast<std::size_t>(h.height) + 1, std::vector<Index>(static_cast<std::size_t>(h.width) + 1));
  h.horizontal.assign(static_cast<std::size_t>(h.height) + 1, std::vector<Index>(static_cast<std::size_t>(h.width)));
  h.vertical.assign(static_cast<std::size_t>(h.height), std::vector<Index>(static_cast<std::size_t>(h.width) + 1));
  for (int i = 0; i <= h.height; ++i) {
    h.nodes[i][0] = h.source;
    h.nodes[i][h.width] = h.sink;
    for (int c = 1; c < h.width; ++c) h.nodes[i][c] = k[p++];
    for (int c = 0; c < h.width; ++c) h.horizontal[i][c] = k[p++];
  }
  for (int i = 0; i < h.height; ++i) {
    h.vertical[i][0] = cat.identity(h.source);
    h.vertical[i][h.width] = cat.identity(h.sink);
    for (int c = 1; c < h.width; ++c) h.vertical[i][c] = k[p++];
  }
  return h;
}

inline int key_width(const HammockKey& k) { return k[2]; }

namespace detail {

/// Morphism names that themselves look like hammocks get parenthesized.
inline std::string atom(const std::string& name) {
  return name.find_first_of(";^=,{} ") == std::string::npos ? name : "(" + name + ")";
}

}  // namespace detail

inline std::string hammock_name(const FiniteCategory& c, const Hammock& h) {
  auto row = [&](int i) {
    if (h.width == 0) return "id(" + c.object_name(h.source) + ")";
    std::string s;
    for (int col = 0; col < h.width; ++col) {
      if (col) s += ";";
      s += detail::atom(c.morphism_name(h.horizontal[i][col]));
      if (h.directions[col] == Direction::Backward) s += "^-1";
    }
    return s;
  };
  std::string s = row(0);
  for (int i = 0; i < h.height; ++i) {
    s += " ={";
    for (int col = 1; col < h.width; ++col) s += (col > 1 ? "," : "") + detail::atom(c.morphism_name(h.vertical[i][col]));
    s += "}= " + row(i + 1);
  }
  return s;
}

/// Shape, typing, weak-equivalence and commutativity conditions.
inline ValidationReport validate_hammock(const RelativeCategory& r, const Hammock& h) {
  ValidationReport report;
  const auto& c = r.cat;
  const std::size_t rows = static_cast<std::size_t>(h.height) + 1;
  if (h.width < 0 || h.height < 0 || h.directions.size() != static_cast<std::size_t>(h.width) ||
      h.nodes.size() != rows || h.horizontal.size() != rows || h.vertical.size() != rows - 1) {
    report.add("hammock-shape", "inconsistent dimensions");
    return report;
  }
  if (h.width == 0 && h.source != h.sink) report.add("hammock-shape", "width-0 hammock between distinct objects");
  for (std::size_t i = 0; i < rows; ++i) {
    if (h.nodes[i].size() != static_cast<std::size_t>(h.width) + 1 ||
        h.horizontal[i].size() != static_cast<std::size_t>(h.width) ||
        (i + 1 < rows && h.vertical[i].size() != static_cast<std::size_t>(h.width) + 1)) {
      report.add("hammock-shape", "row " + std::to_string(i) + " has the wrong length");
      return report;
    }
    if (h.nodes[i].front() != h.source || h.nodes[i].back() != h.sink)
      report.add("hammock-ends", "row " + std::to_string(i) + " does not run from source to sink");
    for (int col = 0; col < h.width; ++col) {
      Index m = h.horizontal[i][col];
      bool fwd = h.directions[col] == Direction::Forward;
      Index from = fwd ? h.nodes[i][col] : h.nodes[i][col + 1];
      Index to = fwd ? h.nodes[i][col + 1] : h.nodes[i][col];
      if (m < 0 || m >= c.morphism_count() || c.dom(m) != from || c.cod(m) != to) {
        report.add("hammock-typing", "horizontal at row " + std::to_string(i) + ", column " + std::to_string(col));
        continue;
      }
      if (!fwd && !r.is_weq(m))
        report.add("hammock-weq", "backward map " + c.morphism_name(m) + " is not a weak equivalence");
    }
  }
  if (!report.ok()) return report;
  for (std::size_t i = 0; i + 1 < rows; ++i) {
    for (int col = 0; col <= h.width; ++col) {
      Index v = h.vertical[i][col];
      if (v < 0 || v >= c.morphism_count() || c.dom(v) != h.nodes[i][col] || c.cod(v) != h.nodes[i + 1][col]) {
        report.add("hammock-typing", "vertical at row " + std::to_string(i) + ", column " + std::to_string(col));
        continue;
      }
      if ((col == 0 || col == h.width) && !c.is_identity(v))
        report.add("hammock-ends", "end vertical is not an identity");
      if (!r.is_weq(v)) report.add("hammock-weq", "vertical map " + c.morphism_name(v) + " is not a weak equivalence");
    }
  }
  if (!report.ok()) return report;
  for (std::size_t i = 0; i + 1 < rows; ++i)
    for (int col = 0; col < h.width; ++col) {
      Index top = h.horizontal[i][col], bottom = h.horizontal[i + 1][col];
      Index left = h.vertical[i][col], right = h.vertical[i][col + 1];
      Index a, b;
      if (h.directions[col] == Direction::Forward) {
        a = c.compose(right, top);
        b = c.compose(bottom, left);
      } else {
        a = c.compose(bottom, right);
        b = c.compose(left, top);
      }
      if (a == kNone || b == kNone || a != b)
        report.add("hammock-commutativity", "square at row " + std::to_string(i) + ", column " + std::to_string(col));
    }
  return report;
}

// ---------------------------------------------------------------------------
// Reduction

enum class ReductionOrder { Leftmost, Rightmost };

namespace detail {

inline bool identity_column(const FiniteCategory& c, const Hammock& h, int col) {
  for (int i = 0; i <= h.height; ++i)
    if (!c.is_identity(h.horizontal[i][col])) return false;
  return true;
}

inline void erase_node_column(Hammock& h, int node) {
  for (auto& row : h.nodes) row.erase(row.begin() + node);
  for (auto& row : h.vertical) row.erase(row.begin() + node);
}

inline void delete_column(Hammock& h, int col) {
  for (auto& row : h.horizontal) row.erase(row.begin() + col);
  h.directions.erase(h.directions.begin() + col);
  // The two nodes of an identity column agree; keep the outer one at the ends.
  erase_node_column(h, col + 1 == h.width ? col : col + 1);
  --h.width;
}

inline bool merge_columns(const FiniteCategory& c, Hammock& h, int col) {
  std::vector<Index> merged;
  for (int i = 0; i <= h.height; ++i) {
    Index first = h.horizontal[i][col], second = h.horizontal[i][col + 1];
    Index m = h.directions[col] == Direction::Forward ? c.compose(second, first) : c.compose(first, second);
    if (m == kNone) return false;
    merged.push_back(m);
  }
  for (int i = 0; i <= h.height; ++i) {
    h.horizontal[i][col] = merged[i];
    h.horizontal[i].erase(h.horizontal[i].begin() + col + 1);
  }
  h.directions.erase(h.directions.begin() + col + 1);
  erase_node_column(h, col + 1);
  --h.width;
  return true;
}

}  // namespace detail

/// Normal form: delete all-identity columns and merge adjacent columns of
/// equal direction until neither move applies. Returns nullopt when a
/// needed composite is not recorded in the (partial) category.
inline std::optional<Hammock> reduce(const FiniteCategory& c, Hammock h,
                                     ReductionOrder order = ReductionOrder::Leftmost) {
  for (;;) {
    // Candidate moves by position: deletion of column k sits at 2k, the
    // merge of k and k+1 at 2k+1.
    int best = -1;
    if (order == ReductionOrder::Leftmost) {
      for (int pos = 0; pos < 2 * h.width && best < 0; ++pos) {
        int col = pos / 2;
        if (pos % 2 == 0 ? detail::identity_column(c, h, col)
                         : col + 1 < h.width && h.directions[col] == h.directions[col + 1])
          best = pos;
      }
    } else {
      for (int pos = 2 * h.width - 1; pos >= 0 && best < 0; --pos) {
        int col = pos / 2;
        if (pos % 2 == 0 ? detail::identity_column(c, h, col)
                         : col + 1 < h.width && h.directions[col] == h.directions[col + 1])
          best = pos;
      }
    }
    if (best < 0) return h;
    if (best % 2 == 0)
      detail::delete_column(h, best / 2);
    else if (!detail::merge_columns(c, h, best / 2))
      return std::nullopt;
  }
}

inline bool is_reduced(const FiniteCategory& c, const Hammock& h) {
  for (int col = 0; col < h.width; ++col) {
    if (detail::identity_column(c, h, col)) return false;
    if (col + 1 < h.width && h.directions[col] == h.directions[col + 1]) return false;
  }
  return true;
}

/// h2 after h1, side by side, not reduced.
inline Hammock concatenate(const Hammock& h2, const Hammock& h1) {
  if (h1.sink != h2.source || h1.height != h2.height)
    throw InputError("concatenate: hammocks do not match (sink/source or height)");
  Hammock h = h1;
  h.sink = h2.sink;
  h.width = h1.width + h2.width;
  h.directions.insert(h.directions.end(), h2.directions.begin(), h2.directions.end());
  for (int i = 0; i <= h.height; ++i) {
    h.nodes[i].insert(h.nodes[i].end(), h2.nodes[i].begin() + 1, h2.nodes[i].end());
    h.horizontal[i].insert(h.horizontal[i].end(), h2.horizontal[i].begin(), h2.horizontal[i].end());
  }
  for (int i = 0; i < h.height; ++i) h.vertical[i].insert(h.vertical[i].end(), h2.vertical[i].begin() + 1, h2.vertical[i].end());
  return h;
}

inline std::optional<Hammock> compose_hammocks(const FiniteCategory& c, const Hammock& h2, const Hammock& h1) {
  return reduce(c, concatenate(h2, h1));
}

/// Face d_i: drop row i, composing the verticals around it; not reduced.
inline std::optional<Hammock> delete_row(const FiniteCategory& c, const Hammock& h, int row) {
  Hammock out = h;
  out.nodes.erase(out.nodes.begin() + row);
  out.horizontal.erase(out.horizontal.begin() + row);
  if (row == 0) {
    out.vertical.erase(out.vertical.begin());
  } else if (row == h.height) {
    out.vertical.pop_back();
  } else {
    for (int col = 0; col <= h.width; ++col) {
      Index v = c.compose(h.vertical[row][col], h.vertical[row - 1][col]);
      if (v == kNone) return std::nullopt;
      out.vertical[row - 1][col] = v;
    }
    out.vertical.erase(out.vertical.begin() + row);
  }
  --out.height;
  return out;
}

/// Degeneracy s_i: repeat row i with identity verticals.
inline Hammock repeat_row(const FiniteCategory& c, const Hammock& h, int row) {
  Hammock out = h;
  out.nodes.insert(out.nodes.begin() + row, h.nodes[row]);
  out.horizontal.insert(out.horizontal.begin() + row, h.horizontal[row]);
  std::vector<Index> ids;
  for (Index o : h.nodes[row]) ids.push_back(c.identity(o));
  out.vertical.insert(out.vertical.begin() + row, ids);
  ++out.height;
  return out;
}

/// Applies a functor to every node and map, then reduces.
inline std::optional<Hammock> map_hammock(const FiniteCategory& target, const Hammock& h,
                                          const std::vector<Index>& object_map, const std::vector<Index>& morphism_map) {
  Hammock out = h;
  out.source = object_map[h.source];
  out.sink = object_map[h.sink];
  for (auto& row : out.nodes)
    for (auto& o : row) o = object_map[o];
  for (auto& row : out.horizontal)
    for (auto& m : row) m = morphism_map[m];
  for (auto& row : out.vertical)
    for (auto& m : row) m = morphism_map[m];
  return reduce(target, std::move(out));
}

// ---------------------------------------------------------------------------
// Mapping spaces

enum class Stabilization { Stable, BoundLimited };

inline const char* to_string(Stabilization s) { return s == Stabilization::Stable ? "Stable" : "BoundLimited"; }

/// Reduced hammocks x -> y of height <= N and width <= w_max.
struct MappingSpace {
  Index source = kNone, sink = kNone;
  int width_bound = 0;
  TruncatedSimplicialSet simplices;
  std::vector<std::vector<HammockKey>> keys;  ///< [level][simplex]
  std::vector<std::unordered_map<HammockKey, Index, VectorHash>> index;
  Stabilization verdict = Stabilization::Stable;

  [[nodiscard]] Index find(int level, const HammockKey& k) const {
    auto it = index[level].find(k);
    return it == index[level].end() ? kNone : it->second;
  }
};

namespace detail {

/// Row-by-row enumeration of hammocks of one direction pattern.
class HammockEnumerator {
 public:
  HammockEnumerator(const RelativeCategory& r, Index x, Index y, std::vector<Direction> dirs)
      : r_(r), c_(r.cat), x_(x), y_(y), dirs_(std::move(dirs)), w_(static_cast<int>(dirs_.size())) {
    weq_out_.resize(c_.object_count());
    for (Index m : r_.weq.members()) weq_out_[c_.dom(m)].push_back(m);
    // reach[col][o]: from node o before column col one can still reach y.
    reach_.assign(static_cast<std::size_t>(w_) + 1, std::vector<bool>(c_.object_count(), false));
    reach_[w_][y_] = true;
    for (int col = w_ - 1; col >= 0; --col)
      for (Index o = 0; o < c_.object_count(); ++o)
        for (Index next : step_targets(col, o))
          if (reach_[col + 1][next]) {
            reach_[col][o] = true;
            break;
          }
  }

  /// Calls emit(rows, verticals) for every reduced hammock up to height max_height.
  template <typename Emit>
  void run(int max_height, Emit&& emit) {
    std::vector<Row> rows;
    first_rows(rows);
    std::vector<Index> prefix_rows;
    std::vector<std::vector<Index>> prefix_verticals;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      prefix_rows.assign(1, static_cast<Index>(r));
      prefix_verticals.clear();
      descend(max_height, prefix_rows, prefix_verticals, rows_[r].identity_mask, emit);
    }
  }

  struct Row {
    std::vector<Index> nodes, horizontal;
    std::uint64_t identity_mask = 0;
  };
  struct Successor {
    Index row;
    std::vector<Index> vertical;
  };
  [[nodiscard]] const Row& row(Index id) const { return rows_[id]; }
  [[nodiscard]] std::size_t row_count() const { return rows_.size(); }

  /// All rows of the pattern, identities allowed.
  void collect_rows() {
    if (rows_.empty()) {
      std::vector<Row> unused;
      first_rows(unused);
    }
  }

  /// Next rows reachable from row id, each once, with the first vertical
  /// that witnesses it. Not memoized.
  std::vector<Successor> distinct_successors(Index id) {
    std::vector<Successor> out;
    std::unordered_set<Index> seen;
    expand(id, [&](Index row, const std::vector<Index>& vert) {
      if (seen.insert(row).second) out.push_back({row, vert});
    });
    return out;
  }

 private:
  std::vector<Index> step_targets(int col, Index o) const {
    std::vector<Index> out;
    if (dirs_[col] == Direction::Forward) {
      for (Index m : c_.outgoing(o)) out.push_back(c_.cod(m));
    } else {
      for (Index m : c_.incoming(o))
        if (r_.is_weq(m)) out.push_back(c_.dom(m));
    }
    return out;
  }

  Index intern(const Row& row) {
    scratch_.assign(row.nodes.begin(), row.nodes.end());
    scratch_.insert(scratch_.end(), row.horizontal.begin(), row.horizontal.end());
    if (auto it = row_index_.find(scratch_); it != row_index_.end()) return it->second;
    Row copy = row;
    copy.identity_mask = 0;
    for (int col = 0; col < w_; ++col)
      if (c_.is_identity(copy.horizontal[col])) copy.identity_mask |= std::uint64_t{1} << col;
    auto id = static_cast<Index>(rows_.size());
    row_index_.emplace(scratch_, id);
    rows_.push_back(std::move(copy));
    successors_.emplace_back();
    expanded_.push_back(false);
    return id;
  }

  void first_rows(std::vector<Row>&) {
    Row cur;
    cur.nodes.assign(static_cast<std::size_t>(w_) + 1, kNone);
    cur.horizontal.assign(static_cast<std::size_t>(w_), kNone);
    cur.nodes[0] = x_;
    first_rows_rec(cur, 0);
  }

  void first_rows_rec(Row& cur, int col) {
    if (col == w_) {
      if (cur.nodes[w_] == y_) intern(cur);
      return;
    }
    Index at = cur.nodes[col];
    if (!reach_[col][at]) return;
    auto try_step = [&](Index m, Index next) {
      if (!reach_[col + 1][next]) return;
      cur.horizontal[col] = m;
      cur.nodes[col + 1] = next;
      first_rows_rec(cur, col + 1);
    };
    if (dirs_[col] == Direction::Forward) {
      for (Index m : c_.outgoing(at)) try_step(m, c_.cod(m));
    } else {
      for (Index m : c_.incoming(at))
        if (r_.is_weq(m)) try_step(m, c_.dom(m));
    }
  }

  template <typename Sink>
  void expand(Index id, Sink&& sink) {
    Row next;
    next.nodes.assign(static_cast<std::size_t>(w_) + 1, kNone);
    next.horizontal.assign(static_cast<std::size_t>(w_), kNone);
    next.nodes[0] = x_;
    std::vector<Index> vert(static_cast<std::size_t>(w_) + 1, kNone);
    vert[0] = c_.identity(x_);
    Row base = rows_[id];
    successor_rec(base, next, vert, 1, sink);
  }

  const std::vector<Successor>& successors(Index id) {
    if (!expanded_[id]) {
      expanded_[id] = true;
      std::vector<Successor> out;
      expand(id, [&](Index row, const std::vector<Index>& vert) { out.push_back({row, vert}); });
      successors_[id] = std::move(out);
    }
    return successors_[id];
  }

  template <typename Sink>
  void successor_rec(const Row& base, Row& next, std::vector<Index>& vert, int col, Sink& sink) {
    // Choose the vertical at node col and the horizontal of column col-1.
    auto place = [&](Index v, Index node) {
      const int k = col - 1;
      Index prev_node = next.nodes[k];
      Index prev_v = vert[k];
      Index top = base.horizontal[k];
      const bool forward = dirs_[k] == Direction::Forward;
      Index target = forward ? c_.compose(v, top) : c_.compose(prev_v, top);
      if (target == kNone) return;
      auto candidates = forward ? c_.hom(prev_node, node) : c_.hom(node, prev_node);
      for (Index h : candidates) {
        if (forward ? c_.compose(h, prev_v) != target : (!r_.is_weq(h) || c_.compose(h, v) != target)) continue;
        next.horizontal[k] = h;
        next.nodes[col] = node;
        vert[col] = v;
        if (col == w_)
          sink(intern(next), vert);
        else
          successor_rec(base, next, vert, col + 1, sink);
      }
    };
    if (col == w_) {
      place(c_.identity(y_), y_);
      return;
    }
    for (Index v : weq_out_[base.nodes[col]]) {
      Index node = c_.cod(v);
      if (!reach_[col][node]) continue;
      place(v, node);
    }
  }

  template <typename Emit>
  void descend(int max_height, std::vector<Index>& rows, std::vector<std::vector<Index>>& verticals,
               std::uint64_t mask, Emit& emit) {
    if (mask == 0) emit(rows, verticals);
    if (static_cast<int>(rows.size()) > max_height) return;
    // Copy: successors() may grow the underlying storage.
    auto succ = successors(rows.back());
    for (const auto& s : succ) {
      rows.push_back(s.row);
      verticals.push_back(s.vertical);
      descend(max_height, rows, verticals, mask & rows_[s.row].identity_mask, emit);
      rows.pop_back();
      verticals.pop_back();
    }
  }

  const RelativeCategory& r_;
  const FiniteCategory& c_;
  Index x_, y_;
  std::vector<Direction> dirs_;
  int w_;
  std::vector<std::vector<Index>> weq_out_;
  std::vector<std::vector<bool>> reach_;
  std::vector<Row> rows_;
  std::unordered_map<HammockKey, Index, VectorHash> row_index_;
  HammockKey scratch_;
  std::vector<std::vector<Successor>> successors_;
  std::vector<bool> expanded_;
};

/// Width-(w_max - 1) subspace versus the whole: same components on the
/// smaller vertices and no component without a smaller vertex.
inline Stabilization stabilization(const TruncatedSimplicialSet& x, const std::vector<int>& width0,
                                   const std::vector<int>& width1, int width_bound) {
  if (x.truncation() < 1) return Stabilization::BoundLimited;
  auto full = pi0(x);
  const int small = width_bound - 1;
  UnionFind uf(static_cast<std::size_t>(x.size(0)));
  for (Index s = 0; s < x.size(1); ++s)
    if (width1[s] <= small) uf.unite(x.face(1, 1, s), x.face(1, 0, s));
  std::vector<bool> covered(static_cast<std::size_t>(full.classes), false);
  std::unordered_map<Index, Index> full_to_small;
  for (Index v = 0; v < x.size(0); ++v) {
    if (width0[v] > small) continue;
    covered[full.label[v]] = true;
    // Distinct small components must stay distinct in the full space.
    auto [it, inserted] = full_to_small.emplace(full.label[v], uf.find(v));
    if (!inserted && it->second != uf.find(v)) return Stabilization::BoundLimited;
  }
  for (bool c : covered)
    if (!c) return Stabilization::BoundLimited;
  return Stabilization::Stable;
}

inline Stabilization stabilization(const MappingSpace& m) {
  std::vector<int> w0, w1;
  for (const auto& k : m.keys[0]) w0.push_back(key_width(k));
  for (const auto& k : m.keys[1]) w1.push_back(key_width(k));
  return stabilization(m.simplices, w0, w1, m.width_bound);
}

}  // namespace detail

/// Exhaustive enumeration of the width-bounded mapping space with its
/// faces (delete a row, reduce) and degeneracies (repeat a row).
///
/// Over a category with unrecorded composites a face can be undefined; such
/// hammocks (and, inductively, everything above them) are dropped, which
/// keeps the largest face-closed part. Over total categories nothing is
/// dropped.
inline MappingSpace mapping_space(const RelativeCategory& r, Index x, Index y, int truncation, int width_bound) {
  if (truncation < 1) throw InputError("mapping_space needs truncation >= 1");
  if (width_bound < 0) throw InputError("width bound must be nonnegative");
  if (width_bound > 62) throw InputError("width bound too large");
  const auto& c = r.cat;
  const std::size_t levels = static_cast<std::size_t>(truncation) + 1;

  std::vector<std::vector<Hammock>> found(levels);
  std::vector<std::unordered_map<HammockKey, Index, VectorHash>> found_index(levels);
  auto add = [&](Hammock h) {
    auto& idx = found_index[h.height];
    idx.emplace(hammock_key(h), static_cast<Index>(idx.size()));
    found[h.height].push_back(std::move(h));
  };
  if (x == y)
    for (int k = 0; k <= truncation; ++k) add(identity_hammock(c, x, k));
  for (int w = 1; w <= width_bound; ++w)
    for (int start = 0; start < 2; ++start) {
      std::vector<Direction> dirs;
      for (int col = 0; col < w; ++col) dirs.push_back(static_cast<Direction>((start + col) % 2));
      detail::HammockEnumerator en(r, x, y, dirs);
      en.run(truncation, [&](const std::vector<Index>& rows, const std::vector<std::vector<Index>>& verticals) {
        Hammock h;
        h.source = x;
        h.sink = y;
        h.width = w;
        h.height = static_cast<int>(rows.size()) - 1;
        h.directions = dirs;
        for (Index id : rows) {
          h.nodes.push_back(en.row(id).nodes);
          h.horizontal.push_back(en.row(id).horizontal);
        }
        h.vertical = verticals;
        add(std::move(h));
      });
    }

  // Faces in the enumerated numbering; kNone when undefined or dropped.
  std::vector<std::vector<std::vector<Index>>> faces(levels);
  std::vector<std::vector<bool>> alive(levels);
  for (int k = 0; k <= truncation; ++k) {
    alive[k].assign(found[k].size(), true);
    faces[k].resize(found[k].size());
    if (k == 0) continue;
    for (std::size_t s = 0; s < found[k].size(); ++s)
      for (int i = 0; i <= k; ++i) {
        auto face = delete_row(c, found[k][s], i);
        std::optional<Hammock> red = face ? reduce(c, *face) : std::nullopt;
        Index t = kNone;
        if (red) {
          auto it = found_index[k - 1].find(hammock_key(*red));
          if (it != found_index[k - 1].end() && alive[k - 1][it->second]) t = it->second;
        }
        faces[k][s].push_back(t);
        if (t == kNone) alive[k][s] = false;
      }
  }

  MappingSpace m;
  m.source = x;
  m.sink = y;
  m.width_bound = width_bound;
  m.simplices = TruncatedSimplicialSet(truncation);
  m.keys.resize(levels);
  m.index.resize(levels);
  std::vector<std::vector<Index>> renumber(levels);
  for (int k = 0; k <= truncation; ++k) {
    renumber[k].assign(found[k].size(), kNone);
    for (std::size_t s = 0; s < found[k].size(); ++s) {
      if (!alive[k][s]) continue;
      auto key = hammock_key(found[k][s]);
      Index id = m.simplices.add_simplex(k, hammock_name(c, found[k][s]));
      renumber[k][s] = id;
      m.index[k].emplace(key, id);
      m.keys[k].push_back(std::move(key));
    }
  }
  for (int k = 0; k <= truncation; ++k)
    for (std::size_t s = 0; s < found[k].size(); ++s) {
      if (!alive[k][s]) continue;
      Index id = renumber[k][s];
      for (int i = 0; k > 0 && i <= k; ++i) m.simplices.set_face(k, i, id, renumber[k - 1][faces[k][s][i]]);
      for (int i = 0; k < truncation && i <= k; ++i) {
        Index t = m.find(k + 1, hammock_key(repeat_row(c, found[k][s], i)));
        if (t == kNone)
          throw ConsistencyError("degeneracy of " + m.simplices.name(k, id) + " is not in the mapping space");
        m.simplices.set_degeneracy(k, i, id, t);
      }
    }
  m.verdict = detail::stabilization(m);
  return m;
}

/// A 1-truncated face-closed part of the mapping space with the same pi_0:
/// every 0-simplex, their degeneracies, and a spanning forest of reduced
/// 1-simplices. Patterns are visited by increasing width, so the edges of
/// width <= k span the same components as all 1-simplices of width <= k,
/// which is what the stabilization verdict looks at. The full set of
/// 1-simplices is streamed, never stored.
inline MappingSpace skeleton_mapping_space(const RelativeCategory& r, Index x, Index y, int width_bound) {
  if (width_bound < 0) throw InputError("width bound must be nonnegative");
  if (width_bound > 62) throw InputError("width bound too large");
  const auto& c = r.cat;
  MappingSpace m;
  m.source = x;
  m.sink = y;
  m.width_bound = width_bound;
  m.simplices = TruncatedSimplicialSet(1);
  m.keys.resize(2);
  m.index.resize(2);
  auto add = [&](int level, const Hammock& h) {
    auto key = hammock_key(h);
    Index id = m.simplices.add_simplex(level, hammock_name(c, h));
    m.index[level].emplace(key, id);
    m.keys[level].push_back(std::move(key));
    return id;
  };

  auto pattern = [](int w, int start) {
    std::vector<Direction> dirs;
    for (int col = 0; col < w; ++col) dirs.push_back(static_cast<Direction>((start + col) % 2));
    return dirs;
  };
  auto row_hammock = [&](const detail::HammockEnumerator::Row& row, const std::vector<Direction>& dirs) {
    Hammock h;
    h.source = x;
    h.sink = y;
    h.width = static_cast<int>(dirs.size());
    h.directions = dirs;
    h.nodes = {row.nodes};
    h.horizontal = {row.horizontal};
    return h;
  };

  // Vertices in the same order as the full enumeration.
  if (x == y) add(0, identity_hammock(c, x, 0));
  for (int w = 1; w <= width_bound; ++w)
    for (int start = 0; start < 2; ++start) {
      auto dirs = pattern(w, start);
      detail::HammockEnumerator en(r, x, y, dirs);
      en.collect_rows();
      for (std::size_t id = 0; id < en.row_count(); ++id)
        if (en.row(static_cast<Index>(id)).identity_mask == 0) add(0, row_hammock(en.row(static_cast<Index>(id)), dirs));
    }
  std::vector<Index> degenerate;
  for (Index v = 0; v < m.simplices.size(0); ++v)
    degenerate.push_back(add(1, repeat_row(c, hammock_from_key(c, m.keys[0][v]), 0)));

  std::vector<std::pair<Index, Index>> edge_faces;  // (d1, d0) per non-degenerate edge
  UnionFind forest(static_cast<std::size_t>(m.simplices.size(0)));
  for (int w = 1; w <= width_bound; ++w)
    for (int start = 0; start < 2; ++start) {
      auto dirs = pattern(w, start);
      detail::HammockEnumerator en(r, x, y, dirs);
      en.collect_rows();
      const std::size_t rows = en.row_count();
      std::vector<Index> vertex(rows, kNone);
      for (std::size_t id = 0; id < rows; ++id) {
        auto red = reduce(c, row_hammock(en.row(static_cast<Index>(id)), dirs));
        if (red) vertex[id] = m.find(0, hammock_key(*red));
      }
      for (std::size_t id = 0; id < rows; ++id) {
        Index top = vertex[id];
        if (top == kNone) continue;
        for (const auto& next : en.distinct_successors(static_cast<Index>(id))) {
          Index bottom = vertex[next.row];
          if (bottom == kNone || forest.find(top) == forest.find(bottom)) continue;
          Hammock h = row_hammock(en.row(static_cast<Index>(id)), dirs);
          h.height = 1;
          h.nodes.push_back(en.row(next.row).nodes);
          h.horizontal.push_back(en.row(next.row).horizontal);
          h.vertical = {next.vertical};
          auto red = reduce(c, h);
          if (!red) continue;
          forest.unite(top, bottom);
          add(1, *red);
          edge_faces.emplace_back(top, bottom);
        }
      }
    }

  for (Index v = 0; v < m.simplices.size(0); ++v) {
    m.simplices.set_degeneracy(0, 0, v, degenerate[v]);
    m.simplices.set_face(1, 0, degenerate[v], v);
    m.simplices.set_face(1, 1, degenerate[v], v);
  }
  for (std::size_t e = 0; e < edge_faces.size(); ++e) {
    Index id = m.simplices.size(0) + static_cast<Index>(e);
    m.simplices.set_face(1, 1, id, edge_faces[e].first);
    m.simplices.set_face(1, 0, id, edge_faces[e].second);
  }
  m.verdict = detail::stabilization(m);
  return m;
}

// ---------------------------------------------------------------------------
// The localization as a simplicial category

struct LocalizationBounds {
  int truncation = 0;
  int width = 0;
  Stabilization verdict = Stabilization::Stable;
  std::size_t overflows = 0;  ///< composable 0-simplex pairs whose composite exceeds the width
  std::vector<std::string> unstable;  ///< "X->Y" for every BoundLimited mapping space

  void merge(const LocalizationBounds& other) {
    if (other.verdict == Stabilization::BoundLimited) verdict = Stabilization::BoundLimited;
    overflows += other.overflows;
    unstable.insert(unstable.end(), other.unstable.begin(), other.unstable.end());
  }
};

struct HammockLocalization {
  std::shared_ptr<const RelativeCategory> source;
  std::shared_ptr<const std::vector<MappingSpace>> spaces;  ///< indexed by pair
  TruncatedSimplicialCategory scat;
  LocalizationBounds bounds;

  [[nodiscard]] const MappingSpace& space(Index x, Index y) const { return (*spaces)[scat.pair(x, y)]; }
};

namespace detail {

struct CompositionCache {
  struct KeyHash {
    std::size_t operator()(const std::array<Index, 6>& k) const noexcept {
      std::uint64_t h = 1469598103934665603ull;
      for (Index v : k) h = (h ^ static_cast<std::uint64_t>(v)) * 1099511628211ull;
      return static_cast<std::size_t>(h);
    }
  };
  std::unordered_map<std::array<Index, 6>, Index, KeyHash> table;
};

}  // namespace detail

namespace detail {

template <typename Build>
HammockLocalization assemble_localization(const RelativeCategory& r, int truncation, int width_bound, Build&& build,
                                          bool count_overflows) {
  auto src = std::make_shared<const RelativeCategory>(r);
  const auto& c = src->cat;
  std::vector<std::string> names;
  for (Index o = 0; o < c.object_count(); ++o) names.push_back(c.object_name(o));
  HammockLocalization loc;
  loc.source = src;
  loc.scat = TruncatedSimplicialCategory(names, truncation);
  loc.bounds.truncation = truncation;
  loc.bounds.width = width_bound;
  auto spaces = std::make_shared<std::vector<MappingSpace>>();
  for (Index x = 0; x < c.object_count(); ++x)
    for (Index y = 0; y < c.object_count(); ++y) {
      spaces->push_back(build(*src, x, y));
      if (spaces->back().verdict == Stabilization::BoundLimited) {
        loc.bounds.verdict = Stabilization::BoundLimited;
        loc.bounds.unstable.push_back(c.object_name(x) + "->" + c.object_name(y));
      }
      loc.scat.set_hom(x, y, spaces->back().simplices);
    }
  for (Index x = 0; x < c.object_count(); ++x)
    loc.scat.set_identity(x, (*spaces)[loc.scat.pair(x, x)].find(0, hammock_key(identity_hammock(c, x, 0))));
  loc.spaces = spaces;

  auto cache = std::make_shared<detail::CompositionCache>();
  const Index n = c.object_count();
  loc.scat.set_composer([src, spaces, cache, n](Index a, Index b, Index d, int level, Index g, Index f) -> Index {
    std::array<Index, 6> key{a, b, d, static_cast<Index>(level), g, f};
    auto it = cache->table.find(key);
    if (it != cache->table.end()) return it->second;
    const auto& cat = src->cat;
    const auto& sf = (*spaces)[static_cast<std::size_t>(a) * n + b];
    const auto& sg = (*spaces)[static_cast<std::size_t>(b) * n + d];
    const auto& sgf = (*spaces)[static_cast<std::size_t>(a) * n + d];
    Index result = kNone;
    auto h = compose_hammocks(cat, hammock_from_key(cat, sg.keys[level][g]), hammock_from_key(cat, sf.keys[level][f]));
    if (h && h->width <= sgf.width_bound) result = sgf.find(level, hammock_key(*h));
    cache->table.emplace(key, result);
    return result;
  });

  for (Index a = 0; count_overflows && a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index d = 0; d < n; ++d) {
        const auto& sf = loc.scat.hom(a, b);
        const auto& sg = loc.scat.hom(b, d);
        for (Index g = 0; g < sg.size(0); ++g)
          for (Index f = 0; f < sf.size(0); ++f)
            if (loc.scat.compose(a, b, d, 0, g, f) == kNone) ++loc.bounds.overflows;
      }
  return loc;
}

}  // namespace detail

/// L^H truncated at height N and width w_max. Composites wider than w_max
/// are not represented (compose returns kNone).
inline HammockLocalization hammock_localization(const RelativeCategory& r, int truncation, int width_bound) {
  return detail::assemble_localization(
      r, truncation, width_bound,
      [&](const RelativeCategory& src, Index x, Index y) { return mapping_space(src, x, y, truncation, width_bound); },
      true);
}

/// Truncation-1 localization with skeleton mapping spaces: enough for pi_0
/// and the homotopy category at a fraction of the cost. Overflows are not
/// counted (that alone is quadratic in the number of 0-simplices).
inline HammockLocalization skeleton_localization(const RelativeCategory& r, int width_bound) {
  return detail::assemble_localization(
      r, 1, width_bound,
      [&](const RelativeCategory& src, Index x, Index y) { return skeleton_mapping_space(src, x, y, width_bound); },
      false);
}

/// The natural embedding promote(C) -> L^H(C, W): f goes to [f], degenerately.
inline SimplicialFunctor embed(const HammockLocalization& loc) {
  const auto& c = loc.source->cat;
  const int top = loc.scat.truncation();
  SimplicialFunctor f;
  for (Index x = 0; x < c.object_count(); ++x) f.object_map.push_back(x);
  for (Index x = 0; x < c.object_count(); ++x)
    for (Index y = 0; y < c.object_count(); ++y) {
      SimplicialMap m;
      for (int k = 0; k <= top; ++k) {
        std::vector<Index> level;
        for (Index mor : c.hom(x, y)) {
          Index t = loc.space(x, y).find(k, hammock_key(arrow_hammock(c, mor, k)));
          if (t == kNone) throw BoundError("embed: width bound 0 cannot hold " + c.morphism_name(mor));
          level.push_back(t);
        }
        m.levels.push_back(std::move(level));
      }
      f.hom_maps.push_back(std::move(m));
    }
  return f;
}

/// Entrywise application of a relative functor (C,W) -> (D,V) to hammocks.
inline SimplicialFunctor apply_relative_functor(const HammockLocalization& src, const HammockLocalization& tgt,
                                                const CatFunctor& f) {
  const auto& c = src.source->cat;
  const auto& d = tgt.source->cat;
  const int top = std::min(src.scat.truncation(), tgt.scat.truncation());
  SimplicialFunctor out;
  out.object_map = f.object_map;
  for (Index x = 0; x < c.object_count(); ++x)
    for (Index y = 0; y < c.object_count(); ++y) {
      const auto& from = src.space(x, y);
      const auto& to = tgt.space(f.object_map[x], f.object_map[y]);
      SimplicialMap m;
      for (int k = 0; k <= top; ++k) {
        std::vector<Index> level;
        for (const auto& key : from.keys[k]) {
          auto h = map_hammock(d, hammock_from_key(c, key), f.object_map, f.morphism_map);
          level.push_back(h ? to.find(k, hammock_key(*h)) : kNone);
        }
        m.levels.push_back(std::move(level));
      }
      out.hom_maps.push_back(std::move(m));
    }
  return out;
}

// ---------------------------------------------------------------------------
// Level categories and the dimensionwise localization

/// The category of level-n simplices of a simplicial category.
struct LevelCategory {
  FiniteCategory cat;
  std::vector<std::vector<Index>> morphism;  ///< [pair][simplex] -> morphism
};

inline LevelCategory level_category(const TruncatedSimplicialCategory& a, int level) {
  const Index n = a.object_count();
  LevelCategory out;
  out.morphism.resize(static_cast<std::size_t>(n) * n);
  FiniteCategoryBuilder b;
  std::unordered_map<std::string, int> seen;
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      for (Index s = 0; s < a.hom(x, y).size(level); ++s) ++seen[a.hom(x, y).name(level, s)];
  auto name = [&](Index x, Index y, Index s) {
    const std::string& base = a.hom(x, y).name(level, s);
    return seen[base] > 1 ? base + " [" + a.object_name(x) + "->" + a.object_name(y) + "]" : base;
  };
  for (Index x = 0; x < n; ++x) {
    Index id = a.identity_at(x, level);
    b.add_object(a.object_name(x), name(x, x, id));
    out.morphism[a.pair(x, x)].assign(static_cast<std::size_t>(a.hom(x, x).size(level)), kNone);
    out.morphism[a.pair(x, x)][id] = b.identity(x);
  }
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      auto& row = out.morphism[a.pair(x, y)];
      row.resize(static_cast<std::size_t>(a.hom(x, y).size(level)), kNone);
      for (Index s = 0; s < a.hom(x, y).size(level); ++s)
        if (row[s] == kNone) row[s] = b.add_morphism(name(x, y, s), x, y);
    }
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      for (Index z = 0; z < n; ++z)
        for (Index g = 0; g < a.hom(y, z).size(level); ++g)
          for (Index f = 0; f < a.hom(x, y).size(level); ++f) {
            Index gf = a.compose(x, y, z, level, g, f);
            if (gf != kNone)
              b.set_composite(out.morphism[a.pair(y, z)][g], out.morphism[a.pair(x, y)][f],
                              out.morphism[a.pair(x, z)][gf]);
          }
  out.cat = b.build();
  return out;
}

/// L^H of a relative simplicial category: the diagonal of the levelwise
/// localizations L^H(A_p, U_p).
struct RelscatLocalization {
  std::vector<LevelCategory> levels;
  std::vector<HammockLocalization> columns;
  TruncatedSimplicialCategory scat;
  LocalizationBounds bounds;
};

inline RelscatLocalization hammock_localization_relscat(const RelativeSimplicialCategory& rs, int truncation,
                                                        int width_bound) {
  const auto& a = rs.ambient;
  if (truncation > a.truncation()) throw InputError("truncation exceeds that of the input");
  if (truncation < 1) throw InputError("truncation must be >= 1");
  const Index n = a.object_count();
  RelscatLocalization out;
  out.bounds.truncation = truncation;
  out.bounds.width = width_bound;
  for (int p = 0; p <= truncation; ++p) {
    out.levels.push_back(level_category(a, p));
    const auto& lc = out.levels.back();
    IndexSet weq(static_cast<std::size_t>(lc.cat.morphism_count()));
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y)
        for (Index s : rs.sub[a.pair(x, y)][p].members()) weq.insert(lc.morphism[a.pair(x, y)][s]);
    out.columns.push_back(hammock_localization(RelativeCategory{lc.cat, weq}, truncation, width_bound));
  }
  // Composition of 0-simplices happens in the first column.
  out.bounds.overflows = out.columns[0].bounds.overflows;

  // Operator functors between the level categories.
  auto operator_functor = [&](int from, int to, auto&& act) {
    CatFunctor f;
    for (Index x = 0; x < n; ++x) f.object_map.push_back(x);
    f.morphism_map.assign(out.levels[from].cat.morphism_count(), kNone);
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y)
        for (Index s = 0; s < a.hom(x, y).size(from); ++s)
          f.morphism_map[out.levels[from].morphism[a.pair(x, y)][s]] = out.levels[to].morphism[a.pair(x, y)][act(x, y, s)];
    return f;
  };

  std::vector<std::string> names(a.objects());
  out.scat = TruncatedSimplicialCategory(names, truncation);
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      BisimplicialSet bis;
      for (int p = 0; p <= truncation; ++p) bis.columns.push_back(out.columns[p].space(x, y).simplices);
      bis.faces.resize(static_cast<std::size_t>(truncation) + 1);
      bis.degeneracies.resize(static_cast<std::size_t>(truncation) + 1);
      for (int p = 0; p <= truncation; ++p) {
        const auto& col = out.columns[p].space(x, y);
        auto image_at_level_p = [&](const CatFunctor& f, int to) {
          SimplicialMap m;
          m.levels.resize(static_cast<std::size_t>(truncation) + 1);
          const auto& target = out.columns[to].space(x, y);
          for (const auto& key : col.keys[p]) {
            auto h = map_hammock(out.levels[to].cat, hammock_from_key(out.levels[p].cat, key), f.object_map,
                                 f.morphism_map);
            m.levels[p].push_back(h ? target.find(p, hammock_key(*h)) : kNone);
          }
          return m;
        };
        for (int i = 0; p > 0 && i <= p; ++i)
          bis.faces[p].push_back(image_at_level_p(
              operator_functor(p, p - 1, [&](Index u, Index v, Index s) { return a.hom(u, v).face(p, i, s); }), p - 1));
        for (int i = 0; p < truncation && i <= p; ++i)
          bis.degeneracies[p].push_back(image_at_level_p(
              operator_functor(p, p + 1, [&](Index u, Index v, Index s) { return a.hom(u, v).degeneracy(p, i, s); }),
              p + 1));
      }
      out.scat.set_hom(x, y, diagonal(bis, truncation));
      // Each column alone may have unbounded pi_0; only the diagonal counts.
      std::vector<int> w0, w1;
      for (const auto& k : out.columns[0].space(x, y).keys[0]) w0.push_back(key_width(k));
      for (const auto& k : out.columns[1].space(x, y).keys[1]) w1.push_back(key_width(k));
      if (detail::stabilization(out.scat.hom(x, y), w0, w1, width_bound) == Stabilization::BoundLimited) {
        out.bounds.verdict = Stabilization::BoundLimited;
        out.bounds.unstable.push_back(a.object_name(x) + "->" + a.object_name(y));
      }
    }
  for (Index x = 0; x < n; ++x) out.scat.set_identity(x, out.columns[0].scat.identity(x));
  auto columns = std::make_shared<std::vector<TruncatedSimplicialCategory>>();
  for (const auto& col : out.columns) columns->push_back(col.scat);
  out.scat.set_composer([columns](Index x, Index y, Index z, int level, Index g, Index f) {
    return (*columns)[level].compose(x, y, z, level, g, f);
  });
  return out;
}

/// The natural map B -> L^H(B, V): a level-n simplex s goes to the
/// height-n hammock [s] of the n-th column.
inline SimplicialFunctor relscat_embedding(const RelativeSimplicialCategory& rs, const RelscatLocalization& loc) {
  const auto& a = rs.ambient;
  const Index n = a.object_count();
  const int top = loc.scat.truncation();
  SimplicialFunctor f;
  for (Index x = 0; x < n; ++x) f.object_map.push_back(x);
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      SimplicialMap m;
      for (int k = 0; k <= top; ++k) {
        std::vector<Index> level;
        const auto& lc = loc.levels[k];
        for (Index s = 0; s < a.hom(x, y).size(k); ++s) {
          Index t = loc.columns[k].space(x, y).find(k, hammock_key(arrow_hammock(lc.cat, lc.morphism[a.pair(x, y)][s], k)));
          level.push_back(t);
        }
        m.levels.push_back(std::move(level));
      }
      f.hom_maps.push_back(std::move(m));
    }
  return f;
}

/// The relative simplicial category (L^H(C,W), image of `marked` under
/// embed, closed up).
inline RelativeSimplicialCategory localization_with_weq(const HammockLocalization& loc, const IndexSet& marked) {
  auto rs = minimal_relative(loc.scat);
  const auto& c = loc.source->cat;
  auto e = embed(loc);
  for (Index w : marked.members()) {
    std::size_t p = loc.scat.pair(c.dom(w), c.cod(w));
    Index pos = 0;
    for (Index m : c.hom(c.dom(w), c.cod(w))) {
      if (m == w) break;
      ++pos;
    }
    for (int k = 0; k <= loc.scat.truncation(); ++k) rs.sub[p][k].insert(e.hom_maps[p](k, pos));
  }
  close_subobject(rs);
  return rs;
}

inline RelativeSimplicialCategory localization_with_weq(const HammockLocalization& loc) {
  return localization_with_weq(loc, loc.source->weq);
}

/// L^H c : L^H(C,W) -> L^H(L^H(C,W), W), applying the embedding entrywise.
inline SimplicialFunctor localized_embedding(const HammockLocalization& loc, const RelscatLocalization& target) {
  const auto& c = loc.source->cat;
  const Index n = c.object_count();
  const int top = std::min(loc.scat.truncation(), target.scat.truncation());
  auto e = embed(loc);
  SimplicialFunctor out;
  for (Index x = 0; x < n; ++x) out.object_map.push_back(x);
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      SimplicialMap m;
      for (int k = 0; k <= top; ++k) {
        const auto& lc = target.levels[k];
        // C-morphism -> morphism of the level-k category of L^H(C,W).
        std::vector<Index> morphism_map(c.morphism_count(), kNone);
        for (Index u = 0; u < n; ++u)
          for (Index v = 0; v < n; ++v) {
            auto h = c.hom(u, v);
            for (std::size_t i = 0; i < h.size(); ++i)
              morphism_map[h[i]] = lc.morphism[loc.scat.pair(u, v)][e.hom_maps[loc.scat.pair(u, v)](k, static_cast<Index>(i))];
          }
        std::vector<Index> object_map(out.object_map);
        std::vector<Index> level;
        for (const auto& key : loc.space(x, y).keys[k]) {
          auto h = map_hammock(lc.cat, hammock_from_key(c, key), object_map, morphism_map);
          level.push_back(h ? target.columns[k].space(x, y).find(k, hammock_key(*h)) : kNone);
        }
        m.levels.push_back(std::move(level));
      }
      out.hom_maps.push_back(std::move(m));
    }
  return out;
}

}  // namespace simploc
