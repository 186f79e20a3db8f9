#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "simploc/core.hpp"

namespace simploc {

using BigInt = boost::multiprecision::cpp_int;

/// Sparse integer matrix, row-major.
class SparseIntMatrix {
 public:
  SparseIntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }

  void add(std::size_t r, std::size_t c, const BigInt& v) {
    if (v == 0) return;
    auto& row = entries_.at(r);
    auto [it, inserted] = row.emplace(static_cast<Index>(c), v);
    if (!inserted) {
      it->second += v;
      if (it->second == 0) row.erase(it);
    }
  }

  [[nodiscard]] const std::map<Index, BigInt>& row(std::size_t r) const { return entries_[r]; }
  std::map<Index, BigInt>& row(std::size_t r) { return entries_[r]; }

 private:
  std::size_t rows_, cols_;
  std::vector<std::map<Index, BigInt>> entries_;
};

struct SmithResult {
  std::size_t rank = 0;
  /// Invariant factors greater than one, each dividing the next.
  std::vector<BigInt> torsion;
};

namespace detail {

inline BigInt big_abs(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

/// Smith diagonal of a dense matrix; returns nonzero diagonal entries
/// (absolute values, not yet normalized into a divisibility chain).
inline std::vector<BigInt> dense_smith_diagonal(std::vector<std::vector<BigInt>> a) {
  std::vector<BigInt> diag;
  const std::size_t m = a.size();
  const std::size_t n = m ? a[0].size() : 0;
  std::size_t t = 0;
  while (t < m && t < n) {
    // Smallest nonzero entry in the trailing block.
    std::size_t pr = m, pc = n;
    BigInt best;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (a[i][j] != 0 && (pr == m || big_abs(a[i][j]) < best)) {
          best = big_abs(a[i][j]);
          pr = i;
          pc = j;
        }
    if (pr == m) break;
    std::swap(a[t], a[pr]);
    for (auto& row : a) std::swap(row[t], row[pc]);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        BigInt q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < n; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) {
          std::swap(a[t], a[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        BigInt q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < m; ++i) a[i][j] -= q * a[i][t];
        if (a[t][j] != 0) {
          for (auto& row : a) std::swap(row[t], row[j]);
          clean = false;
        }
      }
    }
    diag.push_back(big_abs(a[t][t]));
    ++t;
  }
  return diag;
}

/// Turns a list of positive diagonal entries into invariant factors.
inline std::vector<BigInt> divisibility_chain(std::vector<BigInt> d) {
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      BigInt g = boost::multiprecision::gcd(d[i], d[j]);
      BigInt l = d[i] / g * d[j];
      d[i] = g;
      d[j] = l;
    }
  return d;
}

}  // namespace detail

/// Rank and torsion invariant factors of an integer matrix.
///
/// Unit pivots are eliminated sparsely first (boundary matrices of
/// simplicial sets are mostly +-1), the remaining block is diagonalized
/// densely over arbitrary-precision integers.
inline SmithResult smith_normal_form(SparseIntMatrix m) {
  SmithResult result;
  std::vector<std::set<Index>> col_rows(m.cols());
  std::set<Index> live_rows;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (m.row(r).empty()) continue;
    live_rows.insert(static_cast<Index>(r));
    for (const auto& [c, v] : m.row(r)) col_rows[c].insert(static_cast<Index>(r));
  }

  for (;;) {
    Index pr = kNone, pc = kNone;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (Index r : live_rows) {
      const auto& row = m.row(r);
      for (const auto& [c, v] : row) {
        if (v != 1 && v != -1) continue;
        std::size_t cost = (row.size() - 1) * (col_rows[c].size() - 1);
        if (cost < best) {
          best = cost;
          pr = r;
          pc = c;
          if (cost == 0) break;
        }
      }
      if (best == 0) break;
    }
    if (pr == kNone) break;

    const BigInt unit = m.row(pr).at(pc);
    const auto pivot_row = m.row(pr);
    std::vector<Index> others(col_rows[pc].begin(), col_rows[pc].end());
    for (Index r : others) {
      if (r == pr) continue;
      auto& row = m.row(r);
      BigInt factor = row.at(pc) * unit;
      for (const auto& [c, v] : pivot_row) {
        auto it = row.find(c);
        BigInt nv = (it == row.end() ? BigInt(0) : it->second) - factor * v;
        if (nv == 0) {
          if (it != row.end()) row.erase(it);
          col_rows[c].erase(r);
        } else if (it == row.end()) {
          row.emplace(c, nv);
          col_rows[c].insert(r);
        } else {
          it->second = nv;
        }
      }
      if (row.empty()) live_rows.erase(r);
    }
    for (const auto& [c, v] : pivot_row) col_rows[c].erase(pr);
    m.row(pr).clear();
    live_rows.erase(pr);
    ++result.rank;
  }

  if (!live_rows.empty()) {
    std::vector<Index> cols;
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (!col_rows[c].empty()) cols.push_back(static_cast<Index>(c));
    std::vector<std::vector<BigInt>> dense;
    for (Index r : live_rows) {
      std::vector<BigInt> row(cols.size());
      for (std::size_t j = 0; j < cols.size(); ++j) {
        auto it = m.row(r).find(cols[j]);
        if (it != m.row(r).end()) row[j] = it->second;
      }
      dense.push_back(std::move(row));
    }
    auto diag = detail::divisibility_chain(detail::dense_smith_diagonal(std::move(dense)));
    result.rank += diag.size();
    for (auto& d : diag)
      if (d > 1) result.torsion.push_back(d);
  }
  return result;
}

}  // namespace simploc
