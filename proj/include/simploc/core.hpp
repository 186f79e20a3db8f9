#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace simploc {

/// Dense index into an object, morphism or simplex table.
using Index = std::int32_t;
inline constexpr Index kNone = -1;

/// Malformed or contract-violating input (unknown names, bad dimensions, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Derived data turned out to be inconsistent, e.g. an induced composition
/// on components that depends on the chosen representatives.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A computation could not be completed inside the requested bounds.
class BoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A subset of a dense index range.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::size_t universe) : bits_(universe, false) {}

  [[nodiscard]] std::size_t universe() const { return bits_.size(); }
  [[nodiscard]] bool contains(Index i) const {
    return i >= 0 && static_cast<std::size_t>(i) < bits_.size() && bits_[i];
  }
  void insert(Index i) { bits_.at(static_cast<std::size_t>(i)) = true; }
  void erase(Index i) { bits_.at(static_cast<std::size_t>(i)) = false; }

  [[nodiscard]] std::size_t count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
  }
  [[nodiscard]] std::vector<Index> members() const {
    std::vector<Index> out;
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) out.push_back(static_cast<Index>(i));
    return out;
  }
  /// Returns true if anything was added.
  bool merge(const IndexSet& other) {
    bool changed = false;
    for (std::size_t i = 0; i < other.bits_.size() && i < bits_.size(); ++i)
      if (other.bits_[i] && !bits_[i]) {
        bits_[i] = true;
        changed = true;
      }
    return changed;
  }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<bool> bits_;
};

/// Disjoint-set forest with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }

  Index add() {
    parent_.push_back(static_cast<Index>(parent_.size()));
    size_.push_back(1);
    return parent_.back();
  }

  Index find(Index x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  [[nodiscard]] std::size_t size() const { return parent_.size(); }

  /// Class label per element, labels numbered by first occurrence.
  std::vector<Index> labels() {
    std::vector<Index> root_label(parent_.size(), kNone);
    std::vector<Index> out(parent_.size());
    Index next = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      Index r = find(static_cast<Index>(i));
      if (root_label[r] == kNone) root_label[r] = next++;
      out[i] = root_label[r];
    }
    return out;
  }

 private:
  std::vector<Index> parent_;
  std::vector<std::size_t> size_;
};

/// A partition of 0..n-1 given by class labels numbered by first occurrence.
struct Partition {
  std::vector<Index> label;
  Index classes = 0;

  static Partition from_labels(std::vector<Index> labels) {
    Partition p;
    p.label = std::move(labels);
    for (Index l : p.label) p.classes = std::max(p.classes, l + 1);
    return p;
  }

  [[nodiscard]] std::vector<std::vector<Index>> blocks() const {
    std::vector<std::vector<Index>> out(static_cast<std::size_t>(classes));
    for (std::size_t i = 0; i < label.size(); ++i) out[label[i]].push_back(static_cast<Index>(i));
    return out;
  }

  friend bool operator==(const Partition&, const Partition&) = default;
};

struct VectorHash {
  template <typename T>
  std::size_t operator()(const std::vector<T>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& x : v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace simploc
