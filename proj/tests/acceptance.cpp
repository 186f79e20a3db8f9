// Acceptance gate: one line per criterion, PASS or FAIL, with wall time.
//
//   acceptance [--only K]... [--expect-fail K]...
//
// Exits 0 iff the set of failing criteria is exactly the expected set, so a
// known failure stays visible in the output while regressions elsewhere (or
// an unexpected fix) still break the build.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hammock_gen.hpp"
#include "scat_util.hpp"
#include "simploc/flatten.hpp"
#include "simploc/io.hpp"
#include "simploc/verify.hpp"
#include "suite.hpp"
#include "test_util.hpp"

using namespace simploc;
namespace fs = std::filesystem;

namespace {

/// Collects failures; a criterion passes when none were recorded and the
/// time limit held.
struct Tally {
  std::vector<std::string> problems;
  std::size_t checked = 0;

  void expect(bool ok, const std::string& what) {
    ++checked;
    if (!ok && problems.size() < 20) problems.push_back(what);
    if (!ok && problems.size() == 20) problems.push_back("...");
  }
};

std::string pair_name(const FiniteCategory& c, Index x, Index y) {
  return c.object_name(x) + "->" + c.object_name(y);
}

// Monotone maps [n] -> [m], counted by brute force rather than by formula.
long count_monotone(int n, int m) {
  long total = 0, functions = 1;
  for (int i = 0; i <= n; ++i) functions *= m + 1;
  for (long code = 0; code < functions; ++code) {
    long rest = code;
    int prev = -1;
    bool ok = true;
    for (int i = 0; i <= n; ++i) {
      int v = static_cast<int>(rest % (m + 1));
      rest /= m + 1;
      if (v < prev) ok = false;
      prev = v;
    }
    total += ok;
  }
  return total;
}

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

VerifyBounds at(int n, int w) {
  VerifyBounds b;
  b.truncation = n;
  b.width = w;
  return b;
}

RelativeSimplicialCategory marked(const TruncatedSimplicialCategory& a, const std::vector<std::string>& names) {
  auto r = minimal_relative(a);
  for (Index x = 0; x < a.object_count(); ++x)
    for (Index y = 0; y < a.object_count(); ++y)
      for (const auto& n : names)
        if (auto s = a.hom(x, y).find(0, n)) r.sub[a.pair(x, y)][0].insert(*s);
  close_subobject(r);
  return r;
}

bool has_terminal_object(const FiniteCategory& c) {
  for (Index t = 0; t < c.object_count(); ++t) {
    bool all = true;
    for (Index x = 0; x < c.object_count() && all; ++x) all = c.hom(x, t).size() == 1;
    if (all) return true;
  }
  return false;
}

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& args) {
  std::string cmd = std::string(SIMPLOC_BIN) + " " + args + " 2>/dev/null";
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return {-1, {}};
  std::string out;
  char buf[4096];
  while (auto n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  int status = ::pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

// ---------------------------------------------------------------------------

Tally discrete_law() {
  Tally t;
  auto inputs = testutil::generated_categories(12, 4, 12, 2024);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& c = inputs[i];
    auto loc = hammock_localization(minimal_relative(c), 2, 3);
    auto e = embed(loc);
    t.expect(loc.bounds.verdict == Stabilization::Stable, "category " + std::to_string(i) + " not Stable");
    for (Index x = 0; x < c.object_count(); ++x)
      for (Index y = 0; y < c.object_count(); ++y) {
        const auto& m = loc.space(x, y);
        std::size_t homs = c.hom(x, y).size();
        auto where = "category " + std::to_string(i) + " " + pair_name(c, x, y);
        for (int k = 0; k <= 2; ++k)
          t.expect(static_cast<std::size_t>(m.simplices.size(k)) == homs, where + " level " + std::to_string(k));
        t.expect(static_cast<std::size_t>(pi0(m.simplices).classes) == homs, where + " pi0");
        // The bijection is the embedding of C itself on vertices.
        std::set<Index> hit;
        for (std::size_t pos = 0; pos < homs; ++pos) hit.insert(e.hom_maps[loc.scat.pair(x, y)](0, static_cast<Index>(pos)));
        t.expect(hit.size() == homs, where + " embedding not injective on vertices");
      }
  }
  return t;
}

Tally oracle_agreement() {
  Tally t;
  std::size_t compared = 0;
  for (const auto& [name, r] : testutil::relative_suite()) {
    auto loc = hammock_localization(r, 1, 4);
    for (Index x = 0; x < r.cat.object_count(); ++x)
      for (Index y = 0; y < r.cat.object_count(); ++y) {
        const auto& m = loc.space(x, y);
        if (m.verdict != Stabilization::Stable) continue;
        auto oracle = oracle_localized_homset(r, x, y, 8);
        if (!oracle.determined) continue;
        ++compared;
        t.expect(static_cast<std::size_t>(pi0(m.simplices).classes) == oracle.classes.size(),
                 name + " " + pair_name(r.cat, x, y));
      }
  }
  t.expect(compared > 0, "nothing compared");
  return t;
}

Tally weq_inverted() {
  Tally t;
  std::size_t stable = 0;
  for (const auto& [name, r] : testutil::relative_suite()) {
    auto loc = hammock_localization(r, 1, 4);
    if (loc.bounds.verdict != Stabilization::Stable) continue;
    ++stable;
    auto ho = homotopy_data(loc.scat);
    auto e = embed(loc);
    for (Index w : r.weq.members()) {
      Index x = r.cat.dom(w), y = r.cat.cod(w);
      auto hom = r.cat.hom(x, y);
      Index pos = static_cast<Index>(std::find(hom.begin(), hom.end(), w) - hom.begin());
      std::size_t p = loc.scat.pair(x, y);
      Index s = e.hom_maps[p](0, pos);
      t.expect(is_isomorphism(ho.cat, ho.morphism[p][ho.components[p].label[s]]), name + " " + r.cat.morphism_name(w));
    }
  }
  t.expect(stable >= 8, "only " + std::to_string(stable) + " Stable suite inputs");
  return t;
}

Tally flatten_counts() {
  Tally t;
  std::vector<TruncatedSimplicialCategory> inputs;
  inputs.push_back(promote(cats::chain3(), 2));
  inputs.push_back(testutil::classifying_monoid(2, 2));
  inputs.push_back(testutil::classifying_monoid(3, 1));
  inputs.push_back(hammock_localization(minimal_relative(cats::span()), 2, 2).scat);
  for (const auto& c : testutil::generated_categories(3, 3, 5, 41)) inputs.push_back(promote(c, 2));
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& a = inputs[i];
    auto f = flatten(a);
    auto where = "input " + std::to_string(i);
    t.expect(validate_category(f.rel.cat).ok(), where + " validate_category");
    t.expect(validate_relative(f.rel).ok(), where + " validate_relative");
    const int top = a.truncation();
    for (Index x = 0; x < a.object_count(); ++x)
      for (Index y = 0; y < a.object_count(); ++y)
        for (int n1 = 0; n1 <= top; ++n1)
          for (int n2 = 0; n2 <= top; ++n2) {
            long got = static_cast<long>(f.rel.cat.hom(f.flat.object(x, n1), f.flat.object(y, n2)).size());
            long brute = count_monotone(n2, n1) * a.hom(x, y).size(n2);
            long formula = binomial(n1 + n2 + 1, n2 + 1) * a.hom(x, y).size(n2);
            t.expect(got == brute && got == formula, where + " (" + std::to_string(n1) + "," + std::to_string(n2) + ")");
          }
  }
  return t;
}

Tally desk_check_24ii() {
  Tally t;
  std::vector<std::pair<std::string, RelativeSimplicialCategory>> inputs;
  inputs.emplace_back("terminal", minimal_relative(promote(cats::terminal(), 1)));
  inputs.emplace_back("span", minimal_relative(promote(cats::span(), 1)));
  inputs.emplace_back("chain, from N=2", minimal_relative(promote(cats::chain3(), 2)));
  inputs.emplace_back("walking iso, both marked", marked(promote(cats::walking_isomorphism(), 1), {"f", "g"}));
  inputs.emplace_back("Z/3 as a category, all marked", marked(promote(cats::cyclic_group(3), 1), {"e1", "e2"}));
  inputs.emplace_back("localized walking weq",
                      localization_with_weq(hammock_localization(with_weq(cats::walking_arrow("w"), {"w"}), 1, 3)));
  for (const auto& [name, rs] : inputs) {
    auto rep = check_24ii(rs, at(1, 4));
    t.expect(rep.verdict == ClaimVerdict::Pass, name + ": " + to_string(rep.verdict));
  }
  return t;
}

Tally roundtrip() {
  Tally t;
  std::vector<std::pair<std::string, RelativeCategory>> inputs;
  inputs.emplace_back("terminal", minimal_relative(cats::terminal()));
  inputs.emplace_back("walking arrow", minimal_relative(cats::walking_arrow()));
  inputs.emplace_back("walking weq", with_weq(cats::walking_arrow("w"), {"w"}));
  for (const auto& [name, r] : inputs) {
    auto rep = check_roundtrip(r, at(1, 4));
    t.expect(rep.verdict == ClaimVerdict::Pass, name + ": " + to_string(rep.verdict) +
                                                    (rep.witness.empty() ? "" : " (" + rep.witness + ")"));
  }
  return t;
}

Tally confluence() {
  Tally t;
  std::mt19937 rng(20261016);
  auto cats_ = testutil::generated_categories(16, 3, 6, 9);
  cats_.push_back(cats::walking_arrow());
  cats_.push_back(cats::chain3());
  int generated = 0;
  for (int trial = 0; generated < 1000 && trial < 5000; ++trial) {
    auto r = testutil::everything_weak(cats_[trial % cats_.size()]);
    int width = 1 + static_cast<int>(rng() % 5), height = static_cast<int>(rng() % 3);
    auto h = testutil::random_hammock(rng, r, width, height);
    if (!h) continue;
    ++generated;
    auto a = reduce(r.cat, *h, ReductionOrder::Leftmost);
    auto b = reduce(r.cat, *h, ReductionOrder::Rightmost);
    t.expect(a.has_value() == b.has_value() && (!a || *a == *b), "trial " + std::to_string(trial));
  }
  t.expect(generated == 1000, "generated only " + std::to_string(generated));
  return t;
}

Tally sanity() {
  Tally t;
  std::vector<FiniteCategory> cats_;
  for (const auto& [name, r] : testutil::relative_suite()) cats_.push_back(r.cat);
  for (auto& c : testutil::generated_categories(10, 4, 8, 88)) cats_.push_back(std::move(c));
  cats_.push_back(cats::linear_order(4));
  std::size_t terminal = 0;
  for (std::size_t i = 0; i < cats_.size(); ++i) {
    auto x = nerve(cats_[i], 2);
    t.expect(validate_simplicial_set(x).ok(), "nerve " + std::to_string(i));
    if (!has_terminal_object(cats_[i])) continue;
    ++terminal;
    auto h = homology(x);
    t.expect(h.groups.size() == 2 && h.groups[0].free_rank == 1 && h.groups[0].torsion.empty() &&
                 h.groups[1].free_rank == 0 && h.groups[1].torsion.empty(),
             "homology of nerve " + std::to_string(i));
  }
  t.expect(terminal >= 5, "only " + std::to_string(terminal) + " categories with a terminal object");
  // Mapping spaces and flattenings built along the way.
  for (const auto& [name, r] : testutil::relative_suite()) {
    auto loc = hammock_localization(r, 2, 3);
    for (Index x = 0; x < r.cat.object_count(); ++x)
      for (Index y = 0; y < r.cat.object_count(); ++y)
        t.expect(validate_simplicial_set(loc.space(x, y).simplices).ok(), name + " " + pair_name(r.cat, x, y));
  }
  auto g = testutil::classifying_monoid(3, 2);
  t.expect(validate_simplicial_set(g.hom(0, 0)).ok(), "B(Z/3)");
  return t;
}

Tally determinism() {
  Tally t;
  auto dir = fs::temp_directory_path() / ("simploc-acceptance-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  for (const char* input : {"terminal.json", "walking-arrow.json"}) {
    auto args = "verify 3.1 " + (fs::path(SIMPLOC_DATA) / input).string() + " --truncation 1 --width 3";
    auto first = run_cli(args), second = run_cli(args);
    t.expect(first.code == 0 && !first.out.empty(), std::string(input) + " exit " + std::to_string(first.code));
    t.expect(first.out == second.out, std::string(input) + " repeated runs differ");
    auto cold = run_cli("--cache-dir " + dir.string() + " " + args);
    auto warm = run_cli("--cache-dir " + dir.string() + " " + args);
    t.expect(cold.out == first.out, std::string(input) + " cached cold run differs");
    t.expect(warm.out == cold.out && warm.code == cold.code, std::string(input) + " cache hit differs");
  }
  // The library report itself, twice in-process.
  auto r = with_weq(cats::walking_arrow("w"), {"w"});
  t.expect(render(to_json(check_roundtrip(r, at(1, 3)))) == render(to_json(check_roundtrip(r, at(1, 3)))),
           "in-process reports differ");
  fs::remove_all(dir);
  return t;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0 means no limit
  std::function<Tally()> body;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only, expected;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if ((a == "--only" || a == "--expect-fail") && i + 1 < argc) {
      (a == "--only" ? only : expected).insert(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--only K]... [--expect-fail K]...\n";
      return 2;
    }
  }

  const std::vector<Criterion> all{
      {1, "discrete localization law", 60, discrete_law},
      {2, "oracle agreement", 300, oracle_agreement},
      {3, "localization inverts weak equivalences", 0, weq_inverted},
      {4, "flattening count law", 0, flatten_counts},
      {5, "neglectable desk check", 300, desk_check_24ii},
      {6, "roundtrip through flattening", 600, roundtrip},
      {7, "reduction confluence", 0, confluence},
      {8, "simplicial identities and nerve homology", 0, sanity},
      {9, "determinism and cache", 0, determinism},
  };

  std::set<int> failed;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    auto start = std::chrono::steady_clock::now();
    Tally t;
    try {
      t = c.body();
    } catch (const std::exception& e) {
      t.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) t.expect(false, "over time limit");
    bool pass = t.problems.empty();
    if (!pass) failed.insert(c.id);
    std::ostringstream line;
    line << (pass ? "PASS" : "FAIL") << "  " << c.id << "  " << c.name << "  (" << t.checked << " checks, ";
    line.precision(1);
    line << std::fixed << secs << " s";
    if (c.limit_seconds > 0) line << " of " << c.limit_seconds << " s";
    line << ")";
    if (!pass && expected.count(c.id)) line << "  [known]";
    std::cout << line.str() << "\n";
    for (const auto& p : t.problems) std::cout << "        " << p << "\n";
    std::cout.flush();
  }

  std::set<int> expected_here;
  for (int k : expected)
    if (only.empty() || only.count(k)) expected_here.insert(k);
  if (failed != expected_here) {
    std::cout << "acceptance: failing set differs from the expected set\n";
    return 1;
  }
  return 0;
}
