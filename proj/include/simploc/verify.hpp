#pragma once
// Desk-scale verification pipelines. Each check builds the localizations it
// needs at the given truncation and width, runs the relevant certificate or
// equivalence search, and records every stage in an ExperimentReport.

#include <deque>
#include <map>
#include <set>

#include "simploc/flatten.hpp"
#include "simploc/io.hpp"

namespace simploc {

enum class ClaimVerdict { Pass, Fail, Undetermined, Inapplicable };

inline const char* to_string(ClaimVerdict v) {
  switch (v) {
    case ClaimVerdict::Pass: return "Pass(partial)";
    case ClaimVerdict::Fail: return "Fail";
    case ClaimVerdict::Undetermined: return "Undetermined";
    case ClaimVerdict::Inapplicable: return "Inapplicable";
  }
  return "?";
}

/// 0 success, 1 claim violated, 2 bad input or failed precondition, 3 bounds too small.
inline int exit_code(ClaimVerdict v) {
  switch (v) {
    case ClaimVerdict::Pass: return 0;
    case ClaimVerdict::Fail: return 1;
    case ClaimVerdict::Inapplicable: return 2;
    case ClaimVerdict::Undetermined: return 3;
  }
  return 3;
}

struct VerifyBounds {
  int truncation = 1;
  int width = 4;
  std::size_t homology_budget = 5'000'000;      ///< simplices fed to homology
  std::size_t equivalence_budget = 10'000'000;  ///< search nodes
  std::size_t members_per_class = 8;            ///< composition samples per pi_0 class, 0 = all
  int oracle_length = 8;
};

inline Json to_json(const VerifyBounds& b) {
  return {{"truncation", b.truncation},
          {"width", b.width},
          {"homology_budget", b.homology_budget},
          {"equivalence_budget", b.equivalence_budget},
          {"members_per_class", b.members_per_class},
          {"oracle_length", b.oracle_length}};
}

struct CheckOutcome {
  std::string check;
  std::string status;
  std::string detail;
};

struct ExperimentReport {
  std::string claim;
  std::string scope;
  Json inputs = Json::array();
  VerifyBounds bounds;
  std::vector<CheckOutcome> outcomes;
  ClaimVerdict verdict = ClaimVerdict::Undetermined;
  std::string witness;

  void add(std::string check, std::string status, std::string detail = {}) {
    outcomes.push_back({std::move(check), std::move(status), std::move(detail)});
  }
  void add_input(const std::string& name, const Json& doc) {
    inputs.push_back({{"name", name}, {"sha256", content_hash(doc)}});
  }
};

inline Json to_json(const ExperimentReport& r) {
  Json outcomes = Json::array();
  for (const auto& o : r.outcomes) outcomes.push_back({{"check", o.check}, {"status", o.status}, {"detail", o.detail}});
  return {{"claim", r.claim},     {"scope", r.scope},     {"inputs", r.inputs},
          {"bounds", to_json(r.bounds)}, {"outcomes", outcomes}, {"verdict", to_string(r.verdict)},
          {"witness", r.witness}};
}

/// Human-readable summary; deterministic like the JSON.
inline std::string summary(const ExperimentReport& r) {
  std::ostringstream out;
  out << "claim " << r.claim << " (N=" << r.bounds.truncation << ", w=" << r.bounds.width << ")\n";
  for (const auto& o : r.outcomes) {
    out << "  " << o.check << ": " << o.status;
    if (!o.detail.empty()) out << " -- " << o.detail;
    out << "\n";
  }
  out << "verdict: " << to_string(r.verdict);
  if (!r.witness.empty()) out << " (" << r.witness << ")";
  out << "\n";
  return out.str();
}

namespace detail {

inline const char* kScope =
    "desk-scale check at finite truncation and width; mapping spaces are compared through pi_0 and "
    "homology below the truncation, so a pass is partial evidence, not a proof";

/// The certificate verdict, downgraded when any localization involved is
/// bound limited: nothing is claimed from unstable data.
inline void conclude(ExperimentReport& rep, const DkCertificate& cert, bool stable) {
  rep.add("dk certificate", to_string(cert.verdict), cert.witness);
  switch (cert.verdict) {
    case Verdict::Pass:
      rep.verdict = stable ? ClaimVerdict::Pass : ClaimVerdict::Undetermined;
      if (!stable) rep.witness = "certificate passed but a localization is bound limited";
      break;
    case Verdict::Fail:
      rep.verdict = stable ? ClaimVerdict::Fail : ClaimVerdict::Undetermined;
      rep.witness = stable ? cert.witness : "certificate failed on bound-limited data: " + cert.witness;
      break;
    case Verdict::Undetermined:
      rep.verdict = ClaimVerdict::Undetermined;
      rep.witness = cert.witness;
      break;
  }
}

inline void record_bounds(ExperimentReport& rep, const std::string& what, const LocalizationBounds& b) {
  std::string detail = "overflows " + std::to_string(b.overflows);
  if (!b.unstable.empty()) {
    detail += "; unstable";
    for (const auto& u : b.unstable) detail += " " + u;
  }
  rep.add(what, to_string(b.verdict), detail);
}

/// First (pair, level, simplex) a functor leaves unmapped, if any.
inline std::optional<std::string> unmapped(const TruncatedSimplicialCategory& src, const SimplicialFunctor& f) {
  for (Index x = 0; x < src.object_count(); ++x)
    for (Index y = 0; y < src.object_count(); ++y) {
      const auto& m = f.hom_maps[src.pair(x, y)];
      for (std::size_t lv = 0; lv < m.levels.size(); ++lv)
        for (std::size_t s = 0; s < m.levels[lv].size(); ++s)
          if (m.levels[lv][s] == kNone)
            return src.hom(x, y).name(static_cast<int>(lv), static_cast<Index>(s)) + " in " + src.object_name(x) + "->" +
                   src.object_name(y);
    }
  return std::nullopt;
}

inline TruncatedSimplicialSet restrict_truncation(const TruncatedSimplicialSet& x, int top) {
  TruncatedSimplicialSet out(top);
  for (int n = 0; n <= top; ++n)
    for (Index s = 0; s < x.size(n); ++s) out.add_simplex(n, x.name(n, s));
  for (int n = 0; n <= top; ++n)
    for (Index s = 0; s < x.size(n); ++s) {
      for (int i = 0; n > 0 && i <= n; ++i) out.set_face(n, i, s, x.face(n, i, s));
      for (int i = 0; n < top && i <= n; ++i) out.set_degeneracy(n, i, s, x.degeneracy(n, i, s));
    }
  return out;
}

/// The same simplicial category seen only up to dimension top.
inline RelativeSimplicialCategory restrict_truncation(const RelativeSimplicialCategory& r, int top) {
  const auto& a = r.ambient;
  if (top >= a.truncation()) return r;
  auto shared = std::make_shared<TruncatedSimplicialCategory>(a);
  TruncatedSimplicialCategory b(a.objects(), top);
  for (Index x = 0; x < a.object_count(); ++x)
    for (Index y = 0; y < a.object_count(); ++y) b.set_hom(x, y, restrict_truncation(a.hom(x, y), top));
  for (Index x = 0; x < a.object_count(); ++x) b.set_identity(x, a.identity(x));
  b.set_composer([shared](Index x, Index y, Index z, int lv, Index g, Index f) { return shared->compose(x, y, z, lv, g, f); });
  RelativeSimplicialCategory out{std::move(b), {}};
  for (const auto& levels : r.sub) out.sub.emplace_back(levels.begin(), levels.begin() + top + 1);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Localizing a neglectable part changes nothing (two forms)

/// L^H(C,U) -> L^H(C, U v V) for V neglectable in L^H(C,U).
inline ExperimentReport check_24i(const RelativeCategory& cu, const IndexSet& v, const VerifyBounds& bounds) {
  ExperimentReport rep;
  rep.claim = "2.4i";
  rep.scope = detail::kScope;
  rep.bounds = bounds;
  rep.add_input("relative category (C, U)", to_json(cu));
  Json vnames = Json::array();
  for (Index m : v.members()) vnames.push_back(cu.cat.morphism_name(m));
  rep.add_input("V", vnames);
  try {
    auto base = validate_relative(cu);
    auto wide = validate_wide_subcategory(cu.cat, v, "V");
    base.append(wide);
    if (!base.ok()) {
      rep.add("validate", "invalid", base.violations.front().message);
      rep.verdict = ClaimVerdict::Inapplicable;
      rep.witness = base.violations.front().message;
      return rep;
    }
    auto loc_u = hammock_localization(cu, bounds.truncation, bounds.width);
    detail::record_bounds(rep, "localize (C, U)", loc_u.bounds);
    auto marked = localization_with_weq(loc_u, v);
    auto neg = is_neglectable(marked);
    rep.add("V neglectable", neg.neglectable ? "yes" : "no", neg.witness);
    if (!neg.neglectable) {
      rep.verdict = ClaimVerdict::Inapplicable;
      rep.witness = "not invertible up to homotopy: " + neg.witness;
      return rep;
    }
    RelativeCategory cuv{cu.cat, subcategory_span(cu.cat, cu.weq, v)};
    auto loc_uv = hammock_localization(cuv, bounds.truncation, bounds.width);
    detail::record_bounds(rep, "localize (C, U v V)", loc_uv.bounds);
    auto f = apply_relative_functor(loc_u, loc_uv, identity_functor(cu.cat));
    if (auto miss = detail::unmapped(loc_u.scat, f)) {
      rep.add("induced functor", "incomplete", "no reduced image of " + *miss);
      rep.verdict = ClaimVerdict::Undetermined;
      rep.witness = "width bound cannot hold the image of " + *miss;
      return rep;
    }
    rep.add("induced functor", "ok");
    bool stable = loc_u.bounds.verdict == Stabilization::Stable && loc_uv.bounds.verdict == Stabilization::Stable;
    detail::conclude(rep, check_dk(loc_u.scat, loc_uv.scat, f, bounds.homology_budget), stable);
  } catch (const BoundError& e) {
    rep.add("bounds", "exceeded", e.what());
    rep.verdict = ClaimVerdict::Undetermined;
    rep.witness = e.what();
  } catch (const ConsistencyError& e) {
    rep.add("homotopy category", "inconsistent", e.what());
    rep.verdict = ClaimVerdict::Undetermined;
    rep.witness = e.what();
  }
  return rep;
}

/// B -> L^H(B, V) for a neglectable V.
inline ExperimentReport check_24ii(const RelativeSimplicialCategory& input, const VerifyBounds& bounds) {
  ExperimentReport rep;
  rep.claim = "2.4ii";
  rep.scope = detail::kScope;
  rep.bounds = bounds;
  rep.add_input("relative simplicial category (B, V)", to_json(input));
  auto report = validate_relscat(input, {false, true});
  if (!report.ok()) {
    rep.add("validate", "invalid", report.violations.front().message);
    rep.verdict = ClaimVerdict::Inapplicable;
    rep.witness = report.violations.front().message;
    return rep;
  }
  if (bounds.truncation > input.ambient.truncation() || bounds.truncation < 1) {
    rep.add("validate", "invalid", "truncation must lie in 1.." + std::to_string(input.ambient.truncation()));
    rep.verdict = ClaimVerdict::Inapplicable;
    rep.witness = "truncation out of range";
    return rep;
  }
  try {
    auto b = detail::restrict_truncation(input, bounds.truncation);
    auto neg = is_neglectable(b);
    rep.add("V neglectable", neg.neglectable ? "yes" : "no", neg.witness);
    if (!neg.neglectable) {
      rep.verdict = ClaimVerdict::Inapplicable;
      rep.witness = "not invertible up to homotopy: " + neg.witness;
      return rep;
    }
    auto loc = hammock_localization_relscat(b, bounds.truncation, bounds.width);
    detail::record_bounds(rep, "localize (B, V)", loc.bounds);
    auto f = relscat_embedding(b, loc);
    if (auto miss = detail::unmapped(b.ambient, f)) {
      rep.add("embedding", "incomplete", "no image of " + *miss);
      rep.verdict = ClaimVerdict::Undetermined;
      rep.witness = "width bound cannot hold " + *miss;
      return rep;
    }
    rep.add("embedding", "ok");
    detail::conclude(rep, check_dk(b.ambient, loc.scat, f, bounds.homology_budget),
                     loc.bounds.verdict == Stabilization::Stable);
  } catch (const BoundError& e) {
    rep.add("bounds", "exceeded", e.what());
    rep.verdict = ClaimVerdict::Undetermined;
    rep.witness = e.what();
  } catch (const ConsistencyError& e) {
    rep.add("homotopy category", "inconsistent", e.what());
    rep.verdict = ClaimVerdict::Undetermined;
    rep.witness = e.what();
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Localizing the localization

/// L^H c : L^H(C,W) -> L^H(L^H(C,W), cW).
inline ExperimentReport check_32(const RelativeCategory& r, const VerifyBounds& bounds) {
  ExperimentReport rep;
  rep.claim = "3.2";
  rep.scope = detail::kScope;
  rep.bounds = bounds;
  rep.add_input("relative category", to_json(r));
  auto report = validate_relative(r);
  if (!report.ok()) {
    rep.add("validate", "invalid", report.violations.front().message);
    rep.verdict = ClaimVerdict::Inapplicable;
    rep.witness = report.violations.front().message;
    return rep;
  }
  try {
    auto loc = hammock_localization(r, bounds.truncation, bounds.width);
    detail::record_bounds(rep, "localize (C, W)", loc.bounds);
    auto marked = localization_with_weq(loc);
    auto target = hammock_localization_relscat(marked, bounds.truncation, bounds.width);
    detail::record_bounds(rep, "localize (L^H(C, W), cW)", target.bounds);
    auto f = localized_embedding(loc, target);
    if (auto miss = detail::unmapped(loc.scat, f)) {
      rep.add("induced functor", "incomplete", "no image of " + *miss);
      rep.verdict = ClaimVerdict::Undetermined;
      rep.witness = "width bound cannot hold the image of " + *miss;
      return rep;
    }
    rep.add("induced functor", "ok");
    bool stable = loc.bounds.verdict == Stabilization::Stable && target.bounds.verdict == Stabilization::Stable;
    detail::conclude(rep, check_dk(loc.scat, target.scat, f, bounds.homology_budget), stable);
  } catch (const BoundError& e) {
    rep.add("bounds", "exceeded", e.what());
    rep.verdict = ClaimVerdict::Undetermined;
    rep.witness = e.what();
  } catch (const ConsistencyError& e) {
    rep.add("homotopy category", "inconsistent", e.what());
    rep.verdict = ClaimVerdict::Undetermined;
    rep.witness = e.what();
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Roundtrip through the flattening, on homotopy categories

/// (C,W) -> (bL^H, bid v W) <- (bL^H, bid), compared through the homotopy
/// categories of their localizations.
inline ExperimentReport check_roundtrip(const RelativeCategory& r, const VerifyBounds& bounds) {
  ExperimentReport rep;
  rep.claim = "3.1";
  rep.scope = detail::kScope;
  rep.bounds = bounds;
  rep.add_input("relative category", to_json(r));
  auto report = validate_relative(r);
  if (!report.ok()) {
    rep.add("validate", "invalid", report.violations.front().message);
    rep.verdict = ClaimVerdict::Inapplicable;
    rep.witness = report.violations.front().message;
    return rep;
  }
  bool stable = true;
  try {
    auto loc = hammock_localization(r, bounds.truncation, bounds.width);
    detail::record_bounds(rep, "localize (C, W)", loc.bounds);
    stable = stable && loc.bounds.verdict == Stabilization::Stable;

    auto flat = flatten(loc.scat);
    // Composites beyond the width bound are missing upstairs too; anything
    // else wrong with the flattening would be a defect.
    auto flat_report = validate_relative(flat.rel);
    const std::size_t missing = flat_report.count("missing-composite");
    const bool broken = flat_report.violations.size() > missing;
    rep.add("flatten", broken ? "invalid" : missing ? "partial" : "ok",
            std::to_string(flat.rel.cat.object_count()) + " objects, " + std::to_string(flat.rel.cat.morphism_count()) +
                " morphisms, " + std::to_string(flat.rel.weq.count()) + " in bid, " + std::to_string(missing) +
                " composites beyond the width");
    if (broken) {
      rep.verdict = ClaimVerdict::Fail;
      rep.witness = "flattening: " + flat_report.violations.front().message;
      for (const auto& v : flat_report.violations)
        if (v.kind != "missing-composite") {
          rep.witness = "flattening: " + v.message;
          break;
        }
      return rep;
    }
    auto unit = relativization_unit(r, loc, flat);
    rep.add("relativization unit", validate_relative_functor(r, unit.target, unit.functor).ok() ? "ok" : "invalid",
            std::to_string(unit.target.weq.count()) + " weak equivalences in bid v W");

    // pi_0 is all that is compared, so the flattened sides use skeletal
    // mapping spaces: same components, far fewer simplices.
    auto mid = skeleton_localization(unit.target, bounds.width);
    detail::record_bounds(rep, "localize (bL^H, bid v W)", mid.bounds);
    auto bottom = skeleton_localization(flat.rel, bounds.width);
    detail::record_bounds(rep, "localize (bL^H, bid)", bottom.bounds);
    stable = stable && mid.bounds.verdict == Stabilization::Stable && bottom.bounds.verdict == Stabilization::Stable;

    auto ho_r = homotopy_category(loc.scat);
    auto ho_mid = homotopy_category(mid.scat, bounds.members_per_class);
    auto ho_flat = homotopy_category(bottom.scat, bounds.members_per_class);
    auto size = [](const FiniteCategory& c) {
      return std::to_string(c.object_count()) + " objects, " + std::to_string(c.morphism_count()) + " morphisms";
    };
    rep.add("Ho(C, W)", "ok", size(ho_r));
    rep.add("Ho(bL^H, bid v W)", "ok", size(ho_mid));
    rep.add("Ho(bL^H, bid)", "ok", size(ho_flat));

    // Independent cross-check of Ho(C, W) against zigzag rewriting.
    int agree = 0, differ = 0, open = 0;
    std::string first_difference;
    for (Index x = 0; x < r.cat.object_count(); ++x)
      for (Index y = 0; y < r.cat.object_count(); ++y) {
        auto oracle = oracle_localized_homset(r, x, y, bounds.oracle_length);
        if (!oracle.determined) {
          ++open;
          continue;
        }
        if (oracle.classes.size() == ho_r.hom(x, y).size()) {
          ++agree;
        } else {
          ++differ;
          if (first_difference.empty())
            first_difference = r.cat.object_name(x) + "->" + r.cat.object_name(y) + ": oracle " +
                               std::to_string(oracle.classes.size()) + ", localization " +
                               std::to_string(ho_r.hom(x, y).size());
        }
      }
    rep.add("oracle cross-check", differ ? "mismatch" : "ok",
            std::to_string(agree) + " agree, " + std::to_string(differ) + " differ, " + std::to_string(open) +
                " undetermined" + (first_difference.empty() ? "" : "; " + first_difference));

    auto e1 = find_equivalence(ho_r, ho_mid, bounds.equivalence_budget);
    auto e2 = find_equivalence(ho_flat, ho_mid, bounds.equivalence_budget);
    rep.add("Ho(C, W) ~ Ho(bL^H, bid v W)", to_string(e1.outcome), std::to_string(e1.nodes) + " nodes");
    rep.add("Ho(bL^H, bid) ~ Ho(bL^H, bid v W)", to_string(e2.outcome), std::to_string(e2.nodes) + " nodes");

    const bool found = e1.outcome == SearchOutcome::Found && e2.outcome == SearchOutcome::Found;
    const bool refuted = e1.outcome == SearchOutcome::None || e2.outcome == SearchOutcome::None;
    if (differ > 0 && loc.bounds.verdict == Stabilization::Stable) {
      rep.verdict = ClaimVerdict::Fail;
      rep.witness = "localization disagrees with zigzag rewriting on " + first_difference;
    } else if (found && stable) {
      rep.verdict = ClaimVerdict::Pass;
    } else if (refuted && stable) {
      rep.verdict = ClaimVerdict::Fail;
      rep.witness = e1.outcome == SearchOutcome::None ? "Ho(C, W) is not equivalent to Ho(bL^H, bid v W)"
                                                      : "Ho(bL^H, bid) is not equivalent to Ho(bL^H, bid v W)";
    } else {
      rep.verdict = ClaimVerdict::Undetermined;
      rep.witness = !stable ? "a localization is bound limited" : "equivalence search budget exhausted";
    }
  } catch (const BoundError& e) {
    rep.add("bounds", "exceeded", e.what());
    rep.verdict = ClaimVerdict::Undetermined;
    rep.witness = e.what();
  } catch (const ConsistencyError& e) {
    rep.add("homotopy category", "inconsistent", e.what());
    rep.verdict = ClaimVerdict::Undetermined;
    rep.witness = e.what();
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Zigzags of natural weak equivalences

enum class ZigzagOutcome { Found, NotFound, Undetermined };

inline const char* to_string(ZigzagOutcome o) {
  switch (o) {
    case ZigzagOutcome::Found: return "found";
    case ZigzagOutcome::NotFound: return "not-found";
    case ZigzagOutcome::Undetermined: return "undetermined";
  }
  return "?";
}

struct ZigzagSearch {
  ZigzagOutcome outcome = ZigzagOutcome::NotFound;
  int length = -1;                ///< number of transformations in the zigzag
  std::vector<CatFunctor> chain;  ///< f = h_0, ..., h_k = g
  std::size_t nodes = 0;
};

namespace detail {

/// Every relative functor src -> tgt, in a fixed order. False if the budget
/// ran out first.
inline bool all_relative_functors(const RelativeCategory& src, const RelativeCategory& tgt, std::size_t budget,
                                  std::size_t& nodes, std::vector<CatFunctor>& out) {
  const auto& s = src.cat;
  const auto& t = tgt.cat;
  std::vector<Index> order;
  for (Index m = 0; m < s.morphism_count(); ++m)
    if (!s.is_identity(m)) order.push_back(m);
  CatFunctor f;
  f.object_map.assign(s.object_count(), kNone);
  f.morphism_map.assign(s.morphism_count(), kNone);
  bool exhausted = false;

  auto consistent = [&](Index m) {
    // Check every recorded composite whose three parts are now assigned.
    auto ok = [&](Index g, Index h) {
      Index gh = s.compose(g, h);
      if (gh == kNone) return true;
      Index fg = f.morphism_map[g], fh = f.morphism_map[h], fgh = f.morphism_map[gh];
      if (fg == kNone || fh == kNone || fgh == kNone) return true;
      return t.compose(fg, fh) == fgh;
    };
    for (Index h : s.incoming(s.dom(m)))
      if (!ok(m, h)) return false;
    for (Index g : s.outgoing(s.cod(m)))
      if (!ok(g, m)) return false;
    for (Index g : s.outgoing(s.cod(s.dom(m))))
      for (Index h : s.incoming(s.dom(g)))
        if (s.compose(g, h) == m && !ok(g, h)) return false;
    return true;
  };

  std::function<void(std::size_t)> morphisms = [&](std::size_t k) {
    if (exhausted) return;
    if (++nodes > budget) {
      exhausted = true;
      return;
    }
    if (k == order.size()) {
      out.push_back(f);
      return;
    }
    Index m = order[k];
    for (Index cand : t.hom(f.object_map[s.dom(m)], f.object_map[s.cod(m)])) {
      if (src.is_weq(m) && !tgt.is_weq(cand)) continue;
      f.morphism_map[m] = cand;
      if (consistent(m)) morphisms(k + 1);
      f.morphism_map[m] = kNone;
    }
  };
  std::function<void(Index)> objects = [&](Index o) {
    if (exhausted) return;
    if (o == s.object_count()) {
      for (Index x = 0; x < s.object_count(); ++x) f.morphism_map[s.identity(x)] = t.identity(f.object_map[x]);
      morphisms(0);
      for (Index x = 0; x < s.object_count(); ++x) f.morphism_map[s.identity(x)] = kNone;
      return;
    }
    for (Index c = 0; c < t.object_count(); ++c) {
      f.object_map[o] = c;
      objects(o + 1);
    }
    f.object_map[o] = kNone;
  };
  objects(0);
  return !exhausted;
}

/// A natural transformation f => g with every component in W.
inline bool weq_transformation(const RelativeCategory& src, const RelativeCategory& tgt, const CatFunctor& f,
                               const CatFunctor& g) {
  const auto& s = src.cat;
  const auto& t = tgt.cat;
  std::vector<Index> alpha(s.object_count(), kNone);
  std::function<bool(Index)> assign = [&](Index o) {
    if (o == s.object_count()) return true;
    for (Index a : t.hom(f.object_map[o], g.object_map[o])) {
      if (!tgt.is_weq(a)) continue;
      alpha[o] = a;
      bool natural = true;
      for (Index m = 0; m < s.morphism_count() && natural; ++m) {
        Index x = s.dom(m), y = s.cod(m);
        if (alpha[x] == kNone || alpha[y] == kNone) continue;
        natural = t.compose(g.morphism_map[m], alpha[x]) == t.compose(alpha[y], f.morphism_map[m]) &&
                  t.compose(g.morphism_map[m], alpha[x]) != kNone;
      }
      if (natural && assign(o + 1)) return true;
    }
    alpha[o] = kNone;
    return false;
  };
  return assign(0);
}

}  // namespace detail

/// Breadth-first search for a zigzag f = h_0 ~ h_1 ~ ... ~ h_k = g of natural
/// weak equivalences (either direction), k <= zigzag_bound.
inline ZigzagSearch naturally_weakly_equivalent(const RelativeCategory& src, const RelativeCategory& tgt,
                                                const CatFunctor& f, const CatFunctor& g, int zigzag_bound,
                                                std::size_t budget) {
  ZigzagSearch out;
  auto same = [](const CatFunctor& a, const CatFunctor& b) {
    return a.object_map == b.object_map && a.morphism_map == b.morphism_map;
  };
  if (same(f, g)) {
    out.outcome = ZigzagOutcome::Found;
    out.length = 0;
    out.chain = {f};
    return out;
  }
  std::vector<CatFunctor> all;
  bool complete = detail::all_relative_functors(src, tgt, budget, out.nodes, all);
  auto index_of = [&](const CatFunctor& h) -> Index {
    for (std::size_t i = 0; i < all.size(); ++i)
      if (same(all[i], h)) return static_cast<Index>(i);
    return kNone;
  };
  Index start = index_of(f), goal = index_of(g);
  if (start == kNone || goal == kNone) {
    out.outcome = complete ? ZigzagOutcome::NotFound : ZigzagOutcome::Undetermined;
    return out;
  }
  std::vector<int> depth(all.size(), -1);
  std::vector<Index> parent(all.size(), kNone);
  std::deque<Index> queue{start};
  depth[start] = 0;
  while (!queue.empty()) {
    Index cur = queue.front();
    queue.pop_front();
    if (cur == goal) break;
    if (depth[cur] == zigzag_bound) continue;
    for (std::size_t next = 0; next < all.size(); ++next) {
      if (depth[next] != -1) continue;
      if (++out.nodes > budget) {
        out.outcome = ZigzagOutcome::Undetermined;
        return out;
      }
      if (detail::weq_transformation(src, tgt, all[cur], all[next]) ||
          detail::weq_transformation(src, tgt, all[next], all[cur])) {
        depth[next] = depth[cur] + 1;
        parent[next] = cur;
        queue.push_back(static_cast<Index>(next));
      }
    }
  }
  if (depth[goal] == -1) {
    out.outcome = complete ? ZigzagOutcome::NotFound : ZigzagOutcome::Undetermined;
    return out;
  }
  out.outcome = ZigzagOutcome::Found;
  out.length = depth[goal];
  for (Index at = goal; at != kNone; at = parent[at]) out.chain.insert(out.chain.begin(), all[at]);
  return out;
}

}  // namespace simploc
