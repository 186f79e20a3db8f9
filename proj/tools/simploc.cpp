// Command-line front end: validation, construction, verification.
//
// Exit codes: 0 success or Pass, 1 Fail (witness printed), 2 invalid input
// or failed precondition, 3 bounds insufficient (BoundLimited/Undetermined).

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "simploc/verify.hpp"

using namespace simploc;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "simploc 0.3.0";

enum Exit { kOk = 0, kFail = 1, kInvalid = 2, kBounds = 3 };

/// What a command produces: machine output, a human summary, an exit code.
struct Result {
  Json doc;
  std::string text;
  int code = kOk;
};

Json cached_result(const Result& r) { return {{"doc", render(r.doc)}, {"text", r.text}, {"code", r.code}}; }

struct Options {
  std::string output;
  std::string cache_dir;
  bool verbose = false;
};

void progress(const Options& o, const std::string& line) {
  if (o.verbose) std::cerr << line << std::endl;
}

/// Runs `compute` unless the cache already holds the result for this key,
/// then writes the document to --output (summary to stdout) or, without
/// --output, the document to stdout.
int emit(const Options& o, const std::string& operation, const Json& input, const Json& bounds,
         const std::function<Result()>& compute) {
  std::optional<Result> result;
  std::optional<ResultCache> cache;
  std::string key;
  if (!o.cache_dir.empty()) {
    cache.emplace(o.cache_dir);
    key = ResultCache::key(input, operation, bounds);
    if (auto hit = cache->get(key)) {
      try {
        Json stored = Json::parse(*hit);
        result = Result{Json::parse(stored.at("doc").get<std::string>()), stored.at("text").get<std::string>(),
                        stored.at("code").get<int>()};
        progress(o, "cache hit " + key);
      } catch (const Json::exception&) {
        result.reset();
      }
    }
  }
  if (!result) {
    result = compute();
    if (cache) cache->put(key, cached_result(*result).dump(), kVersion);
  }
  if (!o.output.empty()) {
    std::ofstream out(o.output, std::ios::binary);
    out << render(result->doc);
    if (!out) throw std::runtime_error("cannot write " + o.output);
    std::cout << result->text;
  } else {
    std::cout << render(result->doc);
  }
  return result->code;
}

std::string join_violations(const ValidationReport& r) {
  std::string out;
  for (const auto& v : r.violations) out += "  [" + v.kind + "] " + v.message + "\n";
  return out;
}

Json report_json(const ValidationReport& r) {
  Json v = Json::array();
  for (const auto& x : r.violations) v.push_back({{"kind", x.kind}, {"message", x.message}});
  return {{"ok", r.ok()}, {"violations", v}};
}

/// Reads a referenced document: a nested object, or a path relative to the
/// referring file.
Json resolve(const Json& ref, const fs::path& base) {
  if (ref.is_object()) return ref;
  if (!ref.is_string()) throw InputError("expected a file name or an inline object");
  fs::path p = ref.get<std::string>();
  if (p.is_relative()) p = base.parent_path() / p;
  return read_json_file(p);
}

std::string kind_of(const Json& j) {
  if (!j.is_object()) return "unknown";
  if (j.contains("object_map") && j.contains("hom_maps")) return "simplicial functor";
  if (j.contains("object_map") && j.contains("morphism_map")) return "functor";
  if (j.contains("homs")) return j.contains("sub") ? "relative simplicial category" : "simplicial category";
  if (j.contains("levels")) return "simplicial set";
  if (j.contains("morphisms")) return j.contains("weq") ? "relative category" : "category";
  return "unknown";
}

Result validate_document(const Json& j, const fs::path& path) {
  const std::string kind = kind_of(j);
  ValidationReport report;
  if (kind == "category") {
    report = validate_category(fincat_from_json(j));
  } else if (kind == "relative category") {
    report = validate_relative(relcat_from_json(j));
  } else if (kind == "simplicial set") {
    report = validate_simplicial_set(sset_from_json(j));
  } else if (kind == "simplicial category") {
    report = validate_scat(scat_from_json(j));
  } else if (kind == "relative simplicial category") {
    report = validate_relscat(relscat_from_json(j));
  } else if (kind == "functor") {
    auto src = relcat_from_json(resolve(detail::field(j, "source"), path));
    auto tgt = relcat_from_json(resolve(detail::field(j, "target"), path));
    report = validate_relative_functor(src, tgt, RelativeFunctor{cat_functor_from_json(src.cat, tgt.cat, j)});
  } else if (kind == "simplicial functor") {
    auto src = scat_from_json(resolve(detail::field(j, "source"), path));
    auto tgt = scat_from_json(resolve(detail::field(j, "target"), path));
    report = validate_simplicial_functor(src, tgt, simplicial_functor_from_json(src, tgt, j));
  } else {
    throw InputError("unrecognized document");
  }
  Json doc = report_json(report);
  doc["kind"] = kind;
  std::string text = kind + ": " + (report.ok() ? "valid\n" : std::to_string(report.violations.size()) + " violations\n" +
                                                                 join_violations(report));
  return {doc, text, report.ok() ? kOk : kInvalid};
}

RelativeCategory load_relcat(const Json& j) {
  auto r = relcat_from_json(j);
  auto report = validate_relative(r);
  if (!report.ok()) throw InputError("invalid relative category:\n" + join_violations(report));
  return r;
}

std::vector<std::pair<std::string, std::string>> parse_pairs(const std::vector<std::string>& raw) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& p : raw) {
    auto comma = p.find(',');
    if (comma == std::string::npos) throw InputError("--pairs expects X,Y");
    out.emplace_back(p.substr(0, comma), p.substr(comma + 1));
  }
  return out;
}

Result localize(const RelativeCategory& r, int n, int w, const std::vector<std::pair<std::string, std::string>>& pairs,
                const Options& o) {
  progress(o, "localizing at truncation " + std::to_string(n) + ", width " + std::to_string(w));
  auto loc = hammock_localization(r, n, w);
  Json doc = to_json(loc.scat);
  if (!pairs.empty()) {
    std::set<std::pair<std::string, std::string>> keep(pairs.begin(), pairs.end());
    for (const auto& [x, y] : pairs)
      if (!r.cat.find_object(x) || !r.cat.find_object(y)) throw InputError("--pairs: unknown object in " + x + "," + y);
    Json homs = Json::array();
    for (const auto& h : doc["homs"])
      if (keep.count({h["source"], h["target"]})) homs.push_back(h);
    Json compose = Json::array();
    for (const auto& c : doc["compose"])
      if (keep.count({c[0], c[1]}) && keep.count({c[1], c[2]}) && keep.count({c[0], c[2]})) compose.push_back(c);
    doc["homs"] = homs;
    doc["compose"] = compose;
  }
  doc["bounds"] = to_json(loc.bounds);
  std::ostringstream text;
  for (Index x = 0; x < r.cat.object_count(); ++x)
    for (Index y = 0; y < r.cat.object_count(); ++y) {
      const auto& s = loc.space(x, y);
      text << r.cat.object_name(x) << " -> " << r.cat.object_name(y) << ":";
      for (int k = 0; k <= n; ++k) text << " " << s.simplices.size(k);
      text << " simplices, pi0 " << pi0(s.simplices).classes << ", " << to_string(s.verdict) << "\n";
    }
  text << "bounds: " << to_string(loc.bounds.verdict) << ", overflows " << loc.bounds.overflows << "\n";
  return {doc, text.str(), loc.bounds.verdict == Stabilization::Stable ? kOk : kBounds};
}

Result homotopy(const RelativeCategory& r, int n, int w) {
  auto loc = hammock_localization(r, n, w);
  Json doc;
  std::string text;
  int code = loc.bounds.verdict == Stabilization::Stable ? kOk : kBounds;
  try {
    auto ho = homotopy_category(loc.scat);
    doc = to_json(ho);
    std::ostringstream t;
    for (Index x = 0; x < ho.object_count(); ++x)
      for (Index y = 0; y < ho.object_count(); ++y) {
        t << ho.object_name(x) << " -> " << ho.object_name(y) << ":";
        for (Index m : ho.hom(x, y)) t << " " << ho.morphism_name(m);
        t << "\n";
      }
    text = t.str();
  } catch (const BoundError& e) {
    doc = {{"error", e.what()}};
    text = std::string("bound: ") + e.what() + "\n";
    code = kBounds;
  }
  doc["bounds"] = to_json(loc.bounds);
  text += std::string("bounds: ") + to_string(loc.bounds.verdict) + "\n";
  return {doc, text, code};
}

Result oracle(const RelativeCategory& r, int max_len) {
  Json pairs = Json::array();
  std::ostringstream text;
  bool all = true;
  for (Index x = 0; x < r.cat.object_count(); ++x)
    for (Index y = 0; y < r.cat.object_count(); ++y) {
      auto h = oracle_localized_homset(r, x, y, max_len);
      Json classes = Json::array();
      for (const auto& c : h.classes) classes.push_back({{"representative", c.name}, {"words", c.size}});
      pairs.push_back({{"source", r.cat.object_name(x)}, {"target", r.cat.object_name(y)}, {"determined", h.determined},
                       {"classes", classes}});
      text << r.cat.object_name(x) << " -> " << r.cat.object_name(y) << ": " << h.classes.size() << " classes"
           << (h.determined ? "" : " (undetermined)") << "\n";
      all = all && h.determined;
    }
  return {{{"max_len", max_len}, {"pairs", pairs}}, text.str(), all ? kOk : kBounds};
}

Result dk_check(const Json& j, const fs::path& path) {
  auto src = scat_from_json(resolve(detail::field(j, "source"), path));
  auto tgt = scat_from_json(resolve(detail::field(j, "target"), path));
  auto f = simplicial_functor_from_json(src, tgt, j);
  auto report = validate_simplicial_functor(src, tgt, f);
  if (!report.ok()) throw InputError("invalid simplicial functor:\n" + join_violations(report));
  auto cert = check_dk(src, tgt, f);
  Json doc = to_json(src, cert);
  std::string text = std::string("dk certificate: ") + to_string(cert.verdict) +
                     (cert.witness.empty() ? "" : " (" + cert.witness + ")") + "\n";
  int code = cert.verdict == Verdict::Pass ? kOk : cert.verdict == Verdict::Fail ? kFail : kBounds;
  return {doc, text, code};
}

IndexSet read_subcategory(const FiniteCategory& c, const Json& j) {
  const Json& names = j.is_object() ? detail::field(j, "weq") : j;
  IndexSet s = identities(c);
  for (const auto& n : names) {
    auto m = c.find_morphism(detail::as<std::string>(n, "morphism"));
    if (!m) throw InputError("unknown morphism " + n.dump());
    s.insert(*m);
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hammock localization, flattening and desk-scale verification on finite inputs"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  if (const char* env = std::getenv("SIMPLOC_CACHE_DIR")) opt.cache_dir = env;
  app.add_option("--cache-dir", opt.cache_dir, "reuse results keyed by input hash (default: $SIMPLOC_CACHE_DIR)");
  app.add_flag("-v,--verbose", opt.verbose, "progress lines on stderr");
  app.add_option("-o,--output", opt.output, "write the JSON document here; summary goes to stdout");

  std::string file;
  int truncation = 1, width = 4, max_len = 8;
  std::vector<std::string> pair_args;

  auto* validate = app.add_subcommand("validate", "check any supported document");
  validate->add_option("file", file)->required();

  auto* loc = app.add_subcommand("localize", "hammock localization of a relative category");
  loc->add_option("relcat", file)->required();
  loc->add_option("--truncation", truncation);
  loc->add_option("--width", width);
  loc->add_option("--pairs", pair_args, "restrict the output to these X,Y pairs");

  auto* flat = app.add_subcommand("flatten", "flattening of a simplicial category, with bid");
  flat->add_option("scat", file)->required();

  auto* nerve_cmd = app.add_subcommand("nerve", "truncated nerve of a category");
  nerve_cmd->add_option("fincat", file)->required();
  nerve_cmd->add_option("--truncation", truncation);

  auto* pi0_cmd = app.add_subcommand("pi0", "connected components of a simplicial set");
  pi0_cmd->add_option("sset", file)->required();

  auto* homology_cmd = app.add_subcommand("homology", "integral homology below the truncation");
  homology_cmd->add_option("sset", file)->required();

  auto* ho = app.add_subcommand("ho", "homotopy category of the hammock localization");
  ho->add_option("relcat", file)->required();
  ho->add_option("--truncation", truncation);
  ho->add_option("--width", width);

  auto* oracle_cmd = app.add_subcommand("oracle-ho", "localized hom-sets by zigzag rewriting");
  oracle_cmd->add_option("relcat", file)->required();
  oracle_cmd->add_option("--max-len", max_len);

  auto* dk = app.add_subcommand("dk-check", "partial DK-equivalence certificate for a simplicial functor");
  dk->add_option("functor", file)->required();

  auto* neg = app.add_subcommand("neglectable", "is every marked 0-simplex invertible in pi_0");
  neg->add_option("relscat", file)->required();

  std::string claim;
  std::vector<std::string> inputs;
  VerifyBounds vb;
  auto* ver = app.add_subcommand("verify", "run a verification pipeline");
  ver->add_option("claim", claim)->required()->check(CLI::IsMember({"2.4i", "2.4ii", "3.1", "3.2"}));
  ver->add_option("inputs", inputs)->required();
  ver->add_option("--truncation", vb.truncation);
  ver->add_option("--width", vb.width);
  ver->add_option("--homology-budget", vb.homology_budget);
  ver->add_option("--equivalence-budget", vb.equivalence_budget);
  ver->add_option("--members-per-class", vb.members_per_class, "composition samples per class, 0 = all");
  ver->add_option("--oracle-length", vb.oracle_length);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    const fs::path path = file;
    if (*validate) {
      Json j = read_json_file(path);
      return emit(opt, "validate", j, Json::object(), [&] { return validate_document(j, path); });
    }
    if (*loc) {
      Json j = read_json_file(path);
      auto pairs = parse_pairs(pair_args);
      Json bounds{{"truncation", truncation}, {"width", width}, {"pairs", pair_args}};
      auto r = load_relcat(j);
      return emit(opt, "localize", j, bounds, [&] { return localize(r, truncation, width, pairs, opt); });
    }
    if (*flat) {
      Json j = read_json_file(path);
      return emit(opt, "flatten", j, Json::object(), [&] {
        auto a = scat_from_json(j);
        auto f = flatten(a);
        Json doc = to_json(f.rel);
        doc["provenance"] = {{"source_sha256", content_hash(j)}, {"truncation", a.truncation()}};
        return Result{doc,
                      std::to_string(f.rel.cat.object_count()) + " objects, " +
                          std::to_string(f.rel.cat.morphism_count()) + " morphisms, " +
                          std::to_string(f.rel.weq.count()) + " in bid\n",
                      kOk};
      });
    }
    if (*nerve_cmd) {
      Json j = read_json_file(path);
      return emit(opt, "nerve", j, Json{{"truncation", truncation}}, [&] {
        auto c = fincat_from_json(j);
        auto report = validate_category(c);
        if (!report.ok()) throw InputError("invalid category:\n" + join_violations(report));
        auto x = nerve(c, truncation);
        std::string text;
        for (int k = 0; k <= truncation; ++k) text += std::to_string(k) + "-simplices: " + std::to_string(x.size(k)) + "\n";
        return Result{to_json(x), text, kOk};
      });
    }
    if (*pi0_cmd || *homology_cmd) {
      Json j = read_json_file(path);
      const bool want_pi0 = pi0_cmd->parsed();
      return emit(opt, want_pi0 ? "pi0" : "homology", j, Json::object(), [&] {
        auto x = sset_from_json(j);
        auto report = validate_simplicial_set(x);
        if (!report.ok()) throw InputError("invalid simplicial set:\n" + join_violations(report));
        if (want_pi0) {
          auto p = pi0(x);
          return Result{to_json(p, x), std::to_string(p.classes) + " components\n", kOk};
        }
        auto h = homology(x);
        std::string text;
        for (const auto& g : h.groups) {
          text += "H" + std::to_string(g.degree) + ": Z^" + std::to_string(g.free_rank);
          for (const auto& t : g.torsion) text += " + Z/" + t.str();
          text += "\n";
        }
        return Result{to_json(h), text, kOk};
      });
    }
    if (*ho) {
      Json j = read_json_file(path);
      auto r = load_relcat(j);
      return emit(opt, "ho", j, Json{{"truncation", truncation}, {"width", width}},
                  [&] { return homotopy(r, truncation, width); });
    }
    if (*oracle_cmd) {
      Json j = read_json_file(path);
      auto r = load_relcat(j);
      return emit(opt, "oracle-ho", j, Json{{"max_len", max_len}}, [&] { return oracle(r, max_len); });
    }
    if (*dk) {
      Json j = read_json_file(path);
      // The key covers the referenced documents too.
      Json keyed{{"functor", j},
                 {"source", resolve(detail::field(j, "source"), path)},
                 {"target", resolve(detail::field(j, "target"), path)}};
      return emit(opt, "dk-check", keyed, Json::object(), [&] { return dk_check(j, path); });
    }
    if (*neg) {
      Json j = read_json_file(path);
      return emit(opt, "neglectable", j, Json::object(), [&] {
        auto r = relscat_from_json(j);
        auto report = validate_relscat(r, {false, true});
        if (!report.ok()) throw InputError("invalid relative simplicial category:\n" + join_violations(report));
        auto res = is_neglectable(r);
        return Result{{{"neglectable", res.neglectable}, {"witness", res.witness}},
                      res.neglectable ? "neglectable\n" : "not neglectable: " + res.witness + "\n",
                      res.neglectable ? kOk : kFail};
      });
    }
    if (*ver) {
      std::vector<Json> docs;
      for (const auto& in : inputs) docs.push_back(read_json_file(in));
      const std::size_t expected = claim == "2.4i" ? 2 : 1;
      if (docs.size() != expected)
        throw InputError("claim " + claim + " takes " + std::to_string(expected) + " input file(s)");
      Json keyed = Json::array();
      for (const auto& d : docs) keyed.push_back(d);
      return emit(opt, "verify " + claim, keyed, to_json(vb), [&] {
        ExperimentReport rep;
        if (claim == "2.4i") {
          auto r = load_relcat(docs[0]);
          rep = check_24i(r, read_subcategory(r.cat, docs[1]), vb);
        } else if (claim == "2.4ii") {
          rep = check_24ii(relscat_from_json(docs[0]), vb);
        } else if (claim == "3.1") {
          rep = check_roundtrip(load_relcat(docs[0]), vb);
        } else {
          rep = check_32(load_relcat(docs[0]), vb);
        }
        return Result{to_json(rep), summary(rep), exit_code(rep.verdict)};
      });
    }
  } catch (const InputError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const BoundError& e) {
    std::cerr << "bounds: " << e.what() << "\n";
    return kBounds;
  } catch (const ConsistencyError& e) {
    std::cerr << "inconsistent: " << e.what() << "\n";
    return kBounds;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
