#pragma once
// JSON formats for every object the CLI reads or writes, canonical hashing,
// and the on-disk result cache.

#include <openssl/evp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"
#include "simploc/hammock.hpp"

namespace simploc {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Canonical form and hashing

/// Sorted keys, no whitespace, UTF-8: the hashed form of a document.
inline std::string canonical(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::strict); }

inline std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

inline std::string content_hash(const Json& j) { return sha256_hex(canonical(j)); }

/// Pretty output with a trailing newline; what gets written to files.
inline std::string render(const Json& j) { return j.dump(2) + "\n"; }

inline Json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot open " + p.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(p.string() + ": " + e.what());
  }
}

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

template <typename T>
T as(const Json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const Json::exception&) {
    throw InputError(std::string("bad value for ") + what);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Finite and relative categories

inline Json to_json(const FiniteCategory& c) {
  Json j;
  j["objects"] = Json::array();
  j["morphisms"] = Json::array();
  j["identities"] = Json::object();
  j["compose"] = Json::array();
  for (Index o = 0; o < c.object_count(); ++o) {
    j["objects"].push_back(c.object_name(o));
    j["identities"][c.object_name(o)] = c.morphism_name(c.identity(o));
  }
  for (Index m = 0; m < c.morphism_count(); ++m) {
    if (c.is_identity(m)) continue;
    j["morphisms"].push_back(
        {{"name", c.morphism_name(m)}, {"dom", c.object_name(c.dom(m))}, {"cod", c.object_name(c.cod(m))}});
  }
  for (Index g = 0; g < c.morphism_count(); ++g)
    for (Index f : c.incoming(c.dom(g))) {
      if (c.is_identity(g) || c.is_identity(f)) continue;
      Index gf = c.compose(g, f);
      if (gf != kNone) j["compose"].push_back({c.morphism_name(g), c.morphism_name(f), c.morphism_name(gf)});
    }
  return j;
}

/// Composites with an identity may be omitted; anything else missing is
/// left for validate_category to report.
inline FiniteCategory fincat_from_json(const Json& j) {
  using detail::as;
  using detail::field;
  FiniteCategoryBuilder b;
  const Json ids = j.contains("identities") ? j.at("identities") : Json::object();
  for (const auto& o : field(j, "objects")) {
    auto name = as<std::string>(o, "object name");
    b.add_object(name, ids.contains(name) ? as<std::string>(ids.at(name), "identity") : "id_" + name);
  }
  auto object = [&](const Json& v) {
    auto name = as<std::string>(v, "object reference");
    auto o = b.find_object(name);
    if (!o) throw InputError("unknown object '" + name + "'");
    return *o;
  };
  auto morphism = [&](const Json& v) {
    auto name = as<std::string>(v, "morphism reference");
    auto m = b.find_morphism(name);
    if (!m) throw InputError("unknown morphism '" + name + "'");
    return *m;
  };
  for (const auto& m : field(j, "morphisms")) {
    auto name = as<std::string>(field(m, "name"), "morphism name");
    Index dom = object(field(m, "dom")), cod = object(field(m, "cod"));
    // Identities may be listed again among the morphisms.
    if (auto known = b.find_morphism(name)) {
      if (*known == b.identity(dom) && dom == cod) continue;
    }
    b.add_morphism(name, dom, cod);
  }
  if (j.contains("compose"))
    for (const auto& e : j.at("compose")) {
      if (!e.is_array() || e.size() != 3) throw InputError("compose entries are [g, f, gf]");
      b.set_composite(morphism(e[0]), morphism(e[1]), morphism(e[2]));
    }
  return b.build();
}

inline Json to_json(const RelativeCategory& r) {
  Json j = to_json(r.cat);
  j["weq"] = Json::array();
  for (Index m : r.weq.members())
    if (!r.cat.is_identity(m)) j["weq"].push_back(r.cat.morphism_name(m));
  return j;
}

/// Identities are weak equivalences whether listed or not.
inline RelativeCategory relcat_from_json(const Json& j) {
  RelativeCategory r{fincat_from_json(j), {}};
  r.weq = identities(r.cat);
  if (j.contains("weq"))
    for (const auto& w : j.at("weq")) {
      auto name = detail::as<std::string>(w, "weq entry");
      auto m = r.cat.find_morphism(name);
      if (!m) throw InputError("unknown weak equivalence '" + name + "'");
      r.weq.insert(*m);
    }
  return r;
}

inline Json to_json(const RelativeCategory& src, const RelativeCategory& tgt, const CatFunctor& f) {
  Json j{{"object_map", Json::object()}, {"morphism_map", Json::object()}};
  for (Index o = 0; o < src.cat.object_count(); ++o)
    j["object_map"][src.cat.object_name(o)] = tgt.cat.object_name(f.object_map[o]);
  for (Index m = 0; m < src.cat.morphism_count(); ++m)
    j["morphism_map"][src.cat.morphism_name(m)] =
        f.morphism_map[m] == kNone ? Json(nullptr) : Json(tgt.cat.morphism_name(f.morphism_map[m]));
  return j;
}

inline CatFunctor cat_functor_from_json(const FiniteCategory& src, const FiniteCategory& tgt, const Json& j) {
  CatFunctor f;
  f.object_map.assign(src.object_count(), kNone);
  f.morphism_map.assign(src.morphism_count(), kNone);
  for (const auto& [k, v] : detail::field(j, "object_map").items()) {
    auto s = src.find_object(k);
    auto t = tgt.find_object(detail::as<std::string>(v, "object image"));
    if (!s || !t) throw InputError("object_map: unknown object at '" + k + "'");
    f.object_map[*s] = *t;
  }
  for (const auto& [k, v] : detail::field(j, "morphism_map").items()) {
    auto s = src.find_morphism(k);
    auto t = tgt.find_morphism(detail::as<std::string>(v, "morphism image"));
    if (!s || !t) throw InputError("morphism_map: unknown morphism at '" + k + "'");
    f.morphism_map[*s] = *t;
  }
  // Identities map to identities unless said otherwise.
  for (Index o = 0; o < src.object_count(); ++o)
    if (f.morphism_map[src.identity(o)] == kNone && f.object_map[o] != kNone)
      f.morphism_map[src.identity(o)] = tgt.identity(f.object_map[o]);
  for (Index o = 0; o < src.object_count(); ++o)
    if (f.object_map[o] == kNone) throw InputError("object_map misses '" + src.object_name(o) + "'");
  for (Index m = 0; m < src.morphism_count(); ++m)
    if (f.morphism_map[m] == kNone) throw InputError("morphism_map misses '" + src.morphism_name(m) + "'");
  return f;
}

// ---------------------------------------------------------------------------
// Simplicial sets

inline Json to_json(const TruncatedSimplicialSet& x) {
  Json j;
  j["truncation"] = x.truncation();
  j["levels"] = Json::array();
  j["faces"] = Json::object();
  j["degeneracies"] = Json::object();
  auto name_or_null = [&](int level, Index s) { return s == kNone ? Json(nullptr) : Json(x.name(level, s)); };
  for (int n = 0; n <= x.truncation(); ++n) {
    Json names = Json::array();
    for (Index s = 0; s < x.size(n); ++s) names.push_back(x.name(n, s));
    j["levels"].push_back(std::move(names));
    if (n > 0) {
      Json faces = Json::array();
      for (int i = 0; i <= n; ++i) {
        Json row = Json::array();
        for (Index s = 0; s < x.size(n); ++s) row.push_back(name_or_null(n - 1, x.face(n, i, s)));
        faces.push_back(std::move(row));
      }
      j["faces"][std::to_string(n)] = std::move(faces);
    }
    if (n < x.truncation()) {
      Json degs = Json::array();
      for (int i = 0; i <= n; ++i) {
        Json row = Json::array();
        for (Index s = 0; s < x.size(n); ++s) row.push_back(name_or_null(n + 1, x.degeneracy(n, i, s)));
        degs.push_back(std::move(row));
      }
      j["degeneracies"][std::to_string(n)] = std::move(degs);
    }
  }
  return j;
}

/// faces["n"][i][s] names d_i of the s-th n-simplex; degeneracies likewise.
/// Missing entries stay unset and show up in validation.
inline TruncatedSimplicialSet sset_from_json(const Json& j) {
  using detail::as;
  using detail::field;
  const int top = as<int>(field(j, "truncation"), "truncation");
  if (top < 0) throw InputError("truncation must be nonnegative");
  TruncatedSimplicialSet x(top);
  const auto& levels = field(j, "levels");
  if (!levels.is_array() || static_cast<int>(levels.size()) != top + 1)
    throw InputError("levels must list truncation + 1 levels");
  for (int n = 0; n <= top; ++n)
    for (const auto& name : levels[n]) x.add_simplex(n, as<std::string>(name, "simplex name"));
  auto lookup = [&](int level, const Json& v) -> Index {
    if (v.is_null()) return kNone;
    auto name = as<std::string>(v, "simplex reference");
    auto s = x.find(level, name);
    if (!s) throw InputError("unknown " + std::to_string(level) + "-simplex '" + name + "'");
    return *s;
  };
  auto read_maps = [&](const char* key, int shift, auto&& set) {
    if (!j.contains(key)) return;
    for (const auto& [lv, maps] : j.at(key).items()) {
      int n = 0;
      try {
        n = std::stoi(lv);
      } catch (const std::exception&) {
        throw InputError(std::string(key) + ": bad level '" + lv + "'");
      }
      if (n < 0 || n > top || n + shift < 0 || n + shift > top)
        throw InputError(std::string(key) + ": level " + lv + " out of range");
      if (!maps.is_array() || static_cast<int>(maps.size()) != n + 1)
        throw InputError(std::string(key) + ": level " + lv + " needs " + std::to_string(n + 1) + " maps");
      for (int i = 0; i <= n; ++i) {
        if (!maps[i].is_array() || static_cast<Index>(maps[i].size()) != x.size(n))
          throw InputError(std::string(key) + ": map " + std::to_string(i) + " at level " + lv + " has wrong length");
        for (Index s = 0; s < x.size(n); ++s) set(n, i, s, lookup(n + shift, maps[i][s]));
      }
    }
  };
  read_maps("faces", -1, [&](int n, int i, Index s, Index t) { x.set_face(n, i, s, t); });
  read_maps("degeneracies", 1, [&](int n, int i, Index s, Index t) { x.set_degeneracy(n, i, s, t); });
  return x;
}

inline Json to_json(const ChainComplexReport& r) {
  Json groups = Json::array();
  for (const auto& g : r.groups) {
    Json torsion = Json::array();
    for (const auto& t : g.torsion) torsion.push_back(t.str());
    groups.push_back({{"degree", g.degree}, {"free_rank", g.free_rank}, {"torsion", torsion}});
  }
  return {{"truncation", r.truncation}, {"homology", groups}};
}

inline Json to_json(const Partition& p, const TruncatedSimplicialSet& x) {
  Json classes = Json::array();
  for (const auto& block : p.blocks()) {
    Json names = Json::array();
    for (Index v : block) names.push_back(x.name(0, v));
    classes.push_back(std::move(names));
  }
  return {{"components", p.classes}, {"classes", classes}};
}

// ---------------------------------------------------------------------------
// Simplicial categories

inline Json to_json(const TruncatedSimplicialCategory& a) {
  const Index n = a.object_count();
  Json j;
  j["objects"] = a.objects();
  j["truncation"] = a.truncation();
  j["homs"] = Json::array();
  j["identities"] = Json::object();
  j["compose"] = Json::array();
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      j["homs"].push_back({{"source", a.object_name(x)}, {"target", a.object_name(y)}, {"sset", to_json(a.hom(x, y))}});
  for (Index x = 0; x < n; ++x)
    j["identities"][a.object_name(x)] = a.identity(x) == kNone ? Json(nullptr) : Json(a.hom(x, x).name(0, a.identity(x)));
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y)
      for (Index z = 0; z < n; ++z)
        for (int lv = 0; lv <= a.truncation(); ++lv)
          for (Index g = 0; g < a.hom(y, z).size(lv); ++g)
            for (Index f = 0; f < a.hom(x, y).size(lv); ++f) {
              Index gf = a.compose(x, y, z, lv, g, f);
              if (gf == kNone) continue;
              j["compose"].push_back({a.object_name(x), a.object_name(y), a.object_name(z), lv, a.hom(y, z).name(lv, g),
                                      a.hom(x, y).name(lv, f), a.hom(x, z).name(lv, gf)});
            }
  return j;
}

/// compose entries: [x, y, z, level, g, f, gf] with g: y -> z and f: x -> y.
inline TruncatedSimplicialCategory scat_from_json(const Json& j) {
  using detail::as;
  using detail::field;
  auto objects = as<std::vector<std::string>>(field(j, "objects"), "objects");
  const int top = as<int>(field(j, "truncation"), "truncation");
  TruncatedSimplicialCategory a(objects, top);
  std::vector<bool> seen(objects.size() * objects.size(), false);
  for (const auto& h : field(j, "homs")) {
    Index x = a.object(as<std::string>(field(h, "source"), "hom source"));
    Index y = a.object(as<std::string>(field(h, "target"), "hom target"));
    a.set_hom(x, y, sset_from_json(field(h, "sset")));
    seen[a.pair(x, y)] = true;
  }
  for (Index x = 0; x < a.object_count(); ++x) {
    auto name = as<std::string>(field(field(j, "identities"), a.object_name(x).c_str()), "identity");
    auto v = a.hom(x, x).find(0, name);
    if (!v) throw InputError("identity '" + name + "' is not a vertex of hom(" + a.object_name(x) + ", " + a.object_name(x) + ")");
    a.set_identity(x, *v);
  }
  CompositionTable table;
  if (j.contains("compose"))
    for (const auto& e : j.at("compose")) {
      if (!e.is_array() || e.size() != 7) throw InputError("compose entries are [x, y, z, level, g, f, gf]");
      Index x = a.object(as<std::string>(e[0], "x")), y = a.object(as<std::string>(e[1], "y")),
            z = a.object(as<std::string>(e[2], "z"));
      int lv = as<int>(e[3], "level");
      if (lv < 0 || lv > top) throw InputError("compose level out of range");
      auto find = [&](Index u, Index v, const Json& name) {
        auto s = a.hom(u, v).find(lv, as<std::string>(name, "simplex"));
        if (!s) throw InputError("compose: unknown simplex " + name.dump());
        return *s;
      };
      table.set(x, y, z, lv, find(y, z, e[4]), find(x, y, e[5]), find(x, z, e[6]));
    }
  a.set_composer(table.composer());
  return a;
}

inline Json to_json(const RelativeSimplicialCategory& r) {
  const auto& a = r.ambient;
  Json j = to_json(a);
  j["sub"] = Json::array();
  for (Index x = 0; x < a.object_count(); ++x)
    for (Index y = 0; y < a.object_count(); ++y)
      for (int lv = 0; lv <= a.truncation(); ++lv) {
        Json names = Json::array();
        for (Index s : r.sub[a.pair(x, y)][lv].members()) names.push_back(a.hom(x, y).name(lv, s));
        if (!names.empty())
          j["sub"].push_back({{"source", a.object_name(x)}, {"target", a.object_name(y)}, {"level", lv}, {"simplices", names}});
      }
  return j;
}

/// The listed simplices generate the subobject: it is closed under faces,
/// degeneracies and composition, and contains the degenerate identities.
inline RelativeSimplicialCategory relscat_from_json(const Json& j) {
  using detail::as;
  auto r = minimal_relative(scat_from_json(j));
  const auto& a = r.ambient;
  if (j.contains("sub"))
    for (const auto& e : j.at("sub")) {
      Index x = a.object(as<std::string>(detail::field(e, "source"), "source"));
      Index y = a.object(as<std::string>(detail::field(e, "target"), "target"));
      int lv = as<int>(detail::field(e, "level"), "level");
      if (lv < 0 || lv > a.truncation()) throw InputError("sub level out of range");
      for (const auto& name : detail::field(e, "simplices")) {
        auto s = a.hom(x, y).find(lv, as<std::string>(name, "simplex"));
        if (!s) throw InputError("sub: unknown simplex " + name.dump());
        r.sub[a.pair(x, y)][lv].insert(*s);
      }
    }
  close_subobject(r);
  return r;
}

inline Json to_json(const LocalizationBounds& b) {
  return {{"truncation", b.truncation}, {"width", b.width}, {"verdict", to_string(b.verdict)}, {"overflows", b.overflows}};
}

/// Simplicial functor between two simplicial categories, by names:
/// {"object_map": {x: x'}, "hom_maps": [{"source","target","levels":[{s: s'}, ...]}]}.
inline Json to_json(const TruncatedSimplicialCategory& src, const TruncatedSimplicialCategory& tgt,
                    const SimplicialFunctor& f) {
  Json j{{"object_map", Json::object()}, {"hom_maps", Json::array()}};
  for (Index x = 0; x < src.object_count(); ++x) j["object_map"][src.object_name(x)] = tgt.object_name(f.object_map[x]);
  for (Index x = 0; x < src.object_count(); ++x)
    for (Index y = 0; y < src.object_count(); ++y) {
      const auto& from = src.hom(x, y);
      const auto& to = tgt.hom(f.object_map[x], f.object_map[y]);
      Json levels = Json::array();
      for (int lv = 0; lv <= std::min(src.truncation(), tgt.truncation()); ++lv) {
        Json m = Json::object();
        for (Index s = 0; s < from.size(lv); ++s) {
          Index t = f.hom_maps[src.pair(x, y)](lv, s);
          m[from.name(lv, s)] = t == kNone ? Json(nullptr) : Json(to.name(lv, t));
        }
        levels.push_back(std::move(m));
      }
      j["hom_maps"].push_back({{"source", src.object_name(x)}, {"target", src.object_name(y)}, {"levels", levels}});
    }
  return j;
}

inline SimplicialFunctor simplicial_functor_from_json(const TruncatedSimplicialCategory& src,
                                                      const TruncatedSimplicialCategory& tgt, const Json& j) {
  using detail::as;
  SimplicialFunctor f;
  f.object_map.assign(src.object_count(), kNone);
  for (const auto& [k, v] : detail::field(j, "object_map").items()) f.object_map[src.object(k)] = tgt.object(as<std::string>(v, "object"));
  for (Index x = 0; x < src.object_count(); ++x)
    if (f.object_map[x] == kNone) throw InputError("object_map misses '" + src.object_name(x) + "'");
  const int top = std::min(src.truncation(), tgt.truncation());
  f.hom_maps.resize(static_cast<std::size_t>(src.object_count()) * src.object_count());
  for (Index x = 0; x < src.object_count(); ++x)
    for (Index y = 0; y < src.object_count(); ++y) {
      auto& m = f.hom_maps[src.pair(x, y)];
      m.levels.resize(static_cast<std::size_t>(top) + 1);
      for (int lv = 0; lv <= top; ++lv) m.levels[lv].assign(src.hom(x, y).size(lv), kNone);
    }
  for (const auto& h : detail::field(j, "hom_maps")) {
    Index x = src.object(as<std::string>(detail::field(h, "source"), "source"));
    Index y = src.object(as<std::string>(detail::field(h, "target"), "target"));
    const auto& from = src.hom(x, y);
    const auto& to = tgt.hom(f.object_map[x], f.object_map[y]);
    const auto& levels = detail::field(h, "levels");
    for (int lv = 0; lv <= top && lv < static_cast<int>(levels.size()); ++lv)
      for (const auto& [k, v] : levels[lv].items()) {
        auto s = from.find(lv, k);
        if (!s) throw InputError("hom_maps: unknown simplex '" + k + "'");
        if (v.is_null()) continue;
        auto t = to.find(lv, as<std::string>(v, "simplex image"));
        if (!t) throw InputError("hom_maps: unknown image " + v.dump());
        f.hom_maps[src.pair(x, y)].levels[lv][*s] = *t;
      }
  }
  return f;
}

inline Json to_json(const TruncatedSimplicialCategory& src, const DkCertificate& c) {
  Json pairs = Json::array();
  for (const auto& p : c.pairs) {
    Json homology = Json::array();
    for (const auto& h : p.homology) homology.push_back({{"degree", h.degree}, {"iso", h.iso}});
    pairs.push_back({{"source", src.object_name(p.source)},
                     {"target", src.object_name(p.target)},
                     {"pi0_bijective", p.pi0_bijective},
                     {"homology", homology}});
  }
  return {{"truncation", c.truncation}, {"pairs", pairs}, {"ho_equivalence", c.ho_equivalence},
          {"verdict", to_string(c.verdict)}, {"witness", c.witness}};
}

// ---------------------------------------------------------------------------
// Content-addressed result cache

/// Stored values keyed by sha256 of (canonical input, operation, bounds).
/// Entries are written to a temporary name and renamed into place, so
/// concurrent writers sharing a directory never expose partial files.
class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

  static std::string key(const Json& input, const std::string& operation, const Json& bounds) {
    return sha256_hex(canonical(input) + "\n" + operation + "\n" + canonical(bounds));
  }

  [[nodiscard]] std::optional<std::string> get(const std::string& key) const {
    std::ifstream in(path(key), std::ios::binary);
    if (!in) return std::nullopt;
    try {
      Json entry = Json::parse(in);
      if (entry.value("key", "") != key || !entry.contains("value")) return std::nullopt;
      return entry.at("value").get<std::string>();
    } catch (const Json::exception&) {
      return std::nullopt;  // a corrupt entry is a miss
    }
  }

  void put(const std::string& key, const std::string& value, const std::string& tool_version) const {
    auto stamp = std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
    Json entry{{"key", key}, {"value", value}, {"created", stamp}, {"tool_version", tool_version}};
    std::random_device rd;
    auto tmp = dir_ / (key + ".tmp." + std::to_string(rd()));
    {
      std::ofstream out(tmp, std::ios::binary);
      out << entry.dump();
      if (!out) throw std::runtime_error("cache write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path(key));
  }

  [[nodiscard]] std::filesystem::path path(const std::string& key) const { return dir_ / (key + ".json"); }

 private:
  std::filesystem::path dir_;
};

}  // namespace simploc
