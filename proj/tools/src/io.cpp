#include "lopos/cli/io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "lopos/error.hpp"

namespace lopos::io {

  namespace {
    [[noreturn]] void bad(std::string const& what) {
      LOPOS_THROW(ParseError, what);
    }

    json const& field(json const& j, char const* key, std::string const& where) {
      if (!j.is_object() || !j.contains(key)) {
        bad(where + ": missing \"" + key + "\"");
      }
      return j.at(key);
    }

    std::string str(json const& j, std::string const& where) {
      if (!j.is_string()) {
        bad(where + ": expected a string, got " + j.dump());
      }
      return j.get<std::string>();
    }

    std::size_t count(json const& j, std::string const& where) {
      if (!j.is_number_integer() || j.get<long long>() < 0) {
        bad(where + ": expected a non-negative integer, got " + j.dump());
      }
      return j.get<std::size_t>();
    }

    std::map<std::string, Elem> label_index(std::vector<std::string> const& labels) {
      std::map<std::string, Elem> idx;
      for (Elem i = 0; i < labels.size(); ++i) {
        if (!idx.emplace(labels[i], i).second) {
          bad("duplicate element \"" + labels[i] + "\"");
        }
      }
      return idx;
    }

    Elem lookup(std::map<std::string, Elem> const& idx, std::string const& label) {
      auto it = idx.find(label);
      if (it == idx.end()) {
        bad("unknown element \"" + label + "\"");
      }
      return it->second;
    }

    // Splits "x<sep>y" where both halves must be known labels; labels may
    // themselves contain the separator.
    template <typename Known>
    std::pair<std::string, std::string> split_pair(std::string const& key,
                                                   std::string_view sep,
                                                   Known const&     known) {
      std::optional<std::pair<std::string, std::string>> found;
      for (auto pos = key.find(sep); pos != std::string::npos;
           pos      = key.find(sep, pos + 1)) {
        auto left  = key.substr(0, pos);
        auto right = key.substr(pos + sep.size());
        if (known(left) && known(right)) {
          if (found) {
            bad("ambiguous key \"" + key + "\"");
          }
          found.emplace(left, right);
        }
      }
      if (!found) {
        bad("cannot split \"" + key + "\" into two known elements");
      }
      return *found;
    }

    Family legs_from_json(QuantalePtr const& q, json const& legs, std::string const& where) {
      if (!legs.is_array()) {
        bad(where + ": \"legs\" must be an array");
      }
      Family out;
      for (auto const& leg : legs) {
        auto label = leg.is_object() ? str(field(leg, "dom", where), where + " dom")
                                     : str(leg, where + " leg");
        if (leg.is_object() && leg.contains("mor")) {
          str(leg.at("mor"), where + " mor");
        }
        auto e = q->find(label);
        if (!e) {
          bad(where + ": unknown element \"" + label + "\"");
        }
        out.push_back(*e);
      }
      return out;
    }

    CoverFamily cover_from_json(QuantalePtr const& q, json const& j) {
      auto target = str(field(j, "target", "cover"), "cover target");
      auto t      = q->find(target);
      if (!t) {
        bad("cover: unknown target \"" + target + "\"");
      }
      return {*t, legs_from_json(q, field(j, "legs", "cover"), "cover of " + target)};
    }

    Coverage base_coverage(QuantalePtr const& q, json const& j, std::size_t cap) {
      if (j.contains("canonical")) {
        return canonical_quantale_coverage(q, cap);
      }
      if (j.contains("trivial")) {
        return trivial_coverage(q, cap);
      }
      if (j.contains("product")) {
        auto const& parts = j.at("product");
        if (!parts.is_array() || parts.size() != 2) {
          bad("coverage \"product\" needs two coverages");
        }
        if (!q->is_product()) {
          LOPOS_THROW(SiteMismatch, "product coverage on a site that is not a product");
        }
        return product_coverage(coverage_from_json(q->left(), parts[0]),
                                coverage_from_json(q->right(), parts[1]), q);
      }
      if (j.contains("covers")) {
        Coverage c(q, cap);
        if (!j.at("covers").is_array()) {
          bad("\"covers\" must be an array");
        }
        for (auto const& cover : j.at("covers")) {
          c.add(cover_from_json(q, cover));
        }
        return c;
      }
      bad("coverage needs one of \"canonical\", \"trivial\", \"covers\", \"product\"");
    }
  }  // namespace

  json parse_json(std::string_view text, std::string const& origin) {
    try {
      return json::parse(text.begin(), text.end());
    } catch (json::parse_error const& e) {
      std::size_t line = 1, col = 1;
      for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      bad(origin + ":" + std::to_string(line) + ":" + std::to_string(col)
          + ": invalid JSON");
    }
  }

  Document read_document(std::filesystem::path const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      bad(path.string() + ": cannot open");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    Document d;
    d.origin = path.filename().string();
    d.bytes  = buf.str();
    d.value  = parse_json(d.bytes, d.origin);
    return d;
  }

  std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  std::string hash_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
  }

  ////////////////////////////////////////////////////////////////////////
  // Quantales and sites
  ////////////////////////////////////////////////////////////////////////

  QuantaleSpec quantale_spec_from_json(json const& j) {
    QuantaleSpec spec;
    if (!j.is_object()) {
      bad("quantale: expected an object");
    }
    spec.name = j.contains("name") ? str(j.at("name"), "name") : "quantale";
    auto const& elements = field(j, "elements", "quantale");
    if (!elements.is_array() || elements.empty()) {
      bad("quantale: \"elements\" must be a non-empty array");
    }
    for (auto const& e : elements) {
      spec.elements.push_back(str(e, "element"));
    }
    auto const idx = label_index(spec.elements);
    auto const n   = spec.elements.size();
    if (j.contains("leq")) {
      if (!j.at("leq").is_array()) {
        bad("quantale: \"leq\" must be an array of pairs");
      }
      for (auto const& p : j.at("leq")) {
        if (!p.is_array() || p.size() != 2) {
          bad("quantale: order pair " + p.dump() + " is not a pair");
        }
        spec.leq.emplace_back(lookup(idx, str(p[0], "leq")), lookup(idx, str(p[1], "leq")));
      }
    }
    auto const& mul = field(j, "mul", "quantale");
    spec.mul.assign(n, std::vector<Elem>(n));
    if (mul.is_array()) {
      if (mul.size() != n) {
        bad("quantale: \"mul\" matrix needs " + std::to_string(n) + " rows");
      }
      for (Elem a = 0; a < n; ++a) {
        if (!mul[a].is_array() || mul[a].size() != n) {
          bad("quantale: \"mul\" row " + spec.elements[a] + " has the wrong length");
        }
        for (Elem b = 0; b < n; ++b) {
          spec.mul[a][b] = lookup(idx, str(mul[a][b], "mul entry"));
        }
      }
    } else if (mul.is_object()) {
      std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
      auto known = [&](std::string const& s) { return idx.count(s) > 0; };
      for (auto const& [key, value] : mul.items()) {
        auto [l, r] = split_pair(key, ",", known);
        auto a = idx.at(l), b = idx.at(r);
        if (seen[a][b]) {
          bad("quantale: product " + key + " given twice");
        }
        seen[a][b]     = true;
        spec.mul[a][b] = lookup(idx, str(value, "mul entry " + key));
      }
      for (Elem a = 0; a < n; ++a) {
        for (Elem b = 0; b < n; ++b) {
          if (!seen[a][b]) {
            bad("quantale: partial table, no entry for \"" + spec.elements[a] + ","
                + spec.elements[b] + "\"");
          }
        }
      }
    } else {
      bad("quantale: \"mul\" must be an object or a matrix");
    }
    if (j.contains("unit") && !j.at("unit").is_null()) {
      spec.unit = lookup(idx, str(j.at("unit"), "unit"));
    }
    return spec;
  }

  json to_json(QuantaleSpec const& spec) {
    json j;
    j["name"]     = spec.name;
    j["elements"] = spec.elements;
    json leq      = json::array();
    for (auto [a, b] : spec.leq) {
      if (a != b) {
        leq.push_back({spec.elements[a], spec.elements[b]});
      }
    }
    j["leq"] = leq;
    json mul = json::object();
    for (Elem a = 0; a < spec.elements.size(); ++a) {
      for (Elem b = 0; b < spec.elements.size(); ++b) {
        mul[spec.elements[a] + "," + spec.elements[b]] = spec.elements[spec.mul[a][b]];
      }
    }
    j["mul"] = mul;
    if (spec.unit) {
      j["unit"] = spec.elements[*spec.unit];
    }
    return j;
  }

  QuantalePtr site_from_json(json const& j) {
    if (j.is_string()) {
      auto alias = site_alias(j.get<std::string>());
      if (!alias) {
        bad("unknown site \"" + j.get<std::string>() + "\"");
      }
      return *alias;
    }
    if (j.is_object() && j.contains("standard")) {
      auto name  = str(j.at("standard"), "standard");
      auto which = standard_from_string(name);
      if (!which) {
        bad("unknown standard quantale \"" + name + "\"");
      }
      return build_standard(*which, count(field(j, "param", "standard site"), "param"));
    }
    if (j.is_object() && j.contains("product")) {
      auto const& parts = j.at("product");
      if (!parts.is_array() || parts.size() != 2) {
        bad("\"product\" needs two sites");
      }
      return product_quantale(site_from_json(parts[0]), site_from_json(parts[1]));
    }
    return make_quantale(quantale_spec_from_json(j));
  }

  std::optional<QuantalePtr> site_alias(std::string_view name) {
    struct Alias {
      std::string_view name;
      StandardQuantale which;
      std::size_t      param;
    };
    static constexpr Alias aliases[] = {
        {"luk3", StandardQuantale::lukasiewicz_chain, 3},
        {"truncnat3", StandardQuantale::truncated_nat, 3},
        {"zmod4", StandardQuantale::ideals_zmod, 4},
        {"zmod12", StandardQuantale::ideals_zmod, 12},
        {"pow2", StandardQuantale::powerset_locale, 2},
        {"chain2", StandardQuantale::chain_locale, 2},
        {"chain3", StandardQuantale::chain_locale, 3},
        {"chain4", StandardQuantale::chain_locale, 4},
        {"chain5", StandardQuantale::chain_locale, 5}};
    for (auto const& a : aliases) {
      if (a.name == name) {
        return build_standard(a.which, a.param);
      }
    }
    return std::nullopt;
  }

  ////////////////////////////////////////////////////////////////////////
  // Coverages
  ////////////////////////////////////////////////////////////////////////

  std::optional<CoverageFlavor> flavor_from_string(std::string_view s) {
    if (s == "weak") {
      return CoverageFlavor::weak_prelopology;
    }
    if (s == "plain") {
      return CoverageFlavor::prelopology;
    }
    if (s == "strong") {
      return CoverageFlavor::strong_prelopology;
    }
    return coverage_flavor_from_string(s);
  }

  std::optional<CoverageFlavor> declared_flavor(json const& j) {
    if (!j.is_object() || !j.contains("flavor")) {
      return std::nullopt;
    }
    auto s = str(j.at("flavor"), "flavor");
    auto f = flavor_from_string(s);
    if (!f) {
      bad("unknown flavor \"" + s + "\"");
    }
    return f;
  }

  Coverage coverage_from_json(QuantalePtr const& q, json const& j) {
    if (!j.is_object()) {
      bad("coverage: expected an object");
    }
    declared_flavor(j);
    std::size_t cap = j.contains("cap") ? count(j.at("cap"), "cap") : 2;
    auto        c   = base_coverage(q, j, cap);
    if (j.contains("name")) {
      c.set_name(str(j.at("name"), "name"));
    }
    for (char const* key : {"remove", "add"}) {
      if (!j.contains(key)) {
        continue;
      }
      if (!j.at(key).is_array()) {
        bad(std::string("coverage: \"") + key + "\" must be an array");
      }
      for (auto const& cover : j.at(key)) {
        auto fam = cover_from_json(q, cover);
        if (std::string_view(key) == "add") {
          c.add(fam);
        } else if (!c.remove(fam)) {
          bad("coverage: cannot remove " + cover.dump() + ", it is not a cover");
        }
      }
    }
    return c;
  }

  json to_json(Coverage const& c) {
    auto const& q = *c.site();
    json        covers = json::array();
    for (Elem u = 0; u < q.size(); ++u) {
      for (auto const& legs : c.families(u)) {
        json l = json::array();
        for (auto v : legs) {
          l.push_back({{"dom", q.label(v)}});
        }
        covers.push_back({{"target", q.label(u)}, {"legs", l}});
      }
    }
    return {{"name", c.name()}, {"cap", c.multiplicity_cap()}, {"covers", covers}};
  }

  ////////////////////////////////////////////////////////////////////////
  // Presheaves
  ////////////////////////////////////////////////////////////////////////

  PresheafSpec presheaf_spec_from_json(QuantalePtr const& q, json const& j) {
    if (!j.is_object()) {
      bad("presheaf: expected an object");
    }
    std::string name = j.contains("name") ? str(j.at("name"), "name") : "F";
    if (j.contains("terminal") || j.contains("empty") || j.contains("representable")) {
      Presheaf f = j.contains("terminal") ? terminal_presheaf(q)
                   : j.contains("empty")
                       ? empty_presheaf(q)
                       : yoneda(q, [&] {
                           auto u = q->find(str(j.at("representable"), "representable"));
                           if (!u) {
                             bad("presheaf: unknown object in \"representable\"");
                           }
                           return *u;
                         }());
      auto spec = to_spec(f);
      spec.name = name;
      return spec;
    }
    PresheafSpec spec;
    spec.name     = name;
    auto const& at = field(j, "at", "presheaf");
    if (!at.is_object()) {
      bad("presheaf: \"at\" must map objects to section lists");
    }
    for (auto const& [u, sections] : at.items()) {
      if (!sections.is_array()) {
        bad("presheaf: sections over " + u + " must be an array");
      }
      std::vector<std::string> s;
      for (auto const& x : sections) {
        s.push_back(str(x, "section over " + u));
      }
      spec.at.emplace_back(u, std::move(s));
    }
    if (j.contains("res")) {
      auto const& res = j.at("res");
      if (!res.is_object()) {
        bad("presheaf: \"res\" must be an object");
      }
      auto known = [&](std::string const& s) { return q->find(s).has_value(); };
      for (auto const& [key, map] : res.items()) {
        auto [lower, upper] = split_pair(key, "<=", known);
        if (!map.is_object()) {
          bad("presheaf: restriction " + key + " must map sections to sections");
        }
        RestrictionSpec r{upper, lower, {}};
        for (auto const& [s, t] : map.items()) {
          r.map.emplace_back(s, str(t, "restriction " + key));
        }
        spec.res.push_back(std::move(r));
      }
    }
    return spec;
  }

  Presheaf presheaf_from_json(QuantalePtr const& q, json const& j) {
    auto v = validate_presheaf(q, presheaf_spec_from_json(q, j));
    if (v.presheaf) {
      return *v.presheaf;
    }
    std::string what;
    for (auto const& p : v.problems) {
      what += (what.empty() ? "" : "; ") + p.message;
    }
    throw Error(v.problems.front().kind, what);
  }

  json to_json(PresheafSpec const& spec) {
    json at = json::object();
    for (auto const& [u, s] : spec.at) {
      at[u] = s;
    }
    json res = json::object();
    for (auto const& r : spec.res) {
      json m = json::object();
      for (auto const& [s, t] : r.map) {
        m[s] = t;
      }
      res[r.lower + "<=" + r.upper] = m;
    }
    return {{"name", spec.name}, {"at", at}, {"res", res}};
  }

  json to_json(Presheaf const& f) {
    return to_json(to_spec(f));
  }

}  // namespace lopos::io
