// Writes the example corpus: sites, two coverages per site, presheaves and
// a few deliberately broken inputs, plus corpus/index.json listing them.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "lopos/cli/io.hpp"
#include "lopos/error.hpp"

namespace fs = std::filesystem;
using namespace lopos;
using io::json;

namespace {

  void write(fs::path const& path, json const& j) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << j.dump(2) << "\n";
  }

  std::vector<std::string> names(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(std::string(1, static_cast<char>('a' + i)));
    }
    return out;
  }

  Presheaf random_presheaf(QuantalePtr const& q, std::mt19937& rng, std::string name) {
    std::uniform_int_distribution<std::size_t> size(1, 2);
    for (;;) {
      PresheafBuilder          b(q, name);
      std::vector<std::size_t> n(q->size());
      for (Elem u : q->ascending()) {
        n[u] = size(rng);
        b.at(u, names(n[u]));
      }
      for (Elem u = 0; u < q->size(); ++u) {
        for (Elem c : q->lower_covers(u)) {
          std::vector<std::size_t> map(n[u]);
          for (auto& m : map) {
            m = std::uniform_int_distribution<std::size_t>(0, n[c] - 1)(rng);
          }
          b.restrict(u, c, map);
        }
      }
      try {
        return b.build();
      } catch (Error const& e) {
        if (e.kind() != ErrorKind::CompositionFails) {
          throw;
        }
      }
    }
  }

  struct Site {
    std::string name;
    std::string kind;
    json        spec;
    json        coverages;  // name -> coverage json
  };

}  // namespace

int main(int argc, char** argv) {
  fs::path root = argc > 1 ? argv[1] : "corpus";

  auto explicit_spec = [](char const* alias) {
    return io::to_json((*io::site_alias(alias))->to_spec());
  };
  json canonical = {{"canonical", true}, {"flavor", "strong_prelopology"}};
  auto trivial   = [](char const* alias) {
    return io::to_json(trivial_coverage(*io::site_alias(alias)));
  };

  std::vector<Site> sites;
  sites.push_back({"luk3", "quantale", explicit_spec("luk3"),
                   {{"canonical", canonical}, {"trivial", trivial("luk3")}}});
  sites.push_back({"truncnat3", "quantale", explicit_spec("truncnat3"),
                   {{"canonical", canonical}, {"trivial", trivial("truncnat3")}}});
  sites.push_back({"zmod4", "quantale", explicit_spec("zmod4"),
                   {{"canonical", canonical}, {"trivial", trivial("zmod4")}}});
  sites.push_back({"pow2", "locale", explicit_spec("pow2"),
                   {{"canonical", canonical}, {"trivial", trivial("pow2")}}});
  sites.push_back({"chain3", "locale", explicit_spec("chain3"),
                   {{"canonical", canonical}, {"trivial", trivial("chain3")}}});
  sites.push_back(
      {"chain2xluk3", "product",
       {{"product", json::array({{{"standard", "chain_locale"}, {"param", 2}},
                                 {{"standard", "lukasiewicz_chain"}, {"param", 3}}})}},
       {{"canonical", {{"product", json::array({canonical, canonical})}}},
        {"mixed", {{"product", json::array({{{"trivial", true}}, canonical})}}}}});

  std::mt19937 rng(20240917);
  json         index_sites = json::array();
  for (auto& s : sites) {
    auto site = io::site_from_json(s.spec);
    write(root / "sites" / (s.name + ".json"), s.spec);
    json entry = {{"name", s.name}, {"kind", s.kind}, {"site", "sites/" + s.name + ".json"}};
    json covs  = json::array();
    for (auto const& [cname, cj] : s.coverages.items()) {
      auto path = "coverages/" + s.name + "." + cname + ".json";
      write(root / path, cj);
      covs.push_back(path);
    }
    entry["coverages"] = covs;

    std::vector<Presheaf> ps;
    auto                  t = terminal_presheaf(site);
    t.set_name("terminal");
    ps.push_back(t);
    auto e = empty_presheaf(site);
    e.set_name("empty");
    ps.push_back(e);
    // A representable strictly between bottom and top when there is one.
    Elem mid = site->top();
    for (Elem u : site->ascending()) {
      if (u != site->bottom() && u != site->top()) {
        mid = u;
        break;
      }
    }
    auto y = yoneda(site, mid);
    y.set_name("y_" + site->label(mid));
    ps.push_back(y);
    for (int i = 0; i < 3; ++i) {
      ps.push_back(random_presheaf(site, rng, "random" + std::to_string(i)));
    }
    if (s.name == "luk3") {
      auto h = site->index_of("h");
      ps.push_back(PresheafBuilder(site, "lopsided")
                       .at(site->top(), {"a", "b"})
                       .at(h, {"c", "d"})
                       .at(site->bottom(), {"e"})
                       .restrict(site->top(), h, {0, 0})
                       .restrict(h, site->bottom(), {0, 0})
                       .build());
      ps.push_back(PresheafBuilder(site, "doubled_bottom")
                       .at(site->top(), {"a"})
                       .at(h, {"c"})
                       .at(site->bottom(), {"e", "f"})
                       .restrict(site->top(), h, {0})
                       .restrict(h, site->bottom(), {0})
                       .build());
    }
    json pres = json::array();
    for (auto const& p : ps) {
      auto path = "presheaves/" + s.name + "/" + p.name() + ".json";
      write(root / path, io::to_json(p));
      pres.push_back(path);
    }
    entry["presheaves"] = pres;
    index_sites.push_back(entry);
  }

  // Inputs for the lopos criterion and for the failure paths of the CLI.
  json m3 = {{"name", "M3"},
             {"elements", {"0", "a", "b", "c", "1"}},
             {"leq", json::array({json::array({"0", "a"}), json::array({"0", "b"}),
                                  json::array({"0", "c"}), json::array({"a", "1"}),
                                  json::array({"b", "1"}), json::array({"c", "1"})})}};
  json mul = json::object();
  std::vector<std::string> el{"0", "a", "b", "c", "1"};
  for (std::size_t x = 0; x < 5; ++x) {
    for (std::size_t y = 0; y < 5; ++y) {
      auto m = x == y ? x : x == 4 ? y : y == 4 ? x : 0;
      mul[el[x] + "," + el[y]] = el[m];
    }
  }
  m3["mul"] = mul;
  write(root / "quantales" / "m3.json", m3);

  auto broken = explicit_spec("luk3");
  broken["name"] = "luk3-broken";
  broken["mul"]["h,h"] = "h";
  broken["mul"]["1,h"] = "0";
  write(root / "quantales" / "broken_assoc.json", broken);

  auto luk3_mut = json{{"canonical", true},
                       {"flavor", "strong_prelopology"},
                       {"add", json::array({{{"target", "1"}, {"legs", json::array({"h"})}}})}};
  write(root / "coverages" / "luk3.mutated.json", luk3_mut);

  {
    fs::create_directories(root / "quantales");
    std::ofstream out(root / "quantales" / "malformed.json", std::ios::binary);
    out << "{\n  \"elements\": [\"0\", \"1\"],\n  \"mul\": {\"0,0\": \"0\",\n}\n";
  }

  write(root / "index.json",
        {{"sites", index_sites},
         {"lopos", json::array({"sites/luk3.json", "sites/truncnat3.json", "sites/zmod4.json",
                                "sites/pow2.json", "sites/chain3.json", "quantales/m3.json"})},
         {"broken", {{"quantale", "quantales/broken_assoc.json"},
                     {"malformed", "quantales/malformed.json"},
                     {"coverage", "coverages/luk3.mutated.json"}}}});
  std::cout << "wrote corpus to " << root.string() << "\n";
}
