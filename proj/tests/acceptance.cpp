// Acceptance gate: one line per criterion with its verdict, the elapsed
// time and the time limit. A criterion that finishes late fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "lopos/cli/io.hpp"
#include "lopos/coverage.hpp"
#include "lopos/error.hpp"
#include "lopos/moncat.hpp"
#include "lopos/reflect.hpp"
#include "lopos/sheaf.hpp"
#include "oracles.hpp"

using namespace lopos;
namespace fs = std::filesystem;

namespace {

  struct Outcome {
    bool        pass = true;
    std::string detail;
  };

  struct CorpusSite {
    std::string           name;
    std::string           kind;
    QuantalePtr           site;
    std::vector<Coverage> coverages;
    std::vector<Presheaf> presheaves;
  };

  std::vector<CorpusSite> load_corpus(fs::path const& root) {
    auto                    index = io::read_document(root / "index.json").value;
    std::vector<CorpusSite> out;
    for (auto const& s : index.at("sites")) {
      CorpusSite c;
      c.name = s.at("name").get<std::string>();
      c.kind = s.at("kind").get<std::string>();
      c.site = io::site_from_json(io::read_document(root / s.at("site").get<std::string>()).value);
      for (auto const& path : s.at("coverages")) {
        auto cov = io::coverage_from_json(
            c.site, io::read_document(root / path.get<std::string>()).value);
        cov.set_name(fs::path(path.get<std::string>()).stem().string());
        c.coverages.push_back(std::move(cov));
      }
      for (auto const& path : s.at("presheaves")) {
        c.presheaves.push_back(io::presheaf_from_json(
            c.site, io::read_document(root / path.get<std::string>()).value));
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  std::vector<QuantalePtr> bundled_quantales() {
    std::vector<QuantalePtr> out{build_standard(StandardQuantale::powerset_locale, 2)};
    for (std::size_t n = 1; n <= 5; ++n) {
      out.push_back(build_standard(StandardQuantale::chain_locale, n));
    }
    out.push_back(build_standard(StandardQuantale::lukasiewicz_chain, 3));
    out.push_back(build_standard(StandardQuantale::truncated_nat, 3));
    out.push_back(build_standard(StandardQuantale::ideals_zmod, 4));
    out.push_back(build_standard(StandardQuantale::ideals_zmod, 12));
    return out;
  }

  std::vector<QuantalePtr> bundled_locales() {
    std::vector<QuantalePtr> out;
    for (auto const& q : bundled_quantales()) {
      if (classify_quantale(*q).locale) {
        out.push_back(q);
      }
    }
    return out;
  }

  oracle::LawReport laws(QuantaleSpec const& s) {
    return oracle::check_laws(s.elements.size(), s.leq, s.mul,
                              s.unit ? static_cast<long>(*s.unit) : -1);
  }

  QuantaleSpec m3() {
    QuantaleSpec s;
    s.name     = "M3";
    s.elements = {"0", "a", "b", "c", "1"};
    for (Elem x = 1; x <= 3; ++x) {
      s.leq.emplace_back(0, x);
      s.leq.emplace_back(x, 4);
    }
    s.mul.assign(5, std::vector<Elem>(5));
    for (Elem x = 0; x < 5; ++x) {
      for (Elem y = 0; y < 5; ++y) {
        s.mul[x][y] = x == y ? x : x == 4 ? y : y == 4 ? x : 0;
      }
    }
    return s;
  }

  std::string num(std::size_t n) {
    return std::to_string(n);
  }

  ////////////////////////////////////////////////////////////////////////
  // Criteria
  ////////////////////////////////////////////////////////////////////////

  Outcome quantale_laws() {
    Outcome     o;
    std::size_t quantales = 0, mutations = 0, caught = 0, benign = 0;
    for (auto const& q : bundled_quantales()) {
      auto spec = q->to_spec();
      if (!validate_quantale(spec).ok() || !laws(spec).valid()) {
        o.pass = false;
        o.detail += q->name() + " rejected; ";
      }
      ++quantales;
      spec.unit.reset();
      auto const n = spec.elements.size();
      for (Elem a = 0; a < n; ++a) {
        for (Elem b = 0; b < n; ++b) {
          for (Elem c = 0; c < n; ++c) {
            if (c == spec.mul[a][b]) {
              continue;
            }
            auto m      = spec;
            m.mul[a][b] = c;
            ++mutations;
            bool lib    = validate_quantale(m).ok();
            bool oracle = laws(m).valid();
            if (lib != oracle) {
              o.pass = false;
              o.detail += q->name() + " mutation disagrees; ";
            }
            caught += !oracle && !lib;
            benign += oracle;
          }
        }
      }
    }
    if (caught < 10) {
      o.pass = false;
    }
    o.detail += num(quantales) + " quantales pass; " + num(caught) + " of "
                + num(mutations - benign) + " breaking mutations caught (" + num(benign)
                + " single-entry changes still give a quantale)";
    return o;
  }

  std::string coverage_key(Coverage const& c) {
    std::string key = num(c.multiplicity_cap()) + ":";
    for (Elem u = 0; u < c.site()->size(); ++u) {
      for (auto const& legs : c.families(u)) {
        key += num(u) + "<";
        for (auto x : legs) {
          key += num(x) + ",";
        }
        key += ";";
      }
    }
    return key;
  }

  // Canonical and trivial coverages at several caps, then breadth-first
  // single-family additions and removals, round-robin over targets.
  std::vector<Coverage> coverage_variants(QuantalePtr const& q, std::size_t want) {
    std::vector<Coverage> out;
    std::set<std::string> seen;
    auto                  keep = [&](Coverage c) {
      if (out.size() < want && seen.insert(coverage_key(c)).second) {
        out.push_back(std::move(c));
      }
    };
    for (std::size_t cap = 1; cap <= (q->size() <= 3 ? 3u : 2u); ++cap) {
      keep(canonical_quantale_coverage(q, cap));
      keep(trivial_coverage(q, cap));
    }
    for (std::size_t next = 0; next < out.size() && out.size() < want; ++next) {
      auto const                      base = out[next];
      std::vector<std::vector<Family>> toggles(q->size());
      for (Elem u = 0; u < q->size(); ++u) {
        for_each_capped_multiset(q->below(u), base.multiplicity_cap(), kFamilyLimit,
                                 [&](Family const& f) { toggles[u].push_back(f); });
      }
      for (std::size_t k = 0, left = 1; left > 0; ++k) {
        left = 0;
        for (Elem u = q->size(); u-- > 0;) {
          if (k >= toggles[u].size()) {
            continue;
          }
          ++left;
          auto c = base;
          if (!c.remove({u, toggles[u][k]})) {
            c.add({u, toggles[u][k]});
          }
          keep(std::move(c));
        }
      }
    }
    return out;
  }

  Outcome flavors_agree() {
    Outcome     o;
    std::size_t variants = 0, pretopologies = 0;
    auto const  locales = bundled_locales();
    for (auto const& q : locales) {
      auto vs = coverage_variants(q, 20);
      for (auto const& c : vs) {
        bool pre = check_pretopology(c).ok();
        bool pl  = check_prelopology(c).ok();
        if (pre != pl) {
          o.pass = false;
          o.detail += q->name() + " variant disagrees; ";
        }
        pretopologies += pre;
        ++variants;
      }
      if (vs.size() < 20) {
        o.pass = false;
        o.detail += q->name() + " has only " + num(vs.size()) + " variants; ";
      }
    }
    o.detail += num(variants) + " coverage variants on " + num(locales.size()) + " locales, "
                + num(pretopologies) + " are pretopologies";
    return o;
  }

  Outcome dual_definitions(std::vector<CorpusSite> const& corpus) {
    Outcome     o;
    std::size_t pairs = 0, sheaves = 0;
    for (auto const& s : corpus) {
      if (s.presheaves.size() < 6 || s.coverages.size() < 2) {
        o.pass = false;
        o.detail += s.name + " corpus too small; ";
      }
      for (auto const& l : s.coverages) {
        for (auto const& f : s.presheaves) {
          auto a = check_sheaf_equalizer(f, l).verdict;
          auto b = check_sheaf_orthogonal(f, l).verdict;
          if (a != b) {
            o.pass = false;
            o.detail += s.name + "/" + l.name() + "/" + f.name() + " disagrees; ";
          }
          sheaves += a == SheafVerdict::sheaf;
          ++pairs;
        }
      }
    }
    o.detail += num(pairs) + " presheaf-coverage pairs agree, " + num(sheaves) + " sheaves";
    return o;
  }

  Outcome shifted_sheaves(std::vector<CorpusSite> const& corpus) {
    Outcome     o;
    std::size_t shifts = 0;
    for (auto const& s : corpus) {
      for (auto const& l : s.coverages) {
        for (auto const& f : s.presheaves) {
          if (!check_sheaf_equalizer(f, l).is_sheaf()) {
            continue;
          }
          for (Elem u = 0; u < s.site->size(); ++u) {
            ++shifts;
            if (!check_sheaf_equalizer(shift_presheaf(f, u), l).is_sheaf()) {
              o.pass = false;
              o.detail += s.name + "/" + l.name() + "/" + f.name() + " shifted by "
                          + s.site->label(u) + "; ";
            }
          }
        }
      }
    }
    o.detail += num(shifts) + " shifted sheaves checked";
    return o;
  }

  Outcome sheafification(std::vector<CorpusSite> const& corpus) {
    Outcome     o;
    std::size_t runs = 0, localic = 0, battery = 0;
    for (auto const& s : corpus) {
      for (auto const& l : s.coverages) {
        auto sheaves = sheaf_battery(l, 2);
        battery += sheaves.size();
        for (auto const& p : s.presheaves) {
          auto        r  = sheafify(p, l, kDefaultMaxIter);
          std::string at = s.name + "/" + l.name() + "/" + p.name();
          ++runs;
          if (!r.converged) {
            o.pass = false;
            o.detail += at + " did not converge; ";
            continue;
          }
          if (!check_sheaf_equalizer(r.sheaf, l).is_sheaf()
              || !check_sheaf_orthogonal(r.sheaf, l).is_sheaf()) {
            o.pass = false;
            o.detail += at + " output is not a sheaf; ";
          }
          if (!certify_reflection(p, r, l, sheaves).ok()) {
            o.pass = false;
            o.detail += at + " fails the universal property; ";
          }
          if (s.site->mul_is_meet()) {
            ++localic;
            if (!find_isomorphism(r.sheaf,
                                  plus_construction(plus_construction(p, l), l))) {
              o.pass = false;
              o.detail += at + " differs from the plus construction; ";
            }
          }
        }
      }
    }
    o.detail += num(runs) + " sheafifications, " + num(localic)
                + " matched against plus twice, battery sheaves used: " + num(battery);
    return o;
  }

  Outcome terminal_preservation(std::vector<CorpusSite> const& corpus) {
    Outcome                o;
    std::set<std::string>  kinds;
    std::size_t            checked = 0;
    for (auto const& s : corpus) {
      for (auto const& l : s.coverages) {
        ++checked;
        if (!preserves_terminal(l)) {
          o.pass = false;
          o.detail += s.name + "/" + l.name() + "; ";
        }
      }
      kinds.insert(s.kind);
    }
    if (kinds.size() < 3) {
      o.pass = false;
    }
    o.detail += num(checked) + " coverages over " + num(kinds.size()) + " site flavors";
    return o;
  }

  // Order isomorphisms Q -> lattice, by trying every permutation.
  std::vector<std::vector<std::size_t>> order_isos(Quantale const& q,
                                                   SubobjectLattice const& lat) {
    std::vector<std::vector<std::size_t>> out;
    if (q.size() != lat.size()) {
      return out;
    }
    std::vector<std::size_t> phi(q.size());
    std::iota(phi.begin(), phi.end(), 0);
    do {
      bool ok = true;
      for (Elem a = 0; a < q.size() && ok; ++a) {
        for (Elem b = 0; b < q.size() && ok; ++b) {
          ok = q.leq(a, b) == lat.leq[phi[a]][phi[b]];
        }
      }
      if (ok) {
        out.push_back(phi);
      }
    } while (std::next_permutation(phi.begin(), phi.end()));
    return out;
  }

  Outcome subterminals(std::vector<CorpusSite> const& corpus) {
    Outcome o;
    for (auto const& s : corpus) {
      if (s.name != "luk3" && s.name != "truncnat3" && s.kind != "locale") {
        continue;
      }
      auto l     = canonical_quantale_coverage(s.site);
      auto lat   = subsheaf_lattice(terminal_presheaf(s.site), l);
      auto table = star_table(lat, l);
      auto isos  = order_isos(*s.site, lat);
      bool found = false;
      for (auto const& phi : isos) {
        bool ok = true;
        for (Elem a = 0; a < s.site->size() && ok; ++a) {
          for (Elem b = 0; b < s.site->size() && ok; ++b) {
            ok = table[phi[a]][phi[b]] == phi[s.site->mul(a, b)];
          }
        }
        found = found || ok;
      }
      o.detail += (o.detail.empty() ? "" : "; ") + s.name + ": " + num(lat.size())
                  + " subterminals" + (found ? ", star matches" : ", NO MATCH");
      o.pass = o.pass && found;
    }
    return o;
  }

  Outcome sieve_witness(std::vector<CorpusSite> const& corpus) {
    Outcome o;
    auto    q    = build_standard(StandardQuantale::lukasiewicz_chain, 3);
    auto    h    = q->index_of("h");
    bool    luk  = !is_mono(sieve_of(q, {h, {h, h}}).canonical);
    std::size_t localic = 0;
    for (auto const& s : corpus) {
      if (s.kind != "locale") {
        continue;
      }
      for (auto const& l : s.coverages) {
        for (Elem u = 0; u < s.site->size(); ++u) {
          for (auto const& legs : l.families(u)) {
            ++localic;
            if (!is_mono(sieve_of(s.site, {u, legs}).canonical)) {
              o.pass = false;
              o.detail += s.name + " " + l.describe(CoverFamily{u, legs}) + " not mono; ";
            }
          }
        }
      }
    }
    o.pass = o.pass && luk;
    o.detail += std::string("{h, h} -> h on luk3 ") + (luk ? "is not mono" : "IS MONO") + "; "
                + num(localic) + " localic sieves mono";
    return o;
  }

  Outcome coherence() {
    Outcome o;
    auto    fs = verify_appendix_suite(FinSetCategory(3));
    if (!fs.ok()) {
      o.pass = false;
      o.detail += "finset(3) fails; ";
    }
    std::size_t thin = 0;
    for (auto const& q : bundled_quantales()) {
      ++thin;
      if (!verify_appendix_suite(ThinCategory(q)).ok()) {
        o.pass = false;
        o.detail += q->name() + " fails; ";
      }
    }
    ProductCategory<FinSetCategory, ThinCategory> pc(
        FinSetCategory(2), ThinCategory(build_standard(StandardQuantale::lukasiewicz_chain, 3)));
    if (!verify_appendix_suite(pc).ok()) {
      o.pass = false;
      o.detail += "product fails; ";
    }
    std::size_t detected = 0, mutations = 0;
    for (auto m : all_finset_mutations()) {
      ++mutations;
      if (!verify_appendix_suite(mutate(FinSetCategory(3), m)).ok()) {
        ++detected;
      } else {
        o.pass = false;
        o.detail += std::string(to_string(m)) + " undetected; ";
      }
    }
    std::size_t diagrams = 0;
    for (auto const& d : fs.diagrams) {
      diagrams += d.checked;
    }
    o.detail += "finset(3): " + num(fs.diagrams.size()) + " diagrams, " + num(diagrams)
                + " diagram instances; " + num(thin) + " thin instances; " + num(detected)
                + "/" + num(mutations) + " mutations detected";
    return o;
  }

  Outcome lopos_criterion(std::vector<CorpusSite> const& corpus) {
    Outcome                   o;
    std::vector<QuantaleSpec> specs;
    for (auto const& q : bundled_quantales()) {
      specs.push_back(q->to_spec());
    }
    for (auto const& s : corpus) {
      specs.push_back(s.site->to_spec());
    }
    specs.push_back(m3());
    std::size_t agree = 0;
    for (auto spec : specs) {
      spec.unit.reset();
      if (lopos_check(spec).quantale == validate_quantale(spec).ok()) {
        ++agree;
      } else {
        o.pass = false;
        o.detail += spec.name + " disagrees; ";
      }
    }
    auto c = lopos_check(m3());
    // The witness must be a pair of down-sets on which sup fails to
    // preserve the product, recomputed here without the library.
    auto const spec = m3();
    auto       ord  = oracle::close(5, spec.leq);
    auto       down = [&](std::vector<Elem> const& d) {
      for (auto x : d) {
        for (Elem y = 0; y < 5; ++y) {
          if (ord.le[y][x] && std::find(d.begin(), d.end(), y) == d.end()) {
            return false;
          }
        }
      }
      return true;
    };
    std::vector<std::size_t> prod;
    for (auto x : c.left) {
      for (auto y : c.right) {
        prod.push_back(spec.mul[x][y]);
      }
    }
    auto lhs     = oracle::sup(ord, prod);
    auto rhs     = spec.mul[oracle::sup(ord, c.left)][oracle::sup(ord, c.right)];
    bool witness = !c.quantale && down(c.left) && down(c.right) && lhs != rhs;
    o.pass       = o.pass && witness;
    auto show    = [&](std::vector<Elem> const& d) {
      std::string s = "{";
      for (auto x : d) {
        s += (s.size() > 1 ? "," : "") + spec.elements[x];
      }
      return s + "}";
    };
    o.detail += num(agree) + "/" + num(specs.size()) + " tables agree; M3 witness D="
                + show(c.left) + " E=" + show(c.right) + " sup(D*E)=" + spec.elements[lhs]
                + " supD*supE=" + spec.elements[rhs];
    return o;
  }

}  // namespace

int main(int argc, char** argv) {
  fs::path root = argc > 1 ? argv[1] : LOPOS_CORPUS_DIR;
  std::vector<CorpusSite> corpus;
  try {
    corpus = load_corpus(root);
  } catch (std::exception const& e) {
    std::printf("cannot load corpus from %s: %s\n", root.string().c_str(), e.what());
    return 1;
  }

  struct Criterion {
    int                      id;
    char const*              name;
    double                   limit;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {1, "quantale law suite", 1, quantale_laws},
      {2, "pretopology and prelopology agree on locales", 5, flavors_agree},
      {3, "both sheaf definitions agree", 30, [&] { return dual_definitions(corpus); }},
      {4, "shifted sheaves are sheaves", 10, [&] { return shifted_sheaves(corpus); }},
      {5, "sheafification soundness", 60, [&] { return sheafification(corpus); }},
      {6, "sheafification preserves the terminal", 5,
       [&] { return terminal_preservation(corpus); }},
      {7, "subterminal lattice and star", 60, [&] { return subterminals(corpus); }},
      {8, "non-mono sieve witness", 1, [&] { return sieve_witness(corpus); }},
      {9, "coherence lemmas", 120, coherence},
      {10, "down-set quantale criterion", 5, [&] { return lopos_criterion(corpus); }}};

  int failures = 0;
  for (auto const& c : criteria) {
    auto    start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (std::exception const& e) {
      out = {false, std::string("threw ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool   late = secs >= c.limit;
    bool   pass = out.pass && !late;
    failures += !pass;
    std::printf("criterion %2d %s  %7.3f s / %g s  %s: %s%s\n", c.id, pass ? "PASS" : "FAIL",
                secs, c.limit, c.name, out.detail.c_str(), late ? " [over time limit]" : "");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
