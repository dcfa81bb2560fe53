#include "lopos/cli/cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "lopos/error.hpp"
#include "lopos/moncat.hpp"
#include "lopos/reflect.hpp"
#include "lopos/sheaf.hpp"

namespace lopos::cli {

  using io::json;

  ////////////////////////////////////////////////////////////////////////
  // RunReport
  ////////////////////////////////////////////////////////////////////////

  void RunReport::add_input(std::string const& role, io::Document const& doc) {
    inputs.push_back(
        {{"role", role}, {"file", doc.origin}, {"fnv1a64", io::hash_hex(doc.bytes)}});
  }

  void RunReport::check(std::string name, bool ok, json witness) {
    verdicts.push_back({std::move(name), ok, std::move(witness)});
  }

  bool RunReport::all_pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(),
                       [](Verdict const& v) { return v.pass; });
  }

  json RunReport::to_json() const {
    json v = json::array();
    for (auto const& x : verdicts) {
      json entry = {{"check", x.check}, {"pass", x.pass}};
      if (!x.witness.is_null()) {
        entry["witness"] = x.witness;
      }
      v.push_back(std::move(entry));
    }
    json j = {{"schema", kSchemaVersion},   {"command", command},
              {"inputs", inputs},           {"configuration", configuration},
              {"verdicts", v},              {"result", result},
              {"exit_code", exit_code}};
    if (!error.empty()) {
      j["error"] = error;
    }
    return j;
  }

  std::string RunReport::dump() const {
    return to_json().dump(2) + "\n";
  }

  std::string RunReport::summary() const {
    std::ostringstream s;
    s << command;
    for (auto const& in : inputs) {
      s << " " << in["file"].get<std::string>();
    }
    s << ": "
      << (exit_code == ExitCode::pass            ? "PASS"
          : exit_code == ExitCode::failed        ? "FAIL"
          : exit_code == ExitCode::not_converged ? "NOT CONVERGED"
                                                 : "INVALID INPUT")
      << "\n";
    for (auto const& v : verdicts) {
      s << "  [" << (v.pass ? "pass" : "FAIL") << "] " << v.check;
      if (!v.pass && !v.witness.is_null()) {
        auto w = v.witness.dump();
        s << ": " << (w.size() > 160 ? w.substr(0, 157) + "..." : w);
      }
      s << "\n";
    }
    if (!error.empty()) {
      s << "  error: " << error << "\n";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", seconds);
    s << "  time: " << buf << " s\n";
    return s.str();
  }

  namespace {

    struct Options {
      std::string json_path;
      std::string truncation_note;
      unsigned    seed = 0;
      unsigned    jobs = 1;

      std::string site, coverage, presheaf, file, out, flavor, method = "both";
      std::string instance = "finset", mutation;
      std::size_t max_iter = kDefaultMaxIter, battery = 0, size_bound = 3;
    };

    json labels(Quantale const& q, std::vector<Elem> const& xs) {
      json out = json::array();
      for (auto x : xs) {
        out.push_back(q.label(x));
      }
      return out;
    }

    json labels(QuantaleSpec const& s, std::vector<Elem> const& xs) {
      json out = json::array();
      for (auto x : xs) {
        out.push_back(x < s.elements.size() ? s.elements[x] : std::to_string(x));
      }
      return out;
    }

    json mask_json(Presheaf const& f, SectionMask const& m) {
      json out = json::object();
      for (Elem u = 0; u < m.size(); ++u) {
        json s = json::array();
        for (std::size_t i = 0; i < m[u].size(); ++i) {
          if (m[u][i]) {
            s.push_back(f.at(u).label(i));
          }
        }
        out[f.site()->label(u)] = s;
      }
      return out;
    }

    json sheaf_witnesses(Presheaf const& f, Coverage const& l, SheafReport const& r) {
      json out = json::array();
      for (auto const& w : r.witnesses) {
        json gl = json::array();
        for (auto g : w.gluings) {
          gl.push_back(f.at(w.family.cover.target).label(g));
        }
        json sections = json::array();
        for (std::size_t i = 0; i < w.family.sections.size(); ++i) {
          sections.push_back(f.at(w.family.cover.legs[i]).label(w.family.sections[i]));
        }
        out.push_back({{"cover", l.describe(w.family.cover)},
                       {"sections", sections},
                       {"gluings", gl}});
      }
      return {{"verdict", std::string(to_string(r.verdict))}, {"families", out}};
    }

    json sizes(Presheaf const& f) {
      json out = json::object();
      for (Elem u = 0; u < f.site()->size(); ++u) {
        out[f.site()->label(u)] = f.at(u).size();
      }
      return out;
    }

    struct Loaded {
      QuantalePtr             site;
      std::optional<Coverage> coverage;
      std::optional<Presheaf> presheaf;
      json                    coverage_json;
    };

    Loaded load(RunReport& rep, Options const& o, bool want_presheaf) {
      Loaded out;
      auto   site = io::read_document(o.site);
      rep.add_input("site", site);
      out.site = io::site_from_json(site.value);
      auto cov = io::read_document(o.coverage);
      rep.add_input("coverage", cov);
      out.coverage_json = cov.value;
      out.coverage.emplace(io::coverage_from_json(out.site, cov.value));
      if (want_presheaf) {
        auto p = io::read_document(o.presheaf);
        rep.add_input("presheaf", p);
        out.presheaf.emplace(io::presheaf_from_json(out.site, p.value));
      }
      return out;
    }

    ////////////////////////////////////////////////////////////////////
    // Commands
    ////////////////////////////////////////////////////////////////////

    void check_quantale(RunReport& rep, Options const& o) {
      auto doc = io::read_document(o.file);
      rep.add_input("quantale", doc);
      auto spec = io::quantale_spec_from_json(doc.value);
      auto v    = validate_quantale(spec);
      json vs   = json::array();
      for (auto const& x : v.violations) {
        vs.push_back({{"kind", std::string(to_string(x.kind))},
                      {"witness", labels(spec, x.witness)},
                      {"subset", labels(spec, x.subset)},
                      {"count", x.count},
                      {"message", x.message}});
      }
      rep.check("quantale-laws", v.ok(), v.ok() ? json(nullptr) : vs);
      if (!v.ok()) {
        return;
      }
      auto const& q = *v.quantale;
      auto        f = classify_quantale(q);
      rep.result["size"]  = q.size();
      rep.result["flags"] = {{"commutative", f.commutative},   {"idempotent", f.idempotent},
                             {"right_sided", f.right_sided},   {"semicartesian", f.semicartesian},
                             {"integral", f.integral},         {"unital", f.unital},
                             {"locale", f.locale}};
      if (q.unit()) {
        rep.result["unit"] = q.label(*q.unit());
      }
      std::optional<std::pair<Elem, Elem>> above_meet;
      for (Elem a = 0; a < q.size() && !above_meet; ++a) {
        for (Elem b = 0; b < q.size() && !above_meet; ++b) {
          if (!q.leq(q.mul(a, b), q.meet(a, b))) {
            above_meet.emplace(a, b);
          }
        }
      }
      rep.check("semicartesian-iff-below-meet", f.semicartesian == !above_meet,
                above_meet ? labels(q, {above_meet->first, above_meet->second}) : json(nullptr));
      if (f.unital) {
        rep.check("integral-iff-semicartesian", f.integral == f.semicartesian);
      }
      if (f.locale) {
        rep.check("locale-mul-is-meet", q.mul_is_meet());
      }
    }

    void check_prelopology(RunReport& rep, Options const& o) {
      auto in     = load(rep, o, false);
      auto flavor = CoverageFlavor::prelopology;
      if (!o.flavor.empty()) {
        auto f = io::flavor_from_string(o.flavor);
        if (!f) {
          LOPOS_THROW(ParseError, "unknown flavor \"" + o.flavor + "\"");
        }
        flavor = *f;
      } else if (auto f = io::declared_flavor(in.coverage_json)) {
        flavor = *f;
      }
      rep.configuration["flavor"] = std::string(to_string(flavor));
      auto r = check_coverage(*in.coverage, flavor);
      rep.result["families"]          = in.coverage->total_families();
      rep.result["instances_checked"] = r.instances_checked;
      for (int axiom : r.axioms_checked) {
        json ws = json::array();
        for (auto const& v : r.violations) {
          if (v.axiom == axiom) {
            ws.push_back({{"family", in.coverage->describe(v.family)}, {"detail", v.witness}});
          }
        }
        auto name = "axiom " + std::to_string(axiom) + " ("
                    + std::string(axiom_name(flavor, axiom)) + ")";
        bool ok   = r.failures_of(axiom) == 0;
        rep.check(name, ok,
                  ok ? json(nullptr)
                     : json{{"axiom", axiom}, {"failures", r.failures_of(axiom)}, {"first", ws}});
      }
    }

    void check_sheaf(RunReport& rep, Options const& o) {
      if (o.method != "equalizer" && o.method != "orthogonal" && o.method != "both") {
        LOPOS_THROW(ParseError, "unknown method \"" + o.method + "\"");
      }
      rep.configuration["method"] = o.method;
      auto in = load(rep, o, true);
      auto const& f = *in.presheaf;
      auto const& l = *in.coverage;
      std::optional<SheafReport> eq, orth;
      if (o.method != "orthogonal") {
        eq = check_sheaf_equalizer(f, l);
        rep.check("sheaf (equalizer)", eq->is_sheaf(),
                  eq->is_sheaf() ? json(nullptr) : sheaf_witnesses(f, l, *eq));
        rep.result["equalizer"] = std::string(to_string(eq->verdict));
      }
      if (o.method != "equalizer") {
        orth = check_sheaf_orthogonal(f, l);
        rep.check("sheaf (orthogonal)", orth->is_sheaf(),
                  orth->is_sheaf() ? json(nullptr) : sheaf_witnesses(f, l, *orth));
        rep.result["orthogonal"] = std::string(to_string(orth->verdict));
      }
      if (eq && orth) {
        bool agree = eq->is_sheaf() == orth->is_sheaf();
        rep.check("definitions agree", agree, agree ? json(nullptr) : json("BUG"));
      }
      rep.result["sizes"] = sizes(f);
    }

    void sheafify_cmd(RunReport& rep, Options const& o) {
      rep.configuration["max_iter"] = o.max_iter;
      rep.configuration["battery"]  = o.battery;
      auto in = load(rep, o, true);
      auto const& p = *in.presheaf;
      auto const& l = *in.coverage;
      auto r = sheafify(p, l, o.max_iter);
      rep.result["iterations"] = r.iterations;
      rep.result["diagnostic"] = r.diagnostic;
      rep.check("converged", r.converged, r.converged ? json(nullptr) : json(r.diagnostic));
      if (!r.converged) {
        rep.exit_code = ExitCode::not_converged;
        return;
      }
      rep.result["sheaf"] = io::to_json(r.sheaf);
      json unit           = json::object();
      for (Elem u = 0; u < p.site()->size(); ++u) {
        json m = json::object();
        for (std::size_t s = 0; s < p.at(u).size(); ++s) {
          m[p.at(u).label(s)] = r.sheaf.at(u).label(r.unit[u](s));
        }
        unit[p.site()->label(u)] = m;
      }
      rep.result["unit"] = unit;
      auto eq   = check_sheaf_equalizer(r.sheaf, l);
      auto orth = check_sheaf_orthogonal(r.sheaf, l);
      rep.check("output is a sheaf (equalizer)", eq.is_sheaf(),
                eq.is_sheaf() ? json(nullptr) : sheaf_witnesses(r.sheaf, l, eq));
      rep.check("output is a sheaf (orthogonal)", orth.is_sheaf(),
                orth.is_sheaf() ? json(nullptr) : sheaf_witnesses(r.sheaf, l, orth));
      if (o.battery > 0) {
        auto battery = sheaf_battery(l, o.battery);
        auto cert    = certify_reflection(p, r, l, battery);
        rep.result["battery_size"] = cert.battery_size;
        rep.check("universal property against the battery", cert.ok(),
                  cert.ok() ? json(nullptr) : json(cert.failures));
      }
      if (p.site()->mul_is_meet()) {
        auto plus2 = plus_construction(plus_construction(p, l), l);
        bool match = find_isomorphism(r.sheaf, plus2).has_value();
        rep.result["oracle_match"] = match;
        rep.check("matches the plus construction applied twice", match,
                  match ? json(nullptr) : json{{"plus_plus", sizes(plus2)}});
      }
      if (!o.out.empty()) {
        std::ofstream file(o.out, std::ios::binary);
        if (!file) {
          LOPOS_THROW(ParseError, o.out + ": cannot write");
        }
        file << io::to_json(r.sheaf).dump(2) << "\n";
      }
    }

    void sub_cmd(RunReport& rep, Options const& o) {
      auto in = load(rep, o, !o.presheaf.empty());
      auto f  = in.presheaf ? *in.presheaf : terminal_presheaf(in.site);
      auto const& l = *in.coverage;
      auto eq       = check_sheaf_equalizer(f, l);
      rep.check("input is a sheaf", eq.is_sheaf(),
                eq.is_sheaf() ? json(nullptr) : sheaf_witnesses(f, l, eq));
      if (!eq.is_sheaf()) {
        return;
      }
      auto lat   = subsheaf_lattice(f, l);
      auto table = star_table(lat, l);
      auto const n = lat.size();
      json elems   = json::array();
      for (auto const& m : lat.elements) {
        elems.push_back(mask_json(f, m));
      }
      json leq = json::array();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i != j && lat.leq[i][j]) {
            leq.push_back({i, j});
          }
        }
      }
      rep.result["size"]     = n;
      rep.result["elements"] = elems;
      rep.result["leq"]      = leq;
      rep.result["meet"]     = lat.meet;
      rep.result["join"]     = lat.join;
      rep.result["star"]     = table;
      rep.result["bottom"]   = lat.bottom;
      rep.result["top"]      = lat.top;
      std::optional<json> assoc, comm;
      for (std::size_t a = 0; a < n && !assoc; ++a) {
        for (std::size_t b = 0; b < n && !assoc; ++b) {
          for (std::size_t c = 0; c < n && !assoc; ++c) {
            if (table[table[a][b]][c] != table[a][table[b][c]]) {
              assoc = json{a, b, c};
            }
          }
          if (!comm && table[a][b] != table[b][a]) {
            comm = json{a, b};
          }
        }
      }
      rep.check("star is associative", !assoc, assoc.value_or(nullptr));
      rep.result["star_commutative"] = !comm;
    }

    void verify_appendix(RunReport& rep, Options const& o) {
      rep.configuration["instance"]   = o.instance;
      rep.configuration["size_bound"] = o.size_bound;
      if (!o.mutation.empty()) {
        rep.configuration["mutation"] = o.mutation;
      }
      CoherenceReport r;
      if (o.instance == "finset") {
        FinSetCategory fs(o.size_bound);
        if (o.mutation.empty()) {
          r = verify_appendix_suite(fs);
        } else {
          std::optional<FinSetMutation> which;
          for (auto m : all_finset_mutations()) {
            if (to_string(m) == o.mutation) {
              which = m;
            }
          }
          if (!which) {
            LOPOS_THROW(ParseError, "unknown mutation \"" + o.mutation + "\"");
          }
          r = verify_appendix_suite(mutate(fs, *which));
        }
      } else if (!o.mutation.empty()) {
        LOPOS_THROW(ParseError, "mutations apply to the finset instance only");
      } else if (o.instance == "product") {
        ProductCategory<FinSetCategory, ThinCategory> pc(FinSetCategory(o.size_bound),
                                                         ThinCategory(*io::site_alias("luk3")));
        r = verify_appendix_suite(pc);
      } else if (o.instance.rfind("quantale:", 0) == 0) {
        auto name = o.instance.substr(9);
        auto q    = io::site_alias(name);
        if (!q) {
          auto doc = io::read_document(name);
          rep.add_input("site", doc);
          q = io::site_from_json(doc.value);
        }
        r = verify_appendix_suite(ThinCategory(*q));
      } else {
        LOPOS_THROW(ParseError, "unknown instance \"" + o.instance + "\"");
      }
      rep.result["instance"] = r.instance;
      for (auto const& d : r.diagrams) {
        json w = nullptr;
        if (d.failed) {
          w = {{"failed", d.failed}, {"checked", d.checked}, {"first", d.first_witness}};
        }
        rep.check(d.name + (d.skipped ? " (skipped)" : ""), d.failed == 0, w);
      }
    }

    void lopos_check_cmd(RunReport& rep, Options const& o) {
      auto doc = io::read_document(o.file);
      rep.add_input("quantale", doc);
      auto spec = io::quantale_spec_from_json(doc.value);
      spec.unit.reset();
      LoposCertificate c;
      try {
        c = lopos_check(spec);
      } catch (Error const& e) {
        if (e.kind() != ErrorKind::NotAPoset && e.kind() != ErrorKind::NotComplete
            && e.kind() != ErrorKind::MulNotAssociative) {
          throw;
        }
        rep.check("complete poset with an associative multiplication", false, e.what());
        return;
      }
      rep.result["pairs_checked"] = c.pairs_checked;
      json w                      = nullptr;
      if (!c.quantale) {
        w = {{"D", labels(spec, c.left)},
             {"E", labels(spec, c.right)},
             {"sup(D*E)", spec.elements[c.lhs]},
             {"sup D * sup E", spec.elements[c.rhs]}};
      }
      rep.check("sup preserves the down-set product", c.quantale, w);
      bool agree = validate_quantale(spec).ok() == c.quantale;
      rep.check("agrees with the direct law check", agree, agree ? json(nullptr) : json("BUG"));
    }

    int finish(RunReport& rep, Options const& o, std::ostream& out, std::ostream& err) {
      if (rep.exit_code == ExitCode::pass && !rep.all_pass()) {
        rep.exit_code = ExitCode::failed;
      }
      out << rep.summary();
      if (!o.json_path.empty()) {
        std::ofstream file(o.json_path, std::ios::binary);
        if (!file) {
          err << "cannot write " << o.json_path << "\n";
          return ExitCode::invalid_input;
        }
        file << rep.dump();
      }
      return rep.exit_code;
    }

  }  // namespace

  int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-model checks for sheaves on quantales", "lopos"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--json", o.json_path, "Write the run report as JSON");
    app.add_option("--seed", o.seed, "Enumeration seed (verdicts do not depend on it)");
    app.add_option("--jobs", o.jobs, "Worker cap")->check(CLI::Range(1u, 256u));
    app.add_option("--truncation-note", o.truncation_note,
                   "Recorded in the report when a site truncates an infinite quantale");

    using Body = std::function<void(RunReport&, Options const&)>;
    std::vector<std::pair<CLI::App*, Body>> commands;
    auto sub = [&](char const* name, char const* help, Body body) {
      auto* c = app.add_subcommand(name, help);
      commands.emplace_back(c, std::move(body));
      return c;
    };

    auto* cq = sub("check-quantale", "Validate the quantale laws and classify", check_quantale);
    cq->add_option("file", o.file)->required();

    auto* cp = sub("check-prelopology", "Check the covering axioms", check_prelopology);
    cp->add_option("site", o.site)->required();
    cp->add_option("coverage", o.coverage)->required();
    cp->add_option("--flavor", o.flavor, "weak, plain, strong or pretopology");

    auto* cs = sub("check-sheaf", "Check the sheaf condition", check_sheaf);
    cs->add_option("site", o.site)->required();
    cs->add_option("coverage", o.coverage)->required();
    cs->add_option("presheaf", o.presheaf)->required();
    cs->add_option("--method", o.method, "equalizer, orthogonal or both");

    auto* sh = sub("sheafify", "Sheafify a presheaf", sheafify_cmd);
    sh->add_option("site", o.site)->required();
    sh->add_option("coverage", o.coverage)->required();
    sh->add_option("presheaf", o.presheaf)->required();
    sh->add_option("--max-iter", o.max_iter);
    sh->add_option("--certify-battery", o.battery,
                   "Check the universal property against all sheaves of this size");
    sh->add_option("--out", o.out, "Write the sheaf as a presheaf spec");

    auto* sb = sub("sub", "Subsheaf lattice and star table", sub_cmd);
    sb->add_option("site", o.site)->required();
    sb->add_option("coverage", o.coverage)->required();
    sb->add_option("presheaf", o.presheaf, "Defaults to the terminal presheaf");

    auto* va = sub("verify-appendix", "Check the coherence lemmas", verify_appendix);
    va->add_option("--instance", o.instance, "finset, product or quantale:NAME");
    va->add_option("--size-bound", o.size_bound);
    va->add_option("--mutation", o.mutation, "Break the finset instance");

    auto* lc = sub("lopos-check", "Down-set criterion for a quantale", lopos_check_cmd);
    lc->add_option("file", o.file)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (CLI::ParseError const& e) {
      std::ostringstream help_out, help_err;
      auto               code = app.exit(e, help_out, help_err);
      out << help_out.str();
      err << help_err.str();
      return code == 0 ? ExitCode::pass : ExitCode::invalid_input;
    }

    for (auto const& [cmd, body] : commands) {
      if (!cmd->parsed()) {
        continue;
      }
      RunReport rep;
      rep.command = cmd->get_name();
      rep.configuration["seed"] = o.seed;
      rep.configuration["jobs"] = o.jobs;
      if (!o.truncation_note.empty()) {
        rep.configuration["truncation_note"] = o.truncation_note;
      }
      auto start = std::chrono::steady_clock::now();
      try {
        body(rep, o);
      } catch (Error const& e) {
        rep.error     = e.what();
        rep.exit_code = e.kind() == ErrorKind::NotConverged ? ExitCode::not_converged
                        : e.kind() == ErrorKind::Internal   ? ExitCode::failed
                                                            : ExitCode::invalid_input;
      } catch (std::exception const& e) {
        rep.error     = std::string("internal: ") + e.what();
        rep.exit_code = ExitCode::failed;
      }
      rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count();
      return finish(rep, o, out, err);
    }
    return ExitCode::invalid_input;
  }

}  // namespace lopos::cli
