#include "lopos/sheaf.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "lopos/error.hpp"

namespace lopos {

  namespace {
    // Restriction from a leg to the overlap of two legs; on a thin site the
    // pseudo-pullback of u_i -> U and u_j -> U is u_i (x) u_j.
    Elem overlap(Quantale const& q, Elem a, Elem b) {
      auto w = q.mul(a, b);
      if (!q.leq(w, a) || !q.leq(w, b)) {
        LOPOS_THROW(NotSemicartesian, q.label(a) + " * " + q.label(b)
                                          + " is not below both factors");
      }
      return w;
    }

    std::size_t saturating_product(Presheaf const& f, Family const& legs) {
      std::size_t n = 1;
      for (auto u : legs) {
        auto k = f.at(u).size();
        if (k == 0) {
          return 0;
        }
        if (n > (std::size_t{1} << 40) / k) {
          return std::size_t{1} << 40;
        }
        n *= k;
      }
      return n;
    }

    // x in F(U) grouped by their restrictions to the legs.
    std::map<std::vector<std::size_t>, std::vector<std::size_t>>
    gluing_table(Presheaf const& f, CoverFamily const& cover) {
      std::map<std::vector<std::size_t>, std::vector<std::size_t>> out;
      for (std::size_t x = 0; x < f.at(cover.target).size(); ++x) {
        std::vector<std::size_t> key;
        for (auto u : cover.legs) {
          key.push_back(f.res(cover.target, u)(x));
        }
        out[key].push_back(x);
      }
      return out;
    }

    struct CoverOutcome {
      bool                      separated = true;
      bool                      glues     = true;
      std::size_t               families  = 0;
      std::vector<SheafWitness> witnesses;
    };

    void note(CoverOutcome& out, CoverFamily const& cover,
              std::vector<std::size_t> const& sections,
              std::vector<std::size_t> const& gluings, std::size_t cap) {
      ++out.families;
      if (gluings.size() == 1) {
        return;
      }
      if (gluings.empty()) {
        out.glues = false;
      } else {
        out.separated = false;
      }
      if (out.witnesses.size() < cap) {
        out.witnesses.push_back({{cover, sections}, gluings});
      }
    }

    // F(U) -> prod F(u_i) => prod F(u_i (x) u_j) built from finite sets.
    CoverOutcome literal_check(Presheaf const& f, CoverFamily const& cover,
                               std::size_t cap) {
      auto const& q    = *f.site();
      auto const& legs = cover.legs;
      FinSet                                prod({"()"});
      std::vector<std::vector<std::size_t>> tuples{{}};
      for (auto u : legs) {
        auto                                  p = product(prod, f.at(u));
        std::vector<std::vector<std::size_t>> next(p.object.size());
        for (std::size_t a = 0; a < prod.size(); ++a) {
          for (std::size_t b = 0; b < f.at(u).size(); ++b) {
            auto t = tuples[a];
            t.push_back(b);
            next[p.pair(a, b)] = std::move(t);
          }
        }
        prod   = p.object;
        tuples = std::move(next);
      }
      std::vector<bool> in_eq(prod.size(), true);
      for (std::size_t i = 0; i < legs.size(); ++i) {
        for (std::size_t j = i + 1; j < legs.size(); ++j) {
          auto                     w = overlap(q, legs[i], legs[j]);
          std::vector<std::size_t> pm(prod.size()), qm(prod.size());
          for (std::size_t t = 0; t < prod.size(); ++t) {
            pm[t] = f.res(legs[i], w)(tuples[t][i]);
            qm[t] = f.res(legs[j], w)(tuples[t][j]);
          }
          auto eq = equalizer(FinMap(prod, f.at(w), pm), FinMap(prod, f.at(w), qm));
          std::vector<bool> hit(prod.size(), false);
          for (std::size_t k = 0; k < eq.object.size(); ++k) {
            hit[eq.inclusion(k)] = true;
          }
          for (std::size_t t = 0; t < prod.size(); ++t) {
            in_eq[t] = in_eq[t] && hit[t];
          }
        }
      }
      std::map<std::vector<std::size_t>, std::size_t> index;
      for (std::size_t t = 0; t < tuples.size(); ++t) {
        index[tuples[t]] = t;
      }
      std::vector<std::vector<std::size_t>> preimages(prod.size());
      for (auto const& [key, xs] : gluing_table(f, cover)) {
        preimages[index.at(key)] = xs;
      }
      CoverOutcome out;
      for (std::size_t t = 0; t < prod.size(); ++t) {
        if (in_eq[t]) {
          note(out, cover, tuples[t], preimages[t], cap);
        } else {
          LOPOS_ASSERT(preimages[t].empty());
        }
      }
      return out;
    }

    CoverOutcome enumerate_check(Presheaf const& f, CoverFamily const& cover,
                                 std::size_t cap) {
      auto const& q     = *f.site();
      auto const& legs  = cover.legs;
      auto        table = gluing_table(f, cover);
      CoverOutcome             out;
      std::vector<std::size_t> sections(legs.size());
      std::vector<std::size_t> none;
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == legs.size()) {
          auto it = table.find(sections);
          note(out, cover, sections, it == table.end() ? none : it->second, cap);
          return;
        }
        for (std::size_t s = 0; s < f.at(legs[i]).size(); ++s) {
          bool ok = true;
          for (std::size_t j = 0; j < i && ok; ++j) {
            auto w = overlap(q, legs[i], legs[j]);
            ok = f.res(legs[i], w)(s) == f.res(legs[j], w)(sections[j]);
          }
          if (ok) {
            sections[i] = s;
            rec(i + 1);
          }
        }
      };
      rec(0);
      return out;
    }

    std::vector<CoverFamily> covers_in_order(Coverage const& l) {
      std::vector<CoverFamily> out;
      for (auto u : l.site()->ascending()) {
        for (auto const& fam : l.families(u)) {
          out.push_back({u, fam});
        }
      }
      std::stable_sort(out.begin(), out.end(), [](auto const& a, auto const& b) {
        return a.legs.size() < b.legs.size();
      });
      return out;
    }

    void require_site(Presheaf const& f, Coverage const& l) {
      if (!same_structure(*f.site(), *l.site())) {
        LOPOS_THROW(SiteMismatch, f.name() + " and coverage " + l.name()
                                      + " live on different sites");
      }
    }

    SheafReport run(Presheaf const& f, Coverage const& l,
                    SheafCheckOptions const& opts, std::string method,
                    std::function<CoverOutcome(CoverFamily const&)> const& one) {
      require_site(f, l);
      SheafReport r;
      r.method     = std::move(method);
      bool glues   = true;
      bool separat = true;
      for (auto const& cover : covers_in_order(l)) {
        auto out = one(cover);
        ++r.covers_checked;
        r.families_checked += out.families;
        glues   = glues && out.glues;
        separat = separat && out.separated;
        for (auto& w : out.witnesses) {
          if (r.witnesses.size() < opts.max_witnesses) {
            r.witnesses.push_back(std::move(w));
          }
        }
        if (opts.short_circuit && !separat) {
          break;
        }
      }
      r.verdict = !separat ? SheafVerdict::fails
                  : glues  ? SheafVerdict::sheaf
                           : SheafVerdict::separated_only;
      return r;
    }

    CoverOutcome equalizer_outcome(Presheaf const& f, CoverFamily const& cover,
                                   SheafCheckOptions const& opts) {
      bool literal = opts.strategy == EqualizerStrategy::literal
                     || (opts.strategy == EqualizerStrategy::automatic
                         && saturating_product(f, cover.legs) <= opts.literal_threshold);
      return literal ? literal_check(f, cover, opts.max_witnesses)
                     : enumerate_check(f, cover, opts.max_witnesses);
    }
  }  // namespace

  bool is_compatible(Presheaf const& f, CoverFamily const& cover,
                     std::vector<std::size_t> const& sections) {
    auto const& q    = *f.site();
    auto const& legs = cover.legs;
    if (sections.size() != legs.size()) {
      LOPOS_THROW(SectionOutOfSet, "expected " + std::to_string(legs.size())
                                       + " sections, got "
                                       + std::to_string(sections.size()));
    }
    for (std::size_t i = 0; i < legs.size(); ++i) {
      if (sections[i] >= f.at(legs[i]).size()) {
        LOPOS_THROW(SectionOutOfSet, "section " + std::to_string(i)
                                         + " is not in F(" + q.label(legs[i]) + ")");
      }
    }
    for (std::size_t i = 0; i < legs.size(); ++i) {
      for (std::size_t j = i + 1; j < legs.size(); ++j) {
        auto w = overlap(q, legs[i], legs[j]);
        if (f.res(legs[i], w)(sections[i]) != f.res(legs[j], w)(sections[j])) {
          return false;
        }
      }
    }
    return true;
  }

  std::string_view to_string(GlueKind k) noexcept {
    switch (k) {
      case GlueKind::unique: return "unique";
      case GlueKind::none: return "none";
      case GlueKind::multiple: return "multiple";
    }
    return "?";
  }

  GlueResult glue(Presheaf const& f, CoverFamily const& cover,
                  std::vector<std::size_t> const& sections) {
    if (!is_compatible(f, cover, sections)) {
      LOPOS_THROW(NotCompatible, describe(f, {cover, sections}));
    }
    GlueResult r;
    for (std::size_t x = 0; x < f.at(cover.target).size(); ++x) {
      bool ok = true;
      for (std::size_t i = 0; i < cover.legs.size() && ok; ++i) {
        ok = f.res(cover.target, cover.legs[i])(x) == sections[i];
      }
      if (ok) {
        r.gluings.push_back(x);
      }
    }
    r.kind = r.gluings.empty()       ? GlueKind::none
             : r.gluings.size() == 1 ? GlueKind::unique
                                     : GlueKind::multiple;
    return r;
  }

  std::string_view to_string(SheafVerdict v) noexcept {
    switch (v) {
      case SheafVerdict::sheaf: return "sheaf";
      case SheafVerdict::separated_only: return "separated_only";
      case SheafVerdict::fails: return "fails";
    }
    return "?";
  }

  SheafReport check_cover(Presheaf const& f, CoverFamily const& cover,
                          SheafCheckOptions const& opts) {
    auto        out = equalizer_outcome(f, cover, opts);
    SheafReport r;
    r.method           = "equalizer";
    r.covers_checked   = 1;
    r.families_checked = out.families;
    r.witnesses        = std::move(out.witnesses);
    r.verdict          = !out.separated ? SheafVerdict::fails
                         : out.glues    ? SheafVerdict::sheaf
                                        : SheafVerdict::separated_only;
    return r;
  }

  SheafReport check_sheaf_equalizer(Presheaf const& f, Coverage const& l,
                                    SheafCheckOptions const& opts) {
    return run(f, l, opts, "equalizer", [&](CoverFamily const& cover) {
      return equalizer_outcome(f, cover, opts);
    });
  }

  SheafReport check_sheaf_orthogonal(Presheaf const& f, Coverage const& l,
                                     SheafCheckOptions const& opts) {
    auto const& site = l.site();
    return run(f, l, opts, "orthogonal", [&](CoverFamily const& cover) {
      auto sieve   = sieve_of(site, cover);
      auto target  = yoneda(site, cover.target);
      auto from_s  = hom_presheaves(sieve.presheaf, f);
      auto from_y  = hom_presheaves(target, f);
      std::vector<std::vector<std::size_t>> hits(from_s.size());
      for (auto const& phi : from_y) {
        auto pre = compose(phi, sieve.canonical);
        auto it  = std::find(from_s.begin(), from_s.end(), pre);
        LOPOS_ASSERT(it != from_s.end());
        hits[static_cast<std::size_t>(it - from_s.begin())].push_back(
            phi[cover.target](0));
      }
      CoverOutcome out;
      for (std::size_t k = 0; k < from_s.size(); ++k) {
        std::vector<std::size_t> sections;
        for (std::size_t i = 0; i < cover.legs.size(); ++i) {
          auto u = cover.legs[i];
          sections.push_back(from_s[k][u](sieve.legs[i][u](0)));
        }
        note(out, cover, sections, hits[k], opts.max_witnesses);
      }
      return out;
    });
  }

  bool check_separated(Presheaf const& f, Coverage const& l) {
    return check_sheaf_equalizer(f, l).verdict != SheafVerdict::fails;
  }

  Presheaf shift_presheaf(Presheaf const& f, Elem u) {
    auto const&     q = *f.site();
    PresheafBuilder b(f.site(), f.name() + "(" + q.label(u) + "*-)");
    for (Elem v = 0; v < q.size(); ++v) {
      b.at(v, f.at(q.mul(u, v)));
    }
    for (Elem v = 0; v < q.size(); ++v) {
      for (Elem c : q.lower_covers(v)) {
        b.restrict(v, c, f.res(q.mul(u, v), q.mul(u, c)));
      }
    }
    return b.build();
  }

  Presheaf product_sheaf(Presheaf const& f, Presheaf const& g,
                         QuantalePtr const& product_site) {
    return product_presheaf(f, g, product_site);
  }

  namespace {
    struct PlusRaw {
      Family                   cover;
      std::vector<std::size_t> sections;
    };

    std::string plus_label(Presheaf const& f, PlusRaw const& r) {
      std::string s = "[";
      for (std::size_t i = 0; i < r.cover.size(); ++i) {
        s += (i ? "," : "") + describe_section(f, r.cover[i], r.sections[i]);
      }
      return s + "]";
    }
  }  // namespace

  Presheaf plus_construction(Presheaf const& f, Coverage const& l) {
    require_site(f, l);
    auto const& q = *f.site();
    if (!q.mul_is_meet()) {
      LOPOS_THROW(NotLocale, q.name() + " is not a locale");
    }
    auto const n = q.size();
    std::vector<std::set<Family>> covers(n);
    for (Elem u = 0; u < n; ++u) {
      for (auto fam : l.families(u)) {
        fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
        covers[u].insert(fam);
      }
    }
    // a ~ b in F(w) when they agree on some cover of w.
    std::vector<DisjointSets> local;
    for (Elem w = 0; w < n; ++w) {
      DisjointSets ds(f.at(w).size());
      for (auto const& t : covers[w]) {
        for (std::size_t a = 0; a < f.at(w).size(); ++a) {
          for (std::size_t b = a + 1; b < f.at(w).size(); ++b) {
            bool agree = std::all_of(t.begin(), t.end(), [&](Elem v) {
              return f.res(w, v)(a) == f.res(w, v)(b);
            });
            if (agree) {
              ds.unite(a, b);
            }
          }
        }
      }
      local.push_back(std::move(ds));
    }
    std::vector<std::vector<PlusRaw>>                              raw(n);
    std::vector<std::map<std::pair<Family, std::vector<std::size_t>>, std::size_t>> where(n);
    std::vector<Coequalizer>                                       classes(n);
    for (Elem u = 0; u < n; ++u) {
      for (auto const& cover : covers[u]) {
        std::vector<std::size_t>         sections(cover.size());
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
          if (i == cover.size()) {
            raw[u].push_back({cover, sections});
            return;
          }
          for (std::size_t s = 0; s < f.at(cover[i]).size(); ++s) {
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) {
              auto w = q.meet(cover[i], cover[j]);
              ok = f.res(cover[i], w)(s) == f.res(cover[j], w)(sections[j]);
            }
            if (ok) {
              sections[i] = s;
              rec(i + 1);
            }
          }
        };
        rec(0);
      }
      std::vector<std::string> labels;
      for (auto const& r : raw[u]) {
        labels.push_back(plus_label(f, r));
      }
      FinSet set(labels);
      // Keep raw in label order so indices line up with the set.
      std::vector<PlusRaw> sorted(raw[u].size());
      for (std::size_t k = 0; k < raw[u].size(); ++k) {
        sorted[set.index_of(labels[k])] = raw[u][k];
      }
      raw[u] = std::move(sorted);
      for (std::size_t k = 0; k < raw[u].size(); ++k) {
        where[u][{raw[u][k].cover, raw[u][k].sections}] = k;
      }
      std::vector<std::pair<std::size_t, std::size_t>> same;
      for (std::size_t a = 0; a < raw[u].size(); ++a) {
        for (std::size_t b = a + 1; b < raw[u].size(); ++b) {
          auto const& ra    = raw[u][a];
          auto const& rb    = raw[u][b];
          bool        agree = true;
          for (std::size_t i = 0; i < ra.cover.size() && agree; ++i) {
            for (std::size_t j = 0; j < rb.cover.size() && agree; ++j) {
              auto w = q.meet(ra.cover[i], rb.cover[j]);
              agree  = local[w].find(f.res(ra.cover[i], w)(ra.sections[i]))
                      == local[w].find(f.res(rb.cover[j], w)(rb.sections[j]));
            }
          }
          if (agree) {
            same.emplace_back(a, b);
          }
        }
      }
      classes[u] = quotient(set, same);
    }
    auto restrict_raw = [&](PlusRaw const& r, Elem v) {
      std::map<Elem, std::size_t> legs;
      for (std::size_t i = 0; i < r.cover.size(); ++i) {
        auto m = q.meet(r.cover[i], v);
        legs.emplace(m, f.res(r.cover[i], m)(r.sections[i]));
      }
      PlusRaw out;
      for (auto [m, s] : legs) {
        out.cover.push_back(m);
        out.sections.push_back(s);
      }
      return out;
    };
    PresheafBuilder b(f.site(), f.name() + "+");
    for (Elem u = 0; u < n; ++u) {
      b.at(u, classes[u].object);
    }
    for (Elem u = 0; u < n; ++u) {
      for (Elem c : q.lower_covers(u)) {
        std::vector<std::optional<std::size_t>> map(classes[u].object.size());
        for (std::size_t k = 0; k < raw[u].size(); ++k) {
          auto r  = restrict_raw(raw[u][k], c);
          auto it = where[c].find({r.cover, r.sections});
          if (it == where[c].end()) {
            LOPOS_THROW(UnverifiedInput, "restricting a cover of " + q.label(u)
                                             + " to " + q.label(c)
                                             + " leaves the coverage");
          }
          auto cls = classes[c].quotient(it->second);
          auto& m  = map[classes[u].quotient(k)];
          LOPOS_ASSERT(!m || *m == cls);
          m = cls;
        }
        std::vector<std::size_t> flat;
        for (auto m : map) {
          flat.push_back(*m);
        }
        b.restrict(u, c, std::move(flat));
      }
    }
    return b.build();
  }

  std::string describe(Presheaf const& f, CompatibleFamily const& family) {
    std::string s = "{";
    for (std::size_t i = 0; i < family.sections.size(); ++i) {
      s += (i ? ", " : "")
           + describe_section(f, family.cover.legs[i], family.sections[i]);
    }
    return s + "} over " + f.site()->label(family.cover.target);
  }

}  // namespace lopos
