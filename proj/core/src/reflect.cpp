#include "lopos/reflect.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>

#include "lopos/error.hpp"

namespace lopos {

  namespace {
    void require_site(Presheaf const& f, Coverage const& l) {
      if (!same_structure(*f.site(), *l.site())) {
        LOPOS_THROW(SiteMismatch, f.name() + " and coverage " + l.name()
                                      + " live on different sites");
      }
    }

    std::vector<Elem> descending(Quantale const& q) {
      auto order = q.ascending();
      std::reverse(order.begin(), order.end());
      return order;
    }

    // Calls visit with every tuple of leg sections that agrees pairwise on
    // overlaps. `allowed(u, s)` filters the candidate sections.
    void for_each_compatible(
        Quantale const& q, Family const& legs,
        std::function<std::size_t(Elem)> const&                       size,
        std::function<std::size_t(Elem, Elem, std::size_t)> const&    res,
        std::function<bool(Elem, std::size_t)> const&                 allowed,
        std::function<void(std::vector<std::size_t> const&)> const&   visit) {
      std::vector<std::size_t>         t(legs.size());
      std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == legs.size()) {
          visit(t);
          return;
        }
        for (std::size_t s = 0; s < size(legs[i]); ++s) {
          if (!allowed(legs[i], s)) {
            continue;
          }
          bool ok = true;
          for (std::size_t j = 0; j < i && ok; ++j) {
            auto w = q.mul(legs[i], legs[j]);
            ok     = res(legs[i], w, s) == res(legs[j], w, t[j]);
          }
          if (ok) {
            t[i] = s;
            rec(i + 1);
          }
        }
      };
      rec(0);
    }

    struct Defects {
      std::vector<SheafWitness> missing;
      std::vector<SheafWitness> repeated;

      bool empty() const noexcept {
        return missing.empty() && repeated.empty();
      }
    };

    Defects find_defects(Presheaf const& p, Coverage const& l) {
      auto const&       q = *p.site();
      Defects           d;
      SheafCheckOptions all;
      all.strategy      = EqualizerStrategy::enumerate;
      all.max_witnesses = std::numeric_limits<std::size_t>::max();
      for (Elem u : q.ascending()) {
        for (auto const& fam : l.families(u)) {
          for (auto& w : check_cover(p, {u, fam}, all).witnesses) {
            (w.gluings.empty() ? d.missing : d.repeated).push_back(std::move(w));
          }
        }
      }
      return d;
    }

    // One forcing step: a fresh gluing for every family that has none, and
    // one section for all gluings of a family that has several.
    std::pair<Presheaf, PresheafMorphism> force(Presheaf const& p, Coverage const& l,
                                                Defects const& d, std::size_t step) {
      auto const& q = *p.site();
      auto const  n = q.size();
      std::vector<std::vector<std::string>> labels(n);
      // fresh[k][w]: raw index of the new section for missing[k] at w.
      std::vector<std::vector<std::size_t>> fresh(d.missing.size(),
                                                  std::vector<std::size_t>(n));
      for (Elem w = 0; w < n; ++w) {
        auto ls = p.at(w).labels();
        labels[w].assign(ls.begin(), ls.end());
      }
      for (std::size_t k = 0; k < d.missing.size(); ++k) {
        auto target = d.missing[k].family.cover.target;
        for (Elem w : q.below(target)) {
          fresh[k][w] = labels[w].size();
          labels[w].push_back("~" + std::to_string(step) + "." + std::to_string(k));
        }
      }
      std::vector<DisjointSets> cls;
      for (Elem w = 0; w < n; ++w) {
        cls.emplace_back(labels[w].size());
      }
      for (std::size_t k = 0; k < d.missing.size(); ++k) {
        auto const& fam = d.missing[k].family;
        for (Elem w : q.below(fam.cover.target)) {
          for (std::size_t i = 0; i < fam.cover.legs.size(); ++i) {
            auto leg = fam.cover.legs[i];
            if (q.leq(w, leg)) {
              cls[w].unite(fresh[k][w], p.res(leg, w)(fam.sections[i]));
            }
          }
        }
      }
      // Identifications that hold in every sheaf: a forced gluing whose leg
      // data contains another's, and one extending a gluing of a sub-cover.
      using Datum = std::pair<Elem, std::size_t>;
      std::vector<std::vector<Datum>> data(d.missing.size());
      for (std::size_t k = 0; k < d.missing.size(); ++k) {
        auto const& fam = d.missing[k].family;
        for (std::size_t i = 0; i < fam.cover.legs.size(); ++i) {
          data[k].emplace_back(fam.cover.legs[i], fam.sections[i]);
        }
        std::sort(data[k].begin(), data[k].end());
        data[k].erase(std::unique(data[k].begin(), data[k].end()), data[k].end());
      }
      auto identify = [&](std::size_t k, Elem target, auto&& other) {
        for (Elem w : q.below(target)) {
          cls[w].unite(fresh[k][w], other(w));
        }
      };
      for (std::size_t k = 0; k < d.missing.size(); ++k) {
        auto target = d.missing[k].family.cover.target;
        for (std::size_t j = 0; j < d.missing.size(); ++j) {
          if (j != k && d.missing[j].family.cover.target == target
              && std::includes(data[k].begin(), data[k].end(), data[j].begin(),
                               data[j].end())) {
            identify(k, target, [&](Elem w) { return fresh[j][w]; });
          }
        }
        auto const m = data[k].size();
        if (m > 16) {
          continue;
        }
        bool found = false;
        for (std::size_t mask = 0; mask < (std::size_t{1} << m) && !found; ++mask) {
          Family legs;
          for (std::size_t i = 0; i < m; ++i) {
            if ((mask >> i) & 1u) {
              legs.push_back(data[k][i].first);
            }
          }
          if (!l.covers(target, legs)) {
            continue;
          }
          for (std::size_t g = 0; g < p.at(target).size() && !found; ++g) {
            bool glues = true;
            for (std::size_t i = 0; i < m && glues; ++i) {
              glues = !((mask >> i) & 1u)
                      || p.res(target, data[k][i].first)(g) == data[k][i].second;
            }
            if (glues) {
              identify(k, target, [&](Elem w) { return p.res(target, w)(g); });
              found = true;
            }
          }
        }
      }
      for (auto const& m : d.repeated) {
        auto target = m.family.cover.target;
        for (std::size_t k = 1; k < m.gluings.size(); ++k) {
          for (Elem w : q.below(target)) {
            cls[w].unite(p.res(target, w)(m.gluings[0]),
                         p.res(target, w)(m.gluings[k]));
          }
        }
      }
      auto raw_res = [&](Elem w, Elem c, std::size_t e) -> std::size_t {
        if (e < p.at(w).size()) {
          return p.res(w, c)(e);
        }
        for (std::size_t k = 0; k < d.missing.size(); ++k) {
          auto target = d.missing[k].family.cover.target;
          if (q.leq(w, target) && fresh[k][w] == e) {
            return fresh[k][c];
          }
        }
        LOPOS_THROW(Internal, "unknown raw section");
      };
      // Identified sections must restrict to identified sections; the
      // generating pairs already do, this settles the closure.
      for (Elem w : descending(q)) {
        for (std::size_t e = 0; e < labels[w].size(); ++e) {
          auto root = cls[w].find(e);
          for (Elem c : q.lower_covers(w)) {
            cls[c].unite(raw_res(w, c, e), raw_res(w, c, root));
          }
        }
      }
      std::vector<FinSet>      raw_sets;
      std::vector<Coequalizer> quot;
      for (Elem w = 0; w < n; ++w) {
        FinSet                                           set(labels[w]);
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t e = 0; e < labels[w].size(); ++e) {
          pairs.emplace_back(set.index_of(labels[w][e]),
                             set.index_of(labels[w][cls[w].find(e)]));
        }
        if (set.size() != labels[w].size()) {
          LOPOS_THROW(Internal, "fresh section label collides at " + q.label(w));
        }
        quot.push_back(quotient(set, pairs));
        raw_sets.push_back(std::move(set));
      }
      auto class_of = [&](Elem w, std::size_t e) {
        return quot[w].quotient(raw_sets[w].index_of(labels[w][e]));
      };
      PresheafBuilder b(p.site(), p.name());
      for (Elem w = 0; w < n; ++w) {
        b.at(w, quot[w].object);
      }
      for (Elem w = 0; w < n; ++w) {
        for (Elem c : q.lower_covers(w)) {
          std::vector<std::size_t> map(quot[w].object.size());
          for (std::size_t e = 0; e < labels[w].size(); ++e) {
            map[class_of(w, e)] = class_of(c, raw_res(w, c, e));
          }
          b.restrict(w, c, std::move(map));
        }
      }
      auto             next = b.build();
      PresheafMorphism eta;
      for (Elem w = 0; w < n; ++w) {
        std::vector<std::size_t> map(p.at(w).size());
        for (std::size_t s = 0; s < map.size(); ++s) {
          map[s] = class_of(w, s);
        }
        eta.components.emplace_back(p.at(w), next.at(w), std::move(map));
      }
      return {std::move(next), std::move(eta)};
    }

    Presheaf pointwise_product(Presheaf const& f, Presheaf const& g) {
      auto const&          q = *f.site();
      PresheafBuilder      b(f.site(), f.name() + "x" + g.name());
      std::vector<Product> prods;
      for (Elem u = 0; u < q.size(); ++u) {
        prods.push_back(product(f.at(u), g.at(u)));
        b.at(u, prods.back().object);
      }
      for (Elem u = 0; u < q.size(); ++u) {
        for (Elem c : q.lower_covers(u)) {
          std::vector<std::size_t> map(prods[u].object.size());
          for (std::size_t s = 0; s < map.size(); ++s) {
            map[s] = prods[c].pair(f.res(u, c)(prods[u].proj1(s)),
                                   g.res(u, c)(prods[u].proj2(s)));
          }
          b.restrict(u, c, std::move(map));
        }
      }
      return b.build();
    }

    // Sections of F where the two morphisms F => G agree.
    SectionMask agreement(Presheaf const& f, PresheafMorphism const& a,
                          PresheafMorphism const& b) {
      SectionMask m(f.site()->size());
      for (Elem u = 0; u < m.size(); ++u) {
        for (std::size_t s = 0; s < f.at(u).size(); ++s) {
          m[u].push_back(a[u](s) == b[u](s));
        }
      }
      return m;
    }

    std::string profile(Presheaf const& f) {
      std::string s;
      for (Elem u = 0; u < f.site()->size(); ++u) {
        s += (u ? "," : "") + std::to_string(f.at(u).size());
      }
      return s;
    }

    ReflectionResult converged_or_throw(Presheaf const& p, Coverage const& l,
                                        std::size_t max_iter) {
      auto r = sheafify(p, l, max_iter);
      if (!r.converged) {
        LOPOS_THROW(NotConverged, "sheafification of " + p.name() + " hit the step limit "
                                      + std::to_string(max_iter));
      }
      return r;
    }

    PresheafMorphism extend_or_throw(ReflectionResult const& r,
                                     PresheafMorphism const& psi,
                                     Presheaf const&         g) {
      auto m = extend_along_unit(r, psi, g);
      if (!m) {
        LOPOS_THROW(Internal, "no extension along the unit into " + g.name());
      }
      return *m;
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Sheafification
  ////////////////////////////////////////////////////////////////////////

  ReflectionResult sheafify(Presheaf const& p, Coverage const& l,
                            std::size_t max_iter) {
    require_site(p, l);
    ReflectionResult r;
    r.sheaf = p;
    r.unit  = identity_morphism(p);
    for (std::size_t step = 0;; ++step) {
      auto d = find_defects(r.sheaf, l);
      if (d.empty()) {
        r.converged  = true;
        r.iterations = step;
        break;
      }
      if (step == max_iter) {
        r.iterations = step;
        r.diagnostic = std::to_string(d.missing.size()) + " families without and "
                       + std::to_string(d.repeated.size())
                       + " with several gluings remain at the step limit "
                       + std::to_string(max_iter);
        break;
      }
      auto [next, eta] = force(r.sheaf, l, d, step + 1);
      r.diagnostic     = "step " + std::to_string(step + 1) + ": "
                     + std::to_string(d.missing.size()) + " gluings forced, "
                     + std::to_string(d.repeated.size()) + " duplicates merged";
      r.unit  = compose(eta, r.unit);
      r.sheaf = std::move(next);
    }
    r.sheaf.set_name("a(" + p.name() + ")");
    return r;
  }

  std::optional<PresheafMorphism> extend_along_unit(ReflectionResult const& r,
                                                    PresheafMorphism const& psi,
                                                    Presheaf const&         g) {
    auto const&     a = r.sheaf;
    PartialMorphism fixed(a.site()->size());
    for (Elem u = 0; u < fixed.size(); ++u) {
      fixed[u].assign(a.at(u).size(), std::nullopt);
      for (std::size_t s = 0; s < r.unit[u].dom().size(); ++s) {
        auto& slot = fixed[u][r.unit[u](s)];
        if (slot && *slot != psi[u](s)) {
          return std::nullopt;
        }
        slot = psi[u](s);
      }
    }
    std::optional<PresheafMorphism> out;
    for_each_morphism(
        a, g,
        [&](PresheafMorphism const& m) {
          out = m;
          return false;
        },
        &fixed);
    return out;
  }

  std::vector<Presheaf> all_presheaves(QuantalePtr const& site,
                                       std::size_t        max_size,
                                       Coverage const*    sheaves_for,
                                       std::size_t        limit) {
    auto const& q     = *site;
    auto const  n     = q.size();
    auto const& order = q.ascending();
    std::vector<std::size_t> size(n, 0);
    // full[u][v]: restriction F(u) -> F(v) as a table, for v <= u.
    std::vector<std::vector<std::vector<std::size_t>>> full(
        n, std::vector<std::vector<std::size_t>>(n));
    std::vector<Presheaf> out;
    auto glues_at = [&](Elem u) {
      if (!sheaves_for) {
        return true;
      }
      for (auto const& legs : sheaves_for->families(u)) {
        std::map<std::vector<std::size_t>, std::size_t> hits;
        for (std::size_t x = 0; x < size[u]; ++x) {
          std::vector<std::size_t> key;
          for (auto v : legs) {
            key.push_back(full[u][v][x]);
          }
          if (++hits[key] > 1) {
            return false;
          }
        }
        bool ok = true;
        for_each_compatible(
            q, legs, [&](Elem v) { return size[v]; },
            [&](Elem a, Elem b, std::size_t s) { return full[a][b][s]; },
            [](Elem, std::size_t) { return true; },
            [&](std::vector<std::size_t> const& t) {
              ok = ok && hits.count(t) > 0;
            });
        if (!ok) {
          return false;
        }
      }
      return true;
    };
    std::function<void(std::size_t)> rec = [&](std::size_t idx) {
      if (idx == order.size()) {
        if (out.size() == limit) {
          LOPOS_THROW(SearchLimit, "more than " + std::to_string(limit)
                                       + " presheaves on " + q.name());
        }
        PresheafBuilder b(site, "P" + std::to_string(out.size()));
        for (Elem u = 0; u < n; ++u) {
          std::vector<std::string> labels;
          for (std::size_t s = 0; s < size[u]; ++s) {
            labels.push_back("s" + std::to_string(s));
          }
          b.at(u, labels);
        }
        for (Elem u = 0; u < n; ++u) {
          for (Elem c : q.lower_covers(u)) {
            b.restrict(u, c, full[u][c]);
          }
        }
        out.push_back(b.build());
        return;
      }
      Elem        u      = order[idx];
      auto const& covers = q.lower_covers(u);
      for (std::size_t k = 0; k <= max_size; ++k) {
        size[u] = k;
        // One digit per (lower cover, section) pair.
        std::vector<std::size_t> radix;
        bool                     possible = true;
        for (Elem c : covers) {
          for (std::size_t s = 0; s < k; ++s) {
            radix.push_back(size[c]);
            possible = possible && size[c] > 0;
          }
        }
        if (!possible) {
          continue;
        }
        std::vector<std::size_t> digit(radix.size(), 0);
        for (;;) {
          for (Elem v : q.below(u)) {
            full[u][v].clear();
          }
          full[u][u].resize(k);
          for (std::size_t s = 0; s < k; ++s) {
            full[u][u][s] = s;
          }
          bool ok = true;
          for (std::size_t ci = 0; ci < covers.size() && ok; ++ci) {
            Elem                     c = covers[ci];
            std::vector<std::size_t> r(digit.begin() + static_cast<long>(ci * k),
                                       digit.begin() + static_cast<long>((ci + 1) * k));
            for (Elem v : q.below(c)) {
              std::vector<std::size_t> via(k);
              for (std::size_t s = 0; s < k; ++s) {
                via[s] = full[c][v][r[s]];
              }
              if (full[u][v].empty() && v != u) {
                full[u][v] = std::move(via);
              } else if (full[u][v] != via) {
                ok = false;
                break;
              }
            }
          }
          if (ok && glues_at(u)) {
            rec(idx + 1);
          }
          std::size_t pos = 0;
          while (pos < digit.size() && ++digit[pos] == radix[pos]) {
            digit[pos++] = 0;
          }
          if (pos == digit.size()) {
            break;
          }
        }
      }
      size[u] = 0;
    };
    rec(0);
    return out;
  }

  std::vector<Presheaf> sheaf_battery(Coverage const& l, std::size_t max_size,
                                      std::size_t limit) {
    auto                                        all = all_presheaves(l.site(), max_size, &l, limit);
    std::map<std::string, std::vector<std::size_t>> by_profile;
    std::vector<Presheaf>                       out;
    for (auto& f : all) {
      auto& same = by_profile[profile(f)];
      bool  seen = std::any_of(same.begin(), same.end(), [&](std::size_t i) {
        return find_isomorphism(out[i], f).has_value();
      });
      if (!seen) {
        same.push_back(out.size());
        f.set_name("G" + std::to_string(out.size()));
        out.push_back(std::move(f));
      }
    }
    return out;
  }

  CertificationReport certify_reflection(Presheaf const& p,
                                         ReflectionResult const& r,
                                         Coverage const& l,
                                         std::vector<Presheaf> const& battery) {
    CertificationReport out;
    out.battery_size = battery.size();
    out.orthogonal   = check_sheaf_orthogonal(r.sheaf, l).is_sheaf();
    if (!out.orthogonal) {
      out.failures.push_back(r.sheaf.name() + " is not orthogonal to every sieve");
    }
    for (auto const& g : battery) {
      auto from_a = hom_presheaves(r.sheaf, g);
      auto from_p = hom_presheaves(p, g);
      std::vector<std::size_t> hits(from_p.size(), 0);
      for (auto const& m : from_a) {
        auto pre = compose(m, r.unit);
        auto it  = std::find(from_p.begin(), from_p.end(), pre);
        LOPOS_ASSERT(it != from_p.end());
        ++hits[static_cast<std::size_t>(it - from_p.begin())];
      }
      for (std::size_t k = 0; k < hits.size(); ++k) {
        if (hits[k] != 1) {
          out.failures.push_back(
              "map #" + std::to_string(k) + " " + p.name() + " -> " + g.name()
              + (hits[k] == 0 ? " does not extend" : " extends in several ways")
              + " along the unit");
          break;
        }
      }
      if (std::all_of(hits.begin(), hits.end(), [](std::size_t h) { return h == 1; })) {
        ++out.bijections;
      }
    }
    return out;
  }

  Presheaf sheaf_tensor(Presheaf const& f, Presheaf const& g, Coverage const& l,
                        std::size_t max_iter) {
    auto r = converged_or_throw(day_convolve(f, g), l, max_iter);
    r.sheaf.set_name(f.name() + "(x)" + g.name());
    return r.sheaf;
  }

  bool preserves_terminal(Coverage const& l) {
    auto t = terminal_presheaf(l.site());
    auto r = sheafify(t, l);
    return r.converged && find_isomorphism(r.sheaf, t).has_value();
  }

  ////////////////////////////////////////////////////////////////////////
  // Subsheaves
  ////////////////////////////////////////////////////////////////////////

  SectionMask least_subsheaf_containing(Presheaf const& f, Coverage const& l,
                                        SectionMask const& mask) {
    require_site(f, l);
    auto const& q = *f.site();
    SectionMask m = mask;
    for (bool changed = true; changed;) {
      changed = false;
      for (Elem u : descending(q)) {
        for (std::size_t s = 0; s < f.at(u).size(); ++s) {
          if (!m[u][s]) {
            continue;
          }
          for (Elem c : q.lower_covers(u)) {
            auto t = f.res(u, c)(s);
            if (!m[c][t]) {
              m[c][t] = true;
              changed = true;
            }
          }
        }
      }
      for (Elem u : q.ascending()) {
        for (auto const& legs : l.families(u)) {
          for_each_compatible(
              q, legs, [&](Elem v) { return f.at(v).size(); },
              [&](Elem a, Elem b, std::size_t s) { return f.res(a, b)(s); },
              [&](Elem v, std::size_t s) { return m[v][s]; },
              [&](std::vector<std::size_t> const& t) {
                for (auto x : glue(f, {u, legs}, t).gluings) {
                  if (!m[u][x]) {
                    m[u][x] = true;
                    changed = true;
                  }
                }
              });
        }
      }
    }
    return m;
  }

  std::size_t SubobjectLattice::index_of(SectionMask const& m) const {
    auto it = std::find(elements.begin(), elements.end(), m);
    if (it == elements.end()) {
      LOPOS_THROW(Internal, "mask is not a subsheaf");
    }
    return static_cast<std::size_t>(it - elements.begin());
  }

  SubobjectLattice subsheaf_lattice(Presheaf const& f, Coverage const& l) {
    if (!check_sheaf_equalizer(f, l).is_sheaf()) {
      LOPOS_THROW(UnverifiedInput, f.name() + " is not a sheaf");
    }
    auto const&      q     = *f.site();
    auto const&      order = q.ascending();
    SubobjectLattice lat;
    lat.parent = f;
    SectionMask m(q.size());
    for (Elem u = 0; u < q.size(); ++u) {
      m[u].assign(f.at(u).size(), false);
    }
    std::vector<std::vector<Family>> fams(q.size());
    for (Elem u = 0; u < q.size(); ++u) {
      fams[u].assign(l.families(u).begin(), l.families(u).end());
    }
    std::function<void(std::size_t)> rec = [&](std::size_t idx) {
      if (idx == order.size()) {
        lat.elements.push_back(m);
        return;
      }
      Elem       u = order[idx];
      auto const k = f.at(u).size();
      for (std::size_t bits = 0; bits < (std::size_t{1} << k); ++bits) {
        bool ok = true;
        for (std::size_t s = 0; s < k; ++s) {
          m[u][s] = (bits >> s) & 1u;
          if (m[u][s]) {
            for (Elem c : q.lower_covers(u)) {
              ok = ok && m[c][f.res(u, c)(s)];
            }
          }
        }
        for (std::size_t li = 0; li < fams[u].size() && ok; ++li) {
          auto const& legs = fams[u][li];
          for_each_compatible(
              q, legs, [&](Elem v) { return f.at(v).size(); },
              [&](Elem a, Elem b, std::size_t s) { return f.res(a, b)(s); },
              [&](Elem v, std::size_t s) { return m[v][s]; },
              [&](std::vector<std::size_t> const& t) {
                auto g = glue(f, {u, legs}, t);
                ok     = ok && g.gluings.size() == 1 && m[u][g.gluings[0]];
              });
        }
        if (ok) {
          rec(idx + 1);
        }
      }
      m[u].assign(k, false);
    };
    rec(0);
    auto const n = lat.elements.size();
    auto subset  = [&](SectionMask const& a, SectionMask const& b) {
      for (Elem u = 0; u < a.size(); ++u) {
        for (std::size_t s = 0; s < a[u].size(); ++s) {
          if (a[u][s] && !b[u][s]) {
            return false;
          }
        }
      }
      return true;
    };
    lat.leq.assign(n, std::vector<bool>(n, false));
    lat.meet.assign(n, std::vector<std::size_t>(n, 0));
    lat.join.assign(n, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        lat.leq[i][j] = subset(lat.elements[i], lat.elements[j]);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (std::all_of(lat.leq[i].begin(), lat.leq[i].end(), [](bool b) { return b; })) {
        lat.bottom = i;
      }
      bool greatest = true;
      for (std::size_t j = 0; j < n; ++j) {
        greatest = greatest && lat.leq[j][i];
      }
      if (greatest) {
        lat.top = i;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        SectionMask both = lat.elements[i], either = lat.elements[i];
        for (Elem u = 0; u < both.size(); ++u) {
          for (std::size_t s = 0; s < both[u].size(); ++s) {
            both[u][s]   = both[u][s] && lat.elements[j][u][s];
            either[u][s] = either[u][s] || lat.elements[j][u][s];
          }
        }
        lat.meet[i][j] = lat.index_of(both);
        lat.join[i][j] = lat.index_of(least_subsheaf_containing(f, l, either));
      }
    }
    return lat;
  }

  ExtremalFactorization extremal_factorize(Presheaf const& f, Presheaf const& g,
                                           PresheafMorphism const& phi,
                                           Coverage const& l,
                                           std::vector<Presheaf> const& battery) {
    auto const&           q = *g.site();
    ExtremalFactorization out;
    out.image.resize(q.size());
    for (Elem u = 0; u < q.size(); ++u) {
      out.image[u].assign(g.at(u).size(), false);
      for (std::size_t s = 0; s < f.at(u).size(); ++s) {
        out.image[u][phi[u](s)] = true;
      }
    }
    auto mask  = least_subsheaf_containing(g, l, out.image);
    out.middle = subpresheaf(g, mask);
    out.middle.set_name("im(" + f.name() + "->" + g.name() + ")");
    out.mono = inclusion(g, mask, out.middle);
    for (Elem u = 0; u < q.size(); ++u) {
      std::vector<std::size_t> rank(g.at(u).size(), 0);
      for (std::size_t s = 0, r = 0; s < rank.size(); ++s) {
        rank[s] = r;
        r += mask[u][s];
      }
      std::vector<std::size_t> map(f.at(u).size());
      for (std::size_t s = 0; s < map.size(); ++s) {
        map[s] = rank[phi[u](s)];
      }
      out.epi.components.emplace_back(f.at(u), out.middle.at(u), std::move(map));
    }
    LOPOS_ASSERT(compose(out.mono, out.epi) == phi);
    for (auto const& h : battery) {
      auto homs = hom_presheaves(out.middle, h);
      std::vector<PresheafMorphism> seen;
      for (auto const& m : homs) {
        auto pre = compose(m, out.epi);
        if (std::find(seen.begin(), seen.end(), pre) != seen.end()) {
          out.epi_cancels = false;
        }
        seen.push_back(std::move(pre));
      }
      ++out.cancellation_checked;
    }
    return out;
  }

  SectionMask star(Presheaf const& f, SectionMask const& m0,
                   SectionMask const& m1, Coverage const& l,
                   std::size_t max_iter) {
    auto const& q  = *f.site();
    auto        f0 = subpresheaf(f, m0);
    auto        f1 = subpresheaf(f, m1);
    auto        i0 = inclusion(f, m0, f0);
    auto        i1 = inclusion(f, m1, f1);
    auto        d  = day_convolve(f0, f1);
    auto        r  = converged_or_throw(d, l, max_iter);
    auto        p0 = extend_or_throw(r, day_projection1(f0, f1, d), f0);
    auto        p1 = extend_or_throw(r, day_projection2(f0, f1, d), f1);
    auto        a  = compose(i0, p0);
    auto        b  = compose(i1, p1);
    SectionMask image(q.size());
    for (Elem u = 0; u < q.size(); ++u) {
      image[u].assign(f.at(u).size(), false);
      for (std::size_t s = 0; s < r.sheaf.at(u).size(); ++s) {
        if (a[u](s) == b[u](s)) {
          image[u][a[u](s)] = true;
        }
      }
    }
    return least_subsheaf_containing(f, l, image);
  }

  std::vector<std::vector<std::size_t>> star_table(SubobjectLattice const& lat,
                                                   Coverage const&         l) {
    std::vector<std::vector<std::size_t>> t(lat.size(),
                                            std::vector<std::size_t>(lat.size()));
    for (std::size_t i = 0; i < lat.size(); ++i) {
      for (std::size_t j = 0; j < lat.size(); ++j) {
        t[i][j] = lat.index_of(star(lat.parent, lat.elements[i], lat.elements[j], l));
      }
    }
    return t;
  }

  ////////////////////////////////////////////////////////////////////////
  // Down-set criterion
  ////////////////////////////////////////////////////////////////////////

  DownSetAlgebra build_downset_algebra(QuantaleSpec const& spec) {
    DownSetAlgebra a;
    auto const     n = spec.elements.size();
    a.n              = n;
    if (n == 0 || n > 20) {
      LOPOS_THROW(UnsupportedParam, "down-set algebra needs 1 to 20 elements");
    }
    if (spec.mul.size() != n
        || std::any_of(spec.mul.begin(), spec.mul.end(),
                       [&](auto const& row) { return row.size() != n; })) {
      LOPOS_THROW(InvalidMap, "multiplication table is not " + std::to_string(n)
                                  + " by " + std::to_string(n));
    }
    a.le.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      a.le[i][i] = true;
    }
    for (auto [x, y] : spec.leq) {
      if (x >= n || y >= n) {
        LOPOS_THROW(InvalidMap, "order pair out of range");
      }
      a.le[x][y] = true;
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (a.le[i][k] && a.le[k][j]) {
            a.le[i][j] = true;
          }
        }
      }
    }
    auto const& name = spec.elements;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (a.le[i][j] && a.le[j][i]) {
          LOPOS_THROW(NotAPoset, name[i] + " and " + name[j] + " are below each other");
        }
      }
    }
    auto const& mul = spec.mul;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        if (mul[x][y] >= n) {
          LOPOS_THROW(InvalidMap, "product out of range");
        }
      }
    }
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t z = 0; z < n; ++z) {
          if (mul[mul[x][y]][z] != mul[x][mul[y][z]]) {
            LOPOS_THROW(MulNotAssociative, "(" + name[x] + name[y] + ")" + name[z]
                                               + " != " + name[x] + "(" + name[y]
                                               + name[z] + ")");
          }
        }
      }
    }
    std::map<std::vector<bool>, std::size_t> index;
    for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
      std::vector<bool> d(n);
      for (std::size_t i = 0; i < n; ++i) {
        d[i] = (bits >> i) & 1u;
      }
      bool down = true;
      for (std::size_t i = 0; i < n && down; ++i) {
        for (std::size_t j = 0; j < n && down; ++j) {
          down = !(d[i] && a.le[j][i]) || d[j];
        }
      }
      if (!down) {
        continue;
      }
      std::vector<std::size_t> upper;
      for (std::size_t u = 0; u < n; ++u) {
        bool bound = true;
        for (std::size_t i = 0; i < n; ++i) {
          bound = bound && (!d[i] || a.le[i][u]);
        }
        if (bound) {
          upper.push_back(u);
        }
      }
      std::optional<std::size_t> least;
      for (auto u : upper) {
        if (std::all_of(upper.begin(), upper.end(), [&](std::size_t v) { return a.le[u][v]; })) {
          least = u;
        }
      }
      if (!least) {
        LOPOS_THROW(NotComplete, "a set of elements has no least upper bound");
      }
      index[d] = a.downsets.size();
      a.downsets.push_back(std::move(d));
      a.sup.push_back(*least);
    }
    auto const m = a.downsets.size();
    a.product.assign(m, std::vector<std::size_t>(m));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        std::vector<bool> d(n, false);
        for (std::size_t x = 0; x < n; ++x) {
          for (std::size_t y = 0; y < n; ++y) {
            if (a.downsets[i][x] && a.downsets[j][y]) {
              for (std::size_t z = 0; z < n; ++z) {
                if (a.le[z][mul[x][y]]) {
                  d[z] = true;
                }
              }
            }
          }
        }
        a.product[i][j] = index.at(d);
      }
    }
    return a;
  }

  LoposCertificate lopos_check(QuantaleSpec const& spec) {
    auto             a = build_downset_algebra(spec);
    LoposCertificate c;
    c.quantale = true;
    for (std::size_t i = 0; i < a.downsets.size(); ++i) {
      for (std::size_t j = 0; j < a.downsets.size(); ++j) {
        ++c.pairs_checked;
        auto lhs = a.sup[a.product[i][j]];
        auto rhs = spec.mul[a.sup[i]][a.sup[j]];
        if (lhs != rhs && c.quantale) {
          c.quantale = false;
          for (std::size_t x = 0; x < a.n; ++x) {
            if (a.downsets[i][x]) {
              c.left.push_back(x);
            }
            if (a.downsets[j][x]) {
              c.right.push_back(x);
            }
          }
          c.lhs = lhs;
          c.rhs = rhs;
        }
      }
    }
    return c;
  }

  ////////////////////////////////////////////////////////////////////////
  // Exactness measurements
  ////////////////////////////////////////////////////////////////////////

  ExactnessReport search_non_left_exactness(Coverage const& l,
                                            std::size_t max_size,
                                            std::size_t budget) {
    ExactnessReport out;
    auto            cands = all_presheaves(l.site(), max_size);
    std::stable_sort(cands.begin(), cands.end(), [](auto const& a, auto const& b) {
      return a.total_sections() < b.total_sections();
    });
    std::vector<ReflectionResult> refl;
    for (auto const& c : cands) {
      refl.push_back(sheafify(c, l));
    }
    std::size_t spent = 0;
    for (std::size_t i = 0; i < cands.size() && !out.witness && spent < budget; ++i) {
      for (std::size_t j = 0; j < cands.size() && !out.witness && spent < budget; ++j) {
        auto const& ri = refl[i];
        auto const& rj = refl[j];
        if (!ri.converged || !rj.converged) {
          continue;
        }
        auto homs = hom_presheaves(cands[i], cands[j], 64);
        for (std::size_t x = 0; x < homs.size() && !out.witness; ++x) {
          for (std::size_t y = x + 1; y < homs.size() && !out.witness; ++y) {
            if (++spent > budget) {
              break;
            }
            ++out.equalizers_checked;
            auto eq = subpresheaf(cands[i], agreement(cands[i], homs[x], homs[y]));
            auto ae = sheafify(eq, l);
            auto fx = extend_or_throw(ri, compose(rj.unit, homs[x]), rj.sheaf);
            auto fy = extend_or_throw(ri, compose(rj.unit, homs[y]), rj.sheaf);
            auto sh = subpresheaf(ri.sheaf, agreement(ri.sheaf, fx, fy));
            if (ae.converged && !find_isomorphism(ae.sheaf, sh)) {
              out.witness = "equalizer of two maps " + profile(cands[i]) + " -> "
                            + profile(cands[j]) + ": a(Eq) has sizes "
                            + profile(ae.sheaf) + ", Eq of the sheafified maps has "
                            + profile(sh);
            }
          }
        }
        if (out.witness || i > j) {
          continue;
        }
        ++spent;
        ++out.products_checked;
        auto ap = sheafify(pointwise_product(cands[i], cands[j]), l);
        auto pa = pointwise_product(ri.sheaf, rj.sheaf);
        if (ap.converged && !find_isomorphism(ap.sheaf, pa)) {
          out.witness = "product of " + profile(cands[i]) + " and " + profile(cands[j])
                        + ": a(PxQ) has sizes " + profile(ap.sheaf)
                        + ", a(P)xa(Q) has " + profile(pa);
        }
      }
    }
    return out;
  }

  PseudoPullbackReport measure_pseudo_pullbacks(Coverage const& l,
                                                std::size_t max_size,
                                                std::size_t budget) {
    PseudoPullbackReport out;
    auto                 cands = all_presheaves(l.site(), max_size);
    std::vector<ReflectionResult> refl;
    for (auto const& c : cands) {
      refl.push_back(sheafify(c, l));
    }
    for (std::size_t ia = 0; ia < cands.size(); ++ia) {
      for (std::size_t ib = 0; ib < cands.size(); ++ib) {
        for (std::size_t ic = 0; ic < cands.size(); ++ic) {
          auto const &a = cands[ia], &b = cands[ib], &c = cands[ic];
          auto const &ra = refl[ia], &rb = refl[ib], &rc = refl[ic];
          if (!ra.converged || !rb.converged || !rc.converged) {
            continue;
          }
          auto fs = hom_presheaves(a, c, 16);
          auto gs = hom_presheaves(b, c, 16);
          if (fs.empty() || gs.empty()) {
            continue;
          }
          auto d  = day_convolve(a, b);
          auto da = day_projection1(a, b, d);
          auto db = day_projection2(a, b, d);
          auto ds = day_convolve(ra.sheaf, rb.sheaf);
          auto rt = sheafify(ds, l);
          if (!rt.converged) {
            continue;
          }
          auto p1 = extend_or_throw(rt, day_projection1(ra.sheaf, rb.sheaf, ds), ra.sheaf);
          auto p2 = extend_or_throw(rt, day_projection2(ra.sheaf, rb.sheaf, ds), rb.sheaf);
          for (auto const& f : fs) {
            for (auto const& g : gs) {
              if (out.checked == budget) {
                return out;
              }
              auto ppb = sheafify(
                  subpresheaf(d, agreement(d, compose(f, da), compose(g, db))), l);
              if (!ppb.converged) {
                continue;
              }
              ++out.checked;
              auto fa = extend_or_throw(ra, compose(rc.unit, f), rc.sheaf);
              auto gb = extend_or_throw(rb, compose(rc.unit, g), rc.sheaf);
              auto sh = subpresheaf(rt.sheaf, agreement(rt.sheaf, compose(fa, p1),
                                                        compose(gb, p2)));
              if (find_isomorphism(ppb.sheaf, sh)) {
                ++out.preserved;
              } else if (out.failures.size() < 8) {
                out.failures.push_back("over " + profile(c) + " from " + profile(a)
                                       + " and " + profile(b) + ": "
                                       + profile(ppb.sheaf) + " vs " + profile(sh));
              }
            }
          }
        }
      }
    }
    return out;
  }

}  // namespace lopos
