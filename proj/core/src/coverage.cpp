#include "lopos/coverage.hpp"

#include <algorithm>
#include <utility>

#include "lopos/error.hpp"
#include "lopos/moncat.hpp"

namespace lopos {

  namespace {
    constexpr std::size_t kViolationsKept = 8;

    class Recorder {
     public:
      Recorder(CoverageReport& report) : _report(report) {}

      // `describe` returns the failing family and witness text; it only
      // runs for violations that are kept.
      template <class Describe>
      void check(bool holds, int axiom, Describe&& describe) {
        ++_report.instances_checked;
        if (holds) {
          return;
        }
        if (_report.failures[axiom]++ < kViolationsKept) {
          auto [family, witness] = describe();
          _report.violations.push_back({axiom, std::move(family), std::move(witness)});
        }
      }

     private:
      CoverageReport& _report;
    };

    Family replace_one(Family const& legs, std::size_t at, Family const& with) {
      Family out;
      out.reserve(legs.size() + with.size());
      for (std::size_t k = 0; k < legs.size(); ++k) {
        if (k != at) {
          out.push_back(legs[k]);
        }
      }
      out.insert(out.end(), with.begin(), with.end());
      return out;
    }

    void check_isomorphisms(Coverage const& c, ThinCategory const& cat,
                            Recorder& rec, int axiom) {
      auto const& q = *c.site();
      for (Elem u = 0; u < q.size(); ++u) {
        for (Elem v = 0; v < q.size(); ++v) {
          for (auto const& f : cat.hom(v, u)) {
            for (auto const& g : cat.hom(u, v)) {
              if (cat.compose(g, f) == cat.identity(v)
                  && cat.compose(f, g) == cat.identity(u)) {
                rec.check(c.covers(u, {v}), axiom, [&] {
                  return std::pair{CoverFamily{u, {v}}, "isomorphism " + q.label(v) + " -> "
                                                            + q.label(u) + " is not a cover"};
                });
              }
            }
          }
        }
      }
    }

    // Closure under refining one leg at a time; iterating single-leg
    // refinements reaches every full composite.
    void check_composition(Coverage const& c, Recorder& rec, int axiom) {
      auto const& q = *c.site();
      for (Elem u = 0; u < q.size(); ++u) {
        for (auto const& fam : c.families(u)) {
          for (std::size_t i = 0; i < fam.size(); ++i) {
            if (i > 0 && fam[i] == fam[i - 1]) {
              continue;
            }
            for (auto const& refine : c.families(fam[i])) {
              auto composite = replace_one(fam, i, refine);
              rec.check(c.covers(u, composite), axiom, [&] {
                return std::pair{CoverFamily{u, c.normalize(composite)},
                                 "refining leg " + q.label(fam[i]) + " of "
                                     + c.describe(CoverFamily{u, fam}) + " by "
                                     + c.describe(refine) + " gives a non-cover"};
              });
            }
          }
        }
      }
    }

    void check_tensor_stability(Coverage const& c, Recorder& rec, int axiom) {
      auto const& q = *c.site();
      for (Elem u = 0; u < q.size(); ++u) {
        for (auto const& fam : c.families(u)) {
          for (Elem v = 0; v < q.size(); ++v) {
            Family right, left;
            for (auto x : fam) {
              right.push_back(q.mul(x, v));
              left.push_back(q.mul(v, x));
            }
            rec.check(c.covers(q.mul(u, v), right), axiom, [&] {
              return std::pair{CoverFamily{q.mul(u, v), c.normalize(right)},
                               c.describe(CoverFamily{u, fam}) + " tensored on the right with "
                                   + q.label(v) + " is not a cover"};
            });
            rec.check(c.covers(q.mul(v, u), left), axiom, [&] {
              return std::pair{CoverFamily{q.mul(v, u), c.normalize(left)},
                               c.describe(CoverFamily{u, fam}) + " tensored on the left with "
                                   + q.label(v) + " is not a cover"};
            });
          }
        }
      }
    }

    void check_pseudo_pullback_stability(Coverage const& c,
                                         ThinCategory const& cat,
                                         Recorder& rec, int axiom) {
      auto const& q = *c.site();
      for (Elem u = 0; u < q.size(); ++u) {
        auto const id_u = cat.identity(u);
        for (Elem v : q.below(u)) {
          auto const g     = cat.arrow(v, u);
          auto const right = pseudo_pullback(cat, id_u, g).apex;
          auto const left  = pseudo_pullback(cat, g, id_u).apex;
          for (auto const& fam : c.families(u)) {
            Family rl, ll;
            for (auto x : fam) {
              auto f = cat.arrow(x, u);
              rl.push_back(pseudo_pullback(cat, f, g).apex);
              ll.push_back(pseudo_pullback(cat, g, f).apex);
            }
            rec.check(c.covers(right, rl), axiom, [&] {
              return std::pair{CoverFamily{right, c.normalize(rl)},
                               "pseudo-pullback of " + c.describe(CoverFamily{u, fam}) + " along "
                                   + q.label(v) + " -> " + q.label(u) + " (right) is not a cover"};
            });
            rec.check(c.covers(left, ll), axiom, [&] {
              return std::pair{CoverFamily{left, c.normalize(ll)},
                               "pseudo-pullback of " + c.describe(CoverFamily{u, fam}) + " along "
                                   + q.label(v) + " -> " + q.label(u) + " (left) is not a cover"};
            });
          }
        }
      }
    }

    void check_factorizations(Coverage const& c, ThinCategory const& cat,
                              Recorder& rec, int axiom) {
      auto const& q = *c.site();
      for (Elem u = 0; u < q.size(); ++u) {
        for (auto const& fam : c.families(u)) {
          std::vector<ThinArrow> legs;
          for (std::size_t i = 0; i < fam.size(); ++i) {
            if (i == 0 || fam[i] != fam[i - 1]) {
              legs.push_back(cat.arrow(fam[i], u));
            }
          }
          for (Elem v = 0; v < q.size(); ++v) {
            auto r = exists_l_r_factorizations(cat, legs, v);
            rec.check(r.ok, axiom, [&] {
              return std::pair{CoverFamily{u, fam}, r.failures.front().witness};
            });
          }
        }
      }
    }

    void check_pullback_stability(Coverage const& c, Recorder& rec, int axiom) {
      auto const& q = *c.site();
      for (Elem u = 0; u < q.size(); ++u) {
        for (auto const& fam : c.families(u)) {
          for (Elem v : q.below(u)) {
            Family pulled;
            for (auto x : fam) {
              pulled.push_back(q.meet(v, x));
            }
            rec.check(c.covers(v, pulled), axiom, [&] {
              return std::pair{CoverFamily{v, c.normalize(pulled)},
                               "pullback of " + c.describe(CoverFamily{u, fam}) + " along "
                                   + q.label(v) + " is not a cover"};
            });
          }
        }
      }
    }

    ThinCategory site_category(Coverage const& c) {
      return ThinCategory(c.site());
    }
  }  // namespace

  std::string_view to_string(CoverageFlavor f) noexcept {
    switch (f) {
      case CoverageFlavor::pretopology:
        return "pretopology";
      case CoverageFlavor::weak_prelopology:
        return "weak_prelopology";
      case CoverageFlavor::prelopology:
        return "prelopology";
      case CoverageFlavor::strong_prelopology:
        return "strong_prelopology";
    }
    return "unknown";
  }

  std::optional<CoverageFlavor> coverage_flavor_from_string(std::string_view s) {
    for (auto f : {CoverageFlavor::pretopology, CoverageFlavor::weak_prelopology,
                   CoverageFlavor::prelopology, CoverageFlavor::strong_prelopology}) {
      if (to_string(f) == s) {
        return f;
      }
    }
    if (s == "weak") {
      return CoverageFlavor::weak_prelopology;
    }
    if (s == "strong") {
      return CoverageFlavor::strong_prelopology;
    }
    return std::nullopt;
  }

  std::string_view axiom_name(CoverageFlavor flavor, int axiom) noexcept {
    switch (axiom) {
      case 1:
        return "isomorphisms";
      case 2:
        return "composition";
      case 3:
        return flavor == CoverageFlavor::pretopology ? "pullback-stability"
                                                     : "tensor-stability";
      case 4:
        return "pseudo-pullback-stability";
      case 5:
        return "factorization";
      default:
        return "unknown";
    }
  }

  Coverage::Coverage(QuantalePtr site, std::size_t multiplicity_cap,
                     std::string name)
      : _site(std::move(site)), _cap(multiplicity_cap), _name(std::move(name)) {
    if (!_site) {
      LOPOS_THROW(UnsupportedParam, "coverage needs a site");
    }
    if (_cap == 0) {
      LOPOS_THROW(UnsupportedParam, "multiplicity cap must be positive");
    }
    _families.resize(_site->size());
  }

  Family Coverage::normalize(Family legs) const {
    std::sort(legs.begin(), legs.end());
    Family      out;
    std::size_t run = 0;
    for (std::size_t k = 0; k < legs.size(); ++k) {
      run = k > 0 && legs[k] == legs[k - 1] ? run + 1 : 1;
      if (run <= _cap) {
        out.push_back(legs[k]);
      }
    }
    return out;
  }

  void Coverage::add(CoverFamily const& family) {
    auto const& q = *_site;
    if (family.target >= q.size()) {
      LOPOS_THROW(UnknownLabel, "cover target out of range");
    }
    for (auto x : family.legs) {
      if (x >= q.size() || !q.leq(x, family.target)) {
        LOPOS_THROW(DomainMismatch,
                    "leg " + (x < q.size() ? q.label(x) : std::to_string(x))
                        + " is not below " + q.label(family.target));
      }
    }
    _families[family.target].insert(normalize(family.legs));
  }

  bool Coverage::remove(CoverFamily const& family) {
    return _families.at(family.target).erase(normalize(family.legs)) > 0;
  }

  bool Coverage::covers(Elem target, Family const& legs) const {
    return _families.at(target).count(normalize(legs)) > 0;
  }

  std::size_t Coverage::total_families() const {
    std::size_t n = 0;
    for (auto const& s : _families) {
      n += s.size();
    }
    return n;
  }

  std::string Coverage::describe(Family const& legs) const {
    std::string out = "{";
    for (std::size_t k = 0; k < legs.size(); ++k) {
      out += (k ? ", " : "") + _site->label(legs[k]);
    }
    return out + "}";
  }

  std::string Coverage::describe(CoverFamily const& family) const {
    return describe(family.legs) + " -> " + _site->label(family.target);
  }

  void for_each_capped_multiset(std::vector<Elem> const&                  support,
                                std::size_t                               cap,
                                std::size_t                               limit,
                                std::function<void(Family const&)> const& visit) {
    std::vector<std::size_t> mult(support.size(), 0);
    std::size_t              visited = 0;
    while (true) {
      if (++visited > limit) {
        LOPOS_THROW(SearchLimit, "more than " + std::to_string(limit)
                                     + " candidate families");
      }
      Family fam;
      for (std::size_t k = 0; k < support.size(); ++k) {
        fam.insert(fam.end(), mult[k], support[k]);
      }
      visit(fam);
      std::size_t k = 0;
      while (k < mult.size() && ++mult[k] > cap) {
        mult[k++] = 0;
      }
      if (k == mult.size()) {
        return;
      }
    }
  }

  Coverage canonical_quantale_coverage(QuantalePtr const& q,
                                       std::size_t        multiplicity_cap) {
    if (!classify_quantale(*q).semicartesian) {
      LOPOS_THROW(NotSemicartesian,
                  q->name() + " is not semicartesian: the unit is not the top");
    }
    Coverage c(q, multiplicity_cap, "canonical");
    for (Elem u = 0; u < q->size(); ++u) {
      for_each_capped_multiset(q->below(u), multiplicity_cap, kFamilyLimit,
                               [&](Family const& fam) {
                                 if (q->join_all(fam) == u) {
                                   c.add({u, fam});
                                 }
                               });
    }
    return c;
  }

  Coverage trivial_coverage(QuantalePtr const& q, std::size_t multiplicity_cap) {
    Coverage c(q, multiplicity_cap, "trivial");
    for (Elem u = 0; u < q->size(); ++u) {
      c.add({u, {u}});
    }
    return c;
  }

  CoverageReport check_coverage(Coverage const& c, CoverageFlavor flavor) {
    CoverageReport report;
    report.flavor = flavor;
    Recorder rec(report);
    if (flavor == CoverageFlavor::pretopology) {
      if (!c.site()->mul_is_meet()) {
        LOPOS_THROW(NotCartesianSite,
                    c.site()->name()
                        + ": the tensor is not the meet, so pullbacks differ "
                          "from pseudo-pullbacks");
      }
      report.axioms_checked = {1, 2, 3};
      auto cat              = site_category(c);
      check_isomorphisms(c, cat, rec, 1);
      check_composition(c, rec, 2);
      check_pullback_stability(c, rec, 3);
      return report;
    }
    auto cat = site_category(c);
    check_isomorphisms(c, cat, rec, 1);
    check_composition(c, rec, 2);
    check_tensor_stability(c, rec, 3);
    report.axioms_checked = {1, 2, 3};
    if (flavor == CoverageFlavor::weak_prelopology) {
      return report;
    }
    if (!classify_quantale(*c.site()).semicartesian) {
      LOPOS_THROW(NotSemicartesian,
                  "pseudo-pullbacks need a semicartesian site");
    }
    check_pseudo_pullback_stability(c, cat, rec, 4);
    report.axioms_checked.push_back(4);
    if (flavor == CoverageFlavor::strong_prelopology) {
      check_factorizations(c, cat, rec, 5);
      report.axioms_checked.push_back(5);
    }
    return report;
  }

  CoverageReport check_weak_prelopology(Coverage const& c) {
    return check_coverage(c, CoverageFlavor::weak_prelopology);
  }

  CoverageReport check_prelopology(Coverage const& c) {
    return check_coverage(c, CoverageFlavor::prelopology);
  }

  CoverageReport check_strong_prelopology(Coverage const& c) {
    return check_coverage(c, CoverageFlavor::strong_prelopology);
  }

  CoverageReport check_pretopology(Coverage const& c) {
    return check_coverage(c, CoverageFlavor::pretopology);
  }

  Coverage product_coverage(Coverage const& l1, Coverage const& l2,
                            QuantalePtr const& site) {
    if (l1.multiplicity_cap() != l2.multiplicity_cap()) {
      LOPOS_THROW(UnsupportedParam,
                  "factor coverages use different multiplicity caps");
    }
    for (auto const* l : {&l1, &l2}) {
      if (!check_prelopology(*l).ok()) {
        LOPOS_THROW(UnverifiedInput,
                    l->name() + " on " + l->site()->name()
                        + " is not a prelopology");
      }
    }
    auto p = site ? site : product_quantale(l1.site(), l2.site());
    if (!p->is_product() || !same_structure(*p->left(), *l1.site())
        || !same_structure(*p->right(), *l2.site())) {
      LOPOS_THROW(SiteMismatch, p->name() + " is not the product of "
                                    + l1.site()->name() + " and "
                                    + l2.site()->name());
    }
    Coverage out(p, l1.multiplicity_cap(), l1.name() + "*" + l2.name());
    for (Elem u = 0; u < p->size(); ++u) {
      for_each_capped_multiset(
          p->below(u), out.multiplicity_cap(), kFamilyLimit,
          [&](Family const& fam) {
            Family f1, f2;
            for (auto x : fam) {
              f1.push_back(p->fst(x));
              f2.push_back(p->snd(x));
            }
            if (l1.covers(p->fst(u), f1) && l2.covers(p->snd(u), f2)) {
              out.add({u, fam});
            }
          });
    }
    return out;
  }

  std::optional<CoverageDifference> compare_coverages(Coverage const& a,
                                                      Coverage const& b) {
    if (!same_structure(*a.site(), *b.site())) {
      LOPOS_THROW(SiteMismatch, "coverages live on different sites");
    }
    for (Elem u = 0; u < a.site()->size(); ++u) {
      for (auto const& fam : a.families(u)) {
        if (!b.covers(u, fam)) {
          return CoverageDifference{{u, fam}, true};
        }
      }
      for (auto const& fam : b.families(u)) {
        if (!a.covers(u, fam)) {
          return CoverageDifference{{u, fam}, false};
        }
      }
    }
    return std::nullopt;
  }

}  // namespace lopos
