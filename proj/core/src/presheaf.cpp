#include "lopos/presheaf.hpp"

#include <algorithm>
#include <map>

#include "lopos/error.hpp"

namespace lopos {

  namespace {
    std::size_t slot(Quantale const& q, Elem u, Elem v) {
      return u * q.size() + v;
    }

    void require_same_site(Presheaf const& f, Presheaf const& g) {
      if (!same_structure(*f.site(), *g.site())) {
        LOPOS_THROW(SiteMismatch, f.name() + " and " + g.name()
                                      + " live on different sites");
      }
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Presheaf
  ////////////////////////////////////////////////////////////////////////

  FinMap const& Presheaf::res(Elem u, Elem v) const {
    auto const& r = _res.at(slot(*_site, u, v));
    if (!r) {
      LOPOS_THROW(DomainMismatch, "no restriction " + _site->label(u) + " to "
                                      + _site->label(v) + ": not below");
    }
    return *r;
  }

  std::size_t Presheaf::total_sections() const {
    std::size_t n = 0;
    for (auto const& s : _at) {
      n += s.size();
    }
    return n;
  }

  bool Presheaf::operator==(Presheaf const& that) const {
    return same_structure(*_site, *that._site) && _at == that._at
           && _res == that._res;
  }

  PresheafBuilder::PresheafBuilder(QuantalePtr site, std::string name)
      : _site(std::move(site)), _name(std::move(name)) {
    _at.assign(_site->size(), FinSet());
    _res.assign(_site->size() * _site->size(), std::nullopt);
  }

  PresheafBuilder& PresheafBuilder::at(Elem u, std::vector<std::string> sections) {
    return at(u, FinSet(std::move(sections)));
  }

  PresheafBuilder& PresheafBuilder::at(Elem u, FinSet sections) {
    _at.at(u) = std::move(sections);
    return *this;
  }

  PresheafBuilder& PresheafBuilder::restrict(Elem u, Elem v,
                                             std::vector<std::size_t> map) {
    return restrict(u, v, FinMap(_at.at(u), _at.at(v), std::move(map)));
  }

  PresheafBuilder& PresheafBuilder::restrict(Elem u, Elem v, FinMap map) {
    if (!_site->leq(v, u)) {
      LOPOS_THROW(DomainMismatch, "restriction " + _site->label(u) + " to "
                                      + _site->label(v) + ": "
                                      + _site->label(v) + " is not below");
    }
    _res.at(slot(*_site, u, v)) = std::move(map);
    return *this;
  }

  Presheaf PresheafBuilder::build() const {
    auto const& q = *_site;
    Presheaf    f;
    f._site = _site;
    f._name = _name;
    f._at   = _at;
    f._res.assign(q.size() * q.size(), std::nullopt);
    auto where = [&](Elem u, Elem v) {
      return q.label(v) + "<=" + q.label(u);
    };
    for (Elem u = 0; u < q.size(); ++u) {
      for (Elem v : q.below(u)) {
        auto const& given = _res[slot(q, u, v)];
        if (given && (!(given->dom() == _at[u]) || !(given->cod() == _at[v]))) {
          LOPOS_THROW(InvalidMap, "restriction " + where(u, v)
                                      + " does not map the declared sections");
        }
      }
    }
    for (Elem u : q.ascending()) {
      f._res[slot(q, u, u)] = FinMap::identity(_at[u]);
      if (auto const& given = _res[slot(q, u, u)];
          given && !(*given == *f._res[slot(q, u, u)])) {
        LOPOS_THROW(CompositionFails,
                    "restriction " + where(u, u) + " is not the identity");
      }
      for (Elem c : q.lower_covers(u)) {
        auto const& given = _res[slot(q, u, c)];
        if (!given) {
          LOPOS_THROW(MissingRestriction, "missing restriction " + where(u, c));
        }
        f._res[slot(q, u, c)] = *given;
      }
      // Everything strictly below u that is not a lower cover factors
      // through one; elements below u were handled earlier.
      for (Elem v : q.below(u)) {
        if (f._res[slot(q, u, v)]) {
          continue;
        }
        for (Elem c : q.lower_covers(u)) {
          if (q.leq(v, c)) {
            f._res[slot(q, u, v)]
                = compose(*f._res[slot(q, c, v)], *f._res[slot(q, u, c)]);
            break;
          }
        }
        if (auto const& given = _res[slot(q, u, v)];
            given && !(*given == *f._res[slot(q, u, v)])) {
          LOPOS_THROW(CompositionFails,
                      "restriction " + where(u, v)
                          + " disagrees with the composite through a lower cover");
        }
      }
    }
    for (Elem u = 0; u < q.size(); ++u) {
      for (Elem v : q.below(u)) {
        for (Elem w : q.below(v)) {
          auto direct = *f._res[slot(q, u, w)];
          auto chain  = compose(*f._res[slot(q, v, w)], *f._res[slot(q, u, v)]);
          if (!(direct == chain)) {
            for (std::size_t s = 0; s < _at[u].size(); ++s) {
              if (direct(s) != chain(s)) {
                LOPOS_THROW(CompositionFails,
                            "restricting " + _at[u].label(s) + " along "
                                + where(u, v) + " then " + where(v, w)
                                + " gives " + _at[w].label(chain(s))
                                + " but directly " + _at[w].label(direct(s)));
              }
            }
          }
        }
      }
    }
    return f;
  }

  PresheafValidation validate_presheaf(QuantalePtr const&  site,
                                       PresheafSpec const& spec) {
    PresheafValidation out;
    auto const&        q = *site;
    auto problem = [&](ErrorKind k, std::string msg) {
      out.problems.push_back({k, std::move(msg)});
    };
    PresheafBuilder b(site, spec.name.empty() ? "presheaf" : spec.name);
    std::vector<bool>   seen(q.size(), false);
    std::vector<FinSet> sets(q.size());
    for (auto const& [label, sections] : spec.at) {
      auto u = q.find(label);
      if (!u) {
        problem(ErrorKind::UnknownLabel, "unknown object " + label);
        continue;
      }
      if (seen[*u]) {
        problem(ErrorKind::DuplicateLabel, "object " + label + " listed twice");
        continue;
      }
      seen[*u] = true;
      try {
        sets[*u] = FinSet(sections);
        b.at(*u, sets[*u]);
      } catch (Error const& e) {
        problem(e.kind(), "sections of " + label + ": " + e.what());
      }
    }
    if (!out.problems.empty()) {
      return out;
    }
    for (auto const& r : spec.res) {
      auto u = q.find(r.upper);
      auto v = q.find(r.lower);
      if (!u || !v) {
        problem(ErrorKind::UnknownLabel,
                "restriction " + r.lower + "<=" + r.upper + " names an unknown object");
        continue;
      }
      if (!q.leq(*v, *u)) {
        problem(ErrorKind::DomainMismatch,
                "restriction " + r.lower + "<=" + r.upper + ": not below");
        continue;
      }
      try {
        std::map<std::string, std::string> table(r.map.begin(), r.map.end());
        if (table.size() != r.map.size()) {
          LOPOS_THROW(InvalidMap, "a section is mapped twice");
        }
        b.restrict(*u, *v, FinMap::from_labels(sets[*u], sets[*v], table));
      } catch (Error const& e) {
        problem(e.kind(), std::string("restriction ") + r.lower + "<=" + r.upper
                              + ": " + e.what());
      }
    }
    if (!out.problems.empty()) {
      return out;
    }
    try {
      out.presheaf = b.build();
    } catch (Error const& e) {
      problem(e.kind(), e.what());
    }
    return out;
  }

  PresheafSpec to_spec(Presheaf const& f) {
    auto const&  q = *f.site();
    PresheafSpec spec;
    spec.name = f.name();
    for (Elem u = 0; u < q.size(); ++u) {
      auto labels = f.at(u).labels();
      spec.at.emplace_back(q.label(u),
                           std::vector<std::string>(labels.begin(), labels.end()));
    }
    for (Elem u = 0; u < q.size(); ++u) {
      for (Elem c : q.lower_covers(u)) {
        RestrictionSpec r{q.label(u), q.label(c), {}};
        auto const&     m = f.res(u, c);
        for (std::size_t s = 0; s < f.at(u).size(); ++s) {
          r.map.emplace_back(f.at(u).label(s), f.at(c).label(m(s)));
        }
        spec.res.push_back(std::move(r));
      }
    }
    return spec;
  }

  ////////////////////////////////////////////////////////////////////////
  // Morphisms
  ////////////////////////////////////////////////////////////////////////

  bool is_natural(Presheaf const& f, Presheaf const& g,
                  PresheafMorphism const& phi) {
    auto const& q = *f.site();
    if (phi.components.size() != q.size()) {
      return false;
    }
    for (Elem u = 0; u < q.size(); ++u) {
      if (!(phi[u].dom() == f.at(u)) || !(phi[u].cod() == g.at(u))) {
        return false;
      }
    }
    for (Elem u = 0; u < q.size(); ++u) {
      for (Elem c : q.lower_covers(u)) {
        if (!(compose(g.res(u, c), phi[u]) == compose(phi[c], f.res(u, c)))) {
          return false;
        }
      }
    }
    return true;
  }

  PresheafMorphism identity_morphism(Presheaf const& f) {
    PresheafMorphism m;
    for (Elem u = 0; u < f.site()->size(); ++u) {
      m.components.push_back(FinMap::identity(f.at(u)));
    }
    return m;
  }

  PresheafMorphism compose(PresheafMorphism const& psi,
                           PresheafMorphism const& phi) {
    if (psi.components.size() != phi.components.size()) {
      LOPOS_THROW(SiteMismatch, "morphisms over different sites");
    }
    PresheafMorphism m;
    for (std::size_t u = 0; u < phi.components.size(); ++u) {
      m.components.push_back(compose(psi[u], phi[u]));
    }
    return m;
  }

  bool is_mono(PresheafMorphism const& m) {
    return std::all_of(m.components.begin(), m.components.end(),
                       [](FinMap const& c) { return c.injective(); });
  }

  bool is_epi(PresheafMorphism const& m) {
    return std::all_of(m.components.begin(), m.components.end(),
                       [](FinMap const& c) { return c.surjective(); });
  }

  bool is_iso(PresheafMorphism const& m) {
    return is_mono(m) && is_epi(m);
  }

  ////////////////////////////////////////////////////////////////////////
  // Standard presheaves
  ////////////////////////////////////////////////////////////////////////

  namespace {
    // Every object gets `sections(u)`; restrictions are the unique maps
    // between one-point or empty sets.
    Presheaf pointlike(QuantalePtr const& site, std::string name,
                       std::function<std::vector<std::string>(Elem)> const& sections) {
      auto const&     q = *site;
      PresheafBuilder b(site, std::move(name));
      for (Elem u = 0; u < q.size(); ++u) {
        b.at(u, sections(u));
      }
      for (Elem u = 0; u < q.size(); ++u) {
        for (Elem c : q.lower_covers(u)) {
          b.restrict(u, c, std::vector<std::size_t>(sections(u).size(), 0));
        }
      }
      return b.build();
    }
  }  // namespace

  Presheaf terminal_presheaf(QuantalePtr const& site) {
    return pointlike(site, "terminal",
                     [](Elem) { return std::vector<std::string>{"*"}; });
  }

  Presheaf empty_presheaf(QuantalePtr const& site) {
    return pointlike(site, "empty",
                     [](Elem) { return std::vector<std::string>{}; });
  }

  Presheaf yoneda(QuantalePtr const& site, Elem u) {
    auto const& q = *site;
    return pointlike(site, "y(" + q.label(u) + ")", [&](Elem w) {
      return q.leq(w, u) ? std::vector<std::string>{q.label(w) + "<=" + q.label(u)}
                         : std::vector<std::string>{};
    });
  }

  ////////////////////////////////////////////////////////////////////////
  // Hom enumeration
  ////////////////////////////////////////////////////////////////////////

  void for_each_morphism(Presheaf const& f, Presheaf const& g,
                         std::function<bool(PresheafMorphism const&)> const& visit,
                         PartialMorphism const* fixed) {
    require_same_site(f, g);
    auto const& q     = *f.site();
    auto const& order = q.ascending();
    // One flat list of (object, section) slots, bottom objects first, so
    // every lower cover is decided before the sections above it.
    std::vector<std::pair<Elem, std::size_t>> slots;
    for (Elem u : order) {
      for (std::size_t s = 0; s < f.at(u).size(); ++s) {
        slots.emplace_back(u, s);
      }
    }
    std::vector<std::vector<std::size_t>> value(q.size());
    for (Elem u = 0; u < q.size(); ++u) {
      if (!f.at(u).empty() && g.at(u).empty()) {
        return;
      }
      value[u].assign(f.at(u).size(), 0);
    }
    bool stop = false;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (stop) {
        return;
      }
      if (k == slots.size()) {
        PresheafMorphism m;
        for (Elem u = 0; u < q.size(); ++u) {
          m.components.emplace_back(f.at(u), g.at(u), value[u]);
        }
        stop = !visit(m);
        return;
      }
      auto [u, s] = slots[k];
      std::optional<std::size_t> pin;
      if (fixed) {
        pin = (*fixed)[u][s];
        if (pin && *pin >= g.at(u).size()) {
          return;
        }
      }
      for (std::size_t t = pin.value_or(0);
           t < (pin ? *pin + 1 : g.at(u).size()); ++t) {
        bool ok = true;
        for (Elem c : q.lower_covers(u)) {
          if (g.res(u, c)(t) != value[c][f.res(u, c)(s)]) {
            ok = false;
            break;
          }
        }
        if (ok) {
          value[u][s] = t;
          rec(k + 1);
          if (stop) {
            return;
          }
        }
      }
    };
    rec(0);
  }

  std::vector<PresheafMorphism> hom_presheaves(Presheaf const& f,
                                               Presheaf const& g,
                                               std::size_t     limit) {
    std::vector<PresheafMorphism> out;
    for_each_morphism(f, g, [&](PresheafMorphism const& m) {
      if (out.size() == limit) {
        LOPOS_THROW(SearchLimit, "more than " + std::to_string(limit)
                                     + " morphisms " + f.name() + " -> "
                                     + g.name());
      }
      out.push_back(m);
      return true;
    });
    return out;
  }

  std::optional<PresheafMorphism> find_isomorphism(Presheaf const& f,
                                                   Presheaf const& g) {
    require_same_site(f, g);
    for (Elem u = 0; u < f.site()->size(); ++u) {
      if (f.at(u).size() != g.at(u).size()) {
        return std::nullopt;
      }
    }
    std::optional<PresheafMorphism> found;
    for_each_morphism(f, g, [&](PresheafMorphism const& m) {
      if (is_iso(m)) {
        found = m;
        return false;
      }
      return true;
    });
    return found;
  }

  ////////////////////////////////////////////////////////////////////////
  // Products and Day convolution
  ////////////////////////////////////////////////////////////////////////

  Presheaf product_presheaf(Presheaf const& f, Presheaf const& g,
                            QuantalePtr const& product_site) {
    auto p = product_site ? product_site : product_quantale(f.site(), g.site());
    if (!p->is_product() || !same_structure(*p->left(), *f.site())
        || !same_structure(*p->right(), *g.site())) {
      LOPOS_THROW(SiteMismatch, p->name() + " is not the product of "
                                    + f.site()->name() + " and "
                                    + g.site()->name());
    }
    PresheafBuilder     b(p, f.name() + "x" + g.name());
    std::vector<Product> prods;
    for (Elem u = 0; u < p->size(); ++u) {
      prods.push_back(product(f.at(p->fst(u)), g.at(p->snd(u))));
      b.at(u, prods.back().object);
    }
    for (Elem u = 0; u < p->size(); ++u) {
      for (Elem c : p->lower_covers(u)) {
        auto const& rf = f.res(p->fst(u), p->fst(c));
        auto const& rg = g.res(p->snd(u), p->snd(c));
        std::vector<std::size_t> map(prods[u].object.size());
        for (std::size_t s = 0; s < map.size(); ++s) {
          map[s] = prods[c].pair(rf(prods[u].proj1(s)), rg(prods[u].proj2(s)));
        }
        b.restrict(u, c, std::move(map));
      }
    }
    return b.build();
  }

  namespace {
    struct DayRaw {
      Elem        v;
      Elem        w;
      std::size_t x;
      std::size_t y;
    };

    struct DayLayer {
      std::vector<DayRaw> raw;
      FinSet              raw_set;
      Coequalizer         classes;
    };

    std::string day_label(Presheaf const& f, Presheaf const& g,
                          DayRaw const& r) {
      auto const& q = *f.site();
      return "[" + f.at(r.v).label(r.x) + "@" + q.label(r.v) + ","
             + g.at(r.w).label(r.y) + "@" + q.label(r.w) + "]";
    }

    std::vector<DayLayer> day_layers(Presheaf const& f, Presheaf const& g) {
      require_same_site(f, g);
      auto const&           q = *f.site();
      std::vector<DayLayer> layers(q.size());
      for (Elem u = 0; u < q.size(); ++u) {
        auto&                                       L = layers[u];
        std::vector<std::pair<std::string, DayRaw>> labelled;
        for (Elem v = 0; v < q.size(); ++v) {
          for (Elem w = 0; w < q.size(); ++w) {
            if (!q.leq(u, q.mul(v, w))) {
              continue;
            }
            for (std::size_t x = 0; x < f.at(v).size(); ++x) {
              for (std::size_t y = 0; y < g.at(w).size(); ++y) {
                DayRaw r{v, w, x, y};
                labelled.emplace_back(day_label(f, g, r), r);
              }
            }
          }
        }
        std::sort(labelled.begin(), labelled.end(),
                  [](auto const& a, auto const& b) { return a.first < b.first; });
        std::vector<std::string> labels;
        for (auto& [l, r] : labelled) {
          labels.push_back(l);
          L.raw.push_back(r);
        }
        L.raw_set = FinSet(std::move(labels));
        std::map<std::tuple<Elem, Elem, std::size_t, std::size_t>, std::size_t> index;
        for (std::size_t k = 0; k < L.raw.size(); ++k) {
          auto const& r = L.raw[k];
          index[{r.v, r.w, r.x, r.y}] = k;
        }
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t k = 0; k < L.raw.size(); ++k) {
          auto const& r = L.raw[k];
          for (Elem c : q.lower_covers(r.v)) {
            if (q.leq(u, q.mul(c, r.w))) {
              pairs.emplace_back(k, index.at({c, r.w, f.res(r.v, c)(r.x), r.y}));
            }
          }
          for (Elem c : q.lower_covers(r.w)) {
            if (q.leq(u, q.mul(r.v, c))) {
              pairs.emplace_back(k, index.at({r.v, c, r.x, g.res(r.w, c)(r.y)}));
            }
          }
        }
        L.classes = quotient(L.raw_set, pairs);
      }
      return layers;
    }

    std::size_t raw_index(DayLayer const& L, Presheaf const& f,
                          Presheaf const& g, DayRaw const& r) {
      return L.raw_set.index_of(day_label(f, g, r));
    }
  }  // namespace

  Presheaf day_convolve(Presheaf const& f, Presheaf const& g) {
    auto const&     q      = *f.site();
    auto            layers = day_layers(f, g);
    PresheafBuilder b(f.site(), f.name() + "*" + g.name());
    for (Elem u = 0; u < q.size(); ++u) {
      b.at(u, layers[u].classes.object);
    }
    for (Elem u = 0; u < q.size(); ++u) {
      auto const& L = layers[u];
      for (Elem c : q.lower_covers(u)) {
        auto const&              M = layers[c];
        std::vector<std::size_t> map(L.classes.object.size());
        for (std::size_t k = 0; k < L.raw.size(); ++k) {
          map[L.classes.quotient(k)] = M.classes.quotient(raw_index(M, f, g, L.raw[k]));
        }
        b.restrict(u, c, std::move(map));
      }
    }
    return b.build();
  }

  namespace {
    PresheafMorphism day_projection(Presheaf const& f, Presheaf const& g,
                                    Presheaf const& fg, bool first) {
      auto const&      q      = *f.site();
      auto             layers = day_layers(f, g);
      PresheafMorphism m;
      for (Elem u = 0; u < q.size(); ++u) {
        auto const&              L      = layers[u];
        auto const&              target = first ? f.at(u) : g.at(u);
        std::vector<std::size_t> map(fg.at(u).size(), 0);
        if (!(L.classes.object == fg.at(u))) {
          LOPOS_THROW(DomainMismatch, "not the Day convolution of these factors");
        }
        for (std::size_t k = 0; k < L.raw.size(); ++k) {
          auto const& r = L.raw[k];
          // u <= v (x) w lies below both factors on a semicartesian site.
          map[L.classes.quotient(k)]
              = first ? f.res(r.v, u)(r.x) : g.res(r.w, u)(r.y);
        }
        m.components.emplace_back(fg.at(u), target, std::move(map));
      }
      return m;
    }
  }  // namespace

  PresheafMorphism day_projection1(Presheaf const& f, Presheaf const& g,
                                   Presheaf const& fg) {
    return day_projection(f, g, fg, true);
  }

  PresheafMorphism day_projection2(Presheaf const& f, Presheaf const& g,
                                   Presheaf const& fg) {
    return day_projection(f, g, fg, false);
  }

  ////////////////////////////////////////////////////////////////////////
  // Sieves
  ////////////////////////////////////////////////////////////////////////

  Sieve sieve_of(QuantalePtr const& site, CoverFamily const& cover) {
    auto const& q  = *site;
    auto const& us = cover.legs;
    for (auto x : us) {
      if (!q.leq(x, cover.target)) {
        LOPOS_THROW(DomainMismatch, q.label(x) + " is not below "
                                        + q.label(cover.target));
      }
    }
    auto leg_label = [&](std::size_t i) {
      return std::to_string(i) + ":" + q.label(us[i]);
    };
    // At w: legs i with w <= u_i, glued along pairs (i, j) with
    // w <= u_i (x) u_j.
    std::vector<Coequalizer> at(q.size());
    std::vector<FinSet>      legs_at(q.size());
    for (Elem w = 0; w < q.size(); ++w) {
      std::vector<std::string> labels;
      for (std::size_t i = 0; i < us.size(); ++i) {
        if (q.leq(w, us[i])) {
          labels.push_back(leg_label(i));
        }
      }
      legs_at[w] = FinSet(labels);
      std::vector<std::string> pair_labels;
      std::vector<std::size_t> p1, p2;
      for (std::size_t i = 0; i < us.size(); ++i) {
        for (std::size_t j = 0; j < us.size(); ++j) {
          if (q.leq(w, q.mul(us[i], us[j]))) {
            pair_labels.push_back(pair_label(leg_label(i), leg_label(j)));
            p1.push_back(legs_at[w].index_of(leg_label(i)));
            p2.push_back(legs_at[w].index_of(leg_label(j)));
          }
        }
      }
      FinSet pairs(pair_labels);
      // FinSet sorts its labels, so place the projections accordingly.
      std::vector<std::size_t> a(pairs.size()), b(pairs.size());
      for (std::size_t k = 0; k < pair_labels.size(); ++k) {
        auto idx = pairs.index_of(pair_labels[k]);
        a[idx]   = p1[k];
        b[idx]   = p2[k];
      }
      at[w] = coequalizer(FinMap(pairs, legs_at[w], a), FinMap(pairs, legs_at[w], b));
    }
    Sieve out;
    out.cover = cover;
    std::string name = "S{";
    for (std::size_t i = 0; i < us.size(); ++i) {
      name += (i ? "," : "") + q.label(us[i]);
    }
    name += "}";
    PresheafBuilder b(site, name);
    for (Elem w = 0; w < q.size(); ++w) {
      b.at(w, at[w].object);
    }
    for (Elem w = 0; w < q.size(); ++w) {
      for (Elem c : q.lower_covers(w)) {
        std::vector<std::size_t> map(at[w].object.size());
        for (std::size_t k = 0; k < legs_at[w].size(); ++k) {
          auto leg = legs_at[c].index_of(legs_at[w].label(k));
          map[at[w].quotient(k)] = at[c].quotient(leg);
        }
        b.restrict(w, c, std::move(map));
      }
    }
    out.presheaf = b.build();
    auto target  = yoneda(site, cover.target);
    for (Elem w = 0; w < q.size(); ++w) {
      out.canonical.components.emplace_back(
          out.presheaf.at(w), target.at(w),
          std::vector<std::size_t>(out.presheaf.at(w).size(), 0));
    }
    for (std::size_t i = 0; i < us.size(); ++i) {
      auto             rep = yoneda(site, us[i]);
      PresheafMorphism leg;
      for (Elem w = 0; w < q.size(); ++w) {
        std::vector<std::size_t> map;
        if (q.leq(w, us[i])) {
          map.push_back(at[w].quotient(legs_at[w].index_of(leg_label(i))));
        }
        leg.components.emplace_back(rep.at(w), out.presheaf.at(w), std::move(map));
      }
      out.legs.push_back(std::move(leg));
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Subpresheaves
  ////////////////////////////////////////////////////////////////////////

  bool restriction_closed(Presheaf const& f, SectionMask const& mask) {
    auto const& q = *f.site();
    for (Elem u = 0; u < q.size(); ++u) {
      for (Elem c : q.lower_covers(u)) {
        for (std::size_t s = 0; s < f.at(u).size(); ++s) {
          if (mask[u][s] && !mask[c][f.res(u, c)(s)]) {
            return false;
          }
        }
      }
    }
    return true;
  }

  Presheaf subpresheaf(Presheaf const& f, SectionMask const& mask) {
    if (!restriction_closed(f, mask)) {
      LOPOS_THROW(InvalidMap, "section mask is not closed under restriction");
    }
    auto const&     q = *f.site();
    PresheafBuilder b(f.site(), f.name() + "'");
    std::vector<std::vector<std::size_t>> index(q.size());
    for (Elem u = 0; u < q.size(); ++u) {
      std::vector<std::string> labels;
      index[u].assign(f.at(u).size(), 0);
      for (std::size_t s = 0; s < f.at(u).size(); ++s) {
        if (mask[u][s]) {
          index[u][s] = labels.size();
          labels.push_back(f.at(u).label(s));
        }
      }
      b.at(u, labels);
    }
    for (Elem u = 0; u < q.size(); ++u) {
      for (Elem c : q.lower_covers(u)) {
        std::vector<std::size_t> map;
        for (std::size_t s = 0; s < f.at(u).size(); ++s) {
          if (mask[u][s]) {
            map.push_back(index[c][f.res(u, c)(s)]);
          }
        }
        b.restrict(u, c, std::move(map));
      }
    }
    return b.build();
  }

  PresheafMorphism inclusion(Presheaf const& f, SectionMask const& mask,
                             Presheaf const& sub) {
    PresheafMorphism m;
    for (Elem u = 0; u < f.site()->size(); ++u) {
      std::vector<std::size_t> map;
      for (std::size_t s = 0; s < f.at(u).size(); ++s) {
        if (mask[u][s]) {
          map.push_back(s);
        }
      }
      m.components.emplace_back(sub.at(u), f.at(u), std::move(map));
    }
    return m;
  }

  std::string describe_section(Presheaf const& f, Elem u, std::size_t s) {
    return f.at(u).label(s) + "@" + f.site()->label(u);
  }

}  // namespace lopos
