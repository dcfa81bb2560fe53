#include "lopos/moncat.hpp"

#include <numeric>

namespace lopos {

  ////////////////////////////////////////////////////////////////////////
  // ThinCategory
  ////////////////////////////////////////////////////////////////////////

  ThinCategory::ThinCategory(QuantalePtr q) : _q(std::move(q)) {
    if (!_q->unit()) {
      LOPOS_THROW(UnsupportedParam,
                  _q->name() + " has no unit, so it is not monoidal");
    }
    auto flags     = classify_quantale(*_q);
    _semicartesian = flags.semicartesian;
    _commutative   = flags.commutative;
  }

  std::string ThinCategory::name() const {
    return _q->name();
  }

  std::vector<Elem> ThinCategory::objects() const {
    std::vector<Elem> out(_q->size());
    std::iota(out.begin(), out.end(), 0);
    return out;
  }

  ThinArrow ThinCategory::arrow(Elem src, Elem dst) const {
    if (!_q->leq(src, dst)) {
      LOPOS_THROW(DomainMismatch,
                  "no arrow " + _q->label(src) + " -> " + _q->label(dst));
    }
    return {src, dst};
  }

  ThinArrow ThinCategory::identity(Elem x) const {
    return {x, x};
  }

  ThinArrow ThinCategory::compose(ThinArrow const& g, ThinArrow const& f) const {
    if (f.dst != g.src) {
      LOPOS_THROW(DomainMismatch,
                  "cannot compose " + describe(g) + " after " + describe(f));
    }
    return {f.src, g.dst};
  }

  Elem ThinCategory::tensor(Elem x, Elem y) const {
    return _q->mul(x, y);
  }

  ThinArrow ThinCategory::tensor_map(ThinArrow const& f,
                                     ThinArrow const& g) const {
    return arrow(_q->mul(f.src, g.src), _q->mul(f.dst, g.dst));
  }

  Elem ThinCategory::unit() const {
    return *_q->unit();
  }

  ThinArrow ThinCategory::associator(Elem x, Elem a, Elem b) const {
    return arrow(_q->mul(_q->mul(x, a), b), _q->mul(x, _q->mul(a, b)));
  }

  ThinArrow ThinCategory::left_unitor(Elem x) const {
    return arrow(_q->mul(unit(), x), x);
  }

  ThinArrow ThinCategory::right_unitor(Elem x) const {
    return arrow(_q->mul(x, unit()), x);
  }

  ThinArrow ThinCategory::terminal(Elem x) const {
    if (!_semicartesian) {
      LOPOS_THROW(NotSemicartesian, _q->name() + " is not semicartesian");
    }
    return arrow(x, unit());
  }

  std::optional<ThinArrow> ThinCategory::braiding(Elem a, Elem b) const {
    if (!_commutative) {
      return std::nullopt;
    }
    return arrow(_q->mul(a, b), _q->mul(b, a));
  }

  EqualizerOf<Elem, ThinArrow> ThinCategory::equalizer(ThinArrow const& f,
                                                       ThinArrow const& g) const {
    if (!(f == g)) {
      LOPOS_THROW(DomainMismatch, "equalizer needs a parallel pair");
    }
    return {f.src, identity(f.src)};
  }

  std::vector<ThinArrow> ThinCategory::hom(Elem x, Elem y) const {
    if (_q->leq(x, y)) {
      return {ThinArrow{x, y}};
    }
    return {};
  }

  std::string ThinCategory::describe(Elem x) const {
    return _q->label(x);
  }

  std::string ThinCategory::describe(ThinArrow const& f) const {
    return _q->label(f.src) + "<=" + _q->label(f.dst);
  }

  ////////////////////////////////////////////////////////////////////////
  // FinSetCategory
  ////////////////////////////////////////////////////////////////////////

  namespace {
    FinMap swap_map(FinSet const& a, FinSet const& b) {
      auto                     ab = product(a, b);
      auto                     ba = product(b, a);
      std::vector<std::size_t> assignment(ab.object.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
          assignment[ab.pair(i, j)] = ba.pair(j, i);
        }
      }
      return FinMap(ab.object, ba.object, std::move(assignment));
    }

    FinMap cyclic_shift(FinSet const& x) {
      std::vector<std::size_t> assignment(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        assignment[i] = (i + 1) % x.size();
      }
      return FinMap(x, x, std::move(assignment));
    }

    FinSet numbered_set(std::size_t n) {
      std::vector<std::string> labels;
      for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(std::to_string(i));
      }
      return FinSet(std::move(labels));
    }
  }  // namespace

  FinSetCategory::FinSetCategory(std::size_t size_bound) : _bound(size_bound) {
    if (size_bound > 6) {
      LOPOS_THROW(UnsupportedParam,
                  "finite-set size bound must be at most 6, got "
                      + std::to_string(size_bound));
    }
  }

  std::string FinSetCategory::name() const {
    return "finset(" + std::to_string(_bound) + ")";
  }

  std::vector<FinSet> FinSetCategory::objects() const {
    std::vector<FinSet> out;
    for (std::size_t n = 0; n <= _bound; ++n) {
      out.push_back(numbered_set(n));
    }
    return out;
  }

  FinSet FinSetCategory::tensor(FinSet const& x, FinSet const& y) const {
    return product(x, y).object;
  }

  FinMap FinSetCategory::tensor_map(FinMap const& f, FinMap const& g) const {
    auto                     src = product(f.dom(), g.dom());
    auto                     dst = product(f.cod(), g.cod());
    std::vector<std::size_t> assignment(src.object.size());
    for (std::size_t a = 0; a < f.dom().size(); ++a) {
      for (std::size_t b = 0; b < g.dom().size(); ++b) {
        assignment[src.pair(a, b)] = dst.pair(f(a), g(b));
      }
    }
    return FinMap(src.object, dst.object, std::move(assignment));
  }

  FinSet FinSetCategory::unit() const {
    static FinSet const one{"*"};
    return one;
  }

  FinMap FinSetCategory::associator(FinSet const& x,
                                    FinSet const& a,
                                    FinSet const& b) const {
    auto                     xa  = product(x, a);
    auto                     ab  = product(a, b);
    auto                     src = product(xa.object, b);
    auto                     dst = product(x, ab.object);
    std::vector<std::size_t> assignment(src.object.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < a.size(); ++j) {
        for (std::size_t k = 0; k < b.size(); ++k) {
          assignment[src.pair(xa.pair(i, j), k)] = dst.pair(i, ab.pair(j, k));
        }
      }
    }
    return FinMap(src.object, dst.object, std::move(assignment));
  }

  FinMap FinSetCategory::left_unitor(FinSet const& x) const {
    return product(unit(), x).proj2;
  }

  FinMap FinSetCategory::right_unitor(FinSet const& x) const {
    return product(x, unit()).proj1;
  }

  FinMap FinSetCategory::terminal(FinSet const& x) const {
    return FinMap(x, unit(), std::vector<std::size_t>(x.size(), 0));
  }

  std::optional<FinMap> FinSetCategory::braiding(FinSet const& a,
                                                 FinSet const& b) const {
    return swap_map(a, b);
  }

  EqualizerOf<FinSet, FinMap> FinSetCategory::equalizer(FinMap const& f,
                                                        FinMap const& g) const {
    auto eq = lopos::equalizer(f, g);
    return {eq.object, eq.inclusion};
  }

  std::vector<FinMap> FinSetCategory::hom(FinSet const& x,
                                          FinSet const& y) const {
    std::vector<FinMap> out;
    if (y.empty()) {
      if (x.empty()) {
        out.push_back(FinMap(x, y, {}));
      }
      return out;
    }
    double total = 1;
    for (std::size_t i = 0; i < x.size(); ++i) {
      total *= static_cast<double>(y.size());
    }
    if (total > double(1 << 20)) {
      LOPOS_THROW(SearchLimit,
                  "hom-set " + x.to_string() + " -> " + y.to_string()
                      + " is too large to enumerate");
    }
    std::vector<std::size_t> digits(x.size(), 0);
    while (true) {
      out.emplace_back(x, y, digits);
      std::size_t i = 0;
      while (i < digits.size() && ++digits[i] == y.size()) {
        digits[i++] = 0;
      }
      if (i == digits.size()) {
        break;
      }
    }
    return out;
  }

  std::string FinSetCategory::describe(FinSet const& x) const {
    return x.to_string();
  }

  std::string FinSetCategory::describe(FinMap const& f) const {
    return f.to_string();
  }

  Lift<FinMap> FinSetCategory::lift(FinSet const&              source,
                                    FinSet const&              target,
                                    std::vector<FinMap> const& post,
                                    std::vector<FinMap> const& want) const {
    for (std::size_t k = 0; k < post.size(); ++k) {
      if (!(post[k].dom() == target) || !(want[k].dom() == source)
          || !(post[k].cod() == want[k].cod())) {
        LOPOS_THROW(DomainMismatch, "lifting problem is not well typed");
      }
    }
    Lift<FinMap>             result;
    std::vector<std::size_t> assignment(source.size());
    std::size_t              count = 1;
    for (std::size_t x = 0; x < source.size(); ++x) {
      std::size_t candidates = 0;
      for (std::size_t y = 0; y < target.size(); ++y) {
        bool ok = true;
        for (std::size_t k = 0; k < post.size() && ok; ++k) {
          ok = post[k](y) == want[k](x);
        }
        if (ok) {
          if (candidates++ == 0) {
            assignment[x] = y;
          }
        }
      }
      if (candidates == 0) {
        return result;
      }
      count = std::min<std::size_t>(count * candidates, 2);
    }
    result.first = FinMap(source, target, std::move(assignment));
    result.count = count;
    return result;
  }

  ////////////////////////////////////////////////////////////////////////
  // Mutations
  ////////////////////////////////////////////////////////////////////////

  std::vector<FinSetMutation> all_finset_mutations() {
    return {FinSetMutation::braiding_identity_on_diagonal,
            FinSetMutation::associator_swaps_equal_factors,
            FinSetMutation::left_unitor_shifted,
            FinSetMutation::right_unitor_shifted_unbraided,
            FinSetMutation::right_unitor_collapsed_on_generators};
  }

  std::string_view to_string(FinSetMutation m) noexcept {
    switch (m) {
      case FinSetMutation::braiding_identity_on_diagonal:
        return "braiding-identity-on-diagonal";
      case FinSetMutation::associator_swaps_equal_factors:
        return "associator-swaps-equal-factors";
      case FinSetMutation::left_unitor_shifted:
        return "left-unitor-shifted";
      case FinSetMutation::right_unitor_shifted_unbraided:
        return "right-unitor-shifted-unbraided";
      case FinSetMutation::right_unitor_collapsed_on_generators:
        return "right-unitor-collapsed-on-generators";
    }
    return "unknown";
  }

  MutatedCategory<FinSetCategory> mutate(FinSetCategory base,
                                         FinSetMutation m) {
    using Mutated = MutatedCategory<FinSetCategory>;
    Mutated out(std::move(base), std::string(to_string(m)));
    switch (m) {
      case FinSetMutation::braiding_identity_on_diagonal:
        out.with_braiding([](FinSetCategory const& c,
                             FinSet const&         a,
                             FinSet const&         b) -> std::optional<FinMap> {
          if (a == b && a.size() >= 2) {
            return c.identity(c.tensor(a, a));
          }
          return c.braiding(a, b);
        });
        break;
      case FinSetMutation::associator_swaps_equal_factors:
        out.with_associator([](FinSetCategory const& c,
                               FinSet const&         x,
                               FinSet const&         a,
                               FinSet const&         b) {
          auto assoc = c.associator(x, a, b);
          if (a == b && a.size() >= 2) {
            return c.compose(c.tensor_map(c.identity(x), swap_map(a, a)),
                             assoc);
          }
          return assoc;
        });
        break;
      case FinSetMutation::left_unitor_shifted:
        out.with_left_unitor([](FinSetCategory const& c, FinSet const& x) {
          return c.compose(cyclic_shift(x), c.left_unitor(x));
        });
        break;
      case FinSetMutation::right_unitor_shifted_unbraided:
        out.with_right_unitor([](FinSetCategory const& c, FinSet const& x) {
             return c.compose(cyclic_shift(x), c.right_unitor(x));
           })
            .with_braiding([](FinSetCategory const&, FinSet const&,
                              FinSet const&) -> std::optional<FinMap> {
              return std::nullopt;
            });
        break;
      case FinSetMutation::right_unitor_collapsed_on_generators:
        out.with_right_unitor([](FinSetCategory const& c, FinSet const& x) {
             if (x.empty() || !(x == numbered_set(x.size()))) {
               return c.right_unitor(x);
             }
             auto src = c.tensor(x, c.unit());
             return FinMap(src, x, std::vector<std::size_t>(src.size(), 0));
           })
            .with_braiding([](FinSetCategory const&, FinSet const&,
                              FinSet const&) -> std::optional<FinMap> {
              return std::nullopt;
            });
        break;
    }
    return out;
  }

}  // namespace lopos
