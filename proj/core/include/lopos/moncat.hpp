#ifndef LOPOS_MONCAT_HPP_
#define LOPOS_MONCAT_HPP_

// Finite semicartesian monoidal categories.
//
// A category is any type modelling the MonoidalCategory concept below; the
// generic algorithms (projections, pseudo-pullbacks, lifting, the axiom and
// coherence checkers) work on every model. Three models ship with the
// library: ThinCategory (a quantale as a poset category), FinSetCategory
// (finite sets with the cartesian product) and ProductCategory. A
// MutatedCategory wraps any model and replaces selected structure maps,
// which is how deliberately broken instances are produced for testing.

#include <concepts>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lopos/error.hpp"
#include "lopos/finset.hpp"
#include "lopos/quantale.hpp"

namespace lopos {

  template <typename Object, typename Morphism>
  struct EqualizerOf {
    Object   object;
    Morphism mono;
  };

  template <typename C>
  concept MonoidalCategory = requires(C const&                     c,
                                      typename C::Object const&   x,
                                      typename C::Morphism const& f) {
    { c.name() } -> std::convertible_to<std::string>;
    { c.objects() } -> std::convertible_to<std::vector<typename C::Object>>;
    { c.dom(f) } -> std::convertible_to<typename C::Object>;
    { c.cod(f) } -> std::convertible_to<typename C::Object>;
    { c.identity(x) } -> std::convertible_to<typename C::Morphism>;
    { c.compose(f, f) } -> std::convertible_to<typename C::Morphism>;
    { c.tensor(x, x) } -> std::convertible_to<typename C::Object>;
    { c.tensor_map(f, f) } -> std::convertible_to<typename C::Morphism>;
    { c.unit() } -> std::convertible_to<typename C::Object>;
    { c.associator(x, x, x) } -> std::convertible_to<typename C::Morphism>;
    { c.left_unitor(x) } -> std::convertible_to<typename C::Morphism>;
    { c.right_unitor(x) } -> std::convertible_to<typename C::Morphism>;
    { c.terminal(x) } -> std::convertible_to<typename C::Morphism>;
    {
      c.braiding(x, x)
    } -> std::convertible_to<std::optional<typename C::Morphism>>;
    {
      c.equalizer(f, f)
    } -> std::convertible_to<
        EqualizerOf<typename C::Object, typename C::Morphism>>;
    { c.same(f, f) } -> std::convertible_to<bool>;
    { c.same_object(x, x) } -> std::convertible_to<bool>;
    {
      c.hom(x, x)
    } -> std::convertible_to<std::vector<typename C::Morphism>>;
    { c.describe(x) } -> std::convertible_to<std::string>;
    { c.describe(f) } -> std::convertible_to<std::string>;
  };

  template <typename Morphism>
  struct Lift {
    std::optional<Morphism> first;
    // Number of lifts found, saturating at 2.
    std::size_t count = 0;
  };

  ////////////////////////////////////////////////////////////////////////
  // Thin category of a quantale
  ////////////////////////////////////////////////////////////////////////

  struct ThinArrow {
    Elem src;
    Elem dst;

    bool operator==(ThinArrow const&) const = default;
  };

  class ThinCategory {
   public:
    using Object   = Elem;
    using Morphism = ThinArrow;

    // Throws UnsupportedParam if the quantale has no unit.
    explicit ThinCategory(QuantalePtr q);

    QuantalePtr const& quantale() const noexcept {
      return _q;
    }
    bool semicartesian() const noexcept {
      return _semicartesian;
    }

    std::string         name() const;
    std::vector<Object> objects() const;
    Object              dom(Morphism const& f) const {
      return f.src;
    }
    Object cod(Morphism const& f) const {
      return f.dst;
    }
    // Throws DomainMismatch unless src <= dst.
    Morphism              arrow(Object src, Object dst) const;
    Morphism              identity(Object x) const;
    Morphism              compose(Morphism const& g, Morphism const& f) const;
    Object                tensor(Object x, Object y) const;
    Morphism              tensor_map(Morphism const& f, Morphism const& g) const;
    Object                unit() const;
    Morphism              associator(Object x, Object a, Object b) const;
    Morphism              left_unitor(Object x) const;
    Morphism              right_unitor(Object x) const;
    // Throws NotSemicartesian.
    Morphism              terminal(Object x) const;
    std::optional<Morphism> braiding(Object a, Object b) const;
    EqualizerOf<Object, Morphism> equalizer(Morphism const& f,
                                            Morphism const& g) const;
    bool same(Morphism const& f, Morphism const& g) const {
      return f == g;
    }
    bool same_object(Object x, Object y) const {
      return x == y;
    }
    std::vector<Morphism> hom(Object x, Object y) const;
    std::string           describe(Object x) const;
    std::string           describe(Morphism const& f) const;

   private:
    QuantalePtr _q;
    bool        _semicartesian;
    bool        _commutative;
  };

  ////////////////////////////////////////////////////////////////////////
  // Finite sets with the cartesian product
  ////////////////////////////////////////////////////////////////////////

  class FinSetCategory {
   public:
    using Object   = FinSet;
    using Morphism = FinMap;

    // Base objects are the sets {0, ..., n-1} for n <= size_bound.
    explicit FinSetCategory(std::size_t size_bound = 3);

    std::size_t size_bound() const noexcept {
      return _bound;
    }

    std::string         name() const;
    std::vector<Object> objects() const;
    Object              dom(Morphism const& f) const {
      return f.dom();
    }
    Object cod(Morphism const& f) const {
      return f.cod();
    }
    Morphism identity(Object const& x) const {
      return FinMap::identity(x);
    }
    Morphism compose(Morphism const& g, Morphism const& f) const {
      return lopos::compose(g, f);
    }
    Object   tensor(Object const& x, Object const& y) const;
    Morphism tensor_map(Morphism const& f, Morphism const& g) const;
    Object   unit() const;
    Morphism associator(Object const& x, Object const& a, Object const& b) const;
    Morphism left_unitor(Object const& x) const;
    Morphism right_unitor(Object const& x) const;
    Morphism terminal(Object const& x) const;
    std::optional<Morphism> braiding(Object const& a, Object const& b) const;
    EqualizerOf<Object, Morphism> equalizer(Morphism const& f,
                                            Morphism const& g) const;
    bool same(Morphism const& f, Morphism const& g) const {
      return f == g;
    }
    bool same_object(Object const& x, Object const& y) const {
      return x == y;
    }
    // All |y|^|x| functions; throws SearchLimit beyond 2^20 of them.
    std::vector<Morphism> hom(Object const& x, Object const& y) const;
    std::string           describe(Object const& x) const;
    std::string           describe(Morphism const& f) const;

    // Pointwise lifting: l with post[k] o l = want[k] for every k.
    Lift<Morphism> lift(Object const&                source,
                        Object const&                target,
                        std::vector<Morphism> const& post,
                        std::vector<Morphism> const& want) const;

   private:
    std::size_t _bound;
  };

  ////////////////////////////////////////////////////////////////////////
  // Generic lifting
  ////////////////////////////////////////////////////////////////////////

  template <typename C>
  concept HasLift = requires(C const&                                 c,
                             typename C::Object const&               x,
                             std::vector<typename C::Morphism> const& fs) {
    { c.lift(x, x, fs, fs) } -> std::convertible_to<Lift<typename C::Morphism>>;
  };

  // Morphisms l : source -> target with post[k] o l = want[k] for all k.
  template <MonoidalCategory C>
  Lift<typename C::Morphism>
  lift(C const&                                   c,
       typename C::Object const&                  source,
       typename C::Object const&                  target,
       std::vector<typename C::Morphism> const&   post,
       std::vector<typename C::Morphism> const&   want) {
    if constexpr (HasLift<C>) {
      return c.lift(source, target, post, want);
    } else {
      Lift<typename C::Morphism> result;
      for (auto const& l : c.hom(source, target)) {
        bool ok = true;
        for (std::size_t k = 0; k < post.size() && ok; ++k) {
          ok = c.same(c.compose(post[k], l), want[k]);
        }
        if (ok) {
          if (!result.first) {
            result.first = l;
          }
          if (++result.count == 2) {
            break;
          }
        }
      }
      return result;
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // Product of two categories
  ////////////////////////////////////////////////////////////////////////

  template <MonoidalCategory C1, MonoidalCategory C2>
  class ProductCategory {
   public:
    using Object   = std::pair<typename C1::Object, typename C2::Object>;
    using Morphism = std::pair<typename C1::Morphism, typename C2::Morphism>;

    ProductCategory(C1 first, C2 second)
        : _c1(std::move(first)), _c2(std::move(second)) {}

    C1 const& first() const noexcept {
      return _c1;
    }
    C2 const& second() const noexcept {
      return _c2;
    }

    std::string name() const {
      return _c1.name() + " x " + _c2.name();
    }
    std::vector<Object> objects() const {
      std::vector<Object> out;
      for (auto const& x : _c1.objects()) {
        for (auto const& y : _c2.objects()) {
          out.emplace_back(x, y);
        }
      }
      return out;
    }
    Object dom(Morphism const& f) const {
      return {_c1.dom(f.first), _c2.dom(f.second)};
    }
    Object cod(Morphism const& f) const {
      return {_c1.cod(f.first), _c2.cod(f.second)};
    }
    Morphism identity(Object const& x) const {
      return {_c1.identity(x.first), _c2.identity(x.second)};
    }
    Morphism compose(Morphism const& g, Morphism const& f) const {
      return {_c1.compose(g.first, f.first), _c2.compose(g.second, f.second)};
    }
    Object tensor(Object const& x, Object const& y) const {
      return {_c1.tensor(x.first, y.first), _c2.tensor(x.second, y.second)};
    }
    Morphism tensor_map(Morphism const& f, Morphism const& g) const {
      return {_c1.tensor_map(f.first, g.first),
              _c2.tensor_map(f.second, g.second)};
    }
    Object unit() const {
      return {_c1.unit(), _c2.unit()};
    }
    Morphism associator(Object const& x, Object const& a, Object const& b) const {
      return {_c1.associator(x.first, a.first, b.first),
              _c2.associator(x.second, a.second, b.second)};
    }
    Morphism left_unitor(Object const& x) const {
      return {_c1.left_unitor(x.first), _c2.left_unitor(x.second)};
    }
    Morphism right_unitor(Object const& x) const {
      return {_c1.right_unitor(x.first), _c2.right_unitor(x.second)};
    }
    Morphism terminal(Object const& x) const {
      return {_c1.terminal(x.first), _c2.terminal(x.second)};
    }
    std::optional<Morphism> braiding(Object const& a, Object const& b) const {
      auto b1 = _c1.braiding(a.first, b.first);
      auto b2 = _c2.braiding(a.second, b.second);
      if (!b1 || !b2) {
        return std::nullopt;
      }
      return Morphism{*b1, *b2};
    }
    EqualizerOf<Object, Morphism> equalizer(Morphism const& f,
                                            Morphism const& g) const {
      auto e1 = _c1.equalizer(f.first, g.first);
      auto e2 = _c2.equalizer(f.second, g.second);
      return {{e1.object, e2.object}, {e1.mono, e2.mono}};
    }
    bool same(Morphism const& f, Morphism const& g) const {
      return _c1.same(f.first, g.first) && _c2.same(f.second, g.second);
    }
    bool same_object(Object const& x, Object const& y) const {
      return _c1.same_object(x.first, y.first)
             && _c2.same_object(x.second, y.second);
    }
    std::vector<Morphism> hom(Object const& x, Object const& y) const {
      std::vector<Morphism> out;
      auto                  h2 = _c2.hom(x.second, y.second);
      for (auto const& f : _c1.hom(x.first, y.first)) {
        for (auto const& g : h2) {
          out.emplace_back(f, g);
        }
      }
      return out;
    }
    std::string describe(Object const& x) const {
      return "(" + _c1.describe(x.first) + ", " + _c2.describe(x.second) + ")";
    }
    std::string describe(Morphism const& f) const {
      return "(" + _c1.describe(f.first) + ", " + _c2.describe(f.second) + ")";
    }
    Lift<Morphism> lift(Object const&                source,
                        Object const&                target,
                        std::vector<Morphism> const& post,
                        std::vector<Morphism> const& want) const {
      std::vector<typename C1::Morphism> post1, want1;
      std::vector<typename C2::Morphism> post2, want2;
      for (std::size_t k = 0; k < post.size(); ++k) {
        post1.push_back(post[k].first);
        post2.push_back(post[k].second);
        want1.push_back(want[k].first);
        want2.push_back(want[k].second);
      }
      auto l1 = lopos::lift(_c1, source.first, target.first, post1, want1);
      auto l2 = lopos::lift(_c2, source.second, target.second, post2, want2);
      Lift<Morphism> result;
      if (l1.first && l2.first) {
        result.first = Morphism{*l1.first, *l2.first};
        result.count = std::min<std::size_t>(l1.count * l2.count, 2);
      }
      return result;
    }

   private:
    C1 _c1;
    C2 _c2;
  };

  ////////////////////////////////////////////////////////////////////////
  // Instances with replaced structure maps
  ////////////////////////////////////////////////////////////////////////

  template <MonoidalCategory C>
  class MutatedCategory {
   public:
    using Object   = typename C::Object;
    using Morphism = typename C::Morphism;

    using Ternary = std::function<Morphism(
        C const&, Object const&, Object const&, Object const&)>;
    using Binary
        = std::function<std::optional<Morphism>(C const&, Object const&,
                                                Object const&)>;
    using Unary = std::function<Morphism(C const&, Object const&)>;

    MutatedCategory(C base, std::string label)
        : _base(std::move(base)), _label(std::move(label)) {}

    MutatedCategory& with_associator(Ternary f) {
      _associator = std::move(f);
      return *this;
    }
    MutatedCategory& with_left_unitor(Unary f) {
      _left_unitor = std::move(f);
      return *this;
    }
    MutatedCategory& with_right_unitor(Unary f) {
      _right_unitor = std::move(f);
      return *this;
    }
    MutatedCategory& with_braiding(Binary f) {
      _braiding = std::move(f);
      return *this;
    }

    C const& base() const noexcept {
      return _base;
    }

    std::string name() const {
      return _base.name() + " [" + _label + "]";
    }
    std::vector<Object> objects() const {
      return _base.objects();
    }
    Object dom(Morphism const& f) const {
      return _base.dom(f);
    }
    Object cod(Morphism const& f) const {
      return _base.cod(f);
    }
    Morphism identity(Object const& x) const {
      return _base.identity(x);
    }
    Morphism compose(Morphism const& g, Morphism const& f) const {
      return _base.compose(g, f);
    }
    Object tensor(Object const& x, Object const& y) const {
      return _base.tensor(x, y);
    }
    Morphism tensor_map(Morphism const& f, Morphism const& g) const {
      return _base.tensor_map(f, g);
    }
    Object unit() const {
      return _base.unit();
    }
    Morphism associator(Object const& x, Object const& a, Object const& b) const {
      return _associator ? _associator(_base, x, a, b)
                         : _base.associator(x, a, b);
    }
    Morphism left_unitor(Object const& x) const {
      return _left_unitor ? _left_unitor(_base, x) : _base.left_unitor(x);
    }
    Morphism right_unitor(Object const& x) const {
      return _right_unitor ? _right_unitor(_base, x) : _base.right_unitor(x);
    }
    Morphism terminal(Object const& x) const {
      return _base.terminal(x);
    }
    std::optional<Morphism> braiding(Object const& a, Object const& b) const {
      return _braiding ? _braiding(_base, a, b) : _base.braiding(a, b);
    }
    EqualizerOf<Object, Morphism> equalizer(Morphism const& f,
                                            Morphism const& g) const {
      return _base.equalizer(f, g);
    }
    bool same(Morphism const& f, Morphism const& g) const {
      return _base.same(f, g);
    }
    bool same_object(Object const& x, Object const& y) const {
      return _base.same_object(x, y);
    }
    std::vector<Morphism> hom(Object const& x, Object const& y) const {
      return _base.hom(x, y);
    }
    std::string describe(Object const& x) const {
      return _base.describe(x);
    }
    std::string describe(Morphism const& f) const {
      return _base.describe(f);
    }
    Lift<Morphism> lift(Object const&                source,
                        Object const&                target,
                        std::vector<Morphism> const& post,
                        std::vector<Morphism> const& want) const {
      return lopos::lift(_base, source, target, post, want);
    }

   private:
    C           _base;
    std::string _label;
    Ternary     _associator;
    Unary       _left_unitor;
    Unary       _right_unitor;
    Binary      _braiding;
  };

  // Deliberately broken finite-set instances used by the mutation tests.
  enum class FinSetMutation {
    // b_{A,A} is the identity instead of the swap.
    braiding_identity_on_diagonal,
    // a_{X,A,A} additionally swaps the two A components.
    associator_swaps_equal_factors,
    // lambda_X is followed by a cyclic shift of X.
    left_unitor_shifted,
    // rho_X is followed by a cyclic shift of X; no braiding.
    right_unitor_shifted_unbraided,
    // rho_X is constant on the numbered sets {0..n-1} but correct on
    // tensor products; no braiding. Breaks the l/r factorizations.
    right_unitor_collapsed_on_generators
  };

  std::vector<FinSetMutation>     all_finset_mutations();
  std::string_view                to_string(FinSetMutation m) noexcept;
  MutatedCategory<FinSetCategory> mutate(FinSetCategory base,
                                         FinSetMutation m);

  ////////////////////////////////////////////////////////////////////////
  // Projections and pseudo-pullbacks
  ////////////////////////////////////////////////////////////////////////

  template <MonoidalCategory C>
  typename C::Morphism projection1(C const&                  c,
                                   typename C::Object const& x,
                                   typename C::Object const& y) {
    return c.compose(c.right_unitor(x),
                     c.tensor_map(c.identity(x), c.terminal(y)));
  }

  template <MonoidalCategory C>
  typename C::Morphism projection2(C const&                  c,
                                   typename C::Object const& x,
                                   typename C::Object const& y) {
    return c.compose(c.left_unitor(y),
                     c.tensor_map(c.terminal(x), c.identity(y)));
  }

  template <MonoidalCategory C>
  struct PseudoPullback {
    typename C::Object   apex;
    typename C::Morphism mono;
    typename C::Morphism p1;
    typename C::Morphism p2;
  };

  // Equalizer of f o pi1 and g o pi2 over dom f (x) dom g.
  // Throws CodomainMismatch.
  template <MonoidalCategory C>
  PseudoPullback<C> pseudo_pullback(C const&                    c,
                                    typename C::Morphism const& f,
                                    typename C::Morphism const& g) {
    if (!c.same_object(c.cod(f), c.cod(g))) {
      LOPOS_THROW(CodomainMismatch,
                  "pseudo-pullback of " + c.describe(f) + " and "
                      + c.describe(g) + " needs a common codomain");
    }
    auto a   = c.dom(f);
    auto b   = c.dom(g);
    auto pi1 = projection1(c, a, b);
    auto pi2 = projection2(c, a, b);
    auto eq  = c.equalizer(c.compose(f, pi1), c.compose(g, pi2));
    return {eq.object, eq.mono, c.compose(pi1, eq.mono),
            c.compose(pi2, eq.mono)};
  }

  // Whether the canonical comparison U (x) Eq(f, g) -> Eq(id (x) f, id (x) g)
  // is an isomorphism.
  template <MonoidalCategory C>
  bool tensor_preserves_equalizers(C const&                    c,
                                   typename C::Object const&   u,
                                   typename C::Morphism const& f,
                                   typename C::Morphism const& g) {
    if (!c.same_object(c.cod(f), c.cod(g))) {
      LOPOS_THROW(CodomainMismatch, "equalizer needs a parallel pair");
    }
    auto id_u  = c.identity(u);
    auto inner = c.equalizer(f, g);
    auto outer = c.equalizer(c.tensor_map(id_u, f), c.tensor_map(id_u, g));
    auto ue    = c.tensor_map(id_u, inner.mono);
    auto src   = c.tensor(u, inner.object);
    auto gamma = lift(c, src, outer.object, {outer.mono}, {ue});
    if (!gamma.first) {
      return false;
    }
    auto delta = lift(c, outer.object, src, {ue}, {outer.mono});
    if (!delta.first) {
      return false;
    }
    return c.same(c.compose(*gamma.first, *delta.first),
                  c.identity(outer.object))
           && c.same(c.compose(*delta.first, *gamma.first), c.identity(src));
  }

  struct FactorizationFailure {
    std::size_t i = 0;
    std::size_t j = 0;
    bool        left_side = true;  // l when true, r otherwise
    std::string witness;
  };

  template <MonoidalCategory C>
  struct FactorizationReport {
    bool                              ok = true;
    std::size_t                       pairs_checked = 0;
    std::vector<typename C::Morphism> l_witnesses;
    std::vector<typename C::Morphism> r_witnesses;
    std::vector<FactorizationFailure> failures;
  };

  // Searches, for every pair of legs (i, j), for l and r making the two
  // projection-factorization squares commute.
  template <MonoidalCategory C>
  FactorizationReport<C>
  exists_l_r_factorizations(C const&                                 c,
                            std::vector<typename C::Morphism> const& legs,
                            typename C::Object const&                v) {
    FactorizationReport<C> report;
    auto const             id_v = c.identity(v);
    for (std::size_t i = 0; i < legs.size(); ++i) {
      for (std::size_t j = 0; j < legs.size(); ++j) {
        ++report.pairs_checked;
        auto inner = pseudo_pullback(c, legs[i], legs[j]);
        {
          auto outer  = pseudo_pullback(c,
                                       c.tensor_map(id_v, legs[i]),
                                       c.tensor_map(id_v, legs[j]));
          auto target = c.tensor(v, inner.apex);
          auto l      = lift(c,
                        outer.apex,
                        target,
                        {c.tensor_map(id_v, inner.p1),
                         c.tensor_map(id_v, inner.p2)},
                        {outer.p1, outer.p2});
          if (l.first) {
            report.l_witnesses.push_back(*l.first);
          } else {
            report.ok = false;
            report.failures.push_back(
                {i, j, true,
                 "no l for V = " + c.describe(v) + ", legs "
                     + c.describe(legs[i]) + " and " + c.describe(legs[j])});
          }
        }
        {
          auto outer  = pseudo_pullback(c,
                                       c.tensor_map(legs[i], id_v),
                                       c.tensor_map(legs[j], id_v));
          auto target = c.tensor(inner.apex, v);
          auto r      = lift(c,
                        outer.apex,
                        target,
                        {c.tensor_map(inner.p1, id_v),
                         c.tensor_map(inner.p2, id_v)},
                        {outer.p1, outer.p2});
          if (r.first) {
            report.r_witnesses.push_back(*r.first);
          } else {
            report.ok = false;
            report.failures.push_back(
                {i, j, false,
                 "no r for V = " + c.describe(v) + ", legs "
                     + c.describe(legs[i]) + " and " + c.describe(legs[j])});
          }
        }
      }
    }
    return report;
  }

  ////////////////////////////////////////////////////////////////////////
  // Axiom and coherence reports
  ////////////////////////////////////////////////////////////////////////

  struct DiagramResult {
    std::string name;
    std::size_t checked = 0;
    std::size_t failed  = 0;
    std::string first_witness;
    bool        skipped = false;  // requirement (e.g. a braiding) absent
  };

  struct CoherenceReport {
    std::string                instance;
    std::size_t                size_bound = 0;
    std::vector<DiagramResult> diagrams;

    bool ok() const {
      for (auto const& d : diagrams) {
        if (d.failed != 0) {
          return false;
        }
      }
      return true;
    }
    DiagramResult const* find(std::string const& name) const {
      for (auto const& d : diagrams) {
        if (d.name == name) {
          return &d;
        }
      }
      return nullptr;
    }
  };

  namespace detail {
    class DiagramTally {
     public:
      explicit DiagramTally(std::string name) {
        _result.name = std::move(name);
      }
      template <typename Witness>
      void check(bool holds, Witness&& witness) {
        ++_result.checked;
        if (!holds) {
          if (_result.failed++ == 0) {
            _result.first_witness = std::forward<Witness>(witness)();
          }
        }
      }
      void skip() {
        _result.skipped = true;
      }
      DiagramResult take() {
        return std::move(_result);
      }

     private:
      DiagramResult _result;
    };

    template <MonoidalCategory C>
    std::string tuple(C const&                                      c,
                      std::initializer_list<typename C::Object> xs) {
      std::string out = "(";
      bool        first = true;
      for (auto const& x : xs) {
        if (!first) {
          out += ", ";
        }
        first = false;
        out += c.describe(x);
      }
      return out + ")";
    }
  }  // namespace detail

  // Category laws, pentagon, triangle, symmetric hexagon and
  // semicartesianness over every tuple of base objects.
  template <MonoidalCategory C>
  CoherenceReport verify_monoidal_axioms(C const& c) {
    using detail::DiagramTally;
    CoherenceReport report;
    report.instance = c.name();
    auto const objs = c.objects();

    DiagramTally identity_law("identity-law");
    DiagramTally assoc_law("composition-associative");
    auto const   n = objs.size();
    std::vector<std::vector<typename C::Morphism>> homs(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        homs[i * n + j] = c.hom(objs[i], objs[j]);
      }
    }
    for (std::size_t ia = 0; ia < n; ++ia) {
      for (std::size_t ib = 0; ib < n; ++ib) {
        for (auto const& f : homs[ia * n + ib]) {
          identity_law.check(
              c.same(c.compose(f, c.identity(objs[ia])), f)
                  && c.same(c.compose(c.identity(objs[ib]), f), f),
              [&] { return c.describe(f); });
          for (std::size_t ic = 0; ic < n; ++ic) {
            for (auto const& g : homs[ib * n + ic]) {
              auto const gf = c.compose(g, f);
              for (std::size_t id = 0; id < n; ++id) {
                for (auto const& h : homs[ic * n + id]) {
                  assoc_law.check(
                      c.same(c.compose(h, gf), c.compose(c.compose(h, g), f)),
                      [&] {
                        return c.describe(h) + " . " + c.describe(g) + " . "
                               + c.describe(f);
                      });
                }
              }
            }
          }
        }
      }
    }
    report.diagrams.push_back(identity_law.take());
    report.diagrams.push_back(assoc_law.take());

    DiagramTally pentagon("pentagon");
    DiagramTally triangle("triangle");
    DiagramTally hexagon("hexagon");
    DiagramTally symmetry("symmetry");
    DiagramTally semicartesian("unit-is-terminal");
    auto const   one = c.unit();
    for (auto const& x : objs) {
      auto h = c.hom(x, one);
      semicartesian.check(h.size() == 1 && c.same(h.front(), c.terminal(x)),
                          [&] { return c.describe(x); });
      for (auto const& a : objs) {
        triangle.check(
            c.same(c.compose(c.tensor_map(c.identity(x), c.left_unitor(a)),
                             c.associator(x, one, a)),
                   c.tensor_map(c.right_unitor(x), c.identity(a))),
            [&] { return detail::tuple(c, {x, a}); });
        auto bxa = c.braiding(x, a);
        auto bax = c.braiding(a, x);
        if (bxa && bax) {
          symmetry.check(c.same(c.compose(*bax, *bxa),
                                c.identity(c.tensor(x, a))),
                         [&] { return detail::tuple(c, {x, a}); });
        } else {
          symmetry.skip();
        }
        for (auto const& b : objs) {
          auto b_x_ab = c.braiding(x, c.tensor(a, b));
          auto b_xa   = c.braiding(x, a);
          auto b_xb   = c.braiding(x, b);
          if (b_x_ab && b_xa && b_xb) {
            // (X A) B -> X (A B) -> (A B) X -> A (B X)
            auto lhs = c.compose(c.associator(a, b, x),
                                 c.compose(*b_x_ab, c.associator(x, a, b)));
            // (X A) B -> (A X) B -> A (X B) -> A (B X)
            auto rhs = c.compose(
                c.tensor_map(c.identity(a), *b_xb),
                c.compose(c.associator(a, x, b),
                          c.tensor_map(*b_xa, c.identity(b))));
            hexagon.check(c.same(lhs, rhs),
                          [&] { return detail::tuple(c, {x, a, b}); });
          } else {
            hexagon.skip();
          }
          for (auto const& d : objs) {
            auto xa  = c.tensor(x, a);
            auto bd  = c.tensor(b, d);
            auto lhs = c.compose(c.associator(x, a, bd),
                                 c.associator(xa, b, d));
            auto rhs = c.compose(
                c.tensor_map(c.identity(x), c.associator(a, b, d)),
                c.compose(c.associator(x, c.tensor(a, b), d),
                          c.tensor_map(c.associator(x, a, b),
                                       c.identity(d))));
            pentagon.check(c.same(lhs, rhs),
                           [&] { return detail::tuple(c, {x, a, b, d}); });
          }
        }
      }
    }
    report.diagrams.push_back(pentagon.take());
    report.diagrams.push_back(triangle.take());
    report.diagrams.push_back(hexagon.take());
    report.diagrams.push_back(symmetry.take());
    report.diagrams.push_back(semicartesian.take());
    return report;
  }

  // The projection lemmas and the pseudo-pullback equalizing property,
  // over every tuple of base objects and every pair f : A -> C, g : B -> C.
  template <MonoidalCategory C>
  CoherenceReport verify_appendix_suite(C const& c) {
    using detail::DiagramTally;
    CoherenceReport report;
    report.instance = c.name();
    auto const objs = c.objects();
    auto const one  = c.unit();

    DiagramTally unit_left("unit-triangle-left");
    DiagramTally unit_right("unit-triangle-right");
    DiagramTally unit_braid_left("unit-braiding-left");
    DiagramTally unit_braid_right("unit-braiding-right");
    DiagramTally drop_first("drop-first-through-associator");
    DiagramTally drop_last("drop-last-through-associator");
    DiagramTally drop_middle("drop-middle-through-associator");
    DiagramTally factor_first("factor-first-projection");
    DiagramTally factor_second("factor-second-projection");
    DiagramTally braid_first("braided-first-projection");
    DiagramTally braid_second("braided-second-projection");
    DiagramTally equalizes("pseudo-pullback-equalizes");

    for (auto const& a : objs) {
      auto b_a1 = c.braiding(a, one);
      auto b_1a = c.braiding(one, a);
      if (b_a1 && b_1a) {
        unit_braid_left.check(
            c.same(c.compose(c.left_unitor(a), *b_a1), c.right_unitor(a)),
            [&] { return c.describe(a); });
        unit_braid_right.check(
            c.same(c.compose(c.right_unitor(a), *b_1a), c.left_unitor(a)),
            [&] { return c.describe(a); });
      } else {
        unit_braid_left.skip();
        unit_braid_right.skip();
      }
      for (auto const& b : objs) {
        auto const ab = c.tensor(a, b);
        unit_left.check(
            c.same(c.compose(c.left_unitor(ab), c.associator(one, a, b)),
                   c.tensor_map(c.left_unitor(a), c.identity(b))),
            [&] { return detail::tuple(c, {a, b}); });
        unit_right.check(
            c.same(c.compose(c.tensor_map(c.identity(a), c.right_unitor(b)),
                             c.associator(a, b, one)),
                   c.right_unitor(ab)),
            [&] { return detail::tuple(c, {a, b}); });
        auto bab = c.braiding(a, b);
        if (bab) {
          braid_first.check(
              c.same(projection1(c, a, b),
                     c.compose(projection2(c, b, a), *bab)),
              [&] { return detail::tuple(c, {a, b}); });
          braid_second.check(
              c.same(projection2(c, a, b),
                     c.compose(projection1(c, b, a), *bab)),
              [&] { return detail::tuple(c, {a, b}); });
        } else {
          braid_first.skip();
          braid_second.skip();
        }
        for (auto const& x : objs) {
          auto const id_b = c.identity(b);
          auto const id_a = c.identity(a);
          auto const id_x = c.identity(x);
          // pi2_{X, A B} . a_{X,A,B} = pi2_{X,A} (x) id_B
          drop_first.check(
              c.same(c.compose(projection2(c, x, ab), c.associator(x, a, b)),
                     c.tensor_map(projection2(c, x, a), id_b)),
              [&] { return detail::tuple(c, {x, a, b}); });
          // (id_A (x) pi1_{B,X}) . a_{A,B,X} = pi1_{A B, X}
          drop_last.check(
              c.same(c.compose(c.tensor_map(id_a, projection1(c, b, x)),
                               c.associator(a, b, x)),
                     projection1(c, ab, x)),
              [&] { return detail::tuple(c, {a, b, x}); });
          // (id_A (x) pi2_{X,B}) . a_{A,X,B} = pi1_{A,X} (x) id_B
          drop_middle.check(
              c.same(c.compose(c.tensor_map(id_a, projection2(c, x, b)),
                               c.associator(a, x, b)),
                     c.tensor_map(projection1(c, a, x), id_b)),
              [&] { return detail::tuple(c, {a, x, b}); });
          auto const xa = c.tensor(x, a);
          auto const xb = c.tensor(x, b);
          factor_first.check(
              c.same(projection1(c, xa, xb),
                     c.compose(c.tensor_map(id_x, projection1(c, a, b)),
                               c.compose(c.associator(x, a, b),
                                         c.tensor_map(c.identity(xa),
                                                      projection2(c, x, b))))),
              [&] { return detail::tuple(c, {x, a, b}); });
          factor_second.check(
              c.same(projection2(c, xa, xb),
                     c.compose(projection2(c, a, xb),
                               c.tensor_map(projection2(c, x, a),
                                            c.identity(xb)))),
              [&] { return detail::tuple(c, {x, a, b}); });

          // Equalizing property of the pseudo-pullback.
          auto const p1_xa_xb = projection1(c, xa, xb);
          auto const p2_xa_xb = projection2(c, xa, xb);
          auto const route
              = c.compose(c.associator(x, a, b),
                          c.tensor_map(c.identity(xa), projection2(c, x, b)));
          auto const id_pi1 = c.tensor_map(id_x, projection1(c, a, b));
          auto const id_pi2 = c.tensor_map(id_x, projection2(c, a, b));
          for (auto const& cc : objs) {
            auto const hac = c.hom(a, cc);
            auto const hbc = c.hom(b, cc);
            for (auto const& f : hac) {
              auto const idf = c.tensor_map(id_x, f);
              auto const phi = c.compose(idf, p1_xa_xb);
              auto const lhs = c.compose(idf, id_pi1);
              for (auto const& g : hbc) {
                auto const idg = c.tensor_map(id_x, g);
                auto const e
                    = c.equalizer(phi, c.compose(idg, p2_xa_xb)).mono;
                auto const m = c.compose(route, e);
                equalizes.check(
                    c.same(c.compose(lhs, m),
                           c.compose(c.compose(idg, id_pi2), m)),
                    [&] {
                      return detail::tuple(c, {x, a, b, cc}) + " f = "
                             + c.describe(f) + " g = " + c.describe(g);
                    });
              }
            }
          }
        }
      }
    }
    for (auto* t : {&unit_left, &unit_right, &unit_braid_left,
                    &unit_braid_right, &drop_first, &drop_last, &drop_middle,
                    &factor_first, &factor_second, &braid_first,
                    &braid_second, &equalizes}) {
      report.diagrams.push_back(t->take());
    }
    return report;
  }

  // Whether U (x) - preserves the equalizer of every parallel
  // pair between base objects, for every base object U.
  template <MonoidalCategory C>
  DiagramResult check_tensor_preserves_equalizers(C const& c) {
    detail::DiagramTally tally("tensor-preserves-equalizers");
    auto const           objs = c.objects();
    for (auto const& u : objs) {
      for (auto const& a : objs) {
        for (auto const& b : objs) {
          auto const h = c.hom(a, b);
          for (std::size_t i = 0; i < h.size(); ++i) {
            for (std::size_t j = i; j < h.size(); ++j) {
              tally.check(tensor_preserves_equalizers(c, u, h[i], h[j]), [&] {
                return "U = " + c.describe(u) + ", " + c.describe(h[i])
                       + " vs " + c.describe(h[j]);
              });
            }
          }
        }
      }
    }
    return tally.take();
  }

}  // namespace lopos

#endif  // LOPOS_MONCAT_HPP_
