#ifndef LOPOS_PRESHEAF_HPP_
#define LOPOS_PRESHEAF_HPP_

// Set-valued presheaves on a thin site. A presheaf assigns a finite set to
// every element of the quantale and a restriction map F(u) -> F(v) to every
// pair v <= u.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lopos/coverage.hpp"
#include "lopos/error.hpp"
#include "lopos/finset.hpp"
#include "lopos/quantale.hpp"

namespace lopos {

  class Presheaf {
   public:
    Presheaf() = default;

    QuantalePtr const& site() const noexcept {
      return _site;
    }
    std::string const& name() const noexcept {
      return _name;
    }
    void set_name(std::string name) {
      _name = std::move(name);
    }

    FinSet const& at(Elem u) const {
      return _at.at(u);
    }
    // Throws DomainMismatch unless v <= u.
    FinMap const& res(Elem u, Elem v) const;

    std::size_t total_sections() const;

    bool operator==(Presheaf const& that) const;

   private:
    friend class PresheafBuilder;

    QuantalePtr                        _site;
    std::string                        _name;
    std::vector<FinSet>                _at;
    std::vector<std::optional<FinMap>> _res;
  };

  // Collects sections and restrictions. Restrictions along the covering
  // relation of the order are required; the others are derived by
  // composition, and any that are given must agree with the composite.
  class PresheafBuilder {
   public:
    explicit PresheafBuilder(QuantalePtr site, std::string name = "presheaf");

    PresheafBuilder& at(Elem u, std::vector<std::string> sections);
    PresheafBuilder& at(Elem u, FinSet sections);
    PresheafBuilder& at(Elem u, std::initializer_list<std::string> sections) {
      return at(u, FinSet(sections));
    }
    PresheafBuilder& restrict(Elem u, Elem v, std::vector<std::size_t> map);
    PresheafBuilder& restrict(Elem u, Elem v, FinMap map);

    // Throws MissingRestriction, CompositionFails, InvalidMap or
    // DomainMismatch.
    Presheaf build() const;

   private:
    QuantalePtr                        _site;
    std::string                        _name;
    std::vector<FinSet>                _at;
    std::vector<std::optional<FinMap>> _res;
  };

  // Label-based input, as read from files.
  struct RestrictionSpec {
    std::string                                      upper;
    std::string                                      lower;
    std::vector<std::pair<std::string, std::string>> map;
  };

  struct PresheafSpec {
    std::string                                                    name;
    std::vector<std::pair<std::string, std::vector<std::string>>> at;
    std::vector<RestrictionSpec>                                   res;
  };

  struct PresheafProblem {
    ErrorKind   kind;
    std::string message;
  };

  struct PresheafValidation {
    std::optional<Presheaf>      presheaf;
    std::vector<PresheafProblem> problems;

    bool ok() const noexcept {
      return presheaf.has_value();
    }
  };

  // Objects missing from `at` get the empty set.
  PresheafValidation validate_presheaf(QuantalePtr const& site,
                                       PresheafSpec const& spec);
  PresheafSpec       to_spec(Presheaf const& f);

  struct PresheafMorphism {
    std::vector<FinMap> components;

    FinMap const& operator[](Elem u) const {
      return components.at(u);
    }
    bool operator==(PresheafMorphism const&) const = default;
  };

  bool             is_natural(Presheaf const& f, Presheaf const& g,
                              PresheafMorphism const& phi);
  PresheafMorphism identity_morphism(Presheaf const& f);
  PresheafMorphism compose(PresheafMorphism const& psi,
                           PresheafMorphism const& phi);
  bool             is_mono(PresheafMorphism const& m);
  bool             is_epi(PresheafMorphism const& m);
  bool             is_iso(PresheafMorphism const& m);

  Presheaf terminal_presheaf(QuantalePtr const& site);
  Presheaf empty_presheaf(QuantalePtr const& site);
  // y(u)(w) = hom(w, u): the single arrow "w<=u" when w <= u.
  Presheaf yoneda(QuantalePtr const& site, Elem u);

  // Prescribed values for some components: fixed[u][s] pins the image of
  // section s of F(u).
  using PartialMorphism = std::vector<std::vector<std::optional<std::size_t>>>;

  // Visits every natural transformation f -> g agreeing with `fixed` until
  // `visit` returns false. Throws SiteMismatch.
  void for_each_morphism(Presheaf const& f, Presheaf const& g,
                         std::function<bool(PresheafMorphism const&)> const& visit,
                         PartialMorphism const* fixed = nullptr);
  // Throws SearchLimit past `limit` morphisms.
  std::vector<PresheafMorphism> hom_presheaves(Presheaf const& f,
                                               Presheaf const& g,
                                               std::size_t     limit = 1 << 20);
  std::optional<PresheafMorphism> find_isomorphism(Presheaf const& f,
                                                   Presheaf const& g);

  // Pointwise product on the product site, with componentwise restrictions.
  Presheaf product_presheaf(Presheaf const& f, Presheaf const& g,
                            QuantalePtr const& product_site = nullptr);

  // (F * G)(u): pairs (x, y) in F(v) x G(w) over u <= v (x) w, identified
  // along restriction in either coordinate.
  Presheaf day_convolve(Presheaf const& f, Presheaf const& g);

  // First and second projections F * G -> F and F * G -> G.
  PresheafMorphism day_projection1(Presheaf const& f, Presheaf const& g,
                                   Presheaf const& fg);
  PresheafMorphism day_projection2(Presheaf const& f, Presheaf const& g,
                                   Presheaf const& fg);

  // The coequalizer of the pseudo-pullback legs into the coproduct of the
  // representables of a cover, with the canonical morphism into y(target).
  struct Sieve {
    CoverFamily                   cover;
    Presheaf                      presheaf;
    PresheafMorphism              canonical;
    // y(u_i) -> S for every leg.
    std::vector<PresheafMorphism> legs;
  };

  Sieve sieve_of(QuantalePtr const& site, CoverFamily const& cover);

  // Subpresheaf given by a membership mask per object; the mask must be
  // closed under restriction.
  using SectionMask = std::vector<std::vector<bool>>;
  bool     restriction_closed(Presheaf const& f, SectionMask const& mask);
  Presheaf subpresheaf(Presheaf const& f, SectionMask const& mask);
  PresheafMorphism inclusion(Presheaf const& f, SectionMask const& mask,
                             Presheaf const& sub);

  std::string describe_section(Presheaf const& f, Elem u, std::size_t s);

}  // namespace lopos

#endif  // LOPOS_PRESHEAF_HPP_
