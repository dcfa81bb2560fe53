#ifndef LOPOS_COVERAGE_HPP_
#define LOPOS_COVERAGE_HPP_

// Coverages on thin sites (a quantale viewed as a category) and exhaustive
// checkers for the covering axioms.
//
// A family of morphisms into u is determined by the multiset of its leg
// domains, since a thin category has at most one arrow between two objects.
// Families are stored as sorted multisets in which every multiplicity is
// truncated to the coverage's cap; two families are equal when their
// truncated multisets are.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lopos/quantale.hpp"

namespace lopos {

  using Family = std::vector<Elem>;

  struct CoverFamily {
    Elem   target = 0;
    Family legs;

    bool operator==(CoverFamily const&) const = default;
  };

  enum class CoverageFlavor {
    pretopology,
    weak_prelopology,
    prelopology,
    strong_prelopology
  };

  std::string_view              to_string(CoverageFlavor f) noexcept;
  std::optional<CoverageFlavor> coverage_flavor_from_string(std::string_view s);

  class Coverage {
   public:
    // Throws UnsupportedParam for a cap of zero.
    explicit Coverage(QuantalePtr site,
                      std::size_t multiplicity_cap = 2,
                      std::string name             = "coverage");

    QuantalePtr const& site() const noexcept {
      return _site;
    }
    std::size_t multiplicity_cap() const noexcept {
      return _cap;
    }
    std::string const& name() const noexcept {
      return _name;
    }
    void set_name(std::string name) {
      _name = std::move(name);
    }

    // Sorts and truncates multiplicities to the cap.
    Family normalize(Family legs) const;

    // Throws DomainMismatch if a leg is not below the target.
    void add(CoverFamily const& family);
    bool remove(CoverFamily const& family);
    bool covers(Elem target, Family const& legs) const;

    std::set<Family> const& families(Elem u) const {
      return _families.at(u);
    }
    std::size_t total_families() const;

    std::string describe(Family const& legs) const;
    std::string describe(CoverFamily const& family) const;

   private:
    QuantalePtr                   _site;
    std::size_t                   _cap;
    std::string                   _name;
    std::vector<std::set<Family>> _families;
  };

  // Calls `visit` with every sorted multiset over `support` whose
  // multiplicities are at most `cap`. Throws SearchLimit past `limit`.
  void for_each_capped_multiset(std::vector<Elem> const&               support,
                                std::size_t                            cap,
                                std::size_t                            limit,
                                std::function<void(Family const&)> const& visit);

  inline constexpr std::size_t kFamilyLimit = 250000;

  // {u_i -> u} covers u iff the join of the u_i is u. Throws
  // NotSemicartesian.
  Coverage canonical_quantale_coverage(QuantalePtr const& q,
                                       std::size_t        multiplicity_cap = 2);

  // Only the identity singletons.
  Coverage trivial_coverage(QuantalePtr const& q,
                            std::size_t        multiplicity_cap = 2);

  struct AxiomViolation {
    int         axiom = 0;
    CoverFamily family;
    std::string witness;
  };

  struct CoverageReport {
    CoverageFlavor              flavor = CoverageFlavor::prelopology;
    std::vector<int>            axioms_checked;
    std::array<std::size_t, 6>  failures{};
    std::size_t                 instances_checked = 0;
    // The first few violations of each axiom.
    std::vector<AxiomViolation> violations;

    bool ok() const noexcept {
      for (auto f : failures) {
        if (f != 0) {
          return false;
        }
      }
      return true;
    }
    std::size_t failures_of(int axiom) const {
      return failures.at(static_cast<std::size_t>(axiom));
    }
  };

  std::string_view axiom_name(CoverageFlavor flavor, int axiom) noexcept;

  // Axioms 1-3: isomorphisms, composition, two-sided tensor stability.
  CoverageReport check_weak_prelopology(Coverage const& c);
  // Adds axiom 4: stability under pseudo-pullback, both sides.
  CoverageReport check_prelopology(Coverage const& c);
  // Adds axiom 5: the l and r factorizations for every cover and object.
  CoverageReport check_strong_prelopology(Coverage const& c);
  // Isomorphisms, composition and pullback stability with genuine
  // pullbacks. Throws NotCartesianSite unless the tensor is the meet.
  CoverageReport check_pretopology(Coverage const& c);
  CoverageReport check_coverage(Coverage const& c, CoverageFlavor flavor);

  // Families in L1 x L2 are those whose component families lie in L1 and
  // L2. Throws UnverifiedInput unless both are prelopologies, and
  // SiteMismatch if `site` is given but is not the product of their sites.
  Coverage product_coverage(Coverage const&    l1,
                            Coverage const&    l2,
                            QuantalePtr const& site = nullptr);

  // The first family on which two coverages of the same site differ, and
  // whether it belongs to the first.
  struct CoverageDifference {
    CoverFamily family;
    bool        in_first = false;
  };
  std::optional<CoverageDifference> compare_coverages(Coverage const& a,
                                                      Coverage const& b);

}  // namespace lopos

#endif  // LOPOS_COVERAGE_HPP_
