#ifndef LOPOS_REFLECT_HPP_
#define LOPOS_REFLECT_HPP_

// Sheafification by forcing gluings into existence and merging duplicate
// gluings, plus what is built on top of it: sheaf tensor, subsheaf
// lattices, extremal factorizations and the * operation. Also the down-set
// criterion for a sup-lattice with a multiplication to be a quantale.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lopos/coverage.hpp"
#include "lopos/presheaf.hpp"
#include "lopos/quantale.hpp"
#include "lopos/sheaf.hpp"

namespace lopos {

  inline constexpr std::size_t kDefaultMaxIter = 16;

  struct ReflectionResult {
    Presheaf         sheaf;
    // P -> a(P).
    PresheafMorphism unit;
    std::size_t      iterations = 0;
    bool             converged  = false;
    // Sections added and merged by the last step, or why it stopped.
    std::string      diagnostic;
  };

  // Never throws NotConverged; inspect `converged`. Throws SiteMismatch.
  ReflectionResult sheafify(Presheaf const& p, Coverage const& l,
                            std::size_t max_iter = kDefaultMaxIter);

  // The unique a(P) -> G restricting to psi along the unit, if any.
  std::optional<PresheafMorphism> extend_along_unit(ReflectionResult const& r,
                                                    PresheafMorphism const& psi,
                                                    Presheaf const&         g);

  // Every sheaf with at most `max_size` sections per object, one per
  // isomorphism class. Throws SearchLimit past `limit` candidates.
  std::vector<Presheaf> sheaf_battery(Coverage const& l, std::size_t max_size = 2,
                                      std::size_t limit = 1 << 22);

  struct CertificationReport {
    bool                     orthogonal   = false;
    std::size_t              battery_size = 0;
    std::size_t              bijections   = 0;
    std::vector<std::string> failures;

    bool ok() const noexcept {
      return orthogonal && failures.empty();
    }
  };

  // Checks that a(P) is a sheaf by the orthogonality test and that
  // precomposition with the unit is a bijection Hom(a(P), G) -> Hom(P, G)
  // for every G in the battery. Only as strong as the battery.
  CertificationReport certify_reflection(Presheaf const& p,
                                         ReflectionResult const& r,
                                         Coverage const& l,
                                         std::vector<Presheaf> const& battery);

  // a(F * G). Throws NotConverged.
  Presheaf sheaf_tensor(Presheaf const& f, Presheaf const& g, Coverage const& l,
                        std::size_t max_iter = kDefaultMaxIter);

  bool preserves_terminal(Coverage const& l);

  // Smallest subsheaf of the sheaf F whose sections include the mask.
  SectionMask least_subsheaf_containing(Presheaf const& f, Coverage const& l,
                                        SectionMask const& mask);

  struct SubobjectLattice {
    Presheaf                              parent;
    std::vector<SectionMask>              elements;
    // leq[i][j]: element i is contained in element j.
    std::vector<std::vector<bool>>        leq;
    std::vector<std::vector<std::size_t>> meet;
    std::vector<std::vector<std::size_t>> join;
    std::size_t                           bottom = 0;
    std::size_t                           top    = 0;

    std::size_t size() const noexcept {
      return elements.size();
    }
    std::size_t index_of(SectionMask const& m) const;
  };

  // All subsheaves of the sheaf F. Throws UnverifiedInput if F is not one.
  SubobjectLattice subsheaf_lattice(Presheaf const& f, Coverage const& l);

  struct ExtremalFactorization {
    SectionMask      image;
    Presheaf         middle;
    PresheafMorphism epi;
    PresheafMorphism mono;
    // Sheaves H on which precomposition with `epi` was checked injective.
    std::size_t      cancellation_checked = 0;
    bool             epi_cancels          = true;
  };

  // phi: F -> G between sheaves through the least subsheaf of G containing
  // its image.
  ExtremalFactorization extremal_factorize(Presheaf const& f, Presheaf const& g,
                                           PresheafMorphism const& phi,
                                           Coverage const& l,
                                           std::vector<Presheaf> const& battery = {});

  // The * operation on subsheaves of F: the image in F of the equalizer of
  // F0 (x) F1 => F. Throws NotConverged.
  SectionMask star(Presheaf const& f, SectionMask const& m0,
                   SectionMask const& m1, Coverage const& l,
                   std::size_t max_iter = kDefaultMaxIter);

  // star(i, j) over all lattice elements.
  std::vector<std::vector<std::size_t>> star_table(SubobjectLattice const& lat,
                                                   Coverage const&         l);

  // Down-sets of a finite poset with the lifted multiplication.
  struct DownSetAlgebra {
    std::size_t                           n = 0;
    std::vector<std::vector<bool>>        le;
    std::vector<std::vector<bool>>        downsets;
    std::vector<std::size_t>              sup;
    // Index of the down-closure of {d * e}.
    std::vector<std::vector<std::size_t>> product;
  };

  // Throws NotAPoset, NotComplete or MulNotAssociative.
  DownSetAlgebra build_downset_algebra(QuantaleSpec const& spec);

  struct LoposCertificate {
    bool              quantale = false;
    // Down-sets D, E with sup(D * E) != sup D * sup E.
    std::vector<Elem> left;
    std::vector<Elem> right;
    Elem              lhs = 0;
    Elem              rhs = 0;
    std::size_t       pairs_checked = 0;
  };

  // The unit, if any, is ignored.
  LoposCertificate lopos_check(QuantaleSpec const& spec);

  // Finite limits that sheafification fails to preserve, found by search
  // over small presheaves. Nothing is asserted either way.
  struct ExactnessReport {
    std::size_t                equalizers_checked = 0;
    std::size_t                products_checked   = 0;
    std::optional<std::string> witness;
  };
  ExactnessReport search_non_left_exactness(Coverage const& l,
                                            std::size_t max_size = 2,
                                            std::size_t budget   = 2000);

  // For small A, B, C and maps f: A -> C, g: B -> C, compares a applied to
  // the pseudo-pullback of f and g with the pseudo-pullback of a(f) and
  // a(g) among sheaves.
  struct PseudoPullbackReport {
    std::size_t              checked   = 0;
    std::size_t              preserved = 0;
    std::vector<std::string> failures;
  };
  PseudoPullbackReport measure_pseudo_pullbacks(Coverage const& l,
                                                std::size_t max_size = 1,
                                                std::size_t budget   = 200);

  // Every presheaf with at most `max_size` sections per object, sections
  // named s0, s1, ...; only sheaves for `sheaves_for` when it is given.
  // Throws SearchLimit past `limit` results.
  std::vector<Presheaf> all_presheaves(QuantalePtr const& site,
                                       std::size_t        max_size,
                                       Coverage const*    sheaves_for = nullptr,
                                       std::size_t        limit       = 1 << 20);

}  // namespace lopos

#endif  // LOPOS_REFLECT_HPP_
