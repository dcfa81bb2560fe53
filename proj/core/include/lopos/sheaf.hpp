#ifndef LOPOS_SHEAF_HPP_
#define LOPOS_SHEAF_HPP_

// Sheaf conditions for presheaves on a covered thin site, checked either as
// the equalizer condition on every cover or as orthogonality against the
// canonical sieve morphisms.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lopos/coverage.hpp"
#include "lopos/presheaf.hpp"

namespace lopos {

  // One section of F(u_i) for every leg u_i of the cover.
  struct CompatibleFamily {
    CoverFamily              cover;
    std::vector<std::size_t> sections;
  };

  // Throws SectionOutOfSet on a bad section index or count.
  bool is_compatible(Presheaf const& f, CoverFamily const& cover,
                     std::vector<std::size_t> const& sections);

  enum class GlueKind { unique, none, multiple };
  std::string_view to_string(GlueKind k) noexcept;

  struct GlueResult {
    GlueKind                 kind = GlueKind::none;
    std::vector<std::size_t> gluings;
  };

  // Throws NotCompatible.
  GlueResult glue(Presheaf const& f, CoverFamily const& cover,
                  std::vector<std::size_t> const& sections);

  enum class SheafVerdict { sheaf, separated_only, fails };
  std::string_view to_string(SheafVerdict v) noexcept;

  // A compatible family with no gluing or with several.
  struct SheafWitness {
    CompatibleFamily         family;
    std::vector<std::size_t> gluings;
  };

  struct SheafReport {
    SheafVerdict              verdict = SheafVerdict::sheaf;
    std::string               method;
    std::size_t               covers_checked   = 0;
    std::size_t               families_checked = 0;
    std::vector<SheafWitness> witnesses;

    bool is_sheaf() const noexcept {
      return verdict == SheafVerdict::sheaf;
    }
  };

  enum class EqualizerStrategy { automatic, literal, enumerate };

  struct SheafCheckOptions {
    EqualizerStrategy strategy = EqualizerStrategy::automatic;
    // Above this many candidate families the automatic strategy enumerates
    // compatible families instead of materializing the product.
    std::size_t literal_threshold = 4096;
    std::size_t max_witnesses     = 8;
    // Stop at the first cover that is not even separated.
    bool short_circuit = false;
  };

  // Throws SiteMismatch if F and L live on different sites.
  SheafReport check_sheaf_equalizer(Presheaf const& f, Coverage const& l,
                                    SheafCheckOptions const& opts = {});
  SheafReport check_sheaf_orthogonal(Presheaf const& f, Coverage const& l,
                                     SheafCheckOptions const& opts = {});

  // Equalizer check on one cover.
  SheafReport check_cover(Presheaf const& f, CoverFamily const& cover,
                          SheafCheckOptions const& opts = {});

  bool check_separated(Presheaf const& f, Coverage const& l);

  // v |-> F(u (x) v).
  Presheaf shift_presheaf(Presheaf const& f, Elem u);

  // Pointwise product on the product site. Throws SiteMismatch.
  Presheaf product_sheaf(Presheaf const& f, Presheaf const& g,
                         QuantalePtr const& product_site = nullptr);

  // One round of the classical plus construction. Covers are used as sets
  // of legs. Throws NotLocale unless the tensor is the meet, and
  // UnverifiedInput if a restricted cover is missing from L.
  Presheaf plus_construction(Presheaf const& f, Coverage const& l);

  std::string describe(Presheaf const& f, CompatibleFamily const& family);

}  // namespace lopos

#endif  // LOPOS_SHEAF_HPP_
