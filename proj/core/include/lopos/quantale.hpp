#ifndef LOPOS_QUANTALE_HPP_
#define LOPOS_QUANTALE_HPP_

// Finite quantales: a finite complete lattice with an associative
// multiplication that distributes over joins on both sides. Elements are
// addressed by index (their position in the declared element list).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lopos {

  using Elem = std::size_t;

  // Raw, unvalidated tables. `leq` holds generating pairs (a, b) meaning
  // a <= b; reflexive-transitive closure is taken during validation.
  struct QuantaleSpec {
    std::string                       name;
    std::vector<std::string>          elements;
    std::vector<std::pair<Elem, Elem>> leq;
    std::vector<std::vector<Elem>>    mul;
    std::optional<Elem>               unit;
  };

  class Quantale;
  using QuantalePtr = std::shared_ptr<Quantale const>;

  class Quantale {
   public:
    std::string const& name() const noexcept {
      return _name;
    }
    std::size_t size() const noexcept {
      return _labels.size();
    }
    std::string const& label(Elem a) const {
      return _labels[a];
    }
    std::vector<std::string> const& labels() const noexcept {
      return _labels;
    }
    std::optional<Elem> find(std::string_view label) const;
    // Throws UnknownLabel.
    Elem index_of(std::string_view label) const;

    bool leq(Elem a, Elem b) const {
      return _leq[a * size() + b] != 0;
    }
    Elem mul(Elem a, Elem b) const {
      return _mul[a * size() + b];
    }
    Elem join(Elem a, Elem b) const {
      return _join[a * size() + b];
    }
    Elem meet(Elem a, Elem b) const {
      return _meet[a * size() + b];
    }
    Elem join_all(std::vector<Elem> const& xs) const;
    Elem top() const noexcept {
      return _top;
    }
    Elem bottom() const noexcept {
      return _bottom;
    }
    std::optional<Elem> unit() const noexcept {
      return _unit;
    }

    // Elements below u (including u), ascending by index.
    std::vector<Elem> const& below(Elem u) const {
      return _below[u];
    }
    // Lower covers of u in the Hasse diagram.
    std::vector<Elem> const& lower_covers(Elem u) const {
      return _covers[u];
    }
    // A linear extension of the order, bottom first.
    std::vector<Elem> const& ascending() const noexcept {
      return _ascending;
    }

    bool mul_is_meet() const;

    // Components when this quantale is a binary product.
    bool is_product() const noexcept {
      return _left != nullptr;
    }
    QuantalePtr const& left() const noexcept {
      return _left;
    }
    QuantalePtr const& right() const noexcept {
      return _right;
    }
    Elem fst(Elem p) const {
      return _pairs[p].first;
    }
    Elem snd(Elem p) const {
      return _pairs[p].second;
    }
    Elem pair(Elem a, Elem b) const {
      return _pair_index[a * _right->size() + b];
    }

    QuantaleSpec to_spec() const;

   private:
    friend struct QuantaleBuilder;

    std::string                            _name;
    std::vector<std::string>               _labels;
    std::unordered_map<std::string, Elem>  _index;
    std::vector<unsigned char>             _leq;
    std::vector<Elem>                      _mul;
    std::vector<Elem>                      _join;
    std::vector<Elem>                      _meet;
    Elem                                   _top    = 0;
    Elem                                   _bottom = 0;
    std::optional<Elem>                    _unit;
    std::vector<std::vector<Elem>>         _below;
    std::vector<std::vector<Elem>>         _covers;
    std::vector<Elem>                      _ascending;
    QuantalePtr                            _left;
    QuantalePtr                            _right;
    std::vector<std::pair<Elem, Elem>>     _pairs;
    std::vector<Elem>                      _pair_index;
  };

  enum class ViolationKind {
    NotAPoset,
    NotComplete,
    NotAssociative,
    NotDistributive,
    UnitLawFails,
    BadTable
  };

  std::string_view to_string(ViolationKind kind) noexcept;

  // One violated law: the first witness found plus how many instances fail.
  // For NotDistributive, `witness` is (a, side) with side 0 for a*(join S)
  // and 1 for (join S)*a, and `subset` is S.
  struct Violation {
    ViolationKind     kind;
    std::vector<Elem> witness;
    std::vector<Elem> subset;
    std::size_t       count = 1;
    std::string       message;
  };

  struct QuantaleValidation {
    QuantalePtr            quantale;
    std::vector<Violation> violations;

    bool ok() const noexcept {
      return quantale != nullptr;
    }
  };

  // Never throws on bad laws; structural problems (wrong table shape, index
  // out of range) are reported as BadTable.
  QuantaleValidation validate_quantale(QuantaleSpec const& spec);

  // Validates and throws on the first violation (kind NotAPoset, NotComplete
  // or Internal for algebraic laws).
  QuantalePtr make_quantale(QuantaleSpec const& spec);

  struct QuantaleFlags {
    bool commutative   = false;
    bool idempotent    = false;
    bool right_sided   = false;
    bool semicartesian = false;
    bool integral      = false;
    bool unital        = false;
    bool locale        = false;
  };

  QuantaleFlags classify_quantale(Quantale const& q);

  enum class StandardQuantale {
    powerset_locale,
    chain_locale,
    lukasiewicz_chain,
    truncated_nat,
    ideals_zmod
  };

  std::optional<StandardQuantale> standard_from_string(std::string_view name);
  std::string_view                to_string(StandardQuantale which) noexcept;

  // Throws UnsupportedParam when the parameter is out of range.
  QuantalePtr build_standard(StandardQuantale which, std::size_t param);

  // Same labels in the same order, same order relation and same table.
  bool same_structure(Quantale const& a, Quantale const& b);

  // Componentwise product; labels are "(a,b)".
  QuantalePtr product_quantale(QuantalePtr const& q1, QuantalePtr const& q2);

}  // namespace lopos

#endif  // LOPOS_QUANTALE_HPP_
