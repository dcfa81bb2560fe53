#ifndef LOPOS_FINSET_HPP_
#define LOPOS_FINSET_HPP_

// Finite sets with string labels, total functions between them, and the
// finite (co)limits everything else is built from: products, coproducts,
// equalizers, coequalizers and pullbacks.
//
// A FinSet keeps its labels sorted, so two sets are equal exactly when they
// have the same labels. Elements are addressed by their position in that
// sorted order. Values are immutable and cheap to copy (the label vector is
// shared), so they can be passed around freely and used from several threads.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lopos {

  class FinSet {
   public:
    FinSet();
    // Throws DuplicateLabel if two labels coincide.
    explicit FinSet(std::vector<std::string> labels);
    FinSet(std::initializer_list<std::string> labels)
        : FinSet(std::vector<std::string>(labels)) {}

    std::size_t size() const noexcept {
      return _labels->size();
    }
    bool empty() const noexcept {
      return _labels->empty();
    }
    std::string const& label(std::size_t i) const {
      return (*_labels)[i];
    }
    std::span<std::string const> labels() const noexcept {
      return *_labels;
    }

    std::optional<std::size_t> find(std::string_view label) const;
    // Throws UnknownLabel.
    std::size_t index_of(std::string_view label) const;
    bool contains(std::string_view label) const {
      return find(label).has_value();
    }

    bool operator==(FinSet const& that) const;

    std::string to_string() const;

   private:
    std::shared_ptr<std::vector<std::string> const> _labels;
  };

  class FinMap {
   public:
    FinMap() = default;
    // Throws InvalidMap if the assignment is not a total map dom -> cod.
    FinMap(FinSet dom, FinSet cod, std::vector<std::size_t> assignment);

    static FinMap identity(FinSet const& set);
    // Throws UnknownLabel / InvalidMap.
    static FinMap from_labels(FinSet const&                             dom,
                              FinSet const&                             cod,
                              std::map<std::string, std::string> const& table);

    FinSet const& dom() const noexcept {
      return _dom;
    }
    FinSet const& cod() const noexcept {
      return _cod;
    }
    std::size_t operator()(std::size_t x) const {
      return _assignment[x];
    }
    std::string const& operator()(std::string_view label) const;
    std::span<std::size_t const> assignment() const noexcept {
      return _assignment;
    }

    bool injective() const;
    bool surjective() const;
    bool bijective() const {
      return injective() && surjective();
    }

    bool operator==(FinMap const& that) const;

    std::string to_string() const;

   private:
    FinSet                   _dom;
    FinSet                   _cod;
    std::vector<std::size_t> _assignment;
  };

  // g after f. Throws DomainMismatch unless f.cod() == g.dom().
  FinMap compose(FinMap const& g, FinMap const& f);

  // Canonical labels used for constructed objects.
  std::string pair_label(std::string_view a, std::string_view b);
  std::string tag_label(std::size_t tag, std::string_view a);

  struct Equalizer {
    FinSet object;
    FinMap inclusion;
  };

  struct Coequalizer {
    FinSet object;
    FinMap quotient;
  };

  struct Product {
    FinSet object;
    FinMap proj1;
    FinMap proj2;
    // pair_index[a * |B| + b] is the position of (a, b) in `object`.
    std::vector<std::size_t> pair_index;

    std::size_t pair(std::size_t a, std::size_t b) const {
      return pair_index[a * proj2.cod().size() + b];
    }
  };

  struct Pullback {
    FinSet object;
    FinMap proj1;
    FinMap proj2;
  };

  struct Coproduct {
    FinSet              object;
    std::vector<FinMap> injections;
  };

  // {x : f(x) = g(x)} with its inclusion. Throws DomainMismatch.
  Equalizer equalizer(FinMap const& f, FinMap const& g);

  // cod / ~ where ~ is generated by f(x) ~ g(x); every class is labelled by
  // its least member. Throws DomainMismatch.
  Coequalizer coequalizer(FinMap const& f, FinMap const& g);

  // Quotient of `set` by the equivalence generated by the given index pairs,
  // classes labelled by their least member.
  Coequalizer quotient(FinSet const&                                     set,
                       std::span<std::pair<std::size_t, std::size_t> const> pairs);

  Product product(FinSet const& a, FinSet const& b);

  // {(a, b) : f(a) = g(b)}. Throws CodomainMismatch.
  Pullback pullback(FinMap const& f, FinMap const& g);

  Coproduct coproduct(std::span<FinSet const> family);

  // Union-find with path compression and union by rank; find() is the
  // mutable operation, so instances are not shareable across threads.
  class DisjointSets {
   public:
    explicit DisjointSets(std::size_t n);

    std::size_t find(std::size_t x);
    // Returns true if x and y were in different classes.
    bool        unite(std::size_t x, std::size_t y);
    std::size_t size() const noexcept {
      return _parent.size();
    }
    std::size_t number_of_classes() const noexcept {
      return _classes;
    }

   private:
    std::vector<std::size_t>   _parent;
    std::vector<unsigned char> _rank;
    std::size_t                _classes;
  };

}  // namespace lopos

#endif  // LOPOS_FINSET_HPP_
