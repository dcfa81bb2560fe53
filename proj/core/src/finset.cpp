#include "lopos/finset.hpp"

#include <algorithm>
#include <numeric>

#include "lopos/error.hpp"

namespace lopos {

  namespace {
    std::shared_ptr<std::vector<std::string> const> const& empty_labels() {
      static auto const empty
          = std::make_shared<std::vector<std::string> const>();
      return empty;
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // FinSet
  ////////////////////////////////////////////////////////////////////////

  FinSet::FinSet() : _labels(empty_labels()) {}

  FinSet::FinSet(std::vector<std::string> labels) {
    std::sort(labels.begin(), labels.end());
    auto it = std::adjacent_find(labels.begin(), labels.end());
    if (it != labels.end()) {
      LOPOS_THROW(DuplicateLabel, "label '" + *it + "' occurs twice");
    }
    _labels = std::make_shared<std::vector<std::string> const>(
        std::move(labels));
  }

  std::optional<std::size_t> FinSet::find(std::string_view label) const {
    auto it = std::lower_bound(_labels->begin(), _labels->end(), label);
    if (it == _labels->end() || *it != label) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(it - _labels->begin());
  }

  std::size_t FinSet::index_of(std::string_view label) const {
    auto i = find(label);
    if (!i) {
      LOPOS_THROW(UnknownLabel,
                  "'" + std::string(label) + "' is not in " + to_string());
    }
    return *i;
  }

  bool FinSet::operator==(FinSet const& that) const {
    return _labels == that._labels || *_labels == *that._labels;
  }

  std::string FinSet::to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < size(); ++i) {
      if (i != 0) {
        out += ", ";
      }
      out += label(i);
    }
    return out + "}";
  }

  ////////////////////////////////////////////////////////////////////////
  // FinMap
  ////////////////////////////////////////////////////////////////////////

  FinMap::FinMap(FinSet dom, FinSet cod, std::vector<std::size_t> assignment)
      : _dom(std::move(dom)),
        _cod(std::move(cod)),
        _assignment(std::move(assignment)) {
    if (_assignment.size() != _dom.size()) {
      LOPOS_THROW(InvalidMap,
                  "assignment has " + std::to_string(_assignment.size())
                      + " entries for a domain of size "
                      + std::to_string(_dom.size()));
    }
    for (std::size_t x = 0; x < _assignment.size(); ++x) {
      if (_assignment[x] >= _cod.size()) {
        LOPOS_THROW(InvalidMap,
                    "image of '" + _dom.label(x) + "' is outside the codomain");
      }
    }
  }

  FinMap FinMap::identity(FinSet const& set) {
    std::vector<std::size_t> id(set.size());
    std::iota(id.begin(), id.end(), 0);
    return FinMap(set, set, std::move(id));
  }

  FinMap FinMap::from_labels(FinSet const&                             dom,
                             FinSet const&                             cod,
                             std::map<std::string, std::string> const& table) {
    std::vector<std::size_t> assignment(dom.size());
    std::vector<bool>        seen(dom.size(), false);
    for (auto const& [x, y] : table) {
      auto i        = dom.index_of(x);
      assignment[i] = cod.index_of(y);
      seen[i]       = true;
    }
    for (std::size_t i = 0; i < dom.size(); ++i) {
      if (!seen[i]) {
        LOPOS_THROW(InvalidMap, "no image given for '" + dom.label(i) + "'");
      }
    }
    return FinMap(dom, cod, std::move(assignment));
  }

  std::string const& FinMap::operator()(std::string_view label) const {
    return _cod.label(_assignment[_dom.index_of(label)]);
  }

  bool FinMap::injective() const {
    std::vector<bool> hit(_cod.size(), false);
    for (auto y : _assignment) {
      if (hit[y]) {
        return false;
      }
      hit[y] = true;
    }
    return true;
  }

  bool FinMap::surjective() const {
    std::vector<bool> hit(_cod.size(), false);
    std::size_t       count = 0;
    for (auto y : _assignment) {
      if (!hit[y]) {
        hit[y] = true;
        ++count;
      }
    }
    return count == _cod.size();
  }

  bool FinMap::operator==(FinMap const& that) const {
    return _assignment == that._assignment && _dom == that._dom
           && _cod == that._cod;
  }

  std::string FinMap::to_string() const {
    std::string out = "{";
    for (std::size_t x = 0; x < _assignment.size(); ++x) {
      if (x != 0) {
        out += ", ";
      }
      out += _dom.label(x) + "->" + _cod.label(_assignment[x]);
    }
    return out + "}";
  }

  FinMap compose(FinMap const& g, FinMap const& f) {
    if (!(f.cod() == g.dom())) {
      LOPOS_THROW(DomainMismatch,
                  "cannot compose: codomain " + f.cod().to_string()
                      + " differs from domain " + g.dom().to_string());
    }
    std::vector<std::size_t> gf(f.dom().size());
    for (std::size_t x = 0; x < gf.size(); ++x) {
      gf[x] = g(f(x));
    }
    return FinMap(f.dom(), g.cod(), std::move(gf));
  }

  std::string pair_label(std::string_view a, std::string_view b) {
    std::string out;
    out.reserve(a.size() + b.size() + 3);
    out += '(';
    out += a;
    out += ',';
    out += b;
    out += ')';
    return out;
  }

  std::string tag_label(std::size_t tag, std::string_view a) {
    return pair_label(std::to_string(tag), a);
  }

  ////////////////////////////////////////////////////////////////////////
  // DisjointSets
  ////////////////////////////////////////////////////////////////////////

  DisjointSets::DisjointSets(std::size_t n)
      : _parent(n), _rank(n, 0), _classes(n) {
    std::iota(_parent.begin(), _parent.end(), 0);
  }

  std::size_t DisjointSets::find(std::size_t x) {
    std::size_t root = x;
    while (_parent[root] != root) {
      root = _parent[root];
    }
    while (_parent[x] != root) {
      auto next  = _parent[x];
      _parent[x] = root;
      x          = next;
    }
    return root;
  }

  bool DisjointSets::unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) {
      return false;
    }
    if (_rank[x] < _rank[y]) {
      std::swap(x, y);
    }
    _parent[y] = x;
    if (_rank[x] == _rank[y]) {
      ++_rank[x];
    }
    --_classes;
    return true;
  }

  ////////////////////////////////////////////////////////////////////////
  // Limits and colimits
  ////////////////////////////////////////////////////////////////////////

  Equalizer equalizer(FinMap const& f, FinMap const& g) {
    if (!(f.dom() == g.dom()) || !(f.cod() == g.cod())) {
      LOPOS_THROW(DomainMismatch, "equalizer needs a parallel pair");
    }
    std::vector<std::string> labels;
    std::vector<std::size_t> incl;
    for (std::size_t x = 0; x < f.dom().size(); ++x) {
      if (f(x) == g(x)) {
        labels.push_back(f.dom().label(x));
        incl.push_back(x);
      }
    }
    // Labels were taken in sorted order, so positions line up with incl.
    FinSet object(std::move(labels));
    return {object, FinMap(object, f.dom(), std::move(incl))};
  }

  Coequalizer quotient(FinSet const&                                     set,
                       std::span<std::pair<std::size_t, std::size_t> const> pairs) {
    DisjointSets classes(set.size());
    for (auto const& [x, y] : pairs) {
      classes.unite(x, y);
    }
    // The least member of a class is the first one met in sorted order.
    std::vector<std::size_t> root_to_class(set.size(), set.size());
    std::vector<std::string> labels;
    std::vector<std::size_t> assignment(set.size());
    for (std::size_t x = 0; x < set.size(); ++x) {
      auto r = classes.find(x);
      if (root_to_class[r] == set.size()) {
        root_to_class[r] = labels.size();
        labels.push_back(set.label(x));
      }
      assignment[x] = root_to_class[r];
    }
    FinSet object(std::move(labels));
    return {object, FinMap(set, object, std::move(assignment))};
  }

  Coequalizer coequalizer(FinMap const& f, FinMap const& g) {
    if (!(f.dom() == g.dom()) || !(f.cod() == g.cod())) {
      LOPOS_THROW(DomainMismatch, "coequalizer needs a parallel pair");
    }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(f.dom().size());
    for (std::size_t x = 0; x < f.dom().size(); ++x) {
      pairs.emplace_back(f(x), g(x));
    }
    return quotient(f.cod(), pairs);
  }

  Product product(FinSet const& a, FinSet const& b) {
    std::vector<std::string> labels;
    labels.reserve(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        labels.push_back(pair_label(a.label(i), b.label(j)));
      }
    }
    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&labels](auto x, auto y) {
      return labels[x] < labels[y];
    });
    std::vector<std::size_t> pair_index(labels.size());
    std::vector<std::size_t> p1(labels.size()), p2(labels.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      auto raw        = order[pos];
      pair_index[raw] = pos;
      p1[pos]         = raw / b.size();
      p2[pos]         = raw % b.size();
    }
    FinSet object(std::move(labels));
    return {object,
            FinMap(object, a, std::move(p1)),
            FinMap(object, b, std::move(p2)),
            std::move(pair_index)};
  }

  Pullback pullback(FinMap const& f, FinMap const& g) {
    if (!(f.cod() == g.cod())) {
      LOPOS_THROW(CodomainMismatch, "pullback needs a common codomain");
    }
    std::vector<std::string>                         labels;
    std::vector<std::pair<std::size_t, std::size_t>> raw;
    for (std::size_t a = 0; a < f.dom().size(); ++a) {
      for (std::size_t b = 0; b < g.dom().size(); ++b) {
        if (f(a) == g(b)) {
          labels.push_back(pair_label(f.dom().label(a), g.dom().label(b)));
          raw.emplace_back(a, b);
        }
      }
    }
    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&labels](auto x, auto y) {
      return labels[x] < labels[y];
    });
    std::vector<std::size_t> p1(labels.size()), p2(labels.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      p1[pos] = raw[order[pos]].first;
      p2[pos] = raw[order[pos]].second;
    }
    FinSet object(std::move(labels));
    return {object,
            FinMap(object, f.dom(), std::move(p1)),
            FinMap(object, g.dom(), std::move(p2))};
  }

  Coproduct coproduct(std::span<FinSet const> family) {
    std::vector<std::string>                         labels;
    std::vector<std::pair<std::size_t, std::size_t>> raw;
    for (std::size_t t = 0; t < family.size(); ++t) {
      for (std::size_t x = 0; x < family[t].size(); ++x) {
        labels.push_back(tag_label(t, family[t].label(x)));
        raw.emplace_back(t, x);
      }
    }
    FinSet object(labels);
    std::vector<std::vector<std::size_t>> inj(family.size());
    for (std::size_t t = 0; t < family.size(); ++t) {
      inj[t].resize(family[t].size());
    }
    for (std::size_t k = 0; k < raw.size(); ++k) {
      inj[raw[k].first][raw[k].second] = object.index_of(labels[k]);
    }
    std::vector<FinMap> injections;
    injections.reserve(family.size());
    for (std::size_t t = 0; t < family.size(); ++t) {
      injections.emplace_back(family[t], object, std::move(inj[t]));
    }
    return {object, std::move(injections)};
  }

}  // namespace lopos
