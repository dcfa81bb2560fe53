#include "lopos/quantale.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "lopos/error.hpp"
#include "lopos/finset.hpp"

namespace lopos {

  struct QuantaleBuilder {
    // Fills every derived table from _labels, _leq (closed) and _mul. The
    // order must already be known to be a complete lattice.
    static void finish(Quantale& q) {
      auto const n = q._labels.size();
      q._index.clear();
      for (Elem a = 0; a < n; ++a) {
        q._index.emplace(q._labels[a], a);
      }
      q._below.assign(n, {});
      for (Elem u = 0; u < n; ++u) {
        for (Elem v = 0; v < n; ++v) {
          if (q.leq(v, u)) {
            q._below[u].push_back(v);
          }
        }
      }
      q._covers.assign(n, {});
      for (Elem u = 0; u < n; ++u) {
        for (Elem v : q._below[u]) {
          if (v == u) {
            continue;
          }
          bool cover = true;
          for (Elem w : q._below[u]) {
            if (w != u && w != v && q.leq(v, w)) {
              cover = false;
              break;
            }
          }
          if (cover) {
            q._covers[u].push_back(v);
          }
        }
      }
      q._ascending.resize(n);
      std::iota(q._ascending.begin(), q._ascending.end(), 0);
      std::stable_sort(q._ascending.begin(),
                       q._ascending.end(),
                       [&q](Elem a, Elem b) {
                         return q._below[a].size() < q._below[b].size();
                       });
      q._join.assign(n * n, 0);
      q._meet.assign(n * n, 0);
      for (Elem a = 0; a < n; ++a) {
        for (Elem b = 0; b < n; ++b) {
          q._join[a * n + b] = *least_upper_bound(q, a, b);
          // Greatest lower bound: the lower bound with the most elements below.
          Elem best = n;
          for (Elem c = 0; c < n; ++c) {
            if (q.leq(c, a) && q.leq(c, b)
                && (best == n || q.leq(best, c))) {
              best = c;
            }
          }
          q._meet[a * n + b] = best;
        }
      }
      for (Elem a = 0; a < n; ++a) {
        if (q._below[a].size() == n) {
          q._top = a;
        }
        if (q._below[a].size() == 1) {
          q._bottom = a;
        }
      }
    }

    static std::optional<Elem> least_upper_bound(Quantale const& q,
                                                 Elem            a,
                                                 Elem            b) {
      auto const          n = q._labels.size();
      std::optional<Elem> best;
      for (Elem c = 0; c < n; ++c) {
        if (q.leq(a, c) && q.leq(b, c)) {
          if (!best || q.leq(c, *best)) {
            best = c;
          }
        }
      }
      if (!best) {
        return std::nullopt;
      }
      for (Elem c = 0; c < n; ++c) {
        if (q.leq(a, c) && q.leq(b, c) && !q.leq(*best, c)) {
          return std::nullopt;
        }
      }
      return best;
    }

    static void set_core(Quantale&                  q,
                         std::string                name,
                         std::vector<std::string>   labels,
                         std::vector<unsigned char> leq,
                         std::vector<Elem>          mul,
                         std::optional<Elem>        unit) {
      q._name   = std::move(name);
      q._labels = std::move(labels);
      q._leq    = std::move(leq);
      q._mul    = std::move(mul);
      q._unit   = unit;
    }

    static void set_product(Quantale&          q,
                            QuantalePtr const& l,
                            QuantalePtr const& r) {
      q._left  = l;
      q._right = r;
      q._pairs.clear();
      q._pair_index.assign(l->size() * r->size(), 0);
      for (Elem a = 0; a < l->size(); ++a) {
        for (Elem b = 0; b < r->size(); ++b) {
          q._pair_index[a * r->size() + b] = q._pairs.size();
          q._pairs.emplace_back(a, b);
        }
      }
    }
  };

  std::optional<Elem> Quantale::find(std::string_view label) const {
    auto it = _index.find(std::string(label));
    if (it == _index.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  Elem Quantale::index_of(std::string_view label) const {
    auto a = find(label);
    if (!a) {
      LOPOS_THROW(UnknownLabel,
                  "'" + std::string(label) + "' is not an element of "
                      + _name);
    }
    return *a;
  }

  Elem Quantale::join_all(std::vector<Elem> const& xs) const {
    Elem acc = _bottom;
    for (auto x : xs) {
      acc = join(acc, x);
    }
    return acc;
  }

  bool Quantale::mul_is_meet() const {
    return _mul == _meet;
  }

  QuantaleSpec Quantale::to_spec() const {
    QuantaleSpec spec;
    spec.name     = _name;
    spec.elements = _labels;
    for (Elem u = 0; u < size(); ++u) {
      for (Elem v : _covers[u]) {
        spec.leq.emplace_back(v, u);
      }
    }
    spec.mul.assign(size(), std::vector<Elem>(size()));
    for (Elem a = 0; a < size(); ++a) {
      for (Elem b = 0; b < size(); ++b) {
        spec.mul[a][b] = mul(a, b);
      }
    }
    spec.unit = _unit;
    return spec;
  }

  std::string_view to_string(ViolationKind kind) noexcept {
    switch (kind) {
      case ViolationKind::NotAPoset:
        return "NotAPoset";
      case ViolationKind::NotComplete:
        return "NotComplete";
      case ViolationKind::NotAssociative:
        return "NotAssociative";
      case ViolationKind::NotDistributive:
        return "NotDistributive";
      case ViolationKind::UnitLawFails:
        return "UnitLawFails";
      case ViolationKind::BadTable:
        return "BadTable";
    }
    return "Unknown";
  }

  ////////////////////////////////////////////////////////////////////////
  // Validation
  ////////////////////////////////////////////////////////////////////////

  namespace {
    // Subsets are enumerated exhaustively up to this carrier size; above it
    // the binary and empty cases are checked, which is equivalent for finite
    // joins.
    constexpr std::size_t exhaustive_subset_limit = 10;

    void record(std::vector<Violation>& out,
                ViolationKind           kind,
                std::vector<Elem>       witness,
                std::vector<Elem>       subset,
                std::string             message) {
      for (auto& v : out) {
        if (v.kind == kind) {
          ++v.count;
          return;
        }
      }
      out.push_back({kind, std::move(witness), std::move(subset), 1,
                     std::move(message)});
    }

    std::optional<Violation> check_shape(QuantaleSpec const& spec) {
      auto const n   = spec.elements.size();
      auto       bad = [](std::string msg) {
        return Violation{ViolationKind::BadTable, {}, {}, 1, std::move(msg)};
      };
      if (n == 0) {
        return Violation{ViolationKind::NotComplete,
                         {},
                         {},
                         1,
                         "the empty poset has no least element"};
      }
      auto sorted = spec.elements;
      std::sort(sorted.begin(), sorted.end());
      if (auto it = std::adjacent_find(sorted.begin(), sorted.end());
          it != sorted.end()) {
        return bad("duplicate element '" + *it + "'");
      }
      for (auto const& [a, b] : spec.leq) {
        if (a >= n || b >= n) {
          return bad("order pair refers to an undeclared element");
        }
      }
      if (spec.mul.size() != n) {
        return bad("multiplication table must have one row per element");
      }
      for (auto const& row : spec.mul) {
        if (row.size() != n) {
          return bad("multiplication table must be complete");
        }
        for (auto c : row) {
          if (c >= n) {
            return bad("multiplication table refers to an undeclared element");
          }
        }
      }
      if (spec.unit && *spec.unit >= n) {
        return bad("unit is not a declared element");
      }
      return std::nullopt;
    }

    std::string show(QuantaleSpec const& spec, Elem a) {
      return "'" + spec.elements[a] + "'";
    }
  }  // namespace

  QuantaleValidation validate_quantale(QuantaleSpec const& spec) {
    QuantaleValidation result;
    if (auto v = check_shape(spec)) {
      result.violations.push_back(std::move(*v));
      return result;
    }
    auto const                 n = spec.elements.size();
    std::vector<unsigned char> leq(n * n, 0);
    for (Elem a = 0; a < n; ++a) {
      leq[a * n + a] = 1;
    }
    for (auto const& [a, b] : spec.leq) {
      leq[a * n + b] = 1;
    }
    for (Elem k = 0; k < n; ++k) {
      for (Elem i = 0; i < n; ++i) {
        if (!leq[i * n + k]) {
          continue;
        }
        for (Elem j = 0; j < n; ++j) {
          if (leq[k * n + j]) {
            leq[i * n + j] = 1;
          }
        }
      }
    }
    auto& out = result.violations;
    for (Elem a = 0; a < n; ++a) {
      for (Elem b = a + 1; b < n; ++b) {
        if (leq[a * n + b] && leq[b * n + a]) {
          record(out,
                 ViolationKind::NotAPoset,
                 {a, b},
                 {},
                 show(spec, a) + " and " + show(spec, b)
                     + " are below each other");
        }
      }
    }
    if (!out.empty()) {
      return result;
    }

    auto q = std::make_shared<Quantale>();
    QuantaleBuilder::set_core(*q, spec.name, spec.elements, leq, {}, spec.unit);
    std::optional<Elem> bottom;
    for (Elem a = 0; a < n; ++a) {
      bool least = true;
      for (Elem b = 0; b < n; ++b) {
        least = least && leq[a * n + b];
      }
      if (least) {
        bottom = a;
      }
    }
    if (!bottom) {
      record(out,
             ViolationKind::NotComplete,
             {},
             {},
             "the empty subset has no least upper bound");
    }
    for (Elem a = 0; a < n; ++a) {
      for (Elem b = a + 1; b < n; ++b) {
        if (!QuantaleBuilder::least_upper_bound(*q, a, b)) {
          record(out,
                 ViolationKind::NotComplete,
                 {},
                 {a, b},
                 "{" + show(spec, a) + ", " + show(spec, b)
                     + "} has no least upper bound");
        }
      }
    }

    auto mul = [&spec](Elem a, Elem b) {
      return spec.mul[a][b];
    };
    for (Elem a = 0; a < n; ++a) {
      for (Elem b = 0; b < n; ++b) {
        for (Elem c = 0; c < n; ++c) {
          if (mul(mul(a, b), c) != mul(a, mul(b, c))) {
            record(out,
                   ViolationKind::NotAssociative,
                   {a, b, c},
                   {},
                   "(" + show(spec, a) + " * " + show(spec, b) + ") * "
                       + show(spec, c) + " differs from " + show(spec, a)
                       + " * (" + show(spec, b) + " * " + show(spec, c) + ")");
          }
        }
      }
    }

    if (spec.unit) {
      auto e = *spec.unit;
      for (Elem u = 0; u < n; ++u) {
        if (mul(u, e) != u || mul(e, u) != u) {
          record(out,
                 ViolationKind::UnitLawFails,
                 {u},
                 {},
                 show(spec, e) + " is not neutral for " + show(spec, u));
        }
      }
    }

    bool const complete
        = std::none_of(out.begin(), out.end(), [](Violation const& v) {
            return v.kind == ViolationKind::NotComplete;
          });
    if (complete) {
      std::vector<Elem> join(n * n);
      for (Elem a = 0; a < n; ++a) {
        for (Elem b = 0; b < n; ++b) {
          join[a * n + b] = *QuantaleBuilder::least_upper_bound(*q, a, b);
        }
      }
      auto join_of = [&](std::vector<Elem> const& s) {
        Elem acc = *bottom;
        for (auto x : s) {
          acc = join[acc * n + x];
        }
        return acc;
      };
      std::vector<std::vector<Elem>> subsets;
      if (n <= exhaustive_subset_limit) {
        std::vector<std::uint32_t> masks(std::size_t{1} << n);
        std::iota(masks.begin(), masks.end(), 0);
        std::stable_sort(masks.begin(), masks.end(), [](auto x, auto y) {
          return std::popcount(x) < std::popcount(y);
        });
        for (auto m : masks) {
          std::vector<Elem> s;
          for (Elem i = 0; i < n; ++i) {
            if (m & (1u << i)) {
              s.push_back(i);
            }
          }
          subsets.push_back(std::move(s));
        }
      } else {
        subsets.emplace_back();
        for (Elem b = 0; b < n; ++b) {
          for (Elem c = b + 1; c < n; ++c) {
            subsets.push_back({b, c});
          }
        }
      }
      for (auto const& s : subsets) {
        auto const js = join_of(s);
        for (Elem a = 0; a < n; ++a) {
          for (int side = 0; side < 2; ++side) {
            std::vector<Elem> products;
            for (auto b : s) {
              products.push_back(side == 0 ? mul(a, b) : mul(b, a));
            }
            auto lhs = side == 0 ? mul(a, js) : mul(js, a);
            if (lhs != join_of(products)) {
              record(out,
                     ViolationKind::NotDistributive,
                     {a, static_cast<Elem>(side)},
                     s,
                     std::string(side == 0 ? "left" : "right")
                         + " multiplication by " + show(spec, a)
                         + " does not preserve a join");
            }
          }
        }
      }
    }
    if (!out.empty()) {
      return result;
    }

    std::vector<Elem> table(n * n);
    for (Elem a = 0; a < n; ++a) {
      for (Elem b = 0; b < n; ++b) {
        table[a * n + b] = mul(a, b);
      }
    }
    std::optional<Elem> unit = spec.unit;
    if (!unit) {
      for (Elem e = 0; e < n && !unit; ++e) {
        bool neutral = true;
        for (Elem u = 0; u < n && neutral; ++u) {
          neutral = mul(u, e) == u && mul(e, u) == u;
        }
        if (neutral) {
          unit = e;
        }
      }
    }
    QuantaleBuilder::set_core(
        *q, spec.name, spec.elements, std::move(leq), std::move(table), unit);
    QuantaleBuilder::finish(*q);
    result.quantale = std::move(q);
    return result;
  }

  QuantalePtr make_quantale(QuantaleSpec const& spec) {
    auto v = validate_quantale(spec);
    if (v.ok()) {
      return v.quantale;
    }
    auto const& first = v.violations.front();
    auto        what  = std::string(to_string(first.kind)) + ": "
                + first.message;
    switch (first.kind) {
      case ViolationKind::NotAPoset:
        LOPOS_THROW(NotAPoset, what);
      case ViolationKind::NotComplete:
        LOPOS_THROW(NotComplete, what);
      case ViolationKind::BadTable:
        LOPOS_THROW(ParseError, what);
      default:
        LOPOS_THROW(UnverifiedInput, what);
    }
  }

  QuantaleFlags classify_quantale(Quantale const& q) {
    auto const    n = q.size();
    QuantaleFlags f;
    f.commutative   = true;
    f.idempotent    = true;
    f.right_sided   = true;
    f.semicartesian = true;
    bool below_meet = true;
    for (Elem a = 0; a < n; ++a) {
      f.idempotent  = f.idempotent && q.mul(a, a) == a;
      f.right_sided = f.right_sided && q.mul(a, q.top()) == a;
      for (Elem b = 0; b < n; ++b) {
        f.commutative   = f.commutative && q.mul(a, b) == q.mul(b, a);
        f.semicartesian = f.semicartesian && q.leq(q.mul(a, b), a)
                          && q.leq(q.mul(a, b), b);
        below_meet = below_meet && q.leq(q.mul(a, b), q.meet(a, b));
      }
    }
    f.unital   = q.unit().has_value();
    f.integral = f.unital && *q.unit() == q.top();
    f.locale   = q.mul_is_meet();
    LOPOS_ASSERT(f.semicartesian == below_meet);
    LOPOS_ASSERT(!f.unital || f.integral == f.semicartesian);
    return f;
  }

  ////////////////////////////////////////////////////////////////////////
  // Standard quantales
  ////////////////////////////////////////////////////////////////////////

  namespace {
    struct StandardName {
      StandardQuantale which;
      std::string_view name;
    };

    constexpr StandardName standard_names[] = {
        {StandardQuantale::powerset_locale, "powerset_locale"},
        {StandardQuantale::chain_locale, "chain_locale"},
        {StandardQuantale::lukasiewicz_chain, "lukasiewicz_chain"},
        {StandardQuantale::truncated_nat, "truncated_nat"},
        {StandardQuantale::ideals_zmod, "ideals_zmod"}};

    QuantaleSpec powerset_spec(std::size_t atoms) {
      static constexpr char const* names[] = {"x", "y", "z", "w"};
      QuantaleSpec                 spec;
      auto const                   n = std::size_t{1} << atoms;
      for (std::size_t m = 0; m < n; ++m) {
        std::string label = "{";
        for (std::size_t i = 0; i < atoms; ++i) {
          if (m & (std::size_t{1} << i)) {
            if (label.size() > 1) {
              label += ',';
            }
            label += names[i];
          }
        }
        spec.elements.push_back(label + "}");
      }
      spec.mul.assign(n, std::vector<Elem>(n));
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          if ((a & b) == a) {
            spec.leq.emplace_back(a, b);
          }
          spec.mul[a][b] = a & b;
        }
      }
      spec.unit = n - 1;
      return spec;
    }

    // Chain 0 < 1 < ... < n-1 with the given multiplication on positions.
    template <typename Mul>
    QuantaleSpec chain_spec(std::vector<std::string> labels, Mul mul) {
      QuantaleSpec spec;
      auto const   n = labels.size();
      spec.elements  = std::move(labels);
      for (std::size_t a = 0; a + 1 < n; ++a) {
        spec.leq.emplace_back(a, a + 1);
      }
      spec.mul.assign(n, std::vector<Elem>(n));
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          spec.mul[a][b] = mul(a, b);
        }
      }
      spec.unit = n - 1;
      return spec;
    }

    QuantaleSpec ideals_spec(std::size_t n) {
      std::vector<std::size_t> divisors;
      for (std::size_t d = 1; d <= n; ++d) {
        if (n % d == 0) {
          divisors.push_back(d);
        }
      }
      auto index = [&divisors](std::size_t d) {
        return static_cast<Elem>(
            std::find(divisors.begin(), divisors.end(), d) - divisors.begin());
      };
      QuantaleSpec spec;
      auto const   k = divisors.size();
      for (auto d : divisors) {
        spec.elements.push_back("(" + std::to_string(d == n ? 0 : d) + ")");
      }
      spec.mul.assign(k, std::vector<Elem>(k));
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          auto d = divisors[i];
          auto e = divisors[j];
          // (d) is contained in (e) iff e divides d.
          if (d % e == 0) {
            spec.leq.emplace_back(i, j);
          }
          spec.mul[i][j] = index(std::gcd(d * e, n));
        }
      }
      spec.unit = index(1);
      return spec;
    }
  }  // namespace

  std::optional<StandardQuantale> standard_from_string(std::string_view name) {
    for (auto const& [which, str] : standard_names) {
      if (str == name) {
        return which;
      }
    }
    return std::nullopt;
  }

  std::string_view to_string(StandardQuantale which) noexcept {
    for (auto const& [w, str] : standard_names) {
      if (w == which) {
        return str;
      }
    }
    return "unknown";
  }

  QuantalePtr build_standard(StandardQuantale which, std::size_t param) {
    auto unsupported = [&](std::string const& range) {
      LOPOS_THROW(UnsupportedParam,
                  std::string(to_string(which)) + " needs a parameter in "
                      + range + ", got " + std::to_string(param));
    };
    QuantaleSpec spec;
    switch (which) {
      case StandardQuantale::powerset_locale:
        if (param < 1 || param > 4) {
          unsupported("[1, 4]");
        }
        spec = powerset_spec(param);
        break;
      case StandardQuantale::chain_locale: {
        if (param < 1 || param > 32) {
          unsupported("[1, 32]");
        }
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < param; ++i) {
          labels.push_back(std::to_string(i));
        }
        spec = chain_spec(std::move(labels),
                          [](Elem a, Elem b) { return std::min(a, b); });
        break;
      }
      case StandardQuantale::lukasiewicz_chain: {
        if (param < 2 || param > 32) {
          unsupported("[2, 32]");
        }
        std::vector<std::string> labels{"0"};
        for (std::size_t i = 1; i + 1 < param; ++i) {
          labels.push_back(param == 3 ? "h" : "h" + std::to_string(i));
        }
        labels.push_back("1");
        auto const top = param - 1;
        spec           = chain_spec(std::move(labels), [top](Elem a, Elem b) {
          return a + b > top ? a + b - top : Elem{0};
        });
        break;
      }
      case StandardQuantale::truncated_nat: {
        if (param < 1 || param > 31) {
          unsupported("[1, 31]");
        }
        // Position i holds the number param - i, so the chain order is the
        // reversed numeric order and the top is 0.
        std::vector<std::string> labels;
        for (std::size_t i = 0; i <= param; ++i) {
          labels.push_back(std::to_string(param - i));
        }
        spec = chain_spec(std::move(labels), [param](Elem a, Elem b) {
          auto sum = std::min((param - a) + (param - b), param);
          return param - sum;
        });
        break;
      }
      case StandardQuantale::ideals_zmod:
        if (param < 2 || param > 10000) {
          unsupported("[2, 10000]");
        }
        spec = ideals_spec(param);
        break;
    }
    spec.name = std::string(to_string(which)) + "(" + std::to_string(param)
                + ")";
    return make_quantale(spec);
  }

  QuantalePtr product_quantale(QuantalePtr const& q1, QuantalePtr const& q2) {
    auto const   n1 = q1->size();
    auto const   n2 = q2->size();
    QuantaleSpec spec;
    spec.name = q1->name() + "*" + q2->name();
    auto pos  = [n2](Elem a, Elem b) {
      return a * n2 + b;
    };
    for (Elem a = 0; a < n1; ++a) {
      for (Elem b = 0; b < n2; ++b) {
        spec.elements.push_back(pair_label(q1->label(a), q2->label(b)));
      }
    }
    auto const n = n1 * n2;
    spec.mul.assign(n, std::vector<Elem>(n));
    for (Elem a = 0; a < n1; ++a) {
      for (Elem b = 0; b < n2; ++b) {
        for (Elem c = 0; c < n1; ++c) {
          for (Elem d = 0; d < n2; ++d) {
            if (q1->leq(a, c) && q2->leq(b, d)) {
              spec.leq.emplace_back(pos(a, b), pos(c, d));
            }
            spec.mul[pos(a, b)][pos(c, d)]
                = pos(q1->mul(a, c), q2->mul(b, d));
          }
        }
      }
    }
    if (q1->unit() && q2->unit()) {
      spec.unit = pos(*q1->unit(), *q2->unit());
    }
    auto v = validate_quantale(spec);
    LOPOS_ASSERT(v.ok());
    auto q = std::const_pointer_cast<Quantale>(v.quantale);
    QuantaleBuilder::set_product(*q, q1, q2);
    return q;
  }

  bool same_structure(Quantale const& a, Quantale const& b) {
    if (&a == &b) {
      return true;
    }
    if (a.labels() != b.labels()) {
      return false;
    }
    for (Elem x = 0; x < a.size(); ++x) {
      for (Elem y = 0; y < a.size(); ++y) {
        if (a.leq(x, y) != b.leq(x, y) || a.mul(x, y) != b.mul(x, y)) {
          return false;
        }
      }
    }
    return true;
  }

}  // namespace lopos
