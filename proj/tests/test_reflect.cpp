#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "lopos/error.hpp"
#include "lopos/reflect.hpp"

using namespace lopos;
using fixtures::random_presheaf;

namespace {
  QuantalePtr luk3() {
    return build_standard(StandardQuantale::lukasiewicz_chain, 3);
  }
  QuantalePtr pow2() {
    return build_standard(StandardQuantale::powerset_locale, 2);
  }
  QuantalePtr truncnat3() {
    return build_standard(StandardQuantale::truncated_nat, 3);
  }
  QuantalePtr zmod4() {
    return build_standard(StandardQuantale::ideals_zmod, 4);
  }

  bool strict_sheaf(Presheaf const& f, Coverage const& l) {
    SheafCheckOptions opts;
    opts.strategy = EqualizerStrategy::literal;
    return check_sheaf_equalizer(f, l, opts).is_sheaf()
           && check_sheaf_orthogonal(f, l).is_sheaf();
  }

  // Bijections between the elements of Q and of the lattice preserving and
  // reflecting the order, by trying every permutation.
  std::vector<std::vector<std::size_t>> order_isos(Quantale const& q,
                                                   SubobjectLattice const& lat) {
    std::vector<std::vector<std::size_t>> out;
    if (q.size() != lat.size()) {
      return out;
    }
    std::vector<std::size_t> phi(q.size());
    std::iota(phi.begin(), phi.end(), 0);
    do {
      bool ok = true;
      for (Elem a = 0; a < q.size() && ok; ++a) {
        for (Elem b = 0; b < q.size() && ok; ++b) {
          ok = q.leq(a, b) == lat.leq[phi[a]][phi[b]];
        }
      }
      if (ok) {
        out.push_back(phi);
      }
    } while (std::next_permutation(phi.begin(), phi.end()));
    return out;
  }

  // 0 < a, b, c < 1 with meet as multiplication.
  QuantaleSpec m3() {
    QuantaleSpec s;
    s.name     = "M3";
    s.elements = {"0", "a", "b", "c", "1"};
    for (Elem x = 1; x <= 3; ++x) {
      s.leq.emplace_back(0, x);
      s.leq.emplace_back(x, 4);
    }
    s.mul.assign(5, std::vector<Elem>(5));
    for (Elem x = 0; x < 5; ++x) {
      for (Elem y = 0; y < 5; ++y) {
        s.mul[x][y] = x == y ? x : x == 4 ? y : y == 4 ? x : 0;
      }
    }
    return s;
  }
}  // namespace

TEST_CASE("presheaf enumeration") {
  auto chain2 = build_standard(StandardQuantale::chain_locale, 2);
  // Sizes a over the bottom and b over the top, with a^b restriction maps.
  std::size_t expected = 0;
  for (std::size_t a = 0; a <= 2; ++a) {
    for (std::size_t b = 0; b <= 2; ++b) {
      std::size_t maps = 1;
      for (std::size_t i = 0; i < b; ++i) {
        maps *= a;
      }
      expected += maps;
    }
  }
  CHECK(all_presheaves(chain2, 2).size() == expected);

  for (auto const& q : {luk3(), pow2(), truncnat3()}) {
    auto l       = canonical_quantale_coverage(q);
    auto all     = all_presheaves(q, 2);
    auto sheaves = all_presheaves(q, 2, &l);
    auto n       = std::count_if(all.begin(), all.end(), [&](Presheaf const& f) {
      return check_sheaf_equalizer(f, l).is_sheaf();
    });
    CHECK(sheaves.size() == static_cast<std::size_t>(n));
    auto battery = sheaf_battery(l, 2);
    CHECK(battery.size() <= sheaves.size());
    for (std::size_t i = 0; i < battery.size(); ++i) {
      for (std::size_t j = i + 1; j < battery.size(); ++j) {
        CHECK_FALSE(find_isomorphism(battery[i], battery[j]));
      }
    }
  }
  CHECK_THROWS_AS(all_presheaves(luk3(), 3, nullptr, 10), Error);
}

TEST_CASE("sheafification") {
  std::mt19937 rng(7);
  for (auto const& q : {luk3(), pow2(), truncnat3(), zmod4()}) {
    auto l       = canonical_quantale_coverage(q);
    auto battery = sheaf_battery(l, 2);
    CAPTURE(q->name());

    SUBCASE("sheaves are fixed points") {
      for (auto const& g : battery) {
        auto r = sheafify(g, l);
        CHECK(r.converged);
        CHECK(r.iterations == 0);
        CHECK(r.unit == identity_morphism(g));
      }
    }

    SUBCASE("random presheaves") {
      for (int trial = 0; trial < 12; ++trial) {
        auto p = random_presheaf(q, rng, 2);
        auto r = sheafify(p, l);
        REQUIRE(r.converged);
        CHECK(strict_sheaf(r.sheaf, l));
        CHECK(is_natural(p, r.sheaf, r.unit));
        auto again = sheafify(r.sheaf, l);
        CHECK(again.converged);
        CHECK(again.iterations == 0);
        auto cert = certify_reflection(p, r, l, battery);
        CHECK(cert.ok());
        CHECK(cert.bijections == battery.size());
      }
    }
  }
}

TEST_CASE("certification rejects a wrong reflection") {
  auto q = luk3();
  auto l = canonical_quantale_coverage(q);
  auto h = q->index_of("h");
  // Two top sections that are separate over h.
  auto p = PresheafBuilder(q, "split")
               .at(q->top(), {"a", "b"})
               .at(h, {"c", "d"})
               .at(q->bottom(), {"e"})
               .restrict(q->top(), h, {0, 1})
               .restrict(h, q->bottom(), {0, 0})
               .build();
  auto battery = sheaf_battery(l, 2);
  auto good    = sheafify(p, l);
  REQUIRE(good.converged);
  CHECK(certify_reflection(p, good, l, battery).ok());

  ReflectionResult bad;
  bad.sheaf = terminal_presheaf(q);
  bad.unit  = hom_presheaves(p, bad.sheaf).front();
  auto cert = certify_reflection(p, bad, l, battery);
  CHECK(cert.orthogonal);
  CHECK_FALSE(cert.ok());
  CHECK_FALSE(extend_along_unit(bad, identity_morphism(p), p));
}

TEST_CASE("non-convergence is reported, not thrown") {
  auto q = luk3();
  auto l = canonical_quantale_coverage(q);
  auto p = empty_presheaf(q);
  auto r = sheafify(p, l, 0);
  CHECK_FALSE(r.converged);
  CHECK_FALSE(r.diagnostic.empty());
  CHECK(sheafify(p, l).converged);
}

TEST_CASE("terminal presheaf") {
  for (auto const& q : {luk3(), pow2(), truncnat3(), zmod4()}) {
    CAPTURE(q->name());
    CHECK(preserves_terminal(canonical_quantale_coverage(q)));
    CHECK(preserves_terminal(trivial_coverage(q)));
  }
}

TEST_CASE("tensoring with the unit representable") {
  for (auto const& q : {luk3(), truncnat3()}) {
    auto l = canonical_quantale_coverage(q);
    auto y = yoneda(q, *q->unit());
    for (auto const& g : sheaf_battery(l, 2)) {
      CHECK(find_isomorphism(sheaf_tensor(y, g, l), g));
    }
  }
}

TEST_CASE("plus construction twice matches sheafification on a locale") {
  std::mt19937 rng(11);
  auto         q = pow2();
  auto         l = canonical_quantale_coverage(q);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = random_presheaf(q, rng, 2);
    auto r = sheafify(p, l);
    REQUIRE(r.converged);
    CHECK(find_isomorphism(r.sheaf, plus_construction(plus_construction(p, l), l)));
  }
}

TEST_CASE("subterminal lattice is the quantale") {
  for (auto const& q : {luk3(), truncnat3(), pow2(), zmod4()}) {
    CAPTURE(q->name());
    auto l   = canonical_quantale_coverage(q);
    auto lat = subsheaf_lattice(terminal_presheaf(q), l);
    auto isos = order_isos(*q, lat);
    REQUIRE_FALSE(isos.empty());
    auto table   = star_table(lat, l);
    auto matches = [&](std::vector<std::size_t> const& phi) {
      for (Elem a = 0; a < q->size(); ++a) {
        for (Elem b = 0; b < q->size(); ++b) {
          if (table[phi[a]][phi[b]] != phi[q->mul(a, b)]
              || lat.meet[phi[a]][phi[b]] != phi[q->meet(a, b)]) {
            return false;
          }
        }
      }
      return lat.bottom == phi[q->bottom()] && lat.top == phi[q->top()];
    };
    CHECK(std::any_of(isos.begin(), isos.end(), matches));
  }
}

TEST_CASE("subsheaf lattices") {
  auto q = luk3();
  auto l = canonical_quantale_coverage(q);
  CHECK_THROWS_AS(subsheaf_lattice(empty_presheaf(q), l), Error);
  for (auto const& g : sheaf_battery(l, 2)) {
    auto lat = subsheaf_lattice(g, l);
    for (std::size_t i = 0; i < lat.size(); ++i) {
      CHECK(strict_sheaf(subpresheaf(g, lat.elements[i]), l));
      for (std::size_t j = 0; j < lat.size(); ++j) {
        auto m = lat.meet[i][j];
        auto k = lat.join[i][j];
        CHECK(lat.leq[m][i]);
        CHECK(lat.leq[m][j]);
        CHECK(lat.leq[i][k]);
        CHECK(lat.leq[j][k]);
        for (std::size_t x = 0; x < lat.size(); ++x) {
          if (lat.leq[x][i] && lat.leq[x][j]) {
            CHECK(lat.leq[x][m]);
          }
          if (lat.leq[i][x] && lat.leq[j][x]) {
            CHECK(lat.leq[k][x]);
          }
        }
      }
    }
  }
}

TEST_CASE("extremal factorization") {
  auto q       = luk3();
  auto l       = canonical_quantale_coverage(q);
  auto battery = sheaf_battery(l, 2);
  std::size_t seen = 0;
  for (auto const& f : battery) {
    for (auto const& g : battery) {
      for (auto const& phi : hom_presheaves(f, g, 8)) {
        auto x = extremal_factorize(f, g, phi, l, battery);
        CHECK(is_mono(x.mono));
        CHECK(compose(x.mono, x.epi) == phi);
        CHECK(strict_sheaf(x.middle, l));
        CHECK(x.epi_cancels);
        CHECK(x.cancellation_checked == battery.size());
        ++seen;
      }
    }
  }
  CHECK(seen > 0);
}

TEST_CASE("down-set criterion") {
  auto bad = lopos_check(m3());
  CHECK_FALSE(bad.quantale);
  CHECK(bad.lhs != bad.rhs);

  for (auto which : {StandardQuantale::lukasiewicz_chain, StandardQuantale::truncated_nat,
                     StandardQuantale::powerset_locale, StandardQuantale::ideals_zmod}) {
    auto spec = build_standard(which, 3)->to_spec();
    CHECK(lopos_check(spec).quantale);
  }

  // Random tables on small lattices; the criterion and the direct law check
  // must agree whenever the table is associative.
  std::mt19937 rng(3);
  std::vector<QuantaleSpec> shapes{
      build_standard(StandardQuantale::chain_locale, 3)->to_spec(),
      build_standard(StandardQuantale::powerset_locale, 2)->to_spec(), m3()};
  std::size_t compared = 0;
  for (auto shape : shapes) {
    shape.unit.reset();
    auto const n = shape.elements.size();
    for (int trial = 0; trial < 400; ++trial) {
      for (auto& row : shape.mul) {
        for (auto& x : row) {
          x = std::uniform_int_distribution<Elem>(0, n - 1)(rng);
        }
      }
      auto direct = validate_quantale(shape);
      bool assoc  = std::none_of(direct.violations.begin(), direct.violations.end(),
                                 [](Violation const& v) {
                                  return v.kind == ViolationKind::NotAssociative;
                                });
      if (!assoc) {
        CHECK_THROWS_AS(lopos_check(shape), Error);
        continue;
      }
      CHECK(lopos_check(shape).quantale == direct.ok());
      ++compared;
    }
  }
  CHECK(compared > 0);

  auto cyclic = m3();
  cyclic.leq.emplace_back(4, 0);
  CHECK_THROWS_AS(lopos_check(cyclic), Error);
}

TEST_CASE("sheafification and finite limits") {
  auto on_luk = search_non_left_exactness(canonical_quantale_coverage(luk3()));
  CHECK(on_luk.witness.has_value());
  auto on_pow = search_non_left_exactness(canonical_quantale_coverage(pow2()), 2, 400);
  CHECK_FALSE(on_pow.witness.has_value());
  CHECK(on_pow.equalizers_checked + on_pow.products_checked > 0);

  auto pp = measure_pseudo_pullbacks(canonical_quantale_coverage(luk3()), 1, 50);
  CHECK(pp.checked > 0);
  CHECK(pp.preserved <= pp.checked);
}
