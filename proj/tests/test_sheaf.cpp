#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "lopos/error.hpp"
#include "lopos/sheaf.hpp"

using namespace lopos;
using fixtures::random_presheaf;

namespace {
  QuantalePtr luk3() {
    return build_standard(StandardQuantale::lukasiewicz_chain, 3);
  }
  QuantalePtr pow2() {
    return build_standard(StandardQuantale::powerset_locale, 2);
  }

  // Tuples of leg sections by mixed-radix counting; a cover fails when some
  // pairwise-agreeing tuple has no or several preimages in F(U).
  SheafVerdict oracle_verdict(Presheaf const& f, Coverage const& l) {
    auto const& q         = *f.site();
    bool        glues     = true;
    bool        separated = true;
    for (Elem u = 0; u < q.size(); ++u) {
      for (auto const& legs : l.families(u)) {
        std::vector<std::size_t> t(legs.size(), 0);
        bool                     empty = false;
        for (auto v : legs) {
          empty = empty || f.at(v).size() == 0;
        }
        if (empty) {
          continue;
        }
        for (;;) {
          bool compatible = true;
          for (std::size_t i = 0; i < legs.size(); ++i) {
            for (std::size_t j = 0; j < legs.size(); ++j) {
              auto w     = q.mul(legs[i], legs[j]);
              compatible = compatible
                           && f.res(legs[i], w)(t[i]) == f.res(legs[j], w)(t[j]);
            }
          }
          if (compatible) {
            std::size_t hits = 0;
            for (std::size_t x = 0; x < f.at(u).size(); ++x) {
              bool ok = true;
              for (std::size_t i = 0; i < legs.size(); ++i) {
                ok = ok && f.res(u, legs[i])(x) == t[i];
              }
              hits += ok;
            }
            glues     = glues && hits >= 1;
            separated = separated && hits <= 1;
          }
          std::size_t k = 0;
          while (k < legs.size() && ++t[k] == f.at(legs[k]).size()) {
            t[k++] = 0;
          }
          if (k == legs.size()) {
            break;
          }
        }
      }
    }
    return !separated ? SheafVerdict::fails
           : glues    ? SheafVerdict::sheaf
                      : SheafVerdict::separated_only;
  }

  // F(1) = {a, b}, F(h) = {c, d}, F(0) = {e}; both top sections restrict
  // to c, so the pair (c, d) over {h, h} has no gluing.
  Presheaf lopsided(QuantalePtr const& q) {
    auto h = q->index_of("h");
    return PresheafBuilder(q, "lopsided")
        .at(q->top(), {"a", "b"})
        .at(h, {"c", "d"})
        .at(q->bottom(), {"e"})
        .restrict(q->top(), h, {0, 0})
        .restrict(h, q->bottom(), {0, 0})
        .build();
  }

  // Two copies of the top point with the same restrictions. Every
  // canonical cover of the top contains the top, so this is still a sheaf.
  Presheaf doubled(QuantalePtr const& q) {
    auto h = q->index_of("h");
    return PresheafBuilder(q, "doubled")
        .at(q->top(), {"a", "b"})
        .at(h, {"c"})
        .at(q->bottom(), {"e"})
        .restrict(q->top(), h, {0, 0})
        .restrict(h, q->bottom(), {0})
        .build();
  }

  // Two bottom sections: the empty cover of the bottom glues twice.
  Presheaf doubled_bottom(QuantalePtr const& q) {
    auto h = q->index_of("h");
    return PresheafBuilder(q, "doubled-bottom")
        .at(q->top(), {"a"})
        .at(h, {"c"})
        .at(q->bottom(), {"e", "f"})
        .restrict(q->top(), h, {0})
        .restrict(h, q->bottom(), {0})
        .build();
  }
}  // namespace

TEST_CASE("compatibility") {
  auto p = pow2();
  auto x = p->index_of("{x}");
  auto y = p->index_of("{y}");
  auto t = p->top();
  auto f = PresheafBuilder(p, "F")
               .at(t, {"t"})
               .at(x, {"x0", "x1"})
               .at(y, {"y0", "y1"})
               .at(p->bottom(), {"*"})
               .restrict(t, x, {0})
               .restrict(t, y, {1})
               .restrict(x, p->bottom(), {0, 0})
               .restrict(y, p->bottom(), {0, 0})
               .build();
  CHECK(is_compatible(f, {t, {t}}, {0}));
  CHECK(is_compatible(f, {t, {x, y}}, {1, 0}));
  CHECK(glue(f, {t, {x, y}}, {1, 0}).kind == GlueKind::none);
  auto g = glue(f, {t, {x, y}}, {0, 1});
  CHECK(g.kind == GlueKind::unique);
  CHECK(g.gluings == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(is_compatible(f, {t, {x, y}}, {0}), Error);
  CHECK_THROWS_AS(is_compatible(f, {t, {x, y}}, {0, 2}), Error);

  auto q = luk3();
  auto h = q->index_of("h");
  auto l = lopsided(q);
  CHECK_FALSE(is_compatible(l, {q->top(), {h, q->top()}}, {1, 0}));
  CHECK(is_compatible(l, {q->top(), {h, q->top()}}, {0, 0}));
  CHECK_THROWS_AS(glue(l, {q->top(), {h, q->top()}}, {1, 0}), Error);
  CHECK(glue(l, {h, {h}}, {1}).kind == GlueKind::unique);
  auto one = terminal_presheaf(q);
  CHECK(glue(one, {h, {h, h}}, {0, 0}).kind == GlueKind::unique);
  CHECK(glue(doubled(q), {q->top(), {h}}, {0}).kind == GlueKind::multiple);
}

TEST_CASE("sheaf checks on hand-made examples") {
  auto q  = luk3();
  auto cq = canonical_quantale_coverage(q);
  for (auto check : {check_sheaf_equalizer, check_sheaf_orthogonal}) {
    auto r = check(terminal_presheaf(q), cq, {});
    CHECK(r.is_sheaf());
    CHECK(r.witnesses.empty());
    CHECK(r.covers_checked == cq.total_families());

    r = check(lopsided(q), cq, {});
    CHECK(r.verdict == SheafVerdict::separated_only);
    REQUIRE_FALSE(r.witnesses.empty());
    CHECK(r.witnesses.front().gluings.empty());

    CHECK(check(doubled(q), cq, {}).is_sheaf());
    r = check(doubled_bottom(q), cq, {});
    CHECK(r.verdict == SheafVerdict::fails);
    REQUIRE_FALSE(r.witnesses.empty());
    CHECK(r.witnesses.front().gluings.size() == 2);
    CHECK(r.witnesses.front().family.cover.legs.empty());

    // The empty cover of the bottom forces a single bottom section.
    CHECK(check(empty_presheaf(q), cq, {}).verdict == SheafVerdict::separated_only);
  }

  auto p  = pow2();
  auto cp = canonical_quantale_coverage(p);
  for (Elem u = 0; u < p->size(); ++u) {
    CHECK(check_sheaf_equalizer(yoneda(p, u), cp).is_sheaf());
    CHECK(check_sheaf_orthogonal(yoneda(p, u), cp).is_sheaf());
  }
  CHECK(check_separated(terminal_presheaf(q), cq));
  CHECK(check_separated(lopsided(q), cq));
  CHECK_FALSE(check_separated(doubled_bottom(q), cq));
  CHECK(check_separated(empty_presheaf(p), cp));
  CHECK_THROWS_AS(check_sheaf_equalizer(terminal_presheaf(p), cq), Error);
}

TEST_CASE("both definitions and both strategies agree with brute force") {
  std::mt19937 rng(17);
  auto         prod = product_quantale(
      build_standard(StandardQuantale::chain_locale, 2), luk3());
  std::vector<Coverage> coverages;
  for (auto const& q : {luk3(), pow2(), build_standard(StandardQuantale::truncated_nat, 3),
                        build_standard(StandardQuantale::ideals_zmod, 4), prod}) {
    coverages.push_back(canonical_quantale_coverage(q));
    coverages.push_back(trivial_coverage(q));
  }
  std::size_t sheaves = 0;
  for (auto const& c : coverages) {
    for (int trial = 0; trial < 12; ++trial) {
      auto f = random_presheaf(c.site(), rng, trial % 3 + 1);
      CAPTURE(c.site()->name());
      CAPTURE(trial);
      auto expected = oracle_verdict(f, c);
      SheafCheckOptions literal{EqualizerStrategy::literal};
      SheafCheckOptions listing{EqualizerStrategy::enumerate};
      auto a = check_sheaf_equalizer(f, c, literal);
      auto b = check_sheaf_equalizer(f, c, listing);
      auto o = check_sheaf_orthogonal(f, c);
      CHECK(a.verdict == expected);
      CHECK(b.verdict == expected);
      CHECK(o.verdict == expected);
      CHECK(a.families_checked == b.families_checked);
      CHECK(a.families_checked == o.families_checked);
      sheaves += expected == SheafVerdict::sheaf;
    }
  }
  // Trivial coverages accept every presheaf.
  CHECK(sheaves >= 60);
}

TEST_CASE("shifted presheaves") {
  auto q  = luk3();
  auto cq = canonical_quantale_coverage(q);
  auto h  = q->index_of("h");
  auto t  = terminal_presheaf(q);
  CHECK(find_isomorphism(shift_presheaf(t, h), t));
  auto l = lopsided(q);
  CHECK(find_isomorphism(shift_presheaf(l, q->top()), l));
  auto s = shift_presheaf(l, h);
  CHECK(s.at(q->top()).size() == 2);
  CHECK(s.at(h).size() == 1);

  // y(h) is a sheaf and so is every shift of it.
  auto yh = yoneda(q, h);
  REQUIRE(check_sheaf_equalizer(yh, cq).is_sheaf());
  for (Elem u = 0; u < q->size(); ++u) {
    CHECK(check_sheaf_equalizer(shift_presheaf(yh, u), cq).is_sheaf());
  }
}

TEST_CASE("product sheaves") {
  auto c2 = build_standard(StandardQuantale::chain_locale, 2);
  auto q  = luk3();
  auto l1 = canonical_quantale_coverage(c2);
  auto l2 = canonical_quantale_coverage(q);
  auto lp = product_coverage(l1, l2);
  auto tt = product_sheaf(terminal_presheaf(c2), terminal_presheaf(q), lp.site());
  CHECK(find_isomorphism(tt, terminal_presheaf(lp.site())));
  auto y = yoneda(q, q->index_of("h"));
  auto f = yoneda(c2, c2->top());
  CHECK(check_sheaf_equalizer(product_sheaf(f, y, lp.site()), lp).is_sheaf());
  CHECK(check_sheaf_orthogonal(product_sheaf(f, y, lp.site()), lp).is_sheaf());
  CHECK_FALSE(check_sheaf_equalizer(product_sheaf(f, doubled_bottom(q), lp.site()), lp)
                  .is_sheaf());
  CHECK_THROWS_AS(product_sheaf(y, f, lp.site()), Error);
}

TEST_CASE("plus construction on locales") {
  std::mt19937 rng(23);
  for (auto const& p : {pow2(), build_standard(StandardQuantale::chain_locale, 3)}) {
    auto cp = canonical_quantale_coverage(p);
    CHECK(find_isomorphism(plus_construction(terminal_presheaf(p), cp),
                           terminal_presheaf(p)));
    for (Elem u = 0; u < p->size(); ++u) {
      auto y = yoneda(p, u);
      CHECK(find_isomorphism(plus_construction(y, cp), y));
    }
    std::size_t separated = 0;
    for (int trial = 0; trial < 15; ++trial) {
      auto f    = random_presheaf(p, rng, 2);
      auto plus = plus_construction(f, cp);
      CAPTURE(p->name());
      CAPTURE(trial);
      CHECK(check_separated(plus, cp));
      if (check_separated(f, cp)) {
        ++separated;
        CHECK(check_sheaf_equalizer(plus, cp).is_sheaf());
      }
      CHECK(check_sheaf_equalizer(plus_construction(plus, cp), cp).is_sheaf());
    }
    CHECK(separated > 0);
  }
  CHECK_THROWS_AS(plus_construction(terminal_presheaf(luk3()),
                                    canonical_quantale_coverage(luk3())),
                  Error);
}
