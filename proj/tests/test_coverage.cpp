#include <algorithm>
#include <chrono>
#include <functional>
#include <set>

#include "doctest.h"
#include "lopos/coverage.hpp"
#include "lopos/error.hpp"
#include "oracles.hpp"

using namespace lopos;

namespace {
  QuantalePtr std_q(StandardQuantale w, std::size_t n) {
    return build_standard(w, n);
  }

  // Canonical covers of every element by direct recursion over
  // multiplicities, with joins from the oracle order.
  std::set<std::pair<Elem, Family>> oracle_canonical(Quantale const& q,
                                                     std::size_t     cap) {
    auto spec  = q.to_spec();
    auto order = oracle::close(spec.elements.size(), spec.leq);
    std::set<std::pair<Elem, Family>> out;
    auto const                        n = q.size();
    std::vector<std::size_t>          mult(n, 0);
    std::function<void(std::size_t)>  rec = [&](std::size_t k) {
      if (k == n) {
        std::vector<std::size_t> support;
        Family                   fam;
        for (std::size_t e = 0; e < n; ++e) {
          if (mult[e]) {
            support.push_back(e);
          }
          fam.insert(fam.end(), mult[e], e);
        }
        auto j = oracle::sup(order, support);
        bool below = true;
        for (auto e : support) {
          below = below && order.le[e][j];
        }
        if (below) {
          out.insert({j, fam});
        }
        return;
      }
      for (std::size_t m = 0; m <= cap; ++m) {
        mult[k] = m;
        rec(k + 1);
      }
      mult[k] = 0;
    };
    rec(0);
    return out;
  }

  std::set<std::pair<Elem, Family>> as_set(Coverage const& c) {
    std::set<std::pair<Elem, Family>> out;
    for (Elem u = 0; u < c.site()->size(); ++u) {
      for (auto const& f : c.families(u)) {
        out.insert({u, f});
      }
    }
    return out;
  }

  std::vector<QuantalePtr> semicartesian_battery() {
    return {std_q(StandardQuantale::powerset_locale, 2),
            std_q(StandardQuantale::lukasiewicz_chain, 3),
            std_q(StandardQuantale::truncated_nat, 3),
            std_q(StandardQuantale::ideals_zmod, 4),
            std_q(StandardQuantale::chain_locale, 3),
            product_quantale(std_q(StandardQuantale::chain_locale, 2),
                             std_q(StandardQuantale::lukasiewicz_chain, 3))};
  }

  // Canonical on the top element, identities only below it.
  Coverage top_only(QuantalePtr const& q) {
    auto c = canonical_quantale_coverage(q);
    for (Elem u = 0; u < q->size(); ++u) {
      if (u == q->top()) {
        continue;
      }
      auto fams = c.families(u);
      for (auto const& f : fams) {
        if (f != Family{u}) {
          c.remove({u, f});
        }
      }
    }
    return c;
  }
}  // namespace

TEST_CASE("canonical covers agree with an independent enumeration") {
  for (auto const& q : semicartesian_battery()) {
    for (std::size_t cap : {1u, 2u}) {
      CAPTURE(q->name());
      CAPTURE(cap);
      CHECK(as_set(canonical_quantale_coverage(q, cap))
            == oracle_canonical(*q, cap));
    }
  }
}

TEST_CASE("canonical cover examples") {
  auto p  = std_q(StandardQuantale::powerset_locale, 2);
  auto cp = canonical_quantale_coverage(p);
  auto x  = p->index_of("{x}");
  auto y  = p->index_of("{y}");
  auto t  = p->top();
  CHECK(cp.covers(t, {x, y}));
  CHECK(cp.covers(t, {x, t}));
  CHECK(cp.covers(t, {t}));
  CHECK_FALSE(cp.covers(t, {x, x}));
  CHECK(cp.covers(p->bottom(), {}));

  auto l  = std_q(StandardQuantale::lukasiewicz_chain, 3);
  auto cl = canonical_quantale_coverage(l);
  auto h  = l->index_of("h");
  for (auto const& f : cl.families(l->top())) {
    CHECK(std::count(f.begin(), f.end(), l->top()) > 0);
  }
  for (auto const& f : cl.families(h)) {
    CHECK(std::count(f.begin(), f.end(), h) > 0);
  }
  CHECK(cl.covers(h, {h, h}));
  CHECK(cl.covers(h, {h, h, h, h}));
  CHECK(cl.families(h).size() == 6);

  auto n  = std_q(StandardQuantale::truncated_nat, 3);
  auto cn = canonical_quantale_coverage(n);
  CHECK(cn.covers(n->index_of("1"), {n->index_of("1"), n->index_of("2")}));
  CHECK_FALSE(cn.covers(n->index_of("1"), {n->index_of("2")}));

  CHECK_THROWS_AS(Coverage(p, 0), Error);
  CHECK_THROWS_AS(cp.add({x, {t}}), Error);
}

TEST_CASE("canonical coverages are strong prelopologies on every bundled site") {
  for (auto const& q : semicartesian_battery()) {
    CAPTURE(q->name());
    auto c = canonical_quantale_coverage(q);
    auto r = check_strong_prelopology(c);
    CHECK(r.ok());
    CHECK(r.axioms_checked.size() == 5);
    CHECK(check_weak_prelopology(c).ok());
    CHECK(check_prelopology(c).ok());
  }
}

TEST_CASE("pretopology checks need a cartesian site") {
  auto l = std_q(StandardQuantale::lukasiewicz_chain, 3);
  CHECK_THROWS_AS(check_pretopology(canonical_quantale_coverage(l)), Error);
  auto p = std_q(StandardQuantale::powerset_locale, 2);
  CHECK(check_pretopology(canonical_quantale_coverage(p)).ok());
  CHECK(check_pretopology(trivial_coverage(p)).ok());
}

TEST_CASE("removing composite families breaks closure under composition") {
  auto p = std_q(StandardQuantale::powerset_locale, 2);
  auto c = canonical_quantale_coverage(p);
  auto fams = c.families(p->top());
  for (auto const& f : fams) {
    if (f.size() > 1 && f.front() == p->bottom()) {
      c.remove({p->top(), f});
    }
  }
  auto r = check_weak_prelopology(c);
  CHECK(r.failures_of(2) > 0);
  CHECK(r.failures_of(1) == 0);
  REQUIRE_FALSE(r.violations.empty());
  CHECK(r.violations.front().axiom == 2);
  CHECK_FALSE(r.violations.front().witness.empty());
  CHECK(check_pretopology(c).failures_of(2) > 0);
}

TEST_CASE("a locale coverage without stability fails the fourth axiom") {
  auto p = std_q(StandardQuantale::powerset_locale, 2);
  auto c = top_only(p);
  auto r = check_prelopology(c);
  CHECK(r.failures_of(4) > 0);
  CHECK(check_pretopology(c).failures_of(3) > 0);
  c.remove({p->top(), {p->top()}});
  CHECK(check_weak_prelopology(c).failures_of(1) == 1);
}

TEST_CASE("on locales, pretopologies and prelopologies coincide") {
  std::vector<Coverage> battery;
  for (auto const& q : {std_q(StandardQuantale::powerset_locale, 2),
                        std_q(StandardQuantale::chain_locale, 3),
                        std_q(StandardQuantale::powerset_locale, 1)}) {
    battery.push_back(canonical_quantale_coverage(q));
    battery.push_back(canonical_quantale_coverage(q, 1));
    battery.push_back(trivial_coverage(q));
    battery.push_back(top_only(q));
    auto holes = canonical_quantale_coverage(q);
    holes.remove({q->top(), {q->top()}});
    battery.push_back(holes);
  }
  std::size_t passing = 0;
  for (auto const& c : battery) {
    CAPTURE(c.site()->name());
    CAPTURE(c.name());
    bool pre  = check_pretopology(c).ok();
    bool prel = check_prelopology(c).ok();
    CHECK(pre == prel);
    passing += pre;
  }
  CHECK(passing >= 6);
  CHECK(passing < battery.size());
}

TEST_CASE("product coverage") {
  auto c2 = std_q(StandardQuantale::chain_locale, 2);
  auto l3 = std_q(StandardQuantale::lukasiewicz_chain, 3);

  // Identities on the locale against the quantalic covers.
  auto mixed = product_coverage(trivial_coverage(c2, 1),
                                canonical_quantale_coverage(l3, 1));
  auto const& p = mixed.site();
  CHECK(check_prelopology(mixed).ok());
  auto diff = compare_coverages(mixed, canonical_quantale_coverage(p, 1));
  REQUIRE(diff);
  CHECK_FALSE(diff->in_first);
  CHECK_THROWS_AS(check_pretopology(mixed), Error);
  auto top = p->top();
  CHECK(mixed.covers(top, {p->pair(1, l3->index_of("h")), top}));
  CHECK_FALSE(mixed.covers(top, {p->pair(0, l3->top()), p->pair(1, l3->bottom())}));

  auto locales = product_coverage(canonical_quantale_coverage(c2),
                                  canonical_quantale_coverage(c2));
  CHECK(check_pretopology(locales).ok());

  auto triv = product_coverage(trivial_coverage(c2), trivial_coverage(l3));
  CHECK_FALSE(compare_coverages(triv, trivial_coverage(triv.site())));

  auto broken = top_only(std_q(StandardQuantale::powerset_locale, 2));
  CHECK_THROWS_AS(product_coverage(broken, trivial_coverage(l3)), Error);
  CHECK_THROWS_AS(product_coverage(trivial_coverage(c2),
                                   trivial_coverage(l3),
                                   product_quantale(l3, c2)),
                  Error);
}

TEST_CASE("strong check on the largest bundled site stays fast") {
  auto q     = semicartesian_battery().back();
  auto c     = canonical_quantale_coverage(q);
  auto start = std::chrono::steady_clock::now();
  CHECK(check_strong_prelopology(c).ok());
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                  .count();
  CHECK(secs < 10.0);
  MESSAGE("families: " << c.total_families() << ", seconds: " << secs);
}
