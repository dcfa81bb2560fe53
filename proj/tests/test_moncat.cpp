#include "doctest.h"
#include "lopos/moncat.hpp"

using namespace lopos;

namespace {
  QuantalePtr luk3() {
    return build_standard(StandardQuantale::lukasiewicz_chain, 3);
  }

  FinSet set_of(std::size_t n) {
    return FinSetCategory(3).objects().at(n);
  }
}  // namespace

static_assert(MonoidalCategory<ThinCategory>);
static_assert(MonoidalCategory<FinSetCategory>);
static_assert(MonoidalCategory<ProductCategory<FinSetCategory, ThinCategory>>);
static_assert(MonoidalCategory<MutatedCategory<FinSetCategory>>);

TEST_CASE("projections") {
  FinSetCategory fs(3);
  auto           a  = set_of(2);
  auto           b  = set_of(3);
  auto           p1 = projection1(fs, a, b);
  auto           pr = product(a, b);
  CHECK(p1 == pr.proj1);
  CHECK(projection2(fs, a, b) == pr.proj2);

  ThinCategory t(luk3());
  auto         h = t.quantale()->index_of("h");
  auto         o = t.quantale()->index_of("1");
  CHECK(projection1(t, h, o) == ThinArrow{h, h});

  ProductCategory<FinSetCategory, ThinCategory> pc(fs, t);
  auto pp = projection1(pc, {a, h}, {b, o});
  CHECK(pp.first == pr.proj1);
  CHECK(pp.second == ThinArrow{h, h});
}

TEST_CASE("pseudo-pullbacks") {
  ThinCategory t(luk3());
  auto const&  q = *t.quantale();
  auto         h = q.index_of("h");
  auto         o = q.index_of("1");
  auto         f = t.arrow(h, o);
  auto         pb = pseudo_pullback(t, f, f);
  CHECK(pb.apex == q.index_of("0"));

  FinSetCategory fs(3);
  auto           f2 = FinMap(set_of(3), set_of(2), {0, 1, 1});
  auto           g2 = FinMap(set_of(2), set_of(2), {1, 0});
  auto           pp = pseudo_pullback(fs, f2, g2);
  auto           pl = pullback(f2, g2);
  REQUIRE(pp.apex.size() == pl.object.size());
  // The unique iso commuting with the projections.
  int isos = 0;
  for (auto const& u : fs.hom(pl.object, pp.apex)) {
    isos += u.bijective() && compose(pp.p1, u) == pl.proj1
            && compose(pp.p2, u) == pl.proj2;
  }
  CHECK(isos == 1);

  ProductCategory<FinSetCategory, ThinCategory> pc(fs, t);
  auto pq = pseudo_pullback(pc, {f2, f}, {g2, f});
  CHECK(pq.apex.first == pp.apex);
  CHECK(pq.apex.second == pb.apex);

  CHECK_THROWS_AS(pseudo_pullback(fs, f2, FinMap::identity(set_of(3))), Error);
}

TEST_CASE("tensor preserves equalizers") {
  FinSetCategory fs(2);
  CHECK(check_tensor_preserves_equalizers(fs).failed == 0);
  ThinCategory t(luk3());
  CHECK(check_tensor_preserves_equalizers(t).failed == 0);
  ProductCategory<FinSetCategory, ThinCategory> pc(FinSetCategory(1), t);
  CHECK(check_tensor_preserves_equalizers(pc).failed == 0);
}

TEST_CASE("monoidal axioms hold in the bundled instances") {
  FinSetCategory fs(2);
  CHECK(verify_monoidal_axioms(fs).ok());
  ThinCategory t(luk3());
  CHECK(verify_monoidal_axioms(t).ok());
  ProductCategory<FinSetCategory, ThinCategory> pc(FinSetCategory(1), t);
  CHECK(verify_monoidal_axioms(pc).ok());
}

TEST_CASE("coherence suite holds in the bundled instances") {
  FinSetCategory fs(2);
  auto           r = verify_appendix_suite(fs);
  CHECK(r.ok());
  CHECK(r.find("pseudo-pullback-equalizes")->checked > 0);
  ThinCategory t(luk3());
  CHECK(verify_appendix_suite(t).ok());
  ThinCategory t2(build_standard(StandardQuantale::truncated_nat, 3));
  CHECK(verify_appendix_suite(t2).ok());
  ProductCategory<FinSetCategory, ThinCategory> pc(FinSetCategory(1), t);
  CHECK(verify_appendix_suite(pc).ok());
}

TEST_CASE("every injected breakage is detected") {
  for (auto m : all_finset_mutations()) {
    CAPTURE(to_string(m));
    auto broken = mutate(FinSetCategory(2), m);
    auto a      = verify_monoidal_axioms(broken);
    auto b      = verify_appendix_suite(broken);
    CHECK_FALSE((a.ok() && b.ok()));
  }
  auto broken = mutate(FinSetCategory(2),
                       FinSetMutation::braiding_identity_on_diagonal);
  auto r      = verify_appendix_suite(broken);
  CHECK(r.find("braided-first-projection")->failed > 0);
  CHECK_FALSE(r.find("braided-first-projection")->first_witness.empty());
}

TEST_CASE("l and r factorizations") {
  ThinCategory t(luk3());
  auto const&  q  = *t.quantale();
  auto         h  = q.index_of("h");
  auto         o  = q.index_of("1");
  auto         rt = exists_l_r_factorizations(
      t, {t.arrow(h, o), t.arrow(o, o)}, h);
  CHECK(rt.ok);
  CHECK(rt.pairs_checked == 4);

  FinSetCategory fs(3);
  auto           u = set_of(2);
  auto           legs
      = std::vector<FinMap>{FinMap(set_of(1), u, {0}), FinMap(set_of(2), u, {1, 1})};
  auto rf = exists_l_r_factorizations(fs, legs, set_of(2));
  CHECK(rf.ok);
  CHECK(rf.l_witnesses.size() == 4);

  // Coherence defects that stay bijective do not obstruct the lifts.
  for (auto m : all_finset_mutations()) {
    CAPTURE(to_string(m));
    auto broken = mutate(FinSetCategory(3), m);
    auto rb     = exists_l_r_factorizations(broken, legs, set_of(2));
    if (m == FinSetMutation::right_unitor_collapsed_on_generators) {
      CHECK_FALSE(rb.ok);
      REQUIRE_FALSE(rb.failures.empty());
      CHECK(rb.failures.front().left_side);
    } else {
      CHECK(rb.ok);
    }
  }
}
