#include <algorithm>
#include <random>

#include "doctest.h"
#include "lopos/error.hpp"
#include "lopos/finset.hpp"

using namespace lopos;

namespace {
  FinSet numbered(std::size_t n, std::string const& prefix = "") {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back(prefix + std::to_string(i));
    }
    return FinSet(labels);
  }

  // Every function x -> y, by counting in base |y|.
  std::vector<FinMap> all_maps(FinSet const& x, FinSet const& y) {
    std::vector<FinMap> out;
    if (y.empty() && !x.empty()) {
      return out;
    }
    std::vector<std::size_t> d(x.size(), 0);
    while (true) {
      out.emplace_back(x, y, d);
      std::size_t i = 0;
      while (i < d.size() && ++d[i] == y.size()) {
        d[i++] = 0;
      }
      if (i == d.size()) {
        return out;
      }
    }
  }

  FinMap random_map(std::mt19937& rng, FinSet const& x, FinSet const& y) {
    std::vector<std::size_t> a(x.size());
    for (auto& v : a) {
      v = std::uniform_int_distribution<std::size_t>(0, y.size() - 1)(rng);
    }
    return FinMap(x, y, a);
  }
}  // namespace

TEST_CASE("finite sets are sorted and reject duplicates") {
  FinSet s{"b", "a", "c"};
  CHECK(s.label(0) == "a");
  CHECK(s.index_of("c") == 2);
  CHECK(s == FinSet{"c", "b", "a"});
  CHECK_THROWS_AS(FinSet({"a", "a"}), Error);
  CHECK_THROWS_AS(s.index_of("z"), Error);
  CHECK(FinSet().empty());
}

TEST_CASE("maps must be total and land in the codomain") {
  FinSet a{"a", "b"};
  FinSet x{"x"};
  CHECK_THROWS_AS(FinMap(a, x, {0}), Error);
  CHECK_THROWS_AS(FinMap(a, x, {0, 1}), Error);
  CHECK_THROWS_AS(FinMap::from_labels(a, x, {{"a", "x"}}), Error);
  auto f = FinMap::from_labels(a, x, {{"a", "x"}, {"b", "x"}});
  CHECK(f("b") == "x");
  CHECK(f.surjective());
  CHECK_FALSE(f.injective());
  CHECK_THROWS_AS(compose(f, f), Error);
}

TEST_CASE("equalizer examples") {
  FinSet ab{"a", "b"};
  FinSet xy{"x", "y"};
  auto   id = FinMap::identity(ab);
  auto   e0 = equalizer(id, id);
  CHECK(e0.object == ab);
  CHECK(e0.inclusion == id);

  auto f = FinMap::from_labels(ab, xy, {{"a", "x"}, {"b", "x"}});
  auto g = FinMap::from_labels(ab, xy, {{"a", "x"}, {"b", "y"}});
  auto e = equalizer(f, g);
  CHECK(e.object == FinSet{"a"});
  CHECK(compose(f, e.inclusion) == compose(g, e.inclusion));

  auto h = FinMap::from_labels(ab, xy, {{"a", "y"}, {"b", "y"}});
  CHECK(equalizer(f, h).object.empty());
  CHECK_THROWS_AS(equalizer(f, FinMap::identity(ab)), Error);
}

TEST_CASE("coequalizer examples") {
  FinSet xyz{"x", "y", "z"};
  auto   id = FinMap::identity(xyz);
  CHECK(coequalizer(id, id).object == xyz);

  FinSet a{"a"};
  auto   f = FinMap::from_labels(a, xyz, {{"a", "x"}});
  auto   g = FinMap::from_labels(a, xyz, {{"a", "y"}});
  auto   q = coequalizer(f, g);
  CHECK(q.object == FinSet{"x", "z"});
  CHECK(q.quotient("y") == "x");

  FinSet ab{"a", "b"};
  auto   f2 = FinMap::from_labels(ab, xyz, {{"a", "x"}, {"b", "y"}});
  auto   g2 = FinMap::from_labels(ab, xyz, {{"a", "y"}, {"b", "z"}});
  auto   q2 = coequalizer(f2, g2);
  CHECK(q2.object == FinSet{"x"});
}

TEST_CASE("product and coproduct examples") {
  auto p = product(FinSet{"a"}, FinSet{"b"});
  CHECK(p.object == FinSet{"(a,b)"});
  CHECK(product(numbered(2), numbered(3)).object.size() == 6);
  CHECK(product(numbered(2), FinSet()).object.empty());

  std::vector<FinSet> one{numbered(2)};
  CHECK(coproduct(one).object.size() == 2);
  std::vector<FinSet> two{numbered(2), numbered(3)};
  auto                c = coproduct(two);
  CHECK(c.object.size() == 5);
  CHECK(c.injections[1]("2") == "(1,2)");
  CHECK(coproduct(std::vector<FinSet>{}).object.empty());
}

TEST_CASE("pullback examples") {
  FinSet ab{"a", "b"};
  FinSet xy{"x", "y"};
  auto   f  = FinMap::from_labels(ab, xy, {{"a", "x"}, {"b", "y"}});
  auto   pb = pullback(f, FinMap::identity(xy));
  CHECK(pb.object.size() == 2);
  CHECK(pb.proj1.bijective());

  auto c1 = FinMap::from_labels(ab, xy, {{"a", "x"}, {"b", "x"}});
  auto c2 = FinMap::from_labels(numbered(3), xy, {{"0", "x"}, {"1", "x"}, {"2", "x"}});
  CHECK(pullback(c1, c2).object.size() == 6);

  auto d2 = FinMap::from_labels(numbered(1), xy, {{"0", "y"}});
  CHECK(pullback(c1, d2).object.empty());
  CHECK_THROWS_AS(pullback(c1, FinMap::identity(ab)), Error);
}

TEST_CASE("universal properties on random small instances") {
  std::mt19937 rng(20240611);
  for (int round = 0; round < 40; ++round) {
    auto const na = 1 + rng() % 3;
    auto const nc = 1 + rng() % 3;
    auto const A  = numbered(na, "a");
    auto const C  = numbered(nc, "c");
    auto const f  = random_map(rng, A, C);
    auto const g  = random_map(rng, A, C);

    auto eq = equalizer(f, g);
    CHECK(compose(f, eq.inclusion) == compose(g, eq.inclusion));
    auto co = coequalizer(f, g);
    CHECK(compose(co.quotient, f) == compose(co.quotient, g));
    CHECK(co.quotient.surjective());

    for (std::size_t nt = 0; nt <= 2; ++nt) {
      auto const T = numbered(nt, "t");
      // Equalizer: every equalizing h factors uniquely.
      for (auto const& h : all_maps(T, A)) {
        if (!(compose(f, h) == compose(g, h))) {
          continue;
        }
        int factorizations = 0;
        for (auto const& u : all_maps(T, eq.object)) {
          factorizations += compose(eq.inclusion, u) == h;
        }
        CHECK(factorizations == 1);
      }
      // Coequalizer: every coequalizing h factors uniquely.
      for (auto const& h : all_maps(C, T)) {
        if (!(compose(h, f) == compose(h, g))) {
          continue;
        }
        int factorizations = 0;
        for (auto const& u : all_maps(co.object, T)) {
          factorizations += compose(u, co.quotient) == h;
        }
        CHECK(factorizations == 1);
      }
      // Product: every pair of maps has a unique mediating map.
      auto const pr = product(A, C);
      for (auto const& p : all_maps(T, A)) {
        for (auto const& q : all_maps(T, C)) {
          int mediating = 0;
          for (auto const& u : all_maps(T, pr.object)) {
            mediating += compose(pr.proj1, u) == p && compose(pr.proj2, u) == q;
          }
          CHECK(mediating == 1);
        }
      }
    }

    // Pullback agrees with the equalizer of the composites with projections.
    auto const B  = numbered(1 + rng() % 3, "b");
    auto const k  = random_map(rng, B, C);
    auto const pb = pullback(f, k);
    CHECK(compose(f, pb.proj1) == compose(k, pb.proj2));
    auto const pr  = product(A, B);
    auto const alt = equalizer(compose(f, pr.proj1), compose(k, pr.proj2));
    REQUIRE(alt.object.size() == pb.object.size());
    // Both are jointly monic, so the comparison is determined pointwise.
    auto const a1 = compose(pr.proj1, alt.inclusion);
    auto const a2 = compose(pr.proj2, alt.inclusion);
    std::vector<std::size_t> image;
    for (std::size_t p = 0; p < pb.object.size(); ++p) {
      std::size_t hits = 0;
      for (std::size_t q = 0; q < alt.object.size(); ++q) {
        if (a1(q) == pb.proj1(p) && a2(q) == pb.proj2(p)) {
          ++hits;
          image.push_back(q);
        }
      }
      CHECK(hits == 1);
    }
    std::sort(image.begin(), image.end());
    CHECK(std::adjacent_find(image.begin(), image.end()) == image.end());
  }
}

TEST_CASE("disjoint sets track classes") {
  DisjointSets ds(5);
  CHECK(ds.unite(0, 1));
  CHECK(ds.unite(3, 4));
  CHECK_FALSE(ds.unite(1, 0));
  CHECK(ds.number_of_classes() == 3);
  CHECK(ds.find(0) == ds.find(1));
  CHECK(ds.find(2) != ds.find(3));
}
