#include <benchmark/benchmark.h>

#include <random>

#include "lopos/coverage.hpp"
#include "lopos/moncat.hpp"
#include "lopos/reflect.hpp"
#include "lopos/sheaf.hpp"

using namespace lopos;

namespace {

  QuantalePtr site(int which) {
    switch (which) {
      case 0: return build_standard(StandardQuantale::lukasiewicz_chain, 3);
      case 1: return build_standard(StandardQuantale::truncated_nat, 3);
      case 2: return build_standard(StandardQuantale::powerset_locale, 2);
      default: return build_standard(StandardQuantale::chain_locale, 5);
    }
  }

  // Random presheaf with one or two sections per object, restrictions
  // drawn along lower covers.
  Presheaf random_presheaf(QuantalePtr const& q, unsigned seed) {
    std::mt19937 rng(seed);
    for (;;) {
      PresheafBuilder          b(q, "bench");
      std::vector<std::size_t> n(q->size());
      for (Elem u : q->ascending()) {
        n[u] = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
        std::vector<std::string> names;
        for (std::size_t i = 0; i < n[u]; ++i) {
          names.push_back("s" + std::to_string(i));
        }
        b.at(u, names);
      }
      for (Elem u = 0; u < q->size(); ++u) {
        for (Elem c : q->lower_covers(u)) {
          std::vector<std::size_t> map(n[u]);
          for (auto& m : map) {
            m = std::uniform_int_distribution<std::size_t>(0, n[c] - 1)(rng);
          }
          b.restrict(u, c, map);
        }
      }
      try {
        return b.build();
      } catch (Error const&) {
        ++seed;
        rng.seed(seed);
      }
    }
  }

  void BM_ValidateQuantale(benchmark::State& state) {
    auto spec = build_standard(StandardQuantale::ideals_zmod, 12)->to_spec();
    for (auto _ : state) {
      benchmark::DoNotOptimize(validate_quantale(spec).ok());
    }
  }
  BENCHMARK(BM_ValidateQuantale);

  void BM_CheckStrongPrelopology(benchmark::State& state) {
    auto c = canonical_quantale_coverage(site(static_cast<int>(state.range(0))));
    for (auto _ : state) {
      benchmark::DoNotOptimize(check_strong_prelopology(c).ok());
    }
  }
  BENCHMARK(BM_CheckStrongPrelopology)->DenseRange(0, 3);

  void BM_CheckSheaf(benchmark::State& state) {
    auto q = site(static_cast<int>(state.range(0)));
    auto c = canonical_quantale_coverage(q);
    auto f = random_presheaf(q, 7);
    for (auto _ : state) {
      benchmark::DoNotOptimize(check_sheaf_equalizer(f, c).verdict);
      benchmark::DoNotOptimize(check_sheaf_orthogonal(f, c).verdict);
    }
  }
  BENCHMARK(BM_CheckSheaf)->DenseRange(0, 3);

  void BM_Sheafify(benchmark::State& state) {
    auto q = site(static_cast<int>(state.range(0)));
    auto c = canonical_quantale_coverage(q);
    auto f = random_presheaf(q, 11);
    for (auto _ : state) {
      benchmark::DoNotOptimize(sheafify(f, c, kDefaultMaxIter).converged);
    }
  }
  BENCHMARK(BM_Sheafify)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

  void BM_SheafBattery(benchmark::State& state) {
    auto c = canonical_quantale_coverage(site(static_cast<int>(state.range(0))));
    for (auto _ : state) {
      benchmark::DoNotOptimize(sheaf_battery(c, 2).size());
    }
  }
  BENCHMARK(BM_SheafBattery)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

  void BM_CoherenceFinSet(benchmark::State& state) {
    FinSetCategory cat(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
      benchmark::DoNotOptimize(verify_appendix_suite(cat).ok());
    }
  }
  BENCHMARK(BM_CoherenceFinSet)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
