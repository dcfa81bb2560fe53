#ifndef LOPOS_TESTS_FIXTURES_HPP_
#define LOPOS_TESTS_FIXTURES_HPP_

// Random presheaf generators shared by the test binaries.

#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "lopos/error.hpp"
#include "lopos/presheaf.hpp"

namespace fixtures {

  using namespace lopos;

  inline std::vector<std::string> names(std::size_t n, char prefix = 's') {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(std::string(1, prefix) + std::to_string(i));
    }
    return out;
  }

  // Random sets of at most `max_size` sections and random covering
  // restrictions, retried until the restrictions commute.
  inline Presheaf random_presheaf(QuantalePtr const& q, std::mt19937& rng,
                                  std::size_t max_size = 3) {
    std::uniform_int_distribution<std::size_t> size(0, max_size);
    for (;;) {
      PresheafBuilder          b(q, "R");
      std::vector<std::size_t> n(q->size());
      // Anything above an empty set is empty, so that maps exist.
      for (Elem u : q->ascending()) {
        n[u] = size(rng);
        for (Elem c : q->lower_covers(u)) {
          if (n[c] == 0) {
            n[u] = 0;
          }
        }
        b.at(u, names(n[u]));
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
      } catch (Error const& e) {
        REQUIRE(e.kind() == ErrorKind::CompositionFails);
      }
    }
  }

}  // namespace fixtures

#endif  // LOPOS_TESTS_FIXTURES_HPP_
