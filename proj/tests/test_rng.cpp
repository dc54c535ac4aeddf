#include <doctest.h>

#include <set>
#include <stdexcept>
#include <string>

#include "critpair/parallel.hpp"
#include "critpair/rng.hpp"

using namespace critpair;

TEST_CASE("rng streams are reproducible") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.raw();
    CHECK(x == b.raw());
    (void)c.raw();
  }
  CHECK(Rng(42).raw() != Rng(43).raw());
}

TEST_CASE("uniform stays in range") {
  Rng r(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = r.uniform(-2.0, 3.0);
    CHECK(v >= -2.0);
    CHECK(v < 3.0);
    CHECK(r.below(7) < 7);
  }
}

TEST_CASE("derived seeds differ across trials and degrees") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t n : {100u, 200u, 400u})
    for (std::uint64_t t = 0; t < 100; ++t) seen.insert(derive_seed(1, n, t));
  CHECK(seen.size() == 300);
  CHECK(derive_seed(1, 100, 5) == derive_seed(1, 100, 5));
  CHECK(derive_seed(1, 100, 5) != derive_seed(2, 100, 5));
}

TEST_CASE("parallel_for fills every slot and rethrows the first failure") {
  for (std::size_t workers : {1u, 3u}) {
    std::vector<int> out(50, 0);
    parallel_for(out.size(), [&](std::size_t i) { out[i] = static_cast<int>(i * i); }, workers);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));
  }
  try {
    parallel_for(
        20, [](std::size_t i) {
          if (i == 7 || i == 13) throw std::runtime_error(std::to_string(i));
        },
        4);
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "7");
  }
}
