#include <doctest.h>

#include "octcal/rng.hpp"

using namespace octcal;

TEST_CASE("counter rng determinism and independence") {
  const ArrayX a = gaussian_noise(256, 1.0, 11, 3);
  const ArrayX b = gaussian_noise(256, 1.0, 11, 3);
  CHECK((a == b).all());  // bit-identical

  const ArrayX c = gaussian_noise(256, 1.0, 11, 4);
  CHECK_FALSE((a == c).all());
  const ArrayX d = gaussian_noise(256, 1.0, 12, 3);
  CHECK_FALSE((a == d).all());

  CHECK((gaussian_noise(64, 0.0, 1, 1) == 0.0).all());
}

TEST_CASE("gaussian moments") {
  const ArrayX x = gaussian_noise(200000, 1.0, 2024, 0);
  CHECK(std::abs(x.mean()) < 0.02);
  CHECK(x.square().mean() == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("derive_seed spreads trials") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}
