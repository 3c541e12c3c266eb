#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <set>

#include "hysterion/rng.hpp"

using namespace hyst;

TEST_CASE("mix64 matches the splitmix64 reference outputs") {
  const std::uint64_t g = 0x9E3779B97F4A7C15ull;
  CHECK(mix64(g) == 0xE220A8397B1DCDAFull);
  CHECK(mix64(2 * g) == 0x6E789E6AA1B965F4ull);
  CHECK(mix64(3 * g) == 0x06C45D188009454Full);
  CHECK(mix64(1) != 1);
}

TEST_CASE("uniform_at is deterministic and strictly inside (0,1)") {
  CHECK(uniform_at(0, 0) == doctest::Approx(0.88331080821364272).epsilon(1e-16));
  CHECK(uniform_at(7, 42) == uniform_at(7, 42));
  CHECK(uniform_at(7, 42) != uniform_at(7, 43));
  CHECK(uniform_at(7, 42) != uniform_at(8, 42));
  double mn = 1.0, mx = 0.0, sum = 0.0, sum2 = 0.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const double u = uniform_at(123, static_cast<std::uint64_t>(k));
    mn = std::min(mn, u);
    mx = std::max(mx, u);
    sum += u;
    sum2 += u * u;
  }
  CHECK(mn > 0.0);
  CHECK(mx < 1.0);
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
  CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.03));
}

TEST_CASE("inverse normal quantile pins") {
  CHECK(inverse_normal_cdf(0.5) == 0.0);
  CHECK(inverse_normal_cdf(0.975) ==
        doctest::Approx(1.95996398454005).epsilon(1e-9));
  CHECK(inverse_normal_cdf(0.99) ==
        doctest::Approx(2.32634787404084).epsilon(1e-9));
  CHECK(inverse_normal_cdf(1e-6) ==
        doctest::Approx(-4.7534243088229).epsilon(1e-9));
  CHECK(inverse_normal_cdf(1e-12) ==
        doctest::Approx(-7.03448382530113).epsilon(1e-9));
  CHECK(inverse_normal_cdf(0.3) ==
        doctest::Approx(-0.524400512708041).epsilon(1e-9));
  for (double p : {0.001, 0.1, 0.25, 0.4}) {
    CHECK(inverse_normal_cdf(1.0 - p) ==
          doctest::Approx(-inverse_normal_cdf(p)).epsilon(1e-9));
  }
}

TEST_CASE("gaussian_at moments") {
  CHECK(gaussian_at(0, 0) == doctest::Approx(1.19170131166946).epsilon(1e-9));
  const int n = 200000;
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  for (int k = 0; k < n; ++k) {
    const double z = gaussian_at(99, static_cast<std::uint64_t>(k));
    s1 += z;
    s2 += z * z;
    s3 += z * z * z;
    s4 += z * z * z * z;
  }
  const double mean = s1 / n;
  const double var = s2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(s3 / n) < 0.05);
  CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("path seeds are distinct and base-dependent") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 4096; ++i) seen.insert(path_seed(1, i));
  CHECK(seen.size() == 4096);
  CHECK(path_seed(1, 7) != path_seed(2, 7));
}

TEST_CASE("noise stream replays the counter sequence") {
  NoiseStream s(31);
  CHECK(s.next() == gaussian_at(31, 0));
  CHECK(s.next() == gaussian_at(31, 1));
  CHECK(s.next() == gaussian_at(31, 2));
}
