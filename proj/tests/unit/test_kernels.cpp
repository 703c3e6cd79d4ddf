#include "doctest.h"
#include "gtp/kernels.hpp"
#include "gtp/random.hpp"

using namespace gtp;

TEST_CASE("parallel backward induction matches the serial kernel") {
  RandomStream rng(8);
  for (std::size_t n : {1u, 5u, 12u, 16u}) {
    std::vector<double> p(n), leaves(std::size_t{1} << n);
    for (double& x : p) x = rng.next_unit();
    for (double& x : leaves) x = rng.next_unit() < 0.5;
    CHECK(kernels::backward_induction_serial(p, leaves) == kernels::backward_induction_parallel(p, leaves));
  }
  CHECK_THROWS(kernels::backward_induction_serial(std::vector<double>{0.5}, std::vector<double>(3)));
}

TEST_CASE("parallel Monte-Carlo batches match the serial ones") {
  for (auto script : {kernels::VarianceScript::One, kernels::VarianceScript::Linear,
                      kernels::VarianceScript::Quadratic}) {
    const auto a = kernels::kolmogorov_batch_serial(3, 64, 300, script, 150);
    const auto b = kernels::kolmogorov_batch_parallel(3, 64, 300, script, 150);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].nonzero == b[i].nonzero);
      CHECK(a[i].max_abs_mean == b[i].max_abs_mean);
      CHECK(a[i].final_mean == b[i].final_mean);
    }
  }
  const std::vector<double> p(50, 0.3);
  CHECK(kernels::bernoulli_heads_serial(4, 100, p) == kernels::bernoulli_heads_parallel(4, 100, p));
  const auto sq = kernels::map_parallel(100, [](std::size_t i) { return i * i; });
  CHECK(sq == kernels::map_serial(100, [](std::size_t i) { return i * i; }));
}

TEST_CASE("upward rounding bounds the nearest-rounded value") {
  RandomStream rng(81);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.next_u64() % 14;
    std::vector<double> p(n), leaves(std::size_t{1} << n);
    for (double& x : p) x = rng.next_unit();
    for (double& x : leaves) x = rng.next_unit() < 0.5;
    const double up = kernels::backward_induction_serial(p, leaves, kernels::Rounding::Upward);
    const double near = kernels::backward_induction_serial(p, leaves);
    CHECK(up >= near);
    CHECK(up - near <= 1e-13);
    CHECK(up == kernels::backward_induction_parallel(p, leaves, kernels::Rounding::Upward));
  }
}
