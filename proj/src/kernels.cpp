#include "gtp/kernels.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <stdexcept>

#include "gtp/random.hpp"

namespace gtp::kernels {
namespace {

class RoundingScope {
 public:
  explicit RoundingScope(Rounding r) : saved_(std::fegetround()) {
    std::fesetround(r == Rounding::Upward ? FE_UPWARD : FE_TONEAREST);
  }
  ~RoundingScope() { std::fesetround(saved_); }
  RoundingScope(const RoundingScope&) = delete;
  RoundingScope& operator=(const RoundingScope&) = delete;

 private:
  int saved_;
};

void check_leaves(std::span<const double> p, const std::vector<double>& leaves) {
  if (p.size() >= 63 || leaves.size() != (std::size_t{1} << p.size())) {
    throw std::invalid_argument("leaf count must be 2^N for an N-round script");
  }
}

KolmogorovPathStats kolmogorov_path(std::uint64_t seed, std::size_t path, std::int64_t horizon,
                                    VarianceScript v, std::int64_t window_start) {
  RandomStream rng = RandomStream(seed).split(path);
  KolmogorovPathStats st;
  double sum = 0.0;
  for (std::int64_t n = 1; n <= horizon; ++n) {
    const double x = kolmogorov_sample(n, variance_at(v, n), rng).x;
    if (x != 0.0) ++st.nonzero;
    sum += x;
    const double mean = sum / static_cast<double>(n);
    if (n >= window_start) st.max_abs_mean = std::max(st.max_abs_mean, std::fabs(mean));
  }
  st.final_mean = sum / static_cast<double>(horizon);
  return st;
}

std::int64_t bernoulli_path(std::uint64_t seed, std::size_t path, std::span<const double> p) {
  RandomStream rng = RandomStream(seed).split(path);
  std::int64_t heads = 0;
  for (double pk : p) heads += bernoulli_reality(pk, rng).x == 1.0 ? 1 : 0;
  return heads;
}

}  // namespace

double backward_induction_serial(std::span<const double> p, std::vector<double> leaves, Rounding rounding) {
  check_leaves(p, leaves);
  const RoundingScope scope(rounding);
  for (std::size_t k = p.size(); k >= 1; --k) {
    const std::size_t half = std::size_t{1} << (k - 1);
    const double pk = p[k - 1];
    for (std::size_t i = 0; i < half; ++i) {
      leaves[i] = pk * leaves[i + half] + (1.0 - pk) * leaves[i];
    }
  }
  return leaves[0];
}

double backward_induction_parallel(std::span<const double> p, std::vector<double> leaves, Rounding rounding) {
  check_leaves(p, leaves);
  const RoundingScope scope(rounding);
  for (std::size_t k = p.size(); k >= 1; --k) {
    const auto half = static_cast<std::int64_t>(std::size_t{1} << (k - 1));
    const double pk = p[k - 1];
    double* v = leaves.data();
#pragma omp parallel if (half >= 4096)
    {
      // The rounding mode is per thread.
      const RoundingScope worker(rounding);
#pragma omp for schedule(static)
      for (std::int64_t i = 0; i < half; ++i) {
        v[i] = pk * v[i + half] + (1.0 - pk) * v[i];
      }
    }
  }
  return leaves[0];
}

double variance_at(VarianceScript script, std::int64_t n) {
  const double nn = static_cast<double>(n);
  switch (script) {
    case VarianceScript::One: return 1.0;
    case VarianceScript::Linear: return nn;
    case VarianceScript::Quadratic: return nn * nn;
  }
  return 0.0;
}

std::vector<KolmogorovPathStats> kolmogorov_batch_serial(std::uint64_t seed, std::size_t paths,
                                                         std::int64_t horizon, VarianceScript v,
                                                         std::int64_t window_start) {
  return map_serial(paths, [&](std::size_t i) {
    return kolmogorov_path(seed, i, horizon, v, window_start);
  });
}

std::vector<KolmogorovPathStats> kolmogorov_batch_parallel(std::uint64_t seed, std::size_t paths,
                                                           std::int64_t horizon, VarianceScript v,
                                                           std::int64_t window_start) {
  return map_parallel(paths, [&](std::size_t i) {
    return kolmogorov_path(seed, i, horizon, v, window_start);
  });
}

std::vector<std::int64_t> bernoulli_heads_serial(std::uint64_t seed, std::size_t paths,
                                                 std::span<const double> p) {
  return map_serial(paths, [&](std::size_t i) { return bernoulli_path(seed, i, p); });
}

std::vector<std::int64_t> bernoulli_heads_parallel(std::uint64_t seed, std::size_t paths,
                                                   std::span<const double> p) {
  return map_parallel(paths, [&](std::size_t i) { return bernoulli_path(seed, i, p); });
}

}  // namespace gtp::kernels
