#pragma once

// Data-parallel kernels. Each OpenMP kernel has a serial twin with the same
// contract; tests compare them and bench_kernels times them.

#include <cstddef>
#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

namespace gtp::kernels {

/// Collapses 2^N leaf values to the root: at level k,
/// value(prefix) = p_k value(prefix, x_k = 1) + (1 - p_k) value(prefix, x_k = 0),
/// where x_k is bit k-1 of the leaf index. `leaves` is consumed.
/// Upward rounding makes the result an upper bound of the exact value for
/// nonnegative leaves, as a superhedging price should be.
enum class Rounding { Nearest, Upward };
double backward_induction_serial(std::span<const double> p, std::vector<double> leaves,
                                 Rounding rounding = Rounding::Nearest);
double backward_induction_parallel(std::span<const double> p, std::vector<double> leaves,
                                   Rounding rounding = Rounding::Nearest);

/// Applies fn(i) for i in [0, count) and collects the results in order.
template <class Fn>
auto map_serial(std::size_t count, Fn&& fn) {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<R> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
  return out;
}

template <class Fn>
auto map_parallel(std::size_t count, Fn&& fn) {
  using R = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<R> out(count);
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
  return out;
}

/// Per-path statistics of Kolmogorov's randomized Reality with m = 0.
struct KolmogorovPathStats {
  std::int64_t nonzero = 0;
  /// max |S_n / n| over n in [window_start, horizon]
  double max_abs_mean = 0.0;
  double final_mean = 0.0;
};

enum class VarianceScript { One, Linear, Quadratic };

double variance_at(VarianceScript script, std::int64_t n);

/// Path i uses RandomStream(seed).split(i).
std::vector<KolmogorovPathStats> kolmogorov_batch_serial(std::uint64_t seed, std::size_t paths,
                                                         std::int64_t horizon, VarianceScript v,
                                                         std::int64_t window_start);
std::vector<KolmogorovPathStats> kolmogorov_batch_parallel(std::uint64_t seed, std::size_t paths,
                                                           std::int64_t horizon, VarianceScript v,
                                                           std::int64_t window_start);

/// Head counts of Bernoulli(p_n) Reality along independent seeded paths.
std::vector<std::int64_t> bernoulli_heads_serial(std::uint64_t seed, std::size_t paths,
                                                 std::span<const double> p);
std::vector<std::int64_t> bernoulli_heads_parallel(std::uint64_t seed, std::size_t paths,
                                                   std::span<const double> p);

}  // namespace gtp::kernels
