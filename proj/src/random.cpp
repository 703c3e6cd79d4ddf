#include "gtp/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gtp {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t RandomStream::next_u64() {
  ++counter_;
  return splitmix64(seed_ + counter_ * kGolden);
}

double RandomStream::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

RandomStream RandomStream::split(std::uint64_t stream_id) const {
  // Child seeds are hashed twice so that neighbouring ids and neighbouring
  // parent seeds do not produce overlapping arithmetic progressions.
  return RandomStream(splitmix64(splitmix64(seed_ ^ 0xD1B54A32D192ED03ULL) + stream_id * kGolden));
}

Outcome kolmogorov_sample(std::int64_t n, double v, RandomStream& rng) {
  if (n < 1) throw std::invalid_argument("round index must be >= 1");
  if (!(v >= 0.0)) throw std::invalid_argument("variance must be >= 0");
  const double nn = static_cast<double>(n);
  const double u = rng.next_unit();
  if (v < nn * nn) {
    const double half = v / (2.0 * nn * nn);
    if (u < half) return {nn};
    if (u < 2.0 * half) return {-nn};
    return {0.0};
  }
  const double r = std::sqrt(v);
  return {u < 0.5 ? r : -r};
}

Outcome bernoulli_reality(double p, RandomStream& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0,1]");
  return {rng.next_unit() < p ? 1.0 : 0.0};
}

Outcome KolmogorovReality::respond(const RoundView& view, const ForecastMove& f,
                                   const SkepticBet&) {
  return {f.m + kolmogorov_sample(view.n, f.v, rng_).x};
}

SkepticBet RandomBoundedSkeptic::bet(const RoundView& view, const ForecastMove&) {
  SkepticBet s;
  s.M = rng_.uniform(-m_bound_, m_bound_);
  if (!view.protocol.priced()) s.V = rng_.uniform(0.0, v_bound_);
  return s;
}

SkepticBet RandomProportionalSkeptic::bet(const RoundView& view, const ForecastMove& f) {
  const double k = std::max(view.capital, 0.0);
  SkepticBet s;
  if (view.protocol.priced()) {
    s.M = rng_.uniform(-k, k);
    return s;
  }
  const double n = static_cast<double>(view.n);
  s.M = rng_.uniform(-1.0, 1.0) * k / (2.0 * std::max(n, std::sqrt(f.v)));
  s.V = rng_.uniform(0.0, 1.0) * k / (4.0 * std::max(f.v, n * n));
  return s;
}

}  // namespace gtp
