#pragma once

#include <cstdint>
#include <memory>
#include <string_view>

#include "gtp/engine.hpp"

namespace gtp {

/// Counter-based stream: draw k is splitmix64(seed + (k + 1) * 0x9E3779B97F4A7C15).
/// Two streams with the same seed produce identical sequences on every
/// platform; `split` derives statistically independent child seeds.
class RandomStream {
 public:
  static constexpr std::string_view kAlgorithm = "splitmix64-ctr";

  explicit RandomStream(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double next_unit();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  RandomStream split(std::uint64_t stream_id) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Kolmogorov's three-point / two-point law for the centered outcome:
/// v < n^2: {n, -n, 0} w.p. {v/2n^2, v/2n^2, 1 - v/n^2};
/// v >= n^2: {+sqrt v, -sqrt v} w.p. {1/2, 1/2}.
Outcome kolmogorov_sample(std::int64_t n, double v, RandomStream& rng);

/// x = 1 with probability p.
Outcome bernoulli_reality(double p, RandomStream& rng);

class KolmogorovReality final : public RealityPolicy {
 public:
  explicit KolmogorovReality(RandomStream rng) : rng_(rng) {}
  Outcome respond(const RoundView& view, const ForecastMove& f, const SkepticBet&) override;
  std::unique_ptr<RealityPolicy> clone() const override {
    return std::make_unique<KolmogorovReality>(*this);
  }

 private:
  RandomStream rng_;
};

class BernoulliReality final : public RealityPolicy {
 public:
  explicit BernoulliReality(RandomStream rng) : rng_(rng) {}
  Outcome respond(const RoundView&, const ForecastMove& f, const SkepticBet&) override {
    return bernoulli_reality(f.p, rng_);
  }
  std::unique_ptr<RealityPolicy> clone() const override {
    return std::make_unique<BernoulliReality>(*this);
  }

 private:
  RandomStream rng_;
};

/// M uniform in [-m_bound, m_bound]; in the unbounded games V is uniform in
/// [0, v_bound] as well.
class RandomBoundedSkeptic final : public SkepticPolicy {
 public:
  RandomBoundedSkeptic(RandomStream rng, double m_bound, double v_bound = 0.0)
      : rng_(rng), m_bound_(m_bound), v_bound_(v_bound) {}
  SkepticBet bet(const RoundView& view, const ForecastMove& f) override;
  std::unique_ptr<SkepticPolicy> clone() const override {
    return std::make_unique<RandomBoundedSkeptic>(*this);
  }

 private:
  RandomStream rng_;
  double m_bound_;
  double v_bound_;
};

/// Random stakes scaled to the current capital so that no single restricted
/// move can bankrupt Skeptic: |M| <= K/(2 max(n, sqrt v)), V <= K/(4 max(v, n^2)).
class RandomProportionalSkeptic final : public SkepticPolicy {
 public:
  explicit RandomProportionalSkeptic(RandomStream rng) : rng_(rng) {}
  SkepticBet bet(const RoundView& view, const ForecastMove& f) override;
  std::unique_ptr<SkepticPolicy> clone() const override {
    return std::make_unique<RandomProportionalSkeptic>(*this);
  }

 private:
  RandomStream rng_;
};

}  // namespace gtp
