#pragma once

#include <cstdint>
#include <memory>

#include "gtp/engine.hpp"

namespace gtp {

/// Running head count and partial-sum ceiling index.
///
/// `b` is the number of earlier rounds counted as heads (x = 1 in the coin
/// game, centered x != 0 in the unbounded games). `c` is the unique integer
/// with c - 1 <= partial_sum < c; an integral sum j gives c = j + 1.
struct BcCounters {
  std::int64_t b = 0;
  double partial_sum = 0.0;
  std::int64_t c = 1;
  /// Rounding error of partial_sum (compensated summation), so that c is
  /// right even when a sum like 1 - 2^-60 rounds to 1.0.
  double partial_sum_low = 0.0;
};

inline bool operator==(const BcCounters& a, const BcCounters& b) {
  return a.b == b.b && a.partial_sum == b.partial_sum && a.c == b.c &&
         a.partial_sum_low == b.partial_sum_low;
}

/// c for the partial sum hi + low (floor + 1).
std::int64_t ceiling_index(double partial_sum, double low = 0.0);

BcCounters heads_count_update(BcCounters counters, bool head);
/// Adds `increment` (>= 0) to the partial sum and recomputes c.
BcCounters ceiling_index_update(BcCounters counters, double increment);

/// -2^{-b-1}: forces sum p = inf => sum x = inf.
double bc_divergent_bet(const BcCounters& counters);
/// 2^{-c-1}: forces sum p < inf => sum x < inf. Counters must include the
/// current round's p.
double bc_convergent_bet(const BcCounters& counters);
/// 2^{-c-2} - 2^{-b-2}: the half-weight sum of the two bets above, which
/// forces both directions at once.
double bc_fictional_bet(const BcCounters& counters);

enum class BcBet { Divergent, Convergent, Fictional };

/// Coin-game Skeptic playing one of the Borel-Cantelli bets. The counters
/// see p as soon as Forecaster announces it and x after Reality's move.
class BcSkeptic final : public SkepticPolicy {
 public:
  explicit BcSkeptic(BcBet which) : which_(which) {}
  SkepticBet bet(const RoundView& view, const ForecastMove& f) override;
  void observe(const RoundRecord& r) override;
  std::unique_ptr<SkepticPolicy> clone() const override {
    return std::make_unique<BcSkeptic>(*this);
  }
  const BcCounters& counters() const { return counters_; }

 private:
  BcBet which_;
  BcCounters counters_;
};

/// Bets +-fraction * K_{n-1}, alternating sign every round (sign + on odd n).
/// In the unbounded games the stake is further divided by max(n, sqrt(v)).
class BangBangSkeptic final : public SkepticPolicy {
 public:
  explicit BangBangSkeptic(double fraction) : fraction_(fraction) {}
  SkepticBet bet(const RoundView& view, const ForecastMove& f) override;
  std::unique_ptr<SkepticPolicy> clone() const override {
    return std::make_unique<BangBangSkeptic>(*this);
  }

 private:
  double fraction_;
};

/// Unbounded-game analogue of the convergent-side bet: V_n = 2^{-c_n-1}/n^2
/// with c tracking sum v_k/k^2. Pays off whenever Reality moves away from m.
class VarianceBcSkeptic final : public SkepticPolicy {
 public:
  SkepticBet bet(const RoundView& view, const ForecastMove& f) override;
  std::unique_ptr<SkepticPolicy> clone() const override {
    return std::make_unique<VarianceBcSkeptic>(*this);
  }

 private:
  BcCounters counters_;
};

/// Unbounded-game mean bettor M_n = -2^{-b_n-1}/n with b counting nonzero
/// centered moves; V = 0.
class MeanBcSkeptic final : public SkepticPolicy {
 public:
  SkepticBet bet(const RoundView& view, const ForecastMove& f) override;
  void observe(const RoundRecord& r) override;
  std::unique_ptr<SkepticPolicy> clone() const override {
    return std::make_unique<MeanBcSkeptic>(*this);
  }

 private:
  BcCounters counters_;
};

}  // namespace gtp
