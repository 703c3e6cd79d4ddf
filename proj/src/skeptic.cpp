#include "gtp/skeptic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gtp {

std::int64_t ceiling_index(double partial_sum, double low) {
  double f = std::floor(partial_sum);
  const double frac = (partial_sum - f) + low;
  if (frac < 0.0) f -= 1.0;
  if (frac >= 1.0) f += 1.0;
  return static_cast<std::int64_t>(f) + 1;
}

BcCounters heads_count_update(BcCounters counters, bool head) {
  if (head) ++counters.b;
  return counters;
}

BcCounters ceiling_index_update(BcCounters counters, double increment) {
  if (!(increment >= 0.0)) throw std::invalid_argument("partial-sum increment must be >= 0");
  // TwoSum: hi + err equals the exact sum of the two operands.
  const double hi = counters.partial_sum + increment;
  const double bv = hi - counters.partial_sum;
  const double err = (counters.partial_sum - (hi - bv)) + (increment - bv);
  const double low = counters.partial_sum_low + err;
  counters.partial_sum = hi + low;
  counters.partial_sum_low = low - (counters.partial_sum - hi);
  counters.c = ceiling_index(counters.partial_sum, counters.partial_sum_low);
  return counters;
}

// ldexp keeps the powers of two exact.
double bc_divergent_bet(const BcCounters& k) {
  return -std::ldexp(1.0, static_cast<int>(-k.b - 1));
}

double bc_convergent_bet(const BcCounters& k) {
  return std::ldexp(1.0, static_cast<int>(-k.c - 1));
}

double bc_fictional_bet(const BcCounters& k) {
  return std::ldexp(1.0, static_cast<int>(-k.c - 2)) - std::ldexp(1.0, static_cast<int>(-k.b - 2));
}

SkepticBet BcSkeptic::bet(const RoundView&, const ForecastMove& f) {
  counters_ = ceiling_index_update(counters_, f.p);
  switch (which_) {
    case BcBet::Divergent: return {bc_divergent_bet(counters_), 0.0};
    case BcBet::Convergent: return {bc_convergent_bet(counters_), 0.0};
    case BcBet::Fictional: return {bc_fictional_bet(counters_), 0.0};
  }
  return {};
}

void BcSkeptic::observe(const RoundRecord& r) {
  counters_ = heads_count_update(counters_, r.outcome.x == 1.0);
}

SkepticBet BangBangSkeptic::bet(const RoundView& view, const ForecastMove& f) {
  const double sign = (view.n % 2 == 1) ? 1.0 : -1.0;
  double stake = fraction_ * std::max(view.capital, 0.0);
  if (!view.protocol.priced()) {
    stake /= std::max(static_cast<double>(view.n), std::sqrt(f.v));
  }
  return {sign * stake, 0.0};
}

SkepticBet VarianceBcSkeptic::bet(const RoundView& view, const ForecastMove& f) {
  const double n = static_cast<double>(view.n);
  counters_ = ceiling_index_update(counters_, f.v / (n * n));
  return {0.0, std::ldexp(1.0, static_cast<int>(-counters_.c - 1)) / (n * n)};
}

SkepticBet MeanBcSkeptic::bet(const RoundView& view, const ForecastMove&) {
  return {bc_divergent_bet(counters_) / static_cast<double>(view.n), 0.0};
}

void MeanBcSkeptic::observe(const RoundRecord& r) {
  counters_ = heads_count_update(counters_, r.outcome.x != r.forecast.m);
}

}  // namespace gtp
