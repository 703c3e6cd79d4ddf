#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gtp/engine.hpp"

namespace gtp {

struct EpsilonStep {
  double epsilon;
  double running_sum;
};

/// Damping weight for a series sum a_k: eps_n = 1 / (1 + sum_{k<=n} a_k).
///
/// (i) eps_n depends on a_1..a_n only; (ii) eps_n a_n <= 1; (iii) a divergent
/// series stays divergent after weighting while eps_n -> 0; (iv) a convergent
/// series gives eps_n -> 1/(1 + sum a) > 0.
EpsilonStep epsilon_sequence_step(double running_sum, double a);

/// Leaf predicate over coin paths; bit k-1 of `path` is x_k.
using CoinEvent = std::function<bool(std::uint32_t path)>;

constexpr std::size_t kMaxPricingHorizon = 25;

class HorizonTooLarge : public std::invalid_argument {
 public:
  explicit HorizonTooLarge(std::size_t n)
      : std::invalid_argument("pricing horizon " + std::to_string(n) + " exceeds " +
                              std::to_string(kMaxPricingHorizon)) {}
};

/// Indicator of `event` over all 2^N leaves, indexed by path bits.
std::vector<double> event_leaves(std::size_t horizon, const CoinEvent& event);

/// Minimal initial capital superreplicating 1_E in the N-round coin game.
/// The one-linear-instrument binary market is complete, so backward
/// induction with value p f(1) + (1-p) f(0) is exact.
double upper_probability_coin(std::span<const double> p_script, const CoinEvent& event);
/// 1 - upper probability of the complement.
double lower_probability_coin(std::span<const double> p_script, const CoinEvent& event);

struct Verdict {
  bool skeptic_duty_ok = true;
  bool strong_bound_ok = true;
  double sup_capital = 0.0;
  std::optional<bool> event_proxy_ok;
  std::vector<std::string> notes;
};

using EventProxy = std::function<bool(const Trace&)>;

/// Duty (K_n >= -slack), strong bound (K_n <= K_0 + slack) with
/// slack = 1e-9 K_0, supremum of recorded capitals (K_0 included), and the
/// optional proxy.
Verdict strong_compliance_verdict(const Trace& trace, const EventProxy& event_proxy = {});

/// True iff |y_n/g_n| <= |d| + 1 for every n >= tail_start (1-based).
bool term_bound_check(std::span<const double> y, std::span<const double> g, double d,
                      std::size_t tail_start);

}  // namespace gtp
