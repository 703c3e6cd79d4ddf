#pragma once

// Deterministic Reality strategies that strongly comply with
//   coin:      sum p_n < inf  <=>  sum x_n < inf
//   unbounded: sum v_n/n^2 < inf  <=>  S_n/n -> 0
//   general:   sum v_n/g(A_n) < inf  <=>  S_n / h^{-1}(g(A_n)) converges
// while keeping Skeptic's capital at or below K_0, plus the example
// strategies used by the scenario suites.

#include <cstdint>
#include <memory>

#include "gtp/analysis.hpp"
#include "gtp/engine.hpp"
#include "gtp/hedge.hpp"
#include "gtp/skeptic.hpp"

namespace gtp {

enum class PhaseTag { Waiting, Degenerate, Mixing };

/// Reality waits for the first round n0 in which Skeptic bets; that round is
/// answered so that capital strictly drops. If it drops to zero the game is
/// Degenerate; otherwise Reality mixes Skeptic with the fictional forcing
/// strategy at weight epsilon = 1 - K_{n0}/K_0.
struct ComplyPhase {
  PhaseTag tag = PhaseTag::Waiting;
  double epsilon = 0.0;
  double k_n0 = 0.0;
  std::int64_t n0 = 0;

  /// epsilon K_{n0} / (1 - epsilon), the budget Skeptic may still win back.
  double scale() const { return epsilon * k_n0 / (1.0 - epsilon); }
};

/// Phase after the n0 round leaves capital at `k_n0`.
ComplyPhase enter_phase(std::int64_t n0, double k_n0, double k0);

struct BcComplyState {
  ComplyPhase phase;
  BcCounters counters;
};

/// `counters.partial_sum` accumulates v_k/k^2; `b` counts centered x != 0.
struct UfgComplyState {
  ComplyPhase phase;
  BcCounters counters;
};

/// `counters.partial_sum` accumulates eps_k v_k / g(A_k).
struct UfghComplyState {
  ComplyPhase phase;
  BcCounters counters;
  double eps_running_sum = 0.0;  // sum a_k for the epsilon sequence
  double a_total = 0.0;          // A_n = sum v_k
  double last_epsilon = 0.0;
  double last_e = 0.0;
};

template <class State>
struct ComplyStep {
  Outcome outcome;
  State state;
};

/// One round of the coin-game compliance strategy. `k_prev` is K_{n-1}.
ComplyStep<BcComplyState> bc_comply_step(const BcComplyState& state, std::int64_t n, double p,
                                         double M, double k_prev, double k0);

/// Centered move in the unbounded game once mixing.
double ufg_mixing_move(std::int64_t n, double v, double M, double V, double d);

ComplyStep<UfgComplyState> ufg_comply_step(const UfgComplyState& state, std::int64_t n,
                                           const ForecastMove& f, const SkepticBet& s,
                                           double k_prev, double k0);

/// Centered move in the general-hedge game once mixing. `e` is
/// h^{-1}(g(A_n)/eps_n); the h^{-1}(v) branch is taken iff eps_n v >= g(A_n).
double ufgh_mixing_move(const Hedge& hedge, double e, double eps, double v, double g_a,
                        double M, double V, double d);

ComplyStep<UfghComplyState> ufgh_comply_step(const UfghComplyState& state, std::int64_t n,
                                             const ForecastMove& f, const SkepticBet& s,
                                             const Hedge& hedge, const Growth& growth,
                                             double k_prev, double k0);

/// x = 1 iff M^O = (M^S + M^F)/2 <= 0.
double derandomized_coin_move(double skeptic_M, double fictional_M);

class BcComplyReality final : public RealityPolicy {
 public:
  Outcome respond(const RoundView& view, const ForecastMove& f, const SkepticBet& s) override;
  std::unique_ptr<RealityPolicy> clone() const override {
    return std::make_unique<BcComplyReality>(*this);
  }
  const BcComplyState& state() const { return state_; }

 private:
  BcComplyState state_;
};

class UfgComplyReality final : public RealityPolicy {
 public:
  Outcome respond(const RoundView& view, const ForecastMove& f, const SkepticBet& s) override;
  std::unique_ptr<RealityPolicy> clone() const override {
    return std::make_unique<UfgComplyReality>(*this);
  }
  const UfgComplyState& state() const { return state_; }

 private:
  UfgComplyState state_;
};

/// Uses the protocol's hedge; the growth function is a strategy parameter.
class UfghComplyReality final : public RealityPolicy {
 public:
  explicit UfghComplyReality(Growth growth) : growth_(std::move(growth)) {}
  Outcome respond(const RoundView& view, const ForecastMove& f, const SkepticBet& s) override;
  std::unique_ptr<RealityPolicy> clone() const override {
    return std::make_unique<UfghComplyReality>(*this);
  }
  const UfghComplyState& state() const { return state_; }

 private:
  Growth growth_;
  UfghComplyState state_;
};

/// Reality policy built from a fictional forcing Skeptic: each round it mixes
/// the real bet with the fictional one at weight 1/2 and plays so that the
/// mixture's capital never increases.
std::unique_ptr<RealityPolicy> derandomize_coin(std::unique_ptr<SkepticPolicy> fictional);

/// Coin game: x_1 = 1 iff p_1 > 0, then x_n = 1 iff M_n < 0.
std::unique_ptr<RealityPolicy> first_round_comply();

/// Bounded game: never lets x_n = p_n while keeping sup K <= q.
/// Requires k0 < q < 1.
std::unique_ptr<RealityPolicy> bounded_avoid_match(double q, double k0);

/// Always answers `x` (used as a deliberately broken Reality).
std::unique_ptr<RealityPolicy> constant_reality(double x);

}  // namespace gtp
