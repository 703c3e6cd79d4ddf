#include "gtp/reality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gtp {
namespace {

double pow2(std::int64_t e) { return std::ldexp(1.0, static_cast<int>(e)); }

/// 2^{-b-2} - 2^{-c-2}: positive while heads lag the ceiling index.
double threshold_core(const BcCounters& k) { return pow2(-k.b - 2) - pow2(-k.c - 2); }

}  // namespace

ComplyPhase enter_phase(std::int64_t n0, double k_n0, double k0) {
  ComplyPhase ph;
  ph.n0 = n0;
  ph.k_n0 = k_n0;
  if (k_n0 <= 0.0) {
    ph.tag = PhaseTag::Degenerate;
    return ph;
  }
  ph.epsilon = 1.0 - k_n0 / k0;
  if (!(ph.epsilon > 0.0 && ph.epsilon < 1.0)) {
    throw std::logic_error("n0 round must leave 0 < K_n0 < K_0");
  }
  ph.tag = PhaseTag::Mixing;
  return ph;
}

ComplyStep<BcComplyState> bc_comply_step(const BcComplyState& state, std::int64_t n, double p,
                                         double M, double k_prev, double k0) {
  BcComplyState next = state;
  const std::int64_t prev_c = next.counters.c;
  next.counters = ceiling_index_update(next.counters, p);
  const bool crossed = next.counters.c != prev_c;

  double x = 0.0;
  switch (next.phase.tag) {
    case PhaseTag::Waiting:
      if (M == 0.0) {
        x = crossed ? 1.0 : 0.0;
      } else {
        // The losing side for Skeptic. At p = 1 (M < 0) or p = 0 (M > 0) it
        // is capital-neutral, so the round does not count as n0.
        x = M < 0.0 ? 1.0 : 0.0;
        const double dk = M * (x - p);
        if (dk < 0.0) next.phase = enter_phase(n, k_prev + dk, k0);
      }
      break;
    case PhaseTag::Degenerate:
      x = crossed ? 1.0 : 0.0;
      break;
    case PhaseTag::Mixing: {
      const double d = next.phase.scale() * threshold_core(next.counters);
      x = M <= d ? 1.0 : 0.0;
      break;
    }
  }
  next.counters = heads_count_update(next.counters, x == 1.0);
  return {Outcome{x}, next};
}

double ufg_mixing_move(std::int64_t n, double v, double M, double V, double d) {
  const double nn = static_cast<double>(n);
  if (v < nn * nn) {
    if (V > d) return 0.0;
    return M < 0.0 ? nn : -nn;
  }
  const double r = std::sqrt(v);
  return M < 0.0 ? r : -r;
}

ComplyStep<UfgComplyState> ufg_comply_step(const UfgComplyState& state, std::int64_t n,
                                           const ForecastMove& f, const SkepticBet& s,
                                           double k_prev, double k0) {
  UfgComplyState next = state;
  // A round with v = 0 carries no information and no capital change.
  if (f.v == 0.0) return {Outcome{f.m}, next};

  const double nn = static_cast<double>(n) * static_cast<double>(n);
  const std::int64_t prev_c = next.counters.c;
  next.counters = ceiling_index_update(next.counters, f.v / nn);
  const bool crossed = next.counters.c != prev_c;

  double xc = 0.0;
  switch (next.phase.tag) {
    case PhaseTag::Waiting:
      if (s.M == 0.0 && s.V == 0.0) {
        xc = crossed ? static_cast<double>(n) : 0.0;
      } else {
        xc = s.V > 0.0 ? 0.0 : (s.M < 0.0 ? 1.0 : -1.0);
        const double dk = s.M * xc + s.V * (xc * xc - f.v);
        next.phase = enter_phase(n, k_prev + dk, k0);
      }
      break;
    case PhaseTag::Degenerate:
      xc = crossed ? static_cast<double>(n) : 0.0;
      break;
    case PhaseTag::Mixing: {
      const double d = next.phase.scale() * threshold_core(next.counters) / nn;
      xc = ufg_mixing_move(n, f.v, s.M, s.V, d);
      break;
    }
  }
  next.counters = heads_count_update(next.counters, xc != 0.0);
  return {Outcome{f.m + xc}, next};
}

double ufgh_mixing_move(const Hedge& hedge, double e, double eps, double v, double g_a,
                        double M, double V, double d) {
  if (eps * v < g_a) {
    if (V > d) return 0.0;
    return M < 0.0 ? e : -e;
  }
  const double r = hedge_inverse(hedge, v);
  return M < 0.0 ? r : -r;
}

ComplyStep<UfghComplyState> ufgh_comply_step(const UfghComplyState& state, std::int64_t n,
                                             const ForecastMove& f, const SkepticBet& s,
                                             const Hedge& hedge, const Growth& growth,
                                             double k_prev, double k0) {
  UfghComplyState next = state;
  next.a_total += f.v;
  if (f.v == 0.0) return {Outcome{f.m}, next};

  const double g_a = growth(next.a_total);
  if (!(g_a > 0.0)) throw std::invalid_argument("growth must be positive at A_n");
  const double a = f.v / g_a;
  const EpsilonStep eps = epsilon_sequence_step(next.eps_running_sum, a);
  next.eps_running_sum = eps.running_sum;
  next.last_epsilon = eps.epsilon;

  const std::int64_t prev_c = next.counters.c;
  next.counters = ceiling_index_update(next.counters, eps.epsilon * a);
  const bool crossed = next.counters.c != prev_c;

  const double scale_n = g_a / eps.epsilon;  // g(A_n) / eps_n
  const double e = hedge_inverse(hedge, scale_n);
  next.last_e = e;

  double xc = 0.0;
  switch (next.phase.tag) {
    case PhaseTag::Waiting:
      if (s.M == 0.0 && s.V == 0.0) {
        xc = crossed ? e : 0.0;
      } else {
        xc = s.V > 0.0 ? 0.0 : (s.M < 0.0 ? 1.0 : -1.0);
        const double dk = s.M * xc + s.V * (hedge(xc) - f.v);
        next.phase = enter_phase(n, k_prev + dk, k0);
      }
      break;
    case PhaseTag::Degenerate:
      xc = crossed ? e : 0.0;
      break;
    case PhaseTag::Mixing: {
      const double d = next.phase.scale() * threshold_core(next.counters) / scale_n;
      xc = ufgh_mixing_move(hedge, e, eps.epsilon, f.v, g_a, s.M, s.V, d);
      break;
    }
  }
  next.counters = heads_count_update(next.counters, xc != 0.0);
  return {Outcome{f.m + xc}, next};
}

double derandomized_coin_move(double skeptic_M, double fictional_M) {
  return (skeptic_M + fictional_M) / 2.0 <= 0.0 ? 1.0 : 0.0;
}

Outcome BcComplyReality::respond(const RoundView& view, const ForecastMove& f,
                                 const SkepticBet& s) {
  auto step = bc_comply_step(state_, view.n, f.p, s.M, view.capital,
                             view.protocol.initial_capital);
  state_ = step.state;
  return step.outcome;
}

Outcome UfgComplyReality::respond(const RoundView& view, const ForecastMove& f,
                                  const SkepticBet& s) {
  auto step = ufg_comply_step(state_, view.n, f, s, view.capital, view.protocol.initial_capital);
  state_ = step.state;
  return step.outcome;
}

Outcome UfghComplyReality::respond(const RoundView& view, const ForecastMove& f,
                                   const SkepticBet& s) {
  if (!view.protocol.hedge) throw std::invalid_argument("ufgh compliance needs a hedge protocol");
  auto step = ufgh_comply_step(state_, view.n, f, s, *view.protocol.hedge, growth_, view.capital,
                               view.protocol.initial_capital);
  state_ = step.state;
  return step.outcome;
}

namespace {

class DerandomizedCoinReality final : public RealityPolicy {
 public:
  explicit DerandomizedCoinReality(std::unique_ptr<SkepticPolicy> fictional)
      : fictional_(std::move(fictional)) {}

  Outcome respond(const RoundView& view, const ForecastMove& f, const SkepticBet& s) override {
    last_fictional_ = fictional_->bet(view, f);
    return {derandomized_coin_move(s.M, last_fictional_.M)};
  }

  void observe(const RoundRecord& r) override {
    RoundRecord own = r;
    own.bet = last_fictional_;
    fictional_->observe(own);
  }

  std::unique_ptr<RealityPolicy> clone() const override {
    auto c = std::make_unique<DerandomizedCoinReality>(fictional_->clone());
    c->last_fictional_ = last_fictional_;
    return c;
  }

 private:
  std::unique_ptr<SkepticPolicy> fictional_;
  SkepticBet last_fictional_;
};

class FirstRoundComply final : public RealityPolicy {
 public:
  Outcome respond(const RoundView& view, const ForecastMove& f, const SkepticBet& s) override {
    if (view.n == 1) return {f.p > 0.0 ? 1.0 : 0.0};
    return {s.M < 0.0 ? 1.0 : 0.0};
  }
  std::unique_ptr<RealityPolicy> clone() const override {
    return std::make_unique<FirstRoundComply>();
  }
};

class BoundedAvoidMatch final : public RealityPolicy {
 public:
  explicit BoundedAvoidMatch(double q) : q_(q) {}

  Outcome respond(const RoundView& view, const ForecastMove& f, const SkepticBet& s) override {
    if (f.p == 0.0 || f.p == 1.0) {
      // Step strictly inside (0,1) far enough that |M| * gap <= (q - K)/2.
      const double gap = std::min(0.5, (q_ - view.capital) / (2.0 * std::fabs(s.M) + 1.0));
      // Floors keep x != p in double precision once q - K is a few ulps; near 1
      // the smallest step is 2^-53, which can cost Skeptic |M| 2^-53 per round.
      if (f.p == 0.0) return {std::max(gap, std::numeric_limits<double>::denorm_min())};
      return {1.0 - std::max(gap, std::numeric_limits<double>::epsilon() / 2.0)};
    }
    return {s.M <= 0.0 ? 1.0 : 0.0};
  }
  std::unique_ptr<RealityPolicy> clone() const override {
    return std::make_unique<BoundedAvoidMatch>(q_);
  }

 private:
  double q_;
};

}  // namespace

std::unique_ptr<RealityPolicy> derandomize_coin(std::unique_ptr<SkepticPolicy> fictional) {
  if (!fictional) throw std::invalid_argument("derandomize_coin needs a fictional strategy");
  return std::make_unique<DerandomizedCoinReality>(std::move(fictional));
}

std::unique_ptr<RealityPolicy> first_round_comply() { return std::make_unique<FirstRoundComply>(); }

std::unique_ptr<RealityPolicy> bounded_avoid_match(double q, double k0) {
  if (!(q > k0 && q < 1.0)) throw std::invalid_argument("bounded_avoid_match needs K_0 < q < 1");
  return std::make_unique<BoundedAvoidMatch>(q);
}

std::unique_ptr<RealityPolicy> constant_reality(double x) {
  return std::make_unique<FunctionReality>(
      [x](const RoundView&, const ForecastMove&, const SkepticBet&) { return x; });
}

}  // namespace gtp
