#include "gtp/engine.hpp"

#include <cmath>
#include <numeric>
#include <utility>

namespace gtp {

std::string_view to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::CoinTossing: return "coin";
    case ProtocolKind::BoundedForecasting: return "bounded";
    case ProtocolKind::UnboundedForecasting: return "unbounded";
    case ProtocolKind::GeneralHedge: return "general_hedge";
  }
  return "?";
}

ProtocolKind parse_protocol_kind(std::string_view name) {
  if (name == "coin") return ProtocolKind::CoinTossing;
  if (name == "bounded") return ProtocolKind::BoundedForecasting;
  if (name == "unbounded") return ProtocolKind::UnboundedForecasting;
  if (name == "general_hedge") return ProtocolKind::GeneralHedge;
  throw std::invalid_argument("unknown protocol kind '" + std::string(name) + "'");
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Forecaster: return "Forecaster";
    case Role::Skeptic: return "Skeptic";
    case Role::Reality: return "Reality";
  }
  return "?";
}

Protocol Protocol::coin(double k0) {
  Protocol p{ProtocolKind::CoinTossing, std::nullopt, k0};
  p.check();
  return p;
}

Protocol Protocol::bounded(double k0) {
  Protocol p{ProtocolKind::BoundedForecasting, std::nullopt, k0};
  p.check();
  return p;
}

Protocol Protocol::unbounded(double k0) {
  Protocol p{ProtocolKind::UnboundedForecasting, std::nullopt, k0};
  p.check();
  return p;
}

Protocol Protocol::general_hedge(Hedge h, double k0) {
  Protocol p{ProtocolKind::GeneralHedge, std::move(h), k0};
  p.check();
  return p;
}

void Protocol::check() const {
  if (!(initial_capital > 0.0) || !std::isfinite(initial_capital)) {
    throw std::invalid_argument("initial capital must be finite and > 0");
  }
  if (kind == ProtocolKind::GeneralHedge) {
    if (!hedge || !hedge->forward) throw std::invalid_argument("general_hedge protocol needs a hedge");
  } else if (hedge) {
    throw std::invalid_argument("only the general_hedge protocol carries a hedge");
  }
}

InvalidMove::InvalidMove(const Violation& v, std::int64_t round)
    : std::invalid_argument("round " + std::to_string(round) + ": " +
                            std::string(to_string(v.role)) + " move violates " + v.field + " " +
                            v.bound),
      violation_(v),
      round_(round) {}

std::optional<Violation> validate_moves(const Protocol& protocol, const ForecastMove& f,
                                        const SkepticBet& s, const Outcome& x) {
  auto bad = [](Role r, std::string field, std::string bound) {
    return Violation{r, std::move(field), std::move(bound)};
  };

  if (protocol.priced()) {
    if (!(f.p >= 0.0 && f.p <= 1.0)) return bad(Role::Forecaster, "p", "in [0,1]");
  } else {
    if (!std::isfinite(f.m)) return bad(Role::Forecaster, "m", "finite");
    if (!(f.v >= 0.0) || !std::isfinite(f.v)) return bad(Role::Forecaster, "v", ">= 0");
  }

  if (!std::isfinite(s.M)) return bad(Role::Skeptic, "M", "finite");
  if (protocol.priced()) {
    if (s.V != 0.0) return bad(Role::Skeptic, "V", "== 0 (no variance bet in this protocol)");
  } else if (!(s.V >= 0.0) || !std::isfinite(s.V)) {
    return bad(Role::Skeptic, "V", ">= 0");
  }

  switch (protocol.kind) {
    case ProtocolKind::CoinTossing:
      if (x.x != 0.0 && x.x != 1.0) return bad(Role::Reality, "x", "in {0,1}");
      break;
    case ProtocolKind::BoundedForecasting:
      if (!(x.x >= 0.0 && x.x <= 1.0)) return bad(Role::Reality, "x", "in [0,1]");
      break;
    case ProtocolKind::UnboundedForecasting:
    case ProtocolKind::GeneralHedge:
      if (!std::isfinite(x.x)) return bad(Role::Reality, "x", "finite");
      break;
  }
  return std::nullopt;
}

double capital_update(const Protocol& protocol, double k_prev, const ForecastMove& f,
                      const SkepticBet& s, const Outcome& x) {
  if (auto v = validate_moves(protocol, f, s, x)) throw InvalidMove(*v, 0);

  double k = k_prev;
  if (protocol.priced()) {
    if (s.M != 0.0) k += s.M * (x.x - f.p);
    return k;
  }
  const double centered = x.x - f.m;
  if (s.M != 0.0) k += s.M * centered;
  if (s.V != 0.0) {
    const double payoff = protocol.kind == ProtocolKind::GeneralHedge ? (*protocol.hedge)(centered)
                                                                      : centered * centered;
    k += s.V * (payoff - f.v);
  }
  return k;
}

Trace run_game(const Protocol& protocol, ForecasterPolicy& forecaster, SkepticPolicy& skeptic,
               RealityPolicy& reality, std::int64_t horizon, const RunOptions& options) {
  if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
  protocol.check();

  Trace trace;
  trace.protocol = protocol;
  trace.seed = options.seed;
  trace.rng = options.rng;
  trace.rounds.reserve(static_cast<std::size_t>(horizon));

  double capital = protocol.initial_capital;
  for (std::int64_t n = 1; n <= horizon; ++n) {
    const RoundView view{protocol, n, capital, trace.rounds};
    const ForecastMove f = forecaster.forecast(view);
    const SkepticBet s = skeptic.bet(view, f);
    const Outcome x = reality.respond(view, f, s);
    if (auto v = validate_moves(protocol, f, s, x)) throw InvalidMove(*v, n);

    capital = capital_update(protocol, capital, f, s, x);
    trace.rounds.push_back(RoundRecord{n, f, s, x, capital});
    const RoundRecord& rec = trace.rounds.back();
    forecaster.observe(rec);
    skeptic.observe(rec);
    reality.observe(rec);

    if (capital < 0.0 && !trace.skeptic_fault_round) {
      trace.skeptic_fault_round = n;
      if (options.halt_on_skeptic_fault) break;
    }
  }
  return trace;
}

ReplayStatus replay_verify(const Trace& trace) {
  double capital = trace.protocol.initial_capital;
  for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
    const RoundRecord& r = trace.rounds[i];
    if (r.n != static_cast<std::int64_t>(i) + 1) return {false, static_cast<std::int64_t>(i) + 1};
    if (validate_moves(trace.protocol, r.forecast, r.bet, r.outcome)) return {false, r.n};
    capital = capital_update(trace.protocol, capital, r.forecast, r.bet, r.outcome);
    if (!(std::fabs(capital - r.capital_after) <= 1e-12)) return {false, r.n};
    // Continue from the recorded value so one fault is reported once.
    capital = r.capital_after;
  }
  return {};
}

std::vector<double> skeptic_capital_on_path(const Trace& path, SkepticPolicy& skeptic) {
  std::vector<double> out;
  out.reserve(path.rounds.size());
  std::vector<RoundRecord> seen;
  seen.reserve(path.rounds.size());
  double capital = path.protocol.initial_capital;
  for (const RoundRecord& r : path.rounds) {
    const RoundView view{path.protocol, r.n, capital, seen};
    const SkepticBet s = skeptic.bet(view, r.forecast);
    capital = capital_update(path.protocol, capital, r.forecast, s, r.outcome);
    seen.push_back(RoundRecord{r.n, r.forecast, s, r.outcome, capital});
    skeptic.observe(seen.back());
    out.push_back(capital);
  }
  return out;
}

namespace {

class CombinedSkeptic final : public SkepticPolicy {
 public:
  CombinedSkeptic(std::vector<double> weights, std::vector<std::unique_ptr<SkepticPolicy>> parts)
      : weights_(std::move(weights)), parts_(std::move(parts)), own_(parts_.size()) {}

  // Each component plays against its own capital and history, so the
  // mixture's capital is the weighted sum of the component capitals.
  SkepticBet bet(const RoundView& view, const ForecastMove& f) override {
    if (!protocol_) {
      protocol_ = view.protocol;
      for (Own& o : own_) o.capital = view.protocol.initial_capital;
    }
    SkepticBet out;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      Own& o = own_[i];
      const RoundView mine{view.protocol, view.n, o.capital, o.history};
      o.last = parts_[i]->bet(mine, f);
      out.M += weights_[i] * o.last.M;
      out.V += weights_[i] * o.last.V;
    }
    return out;
  }

  void observe(const RoundRecord& r) override {
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      Own& o = own_[i];
      o.capital = capital_update(*protocol_, o.capital, r.forecast, o.last, r.outcome);
      o.history.push_back(RoundRecord{r.n, r.forecast, o.last, r.outcome, o.capital});
      parts_[i]->observe(o.history.back());
    }
  }

  std::unique_ptr<SkepticPolicy> clone() const override {
    std::vector<std::unique_ptr<SkepticPolicy>> parts;
    parts.reserve(parts_.size());
    for (const auto& p : parts_) parts.push_back(p->clone());
    auto c = std::make_unique<CombinedSkeptic>(weights_, std::move(parts));
    c->own_ = own_;
    c->protocol_ = protocol_;
    return c;
  }

 private:
  struct Own {
    double capital = 0.0;
    std::vector<RoundRecord> history;
    SkepticBet last;
  };
  std::vector<double> weights_;
  std::vector<std::unique_ptr<SkepticPolicy>> parts_;
  std::vector<Own> own_;
  std::optional<Protocol> protocol_;
};

}  // namespace

std::unique_ptr<SkepticPolicy> combine_skeptic(std::vector<double> weights,
                                               std::vector<std::unique_ptr<SkepticPolicy>> policies) {
  if (weights.empty() || weights.size() != policies.size()) {
    throw std::invalid_argument("combine_skeptic needs equal, nonempty weight and policy lists");
  }
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("combine_skeptic weights must be >= 0");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::fabs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("combine_skeptic weights must sum to 1");
  }
  for (const auto& p : policies) {
    if (!p) throw std::invalid_argument("combine_skeptic got a null policy");
  }
  return std::make_unique<CombinedSkeptic>(std::move(weights), std::move(policies));
}

}  // namespace gtp
