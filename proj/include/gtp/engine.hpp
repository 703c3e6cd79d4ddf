#pragma once

// Game protocols, move validation, capital bookkeeping and the round loop.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gtp/hedge.hpp"

namespace gtp {

enum class ProtocolKind { CoinTossing, BoundedForecasting, UnboundedForecasting, GeneralHedge };

std::string_view to_string(ProtocolKind kind);
/// Accepts "coin", "bounded", "unbounded", "general_hedge".
ProtocolKind parse_protocol_kind(std::string_view name);

enum class Role { Forecaster, Skeptic, Reality };
std::string_view to_string(Role role);

struct Protocol {
  ProtocolKind kind = ProtocolKind::CoinTossing;
  std::optional<Hedge> hedge;  // GeneralHedge only
  double initial_capital = 1.0;

  static Protocol coin(double k0 = 1.0);
  static Protocol bounded(double k0 = 1.0);
  static Protocol unbounded(double k0 = 1.0);
  static Protocol general_hedge(Hedge h, double k0 = 1.0);

  /// True for the kinds where Forecaster announces a price p.
  bool priced() const {
    return kind == ProtocolKind::CoinTossing || kind == ProtocolKind::BoundedForecasting;
  }
  /// Throws std::invalid_argument if the protocol invariants are broken.
  void check() const;
};

/// Forecaster's announcement. Coin and bounded kinds read `p`;
/// unbounded kinds read `m` and `v`.
struct ForecastMove {
  double p = 0.0;
  double m = 0.0;
  double v = 0.0;

  static ForecastMove price(double p) { return ForecastMove{p, 0.0, 0.0}; }
  static ForecastMove mean_variance(double m, double v) { return ForecastMove{0.0, m, v}; }
};

struct SkepticBet {
  double M = 0.0;
  double V = 0.0;  // unbounded kinds only; must stay 0 otherwise
};

struct Outcome {
  double x = 0.0;
};

struct RoundRecord {
  std::int64_t n = 0;
  ForecastMove forecast;
  SkepticBet bet;
  Outcome outcome;
  double capital_after = 0.0;
};

struct Trace {
  Protocol protocol;
  std::vector<RoundRecord> rounds;
  std::optional<std::uint64_t> seed;
  std::string rng = "none";
  /// Round at which Skeptic's capital first went negative, if any.
  std::optional<std::int64_t> skeptic_fault_round;

  double capital_before(std::size_t index) const {
    return index == 0 ? protocol.initial_capital : rounds[index - 1].capital_after;
  }
};

/// What a policy may see when asked for its move in round `n`.
struct RoundView {
  const Protocol& protocol;
  std::int64_t n;
  double capital;  // K_{n-1}
  std::span<const RoundRecord> history;
};

class ForecasterPolicy {
 public:
  virtual ~ForecasterPolicy() = default;
  virtual ForecastMove forecast(const RoundView& view) = 0;
  virtual void observe(const RoundRecord&) {}
  virtual std::unique_ptr<ForecasterPolicy> clone() const = 0;
};

class SkepticPolicy {
 public:
  virtual ~SkepticPolicy() = default;
  virtual SkepticBet bet(const RoundView& view, const ForecastMove& f) = 0;
  virtual void observe(const RoundRecord&) {}
  virtual std::unique_ptr<SkepticPolicy> clone() const = 0;
};

class RealityPolicy {
 public:
  virtual ~RealityPolicy() = default;
  virtual Outcome respond(const RoundView& view, const ForecastMove& f, const SkepticBet& s) = 0;
  virtual void observe(const RoundRecord&) {}
  virtual std::unique_ptr<RealityPolicy> clone() const = 0;
};

struct Violation {
  Role role;
  std::string field;
  std::string bound;
};

class InvalidMove : public std::invalid_argument {
 public:
  InvalidMove(const Violation& v, std::int64_t round);
  const Violation& violation() const { return violation_; }
  std::int64_t round() const { return round_; }

 private:
  Violation violation_;
  std::int64_t round_;
};

/// First domain violation of the round's moves, or nullopt.
std::optional<Violation> validate_moves(const Protocol& protocol, const ForecastMove& f,
                                        const SkepticBet& s, const Outcome& x);

/// K_n from K_{n-1}. Zero bet components contribute exactly nothing.
double capital_update(const Protocol& protocol, double k_prev, const ForecastMove& f,
                      const SkepticBet& s, const Outcome& x);

struct RunOptions {
  /// Stop at the first round whose capital is negative and record it as a
  /// Skeptic fault.
  bool halt_on_skeptic_fault = false;
  std::optional<std::uint64_t> seed;
  std::string rng = "none";
};

Trace run_game(const Protocol& protocol, ForecasterPolicy& forecaster, SkepticPolicy& skeptic,
               RealityPolicy& reality, std::int64_t horizon, const RunOptions& options = {});

struct ReplayStatus {
  bool ok = true;
  std::int64_t mismatch_round = 0;
  explicit operator bool() const { return ok; }
};

/// Recomputes every capital from K_0 (absolute tolerance 1e-12).
ReplayStatus replay_verify(const Trace& trace);

/// Capital process of `skeptic` replayed along the Forecaster/Reality path
/// recorded in `path`; element i is K_{i+1}.
std::vector<double> skeptic_capital_on_path(const Trace& path, SkepticPolicy& skeptic);

/// Weighted sum of Skeptic policies. Weights must be >= 0 and sum to 1
/// within 1e-12.
std::unique_ptr<SkepticPolicy> combine_skeptic(std::vector<double> weights,
                                               std::vector<std::unique_ptr<SkepticPolicy>> policies);

// Simple policies shared by every protocol.

class ZeroSkeptic final : public SkepticPolicy {
 public:
  SkepticBet bet(const RoundView&, const ForecastMove&) override { return {}; }
  std::unique_ptr<SkepticPolicy> clone() const override { return std::make_unique<ZeroSkeptic>(); }
};

/// Forecaster announcing `script(n)` in round n.
class ScriptedForecaster final : public ForecasterPolicy {
 public:
  using Script = std::function<ForecastMove(std::int64_t)>;
  explicit ScriptedForecaster(Script script) : script_(std::move(script)) {}
  ForecastMove forecast(const RoundView& view) override { return script_(view.n); }
  std::unique_ptr<ForecasterPolicy> clone() const override {
    return std::make_unique<ScriptedForecaster>(script_);
  }

 private:
  Script script_;
};

/// Reality answering a fixed function of (n, f, s); mostly for tests.
class FunctionReality final : public RealityPolicy {
 public:
  using Rule = std::function<double(const RoundView&, const ForecastMove&, const SkepticBet&)>;
  explicit FunctionReality(Rule rule) : rule_(std::move(rule)) {}
  Outcome respond(const RoundView& view, const ForecastMove& f, const SkepticBet& s) override {
    return Outcome{rule_(view, f, s)};
  }
  std::unique_ptr<RealityPolicy> clone() const override {
    return std::make_unique<FunctionReality>(rule_);
  }

 private:
  Rule rule_;
};

/// Skeptic betting a fixed function of (view, f); mostly for tests.
class FunctionSkeptic final : public SkepticPolicy {
 public:
  using Rule = std::function<SkepticBet(const RoundView&, const ForecastMove&)>;
  explicit FunctionSkeptic(Rule rule) : rule_(std::move(rule)) {}
  SkepticBet bet(const RoundView& view, const ForecastMove& f) override { return rule_(view, f); }
  std::unique_ptr<SkepticPolicy> clone() const override {
    return std::make_unique<FunctionSkeptic>(rule_);
  }

 private:
  Rule rule_;
};

}  // namespace gtp
