#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gtp/analysis.hpp"
#include "gtp/engine.hpp"
#include "gtp/random.hpp"

namespace gtp {

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& field, int line, const std::string& what);
  const std::string& field() const { return field_; }
  int line() const { return line_; }
  /// The message without the line/field prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::string field_;
  int line_;
  std::string detail_;
};

/// Deterministic per-round script. Generators and their parameters:
///   constant{value}  harmonic{a}: a/n  inverse_square{a}: a/n^2
///   geometric{a, r}: a r^n  power{a, k}: a n^k  sine{amplitude, frequency}
///   list{values}: explicit values, one per round
struct GeneratorSpec {
  std::string generator;
  std::map<std::string, double> params;
  std::vector<double> values;

  double at(std::int64_t n) const;
  double param(const std::string& key) const { return params.at(key); }
};

struct StrategySpec {
  std::string name;
  std::map<std::string, std::string> params;

  double number(const std::string& key, double fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
};

enum class ExpectedEvent { None, BorelCantelli, Slln, FirstRoundHead, AvoidMatch };
std::string_view to_string(ExpectedEvent e);

/// Analytic ground truth for a scenario; a finite prefix cannot decide
/// whether a series converges, so the scenario states it.
struct ScenarioLabels {
  bool series_divergent = false;
  ExpectedEvent expected_event = ExpectedEvent::None;
  /// Require K_n <= K_0 (false for strategies that only bound sup K).
  bool strong_compliance = true;
};

struct Scenario {
  std::string name = "scenario";
  Protocol protocol;
  std::int64_t horizon = 1;
  std::optional<GeneratorSpec> price;     // coin, bounded
  std::optional<GeneratorSpec> mean;      // unbounded kinds (default 0)
  std::optional<GeneratorSpec> variance;  // unbounded kinds
  StrategySpec skeptic;
  StrategySpec reality;
  std::optional<std::uint64_t> seed;
  std::optional<ScenarioLabels> labels;
};

/// Parses one YAML scenario document. Unknown keys, unknown strategy names
/// and out-of-range parameters are rejected with the offending field.
Scenario parse_scenario(std::string_view text, const std::string& default_name = "scenario");
Scenario load_scenario(const std::filesystem::path& file);

/// Throws ScenarioError when the horizon is too long for a list generator or
/// a generator leaves its documented range.
void validate_scenario(const Scenario& s);

std::vector<std::string> skeptic_strategy_names();
std::vector<std::string> reality_strategy_names();

std::unique_ptr<ForecasterPolicy> make_forecaster(const Scenario& s);
std::unique_ptr<SkepticPolicy> make_skeptic(const StrategySpec& spec, const Protocol& protocol,
                                            RandomStream rng);
std::unique_ptr<RealityPolicy> make_reality(const StrategySpec& spec, const Protocol& protocol,
                                            RandomStream rng);

/// Finite-horizon proxy for the labelled event, or an empty function when the
/// scenario has no expected event.
EventProxy make_event_proxy(const Scenario& s);

/// Plays the scenario to its horizon, halting at a Skeptic fault.
Trace run_scenario(const Scenario& s);

/// Scenario pools shipped with the tool:
///   theorem34_pool  coin compliance, 4 forecasters x 6 adversaries
///   ufg_pool        unbounded compliance, 2 variance x 2 mean scripts x 6 adversaries
///   ufgh_pool       general-hedge compliance, 3 hedges x 2 growths x 2 variance x 6 adversaries
///   examples_pool   first-round and avoid-match strategies against their pools
///   broken_pool     "always 1" Reality against the fictional forcing bet
std::optional<std::vector<Scenario>> builtin_pool(std::string_view name, std::int64_t horizon = 10000);
std::vector<std::string> builtin_pool_names();

}  // namespace gtp
