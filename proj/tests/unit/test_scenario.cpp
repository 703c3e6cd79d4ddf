#include "doctest.h"
#include "gtp/scenario.hpp"

using namespace gtp;

namespace {

std::string field_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal coin scenario takes defaults") {
  const Scenario s = parse_scenario(R"(
protocol: coin
horizon: 10
forecaster: {price: {generator: constant, value: 0.3}}
skeptic: zero
reality: bc_comply
)");
  CHECK(s.protocol.initial_capital == 1.0);
  CHECK_FALSE(s.seed);
  CHECK_FALSE(s.labels);
  CHECK(s.price->at(4) == 0.3);
}

TEST_CASE("scenario errors name the field") {
  const std::string base = "protocol: coin\nhorizon: 10\nforecaster: {price: {generator: harmonic}}\n";
  CHECK(field_of(base + "skeptic: foo\nreality: bc_comply\n") == "skeptic");
  CHECK(field_of(base + "skeptic: zero\nreality: bc_comply\nextra: 1\n") == "extra");
  CHECK(field_of(base + "skeptic: {strategy: bang_bang, fraction: 2}\nreality: bc_comply\n") == "skeptic.fraction");
  CHECK(field_of(base + "skeptic: zero\nreality: ufg_comply\n") == "reality");
  CHECK(field_of("protocol: coin\nhorizon: 0\nforecaster: {price: {generator: harmonic}}\nskeptic: zero\nreality: bc_comply\n") == "horizon");
  CHECK(field_of("protocol: coin\nhorizon: 5\nforecaster: {price: {generator: constant, value: 2}}\nskeptic: zero\nreality: bc_comply\n") ==
        "forecaster.price");
  CHECK(field_of("protocol: coin\nhorizon: 5\nforecaster: {price: {generator: list, values: [0.5]}}\nskeptic: zero\nreality: bc_comply\n") ==
        "forecaster.price");
  CHECK(field_of("protocol: [coin\n") == "document");
}

TEST_CASE("general-hedge scenario carries a validated hedge and growth") {
  const Scenario s = parse_scenario(R"(
protocol: {kind: general_hedge, hedge: "power:r=1.5"}
horizon: 100
forecaster: {variance: {generator: constant, value: 1}}
skeptic: zero
reality: {strategy: ufgh_comply, growth: identity}
labels: {series_divergent: true, expected_event: slln}
)");
  REQUIRE(s.protocol.hedge);
  CHECK((*s.protocol.hedge)(4.0) == doctest::Approx(8.0));
  CHECK(s.reality.text("growth", "") == "identity");
  CHECK(s.labels->expected_event == ExpectedEvent::Slln);
  CHECK(field_of(R"(
protocol: {kind: general_hedge, hedge: "power:r=4"}
horizon: 100
forecaster: {variance: {generator: constant, value: 1}}
skeptic: zero
reality: ufgh_comply
)") == "protocol.hedge");
}

TEST_CASE("generators") {
  auto gen = [](std::string name, std::map<std::string, double> params) {
    return GeneratorSpec{std::move(name), std::move(params), {}};
  };
  CHECK(gen("harmonic", {{"a", 2.0}}).at(4) == 0.5);
  CHECK(gen("inverse_square", {{"a", 1.0}}).at(4) == 0.0625);
  CHECK(gen("geometric", {{"a", 1.0}, {"r", 0.5}}).at(3) == 0.125);
  CHECK(gen("power", {{"a", 1.0}, {"k", 2.0}}).at(7) == 49.0);
  GeneratorSpec list{"list", {}, {0.1, 0.2}};
  CHECK(list.at(2) == 0.2);
}

TEST_CASE("seeded scenarios replay identically") {
  const std::string text = R"(
protocol: unbounded
horizon: 300
seed: 9
forecaster: {variance: {generator: power, a: 1, k: 2}}
skeptic: random_proportional
reality: kolmogorov
)";
  const Trace a = run_scenario(parse_scenario(text));
  const Trace b = run_scenario(parse_scenario(text));
  REQUIRE(a.rounds.size() == b.rounds.size());
  for (std::size_t i = 0; i < a.rounds.size(); ++i) {
    CHECK(a.rounds[i].outcome.x == b.rounds[i].outcome.x);
    CHECK(a.rounds[i].capital_after == b.rounds[i].capital_after);
  }
  CHECK(a.rng == RandomStream::kAlgorithm);
}

TEST_CASE("built-in pools") {
  CHECK(builtin_pool("theorem34_pool")->size() == 24);
  CHECK(builtin_pool("ufg_pool")->size() == 24);
  CHECK(builtin_pool("ufgh_pool")->size() == 72);
  CHECK_FALSE(builtin_pool("nope"));
  for (const auto& name : builtin_pool_names()) {
    const auto pool = builtin_pool(name, 50);
    REQUIRE(pool);
    for (const Scenario& s : *pool) {
      CHECK(s.labels);
      CHECK_NOTHROW(validate_scenario(s));
    }
  }
}
