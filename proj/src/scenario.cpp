#include "gtp/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "gtp/reality.hpp"
#include "gtp/skeptic.hpp"

namespace gtp {

ScenarioError::ScenarioError(const std::string& field, int line, const std::string& what)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         field + ": " + what),
      field_(field),
      line_(line),
      detail_(what) {}

std::string_view to_string(ExpectedEvent e) {
  switch (e) {
    case ExpectedEvent::None: return "none";
    case ExpectedEvent::BorelCantelli: return "borel_cantelli";
    case ExpectedEvent::Slln: return "slln";
    case ExpectedEvent::FirstRoundHead: return "first_round_head";
    case ExpectedEvent::AvoidMatch: return "avoid_match";
  }
  return "?";
}

namespace {

ExpectedEvent parse_expected_event(const std::string& s, int line) {
  for (ExpectedEvent e : {ExpectedEvent::None, ExpectedEvent::BorelCantelli, ExpectedEvent::Slln,
                          ExpectedEvent::FirstRoundHead, ExpectedEvent::AvoidMatch}) {
    if (s == to_string(e)) return e;
  }
  throw ScenarioError("labels.expected_event", line, "unknown event '" + s + "'");
}

// ---------------------------------------------------------------------------
// Generators

struct GeneratorShape {
  std::vector<std::string> params;
};

const std::map<std::string, GeneratorShape>& generator_shapes() {
  static const std::map<std::string, GeneratorShape> shapes = {
      {"constant", {{"value"}}},         {"harmonic", {{"a"}}},
      {"inverse_square", {{"a"}}},       {"geometric", {{"a", "r"}}},
      {"power", {{"a", "k"}}},           {"sine", {{"amplitude", "frequency"}}},
      {"list", {{}}},
  };
  return shapes;
}

double default_param(const std::string& gen, const std::string& key) {
  if (key == "a" || key == "amplitude" || key == "frequency") return 1.0;
  if (key == "r") return 0.5;
  if (key == "k") return 1.0;
  (void)gen;
  return 0.0;
}

/// Checks that the script stays in [lo, hi] over the horizon.
void check_generator_range(const GeneratorSpec& g, const std::string& field, std::int64_t horizon,
                           double lo, double hi) {
  if (g.generator == "list" && static_cast<std::int64_t>(g.values.size()) < horizon) {
    throw ScenarioError(field, 0,
                        "list has " + std::to_string(g.values.size()) + " values, horizon is " +
                            std::to_string(horizon));
  }
  for (std::int64_t n = 1; n <= horizon; ++n) {
    const double x = g.at(n);
    if (!(x >= lo && x <= hi) || !std::isfinite(x)) {
      std::ostringstream os;
      os << "value " << x << " at round " << n << " outside [" << lo << ", " << hi << "]";
      throw ScenarioError(field, 0, os.str());
    }
  }
}

// ---------------------------------------------------------------------------
// Strategy registry

struct ParamRule {
  enum class Kind { Number, Growth } kind = Kind::Number;
  double lo = 0.0;
  double hi = 0.0;
  bool lo_open = false;
};

using SkepticFactory =
    std::function<std::unique_ptr<SkepticPolicy>(const StrategySpec&, const Protocol&, RandomStream)>;
using RealityFactory =
    std::function<std::unique_ptr<RealityPolicy>(const StrategySpec&, const Protocol&, RandomStream)>;

template <class Factory>
struct Entry {
  std::set<ProtocolKind> kinds;
  std::map<std::string, ParamRule> params;
  Factory make;
};

const std::set<ProtocolKind> kAllKinds = {ProtocolKind::CoinTossing, ProtocolKind::BoundedForecasting,
                                          ProtocolKind::UnboundedForecasting, ProtocolKind::GeneralHedge};
const std::set<ProtocolKind> kPriced = {ProtocolKind::CoinTossing, ProtocolKind::BoundedForecasting};
const std::set<ProtocolKind> kUnbounded = {ProtocolKind::UnboundedForecasting,
                                           ProtocolKind::GeneralHedge};

const std::map<std::string, Entry<SkepticFactory>>& skeptic_registry() {
  static const std::map<std::string, Entry<SkepticFactory>> reg = {
      {"zero", {kAllKinds, {}, [](auto&, auto&, RandomStream) {
                  return std::unique_ptr<SkepticPolicy>(std::make_unique<ZeroSkeptic>());
                }}},
      {"bc_divergent", {kPriced, {}, [](auto&, auto&, RandomStream) {
                          return std::unique_ptr<SkepticPolicy>(std::make_unique<BcSkeptic>(BcBet::Divergent));
                        }}},
      {"bc_convergent", {kPriced, {}, [](auto&, auto&, RandomStream) {
                           return std::unique_ptr<SkepticPolicy>(std::make_unique<BcSkeptic>(BcBet::Convergent));
                         }}},
      {"bc_fictional", {kPriced, {}, [](auto&, auto&, RandomStream) {
                          return std::unique_ptr<SkepticPolicy>(std::make_unique<BcSkeptic>(BcBet::Fictional));
                        }}},
      {"random_bounded",
       {kAllKinds,
        {{"bound", {ParamRule::Kind::Number, 0.0, 1e6}}, {"v_bound", {ParamRule::Kind::Number, 0.0, 1e6}}},
        [](const StrategySpec& s, auto&, RandomStream rng) {
          return std::unique_ptr<SkepticPolicy>(std::make_unique<RandomBoundedSkeptic>(
              rng, s.number("bound", 10.0), s.number("v_bound", 1.0)));
        }}},
      {"random_proportional", {kAllKinds, {}, [](auto&, auto&, RandomStream rng) {
                                 return std::unique_ptr<SkepticPolicy>(
                                     std::make_unique<RandomProportionalSkeptic>(rng));
                               }}},
      {"bang_bang",
       {kAllKinds,
        {{"fraction", {ParamRule::Kind::Number, 0.0, 1.0}}},
        [](const StrategySpec& s, auto&, RandomStream) {
          return std::unique_ptr<SkepticPolicy>(std::make_unique<BangBangSkeptic>(s.number("fraction", 0.5)));
        }}},
      {"variance_bc", {kUnbounded, {}, [](auto&, auto&, RandomStream) {
                         return std::unique_ptr<SkepticPolicy>(std::make_unique<VarianceBcSkeptic>());
                       }}},
      {"mean_bc", {kUnbounded, {}, [](auto&, auto&, RandomStream) {
                     return std::unique_ptr<SkepticPolicy>(std::make_unique<MeanBcSkeptic>());
                   }}},
  };
  return reg;
}

const std::map<std::string, Entry<RealityFactory>>& reality_registry() {
  static const std::map<std::string, Entry<RealityFactory>> reg = {
      {"bc_comply", {{ProtocolKind::CoinTossing}, {}, [](auto&, auto&, RandomStream) {
                       return std::unique_ptr<RealityPolicy>(std::make_unique<BcComplyReality>());
                     }}},
      {"derandomized_bc", {{ProtocolKind::CoinTossing}, {}, [](auto&, auto&, RandomStream) {
                             return derandomize_coin(std::make_unique<BcSkeptic>(BcBet::Fictional));
                           }}},
      {"ufg_comply", {{ProtocolKind::UnboundedForecasting}, {}, [](auto&, auto&, RandomStream) {
                        return std::unique_ptr<RealityPolicy>(std::make_unique<UfgComplyReality>());
                      }}},
      {"ufgh_comply",
       {{ProtocolKind::GeneralHedge},
        {{"growth", {ParamRule::Kind::Growth}}},
        [](const StrategySpec& s, auto&, RandomStream) {
          return std::unique_ptr<RealityPolicy>(
              std::make_unique<UfghComplyReality>(parse_growth(s.text("growth", "identity"))));
        }}},
      {"first_round_comply", {{ProtocolKind::CoinTossing}, {}, [](auto&, auto&, RandomStream) {
                                return first_round_comply();
                              }}},
      {"bounded_avoid_match",
       {{ProtocolKind::BoundedForecasting},
        {{"q", {ParamRule::Kind::Number, 0.0, 1.0, true}}},
        [](const StrategySpec& s, const Protocol& p, RandomStream) {
          return bounded_avoid_match(s.number("q", 0.9), p.initial_capital);
        }}},
      {"constant",
       {kAllKinds,
        {{"x", {ParamRule::Kind::Number, -1e12, 1e12}}},
        [](const StrategySpec& s, auto&, RandomStream) { return constant_reality(s.number("x", 1.0)); }}},
      {"bernoulli", {{ProtocolKind::CoinTossing}, {}, [](auto&, auto&, RandomStream rng) {
                       return std::unique_ptr<RealityPolicy>(std::make_unique<BernoulliReality>(rng));
                     }}},
      {"kolmogorov", {{ProtocolKind::UnboundedForecasting}, {}, [](auto&, auto&, RandomStream rng) {
                        return std::unique_ptr<RealityPolicy>(std::make_unique<KolmogorovReality>(rng));
                      }}},
  };
  return reg;
}

template <class Factory>
void check_strategy(const std::map<std::string, Entry<Factory>>& reg, const StrategySpec& spec,
                    const Protocol& protocol, const std::string& field, int line) {
  auto it = reg.find(spec.name);
  if (it == reg.end()) throw ScenarioError(field, line, "unknown strategy '" + spec.name + "'");
  const auto& entry = it->second;
  if (!entry.kinds.count(protocol.kind)) {
    throw ScenarioError(field, line,
                        "strategy '" + spec.name + "' does not support protocol '" +
                            std::string(to_string(protocol.kind)) + "'");
  }
  for (const auto& [key, value] : spec.params) {
    auto rule = entry.params.find(key);
    if (rule == entry.params.end()) {
      throw ScenarioError(field + "." + key, line, "unknown parameter for '" + spec.name + "'");
    }
    if (rule->second.kind == ParamRule::Kind::Growth) {
      try {
        Growth g = parse_growth(value);
        if (auto err = validate_growth(g)) throw ScenarioError(field + "." + key, line, *err);
      } catch (const std::invalid_argument& e) {
        throw ScenarioError(field + "." + key, line, e.what());
      }
      continue;
    }
    const double x = spec.number(key, 0.0);
    const ParamRule& r = rule->second;
    const bool low_ok = r.lo_open ? x > r.lo : x >= r.lo;
    if (!low_ok || !(x <= r.hi)) {
      throw ScenarioError(field + "." + key, line, "value " + value + " out of range");
    }
  }
}

// ---------------------------------------------------------------------------
// YAML helpers

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

void reject_unknown(const YAML::Node& map, const std::set<std::string>& allowed,
                    const std::string& prefix) {
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      throw ScenarioError(prefix.empty() ? key : prefix + "." + key, line_of(kv.first), "unknown key");
    }
  }
}

template <class T>
T scalar(const YAML::Node& n, const std::string& field) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ScenarioError(field, line_of(n), "bad value '" + (n.IsScalar() ? n.Scalar() : std::string("<node>")) + "'");
  }
}

GeneratorSpec parse_generator(const YAML::Node& node, const std::string& field) {
  if (!node.IsMap()) throw ScenarioError(field, line_of(node), "expected a mapping");
  if (!node["generator"]) throw ScenarioError(field + ".generator", line_of(node), "missing");
  GeneratorSpec g;
  g.generator = scalar<std::string>(node["generator"], field + ".generator");
  auto shape = generator_shapes().find(g.generator);
  if (shape == generator_shapes().end()) {
    throw ScenarioError(field + ".generator", line_of(node["generator"]),
                        "unknown generator '" + g.generator + "'");
  }
  std::set<std::string> allowed = {"generator"};
  for (const auto& p : shape->second.params) allowed.insert(p);
  if (g.generator == "list") allowed.insert("values");
  reject_unknown(node, allowed, field);
  for (const auto& p : shape->second.params) {
    g.params[p] = node[p] ? scalar<double>(node[p], field + "." + p) : default_param(g.generator, p);
  }
  if (g.generator == "constant" && !node["value"]) {
    throw ScenarioError(field + ".value", line_of(node), "missing");
  }
  if (g.generator == "list") {
    const YAML::Node vals = node["values"];
    if (!vals || !vals.IsSequence()) throw ScenarioError(field + ".values", line_of(node), "expected a list");
    for (const auto& v : vals) g.values.push_back(scalar<double>(v, field + ".values"));
  }
  return g;
}

StrategySpec parse_strategy(const YAML::Node& node, const std::string& field) {
  StrategySpec s;
  if (node.IsScalar()) {
    s.name = node.Scalar();
    return s;
  }
  if (!node.IsMap()) throw ScenarioError(field, line_of(node), "expected a name or mapping");
  if (!node["strategy"]) throw ScenarioError(field + ".strategy", line_of(node), "missing");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    const std::string value = scalar<std::string>(kv.second, field + "." + key);
    if (key == "strategy") {
      s.name = value;
    } else {
      s.params[key] = value;
    }
  }
  return s;
}

std::int64_t first_bet_round(const Trace& t) {
  for (const RoundRecord& r : t.rounds) {
    if (r.bet.M != 0.0 || r.bet.V != 0.0) return r.n;
  }
  return std::numeric_limits<std::int64_t>::max();
}

bool is_head(const Trace& t, const RoundRecord& r) {
  return t.protocol.priced() ? r.outcome.x == 1.0 : r.outcome.x != r.forecast.m;
}

}  // namespace

// ---------------------------------------------------------------------------

double GeneratorSpec::at(std::int64_t n) const {
  const double nn = static_cast<double>(n);
  if (generator == "constant") return param("value");
  if (generator == "harmonic") return param("a") / nn;
  if (generator == "inverse_square") return param("a") / (nn * nn);
  if (generator == "geometric") return param("a") * std::pow(param("r"), nn);
  if (generator == "power") return param("a") * std::pow(nn, param("k"));
  if (generator == "sine") return param("amplitude") * std::sin(param("frequency") * nn);
  if (generator == "list") {
    if (n < 1 || n > static_cast<std::int64_t>(values.size())) {
      throw std::out_of_range("list generator exhausted at round " + std::to_string(n));
    }
    return values[static_cast<std::size_t>(n - 1)];
  }
  throw std::invalid_argument("unknown generator '" + generator + "'");
}

double StrategySpec::number(const std::string& key, double fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(it->second, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != it->second.size()) {
    throw ScenarioError(key, 0, "not a number: '" + it->second + "'");
  }
  return x;
}

std::string StrategySpec::text(const std::string& key, const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

Scenario parse_scenario(std::string_view text, const std::string& default_name) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ScenarioError("document", e.mark.line + 1, e.msg);
  }
  if (!root.IsMap()) throw ScenarioError("document", line_of(root), "expected a mapping");
  reject_unknown(root, {"name", "protocol", "horizon", "seed", "forecaster", "skeptic", "reality", "labels"},
                 "");

  Scenario s;
  s.name = root["name"] ? scalar<std::string>(root["name"], "name") : default_name;

  if (!root["protocol"]) throw ScenarioError("protocol", line_of(root), "missing");
  const YAML::Node proto = root["protocol"];
  std::string hedge_spec;
  if (proto.IsScalar()) {
    s.protocol.kind = parse_protocol_kind(proto.Scalar());
  } else {
    if (!proto.IsMap()) throw ScenarioError("protocol", line_of(proto), "expected a name or mapping");
    reject_unknown(proto, {"kind", "initial_capital", "hedge"}, "protocol");
    if (!proto["kind"]) throw ScenarioError("protocol.kind", line_of(proto), "missing");
    try {
      s.protocol.kind = parse_protocol_kind(scalar<std::string>(proto["kind"], "protocol.kind"));
    } catch (const std::invalid_argument& e) {
      throw ScenarioError("protocol.kind", line_of(proto["kind"]), e.what());
    }
    if (proto["initial_capital"]) {
      s.protocol.initial_capital = scalar<double>(proto["initial_capital"], "protocol.initial_capital");
      if (!(s.protocol.initial_capital > 0.0)) {
        throw ScenarioError("protocol.initial_capital", line_of(proto["initial_capital"]), "must be > 0");
      }
    }
    if (proto["hedge"]) hedge_spec = scalar<std::string>(proto["hedge"], "protocol.hedge");
  }
  if (s.protocol.kind == ProtocolKind::GeneralHedge) {
    if (hedge_spec.empty()) throw ScenarioError("protocol.hedge", line_of(proto), "general_hedge needs a hedge");
    try {
      Hedge h = parse_hedge(hedge_spec);
      if (auto err = validate_hedge(h)) throw ScenarioError("protocol.hedge", line_of(proto), *err);
      s.protocol.hedge = std::move(h);
    } catch (const std::invalid_argument& e) {
      throw ScenarioError("protocol.hedge", line_of(proto), e.what());
    }
  } else if (!hedge_spec.empty()) {
    throw ScenarioError("protocol.hedge", line_of(proto), "only general_hedge takes a hedge");
  }

  if (!root["horizon"]) throw ScenarioError("horizon", line_of(root), "missing");
  s.horizon = scalar<std::int64_t>(root["horizon"], "horizon");
  if (s.horizon < 1) throw ScenarioError("horizon", line_of(root["horizon"]), "must be >= 1");

  if (root["seed"]) s.seed = scalar<std::uint64_t>(root["seed"], "seed");

  if (!root["forecaster"]) throw ScenarioError("forecaster", line_of(root), "missing");
  const YAML::Node fc = root["forecaster"];
  if (!fc.IsMap()) throw ScenarioError("forecaster", line_of(fc), "expected a mapping");
  if (s.protocol.priced()) {
    reject_unknown(fc, {"price"}, "forecaster");
    if (!fc["price"]) throw ScenarioError("forecaster.price", line_of(fc), "missing");
    s.price = parse_generator(fc["price"], "forecaster.price");
  } else {
    reject_unknown(fc, {"mean", "variance"}, "forecaster");
    if (!fc["variance"]) throw ScenarioError("forecaster.variance", line_of(fc), "missing");
    s.variance = parse_generator(fc["variance"], "forecaster.variance");
    if (fc["mean"]) s.mean = parse_generator(fc["mean"], "forecaster.mean");
  }

  for (const char* role : {"skeptic", "reality"}) {
    if (!root[role]) throw ScenarioError(role, line_of(root), "missing");
  }
  s.skeptic = parse_strategy(root["skeptic"], "skeptic");
  s.reality = parse_strategy(root["reality"], "reality");
  check_strategy(skeptic_registry(), s.skeptic, s.protocol, "skeptic", line_of(root["skeptic"]));
  check_strategy(reality_registry(), s.reality, s.protocol, "reality", line_of(root["reality"]));

  if (root["labels"]) {
    const YAML::Node lab = root["labels"];
    if (!lab.IsMap()) throw ScenarioError("labels", line_of(lab), "expected a mapping");
    reject_unknown(lab, {"series_divergent", "expected_event", "strong_compliance"}, "labels");
    ScenarioLabels l;
    if (lab["series_divergent"]) l.series_divergent = scalar<bool>(lab["series_divergent"], "labels.series_divergent");
    if (lab["expected_event"]) {
      l.expected_event = parse_expected_event(scalar<std::string>(lab["expected_event"], "labels.expected_event"),
                                              line_of(lab["expected_event"]));
    }
    if (lab["strong_compliance"]) {
      l.strong_compliance = scalar<bool>(lab["strong_compliance"], "labels.strong_compliance");
    }
    s.labels = l;
  }

  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ScenarioError("file", 0, "cannot open " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str(), file.stem().string());
  } catch (const ScenarioError& e) {
    throw ScenarioError(e.field(), e.line(), e.detail() + " (in " + file.string() + ")");
  }
}

void validate_scenario(const Scenario& s) {
  if (s.horizon < 1) throw ScenarioError("horizon", 0, "must be >= 1");
  s.protocol.check();
  if (s.protocol.priced()) {
    if (!s.price) throw ScenarioError("forecaster.price", 0, "missing");
    check_generator_range(*s.price, "forecaster.price", s.horizon, 0.0, 1.0);
  } else {
    if (!s.variance) throw ScenarioError("forecaster.variance", 0, "missing");
    check_generator_range(*s.variance, "forecaster.variance", s.horizon, 0.0, 1e300);
    if (s.mean) check_generator_range(*s.mean, "forecaster.mean", s.horizon, -1e300, 1e300);
  }
  check_strategy(skeptic_registry(), s.skeptic, s.protocol, "skeptic", 0);
  check_strategy(reality_registry(), s.reality, s.protocol, "reality", 0);
  if (s.reality.name == "bounded_avoid_match" &&
      !(s.reality.number("q", 0.9) > s.protocol.initial_capital)) {
    throw ScenarioError("reality.q", 0, "q must exceed the initial capital");
  }
}

std::vector<std::string> skeptic_strategy_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : skeptic_registry()) out.push_back(k);
  return out;
}

std::vector<std::string> reality_strategy_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : reality_registry()) out.push_back(k);
  return out;
}

std::unique_ptr<ForecasterPolicy> make_forecaster(const Scenario& s) {
  if (s.protocol.priced()) {
    GeneratorSpec price = *s.price;
    return std::make_unique<ScriptedForecaster>(
        [price](std::int64_t n) { return ForecastMove::price(price.at(n)); });
  }
  GeneratorSpec variance = *s.variance;
  std::optional<GeneratorSpec> mean = s.mean;
  return std::make_unique<ScriptedForecaster>([variance, mean](std::int64_t n) {
    return ForecastMove::mean_variance(mean ? mean->at(n) : 0.0, variance.at(n));
  });
}

std::unique_ptr<SkepticPolicy> make_skeptic(const StrategySpec& spec, const Protocol& protocol,
                                            RandomStream rng) {
  check_strategy(skeptic_registry(), spec, protocol, "skeptic", 0);
  return skeptic_registry().at(spec.name).make(spec, protocol, rng);
}

std::unique_ptr<RealityPolicy> make_reality(const StrategySpec& spec, const Protocol& protocol,
                                            RandomStream rng) {
  check_strategy(reality_registry(), spec, protocol, "reality", 0);
  return reality_registry().at(spec.name).make(spec, protocol, rng);
}

EventProxy make_event_proxy(const Scenario& s) {
  if (!s.labels) return {};
  const ScenarioLabels labels = *s.labels;
  switch (labels.expected_event) {
    case ExpectedEvent::None:
      return {};

    case ExpectedEvent::BorelCantelli:
      return [labels](const Trace& t) {
        if (t.skeptic_fault_round) return true;  // Skeptic broke its duty; nothing to check
        const auto n = static_cast<std::int64_t>(t.rounds.size());
        if (!labels.series_divergent) {
          // Heads must have stopped: none in the final 90% of the run.
          for (const RoundRecord& r : t.rounds) {
            if (r.n > n / 10 && is_head(t, r)) return false;
          }
          return true;
        }
        // Divergent side: while Skeptic has not bet, every crossing of an
        // integer by sum p is answered with a head.
        const std::int64_t silent_until = first_bet_round(t);
        BcCounters k;
        for (const RoundRecord& r : t.rounds) {
          if (r.n >= silent_until) break;
          const std::int64_t prev = k.c;
          k = ceiling_index_update(k, r.forecast.p);
          if (k.c != prev && !is_head(t, r)) return false;
        }
        return true;
      };

    case ExpectedEvent::Slln: {
      if (s.protocol.kind == ProtocolKind::UnboundedForecasting) {
        return [labels](const Trace& t) {
          if (t.skeptic_fault_round) return true;
          if (t.rounds.empty()) return true;
          double sum = 0.0;
          if (!labels.series_divergent) {
            for (const RoundRecord& r : t.rounds) sum += r.outcome.x - r.forecast.m;
            return std::fabs(sum / static_cast<double>(t.rounds.size())) <= 0.01;
          }
          // Divergent side with a silent Skeptic: |S_n|/n >= 1/2 at every
          // crossing round n >= 10.
          const std::int64_t silent_until = first_bet_round(t);
          BcCounters k;
          for (const RoundRecord& r : t.rounds) {
            const double nn = static_cast<double>(r.n);
            sum += r.outcome.x - r.forecast.m;
            const std::int64_t prev = k.c;
            k = ceiling_index_update(k, r.forecast.v / (nn * nn));
            if (r.n < silent_until && k.c != prev && r.n >= 10 && std::fabs(sum) / nn < 0.5) {
              return false;
            }
          }
          return true;
        };
      }
      // General hedge: replay A_n, eps_n and the crossing index.
      Growth growth = parse_growth(s.reality.text("growth", "identity"));
      return [labels, growth](const Trace& t) {
        if (t.skeptic_fault_round) return true;
        const Hedge& h = *t.protocol.hedge;
        const auto n = static_cast<std::int64_t>(t.rounds.size());
        const std::int64_t silent_until = first_bet_round(t);
        double a_total = 0.0;
        double eps_sum = 0.0;
        BcCounters k;
        for (const RoundRecord& r : t.rounds) {
          const double xc = r.outcome.x - r.forecast.m;
          a_total += r.forecast.v;
          if (r.forecast.v == 0.0) continue;
          const double g_a = growth(a_total);
          const EpsilonStep e = epsilon_sequence_step(eps_sum, r.forecast.v / g_a);
          eps_sum = e.running_sum;
          const std::int64_t prev = k.c;
          k = ceiling_index_update(k, e.epsilon * r.forecast.v / g_a);
          if (!labels.series_divergent) {
            if (r.n > n / 10 && xc != 0.0) return false;
          } else if (r.n < silent_until && k.c != prev) {
            const double target = hedge_inverse(h, g_a / e.epsilon);
            if (std::fabs(xc) < target * (1.0 - 1e-9)) return false;
          }
        }
        return true;
      };
    }

    case ExpectedEvent::FirstRoundHead:
      return [](const Trace& t) {
        if (t.rounds.empty()) return true;
        const RoundRecord& first = t.rounds.front();
        if (first.forecast.p > 0.0 && first.outcome.x != 1.0) return false;
        const double slack = 1e-9 * t.protocol.initial_capital;
        for (const RoundRecord& r : t.rounds) {
          if (r.capital_after > first.capital_after + slack) return false;
        }
        return true;
      };

    case ExpectedEvent::AvoidMatch: {
      const double q = s.reality.number("q", 0.9);
      return [q](const Trace& t) {
        const double slack = 1e-9 * t.protocol.initial_capital;
        for (const RoundRecord& r : t.rounds) {
          if (r.outcome.x == r.forecast.p) return false;
          if (r.capital_after > q + slack) return false;
        }
        return true;
      };
    }
  }
  return {};
}

Trace run_scenario(const Scenario& s) {
  validate_scenario(s);
  const RandomStream master(s.seed.value_or(0));
  auto forecaster = make_forecaster(s);
  auto skeptic = make_skeptic(s.skeptic, s.protocol, master.split(1));
  auto reality = make_reality(s.reality, s.protocol, master.split(2));
  RunOptions opts;
  opts.halt_on_skeptic_fault = true;
  opts.seed = s.seed;
  opts.rng = std::string(RandomStream::kAlgorithm);
  return run_game(s.protocol, *forecaster, *skeptic, *reality, s.horizon, opts);
}

namespace {

GeneratorSpec gen(std::string name, std::map<std::string, double> params) {
  return GeneratorSpec{std::move(name), std::move(params), {}};
}

Scenario base(std::string name, Protocol protocol, std::int64_t horizon, std::uint64_t seed) {
  Scenario s;
  s.name = std::move(name);
  s.protocol = std::move(protocol);
  s.horizon = horizon;
  s.seed = seed;
  return s;
}

const std::vector<StrategySpec>& coin_adversaries() {
  static const std::vector<StrategySpec> pool = {
      {"zero", {}},          {"bc_divergent", {}},
      {"bc_convergent", {}}, {"bc_fictional", {}},
      {"random_bounded", {{"bound", "10"}}}, {"bang_bang", {{"fraction", "0.5"}}},
  };
  return pool;
}

const std::vector<StrategySpec>& unbounded_adversaries() {
  static const std::vector<StrategySpec> pool = {
      {"zero", {}},
      {"mean_bc", {}},
      {"variance_bc", {}},
      {"random_bounded", {{"bound", "1"}, {"v_bound", "1"}}},
      {"random_proportional", {}},
      {"bang_bang", {{"fraction", "0.5"}}},
  };
  return pool;
}

struct PriceScript {
  std::string tag;
  GeneratorSpec gen;
  bool divergent;
};

const std::vector<PriceScript>& coin_scripts() {
  static const std::vector<PriceScript> scripts = {
      {"harmonic", gen("harmonic", {{"a", 1.0}}), true},
      {"inverse_square", gen("inverse_square", {{"a", 1.0}}), false},
      {"constant", gen("constant", {{"value", 0.3}}), true},
      {"geometric", gen("geometric", {{"a", 1.0}, {"r", 0.5}}), false},
  };
  return scripts;
}

}  // namespace

std::vector<std::string> builtin_pool_names() {
  return {"theorem34_pool", "ufg_pool", "ufgh_pool", "examples_pool", "broken_pool"};
}

std::optional<std::vector<Scenario>> builtin_pool(std::string_view name, std::int64_t horizon) {
  std::vector<Scenario> out;
  std::uint64_t seed = 1000;

  if (name == "theorem34_pool") {
    for (const auto& script : coin_scripts()) {
      for (const auto& adv : coin_adversaries()) {
        Scenario s = base("theorem34-" + script.tag + "-" + adv.name, Protocol::coin(), horizon, ++seed);
        s.price = script.gen;
        s.skeptic = adv;
        s.reality = {"bc_comply", {}};
        s.labels = ScenarioLabels{script.divergent, ExpectedEvent::BorelCantelli, true};
        out.push_back(std::move(s));
      }
    }
    return out;
  }

  if (name == "ufg_pool") {
    for (bool divergent : {false, true}) {
      for (bool sine : {false, true}) {
        for (const auto& adv : unbounded_adversaries()) {
          Scenario s = base(std::string("ufg-") + (divergent ? "vlinear" : "vone") +
                                (sine ? "-msine-" : "-mzero-") + adv.name,
                            Protocol::unbounded(), horizon, ++seed);
          s.variance = divergent ? gen("power", {{"a", 1.0}, {"k", 1.0}}) : gen("constant", {{"value", 1.0}});
          if (sine) s.mean = gen("sine", {{"amplitude", 1.0}, {"frequency", 0.7}});
          s.skeptic = adv;
          s.reality = {"ufg_comply", {}};
          s.labels = ScenarioLabels{divergent, ExpectedEvent::Slln, true};
          out.push_back(std::move(s));
        }
      }
    }
    return out;
  }

  if (name == "ufgh_pool") {
    for (const char* r : {"1", "1.5", "2"}) {
      for (const char* growth : {"identity", "square"}) {
        for (bool linear : {false, true}) {
          for (const auto& adv : unbounded_adversaries()) {
            Scenario s = base(std::string("ufgh-r") + r + "-g" + growth + (linear ? "-vlinear-" : "-vone-") +
                                  adv.name,
                              Protocol::general_hedge(parse_hedge(std::string("power:r=") + r)), horizon,
                              ++seed);
            s.variance = linear ? gen("power", {{"a", 1.0}, {"k", 1.0}}) : gen("constant", {{"value", 1.0}});
            s.skeptic = adv;
            s.reality = {"ufgh_comply", {{"growth", growth}}};
            // sum v_n / g(A_n): identity growth diverges for both scripts,
            // square growth converges for both.
            const bool divergent = std::string(growth) == "identity";
            s.labels = ScenarioLabels{divergent, ExpectedEvent::Slln, true};
            out.push_back(std::move(s));
          }
        }
      }
    }
    return out;
  }

  if (name == "examples_pool") {
    for (const auto& script : coin_scripts()) {
      for (const auto& adv : coin_adversaries()) {
        Scenario s = base("first-round-" + script.tag + "-" + adv.name, Protocol::coin(), horizon, ++seed);
        s.price = script.gen;
        s.skeptic = adv;
        s.reality = {"first_round_comply", {}};
        s.labels = ScenarioLabels{script.divergent, ExpectedEvent::FirstRoundHead, false};
        out.push_back(std::move(s));
      }
    }
    const std::vector<std::pair<std::string, GeneratorSpec>> bounded_scripts = {
        {"zero", gen("constant", {{"value", 0.0}})},
        {"one", gen("constant", {{"value", 1.0}})},
        {"half", gen("constant", {{"value", 0.5}})},
        {"harmonic", gen("harmonic", {{"a", 1.0}})},
    };
    for (const auto& [tag, g] : bounded_scripts) {
      for (const auto& adv : coin_adversaries()) {
        Scenario s = base("avoid-match-" + tag + "-" + adv.name, Protocol::bounded(0.5), horizon, ++seed);
        s.price = g;
        s.skeptic = adv;
        s.reality = {"bounded_avoid_match", {{"q", "0.9"}}};
        s.labels = ScenarioLabels{false, ExpectedEvent::AvoidMatch, false};
        out.push_back(std::move(s));
      }
    }
    return out;
  }

  if (name == "broken_pool") {
    Scenario s = base("broken-always-one", Protocol::coin(), horizon, ++seed);
    s.price = gen("harmonic", {{"a", 1.0}});
    s.skeptic = {"bc_fictional", {}};
    s.reality = {"constant", {{"x", "1"}}};
    s.labels = ScenarioLabels{true, ExpectedEvent::BorelCantelli, true};
    out.push_back(std::move(s));
    return out;
  }

  return std::nullopt;
}

}  // namespace gtp
