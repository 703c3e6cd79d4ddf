#include "gtp/commands.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gtp/kernels.hpp"
#include "json.hpp"

namespace gtp {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trace_csv(const Trace& trace, std::ostream& out) {
  const bool priced = trace.protocol.priced();
  out << kTraceHeader << '\n';
  for (const RoundRecord& r : trace.rounds) {
    out << r.n << ',' << format_real(priced ? r.forecast.p : r.forecast.m) << ',';
    if (!priced) out << format_real(r.forecast.v);
    out << ',' << format_real(r.bet.M) << ',';
    if (!priced) out << format_real(r.bet.V);
    out << ',' << format_real(r.outcome.x) << ',' << format_real(r.capital_after) << '\n';
  }
}

namespace {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_real(const std::string& s, std::size_t line) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw std::runtime_error("trace line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return x;
}

}  // namespace

Trace read_trace_csv(std::istream& in, const Protocol& protocol) {
  Trace t;
  t.protocol = protocol;
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) {
    throw std::runtime_error("trace: missing header '" + std::string(kTraceHeader) + "'");
  }
  const bool priced = protocol.priced();
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 7) throw std::runtime_error("trace line " + std::to_string(lineno) + ": expected 7 fields");
    RoundRecord r;
    r.n = static_cast<std::int64_t>(parse_real(f[0], lineno));
    if (priced) {
      r.forecast.p = parse_real(f[1], lineno);
    } else {
      r.forecast.m = parse_real(f[1], lineno);
      r.forecast.v = parse_real(f[2], lineno);
      r.bet.V = parse_real(f[4], lineno);
    }
    r.bet.M = parse_real(f[3], lineno);
    r.outcome.x = parse_real(f[5], lineno);
    r.capital_after = parse_real(f[6], lineno);
    t.rounds.push_back(r);
  }
  return t;
}

TraceStats trace_stats(const Trace& trace) {
  TraceStats st;
  if (trace.rounds.empty()) return st;
  const bool priced = trace.protocol.priced();
  double sum = 0.0;
  for (const RoundRecord& r : trace.rounds) {
    const double value = priced ? r.outcome.x : r.outcome.x - r.forecast.m;
    sum += value;
    if (priced ? r.outcome.x == 1.0 : r.outcome.x != r.forecast.m) ++st.heads;
  }
  st.final_mean = sum / static_cast<double>(trace.rounds.size());
  return st;
}

std::string summary_json(const std::string& scenario, const Trace& trace, const Verdict& verdict) {
  const TraceStats st = trace_stats(trace);
  nlohmann::ordered_json j;
  j["scenario"] = scenario;
  j["seed"] = trace.seed ? nlohmann::ordered_json(*trace.seed) : nlohmann::ordered_json(nullptr);
  j["sup_capital"] = verdict.sup_capital;
  j["skeptic_duty_ok"] = verdict.skeptic_duty_ok;
  j["strong_bound_ok"] = verdict.strong_bound_ok;
  j["event_proxy_ok"] =
      verdict.event_proxy_ok ? nlohmann::ordered_json(*verdict.event_proxy_ok) : nlohmann::ordered_json(nullptr);
  j["heads"] = st.heads;
  j["final_mean"] = st.final_mean;
  return j.dump(2);
}

void apply_overrides(Scenario& s, const RunOverrides& o) {
  if (o.horizon) s.horizon = *o.horizon;
  if (o.seed) s.seed = *o.seed;
}

bool verdict_passes(const Scenario& s, const Verdict& v) {
  const bool need_strong = !s.labels || s.labels->strong_compliance;
  if (need_strong && !v.strong_bound_ok) return false;
  return v.event_proxy_ok.value_or(true);
}

RunResult cmd_run(Scenario scenario, const RunOverrides& overrides) {
  apply_overrides(scenario, overrides);
  RunResult res;
  res.trace = run_scenario(scenario);
  res.verdict = strong_compliance_verdict(res.trace, make_event_proxy(scenario));
  if (res.trace.skeptic_fault_round) {
    res.verdict.notes.push_back("Skeptic fault at round " + std::to_string(*res.trace.skeptic_fault_round));
  }
  res.passed = verdict_passes(scenario, res.verdict);
  if (overrides.out_dir) {
    std::filesystem::create_directories(*overrides.out_dir);
    res.csv_path = *overrides.out_dir / (scenario.name + ".csv");
    res.json_path = *overrides.out_dir / (scenario.name + ".json");
    std::ofstream csv(res.csv_path);
    write_trace_csv(res.trace, csv);
    std::ofstream json(res.json_path);
    json << summary_json(scenario.name, res.trace, res.verdict) << '\n';
    if (!csv || !json) throw std::runtime_error("cannot write outputs to " + overrides.out_dir->string());
  }
  return res;
}

std::vector<Scenario> load_manifest(const std::string& manifest) {
  if (auto pool = builtin_pool(manifest)) return *pool;

  const std::filesystem::path path(manifest);
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      const auto ext = entry.path().extension();
      if (entry.is_regular_file() && (ext == ".yaml" || ext == ".yml")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
  } else {
    if (!std::filesystem::exists(path)) {
      throw std::runtime_error("manifest '" + manifest + "' is neither a file, a directory nor a built-in pool");
    }
    YAML::Node root;
    try {
      root = YAML::LoadFile(path.string());
    } catch (const YAML::Exception& e) {
      throw ScenarioError("manifest", e.mark.line + 1, e.msg);
    }
    if (!root.IsMap() || !root["scenarios"]) throw ScenarioError("scenarios", 0, "manifest needs a 'scenarios' list");
    const YAML::Node list = root["scenarios"];
    if (!list.IsSequence()) throw ScenarioError("scenarios", list.Mark().line + 1, "expected a list");
    for (const auto& item : list) files.push_back(path.parent_path() / item.as<std::string>());
  }

  std::vector<Scenario> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(load_scenario(f));
  return out;
}

Report cmd_verify(std::vector<Scenario> scenarios, const RunOverrides& overrides) {
  for (Scenario& s : scenarios) {
    if (!s.labels) throw ScenarioError("labels", 0, "scenario '" + s.name + "' has no labels");
    apply_overrides(s, overrides);
  }
  if (overrides.out_dir) std::filesystem::create_directories(*overrides.out_dir);

  Report report;
  report.entries = kernels::map_parallel(scenarios.size(), [&](std::size_t i) {
    ScenarioReport entry;
    entry.scenario = scenarios[i].name;
    try {
      RunOverrides per = overrides;
      per.horizon.reset();
      per.seed.reset();
      RunResult r = cmd_run(scenarios[i], per);
      entry.verdict = std::move(r.verdict);
      entry.passed = r.passed;
      entry.skeptic_fault_round = r.trace.skeptic_fault_round;
      entry.trace_path = r.csv_path;
    } catch (const std::exception& e) {
      entry.passed = false;
      entry.verdict.notes.push_back(std::string("error: ") + e.what());
    }
    return entry;
  });
  for (const auto& e : report.entries) {
    (e.passed ? report.passed : report.failed) += 1;
    if (e.skeptic_fault_round) ++report.skeptic_faults;
  }
  return report;
}

std::vector<double> read_p_script(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) out.push_back(parse_real(tok, lineno));
  }
  return out;
}

namespace {

std::uint32_t parse_leaf(std::string tok) {
  int base = 10;
  if (tok.rfind("0b", 0) == 0) {
    base = 2;
    tok = tok.substr(2);
  } else if (tok.rfind("0x", 0) == 0) {
    base = 16;
    tok = tok.substr(2);
  }
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v, base);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
    throw std::invalid_argument("event: bad leaf index '" + tok + "'");
  }
  return v;
}

std::int64_t parse_count(std::string_view s, std::string_view atom) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("event: bad integer in '" + std::string(atom) + "'");
  }
  return v;
}

CoinEvent parse_atom(std::string_view atom, std::size_t horizon) {
  if (atom == "all") return [](std::uint32_t) { return true; };
  if (atom == "none") return [](std::uint32_t) { return false; };

  if (atom.substr(0, 7) == "leaves:") {
    std::vector<std::uint32_t> leaves;
    for (const auto& tok : split(atom.substr(7), ',')) {
      const std::uint32_t leaf = parse_leaf(tok);
      if (horizon < 32 && leaf >= (std::uint32_t{1} << horizon)) {
        throw std::invalid_argument("event: leaf " + tok + " outside a " + std::to_string(horizon) + "-round tree");
      }
      leaves.push_back(leaf);
    }
    std::sort(leaves.begin(), leaves.end());
    return [leaves](std::uint32_t path) { return std::binary_search(leaves.begin(), leaves.end(), path); };
  }

  if (atom.substr(0, 3) == "sum") {
    std::string_view rest = atom.substr(3);
    for (std::string_view op : {">=", "<=", "==", ">", "<"}) {
      if (rest.substr(0, op.size()) != op) continue;
      const std::int64_t k = parse_count(rest.substr(op.size()), atom);
      const std::string o(op);
      return [o, k](std::uint32_t path) {
        const std::int64_t s = std::popcount(path);
        if (o == ">=") return s >= k;
        if (o == "<=") return s <= k;
        if (o == "==") return s == k;
        if (o == ">") return s > k;
        return s < k;
      };
    }
    throw std::invalid_argument("event: bad comparison in '" + std::string(atom) + "'");
  }

  if (atom.substr(0, 1) == "x") {
    const auto eq = atom.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("event: expected x<i>=<0|1>");
    const std::int64_t i = parse_count(atom.substr(1, eq - 1), atom);
    const std::int64_t bit = parse_count(atom.substr(eq + 1), atom);
    if (i < 1 || static_cast<std::size_t>(i) > horizon) {
      throw std::invalid_argument("event: coordinate " + std::to_string(i) + " outside 1.." + std::to_string(horizon));
    }
    if (bit != 0 && bit != 1) throw std::invalid_argument("event: coordinate value must be 0 or 1");
    const std::uint32_t mask = std::uint32_t{1} << (i - 1);
    return [mask, bit](std::uint32_t path) { return ((path & mask) != 0) == (bit == 1); };
  }

  throw std::invalid_argument("event: unknown atom '" + std::string(atom) + "'");
}

}  // namespace

CoinEvent parse_event_spec(std::string_view spec, std::size_t horizon) {
  std::vector<CoinEvent> atoms;
  for (auto& raw : split(spec, '&')) {
    std::string atom;
    for (char c : raw) {
      if (!std::isspace(static_cast<unsigned char>(c))) atom.push_back(c);
    }
    if (atom.empty()) throw std::invalid_argument("event: empty atom");
    atoms.push_back(parse_atom(atom, horizon));
  }
  if (atoms.size() == 1) return atoms.front();
  return [atoms](std::uint32_t path) {
    return std::all_of(atoms.begin(), atoms.end(), [path](const CoinEvent& e) { return e(path); });
  };
}

PriceResult cmd_price(const std::vector<double>& p_script, std::string_view event_spec) {
  if (p_script.size() > kMaxPricingHorizon) throw HorizonTooLarge(p_script.size());
  const CoinEvent event = parse_event_spec(event_spec, p_script.size());
  return {upper_probability_coin(p_script, event), lower_probability_coin(p_script, event)};
}

}  // namespace gtp
