#pragma once

// The run / verify / price verbs and their file formats.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gtp/analysis.hpp"
#include "gtp/engine.hpp"
#include "gtp/scenario.hpp"

namespace gtp {

/// Header of every trace file.
inline constexpr std::string_view kTraceHeader = "n,p_or_m,v,M,V,x,K";

/// 17 significant digits, shortest "%.17g" form.
std::string format_real(double x);

/// One row per round; absent fields (v and V in the priced protocols) empty.
void write_trace_csv(const Trace& trace, std::ostream& out);
/// Reads rows written by write_trace_csv back into a trace for `protocol`.
Trace read_trace_csv(std::istream& in, const Protocol& protocol);

struct TraceStats {
  std::int64_t heads = 0;   // x = 1 (priced) or x != m (unbounded)
  double final_mean = 0.0;  // mean of x (priced) or of x - m (unbounded)
};
TraceStats trace_stats(const Trace& trace);

/// Summary JSON with fields scenario, seed, sup_capital, skeptic_duty_ok,
/// strong_bound_ok, event_proxy_ok, heads, final_mean.
std::string summary_json(const std::string& scenario, const Trace& trace, const Verdict& verdict);

struct RunOverrides {
  std::optional<std::int64_t> horizon;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out_dir;
};

void apply_overrides(Scenario& s, const RunOverrides& o);

struct RunResult {
  Trace trace;
  Verdict verdict;
  bool passed = true;
  std::filesystem::path csv_path;
  std::filesystem::path json_path;
};

/// True iff the verdict agrees with the labels: strong bound when required
/// and no failed event proxy. A Skeptic fault is never a failure.
bool verdict_passes(const Scenario& s, const Verdict& v);

/// Plays the scenario, writes <out>/<name>.csv and <name>.json when an
/// output directory is set.
RunResult cmd_run(Scenario scenario, const RunOverrides& overrides);

struct ScenarioReport {
  std::string scenario;
  Verdict verdict;
  bool passed = true;
  std::optional<std::int64_t> skeptic_fault_round;
  std::filesystem::path trace_path;
};

struct Report {
  std::vector<ScenarioReport> entries;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skeptic_faults = 0;
  bool ok() const { return failed == 0; }
};

/// A manifest is a built-in pool name, a directory of *.yaml scenarios, or a
/// YAML file `scenarios: [relative/paths.yaml, ...]`.
std::vector<Scenario> load_manifest(const std::string& manifest);

/// Runs every scenario (in parallel) and checks each verdict against its
/// labels. Scenarios without labels are rejected before anything runs.
Report cmd_verify(std::vector<Scenario> scenarios, const RunOverrides& overrides);

/// Whitespace/comma separated reals; '#' starts a comment.
std::vector<double> read_p_script(std::istream& in);

/// Event grammar (atoms joined with '&'):
///   all | none | sum>=K | sum<=K | sum>K | sum<K | sum==K | x<i>=0 | x<i>=1
///   leaves:<i>,<j>,...   (leaf indices, bit k-1 = x_k; 0b/0x prefixes allowed)
CoinEvent parse_event_spec(std::string_view spec, std::size_t horizon);

struct PriceResult {
  double upper = 0.0;
  double lower = 0.0;
};
PriceResult cmd_price(const std::vector<double>& p_script, std::string_view event_spec);

}  // namespace gtp
