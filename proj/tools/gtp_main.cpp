#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "gtp/commands.hpp"

namespace {

void print_verdict(const std::string& name, const gtp::Verdict& v, bool passed,
                   std::optional<std::int64_t> fault) {
  std::cout << (passed ? "PASS " : "FAIL ") << name << "  sup_K=" << gtp::format_real(v.sup_capital)
            << " strong_bound_ok=" << (v.strong_bound_ok ? "true" : "false")
            << " skeptic_duty_ok=" << (v.skeptic_duty_ok ? "true" : "false") << " event_proxy_ok="
            << (v.event_proxy_ok ? (*v.event_proxy_ok ? "true" : "false") : "n/a");
  if (fault) std::cout << " skeptic_fault_round=" << *fault;
  std::cout << '\n';
  for (const auto& note : v.notes) std::cout << "    " << note << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Game-theoretic probability engine: play, verify and price protocols"};
  app.require_subcommand(1);

  gtp::RunOverrides overrides;
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string input;
  std::string event = "all";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--horizon", horizon, "Override the horizon N")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Override the random seed");
    sub->add_option("--out", out_dir, "Directory for CSV traces and JSON summaries");
  };

  CLI::App* run = app.add_subcommand("run", "Play one scenario file");
  run->add_option("file", input, "Scenario file")->required();
  add_common(run);

  CLI::App* verify = app.add_subcommand("verify", "Check a manifest of labelled scenarios");
  verify->add_option("manifest", input, "Manifest file, scenario directory or built-in pool")->required();
  add_common(verify);

  CLI::App* price = app.add_subcommand("price", "Upper and lower probability of a coin event");
  price->add_option("file", input, "Price script p_1 ... p_N")->required();
  price->add_option("--event", event, "Event: all | none | sum>=K | x<i>=0|1 | leaves:i,j,... joined by '&'");
  add_common(price);

  CLI11_PARSE(app, argc, argv);

  for (CLI::App* sub : {run, verify, price}) {
    if (sub->count("--horizon")) overrides.horizon = horizon;
    if (sub->count("--seed")) overrides.seed = seed;
    if (sub->count("--out")) overrides.out_dir = out_dir;
  }

  try {
    if (*run) {
      const gtp::Scenario s = gtp::load_scenario(input);
      const gtp::RunResult r = gtp::cmd_run(s, overrides);
      print_verdict(s.name, r.verdict, r.passed, r.trace.skeptic_fault_round);
      if (!r.csv_path.empty()) std::cout << "trace: " << r.csv_path.string() << '\n';
      if (!r.json_path.empty()) std::cout << "summary: " << r.json_path.string() << '\n';
      return 0;
    }
    if (*verify) {
      const gtp::Report report = gtp::cmd_verify(gtp::load_manifest(input), overrides);
      for (const auto& e : report.entries) print_verdict(e.scenario, e.verdict, e.passed, e.skeptic_fault_round);
      std::cout << report.entries.size() << " scenarios: " << report.passed << " passed, " << report.failed
                << " failed, " << report.skeptic_faults << " skeptic faults\n";
      return report.ok() ? 0 : 1;
    }
    if (*price) {
      std::ifstream in(input);
      if (!in) throw std::runtime_error("cannot open " + input);
      std::vector<double> p = gtp::read_p_script(in);
      if (overrides.horizon) {
        if (static_cast<std::size_t>(*overrides.horizon) > p.size()) {
          throw std::runtime_error("--horizon exceeds the script length");
        }
        p.resize(static_cast<std::size_t>(*overrides.horizon));
      }
      const gtp::PriceResult r = gtp::cmd_price(p, event);
      std::printf("upper %.12f\nlower %.12f\n", r.upper, r.lower);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
