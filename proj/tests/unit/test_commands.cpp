#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gtp/commands.hpp"

using namespace gtp;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("gtp_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

const std::filesystem::path kScenarios = std::filesystem::path(GTP_SOURCE_DIR) / "scenarios";

}  // namespace

TEST_CASE("format_real prints 17 significant digits") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(-2.5e-20) == "-2.4999999999999999e-20");
}

TEST_CASE("CSV layout and round trip through replay_verify") {
  for (const char* file : {"coin_harmonic.yaml", "ufg_linear_variance.yaml", "ufgh_power15.yaml"}) {
    CAPTURE(file);
    Scenario s = load_scenario(kScenarios / file);
    RunOverrides o;
    o.horizon = 500;
    o.out_dir = scratch("roundtrip");
    const RunResult r = cmd_run(s, o);
    std::ifstream in(r.csv_path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "n,p_or_m,v,M,V,x,K");
    in.seekg(0);
    const Trace back = read_trace_csv(in, s.protocol);
    CHECK(back.rounds.size() == r.trace.rounds.size());
    CHECK(replay_verify(back));
    for (std::size_t i = 0; i < back.rounds.size(); ++i) {
      CHECK(back.rounds[i].capital_after == r.trace.rounds[i].capital_after);
    }
  }
  std::ostringstream coin;
  Trace t;
  t.rounds.push_back(RoundRecord{1, ForecastMove::price(0.5), {0.25, 0}, {1}, 1.125});
  write_trace_csv(t, coin);
  CHECK(coin.str() == "n,p_or_m,v,M,V,x,K\n1,0.5,,0.25,,1,1.125\n");
}

TEST_CASE("identical scenario and seed give byte-identical CSV") {
  const Scenario s = load_scenario(kScenarios / "ufg_linear_variance.yaml");
  RunOverrides a, b;
  a.out_dir = scratch("det_a");
  b.out_dir = scratch("det_b");
  a.seed = b.seed = 77;
  const auto ra = cmd_run(s, a);
  const auto rb = cmd_run(s, b);
  CHECK(slurp(ra.csv_path) == slurp(rb.csv_path));
  b.seed = 78;
  CHECK(slurp(cmd_run(s, b).csv_path) != slurp(ra.csv_path));
}

TEST_CASE("summary JSON fields") {
  const Scenario s = load_scenario(kScenarios / "coin_harmonic.yaml");
  RunOverrides o;
  o.horizon = 50;
  o.seed = 4;
  o.out_dir = scratch("json");
  const auto r = cmd_run(s, o);
  const std::string json = slurp(r.json_path);
  for (const char* key : {"\"scenario\"", "\"seed\": 4", "\"sup_capital\"", "\"skeptic_duty_ok\"",
                          "\"strong_bound_ok\"", "\"event_proxy_ok\"", "\"heads\"", "\"final_mean\""}) {
    CHECK(json.find(key) != std::string::npos);
  }
}

TEST_CASE("verify: stock pool, broken reality, empty manifest, missing labels") {
  RunOverrides o;
  o.horizon = 2000;
  const Report stock = cmd_verify(load_manifest("theorem34_pool"), o);
  CHECK(stock.entries.size() == 24);
  CHECK(stock.ok());
  for (const auto& e : stock.entries) CHECK(e.verdict.strong_bound_ok);

  const Report broken = cmd_verify(load_manifest((kScenarios / "broken" / "manifest.yaml").string()), o);
  REQUIRE(broken.entries.size() == 1);
  CHECK_FALSE(broken.ok());
  CHECK_FALSE(broken.entries[0].verdict.strong_bound_ok);

  const Report empty = cmd_verify(load_manifest((kScenarios / "empty.yaml").string()), o);
  CHECK(empty.entries.empty());
  CHECK(empty.ok());

  std::vector<Scenario> unlabelled{load_scenario(kScenarios / "kolmogorov.yaml")};
  CHECK_THROWS_AS(cmd_verify(unlabelled, o), ScenarioError);
}

TEST_CASE("price examples and event grammar") {
  CHECK(cmd_price({0.3}, "x1=1").upper == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(cmd_price({0.3}, "x1=1").lower == doctest::Approx(0.3).epsilon(1e-15));
  const auto half = cmd_price({0.5, 0.5, 0.5}, "sum>=2");
  CHECK(half.upper == 0.5);
  CHECK(half.lower == 0.5);
  CHECK(cmd_price({0.2, 0.7}, "all").upper == 1.0);
  CHECK(cmd_price({0.2, 0.7}, "all").lower == 1.0);
  CHECK(cmd_price({0.2, 0.7}, "none").upper == 0.0);
  CHECK(cmd_price({0.5, 0.5}, "leaves:0b11,0").upper == 0.5);
  CHECK(cmd_price({0.5, 0.5}, "x1=1 & x2=0").upper == 0.25);
  CHECK(cmd_price({0.5, 0.5, 0.5}, "sum==1").upper == 0.375);
  CHECK_THROWS(cmd_price({0.5}, "sum>>1"));
  CHECK_THROWS(cmd_price({0.5}, "x2=1"));
  CHECK_THROWS(cmd_price({0.5}, "leaves:2"));
  CHECK_THROWS(cmd_price({0.5}, "x1=1 & "));
  CHECK_THROWS_AS(cmd_price(std::vector<double>(26, 0.5), "all"), HorizonTooLarge);
}

TEST_CASE("read_p_script") {
  std::istringstream in("# header\n0.1, 0.2 0.3\n\n0.4 # tail\n");
  CHECK(read_p_script(in) == std::vector<double>{0.1, 0.2, 0.3, 0.4});
  std::istringstream bad("0.1 x");
  CHECK_THROWS(read_p_script(bad));
}
