#include <cmath>

#include "doctest.h"
#include "gtp/analysis.hpp"
#include "gtp/random.hpp"
#include "gtp/reality.hpp"
#include "gtp/skeptic.hpp"

using namespace gtp;

TEST_CASE("coin compliance: waiting round without a crossing") {
  const auto step = bc_comply_step(BcComplyState{}, 1, 0.6, 0.0, 1.0, 1.0);
  CHECK(step.outcome.x == 0.0);
  CHECK(step.state.phase.tag == PhaseTag::Waiting);
  CHECK(step.state.counters.c == 1);
}

TEST_CASE("coin compliance: first bet moves to mixing") {
  const auto step = bc_comply_step(BcComplyState{}, 1, 0.5, -0.3, 1.0, 1.0);
  CHECK(step.outcome.x == 1.0);
  CHECK(step.state.phase.tag == PhaseTag::Mixing);
  CHECK(step.state.phase.k_n0 == doctest::Approx(0.85).epsilon(1e-15));
  CHECK(step.state.phase.epsilon == doctest::Approx(0.15).epsilon(1e-12));
  CHECK(step.state.phase.n0 == 1);
  CHECK(step.state.counters.b == 1);
}

TEST_CASE("coin compliance: mixing threshold") {
  BcComplyState st;
  st.phase = enter_phase(3, 0.5, 1.0);
  REQUIRE(st.phase.epsilon == 0.5);
  st.counters = BcCounters{0, 1.5, 2};
  CHECK(st.phase.scale() * (0.25 - 0.0625) == 0.09375);
  CHECK(bc_comply_step(st, 4, 0.0, 0.05, 0.5, 1.0).outcome.x == 1.0);
  CHECK(bc_comply_step(st, 4, 0.0, 0.2, 0.5, 1.0).outcome.x == 0.0);
  CHECK(bc_comply_step(st, 4, 0.0, 0.09375, 0.5, 1.0).outcome.x == 1.0);
}

TEST_CASE("coin compliance: capital-neutral rounds keep waiting") {
  auto st = bc_comply_step(BcComplyState{}, 1, 1.0, -0.5, 1.0, 1.0);
  CHECK(st.outcome.x == 1.0);
  CHECK(st.state.phase.tag == PhaseTag::Waiting);
  st = bc_comply_step(st.state, 2, 0.0, 0.5, 1.0, 1.0);
  CHECK(st.outcome.x == 0.0);
  CHECK(st.state.phase.tag == PhaseTag::Waiting);
}

TEST_CASE("coin compliance: a first bet losing everything degenerates") {
  const auto step = bc_comply_step(BcComplyState{}, 1, 0.5, 2.0, 1.0, 1.0);
  CHECK(step.outcome.x == 0.0);
  CHECK(step.state.phase.tag == PhaseTag::Degenerate);
}

TEST_CASE("unbounded compliance: mixing move cases") {
  CHECK(ufg_mixing_move(5, 1.0, 0.3, 0.1, 0.001) == 0.0);
  CHECK(ufg_mixing_move(5, 1.0, -0.3, 0.0001, 0.001) == 5.0);
  CHECK(ufg_mixing_move(5, 1.0, 0.3, 0.0001, 0.001) == -5.0);
  CHECK(ufg_mixing_move(2, 9.0, -1.0, 0.0, 0.0) == 3.0);
  CHECK(ufg_mixing_move(2, 9.0, 1.0, 5.0, 0.0) == -3.0);
}

TEST_CASE("unbounded compliance: first bet with V > 0") {
  const ForecastMove f = ForecastMove::mean_variance(0.0, 2.0);
  const SkepticBet s{0.0, 0.5};
  const auto step = ufg_comply_step(UfgComplyState{}, 1, f, s, 1.0, 1.0);
  CHECK(step.outcome.x == 0.0);
  CHECK(capital_update(Protocol::unbounded(), 1.0, f, s, step.outcome) == 0.0);
  CHECK(step.state.phase.tag == PhaseTag::Degenerate);
}

TEST_CASE("unbounded compliance: rounds with v = 0 answer m") {
  const auto step = ufg_comply_step(UfgComplyState{}, 1, ForecastMove::mean_variance(2.5, 0.0), {1.0, 0.0}, 1.0, 1.0);
  CHECK(step.outcome.x == 2.5);
  CHECK(step.state.phase.tag == PhaseTag::Waiting);
}

TEST_CASE("general-hedge compliance: e_2 for the square hedge") {
  const Hedge h = power_hedge(2.0);
  const Growth g = identity_growth();
  const ForecastMove f = ForecastMove::mean_variance(0.0, 1.0);
  auto s1 = ufgh_comply_step(UfghComplyState{}, 1, f, {}, h, g, 1.0, 1.0);
  auto s2 = ufgh_comply_step(s1.state, 2, f, {}, h, g, 1.0, 1.0);
  CHECK(s2.state.last_epsilon == doctest::Approx(1.0 / 2.5).epsilon(1e-15));
  CHECK(s2.state.last_e == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
}

TEST_CASE("general-hedge compliance: mixing and first-bet moves") {
  const Hedge h = power_hedge(2.0);
  CHECK(ufgh_mixing_move(h, 2.0, 1.0, 9.0, 1.0, -1.0, 0.0, 0.0) == doctest::Approx(3.0));
  CHECK(ufgh_mixing_move(h, 2.0, 0.1, 1.0, 1.0, -1.0, 0.5, 1.0) == 2.0);
  CHECK(ufgh_mixing_move(h, 2.0, 0.1, 1.0, 1.0, -1.0, 1.5, 1.0) == 0.0);

  const ForecastMove f = ForecastMove::mean_variance(0.0, 2.0);
  const SkepticBet s{0.0, 1.0};
  const Protocol p = Protocol::general_hedge(h, 3.0);
  const auto step = ufgh_comply_step(UfghComplyState{}, 1, f, s, h, identity_growth(), 3.0, 3.0);
  CHECK(step.outcome.x == 0.0);
  CHECK(capital_update(p, 3.0, f, s, step.outcome) - 3.0 == -2.0);
  CHECK(step.state.phase.tag == PhaseTag::Mixing);
}

TEST_CASE("derandomized move") {
  CHECK(derandomized_coin_move(0.1, -0.3) == 1.0);
  CHECK(derandomized_coin_move(0.0, 0.0) == 1.0);
  CHECK(derandomized_coin_move(0.5, 0.1) == 0.0);
}

TEST_CASE("first-round strategy") {
  const Protocol proto = Protocol::coin();
  const std::vector<RoundRecord> none;
  auto r = first_round_comply();
  CHECK(r->respond({proto, 1, 1.0, none}, ForecastMove::price(0.0), {}).x == 0.0);
  CHECK(r->respond({proto, 1, 1.0, none}, ForecastMove::price(0.7), {}).x == 1.0);
  const auto x = r->respond({proto, 2, 1.0, none}, ForecastMove::price(0.4), {-1.0, 0.0});
  CHECK(x.x == 1.0);
  CHECK(capital_update(proto, 1.0, ForecastMove::price(0.4), {-1.0, 0.0}, x) <= 1.0);
}

TEST_CASE("avoid-match strategy") {
  const Protocol proto = Protocol::bounded(0.5);
  const std::vector<RoundRecord> none;
  auto r = bounded_avoid_match(0.9, 0.5);
  const auto x = r->respond({proto, 1, 0.5, none}, ForecastMove::price(0.0), {4.0, 0.0});
  CHECK(x.x == doctest::Approx(0.4 / 9.0).epsilon(1e-15));
  CHECK(4.0 * x.x <= 0.2);
  CHECK(r->respond({proto, 1, 0.5, none}, ForecastMove::price(0.5), {-2.0, 0.0}).x == 1.0);
  CHECK(r->respond({proto, 1, 0.3, none}, ForecastMove::price(1.0), {}).x == 0.5);
  CHECK_THROWS(bounded_avoid_match(0.4, 0.5));
  CHECK_THROWS(bounded_avoid_match(1.0, 0.5));
}

namespace {

std::vector<std::unique_ptr<SkepticPolicy>> coin_adversaries(RandomStream rng) {
  std::vector<std::unique_ptr<SkepticPolicy>> out;
  out.push_back(std::make_unique<ZeroSkeptic>());
  out.push_back(std::make_unique<BcSkeptic>(BcBet::Divergent));
  out.push_back(std::make_unique<BcSkeptic>(BcBet::Convergent));
  out.push_back(std::make_unique<BcSkeptic>(BcBet::Fictional));
  out.push_back(std::make_unique<RandomProportionalSkeptic>(rng.split(1)));
  out.push_back(std::make_unique<BangBangSkeptic>(0.5));
  return out;
}

}  // namespace

TEST_CASE("property: coin compliance keeps K_n <= K_0 and n0 is strict") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomStream rng(seed);
    std::vector<double> p(2000);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double u = rng.next_unit();
      p[i] = seed % 2 ? u : u / static_cast<double>(i + 1);
      if (rng.next_unit() < 0.02) p[i] = rng.next_unit() < 0.5 ? 0.0 : 1.0;
    }
    auto f = ScriptedForecaster([&p](std::int64_t n) { return ForecastMove::price(p[static_cast<std::size_t>(n - 1)]); });
    for (auto& s : coin_adversaries(rng)) {
      BcComplyReality r;
      RunOptions opts;
      opts.halt_on_skeptic_fault = true;
      const Trace t = run_game(Protocol::coin(), f, *s, r, static_cast<std::int64_t>(p.size()), opts);
      const Verdict v = strong_compliance_verdict(t);
      CHECK(v.strong_bound_ok);
      if (r.state().phase.tag != PhaseTag::Waiting) {
        CHECK(r.state().phase.k_n0 < 1.0);
      }
    }
  }
}

TEST_CASE("property: unbounded compliance keeps K_n <= K_0") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RandomStream rng(seed);
    auto f = ScriptedForecaster([rng](std::int64_t n) {
      RandomStream l = rng.split(static_cast<std::uint64_t>(n) + 100);
      const double v = l.next_unit() < 0.05 ? 0.0 : l.uniform(0, 2) * std::pow(static_cast<double>(n), l.uniform(0, 2));
      return ForecastMove::mean_variance(l.uniform(-1, 1), v);
    });
    std::vector<std::unique_ptr<SkepticPolicy>> pool;
    pool.push_back(std::make_unique<MeanBcSkeptic>());
    pool.push_back(std::make_unique<VarianceBcSkeptic>());
    pool.push_back(std::make_unique<RandomProportionalSkeptic>(rng.split(1)));
    pool.push_back(std::make_unique<BangBangSkeptic>(0.5));
    for (auto& s : pool) {
      UfgComplyReality r;
      RunOptions opts;
      opts.halt_on_skeptic_fault = true;
      const Trace t = run_game(Protocol::unbounded(), f, *s, r, 2000, opts);
      CHECK(strong_compliance_verdict(t).strong_bound_ok);
      if (r.state().phase.tag != PhaseTag::Waiting) CHECK(r.state().phase.k_n0 < 1.0);
    }
  }
}

TEST_CASE("property: general-hedge compliance keeps K_n <= K_0") {
  for (double rpow : {1.0, 1.5, 2.0}) {
    for (const Growth& g : {identity_growth(), power_growth(2.0)}) {
      const Protocol proto = Protocol::general_hedge(power_hedge(rpow));
      auto f = ScriptedForecaster([](std::int64_t n) { return ForecastMove::mean_variance(0.0, static_cast<double>(n % 5)); });
      std::vector<std::unique_ptr<SkepticPolicy>> pool;
      pool.push_back(std::make_unique<RandomProportionalSkeptic>(RandomStream(7)));
      pool.push_back(std::make_unique<BangBangSkeptic>(0.25));
      pool.push_back(std::make_unique<MeanBcSkeptic>());
      for (auto& s : pool) {
        UfghComplyReality r(g);
        RunOptions opts;
        opts.halt_on_skeptic_fault = true;
        const Trace t = run_game(proto, f, *s, r, 2000, opts);
        CHECK(strong_compliance_verdict(t).strong_bound_ok);
      }
    }
  }
}

TEST_CASE("unbounded convergent side: few nonzero moves, |S_n/n| <= 3/n") {
  auto f = ScriptedForecaster([](std::int64_t) { return ForecastMove::mean_variance(0.0, 1.0); });
  ZeroSkeptic s;
  UfgComplyReality r;
  const Trace t = run_game(Protocol::unbounded(), f, s, r, 10000);
  double sum = 0.0;
  std::int64_t moves = 0;
  for (const auto& rec : t.rounds) {
    sum += rec.outcome.x;
    moves += rec.outcome.x != 0.0;
  }
  CHECK(moves <= r.state().counters.c + 1);
  CHECK(std::fabs(sum) / 10000.0 <= 3.0 / 10000.0);
}

TEST_CASE("property: derandomized mixture capital never increases") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RandomStream rng(seed);
    std::vector<double> p(500);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = rng.next_unit() / std::sqrt(static_cast<double>(i + 1));
    auto f = ScriptedForecaster([&p](std::int64_t n) { return ForecastMove::price(p[static_cast<std::size_t>(n - 1)]); });
    RandomBoundedSkeptic s(rng.split(5), 0.5);
    auto r = derandomize_coin(std::make_unique<BcSkeptic>(BcBet::Fictional));
    const Trace t = run_game(Protocol::coin(), f, s, *r, static_cast<std::int64_t>(p.size()));
    BcSkeptic fict(BcBet::Fictional);
    const auto kf = skeptic_capital_on_path(t, fict);
    double prev = 1.0;
    for (std::size_t i = 0; i < t.rounds.size(); ++i) {
      const double mix = (t.rounds[i].capital_after + kf[i]) / 2.0;
      CHECK(mix <= prev + 1e-12);
      prev = mix;
    }
  }
}
