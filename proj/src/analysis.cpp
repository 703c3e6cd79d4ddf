#include "gtp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gtp/kernels.hpp"

namespace gtp {

EpsilonStep epsilon_sequence_step(double running_sum, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("epsilon sequence needs a > 0");
  if (!(running_sum >= 0.0)) throw std::invalid_argument("running sum must be >= 0");
  const double sum = running_sum + a;
  double eps = 1.0 / (1.0 + sum);
  // When 1 + sum rounds to a, fl(1/a) * a can land one ulp above 1.
  while (eps * a > 1.0) eps = std::nextafter(eps, 0.0);
  return {eps, sum};
}

std::vector<double> event_leaves(std::size_t horizon, const CoinEvent& event) {
  if (horizon > kMaxPricingHorizon) throw HorizonTooLarge(horizon);
  const std::size_t count = std::size_t{1} << horizon;
  std::vector<double> leaves(count);
  for (std::size_t i = 0; i < count; ++i) {
    leaves[i] = event(static_cast<std::uint32_t>(i)) ? 1.0 : 0.0;
  }
  return leaves;
}

namespace {

void check_script(std::span<const double> p) {
  if (p.size() > kMaxPricingHorizon) throw HorizonTooLarge(p.size());
  for (double pk : p) {
    if (!(pk >= 0.0 && pk <= 1.0)) throw std::invalid_argument("p-script entries must lie in [0,1]");
  }
}

}  // namespace

double upper_probability_coin(std::span<const double> p_script, const CoinEvent& event) {
  check_script(p_script);
  // Rounded upward so that upper(E) + upper(E^c) >= 1 survives floating
  // point; one unit of cash superhedges any indicator, hence the cap.
  return std::min(1.0, kernels::backward_induction_parallel(p_script, event_leaves(p_script.size(), event),
                                                            kernels::Rounding::Upward));
}

double lower_probability_coin(std::span<const double> p_script, const CoinEvent& event) {
  return 1.0 - upper_probability_coin(p_script, [&](std::uint32_t path) { return !event(path); });
}

Verdict strong_compliance_verdict(const Trace& trace, const EventProxy& event_proxy) {
  Verdict v;
  const double k0 = trace.protocol.initial_capital;
  const double slack = 1e-9 * k0;
  v.sup_capital = k0;
  for (const RoundRecord& r : trace.rounds) {
    v.sup_capital = std::max(v.sup_capital, r.capital_after);
    if (r.capital_after < -slack && v.skeptic_duty_ok) {
      v.skeptic_duty_ok = false;
      v.notes.push_back("Skeptic capital negative at round " + std::to_string(r.n));
    }
    if (r.capital_after > k0 + slack && v.strong_bound_ok) {
      v.strong_bound_ok = false;
      std::ostringstream os;
      os.precision(17);
      os << "capital " << r.capital_after << " exceeds K_0 at round " << r.n;
      v.notes.push_back(os.str());
    }
  }
  if (event_proxy) v.event_proxy_ok = event_proxy(trace);
  return v;
}

bool term_bound_check(std::span<const double> y, std::span<const double> g, double d,
                      std::size_t tail_start) {
  if (y.size() != g.size()) throw std::invalid_argument("term_bound_check: length mismatch");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] > 0.0)) throw std::invalid_argument("term_bound_check: g must be positive");
    if (i > 0 && g[i] < g[i - 1]) throw std::invalid_argument("term_bound_check: g must be nondecreasing");
  }
  const double bound = std::fabs(d) + 1.0;
  for (std::size_t i = tail_start == 0 ? 0 : tail_start - 1; i < y.size(); ++i) {
    if (std::fabs(y[i] / g[i]) > bound) return false;
  }
  return true;
}

}  // namespace gtp
