#include "gtp/hedge.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace gtp {
namespace {

constexpr double kGridTol = 1e-12;

double parse_named_param(std::string_view spec, std::string_view prefix,
                         std::string_view key) {
  // spec looks like "<prefix>:<key>=<value>"
  std::string_view rest = spec.substr(prefix.size());
  if (rest.empty() || rest.front() != ':') {
    throw std::invalid_argument("missing parameter in '" + std::string(spec) + "'");
  }
  rest.remove_prefix(1);
  if (rest.substr(0, key.size()) != key || rest.size() <= key.size() ||
      rest[key.size()] != '=') {
    throw std::invalid_argument("expected '" + std::string(key) + "=' in '" +
                                std::string(spec) + "'");
  }
  rest.remove_prefix(key.size() + 1);
  std::string value(rest);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) {
    throw std::invalid_argument("bad number '" + value + "' in '" + std::string(spec) + "'");
  }
  return out;
}

std::string fmt_num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

Hedge power_hedge(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("power hedge exponent must be positive");
  }
  Hedge h;
  h.name = "power:r=" + fmt_num(r);
  h.forward = [r](double x) { return std::pow(std::fabs(x), r); };
  h.inverse = [r](double y) { return std::pow(y, 1.0 / r); };
  h.quadratic_near_zero = (r == 2.0);
  return h;
}

Growth identity_growth() { return Growth{"identity", [](double a) { return a; }}; }

Growth power_growth(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw std::invalid_argument("power growth exponent must be positive");
  }
  return Growth{"power:k=" + fmt_num(k), [k](double a) { return std::pow(a, k); }};
}

Hedge parse_hedge(std::string_view spec) {
  if (spec == "square") {
    Hedge h = power_hedge(2.0);
    h.name = "square";
    return h;
  }
  if (spec == "abs") {
    Hedge h = power_hedge(1.0);
    h.name = "abs";
    return h;
  }
  if (spec.substr(0, 5) == "power") return power_hedge(parse_named_param(spec, "power", "r"));
  throw std::invalid_argument("unknown hedge '" + std::string(spec) + "'");
}

Growth parse_growth(std::string_view spec) {
  if (spec == "identity") return identity_growth();
  if (spec == "square") {
    Growth g = power_growth(2.0);
    g.name = "square";
    return g;
  }
  if (spec.substr(0, 5) == "power") return power_growth(parse_named_param(spec, "power", "k"));
  throw std::invalid_argument("unknown growth '" + std::string(spec) + "'");
}

std::optional<std::string> validate_hedge(const Hedge& h) {
  if (!h.forward) return "hedge has no forward evaluator";
  if (h(0.0) != 0.0) return "A4 fails: h(0) = " + fmt_num(h(0.0));

  double prev_lin = 0.0;
  double prev_quad = 0.0;
  for (int k = -40; k <= 40; ++k) {
    const double x = std::exp2(k / 4.0);
    const double hx = h(x);
    if (!std::isfinite(hx)) return "h(" + fmt_num(x) + ") is not finite";
    if (hx < 0.0) return "A0 fails: h(" + fmt_num(x) + ") < 0";
    if (h(-x) != hx) return "A0 fails: h(-x) != h(x) at x = " + fmt_num(x);
    const double lin = hx / x;
    const double quad = hx / (x * x);
    if (k > -40) {
      if (lin < prev_lin * (1.0 - kGridTol)) {
        return "A1 fails: h(x)/x decreases at x = " + fmt_num(x);
      }
      if (quad > prev_quad * (1.0 + kGridTol)) {
        return "A2 fails: h(x)/x^2 increases at x = " + fmt_num(x);
      }
    }
    prev_lin = lin;
    prev_quad = quad;
    if (h.inverse) {
      const double back = h(h.inverse(hx));
      if (std::fabs(back - hx) > 1e-9 * std::max(1.0, std::fabs(hx))) {
        return "inverse mismatch at y = " + fmt_num(hx);
      }
    }
  }
  return std::nullopt;
}

std::optional<std::string> validate_growth(const Growth& g) {
  if (!g.eval) return "growth has no evaluator";
  double prev = 0.0;
  for (int k = -40; k <= 40; ++k) {
    const double a = std::exp2(k / 4.0);
    const double ga = g(a);
    if (!(ga > 0.0) || !std::isfinite(ga)) return "g(" + fmt_num(a) + ") is not positive";
    if (ga < prev) return "g decreases at a = " + fmt_num(a);
    prev = ga;
  }
  return std::nullopt;
}

double hedge_inverse(const Hedge& h, double y) {
  if (!(y >= 0.0) || !std::isfinite(y)) {
    throw HedgeInversionError("hedge inverse needs finite y >= 0", y);
  }
  if (y == 0.0) return 0.0;
  if (h.inverse) return h.inverse(y);

  double hi = 1.0;
  int doublings = 0;
  while (h(hi) < y) {
    hi *= 2.0;
    if (++doublings > 1100 || !std::isfinite(hi)) {
      throw HedgeInversionError("hedge bracket not found: h is bounded below y", y);
    }
  }
  double lo = 0.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (h(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double r = (std::fabs(h(lo) - y) < std::fabs(h(hi) - y)) ? lo : hi;
  if (std::fabs(h(r) - y) > 1e-9 * std::max(1.0, y)) {
    throw HedgeInversionError("hedge bisection did not converge", y);
  }
  return r;
}

}  // namespace gtp
