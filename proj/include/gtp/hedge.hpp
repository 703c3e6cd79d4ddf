#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gtp {

/// Payoff function replacing the quadratic term of the unbounded game.
///
/// Admissible hedges satisfy, for x > 0:
///   A0  h(x) = h(|x|) >= 0
///   A1  h(x)/x   nondecreasing
///   A2  h(x)/x^2 nonincreasing
///   A4  h(0) = 0
/// `quadratic_near_zero` records the stronger A3 (h(x) = x^2 on |x| <= 1),
/// which the compliance strategy does not need.
struct Hedge {
  std::string name;
  std::function<double(double)> forward;
  /// Optional closed-form inverse on [0, inf). Empty means bisection.
  std::function<double(double)> inverse;
  bool quadratic_near_zero = false;

  double operator()(double x) const { return forward(x); }
};

/// Positive nondecreasing function g used to normalize A_n.
struct Growth {
  std::string name;
  std::function<double(double)> eval;

  double operator()(double a) const { return eval(a); }
};

class HedgeInversionError : public std::runtime_error {
 public:
  HedgeInversionError(const std::string& what, double value)
      : std::runtime_error(what), value_(value) {}
  double value() const { return value_; }

 private:
  double value_;
};

/// h(x) = |x|^r with closed-form inverse y^(1/r).
Hedge power_hedge(double r);
Growth identity_growth();
/// g(a) = a^k.
Growth power_growth(double k);

/// Parses "square", "abs", "power:r=1.5".
Hedge parse_hedge(std::string_view spec);
/// Parses "identity", "square", "power:k=2".
Growth parse_growth(std::string_view spec);

/// Checks A0-A2, A4 (and the supplied inverse) on the grid
/// x = 2^(k/4), k = -40..40. Returns a description of the first failure.
std::optional<std::string> validate_hedge(const Hedge& h);
/// Positivity and monotonicity on the same grid (plus a = 0 excluded).
std::optional<std::string> validate_growth(const Growth& g);

/// h^{-1}(y) for y >= 0. Uses the supplied inverse when present, otherwise
/// brackets [0, hi] by doubling and bisects 80 times.
double hedge_inverse(const Hedge& h, double y);

}  // namespace gtp
