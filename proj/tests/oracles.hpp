#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

namespace gtp::oracle {

/// Price of a leaf-indicator by direct enumeration: sum over leaves in the
/// event of the path probability prod p_k^{x_k} (1 - p_k)^{1 - x_k}.
inline double leaf_enumeration_price(std::span<const double> p, const std::vector<bool>& in_event) {
  double total = 0.0;
  for (std::uint32_t leaf = 0; leaf < in_event.size(); ++leaf) {
    if (!in_event[leaf]) continue;
    double w = 1.0;
    for (std::size_t k = 0; k < p.size(); ++k) w *= (leaf >> k) & 1U ? p[k] : 1.0 - p[k];
    total += w;
  }
  return total;
}

/// H_n = 1 + 1/2 + ... + 1/n.
inline double harmonic(std::int64_t n) {
  double h = 0.0;
  for (std::int64_t k = n; k >= 1; --k) h += 1.0 / static_cast<double>(k);
  return h;
}

/// Rounds n at which floor(sum_{k<=n} inc(k)) increases, with the double
/// increments summed exactly in 2^-100 fixed point. Increments must lie in
/// [0, 2^20) and be multiples of 2^-100.
inline std::set<std::int64_t> exact_crossing_rounds(std::int64_t horizon,
                                                    const std::function<double(std::int64_t)>& inc) {
  constexpr int kFrac = 100;
  std::set<std::int64_t> out;
  __int128 sum = 0;
  for (std::int64_t n = 1; n <= horizon; ++n) {
    const double x = inc(n);
    const double scaled = std::ldexp(x, kFrac);
    if (!(x >= 0.0 && x < 1048576.0) || std::trunc(scaled) != scaled) {
      throw std::domain_error("increment not representable in fixed point");
    }
    const __int128 before = sum >> kFrac;
    sum += static_cast<__int128>(scaled);
    if ((sum >> kFrac) != before) out.insert(n);
  }
  return out;
}

}  // namespace gtp::oracle
