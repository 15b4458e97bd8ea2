#pragma once

// Double-exponential (tanh-sinh) quadrature on finite intervals.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <type_traits>
#include <vector>

namespace bianchi::quad {

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  bool converged = false;
  int level = 0;
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

struct NodeLevel {
  std::vector<double> abscissa;  // in (-1, 1), positive half only
  std::vector<double> weight;
};

inline constexpr int kMaxLevel = 12;
inline constexpr double kTMax = 3.2;

// Level 0 holds the integer nodes k = 1, 2, 3; level l > 0 holds the odd
// multiples of 2^-l. The centre node x = 0 (weight pi/2) is implicit.
inline const std::array<NodeLevel, kMaxLevel + 1>& node_table() {
  static const std::array<NodeLevel, kMaxLevel + 1> table = [] {
    std::array<NodeLevel, kMaxLevel + 1> out;
    const double half_pi = std::numbers::pi / 2.0;
    for (int level = 0; level <= kMaxLevel; ++level) {
      const double h = std::ldexp(1.0, -level);
      const int step = level == 0 ? 1 : 2;
      for (int k = 1;; k += step) {
        const double t = k * h;
        if (t > kTMax) break;
        const double s = half_pi * std::sinh(t);
        const double c = std::cosh(s);
        out[level].abscissa.push_back(std::tanh(s));
        out[level].weight.push_back(half_pi * std::cosh(t) / (c * c));
      }
    }
    return out;
  }();
  return table;
}

}  // namespace detail

/// Integrates f over [a, b], halving the step until two successive levels
/// agree to `tol` relative to the integral of |f|.
template <class F>
auto tanh_sinh(F&& f, double a, double b, double tol = 1e-14,
               int max_level = detail::kMaxLevel)
    -> Result<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  Result<T> result;
  const auto& table = detail::node_table();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  if (half == 0.0) {
    result.converged = true;
    return result;
  }

  T sum = f(mid) * (std::numbers::pi / 2.0);
  double abs_sum = detail::magnitude(sum);
  auto accumulate = [&](const detail::NodeLevel& nodes) {
    for (std::size_t i = 0; i < nodes.abscissa.size(); ++i) {
      const double dx = half * nodes.abscissa[i];
      const T fl = f(mid - dx);
      const T fr = f(mid + dx);
      sum += (fl + fr) * nodes.weight[i];
      abs_sum += (detail::magnitude(fl) + detail::magnitude(fr)) * nodes.weight[i];
    }
  };

  accumulate(table[0]);
  T previous = sum * half;
  max_level = std::min(max_level, detail::kMaxLevel);
  for (int level = 1; level <= max_level; ++level) {
    accumulate(table[level]);
    const double h = std::ldexp(1.0, -level);
    const T current = sum * (h * half);
    const double scale = abs_sum * h * std::abs(half);
    const double diff = detail::magnitude(current - previous);
    result.value = current;
    result.error = diff;
    result.level = level;
    // Convergence is quadratic in the level, so a level-to-level difference
    // below sqrt(tol) already implies the current level is at tol.
    if (level >= 3 && (diff <= tol * scale || diff * diff <= tol * scale * scale * 1e-2)) {
      result.converged = true;
      result.error = std::max(diff * diff / std::max(scale, 1e-300), tol * scale);
      return result;
    }
    previous = current;
  }
  return result;
}

}  // namespace bianchi::quad
