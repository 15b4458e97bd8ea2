#include "bianchi/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bianchi/error.hpp"
#include "bianchi/quadrature.hpp"

namespace bianchi {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfLog2Pi = 0.91893853320467274178;

// B_{2k} / (2k (2k - 1)) for k = 1..9
constexpr double kStirlingCoeff[] = {
    1.0 / 12.0,          -1.0 / 360.0,          1.0 / 1260.0,
    -1.0 / 1680.0,       1.0 / 1188.0,          -691.0 / 360360.0,
    1.0 / 156.0,         -3617.0 / 122400.0,    43867.0 / 244188.0,
};

cplx stirling_log_gamma(cplx w) {
  cplx result = (w - 0.5) * std::log(w) - w + kHalfLog2Pi;
  const cplx inv = 1.0 / w;
  const cplx inv2 = inv * inv;
  cplx power = inv;
  for (double c : kStirlingCoeff) {
    result += c * power;
    power *= inv2;
  }
  return result;
}

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

}  // namespace

cplx log_gamma(cplx z) {
  if (is_nonpositive_integer(z)) {
    fail(ErrorCode::pole, "log_gamma: pole at nonpositive integer " + std::to_string(z.real()));
  }
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    fail(ErrorCode::invalid_argument, "log_gamma: non-finite argument");
  }
  constexpr double kMinModulus = 15.0;
  int shift = 0;
  if (z.real() < 0.0) shift = static_cast<int>(std::ceil(-z.real()));
  if (std::abs(z.imag()) < kMinModulus && z.real() + shift < kMinModulus) {
    shift = static_cast<int>(std::ceil(kMinModulus - z.real()));
  }
  // Moduli are multiplied before taking one logarithm, which loses less than
  // summing logarithms; arguments are summed to stay on the right branch.
  double log_modulus = 0.0;
  double modulus = 1.0;
  double argument = 0.0;
  for (int k = 0; k < shift; ++k) {
    const cplx w = z + static_cast<double>(k);
    modulus *= std::abs(w);
    argument += std::arg(w);
    if (modulus > 1e250 || modulus < 1e-250) {
      log_modulus += std::log(modulus);
      modulus = 1.0;
    }
  }
  log_modulus += std::log(modulus);
  return stirling_log_gamma(z + static_cast<double>(shift)) - cplx(log_modulus, argument);
}

cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

double log_abs_gamma(cplx z) { return log_gamma(z).real(); }

cplx gamma_c(cplx s) { return 2.0 * std::exp(-s * std::log(2.0 * kPi) + log_gamma(s)); }

double log_abs_gamma_c(cplx s) {
  return std::log(2.0) - s.real() * std::log(2.0 * kPi) + log_abs_gamma(s);
}

double stirling_envelope(double x, double y) {
  const double ay = std::abs(y);
  return std::pow(1.0 + ay, x - 0.5) * std::exp(-kPi * ay / 2.0);
}

double ScaledReal::value() const {
  if (mantissa == 0.0) return 0.0;
  return mantissa * std::exp(log_scale);
}

double ScaledReal::log_abs() const {
  if (mantissa == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::abs(mantissa)) + log_scale;
}

namespace {

constexpr double kBesselTol = 1e-15;
constexpr int kBesselMaxLevel = 9;
// Relative cutoff of the exponentially decaying tails.
constexpr double kTailLog = 60.0;

// log((1 + e^{-pi t}) / 2): converts e^{pi t / 2} K to cosh(pi t / 2) K.
double cosh_correction(double t) { return std::log1p(std::exp(-kPi * t)) - std::log(2.0); }

template <class F>
double integrate_panels(F&& f, double a, double b, int panels) {
  panels = std::max(panels, 1);
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double hi = (p + 1 == panels) ? b : lo + width;
    auto r = quad::tanh_sinh(f, lo, hi, kBesselTol, kBesselMaxLevel);
    if (!r.converged && r.error > 1e-12 * std::max(1.0, std::abs(r.value))) {
      fail(ErrorCode::nonconvergence, "bessel_k: panel quadrature did not converge");
    }
    total += r.value;
  }
  return total;
}

// Real-axis tail  int_{v0}^{oo} exp(-u cosh v + shift) cos(t v) dv.
double real_axis_tail(double t, double u, double v0, double shift) {
  // exponent(v) = shift - u cosh v, decreasing for v > 0
  const double target = std::acosh(std::max(1.0, (shift + kTailLog) / u));
  const double v1 = std::max(target, v0);
  if (v1 <= v0) return 0.0;
  const double freq = std::max(t, 1.0);
  const int panels = static_cast<int>(std::ceil((v1 - v0) * freq / (2.0 * kPi))) +
                     static_cast<int>(std::ceil((v1 - v0) / 2.0));
  auto f = [&](double v) { return std::exp(shift - u * std::cosh(v)) * std::cos(t * v); };
  return integrate_panels(f, v0, v1, panels);
}

// Contour for t >= u: iπ/2 -> a + iπ/2 (horizontal), then 45 degrees down to the
// real axis, then the real axis. Returns e^{pi t/2} K_{it}(u).
double contour_oscillatory(double t, double u) {
  const double a = std::acosh(t / u);
  const double sinh_a = std::sqrt((t - u) * (t + u)) / u;
  double total = 0.0;

  if (a > 0.0) {
    const double freq = t - u;
    const int panels = static_cast<int>(std::ceil(freq * a / (2.0 * kPi))) + 1;
    auto f = [&](double v) { return std::cos(t * v - u * std::sinh(v)); };
    total += integrate_panels(f, 0.0, a, panels);
  }

  // Diagonal w = a + s + i(pi/2 - s); integrand relative to e^{-t pi/2} and
  // with the saddle phase c = t a - u sinh a factored out.
  const double c = t * a - u * sinh_a;
  auto diag = [&](double s) {
    const double ch = std::cosh(a + s);
    const double sh = std::sinh(a + s);
    const double mag = std::exp(t * s - u * ch * std::sin(s));
    const double phase = t * s - u * (sh * std::cos(s) - sinh_a);
    // Re[e^{ic} e^{i phase} (1 - i)]
    const double ang = c + phase;
    return mag * (std::cos(ang) + std::sin(ang));
  };
  {
    const double len = kPi / 2.0;
    const int panels = 1 + static_cast<int>(std::ceil(std::cbrt(t) / 4.0));
    total += integrate_panels(diag, 0.0, len, panels);
  }
  total += real_axis_tail(t, u, a + kPi / 2.0, t * kPi / 2.0);
  return total;
}

// Contour for u > t: saddle at i theta0 with sin theta0 = t / u; 45 degrees
// down to the real axis, then the real axis. Returns K / exp(Re phi_s).
double contour_decay(double t, double u, double theta0) {
  const double cos0 = std::cos(theta0);
  double total = 0.0;
  if (theta0 > 0.0) {
    auto diag = [&](double p) {
      const double re = u * (cos0 - std::cosh(p) * std::cos(theta0 - p)) + t * p;
      const double im = t * p - u * std::sinh(p) * std::sin(theta0 - p);
      return std::exp(re) * (std::cos(im) + std::sin(im));
    };
    const int panels = 1 + static_cast<int>(std::ceil(t * theta0 / (2.0 * kPi)));
    total += integrate_panels(diag, 0.0, theta0, panels);
  }
  total += real_axis_tail(t, u, theta0, u * cos0 + t * theta0);
  return total;
}

// Ascending series: cosh(pi t/2) K_{it}(u) = -pi Im I_{it}(u) / (2 sinh(pi t/2)).
ScaledReal series_small_argument(double t, double u) {
  const cplx it(0.0, t);
  const double x = u / 2.0;
  const double x2 = x * x;
  cplx term = 1.0;
  cplx sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= x2 / (static_cast<double>(k) * (static_cast<double>(k) + it));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  // I_{it}(u) = exp(it log x - logGamma(1 + it)) * sum
  const cplx lg = log_gamma(1.0 + it);
  const double log_mag = -lg.real();
  const double phase = t * std::log(x) - lg.imag();
  const cplx rotated = std::polar(1.0, phase) * sum;
  // 1 / (2 sinh(pi t / 2)) = e^{-pi t/2} / (1 - e^{-pi t})
  ScaledReal out;
  out.mantissa = -kPi * rotated.imag() / (-std::expm1(-kPi * t));
  out.log_scale = log_mag - kPi * t / 2.0;
  return out;
}

}  // namespace

ScaledReal bessel_k_scaled_log(double t, double u) {
  if (!(u > 0.0) || !std::isfinite(u) || !std::isfinite(t)) {
    fail(ErrorCode::invalid_argument, "bessel_k: requires finite t and u > 0");
  }
  t = std::abs(t);
  if (u <= 2.0 && t >= 0.05) return series_small_argument(t, u);

  ScaledReal out;
  if (t >= u) {
    out.mantissa = contour_oscillatory(t, u);
    out.log_scale = cosh_correction(t);
  } else {
    const double theta0 = std::asin(t / u);
    const double re_saddle = -u * std::cos(theta0) - t * theta0;
    out.mantissa = contour_decay(t, u, theta0);
    out.log_scale = re_saddle + kPi * t / 2.0 + cosh_correction(t);
  }
  return out;
}

double bessel_k_scaled(double t, double u) {
  t = std::abs(t);
  if (!(u >= 1e-6 && u <= 1e4) || !(t <= 1e3)) {
    fail(ErrorCode::window, "bessel_k_scaled: (t, u) outside t <= 1e3, u in [1e-6, 1e4]");
  }
  return bessel_k_scaled_log(t, u).value();
}

double bessel_k_scaled_direct(double t, double u) {
  const double v_end = std::acosh(std::max(1.0, (u + kTailLog) / u));
  auto f = [&](double v) { return std::exp(u - u * std::cosh(v)) * std::cos(t * v); };
  const int panels = 1 + static_cast<int>(std::ceil(v_end * std::max(t, 1.0) / (2.0 * kPi))) +
                     static_cast<int>(std::ceil(v_end / 2.0));
  double total = 0.0;
  const double width = v_end / panels;
  for (int p = 0; p < panels; ++p) {
    total += quad::tanh_sinh(f, p * width, (p + 1) * width, 1e-15, 10).value;
  }
  return total * std::exp(-u) * std::cosh(kPi * t / 2.0);
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::oscillatory: return "oscillatory";
    case Regime::transition: return "transition";
    case Regime::exponential_decay: return "exponential-decay";
  }
  return "unknown";
}

BesselRegime balogh_classify(double t, double u, double c_transition) {
  if (!(t > 0.0) || !(u > 0.0) || !(c_transition > 0.0)) {
    fail(ErrorCode::invalid_argument, "balogh_classify: requires t, u, C > 0");
  }
  const double band = c_transition * std::cbrt(t);
  BesselRegime r{Regime::transition, t, u, c_transition};
  if (u < t - band) r.label = Regime::oscillatory;
  else if (u > t + band) r.label = Regime::exponential_decay;
  return r;
}

double balogh_envelope(const BesselRegime& r, double decay_constant) {
  switch (r.label) {
    case Regime::oscillatory:
      return std::pow(r.t, -0.25) * std::pow(r.t - r.u, -0.25);
    case Regime::transition:
      return std::pow(r.t, -1.0 / 3.0);
    case Regime::exponential_decay: {
      const double ratio = std::pow(r.u / r.t, 1.5);
      const double gap = std::pow((r.u - r.t) / std::cbrt(r.t), 1.5);
      return std::pow(r.u, -0.25) * std::pow(r.u - r.t, -0.25) *
             std::exp(-decay_constant * ratio * gap);
    }
  }
  return 0.0;
}

cplx mellin_kk_closed(cplx lambda, cplx mu, cplx nu) {
  cplx log_value = -log_gamma(lambda + 1.0);
  for (double s1 : {1.0, -1.0}) {
    for (double s2 : {1.0, -1.0}) {
      const cplx arg = (1.0 + lambda + s1 * mu + s2 * nu) / 2.0;
      if (arg.real() <= 0.0 && is_nonpositive_integer(arg)) {
        fail(ErrorCode::pole, "mellin_kk_closed: Gamma pole");
      }
      log_value += log_gamma(arg);
    }
  }
  return std::exp(log_value);
}

cplx mellin_normalization(cplx lambda) { return std::exp((lambda - 2.0) * std::log(2.0)); }

cplx mellin_kk_quadrature(cplx lambda, double t1, double t2, const MellinOptions& options) {
  if (!(lambda.real() > -1.0)) {
    fail(ErrorCode::invalid_argument, "mellin_kk_quadrature: requires Re(lambda) > -1");
  }
  t1 = std::abs(t1);
  t2 = std::abs(t2);
  const double sigma = lambda.real() + 1.0;
  // In x = log y the integrand is e^{(lambda + 1) x} S1 S2 with S the scaled
  // Bessel values; the left end decays like e^{sigma x}.
  const double x_lo = std::log(1e-19) / sigma;
  double y_hi = std::max(t1, t2) + 20.0;
  auto log_mag = [&](double y) {
    return sigma * std::log(y) + bessel_k_scaled_log(t1, y).log_abs() +
           bessel_k_scaled_log(t2, y).log_abs();
  };
  while (log_mag(y_hi) > -45.0 + std::log(std::max(1.0, y_hi))) y_hi *= 1.25;
  const double x_hi = std::log(y_hi);

  auto integrand = [&](double x) -> cplx {
    const double y = std::exp(x);
    const ScaledReal k1 = bessel_k_scaled_log(t1, y);
    const ScaledReal k2 = bessel_k_scaled_log(t2, y);
    if (k1.mantissa == 0.0 || k2.mantissa == 0.0) return 0.0;
    const double log_k = k1.log_scale + k2.log_scale;
    return std::exp((lambda + 1.0) * x + log_k) * (k1.mantissa * k2.mantissa);
  };
  const double freq = t1 + t2 + std::abs(lambda.imag()) + 1.0;
  const int panels = static_cast<int>(std::ceil((x_hi - x_lo) * freq / (2.0 * kPi)));
  const double width = (x_hi - x_lo) / panels;
  cplx total = 0.0;
  for (int p = 0; p < panels; ++p) {
    auto r = quad::tanh_sinh(integrand, x_lo + p * width, x_lo + (p + 1) * width,
                             options.tolerance, options.max_level);
    if (!r.converged && r.error > 1e-11) {
      fail(ErrorCode::nonconvergence, "mellin_kk_quadrature: panel did not converge");
    }
    total += r.value;
  }
  // undo the cosh(pi t / 2) scaling
  return total / (std::cosh(kPi * t1 / 2.0) * std::cosh(kPi * t2 / 2.0));
}

}  // namespace bianchi
