#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace bianchi {

using cplx = std::complex<double>;

/// Principal branch of log Gamma (branch cut on the negative real axis),
/// satisfying log_gamma(z + 1) = log_gamma(z) + log(z).
cplx log_gamma(cplx z);
cplx gamma(cplx z);
double log_abs_gamma(cplx z);

/// Gamma_C(s) = 2 (2 pi)^{-s} Gamma(s).
cplx gamma_c(cplx s);
double log_abs_gamma_c(cplx s);

/// (1 + |y|)^{x - 1/2} e^{-pi |y| / 2}
double stirling_envelope(double x, double y);

/// A real number stored as mantissa * exp(log_scale), so that Bessel values
/// far below the double range keep their sign and magnitude.
struct ScaledReal {
  double mantissa = 0.0;
  double log_scale = 0.0;

  double value() const;
  double log_abs() const;
};

/// cosh(pi t / 2) K_{it}(u) without the public window check. Uses the
/// ascending series for small arguments and a deformed-contour double
/// exponential quadrature otherwise.
ScaledReal bessel_k_scaled_log(double t, double u);

/// cosh(pi t / 2) K_{it}(u) for u in [1e-6, 1e4] and 0 <= t <= 1e3.
double bessel_k_scaled(double t, double u);

/// cosh(pi t / 2) K_{it}(u) by direct quadrature of the cosine integral
/// along the real axis. Only trustworthy for small t, where the integrand
/// does not cancel; kept as an independent check.
double bessel_k_scaled_direct(double t, double u);

enum class Regime { oscillatory, transition, exponential_decay };

std::string_view to_string(Regime regime);

struct BesselRegime {
  Regime label = Regime::transition;
  double t = 0.0;
  double u = 0.0;
  double c_transition = 1.0;
};

/// Three-way split at |u - t| <= C t^{1/3}; ties go to the transition band.
BesselRegime balogh_classify(double t, double u, double c_transition = 1.0);

/// Envelope value for the regime; `decay_constant` is the c in the
/// exponential case.
double balogh_envelope(const BesselRegime& regime, double decay_constant = 2.0 / 3.0);

/// (1 / Gamma(lambda + 1)) prod_{+-,+-} Gamma((1 + lambda +- mu +- nu) / 2)
cplx mellin_kk_closed(cplx lambda, cplx mu, cplx nu);

struct MellinOptions {
  double tolerance = 1e-13;
  int max_level = 10;
};

/// int_0^oo y^lambda K_{i t1}(y) K_{i t2}(y) dy, computed in the log variable
/// with scaled Bessel values.
cplx mellin_kk_quadrature(cplx lambda, double t1, double t2,
                          const MellinOptions& options = {});

/// The factor by which the quadrature exceeds the closed-form display:
/// 2^{lambda - 2}. Used wherever the Mellin evaluation is chained.
cplx mellin_normalization(cplx lambda);

}  // namespace bianchi
