#pragma once

// Archimedean part of the Watson-Ichino triple product formula and the
// Gamma-factor products that complete the L-functions in the bounds.

#include <array>
#include <complex>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "bianchi/specfun.hpp"

namespace bianchi {

struct TripleSpectrum {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;

  /// Throws ErrorCode::window unless every parameter is finite with |t| <= 200.
  void validate() const;
};

/// |Gamma(1 + it)|^{-1} y K_{it}(4 pi y), as mantissa and log scale.
ScaledReal whittaker_value_log(double t, double y);

/// Same value as a double. Requires y in [1e-4, 1e2] and |t| <= 100.
double whittaker_value(double t, double y);

/// int_0^oo W(t1, y) W(t2, y) y^{-1 + i t3} dy / y
std::complex<double> t_integral_quadrature(const TripleSpectrum& spec,
                                           const MellinOptions& options = {});

/// Gamma((1+it3+it1+it2)/2) Gamma((1+it3+it1-it2)/2) Gamma((1+it3-it1+it2)/2)
/// Gamma((1+it3-it1-it2)/2) / (|Gamma(1+it1) Gamma(1+it2)| Gamma(1+it3))
std::complex<double> t_integral_closed(const TripleSpectrum& spec);

/// The closed form at t1 = t2 = t, t3 = 0, written out separately:
/// Gamma(1/2 + it) Gamma(1/2)^2 Gamma(1/2 - it) / |Gamma(1 + it)|^2.
std::complex<double> t_integral_degenerate(double t);

struct TCalibration {
  std::vector<TripleSpectrum> grid;
  /// |quadrature|^2 / |closed|^2 at each grid point
  std::vector<double> ratios;
  double ratio_mean = 0.0;
  /// max |ratio - mean| / mean
  double ratio_spread = 0.0;
  double measured_constant = 0.0;
  /// The same spread for the complex ratio quadrature / closed, whose
  /// phase turns with t3.
  double complex_ratio_spread = 0.0;
};

/// {0, 2.5, 5}^3
std::vector<TripleSpectrum> default_calibration_grid();

TCalibration calibrate_t_integral(const std::vector<TripleSpectrum>& grid, int threads = 1);

/// Calibration over the default grid, computed on first use.
const TCalibration& archimedean_calibration();

/// A product of Gamma_C(s_k) over the listed shifts.
struct GammaFactorProduct {
  std::vector<std::complex<double>> shifts;

  std::complex<double> evaluate() const;
  double log_abs() const;
  std::size_t size() const { return shifts.size(); }
};

enum class RankinKind { cusp_cusp_eis, eis_eis_cusp, sym2_cusp };

std::string_view to_string(RankinKind kind);
/// Throws ErrorCode::invalid_argument for an unknown name.
RankinKind rankin_kind_from_string(std::string_view name);

struct RankinParams {
  /// cusp-cusp-eis: (t, t_f, t_g)
  /// eis-eis-cusp:  (t, tau, t_g)
  /// sym2-cusp:     (t_j, t_f, unused)
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

GammaFactorProduct rankin_gamma_assembly(RankinKind kind, const RankinParams& params);

enum class FinitePartPolicy { supplied_value, convexity_envelope, glh_envelope };

std::string_view to_string(FinitePartPolicy policy);
FinitePartPolicy finite_part_policy_from_string(std::string_view name);

struct FiniteValues {
  /// L(1/2, pi1 x pi2 x pi3)
  std::optional<double> triple_l;
  /// L(1, sym^2 pi_i)
  std::optional<std::array<double, 3>> sym2_l;
  /// exponent of the analytic conductor under the GLH envelope
  double delta = 0.01;
};

struct CompletedRatio {
  GammaFactorProduct numerator_gammas;
  GammaFactorProduct denominator_gammas;
  FinitePartPolicy finite_part_policy = FinitePartPolicy::supplied_value;
  FiniteValues finite;
};

/// Numerator Gamma_C((1 +- it1 +- it2 +- it3)/2) over all eight signs,
/// denominator Gamma_C(1 +- it_v) for v = 1, 2, 3.
CompletedRatio watson_completed_ratio(const TripleSpectrum& spec, FinitePartPolicy policy,
                                      const FiniteValues& finite = {});

/// prod over the numerator shifts of (1 + |Im s|)^2
double analytic_conductor(const GammaFactorProduct& numerator);

struct WatsonOptions {
  double absolute_constant = 1.0;
  /// defaults to archimedean_calibration().measured_constant
  std::optional<double> measured_constant;
};

/// log of (C / 8 pi) * kappa * |numerator| / |denominator| * finite part,
/// where the finite part is L(1/2) / prod L(1, sym^2) for supplied values,
/// conductor^{1/4} under convexity and conductor^delta under GLH.
double watson_log_ratio(const TripleSpectrum& spec, const CompletedRatio& ratio,
                        const WatsonOptions& options = {});

double watson_ratio(const TripleSpectrum& spec, const CompletedRatio& ratio,
                    const WatsonOptions& options = {});

/// Half the sum of the log Watson ratios for (t_k, t_g, t_j) and
/// (t_j, t_f, t_f), the two triple products whose product is bounded by
/// exp(-(pi/2) Q1).
double cusp_pair_log_ratio(double t_j, double t_f, double t_g, double t_k,
                           FinitePartPolicy policy, const FiniteValues& finite = {},
                           const WatsonOptions& options = {});

}  // namespace bianchi
