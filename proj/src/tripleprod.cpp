#include "bianchi/tripleprod.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bianchi/error.hpp"
#include "bianchi/parallel.hpp"

namespace bianchi {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

double log_cosh_half_pi(double t) {
  const double a = kPi * std::abs(t) / 2.0;
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

void check_gamma_argument(cplx z, const char* where) {
  if (z.real() <= 0.0 && z.imag() == 0.0 && z.real() == std::round(z.real())) {
    fail(ErrorCode::pole, std::string(where) + ": Gamma pole at " + std::to_string(z.real()));
  }
}

std::array<cplx, 4> closed_numerator_arguments(const TripleSpectrum& s) {
  return {(1.0 + I * (s.t3 + s.t1 + s.t2)) / 2.0, (1.0 + I * (s.t3 + s.t1 - s.t2)) / 2.0,
          (1.0 + I * (s.t3 - s.t1 + s.t2)) / 2.0, (1.0 + I * (s.t3 - s.t1 - s.t2)) / 2.0};
}

}  // namespace

void TripleSpectrum::validate() const {
  for (double t : {t1, t2, t3}) {
    if (!std::isfinite(t) || std::abs(t) > 200.0) {
      fail(ErrorCode::window, "triple spectrum: parameters must be finite with |t| <= 200");
    }
  }
}

ScaledReal whittaker_value_log(double t, double y) {
  if (!(y >= 1e-4 && y <= 1e2) || !(std::abs(t) <= 100.0)) {
    fail(ErrorCode::window, "whittaker_value: requires y in [1e-4, 1e2] and |t| <= 100");
  }
  ScaledReal k = bessel_k_scaled_log(t, 4.0 * kPi * y);
  k.log_scale += std::log(y) - log_cosh_half_pi(t) - log_abs_gamma(cplx(1.0, t));
  return k;
}

double whittaker_value(double t, double y) { return whittaker_value_log(t, y).value(); }

cplx t_integral_quadrature(const TripleSpectrum& spec, const MellinOptions& options) {
  spec.validate();
  if (std::abs(spec.t1) > 100.0 || std::abs(spec.t2) > 100.0) {
    fail(ErrorCode::window, "t_integral_quadrature: |t1|, |t2| must be <= 100");
  }
  // With u = 4 pi y the integrand becomes u^{i t3} K K du, up to the
  // Gamma moduli and a power of 4 pi.
  const cplx mellin = mellin_kk_quadrature(I * spec.t3, spec.t1, spec.t2, options);
  const double log_gammas = log_abs_gamma(cplx(1.0, spec.t1)) + log_abs_gamma(cplx(1.0, spec.t2));
  return std::exp(-(1.0 + I * spec.t3) * std::log(4.0 * kPi) - log_gammas) * mellin;
}

cplx t_integral_closed(const TripleSpectrum& spec) {
  spec.validate();
  cplx log_value = -log_gamma(cplx(1.0, spec.t3));
  for (const cplx z : closed_numerator_arguments(spec)) {
    check_gamma_argument(z, "t_integral_closed");
    log_value += log_gamma(z);
  }
  log_value -= log_abs_gamma(cplx(1.0, spec.t1)) + log_abs_gamma(cplx(1.0, spec.t2));
  return std::exp(log_value);
}

cplx t_integral_degenerate(double t) {
  TripleSpectrum{t, t, 0.0}.validate();
  const cplx g_plus = gamma(cplx(0.5, t));
  const cplx g_minus = gamma(cplx(0.5, -t));
  const double g1 = std::abs(gamma(cplx(1.0, t)));
  return g_plus * kPi * g_minus / (g1 * g1);
}

std::vector<TripleSpectrum> default_calibration_grid() {
  std::vector<TripleSpectrum> grid;
  const double values[] = {0.0, 2.5, 5.0};
  for (double t1 : values) {
    for (double t2 : values) {
      for (double t3 : values) grid.push_back({t1, t2, t3});
    }
  }
  return grid;
}

TCalibration calibrate_t_integral(const std::vector<TripleSpectrum>& grid, int threads) {
  if (grid.empty()) fail(ErrorCode::invalid_argument, "calibrate_t_integral: empty grid");
  TCalibration out;
  out.grid = grid;
  std::vector<cplx> complex_ratios(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    complex_ratios[i] = t_integral_quadrature(grid[i]) / t_integral_closed(grid[i]);
  });
  out.ratios.resize(grid.size());
  cplx complex_mean = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.ratios[i] = std::norm(complex_ratios[i]);
    out.ratio_mean += out.ratios[i];
    complex_mean += complex_ratios[i];
  }
  out.ratio_mean /= static_cast<double>(grid.size());
  complex_mean /= static_cast<double>(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.ratio_spread = std::max(out.ratio_spread, std::abs(out.ratios[i] - out.ratio_mean) / out.ratio_mean);
    out.complex_ratio_spread =
        std::max(out.complex_ratio_spread, std::abs(complex_ratios[i] - complex_mean) / std::abs(complex_mean));
  }
  out.measured_constant = out.ratio_mean;
  return out;
}

const TCalibration& archimedean_calibration() {
  static const TCalibration calibration = calibrate_t_integral(default_calibration_grid());
  return calibration;
}

cplx GammaFactorProduct::evaluate() const {
  cplx log_value = 0.0;
  for (const cplx s : shifts) {
    check_gamma_argument(s, "GammaFactorProduct");
    log_value += std::log(2.0) - s * std::log(2.0 * kPi) + log_gamma(s);
  }
  return std::exp(log_value);
}

double GammaFactorProduct::log_abs() const {
  double total = 0.0;
  for (const cplx s : shifts) {
    check_gamma_argument(s, "GammaFactorProduct");
    total += log_abs_gamma_c(s);
  }
  return total;
}

std::string_view to_string(RankinKind kind) {
  switch (kind) {
    case RankinKind::cusp_cusp_eis: return "cusp-cusp-eis";
    case RankinKind::eis_eis_cusp: return "eis-eis-cusp";
    case RankinKind::sym2_cusp: return "sym2-cusp";
  }
  return "unknown";
}

RankinKind rankin_kind_from_string(std::string_view name) {
  for (RankinKind k : {RankinKind::cusp_cusp_eis, RankinKind::eis_eis_cusp, RankinKind::sym2_cusp}) {
    if (name == to_string(k)) return k;
  }
  fail(ErrorCode::invalid_argument, "unknown Rankin kind '" + std::string(name) + "'");
}

GammaFactorProduct rankin_gamma_assembly(RankinKind kind, const RankinParams& p) {
  GammaFactorProduct out;
  switch (kind) {
    case RankinKind::cusp_cusp_eis:
      for (double s1 : {1.0, -1.0}) {
        for (double s2 : {1.0, -1.0}) {
          for (double s3 : {1.0, -1.0}) out.shifts.push_back((1.0 + I * (s1 * p.a + s2 * p.b + s3 * p.c)) / 2.0);
        }
      }
      return out;
    case RankinKind::eis_eis_cusp:
      for (double s1 : {1.0, -1.0}) {
        for (double s2 : {1.0, -1.0}) out.shifts.push_back((1.0 + I * (s1 * (p.a + p.b) + s2 * p.c)) / 2.0);
      }
      return out;
    case RankinKind::sym2_cusp:
      for (double s1 : {1.0, -1.0}) {
        out.shifts.push_back((1.0 + I * s1 * p.a) / 2.0);
        out.shifts.push_back((1.0 + I * s1 * p.a) / 2.0);
      }
      for (double s1 : {1.0, -1.0}) {
        for (double s2 : {1.0, -1.0}) out.shifts.push_back((1.0 + I * s1 * p.a) / 2.0 + I * s2 * p.b);
      }
      return out;
  }
  fail(ErrorCode::invalid_argument, "rankin_gamma_assembly: unknown kind");
}

std::string_view to_string(FinitePartPolicy policy) {
  switch (policy) {
    case FinitePartPolicy::supplied_value: return "supplied-value";
    case FinitePartPolicy::convexity_envelope: return "convexity-envelope";
    case FinitePartPolicy::glh_envelope: return "GLH-envelope";
  }
  return "unknown";
}

FinitePartPolicy finite_part_policy_from_string(std::string_view name) {
  for (FinitePartPolicy p : {FinitePartPolicy::supplied_value, FinitePartPolicy::convexity_envelope,
                             FinitePartPolicy::glh_envelope}) {
    if (name == to_string(p)) return p;
  }
  fail(ErrorCode::invalid_argument, "unknown finite-part policy '" + std::string(name) + "'");
}

CompletedRatio watson_completed_ratio(const TripleSpectrum& spec, FinitePartPolicy policy,
                                      const FiniteValues& finite) {
  spec.validate();
  CompletedRatio out;
  out.numerator_gammas = rankin_gamma_assembly(RankinKind::cusp_cusp_eis, {spec.t3, spec.t1, spec.t2});
  for (double t : {spec.t1, spec.t2, spec.t3}) {
    out.denominator_gammas.shifts.push_back(cplx(1.0, t));
    out.denominator_gammas.shifts.push_back(cplx(1.0, -t));
  }
  out.finite_part_policy = policy;
  out.finite = finite;
  return out;
}

double analytic_conductor(const GammaFactorProduct& numerator) {
  double log_c = 0.0;
  for (const cplx s : numerator.shifts) log_c += 2.0 * std::log1p(std::abs(s.imag()));
  return std::exp(log_c);
}

double watson_log_ratio(const TripleSpectrum& spec, const CompletedRatio& ratio, const WatsonOptions& options) {
  spec.validate();
  if (!(options.absolute_constant > 0.0)) {
    fail(ErrorCode::invalid_argument, "watson_ratio: the absolute constant must be > 0");
  }
  const bool supplied = ratio.finite.triple_l.has_value() || ratio.finite.sym2_l.has_value();
  double log_finite = 0.0;
  switch (ratio.finite_part_policy) {
    case FinitePartPolicy::supplied_value: {
      if (!ratio.finite.triple_l || !ratio.finite.sym2_l) {
        fail(ErrorCode::policy_mismatch, "watson_ratio: supplied-value policy needs all L-values");
      }
      if (!(*ratio.finite.triple_l > 0.0)) fail(ErrorCode::invalid_argument, "watson_ratio: L-values must be > 0");
      log_finite = std::log(*ratio.finite.triple_l);
      for (double l : *ratio.finite.sym2_l) {
        if (!(l > 0.0)) fail(ErrorCode::invalid_argument, "watson_ratio: L-values must be > 0");
        log_finite -= std::log(l);
      }
      break;
    }
    case FinitePartPolicy::convexity_envelope:
      if (supplied) fail(ErrorCode::policy_mismatch, "watson_ratio: envelope policy does not take L-values");
      log_finite = 0.25 * std::log(analytic_conductor(ratio.numerator_gammas));
      break;
    case FinitePartPolicy::glh_envelope:
      if (supplied) fail(ErrorCode::policy_mismatch, "watson_ratio: envelope policy does not take L-values");
      if (!(ratio.finite.delta > 0.0)) fail(ErrorCode::invalid_argument, "watson_ratio: GLH delta must be > 0");
      log_finite = ratio.finite.delta * std::log(analytic_conductor(ratio.numerator_gammas));
      break;
  }
  const double kappa = options.measured_constant.value_or(archimedean_calibration().measured_constant);
  if (!(kappa > 0.0)) fail(ErrorCode::invalid_argument, "watson_ratio: measured constant must be > 0");
  return std::log(options.absolute_constant / (8.0 * kPi)) + std::log(kappa) +
         ratio.numerator_gammas.log_abs() - ratio.denominator_gammas.log_abs() + log_finite;
}

double watson_ratio(const TripleSpectrum& spec, const CompletedRatio& ratio, const WatsonOptions& options) {
  return std::exp(watson_log_ratio(spec, ratio, options));
}

double cusp_pair_log_ratio(double t_j, double t_f, double t_g, double t_k, FinitePartPolicy policy,
                           const FiniteValues& finite, const WatsonOptions& options) {
  const TripleSpectrum first{t_k, t_g, t_j};
  const TripleSpectrum second{t_j, t_f, t_f};
  return 0.5 * (watson_log_ratio(first, watson_completed_ratio(first, policy, finite), options) +
                watson_log_ratio(second, watson_completed_ratio(second, policy, finite), options));
}

}  // namespace bianchi
