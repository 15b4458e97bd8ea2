#pragma once

// Bound calculus for the spectral sums: the exponent Q1, truncation and
// regime thresholds, log-scale envelopes and their aggregation.

#include <optional>
#include <string_view>
#include <vector>

namespace bianchi {

struct SpectralQuadruple {
  double t_j = 0.0;
  double t_f = 0.0;
  double t_g = 0.0;
  double t_k = 0.0;

  /// Throws ErrorCode::invalid_argument unless all entries are finite and >= 0.
  void validate() const;
};

enum class LPolicyKind { glh, convexity, subconvex };

struct LPolicy {
  LPolicyKind kind = LPolicyKind::glh;
  /// delta under GLH, the saving under subconvexity, unused for convexity
  double exponent_delta = 0.01;

  void validate() const;
};

std::string_view to_string(LPolicyKind kind);
LPolicyKind lpolicy_kind_from_string(std::string_view name);

/// |t_j/2 + t_f| + |t_j/2 - t_f| + (|t_j + t_g + t_k| + |t_j + t_g - t_k|
///   + |t_j - t_g + t_k| + |t_j - t_g - t_k|) / 2 - t_j - 2t_f - t_k - t_g
double q1(const SpectralQuadruple& q);

/// max(t_j, 2t_f) + m(t_j, t_g, t_k) - (t_j + 2t_f + t_g + t_k)
double q1_closed(const SpectralQuadruple& q);

/// For the Eisenstein kinds the quadruple slots carry the continuous
/// parameters: eis-t puts t in t_k, eis-tau puts tau in t_j, eis-eis both.
enum class EnvelopeKind { cusp, eis_t, eis_tau, eis_eis };

std::string_view to_string(EnvelopeKind kind);
EnvelopeKind envelope_kind_from_string(std::string_view name);

/// log of e^{-(pi/2) Q1} / ((1+t_j)(1+t_f)(1+t_k)^{1/2}(1+t_g)^{1/2}) times
/// the L-value envelope of the policy:
///   GLH        delta log((1+t_g)(1+t_j)(1+t_f))
///   convexity  (1/4) log((1+t_j)^2 (1+t_f)^6)
///   subconvex  (1/8 - saving) log((1+t_j)^2 (1+t_f)^6)
double envelope(EnvelopeKind kind, const SpectralQuadruple& q, const LPolicy& policy);

/// 2t_f + t_k + t_g
double truncation_threshold(double t_f, double t_g, double t_k);

enum class SumRegime { exponential_decay, glh_main };

std::string_view to_string(SumRegime regime);

struct RegimeReport {
  /// exponential-decay iff 2t_f < t_g - t_g^eps
  SumRegime proof_split = SumRegime::glh_main;
  /// exponential-decay iff t_f <= t_g - t_g^eps, the complement of the
  /// indicator in the main theorem
  SumRegime theorem_split = SumRegime::glh_main;
};

/// Requires t_g > 1 and eps in (0, 1).
RegimeReport regime_classify(double t_f, double t_g, double eps);

struct AggregateOptions {
  EnvelopeKind kind = EnvelopeKind::cusp;
  /// weight (1 + t_j)^density_exponent per unit of t_j
  double density_exponent = 2.0;
  double eps = 0.1;
  /// when set, the policy's L-term is replaced by E log((1+t_j)^2 (1+t_f)^6)
  std::optional<double> numerator_exponent;
};

struct BoundReport {
  /// smallest Q1 over the summed t_j
  double q1 = 0.0;
  /// largest single log-envelope in the head
  double envelope = 0.0;
  SumRegime regime = SumRegime::glh_main;
  RegimeReport regimes;
  /// log of the head sum over 1 <= t_j < threshold
  double aggregate = 0.0;
  /// log of the sum over t_j >= threshold
  double tail = 0.0;
  double threshold = 0.0;
  int head_terms = 0;
  int tail_terms = 0;
};

/// Sums exp(log-envelope) times the density weight over t_j = 1, 2, ...
/// in log scale, in a fixed order.
BoundReport aggregate_spectral_sum(double t_f, double t_g, double t_k, const LPolicy& policy,
                                   const AggregateOptions& options = {});

/// t_j^4 t_f^12
double conductor(double t_j, double t_f);

struct SubconvexityOptions {
  double t_k = 1.0;
  double density_exponent = 2.0;
  double tolerance = 1e-3;
  double lo = 0.0;
  double hi = 0.5;
};

/// least-squares slope of the log-aggregate against log t_f along the grid,
/// with t_g = t_f and the numerator exponent E
double subconvexity_slope(const std::vector<double>& t_f_grid, double E,
                          const SubconvexityOptions& options = {});

/// Largest E for which the slope stays negative, by bisection.
double subconvexity_requirement(const std::vector<double>& t_f_grid,
                                const SubconvexityOptions& options = {});

/// lambda^{-l}
double spectral_weight(double lambda, int l);

/// log of (t_f (1 + |2t_f - t_g|))^{-r/4 + eps} (t_f t_g^{1/2})^{-s + eps}
double number_field_log_envelope(double t_f, double t_g, int r, int s, double eps);

/// least-squares slope of ys against xs
double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace bianchi
