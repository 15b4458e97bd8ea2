#include "bianchi/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bianchi/error.hpp"

namespace bianchi {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Running log of a sum of exponentials, in the order terms arrive.
class LogSum {
 public:
  void add(double log_term) {
    if (log_term == kNegInf) return;
    if (log_term > max_) {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    } else {
      sum_ += std::exp(log_term - max_);
    }
  }
  double value() const { return sum_ == 0.0 ? kNegInf : max_ + std::log(sum_); }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

double l_term(const SpectralQuadruple& q, const LPolicy& policy) {
  const double log_numerator = 2.0 * std::log1p(q.t_j) + 6.0 * std::log1p(q.t_f);
  switch (policy.kind) {
    case LPolicyKind::glh:
      return policy.exponent_delta * (std::log1p(q.t_g) + std::log1p(q.t_j) + std::log1p(q.t_f));
    case LPolicyKind::convexity: return 0.25 * log_numerator;
    case LPolicyKind::subconvex: return (0.125 - policy.exponent_delta) * log_numerator;
  }
  return 0.0;
}

double polynomial_part(const SpectralQuadruple& q) {
  return -(std::log1p(q.t_j) + std::log1p(q.t_f) + 0.5 * std::log1p(q.t_k) + 0.5 * std::log1p(q.t_g));
}

double log_term(const SpectralQuadruple& q, const LPolicy& policy, const AggregateOptions& options) {
  const double l = options.numerator_exponent
                       ? *options.numerator_exponent * (2.0 * std::log1p(q.t_j) + 6.0 * std::log1p(q.t_f))
                       : l_term(q, policy);
  return -(kPi / 2.0) * q1_closed(q) + polynomial_part(q) + l + options.density_exponent * std::log1p(q.t_j);
}

}  // namespace

void SpectralQuadruple::validate() const {
  for (double t : {t_j, t_f, t_g, t_k}) {
    if (!std::isfinite(t) || t < 0.0) {
      fail(ErrorCode::invalid_argument, "spectral parameters must be finite and >= 0");
    }
  }
}

void LPolicy::validate() const {
  switch (kind) {
    case LPolicyKind::glh:
      if (!(exponent_delta > 0.0 && exponent_delta <= 0.05)) {
        fail(ErrorCode::invalid_argument, "GLH policy: delta must lie in (0, 0.05]");
      }
      return;
    case LPolicyKind::subconvex:
      if (!(exponent_delta > 0.0 && exponent_delta < 0.125)) {
        fail(ErrorCode::invalid_argument, "subconvex policy: saving must lie in (0, 1/8)");
      }
      return;
    case LPolicyKind::convexity: return;
  }
}

std::string_view to_string(LPolicyKind kind) {
  switch (kind) {
    case LPolicyKind::glh: return "GLH";
    case LPolicyKind::convexity: return "convexity";
    case LPolicyKind::subconvex: return "subconvex";
  }
  return "unknown";
}

LPolicyKind lpolicy_kind_from_string(std::string_view name) {
  for (LPolicyKind k : {LPolicyKind::glh, LPolicyKind::convexity, LPolicyKind::subconvex}) {
    if (name == to_string(k)) return k;
  }
  fail(ErrorCode::invalid_argument, "unknown L-policy '" + std::string(name) + "'");
}

double q1(const SpectralQuadruple& q) {
  q.validate();
  const double tj = q.t_j, tf = q.t_f, tg = q.t_g, tk = q.t_k;
  return std::abs(tj / 2.0 + tf) + std::abs(tj / 2.0 - tf) + std::abs(tj + tg + tk) / 2.0 +
         std::abs(tj + tg - tk) / 2.0 + std::abs(tj - tg + tk) / 2.0 + std::abs(tj - tg - tk) / 2.0 - tj -
         2.0 * tf - tk - tg;
}

double q1_closed(const SpectralQuadruple& q) {
  q.validate();
  const double tj = q.t_j, tf = q.t_f, tg = q.t_g, tk = q.t_k;
  double m;
  if (tj >= tg + tk) {
    m = 2.0 * tj;
  } else if (tj >= std::abs(tg - tk)) {
    m = tj + tg + tk;
  } else {
    m = 2.0 * std::max(tg, tk);
  }
  return std::max(tj, 2.0 * tf) + m - (tj + 2.0 * tf + tg + tk);
}

std::string_view to_string(EnvelopeKind kind) {
  switch (kind) {
    case EnvelopeKind::cusp: return "cusp";
    case EnvelopeKind::eis_t: return "eis-t";
    case EnvelopeKind::eis_tau: return "eis-tau";
    case EnvelopeKind::eis_eis: return "eis-eis";
  }
  return "unknown";
}

EnvelopeKind envelope_kind_from_string(std::string_view name) {
  for (EnvelopeKind k : {EnvelopeKind::cusp, EnvelopeKind::eis_t, EnvelopeKind::eis_tau, EnvelopeKind::eis_eis}) {
    if (name == to_string(k)) return k;
  }
  fail(ErrorCode::invalid_argument, "unknown envelope kind '" + std::string(name) + "'");
}

double envelope(EnvelopeKind kind, const SpectralQuadruple& q, const LPolicy& policy) {
  q.validate();
  policy.validate();
  switch (kind) {
    case EnvelopeKind::cusp:
    case EnvelopeKind::eis_t:
    case EnvelopeKind::eis_tau:
    case EnvelopeKind::eis_eis:
      return -(kPi / 2.0) * q1(q) + polynomial_part(q) + l_term(q, policy);
  }
  fail(ErrorCode::invalid_argument, "envelope: unknown kind");
}

double truncation_threshold(double t_f, double t_g, double t_k) {
  SpectralQuadruple{0.0, t_f, t_g, t_k}.validate();
  return 2.0 * t_f + t_k + t_g;
}

std::string_view to_string(SumRegime regime) {
  return regime == SumRegime::exponential_decay ? "exponential-decay" : "glh-main";
}

RegimeReport regime_classify(double t_f, double t_g, double eps) {
  if (!(t_g > 1.0) || !(eps > 0.0 && eps < 1.0) || !(t_f >= 0.0)) {
    fail(ErrorCode::invalid_argument, "regime_classify: requires t_g > 1, eps in (0, 1), t_f >= 0");
  }
  const double edge = t_g - std::pow(t_g, eps);
  RegimeReport out;
  out.proof_split = 2.0 * t_f < edge ? SumRegime::exponential_decay : SumRegime::glh_main;
  out.theorem_split = t_f > edge ? SumRegime::glh_main : SumRegime::exponential_decay;
  return out;
}

BoundReport aggregate_spectral_sum(double t_f, double t_g, double t_k, const LPolicy& policy,
                                   const AggregateOptions& options) {
  SpectralQuadruple{0.0, t_f, t_g, t_k}.validate();
  if (!(t_f > 0.0 && t_g > 0.0)) fail(ErrorCode::invalid_argument, "aggregate_spectral_sum: t_f, t_g must be > 0");
  policy.validate();
  if (!std::isfinite(options.density_exponent)) {
    fail(ErrorCode::invalid_argument, "aggregate_spectral_sum: density exponent must be finite");
  }
  BoundReport out;
  out.threshold = truncation_threshold(t_f, t_g, t_k);
  if (t_g > 1.0 && options.eps > 0.0 && options.eps < 1.0) {
    out.regimes = regime_classify(t_f, t_g, options.eps);
    out.regime = out.regimes.proof_split;
  }
  out.q1 = std::numeric_limits<double>::infinity();
  out.envelope = kNegInf;

  LogSum head;
  LogSum tail;
  double tail_peak = kNegInf;
  for (int j = 1;; ++j) {
    const SpectralQuadruple q{static_cast<double>(j), t_f, t_g, t_k};
    const double term = log_term(q, policy, options);
    if (j < out.threshold) {
      head.add(term);
      ++out.head_terms;
      out.q1 = std::min(out.q1, q1_closed(q));
      out.envelope = std::max(out.envelope, term - options.density_exponent * std::log1p(q.t_j));
    } else {
      tail.add(term);
      ++out.tail_terms;
      tail_peak = std::max(tail_peak, term);
      // Beyond the threshold Q1 grows linearly, so terms fall off
      // geometrically; stop once they are negligible against the peak.
      if (term < tail_peak - 80.0 && j > out.threshold + 10.0) break;
    }
  }
  out.aggregate = head.value();
  out.tail = tail.value();
  if (out.head_terms == 0) out.q1 = 0.0;
  return out;
}

double conductor(double t_j, double t_f) {
  SpectralQuadruple{t_j, t_f, 0.0, 0.0}.validate();
  return std::pow(t_j, 4) * std::pow(t_f, 12);
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) fail(ErrorCode::invalid_argument, "fit_slope: need >= 2 points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) fail(ErrorCode::invalid_argument, "fit_slope: abscissae coincide");
  return sxy / sxx;
}

double subconvexity_slope(const std::vector<double>& t_f_grid, double E, const SubconvexityOptions& options) {
  std::vector<double> xs, ys;
  AggregateOptions agg;
  agg.density_exponent = options.density_exponent;
  agg.numerator_exponent = E;
  for (double tf : t_f_grid) {
    const BoundReport r = aggregate_spectral_sum(tf, tf, options.t_k, LPolicy{}, agg);
    xs.push_back(std::log(tf));
    ys.push_back(r.aggregate);
  }
  return fit_slope(xs, ys);
}

double subconvexity_requirement(const std::vector<double>& t_f_grid, const SubconvexityOptions& options) {
  if (t_f_grid.size() < 2) fail(ErrorCode::invalid_argument, "subconvexity_requirement: need >= 2 grid points");
  double lo = options.lo;
  double hi = options.hi;
  if (!(subconvexity_slope(t_f_grid, lo, options) < 0.0)) return lo;
  if (subconvexity_slope(t_f_grid, hi, options) < 0.0) return hi;
  while (hi - lo > options.tolerance) {
    const double mid = 0.5 * (lo + hi);
    (subconvexity_slope(t_f_grid, mid, options) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double spectral_weight(double lambda, int l) {
  if (!(lambda >= 1.0) || l < 0) fail(ErrorCode::invalid_argument, "spectral_weight: requires lambda >= 1, l >= 0");
  return std::pow(lambda, -l);
}

double number_field_log_envelope(double t_f, double t_g, int r, int s, double eps) {
  if (!(t_f > 0.0 && t_g > 0.0) || r < 0 || s < 0) {
    fail(ErrorCode::invalid_argument, "number_field_log_envelope: requires t_f, t_g > 0 and r, s >= 0");
  }
  return (-r / 4.0 + eps) * std::log(t_f * (1.0 + std::abs(2.0 * t_f - t_g))) +
         (-s + eps) * std::log(t_f * std::sqrt(t_g));
}

}  // namespace bianchi
