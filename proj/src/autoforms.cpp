#include "bianchi/autoforms.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <optional>
#include <sstream>
#include <string_view>
#include <vector>

#include "bianchi/error.hpp"
#include "bianchi/specfun.hpp"

namespace bianchi {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr std::string_view kHeader = "D,t,a,b,re_rho,im_rho";
constexpr std::string_view kCoverageDirective = "norm_coverage:";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
  fail(ErrorCode::parse, "coefficient file line " + std::to_string(line) + ": " + what);
}

template <class T>
T parse_number(std::string_view field, int line, const char* name) {
  field = trim(field);
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    parse_fail(line, std::string("cannot read ") + name + " from '" + std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto pos = s.find(',');
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) return out;
    s.remove_prefix(pos + 1);
  }
}

std::string format17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool norm_fully_present(const Field& field, const CuspFormData& form, std::int64_t n) {
  for (const auto& mu : field.elements_of_norm(n)) {
    if (!form.coefficients.count(mu)) return false;
  }
  return true;
}

}  // namespace

CuspFormData load_coefficients(std::istream& in) {
  CuspFormData form;
  std::optional<std::int64_t> declared_coverage;
  std::optional<int> D;
  std::optional<double> t;
  bool have_header = false;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty()) continue;
    if (text.front() == '#') {
      std::string_view body = trim(text.substr(1));
      if (body.substr(0, kCoverageDirective.size()) == kCoverageDirective) {
        declared_coverage = parse_number<std::int64_t>(body.substr(kCoverageDirective.size()), line, "norm_coverage");
        if (*declared_coverage < 0) parse_fail(line, "norm_coverage must be >= 0");
      }
      continue;
    }
    if (!have_header) {
      if (text != kHeader) parse_fail(line, "expected header '" + std::string(kHeader) + "'");
      have_header = true;
      continue;
    }
    const auto cols = split(text);
    if (cols.size() != 6) parse_fail(line, "expected 6 columns, found " + std::to_string(cols.size()));
    const int row_D = parse_number<int>(cols[0], line, "D");
    const double row_t = parse_number<double>(cols[1], line, "t");
    const RingElement mu{parse_number<std::int64_t>(cols[2], line, "a"),
                         parse_number<std::int64_t>(cols[3], line, "b")};
    const cplx rho(parse_number<double>(cols[4], line, "re_rho"), parse_number<double>(cols[5], line, "im_rho"));
    if (!D) {
      Field::make(row_D);
      D = row_D;
      t = row_t;
    } else if (row_D != *D) {
      fail(ErrorCode::field_mismatch, "coefficient file line " + std::to_string(line) + ": field D = " +
                                          std::to_string(row_D) + " differs from " + std::to_string(*D));
    } else if (row_t != *t) {
      parse_fail(line, "spectral parameter differs from earlier rows");
    }
    if (mu.is_zero()) parse_fail(line, "mu = 0 is the constant term, which a cusp form does not have");
    if (!std::isfinite(rho.real()) || !std::isfinite(rho.imag())) parse_fail(line, "coefficient is not finite");
    if (!form.coefficients.emplace(mu, rho).second) {
      fail(ErrorCode::duplicate_index, "coefficient file line " + std::to_string(line) + ": duplicate mu = (" +
                                           std::to_string(mu.a) + "," + std::to_string(mu.b) + ")");
    }
  }
  if (!have_header) parse_fail(line, "missing header");
  form.D = D.value_or(-1);
  form.t = t.value_or(0.0);
  const Field field = Field::make(form.D);
  if (declared_coverage) {
    for (std::int64_t n = 1; n <= *declared_coverage; ++n) {
      if (!norm_fully_present(field, form, n)) {
        fail(ErrorCode::coverage_gap, "coefficients of norm " + std::to_string(n) + " are missing below norm_coverage " +
                                          std::to_string(*declared_coverage));
      }
    }
    form.norm_coverage = *declared_coverage;
  } else {
    std::int64_t n = 0;
    while (!form.coefficients.empty() && norm_fully_present(field, form, n + 1)) ++n;
    form.norm_coverage = n;
  }
  return form;
}

CuspFormData load_coefficients_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::parse, "cannot open coefficient file '" + path + "'");
  return load_coefficients(in);
}

void write_coefficients(std::ostream& out, const CuspFormData& form) {
  out << "# " << kCoverageDirective << ' ' << form.norm_coverage << '\n';
  out << kHeader << '\n';
  for (const auto& [mu, rho] : form.coefficients) {
    out << form.D << ',' << format17(form.t) << ',' << mu.a << ',' << mu.b << ',' << format17(rho.real()) << ','
        << format17(rho.imag()) << '\n';
  }
}

CuspEvaluation cuspform_eval(const CuspFormData& form, const HyperbolicPoint& p) {
  if (!(p.r >= 1e-2 && p.r <= 1e2)) fail(ErrorCode::window, "cuspform_eval: r outside [0.01, 100]");
  const Field field = Field::make(form.D);
  const double root_d = field.sqrt_abs_disc();
  const double ta = std::abs(form.t);
  const double log_cosh = kPi * ta / 2.0 + std::log1p(std::exp(-kPi * ta)) - std::log(2.0);
  const double phase_scale = -4.0 * kPi / root_d;
  const cplx z = p.z();

  CuspEvaluation result;
  for (const auto& [mu, rho] : form.coefficients) {
    if (rho == cplx(0.0, 0.0)) continue;
    const double u = 2.0 * kPi * (2.0 * std::abs(field.to_complex(mu)) / root_d) * p.r;
    const ScaledReal k = bessel_k_scaled_log(ta, u);
    const double bessel = k.mantissa * std::exp(k.log_scale - log_cosh);
    const double angle = phase_scale * (field.to_complex(mu) * z).imag();
    result.value += rho * p.r * bessel * std::polar(1.0, angle);
  }

  std::int64_t next = form.norm_coverage + 1;
  while (field.elements_of_norm(next).empty()) ++next;
  const double u_omitted = 2.0 * kPi * 2.0 * std::sqrt(static_cast<double>(next)) / root_d * p.r;
  result.tail_risk = u_omitted < ta + 5.0 * std::cbrt(ta);
  return result;
}

NormalizationRecord normalize_first_coeff(const Field& field, double lambda_sym2) {
  if (!(lambda_sym2 > 0.0)) fail(ErrorCode::invalid_argument, "normalize_first_coeff: Lambda(1, sym^2 f) must be > 0");
  return {lambda_sym2, 1.0 / std::sqrt(field.sqrt_abs_disc() * lambda_sym2 / 4.0)};
}

cplx rs_coefficient_series(const CuspFormData& f, const CuspFormData& g, cplx s, std::int64_t X, ExponentBase base) {
  if (f.D != g.D) fail(ErrorCode::field_mismatch, "rs_coefficient_series: forms live on different fields");
  if (X > f.norm_coverage || X > g.norm_coverage) {
    fail(ErrorCode::coverage_exceeded, "rs_coefficient_series: X exceeds the coefficient coverage");
  }
  const Field field = Field::make(f.D);
  cplx total = 0.0;
  for (const auto& [mu, rho_f] : f.coefficients) {
    const std::int64_t n = field.norm(mu);
    if (n > X) continue;
    const auto it = g.coefficients.find(mu);
    if (it == g.coefficients.end()) continue;
    const double log_base = base == ExponentBase::modulus ? 0.5 * std::log(static_cast<double>(n))
                                                           : std::log(static_cast<double>(n));
    total += rho_f * std::conj(it->second) * std::exp(-s * log_base);
  }
  return total;
}

cplx unfolding_integral(double tf, double tg, cplx s) {
  // y = 2 pi r
  return std::exp(-s * std::log(2.0 * kPi)) * mellin_kk_quadrature(s - 1.0, tf, tg);
}

cplx unfolding_prediction(double tf, double tg, cplx s) {
  const cplx lambda = s - 1.0;
  return std::exp(-s * std::log(2.0 * kPi)) * mellin_normalization(lambda) *
         mellin_kk_closed(lambda, cplx(0.0, tf), cplx(0.0, tg));
}

}  // namespace bianchi
