#pragma once

// Cusp forms given by ingested Fourier coefficients.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "bianchi/eisenstein.hpp"
#include "bianchi/quadfield.hpp"

namespace bianchi {

struct CuspFormData {
  int D = -1;
  double t = 0.0;
  std::map<RingElement, std::complex<double>> coefficients;
  /// every mu with N(mu) <= norm_coverage has a row
  std::int64_t norm_coverage = 0;

  friend bool operator==(const CuspFormData&, const CuspFormData&) = default;
};

/// Reads the CSV format `D,t,a,b,re_rho,im_rho`. Lines starting with '#' are
/// comments, except `# norm_coverage: N`, which declares the coverage to be
/// validated. Without the directive the coverage is the largest N for which
/// all norms up to N are present.
CuspFormData load_coefficients(std::istream& in);
CuspFormData load_coefficients_file(const std::string& path);

/// Writes the same format with 17 significant digits, so reading the output
/// back reproduces the data exactly.
void write_coefficients(std::ostream& out, const CuspFormData& form);

struct CuspEvaluation {
  std::complex<double> value;
  /// set when the first omitted coefficient would still sit below the
  /// exponential-decay regime of the Bessel factor
  bool tail_risk = false;
};

/// sum of rho(mu) r K_{it}(2 pi |mu~| r) e(<mu~, z>), mu~ = 2 conj(mu) / sqrt(d_K)
CuspEvaluation cuspform_eval(const CuspFormData& form, const HyperbolicPoint& p);

struct NormalizationRecord {
  double lambda_sym2 = 0.0;
  double rho1_abs = 0.0;
};

/// |rho(1)|^{-2} = (sqrt|d_K| / 4) Lambda(1, sym^2 f)
NormalizationRecord normalize_first_coeff(const Field& field, double lambda_sym2);

enum class ExponentBase { modulus, norm };

/// sum over 0 < N(mu) <= X of rho_f(mu) conj(rho_g(mu)) / B(mu)^s, where B is
/// |mu| by default or N(mu).
std::complex<double> rs_coefficient_series(const CuspFormData& f, const CuspFormData& g,
                                           std::complex<double> s, std::int64_t X,
                                           ExponentBase base = ExponentBase::modulus);

/// int_0^oo K_{i tf}(2 pi r) K_{i tg}(2 pi r) r^s dr / r by quadrature.
std::complex<double> unfolding_integral(double tf, double tg, std::complex<double> s);

/// The same integral from the Gamma-product closed form and the Mellin
/// normalization.
std::complex<double> unfolding_prediction(double tf, double tg, std::complex<double> s);

}  // namespace bianchi
