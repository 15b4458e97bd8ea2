#include "doctest.h"

#include <cmath>
#include <numbers>

#include "bianchi/error.hpp"
#include "bianchi/tripleprod.hpp"

using namespace bianchi;
using cplx = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("Whittaker values against mpmath") {
  CHECK(std::abs(whittaker_value(0.0, 1.0) / 1.2212054943616304e-6 - 1.0) < 1e-11);
  CHECK(std::abs(whittaker_value(10.0, 0.5) / -0.013377865051624738 - 1.0) < 1e-10);
  CHECK(std::abs(whittaker_value(3.0, 0.05) / -0.016630183133051555 - 1.0) < 1e-10);
  try {
    whittaker_value(1.0, 1e-6);
    FAIL("y below the window accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::window);
  }
}

TEST_CASE("T integral by quadrature against mpmath") {
  const TripleSpectrum spec{1.0, 2.0, 0.5};
  CHECK(rel(t_integral_quadrature(spec, {}), {0.011936797842998357, -0.016199803979833905}) < 1e-9);
  CHECK(rel(t_integral_closed(spec), {1.0113312007918312, -0.017019327563982025}) < 1e-12);
}

TEST_CASE("closed form symmetries and the degenerate anchor") {
  const TripleSpectrum spec{1.5, 3.5, 2.0};
  const TripleSpectrum swapped{3.5, 1.5, 2.0};
  const TripleSpectrum mirrored{1.5, 3.5, -2.0};
  CHECK(rel(t_integral_closed(spec), t_integral_closed(swapped)) < 1e-14);
  CHECK(rel(std::conj(t_integral_closed(spec)), t_integral_closed(mirrored)) < 1e-14);
  CHECK(rel(t_integral_closed({0.0, 0.0, 0.0}), cplx(pi * pi)) < 1e-13);
  for (double t : {0.0, 1.0, 4.0})
    CHECK(rel(t_integral_degenerate(t), t_integral_closed({t, t, 0.0})) < 1e-12);
}

TEST_CASE("spectral window") {
  try {
    t_integral_closed({250.0, 0.0, 0.0});
    FAIL("t above the window accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::window);
  }
}

TEST_CASE("calibration constant" * doctest::timeout(300)) {
  const std::vector<TripleSpectrum> grid{{0.0, 0.0, 0.0}, {2.5, 5.0, 0.0}, {5.0, 2.5, 5.0}, {0.0, 5.0, 2.5}};
  const auto cal = calibrate_t_integral(grid);
  CHECK(cal.ratio_spread < 1e-6);
  CHECK(std::abs(cal.measured_constant * 256.0 * pi * pi - 1.0) < 1e-9);
  // the complex ratio rotates with t3 and is not a constant
  CHECK(cal.complex_ratio_spread > 0.1);
}

TEST_CASE("Rankin-Selberg Gamma assemblies") {
  const auto cce = rankin_gamma_assembly(RankinKind::cusp_cusp_eis, {1.0, 2.0, 3.0});
  CHECK(cce.size() == 8);
  const auto eec = rankin_gamma_assembly(RankinKind::eis_eis_cusp, {1.0, 2.0, 3.0});
  CHECK(eec.size() == 4);
  for (const cplx s : eec.shifts) CHECK(s.real() == 0.5);
  const auto sym = rankin_gamma_assembly(RankinKind::sym2_cusp, {4.0, 1.0, 0.0});
  CHECK(sym.size() == 8);
  CHECK(rankin_kind_from_string(to_string(RankinKind::sym2_cusp)) == RankinKind::sym2_cusp);
  try {
    rankin_kind_from_string("cusp-cusp-cusp");
    FAIL("unknown kind accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
  // the product over the shifts has the same modulus as its evaluation
  CHECK(std::abs(cce.log_abs() - std::log(std::abs(cce.evaluate()))) < 1e-12);
}

TEST_CASE("Watson ratio policies") {
  const TripleSpectrum spec{2.0, 3.0, 4.0};
  const auto supplied = watson_completed_ratio(spec, FinitePartPolicy::supplied_value,
                                               {1.0, std::array<double, 3>{1.0, 1.0, 1.0}, 0.01});
  const auto missing = watson_completed_ratio(spec, FinitePartPolicy::supplied_value);
  CHECK(supplied.numerator_gammas.size() == 8);
  CHECK(supplied.denominator_gammas.size() == 6);
  const WatsonOptions opts{1.0, 1.0};
  CHECK(std::isfinite(watson_log_ratio(spec, supplied, opts)));
  try {
    watson_log_ratio(spec, missing, opts);
    FAIL("missing L-values accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::policy_mismatch);
  }
  // doubling L(1/2) doubles the ratio
  auto doubled = supplied;
  doubled.finite.triple_l = 2.0;
  CHECK(std::abs(watson_log_ratio(spec, doubled, opts) - watson_log_ratio(spec, supplied, opts) - std::log(2.0)) <
        1e-12);
  const auto glh = watson_completed_ratio(spec, FinitePartPolicy::glh_envelope, {std::nullopt, std::nullopt, 0.05});
  const double cond = analytic_conductor(glh.numerator_gammas);
  CHECK(cond > 1.0);
  const auto conv = watson_completed_ratio(spec, FinitePartPolicy::convexity_envelope);
  CHECK(std::abs(watson_log_ratio(spec, conv, opts) - watson_log_ratio(spec, glh, opts) -
                 (0.25 - 0.05) * std::log(cond)) < 1e-10);
}

TEST_CASE("cusp pair decays like the Q1 exponential") {
  const double pair_far = cusp_pair_log_ratio(30.0, 5.0, 5.0, 5.0, FinitePartPolicy::glh_envelope, {}, {1.0, 1.0});
  const double pair_near = cusp_pair_log_ratio(10.0, 5.0, 5.0, 5.0, FinitePartPolicy::glh_envelope, {}, {1.0, 1.0});
  // Q1 grows by 40 between the two quadruples
  CHECK(std::abs(pair_far - pair_near + pi / 2.0 * 40.0) < 3.0 * std::log(3.0));
}
