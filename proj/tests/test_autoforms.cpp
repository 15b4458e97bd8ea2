#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bianchi/autoforms.hpp"
#include "bianchi/error.hpp"

using namespace bianchi;
using cplx = std::complex<double>;

namespace {

ErrorCode load_error(const std::string& text) {
  std::istringstream in(text);
  try {
    load_coefficients(in);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("malformed input accepted");
  return ErrorCode::usage;
}

CuspFormData sample_form() {
  std::istringstream in(
      "# norm_coverage: 2\n"
      "D,t,a,b,re_rho,im_rho\n"
      "-1,9.5,1,0,1,0\n"
      "-1,9.5,0,1,1,0\n"
      "-1,9.5,-1,0,1,0\n"
      "-1,9.5,0,-1,1,0\n"
      "-1,9.5,1,1,-0.25,0.125\n"
      "-1,9.5,1,-1,-0.25,-0.125\n"
      "-1,9.5,-1,1,-0.25,-0.125\n"
      "-1,9.5,-1,-1,-0.25,0.125\n");
  return load_coefficients(in);
}

}  // namespace

TEST_CASE("coefficient files round-trip exactly") {
  const CuspFormData form = sample_form();
  CHECK(form.D == -1);
  CHECK(form.t == 9.5);
  CHECK(form.coefficients.size() == 8);
  CHECK(form.norm_coverage == 2);
  std::ostringstream out;
  write_coefficients(out, form);
  std::istringstream back(out.str());
  CHECK(load_coefficients(back) == form);
}

TEST_CASE("malformed coefficient files") {
  CHECK(load_error("D,t,a,b,re_rho,im_rho\n-1,1,1,0,1\n") == ErrorCode::parse);
  CHECK(load_error("-1,1,1,0,1,0\n") == ErrorCode::parse);
  CHECK(load_error("D,t,a,b,re_rho,im_rho\n-1,1,1,0,x,0\n") == ErrorCode::parse);
  CHECK(load_error("D,t,a,b,re_rho,im_rho\n-1,1,0,0,1,0\n") == ErrorCode::parse);
  CHECK(load_error("D,t,a,b,re_rho,im_rho\n-1,1,1,0,1,0\n-1,1,1,0,2,0\n") == ErrorCode::duplicate_index);
  CHECK(load_error("D,t,a,b,re_rho,im_rho\n-1,1,1,0,1,0\n-3,1,0,1,1,0\n") == ErrorCode::field_mismatch);
  CHECK(load_error("# norm_coverage: 2\nD,t,a,b,re_rho,im_rho\n-1,1,1,0,1,0\n") == ErrorCode::coverage_gap);
  CHECK(load_error("D,t,a,b,re_rho,im_rho\n-5,1,1,0,1,0\n") == ErrorCode::unsupported_field);
}

TEST_CASE("cusp form evaluation of a single coefficient") {
  // rho(1) = 1 alone over Q(i): r K_{2i}(2 pi r) e(-Im z)
  CuspFormData form;
  form.D = -1;
  form.t = 2.0;
  form.coefficients[{1, 0}] = 1.0;
  form.norm_coverage = 0;
  const auto ev = cuspform_eval(form, {0.3, 0.1, 0.7});
  CHECK(std::abs(std::abs(ev.value) - 0.0033035694343435233) < 1e-12);
  CHECK(std::abs(std::arg(ev.value) + 0.2 * std::numbers::pi) < 1e-12);
  const auto at_j = cuspform_eval(form, {0.0, 0.0, 1.0});
  CHECK(std::abs(at_j.value - cplx(0.00068015563719095181)) < 1e-15);
}

TEST_CASE("tail risk is flagged low in the fundamental domain") {
  const CuspFormData form = sample_form();
  CHECK(cuspform_eval(form, {0.0, 0.0, 0.05}).tail_risk);
  CHECK_FALSE(cuspform_eval(form, {0.0, 0.0, 5.0}).tail_risk);
  try {
    cuspform_eval(form, {0.0, 0.0, 500.0});
    FAIL("r above the window accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::window);
  }
}

TEST_CASE("first coefficient normalization") {
  const auto rec = normalize_first_coeff(Field::make(-1), 2.0);
  CHECK(std::abs(rec.rho1_abs - 1.0) < 1e-15);
  try {
    normalize_first_coeff(Field::make(-1), 0.0);
    FAIL("nonpositive value accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
}

TEST_CASE("Rankin-Selberg coefficient series") {
  const CuspFormData form = sample_form();
  // 4 units of norm 1, then 4 associates of 1+i with |rho|^2 = 5/64
  const cplx by_modulus = rs_coefficient_series(form, form, 2.0, 2);
  CHECK(std::abs(by_modulus - cplx(4.0 + 4.0 * (5.0 / 64.0) / 2.0)) < 1e-15);
  const cplx by_norm = rs_coefficient_series(form, form, 2.0, 2, ExponentBase::norm);
  CHECK(std::abs(by_norm - cplx(4.0 + 4.0 * (5.0 / 64.0) / 4.0)) < 1e-15);
  try {
    rs_coefficient_series(form, form, 2.0, 3);
    FAIL("coverage exceeded silently");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::coverage_exceeded);
  }
}

TEST_CASE("unfolding integral matches the Gamma prediction") {
  // reference values by mpmath quadrature
  const double s_values[] = {1.5, 2.0, 3.0};
  const double reference[] = {0.0001115231898824887, 8.0850783205581945e-5, 3.40524402233475e-5};
  for (int i = 0; i < 3; ++i) {
    const cplx q = unfolding_integral(1.0, 3.0, s_values[i]);
    const cplx p = unfolding_prediction(1.0, 3.0, s_values[i]);
    CHECK(std::abs(q - reference[i]) < 1e-9 * reference[i]);
    CHECK(std::abs(q - p) < 1e-8 * std::abs(p));
  }
}
