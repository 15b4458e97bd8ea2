#include "doctest.h"

#include <cmath>
#include <numbers>

#include "bianchi/error.hpp"
#include "bianchi/specfun.hpp"
#include "bianchi/zeta.hpp"

using namespace bianchi;
using cplx = std::complex<double>;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

// Reference values below were computed with mpmath at 30 digits.

TEST_CASE("Kronecker symbol") {
  CHECK(kronecker_character(-4, 1) == 1);
  CHECK(kronecker_character(-4, 2) == 0);
  CHECK(kronecker_character(-4, 3) == -1);
  CHECK(kronecker_character(-4, 5) == 1);
  CHECK(kronecker_character(-3, 2) == -1);
  CHECK(kronecker_character(-3, 7) == 1);
  CHECK(kronecker_character(-8, 3) == 1);
  CHECK(kronecker_character(-8, 5) == -1);
}

TEST_CASE("Riemann and Hurwitz zeta") {
  CHECK(rel(riemann_zeta(2.0), cplx(std::numbers::pi * std::numbers::pi / 6.0)) < 1e-14);
  CHECK(rel(riemann_zeta({2.0, 3.0}), {0.79802198514627572, -0.1137443080529385}) < 1e-12);
  CHECK(rel(riemann_zeta({0.7, 10.0}), {1.4770846832243507, -0.11469565736394514}) < 1e-12);
  CHECK(rel(hurwitz_zeta({2.5, 1.0}, 0.3), {7.8528807052013212, 18.593143534318559}) < 1e-12);
}

TEST_CASE("Dirichlet L and Dedekind zeta") {
  CHECK(rel(dirichlet_l(2.0, -4), cplx(0.91596559417721902)) < 1e-13);
  const ZetaContext gauss(Field::make(-1));
  CHECK(rel(dedekind_zeta(gauss, 2.0), cplx(1.506703009922985)) < 1e-12);
  CHECK(rel(dedekind_zeta(gauss, {0.75, 20.0}), {1.0809148347016436, -1.9432099802518146}) < 1e-9);
  const ZetaContext rho(Field::make(-3));
  CHECK(rel(dedekind_zeta(rho, {3.0, 1.0}), {1.0143931102919059, -0.05566821042054548}) < 1e-12);
}

TEST_CASE("Dedekind zeta window") {
  const ZetaContext gauss(Field::make(-1));
  try {
    dedekind_zeta(gauss, {0.25, 1.0});
    FAIL("point left of the window accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::window);
  }
  try {
    dedekind_zeta(gauss, 1.0);
    FAIL("pole accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::pole);
  }
}

TEST_CASE("lattice sum agrees with the factorization" * doctest::timeout(120)) {
  for (int D : {-1, -2, -7}) {
    const Field f = Field::make(D);
    const ZetaContext ctx(f);
    const cplx s{2.0, 1.5};
    CHECK(rel(dedekind_zeta_lattice_sum(f, s, 400'000), dedekind_zeta(ctx, s)) < 1e-8);
  }
}

TEST_CASE("completed zeta") {
  const Field gauss_field = Field::make(-1);
  const ZetaContext gauss(gauss_field);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(rel(completed_lambda(gauss, 2.0).lambda_value, dedekind_zeta(gauss, 2.0) / pi2) < 1e-14);
  const cplx s{0.8, 6.0};
  CHECK(rel(completed_lambda(gauss, std::conj(s)).lambda_value, std::conj(completed_lambda(gauss, s).lambda_value)) <
        1e-14);
  for (int t = 1; t <= 50; ++t) CHECK(std::abs(completed_lambda(gauss, {1.0, double(t)}).lambda_value) > 0.0);

  // functional equation, with the continued product on the left half
  const Field f = Field::make(-2);
  const ZetaContext ctx(f);
  const cplx w{0.7, 4.0};
  const double base = 2.0 * std::numbers::pi / f.sqrt_abs_disc();
  const cplx reflected = std::exp(-(1.0 - w) * std::log(base) + log_gamma(1.0 - w)) * dedekind_zeta_continued(f, 1.0 - w);
  CHECK(rel(completed_lambda(ctx, w).lambda_value, reflected) < 1e-9);
}

TEST_CASE("scattering phase is unitary on the imaginary axis") {
  for (int D : Field::kSupported) {
    const ZetaContext ctx(Field::make(D));
    for (double t : {0.5, 7.0, 60.0}) CHECK(std::abs(std::abs(scattering_phi(ctx, {0.0, t})) - 1.0) < 1e-9);
  }
}
