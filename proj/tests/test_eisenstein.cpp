#include "doctest.h"

#include <cmath>

#include "bianchi/eisenstein.hpp"
#include "bianchi/error.hpp"

using namespace bianchi;
using cplx = std::complex<double>;

TEST_CASE("quaternion Mobius action") {
  // the inversion fixes j and sends r j to j / r
  const HyperbolicPoint j{0.0, 0.0, 1.0};
  const auto fixed = mobius_act_complex(0.0, -1.0, 1.0, 0.0, j);
  CHECK(std::abs(fixed.x) < 1e-15);
  CHECK(std::abs(fixed.y) < 1e-15);
  CHECK(std::abs(fixed.r - 1.0) < 1e-15);
  const auto moved = mobius_act_complex(0.0, -1.0, 1.0, 0.0, {0.0, 0.0, 4.0});
  CHECK(std::abs(moved.r - 0.25) < 1e-15);
  // r(gP) = r / (|cz + d|^2 + |c|^2 r^2)
  const HyperbolicPoint p{0.3, -0.2, 0.7};
  const cplx c{1.0, 1.0}, d{1.0, 0.0};
  const auto q = mobius_act_complex({1.0, 0.0}, {0.0, 0.0}, c, d, p);
  const double expected = p.r / (std::norm(c * p.z() + d) + std::norm(c) * p.r * p.r);
  CHECK(std::abs(q.r - expected) < 1e-14);
}

TEST_CASE("group elements must have determinant one") {
  const Field gauss = Field::make(-1);
  const GroupElement bad{{2, 0}, {0, 0}, {0, 0}, {1, 0}};
  CHECK_FALSE(bad.has_unit_determinant(gauss));
  try {
    mobius_act(gauss, bad, {0.0, 0.0, 1.0});
    FAIL("determinant 2 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_argument);
  }
}

TEST_CASE("Eisenstein series is automorphic") {
  for (int D : {-1, -3, -2}) {
    const Field f = Field::make(D);
    const EisensteinEvaluator ev(f);
    const HyperbolicPoint p{0.21, -0.13, 0.83};
    const GroupElement s = GroupElement::inversion();
    const GroupElement tr = GroupElement::translation({1, 1});
    const GroupElement g = s.compose(f, tr).compose(f, s);
    for (double t : {0.5, 3.0, 12.0}) {
      CAPTURE(D);
      CAPTURE(t);
      CHECK(check_automorphy(ev, p, t, s) < 1e-8);
      CHECK(check_automorphy(ev, p, t, g) < 1e-8);
    }
  }
}

TEST_CASE("high in the cusp only the constant term survives") {
  const EisensteinEvaluator ev(Field::make(-1));
  const HyperbolicPoint p{0.1, 0.4, 4.0};
  for (double t : {1.0, 6.0}) {
    const cplx e = ev.eval(p, t);
    CHECK(std::abs(e - ev.constant_term(p, t)) < 1e-9 * std::abs(e));
  }
}

TEST_CASE("E vanishes at t = 0") {
  const EisensteinEvaluator ev(Field::make(-1));
  CHECK(std::abs(ev.eval({0.2, 0.1, 0.9}, 0.0)) < 1e-10);
}

TEST_CASE("Laplacian eigenvalue") {
  const EisensteinEvaluator ev(Field::make(-1));
  const HyperbolicPoint p{0.17, 0.31, 1.1};
  for (double t : {1.0, 5.0}) CHECK(laplacian_residual(ev, p, t, 1e-3) < 1e-3);
}

TEST_CASE("interpolated Bessel path tracks the exact one") {
  const EisensteinEvaluator ev(Field::make(-1));
  const double t = 30.0;
  const std::int64_t X = ev.truncation_norm(t, 0.8);
  const auto table = BesselTable::build(t, 1e-2, 2e3);
  const HyperbolicPoint p{0.05, -0.4, 0.9};
  const cplx exact = ev.eval_truncated(p, t, X);
  CHECK(std::abs(ev.eval_interpolated(p, t, X, table) - exact) < 1e-6 * (1.0 + std::abs(exact)));
}

TEST_CASE("Hecke operators act by the predicted eigenvalue") {
  const Field gauss = Field::make(-1);
  const EisensteinEvaluator ev(gauss);
  const HyperbolicPoint p{0.11, 0.23, 0.9};
  const double t = 2.0;
  const cplx e = ev.eval(p, t);
  for (RingElement n : {RingElement{1, 1}, RingElement{3, 0}}) {
    const cplx lhs = hecke_apply(ev, n, p, t);
    const cplx rhs = hecke_eigenvalue_predicted(gauss, n, t) * e;
    CHECK(std::abs(lhs - rhs) < 1e-8 * std::abs(rhs));
  }
}

TEST_CASE("window checks") {
  const EisensteinEvaluator ev(Field::make(-1));
  try {
    ev.eval({0.0, 0.0, 1e-3}, 1.0);
    FAIL("r below the window accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::window);
  }
  try {
    ev.eval({0.0, 0.0, 1.0}, 250.0);
    FAIL("t above the window accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::window);
  }
}

TEST_CASE("sup-norm scan on a small grid") {
  const EisensteinEvaluator ev(Field::make(-1));
  const auto omega = box_grid(-0.5, 0.5, -0.5, 0.5, 0.8, 2.0, 4);
  CHECK(omega.size() == 64);
  const auto table = supnorm_scan(ev, omega, {20.0, 30.0, 40.0, 50.0});
  REQUIRE(table.rows.size() == 4);
  for (const auto& row : table.rows) CHECK(row.sup_value >= row.grid_sup);
  CHECK(std::isfinite(table.fitted_exponent));
}
