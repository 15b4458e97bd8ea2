#include "bianchi/zeta.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <vector>

#include "bianchi/error.hpp"
#include "bianchi/specfun.hpp"

namespace bianchi {

namespace {

using cplx = std::complex<double>;

constexpr double kPi = std::numbers::pi;
constexpr int kBernoulliTerms = 20;

// B_{2j} / (2j)! for j = 1..20
const std::vector<double>& bernoulli_over_factorial() {
  static const std::vector<double> table = [] {
    const double b[] = {
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
        43867.0 / 798.0,
        -174611.0 / 330.0,
        854513.0 / 138.0,
        -236364091.0 / 2730.0,
        8553103.0 / 6.0,
        -23749461029.0 / 870.0,
        8615841276005.0 / 14322.0,
        -7709321041217.0 / 510.0,
        2577687858367.0 / 6.0,
        -26315271553053477373.0 / 1919190.0,
        2929993913841559.0 / 6.0,
        -261082718496449122051.0 / 13530.0,
    };
    std::vector<double> out;
    double factorial = 1.0;
    for (int j = 1; j <= kBernoulliTerms; ++j) {
      factorial *= (2.0 * j - 1.0) * (2.0 * j);
      out.push_back(b[j - 1] / factorial);
    }
    return out;
  }();
  return table;
}

void check_window(cplx s) {
  if (std::abs(s - 1.0) < 1e-6) {
    fail(ErrorCode::pole, "zeta: s is within 1e-6 of the pole at s = 1");
  }
  if (!(s.real() > 0.5) || std::abs(s.imag()) > 1e3) {
    fail(ErrorCode::window, "zeta: s outside the supported window Re s > 1/2, |Im s| <= 1000");
  }
}

}  // namespace

int kronecker_character(int d, std::int64_t n) {
  if (n < 1) fail(ErrorCode::invalid_argument, "kronecker_character: n must be >= 1");
  static constexpr int kTwoTable[8] = {0, 1, 0, -1, 0, -1, 0, 1};
  std::int64_t a = d;
  std::int64_t b = n;
  if (a % 2 == 0 && b % 2 == 0) return 0;
  int v = 0;
  while (b % 2 == 0) {
    b /= 2;
    ++v;
  }
  int k = (v % 2 == 0) ? 1 : kTwoTable[((a % 8) + 8) % 8];
  if (a < 0) {
    // (-1 / b) for odd positive b
    a = -a;
    if (b % 4 == 3) k = -k;
  }
  while (a != 0) {
    v = 0;
    while (a % 2 == 0) {
      a /= 2;
      ++v;
    }
    if (v % 2 == 1) k *= kTwoTable[b % 8];
    if (a % 4 == 3 && b % 4 == 3) k = -k;
    const std::int64_t r = a;
    a = b % r;
    b = r;
  }
  return b == 1 ? k : 0;
}

cplx hurwitz_zeta(cplx s, double a) {
  if (!(a > 0.0 && a <= 1.0)) fail(ErrorCode::invalid_argument, "hurwitz_zeta: a must lie in (0, 1]");
  if (s == cplx(1.0, 0.0)) fail(ErrorCode::pole, "hurwitz_zeta: pole at s = 1");
  const auto& coeff = bernoulli_over_factorial();
  const double reach = std::abs(s) + 2.0 * kBernoulliTerms + 1.0;
  const int N = std::max(10, static_cast<int>(std::ceil(reach / kPi)));

  cplx head = 0.0;
  for (int k = N - 1; k >= 0; --k) head += std::exp(-s * std::log(k + a));

  const double x = N + a;
  const double lx = std::log(x);
  const cplx x_minus_s = std::exp(-s * lx);
  cplx tail = x * x_minus_s / (s - 1.0) + 0.5 * x_minus_s;
  // term_j = B_{2j}/(2j)! * s (s+1) ... (s+2j-2) * x^{-s-2j+1}
  cplx rising = s;
  cplx power = x_minus_s / x;
  const double inv_x2 = 1.0 / (x * x);
  for (int j = 1; j <= kBernoulliTerms; ++j) {
    if (j > 1) {
      rising *= (s + (2.0 * j - 3.0)) * (s + (2.0 * j - 2.0));
      power *= inv_x2;
    }
    const cplx term = coeff[j - 1] * rising * power;
    tail += term;
    if (std::abs(term) < 1e-17 * std::abs(head + tail)) break;
  }
  return head + tail;
}

cplx riemann_zeta(cplx s) { return hurwitz_zeta(s, 1.0); }

cplx dirichlet_l(cplx s, int d) {
  const int q = std::abs(d);
  cplx total = 0.0;
  for (int r = 1; r <= q; ++r) {
    const int chi = kronecker_character(d, r);
    if (chi == 0) continue;
    total += static_cast<double>(chi) * hurwitz_zeta(s, static_cast<double>(r) / q);
  }
  return std::exp(-s * std::log(static_cast<double>(q))) * total;
}

cplx dedekind_zeta_continued(const Field& field, cplx s) {
  return riemann_zeta(s) * dirichlet_l(s, field.discriminant());
}

ZetaContext::ZetaContext(const Field& field, double precision_target)
    : field_(field), precision_target_(precision_target), cache_(std::make_shared<Cache>()) {
  if (!(precision_target > 0.0 && precision_target <= 1e-6)) {
    fail(ErrorCode::invalid_argument, "ZetaContext: precision_target must lie in (0, 1e-6]");
  }
}

cplx ZetaContext::zeta(cplx s) const {
  const std::pair<double, double> key{s.real(), s.imag()};
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->values.find(key);
    if (it != cache_->values.end()) return it->second;
  }
  const cplx value = dedekind_zeta_continued(field_, s);
  std::lock_guard<std::mutex> lock(cache_->mutex);
  return cache_->values.emplace(key, value).first->second;
}

cplx dedekind_zeta(const ZetaContext& ctx, cplx s) {
  check_window(s);
  return ctx.zeta(s);
}

cplx dedekind_zeta_lattice_sum(const Field& field, cplx s, std::int64_t X) {
  if (X < 1) fail(ErrorCode::invalid_argument, "dedekind_zeta_lattice_sum: X must be >= 1");
  if (s.real() <= 1.0) fail(ErrorCode::window, "dedekind_zeta_lattice_sum: needs Re s > 1");
  std::vector<std::uint32_t> reps(static_cast<std::size_t>(X) + 1, 0);
  const double absD = -static_cast<double>(field.D());
  const double scale = field.half_integral_basis() ? 4.0 : 1.0;
  const auto bmax = static_cast<std::int64_t>(std::sqrt(scale * X / absD)) + 1;
  const auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(X))) + 1;
  for (std::int64_t b = -bmax; b <= bmax; ++b) {
    const std::int64_t amax = root + std::abs(b);
    for (std::int64_t a = -amax; a <= amax; ++a) {
      const std::int64_t n = field.norm({a, b});
      if (n >= 1 && n <= X) ++reps[static_cast<std::size_t>(n)];
    }
  }
  cplx total = 0.0;
  std::int64_t count = 0;
  for (std::int64_t n = X; n >= 1; --n) {
    if (reps[n] == 0) continue;
    count += reps[n];
    total += static_cast<double>(reps[n]) * std::exp(-s * std::log(static_cast<double>(n)));
  }
  // Stieltjes tail with A(x) ~ c x - 1, anchored at the exact count A(X).
  const double c = 2.0 * kPi / field.sqrt_abs_disc();
  const double lX = std::log(static_cast<double>(X));
  const cplx X_minus_s = std::exp(-s * lX);
  const cplx tail = -X_minus_s * (static_cast<double>(count) + 1.0) +
                    s * c * static_cast<double>(X) * X_minus_s / (s - 1.0);
  return (total + tail) / static_cast<double>(field.unit_count());
}

CompletedZetaValue completed_lambda(const ZetaContext& ctx, cplx s) {
  const cplx z = dedekind_zeta(ctx, s);
  const double base = 2.0 * kPi / ctx.field().sqrt_abs_disc();
  return {s, std::exp(-s * std::log(base) + log_gamma(s)) * z};
}

cplx scattering_phi(const ZetaContext& ctx, cplx s) {
  if (s == cplx(0.0, 0.0)) fail(ErrorCode::pole, "scattering_phi: singular point s = 0");
  const cplx shifted = dedekind_zeta(ctx, 1.0 + s);
  const cplx z = (s.real() > 0.5) ? dedekind_zeta(ctx, s) : ctx.zeta(s);
  const double root = ctx.field().sqrt_abs_disc();
  return 2.0 * kPi / (s * root) * z / shifted;
}

}  // namespace bianchi
