#include "bianchi/quadfield.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "bianchi/error.hpp"

namespace bianchi {

namespace {

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) return -1;
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool by_norm_then_coords(const LatticePoint& x, const LatticePoint& y) {
  if (x.norm != y.norm) return x.norm < y.norm;
  return x.element < y.element;
}

}  // namespace

Field Field::make(int D) {
  for (int supported : kSupported) {
    if (supported == D) return Field(D);
  }
  fail(ErrorCode::unsupported_field,
       "field Q(sqrt(" + std::to_string(D) + ")) is not one of the nine class-number-one fields");
}

Field::Field(int D) : D_(D) {
  disc_ = (((D % 4) + 4) % 4 == 1) ? D : 4 * D;
  sqrt_abs_disc_ = std::sqrt(static_cast<double>(-disc_));
  units_ = elements_of_norm(1);
}

std::int64_t Field::norm(const RingElement& x) const {
  if (half_integral_basis()) {
    const std::int64_t m = (1 - D_) / 4;  // omega * conj(omega)
    return x.a * x.a + x.a * x.b + m * x.b * x.b;
  }
  return x.a * x.a - static_cast<std::int64_t>(D_) * x.b * x.b;
}

RingElement Field::mul(const RingElement& x, const RingElement& y) const {
  if (half_integral_basis()) {
    const std::int64_t m = (D_ - 1) / 4;  // omega^2 = omega + m
    return {x.a * y.a + x.b * y.b * m, x.a * y.b + x.b * y.a + x.b * y.b};
  }
  return {x.a * y.a + x.b * y.b * D_, x.a * y.b + x.b * y.a};
}

RingElement Field::conj(const RingElement& x) const {
  if (half_integral_basis()) return {x.a + x.b, -x.b};
  return {x.a, -x.b};
}

std::complex<double> Field::to_complex(const RingElement& x) const {
  const double root = std::sqrt(static_cast<double>(-D_));
  if (half_integral_basis()) {
    return {static_cast<double>(x.a) + 0.5 * static_cast<double>(x.b),
            0.5 * root * static_cast<double>(x.b)};
  }
  return {static_cast<double>(x.a), root * static_cast<double>(x.b)};
}

std::optional<RingElement> Field::divide(const RingElement& x, const RingElement& d) const {
  if (d.is_zero()) fail(ErrorCode::invalid_argument, "division by zero ring element");
  const std::int64_t n = norm(d);
  const RingElement p = mul(x, conj(d));
  if (p.a % n != 0 || p.b % n != 0) return std::nullopt;
  return RingElement{p.a / n, p.b / n};
}

RingElement Field::canonical(const RingElement& x) const {
  RingElement best = x;
  for (const auto& u : units_) best = std::max(best, mul(u, x));
  return best;
}

std::vector<RingElement> Field::elements_of_norm(std::int64_t n) const {
  std::vector<RingElement> out;
  if (n < 1) return out;
  const std::int64_t absD = -static_cast<std::int64_t>(D_);
  if (half_integral_basis()) {
    // 4 N = (2a + b)^2 + |D| b^2
    for (std::int64_t b = -isqrt(4 * n / absD); b * b * absD <= 4 * n; ++b) {
      const std::int64_t rest = 4 * n - absD * b * b;
      const std::int64_t s = isqrt(rest);
      if (s * s != rest) continue;
      for (std::int64_t sign : {-1, 1}) {
        const std::int64_t twice_a = sign * s - b;
        if (twice_a % 2 != 0) continue;
        out.push_back({twice_a / 2, b});
        if (s == 0) break;
      }
    }
  } else {
    for (std::int64_t b = -isqrt(n / absD); b * b * absD <= n; ++b) {
      const std::int64_t rest = n - absD * b * b;
      const std::int64_t s = isqrt(rest);
      if (s * s != rest) continue;
      out.push_back({-s, b});
      if (s != 0) out.push_back({s, b});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<RingElement> Field::residues_mod(const RingElement& d) const {
  if (d.is_zero()) fail(ErrorCode::invalid_argument, "residues modulo zero");
  const std::int64_t n = norm(d);
  const RingElement dbar = conj(d);
  // alpha = d (s + t omega) with s, t in [0, 1)  <=>  alpha * conj(d) has
  // coordinates in [0, N(d)).
  const double reach = std::sqrt(static_cast<double>(n)) * (1.0 + std::abs(to_complex({0, 1}))) + 1.0;
  const auto box = enumerate_by_norm(*this, static_cast<std::int64_t>(std::ceil(reach * reach)));
  std::vector<RingElement> out;
  auto consider = [&](const RingElement& alpha) {
    const RingElement p = mul(alpha, dbar);
    if (p.a >= 0 && p.a < n && p.b >= 0 && p.b < n) out.push_back(alpha);
  };
  consider({0, 0});
  for (const auto& lp : box.elements) consider(lp.element);
  std::sort(out.begin(), out.end());
  if (static_cast<std::int64_t>(out.size()) != n) {
    fail(ErrorCode::invalid_argument, "residues_mod: residue system has wrong size");
  }
  return out;
}

LatticePointSet enumerate_by_norm(const Field& field, std::int64_t X) {
  LatticePointSet set;
  set.norm_bound = X;
  if (X < 1) return set;
  const std::int64_t absD = -static_cast<std::int64_t>(field.D());
  if (field.half_integral_basis()) {
    const std::int64_t bmax = isqrt(4 * X / absD) + 1;
    for (std::int64_t b = -bmax; b <= bmax; ++b) {
      // |a + b/2| <= sqrt(X)
      const std::int64_t amax = isqrt(X) + std::abs(b) / 2 + 1;
      for (std::int64_t a = -amax; a <= amax; ++a) {
        const RingElement x{a, b};
        const std::int64_t n = field.norm(x);
        if (n >= 1 && n <= X) set.elements.push_back({x, n});
      }
    }
  } else {
    const std::int64_t bmax = isqrt(X / absD);
    const std::int64_t amax = isqrt(X);
    for (std::int64_t b = -bmax; b <= bmax; ++b) {
      for (std::int64_t a = -amax; a <= amax; ++a) {
        const RingElement x{a, b};
        const std::int64_t n = field.norm(x);
        if (n >= 1 && n <= X) set.elements.push_back({x, n});
      }
    }
  }
  std::sort(set.elements.begin(), set.elements.end(), by_norm_then_coords);
  return set;
}

void write_csv(std::ostream& out, const LatticePointSet& set) {
  out << "a,b,norm\n";
  for (const auto& p : set.elements) out << p.element.a << ',' << p.element.b << ',' << p.norm << '\n';
}

std::vector<RingElement> divisors_up_to_units(const Field& field, const RingElement& omega) {
  if (omega.is_zero()) fail(ErrorCode::invalid_argument, "divisors of zero are undefined");
  const std::int64_t n = field.norm(omega);
  std::vector<LatticePoint> found;
  for (std::int64_t m = 1; m * m <= n; ++m) {
    if (n % m != 0) continue;
    for (std::int64_t k : {m, n / m}) {
      for (const auto& d : field.elements_of_norm(k)) {
        if (field.canonical(d) != d) continue;
        if (field.divides(d, omega)) found.push_back({d, k});
      }
      if (m * m == n) break;
    }
  }
  std::sort(found.begin(), found.end(), by_norm_then_coords);
  found.erase(std::unique(found.begin(), found.end(),
                          [](const LatticePoint& x, const LatticePoint& y) { return x.element == y.element; }),
              found.end());
  std::vector<RingElement> out;
  out.reserve(found.size());
  for (const auto& p : found) out.push_back(p.element);
  return out;
}

std::complex<double> sigma_s(const Field& field, const RingElement& omega, std::complex<double> s) {
  std::complex<double> total = 0.0;
  for (const auto& d : divisors_up_to_units(field, omega)) {
    total += std::exp(s * std::log(static_cast<double>(field.norm(d))));
  }
  return total;
}

std::vector<DivisorSumRow> divisor_sum_scan(const Field& field, std::int64_t X_max) {
  if (X_max < 1) fail(ErrorCode::invalid_argument, "divisor_sum_scan: X_max must be >= 1");
  // sum_{N(w) <= X} sigma_0(w) = (1/|units|) #{(d, q) : N(d) N(q) <= X}
  std::vector<std::int64_t> reps(static_cast<std::size_t>(X_max) + 1, 0);
  for (const auto& p : enumerate_by_norm(field, X_max).elements) ++reps[static_cast<std::size_t>(p.norm)];
  std::vector<std::int64_t> pairs(static_cast<std::size_t>(X_max) + 1, 0);
  for (std::int64_t n = 1; n <= X_max; ++n) {
    if (reps[n] == 0) continue;
    for (std::int64_t m = 1; n * m <= X_max; ++m) pairs[n * m] += reps[n] * reps[m];
  }
  std::vector<DivisorSumRow> rows;
  rows.reserve(static_cast<std::size_t>(X_max));
  std::int64_t running = 0;
  for (std::int64_t X = 1; X <= X_max; ++X) {
    running += pairs[X];
    rows.push_back({X, running / field.unit_count()});
  }
  return rows;
}

PowerFit fit_divisor_sum(std::span<const DivisorSumRow> rows, std::int64_t X_lo, std::int64_t X_hi,
                         int samples) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  const double llo = std::log(static_cast<double>(X_lo));
  const double lhi = std::log(static_cast<double>(X_hi));
  std::int64_t last = -1;
  for (int i = 0; i < samples; ++i) {
    const double lx = llo + (lhi - llo) * i / (samples - 1);
    const auto X = static_cast<std::int64_t>(std::llround(std::exp(lx)));
    if (X == last || X < 2 || X > static_cast<std::int64_t>(rows.size())) continue;
    last = X;
    const auto& row = rows[static_cast<std::size_t>(X - 1)];
    const double x = std::log(static_cast<double>(row.X));
    const double y = std::log(static_cast<double>(row.sum) / x);
    sx += x; sy += y; sxx += x * x; sxy += x * y; ++n;
  }
  PowerFit fit;
  if (n < 2) return fit;
  fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.exponent * sx) / n;
  return fit;
}

}  // namespace bianchi
