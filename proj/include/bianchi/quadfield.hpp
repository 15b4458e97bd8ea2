#pragma once

// Arithmetic in the ring of integers of the nine imaginary quadratic fields
// of class number one.

#include <compare>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace bianchi {

/// a + b * omega in the integral basis {1, omega}.
struct RingElement {
  std::int64_t a = 0;
  std::int64_t b = 0;

  bool is_zero() const { return a == 0 && b == 0; }
  friend bool operator==(const RingElement&, const RingElement&) = default;
  friend auto operator<=>(const RingElement&, const RingElement&) = default;
};

class Field {
 public:
  /// Throws ErrorCode::unsupported_field unless D is one of the nine
  /// class-number-one values.
  static Field make(int D);

  static constexpr int kSupported[] = {-1, -2, -3, -7, -11, -19, -43, -67, -163};

  int D() const { return D_; }
  int discriminant() const { return disc_; }
  int unit_count() const { return static_cast<int>(units_.size()); }
  /// omega = (1 + sqrt D) / 2 when d_K = D, else omega = sqrt D.
  bool half_integral_basis() const { return disc_ == D_; }
  double sqrt_abs_disc() const { return sqrt_abs_disc_; }

  std::int64_t norm(const RingElement& x) const;
  RingElement mul(const RingElement& x, const RingElement& y) const;
  RingElement add(const RingElement& x, const RingElement& y) const { return {x.a + y.a, x.b + y.b}; }
  RingElement neg(const RingElement& x) const { return {-x.a, -x.b}; }
  RingElement conj(const RingElement& x) const;
  std::complex<double> to_complex(const RingElement& x) const;

  /// Exact quotient x / d if d divides x in O_K.
  std::optional<RingElement> divide(const RingElement& x, const RingElement& d) const;
  bool divides(const RingElement& d, const RingElement& x) const { return divide(x, d).has_value(); }

  std::span<const RingElement> units() const { return units_; }
  /// Lexicographically largest (a, b) among the associates u * x.
  RingElement canonical(const RingElement& x) const;

  /// All elements of exact norm n (n >= 1), sorted by (a, b).
  std::vector<RingElement> elements_of_norm(std::int64_t n) const;

  /// Residue representatives of O_K / d O_K; there are N(d) of them.
  std::vector<RingElement> residues_mod(const RingElement& d) const;

  friend bool operator==(const Field& x, const Field& y) { return x.D_ == y.D_; }

 private:
  explicit Field(int D);

  int D_ = -1;
  int disc_ = -4;
  double sqrt_abs_disc_ = 2.0;
  std::vector<RingElement> units_;
};

struct LatticePoint {
  RingElement element;
  std::int64_t norm = 0;
};

struct LatticePointSet {
  std::vector<LatticePoint> elements;  // sorted by (norm, a, b)
  std::int64_t norm_bound = 0;
};

/// Every nonzero omega with N(omega) <= X, ordered by (norm, a, b).
LatticePointSet enumerate_by_norm(const Field& field, std::int64_t X);

void write_csv(std::ostream& out, const LatticePointSet& set);

/// One representative per unit class of divisors, found by trial division
/// over elements whose norm divides N(omega). Sorted by (norm, a, b).
std::vector<RingElement> divisors_up_to_units(const Field& field, const RingElement& omega);

/// sum over divisor classes of N(d)^s
std::complex<double> sigma_s(const Field& field, const RingElement& omega, std::complex<double> s);

struct DivisorSumRow {
  std::int64_t X = 0;
  std::int64_t sum = 0;
};

/// Exact partial sums of sigma_0 over 0 < N(omega) <= X for X = 1..X_max.
std::vector<DivisorSumRow> divisor_sum_scan(const Field& field, std::int64_t X_max);

struct PowerFit {
  double exponent = 0.0;
  double intercept = 0.0;
};

/// Least-squares slope of log(sum / log X) against log X over rows with
/// X in [X_lo, X_hi], sampled at `samples` logarithmically spaced points.
PowerFit fit_divisor_sum(std::span<const DivisorSumRow> rows, std::int64_t X_lo,
                         std::int64_t X_hi, int samples = 60);

}  // namespace bianchi
