#pragma once

// The Eisenstein series of PSL_2(O_K) on hyperbolic 3-space, evaluated from
// its Fourier expansion at the cusp.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "bianchi/quadfield.hpp"
#include "bianchi/zeta.hpp"

namespace bianchi {

/// P = z + r j with z = x + i y.
struct HyperbolicPoint {
  double x = 0.0;
  double y = 0.0;
  double r = 1.0;

  std::complex<double> z() const { return {x, y}; }
};

/// w + x i + y j + z k
struct Quaternion {
  double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

  static Quaternion from_complex(std::complex<double> c) { return {c.real(), c.imag(), 0.0, 0.0}; }
  static Quaternion from_point(const HyperbolicPoint& p) { return {p.x, p.y, p.r, 0.0}; }

  Quaternion operator+(const Quaternion& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
  Quaternion operator*(const Quaternion& o) const;
  double norm2() const { return w * w + x * x + y * y + z * z; }
  Quaternion inverse() const;
};

/// [[a, b], [c, d]] with entries in O_K and ad - bc = 1.
struct GroupElement {
  RingElement a{1, 0}, b{0, 0}, c{0, 0}, d{1, 0};

  static GroupElement identity() { return {}; }
  static GroupElement translation(const RingElement& w) { return {{1, 0}, w, {0, 0}, {1, 0}}; }
  static GroupElement inversion() { return {{0, 0}, {-1, 0}, {1, 0}, {0, 0}}; }

  GroupElement compose(const Field& field, const GroupElement& rhs) const;
  bool has_unit_determinant(const Field& field) const;
};

/// (aP + b)(cP + d)^{-1} for complex entries, by quaternion arithmetic.
/// Throws ErrorCode::degenerate if the result leaves H^3.
HyperbolicPoint mobius_act_complex(std::complex<double> a, std::complex<double> b,
                                   std::complex<double> c, std::complex<double> d,
                                   const HyperbolicPoint& p);

/// Throws ErrorCode::invalid_argument unless ad - bc = 1.
HyperbolicPoint mobius_act(const Field& field, const GroupElement& g, const HyperbolicPoint& p);

struct EisensteinOptions {
  double tail_tolerance = 1e-13;
  std::int64_t max_norm_cutoff = 200'000;
};

/// cosh(pi t / 2) K_{it}(u) tabulated on a uniform grid in log u and read
/// back by six-point Lagrange interpolation. Only used to steer searches;
/// reported values always come from the exact path.
struct BesselTable {
  double t = 0.0;
  double v0 = 0.0;
  double h = 1.0;
  std::vector<double> values;

  static BesselTable build(double t, double u_lo, double u_hi);
  double operator()(double u) const { return at_log(std::log(u)); }
  double at_log(double log_u) const;
};

class EisensteinEvaluator {
 public:
  EisensteinEvaluator(const Field& field, EisensteinOptions options = {});

  const Field& field() const { return field_; }
  const ZetaContext& zeta_context() const { return zeta_; }
  const EisensteinOptions& options() const { return options_; }

  /// Smallest norm bound X whose omitted tail is certified below the tail
  /// tolerance at spectral parameter t, for every point with r >= r_min.
  std::int64_t truncation_norm(double t, double r_min) const;

  /// E(P, it) with the cutoff chosen for P itself.
  std::complex<double> eval(const HyperbolicPoint& p, double t) const;

  /// E(P, it) with the omega-sum cut at N(omega) <= X.
  std::complex<double> eval_truncated(const HyperbolicPoint& p, double t, std::int64_t X) const;

  /// As eval_truncated, with Bessel factors read from a table.
  std::complex<double> eval_interpolated(const HyperbolicPoint& p, double t, std::int64_t X,
                                         const BesselTable& table) const;

  /// |E(x + iy + rj, it)| for each r in r_values, with tabulated Bessel
  /// factors. The shell sums over each norm are formed once per column.
  std::vector<double> column_profile(double x, double y, double t, std::int64_t X,
                                     const BesselTable& table,
                                     const std::vector<double>& r_values) const;

  /// (|O_K^*| / 2) (r^{1+it} + phi(it) r^{1-it})
  std::complex<double> constant_term(const HyperbolicPoint& p, double t) const;

 private:
  struct Coefficients {
    std::vector<std::int64_t> norms;  // distinct norms, increasing
    std::vector<std::size_t> offsets;  // elements of norms[k] are [offsets[k], offsets[k+1])
    std::vector<RingElement> elements;
    std::vector<std::complex<double>> values;  // |omega|^{it} sigma_{-it}(omega)
  };
  using BesselRow = std::vector<double>;

  std::shared_ptr<const Coefficients> coefficients(double t, std::int64_t X) const;
  std::shared_ptr<const BesselRow> bessel_row(double t, double r, std::int64_t X,
                                              const Coefficients& coeffs) const;
  std::complex<double> fourier_prefactor(double t) const;
  std::complex<double> assemble(const HyperbolicPoint& p, double t, const Coefficients& coeffs,
                                const std::vector<double>& row) const;

  struct Caches {
    std::mutex mutex;
    std::map<std::pair<double, std::int64_t>, std::shared_ptr<const Coefficients>> coefficients;
    std::map<std::tuple<double, double, std::int64_t>, std::shared_ptr<const BesselRow>> bessel;
  };

  Field field_;
  ZetaContext zeta_;
  EisensteinOptions options_;
  std::shared_ptr<Caches> caches_;
};

/// |E(gP, it) - E(P, it)| / (|E(P, it)| + 1e-30)
double check_automorphy(const EisensteinEvaluator& ev, const HyperbolicPoint& p, double t,
                        const GroupElement& g);

/// Relative residual of -Delta_h E = (1 + t^2) E with second-order central
/// differences of step h in x, y and r. All stencil points share one
/// truncation. At t = 0, where E vanishes identically, the check runs at
/// t = 1e-5 instead.
double laplacian_residual(const EisensteinEvaluator& ev, const HyperbolicPoint& p, double t,
                          double h);

struct ScanRow {
  double t = 0.0;
  double sup_value = 0.0;
  /// maximum over the grid points alone
  double grid_sup = 0.0;
};

struct ScanTable {
  std::vector<ScanRow> rows;
  double fitted_exponent = 0.0;
  /// the same fit applied to grid_sup
  double grid_fitted_exponent = 0.0;
};

/// x, y, r each sampled at n points over the box.
std::vector<HyperbolicPoint> box_grid(double x_lo, double x_hi, double y_lo, double y_hi,
                                      double r_lo, double r_hi, int n);

struct ScanOptions {
  int threads = 1;
  /// When false the scan reports the maximum over the grid points. When true
  /// it also sweeps the bounding box of the grid at half the shortest
  /// oscillation length of E (or half the grid spacing, if finer), polishes
  /// the best sweep points by a local ascent, and re-evaluates them exactly.
  bool resolve = false;
  int polish_starts = 48;
};

/// For each t the maximum of |E(P, it)|, then the least-squares slope of
/// log max against log t over the upper half of t_grid.
ScanTable supnorm_scan(const EisensteinEvaluator& ev, const std::vector<HyperbolicPoint>& omega,
                       const std::vector<double>& t_grid, const ScanOptions& options = {});

/// (1 / sqrt N(n)) sum over upper-triangular coset representatives.
std::complex<double> hecke_apply(const EisensteinEvaluator& ev, const RingElement& n,
                                 const HyperbolicPoint& p, double t);

/// The eigenvalue read off the Fourier coefficients: |n|^{it} sigma_{-it}(n).
std::complex<double> hecke_eigenvalue_predicted(const Field& field, const RingElement& n, double t);

}  // namespace bianchi
