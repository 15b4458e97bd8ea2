#include "bianchi/eisenstein.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>

#include "bianchi/error.hpp"
#include "bianchi/parallel.hpp"
#include "bianchi/specfun.hpp"

namespace bianchi {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}

std::int64_t coordinate_key(const RingElement& e) {
  return (e.a + (std::int64_t{1} << 31)) * (std::int64_t{1} << 32) + (e.b + (std::int64_t{1} << 31));
}

// Rounds a cutoff up to the grid 2^{k/4} so nearby requests share caches.
std::int64_t round_up_cutoff(std::int64_t X) {
  double v = 16.0;
  while (v < static_cast<double>(X)) v *= std::pow(2.0, 0.25);
  return static_cast<std::int64_t>(std::ceil(v));
}

void check_window(const HyperbolicPoint& p, double t) {
  if (!(p.r >= 1e-2 && p.r <= 1e2)) {
    fail(ErrorCode::window, "eisenstein: r = " + std::to_string(p.r) + " outside [0.01, 100]");
  }
  if (!(std::abs(t) <= 200.0)) fail(ErrorCode::window, "eisenstein: |t| must be <= 200");
}

}  // namespace

Quaternion Quaternion::operator*(const Quaternion& o) const {
  return {w * o.w - x * o.x - y * o.y - z * o.z,
          w * o.x + x * o.w + y * o.z - z * o.y,
          w * o.y - x * o.z + y * o.w + z * o.x,
          w * o.z + x * o.y - y * o.x + z * o.w};
}

Quaternion Quaternion::inverse() const {
  const double n = norm2();
  return {w / n, -x / n, -y / n, -z / n};
}

GroupElement GroupElement::compose(const Field& f, const GroupElement& m) const {
  return {f.add(f.mul(a, m.a), f.mul(b, m.c)), f.add(f.mul(a, m.b), f.mul(b, m.d)),
          f.add(f.mul(c, m.a), f.mul(d, m.c)), f.add(f.mul(c, m.b), f.mul(d, m.d))};
}

bool GroupElement::has_unit_determinant(const Field& f) const {
  const RingElement det = f.add(f.mul(a, d), f.neg(f.mul(b, c)));
  return det == RingElement{1, 0};
}

HyperbolicPoint mobius_act_complex(cplx a, cplx b, cplx c, cplx d, const HyperbolicPoint& p) {
  const Quaternion P = Quaternion::from_point(p);
  const Quaternion num = Quaternion::from_complex(a) * P + Quaternion::from_complex(b);
  const Quaternion den = Quaternion::from_complex(c) * P + Quaternion::from_complex(d);
  if (den.norm2() == 0.0) fail(ErrorCode::degenerate, "mobius_act: cP + d vanishes");
  const Quaternion image = num * den.inverse();
  const double scale = std::sqrt(image.norm2()) + 1.0;
  if (!(image.y > 0.0) || std::abs(image.z) > 1e-12 * scale) {
    fail(ErrorCode::degenerate, "mobius_act: image is not a point of H^3");
  }
  return {image.w, image.x, image.y};
}

HyperbolicPoint mobius_act(const Field& field, const GroupElement& g, const HyperbolicPoint& p) {
  if (!g.has_unit_determinant(field)) {
    fail(ErrorCode::invalid_argument, "mobius_act: group element must have determinant 1");
  }
  return mobius_act_complex(field.to_complex(g.a), field.to_complex(g.b), field.to_complex(g.c),
                            field.to_complex(g.d), p);
}

EisensteinEvaluator::EisensteinEvaluator(const Field& field, EisensteinOptions options)
    : field_(field), zeta_(field), options_(options), caches_(std::make_shared<Caches>()) {
  if (!(options.tail_tolerance > 0.0 && options.tail_tolerance <= 1e-4)) {
    fail(ErrorCode::invalid_argument, "EisensteinEvaluator: tail_tolerance must lie in (0, 1e-4]");
  }
  if (options.max_norm_cutoff < 1) {
    fail(ErrorCode::invalid_argument, "EisensteinEvaluator: max_norm_cutoff must be >= 1");
  }
}

cplx EisensteinEvaluator::fourier_prefactor(double t) const {
  // (|O*| / 2) 2 (2 pi)^{1+it} / (|d|^{(1+it)/2} Gamma(1+it) zeta_K(1+it) cosh(pi t / 2))
  const cplx s(1.0, t);
  const double abs_d = -static_cast<double>(field_.discriminant());
  const cplx log_value = std::log(static_cast<double>(field_.unit_count())) + s * std::log(2.0 * kPi) -
                         0.5 * s * std::log(abs_d) - log_gamma(s) - log_cosh(kPi * t / 2.0);
  return std::exp(log_value) / dedekind_zeta(zeta_, s);
}

cplx EisensteinEvaluator::constant_term(const HyperbolicPoint& p, double t) const {
  if (t == 0.0) return 0.0;
  const cplx s(0.0, t);
  const double lr = std::log(p.r);
  const cplx phi = scattering_phi(zeta_, s);
  const double half_units = 0.5 * field_.unit_count();
  return half_units * (std::exp((1.0 + s) * lr) + phi * std::exp((1.0 - s) * lr));
}

std::int64_t EisensteinEvaluator::truncation_norm(double t, double r_min) const {
  const double ta = std::abs(t);
  const double root_d = field_.sqrt_abs_disc();
  const double prefactor = (t == 0.0) ? 0.0 : std::abs(fourier_prefactor(t));
  const double floor_u = ta + std::max(10.0, 5.0 * std::cbrt(ta));
  for (double u = floor_u;; u += 0.5) {
    const double norm_at_u = std::pow(u * root_d / (4.0 * kPi * r_min), 2);
    if (norm_at_u > static_cast<double>(options_.max_norm_cutoff)) {
      fail(ErrorCode::truncation_failure,
           "eisenstein: certified cutoff exceeds max_norm_cutoff = " + std::to_string(options_.max_norm_cutoff));
    }
    const double gap = std::sqrt(u * u - ta * ta);
    const double kappa = gap / u;
    const double log_bessel = 0.5 * std::log(kPi / 2.0) - 0.5 * std::log(gap) +
                              ta * std::acos(ta / u) - gap + std::log(2.0);
    // omegas per unit u, times the divisor-count bound 4N
    const double density = (2.0 * kPi / root_d) * 2.0 * norm_at_u / u;
    const double decay = kappa - 3.0 / u;
    const double tail = prefactor * r_min * 4.0 * norm_at_u * density * std::exp(log_bessel) / decay;
    if (decay > 0.0 && tail < options_.tail_tolerance) {
      return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(norm_at_u)));
    }
  }
}

std::shared_ptr<const EisensteinEvaluator::Coefficients> EisensteinEvaluator::coefficients(
    double t, std::int64_t X) const {
  const std::pair<double, std::int64_t> key{t, X};
  {
    std::lock_guard<std::mutex> lock(caches_->mutex);
    auto it = caches_->coefficients.find(key);
    if (it != caches_->coefficients.end()) return it->second;
  }
  auto out = std::make_shared<Coefficients>();
  const auto lattice = enumerate_by_norm(field_, X);
  std::unordered_map<std::int64_t, std::size_t> index;
  index.reserve(lattice.elements.size() * 2);
  for (std::size_t i = 0; i < lattice.elements.size(); ++i) {
    const auto& lp = lattice.elements[i];
    index.emplace(coordinate_key(lp.element), i);
    out->elements.push_back(lp.element);
    if (out->norms.empty() || out->norms.back() != lp.norm) {
      out->norms.push_back(lp.norm);
      out->offsets.push_back(i);
    }
  }
  out->offsets.push_back(lattice.elements.size());

  // sigma_{-it}(omega) by running over factorizations omega = d q with d a
  // canonical divisor.
  std::vector<cplx> sigma(lattice.elements.size(), 0.0);
  for (const auto& d : lattice.elements) {
    if (field_.canonical(d.element) != d.element) continue;
    const cplx weight = std::polar(1.0, -t * std::log(static_cast<double>(d.norm)));
    for (const auto& q : lattice.elements) {
      if (d.norm * q.norm > X) break;
      sigma[index.at(coordinate_key(field_.mul(d.element, q.element)))] += weight;
    }
  }
  out->values.resize(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const double n = static_cast<double>(lattice.elements[i].norm);
    out->values[i] = std::polar(1.0, 0.5 * t * std::log(n)) * sigma[i];
  }

  std::lock_guard<std::mutex> lock(caches_->mutex);
  return caches_->coefficients.emplace(key, std::move(out)).first->second;
}

std::shared_ptr<const EisensteinEvaluator::BesselRow> EisensteinEvaluator::bessel_row(
    double t, double r, std::int64_t X, const Coefficients& coeffs) const {
  const auto key = std::make_tuple(t, r, X);
  {
    std::lock_guard<std::mutex> lock(caches_->mutex);
    auto it = caches_->bessel.find(key);
    if (it != caches_->bessel.end()) return it->second;
  }
  auto row = std::make_shared<BesselRow>(coeffs.norms.size());
  const double scale = 4.0 * kPi * r / field_.sqrt_abs_disc();
  for (std::size_t k = 0; k < coeffs.norms.size(); ++k) {
    const double u = scale * std::sqrt(static_cast<double>(coeffs.norms[k]));
    (*row)[k] = bessel_k_scaled_log(std::abs(t), u).value();
  }
  std::lock_guard<std::mutex> lock(caches_->mutex);
  return caches_->bessel.emplace(key, std::move(row)).first->second;
}

cplx EisensteinEvaluator::assemble(const HyperbolicPoint& p, double t, const Coefficients& coeffs,
                                   const std::vector<double>& row) const {
  const cplx head = constant_term(p, t);

  // e(<2 conj(omega) / sqrt(d_K), z>) = exp(-4 pi i Im(omega z) / sqrt|d_K|)
  // factors as alpha^a beta^b for omega = a + b omega_1.
  const double c = -4.0 * kPi / field_.sqrt_abs_disc();
  const cplx z = p.z();
  const double theta_a = c * z.imag();
  const double theta_b = c * (field_.to_complex({0, 1}) * z).imag();
  std::int64_t amax = 0, bmax = 0;
  for (const auto& e : coeffs.elements) {
    amax = std::max(amax, std::abs(e.a));
    bmax = std::max(bmax, std::abs(e.b));
  }
  std::vector<cplx> pa(2 * amax + 1), pb(2 * bmax + 1);
  for (std::int64_t k = -amax; k <= amax; ++k) pa[k + amax] = std::polar(1.0, theta_a * k);
  for (std::int64_t k = -bmax; k <= bmax; ++k) pb[k + bmax] = std::polar(1.0, theta_b * k);

  cplx sum = 0.0;
  for (std::size_t k = 0; k < coeffs.norms.size(); ++k) {
    const double bessel = row[k];
    if (bessel == 0.0) continue;
    cplx shell = 0.0;
    for (std::size_t i = coeffs.offsets[k]; i < coeffs.offsets[k + 1]; ++i) {
      const auto& e = coeffs.elements[i];
      shell += coeffs.values[i] * pa[e.a + amax] * pb[e.b + bmax];
    }
    sum += bessel * shell;
  }
  return head + fourier_prefactor(t) * p.r * sum;
}

cplx EisensteinEvaluator::eval_truncated(const HyperbolicPoint& p, double t, std::int64_t X) const {
  check_window(p, t);
  if (t == 0.0) return 0.0;
  const auto coeffs = coefficients(t, X);
  const auto row = bessel_row(t, p.r, X, *coeffs);
  return assemble(p, t, *coeffs, *row);
}

cplx EisensteinEvaluator::eval_interpolated(const HyperbolicPoint& p, double t, std::int64_t X,
                                            const BesselTable& table) const {
  check_window(p, t);
  if (t == 0.0) return 0.0;
  const auto coeffs = coefficients(t, X);
  std::vector<double> row(coeffs->norms.size());
  const double scale = 4.0 * kPi * p.r / field_.sqrt_abs_disc();
  for (std::size_t k = 0; k < row.size(); ++k) row[k] = table(scale * std::sqrt(static_cast<double>(coeffs->norms[k])));
  return assemble(p, t, *coeffs, row);
}

std::vector<double> EisensteinEvaluator::column_profile(double x, double y, double t, std::int64_t X,
                                                        const BesselTable& table,
                                                        const std::vector<double>& r_values) const {
  for (double r : r_values) check_window({x, y, r}, t);
  std::vector<double> out(r_values.size(), 0.0);
  if (t == 0.0) return out;
  const auto coeffs = coefficients(t, X);
  const double c = -4.0 * kPi / field_.sqrt_abs_disc();
  const cplx z(x, y);
  const double theta_a = c * z.imag();
  const double theta_b = c * (field_.to_complex({0, 1}) * z).imag();
  std::vector<cplx> shells(coeffs->norms.size());
  for (std::size_t k = 0; k < shells.size(); ++k) {
    cplx shell = 0.0;
    for (std::size_t i = coeffs->offsets[k]; i < coeffs->offsets[k + 1]; ++i) {
      const auto& e = coeffs->elements[i];
      shell += coeffs->values[i] * std::polar(1.0, theta_a * static_cast<double>(e.a) + theta_b * static_cast<double>(e.b));
    }
    shells[k] = shell;
  }
  std::vector<double> half_log_norm(shells.size());
  for (std::size_t k = 0; k < shells.size(); ++k) half_log_norm[k] = 0.5 * std::log(static_cast<double>(coeffs->norms[k]));
  const cplx prefactor = fourier_prefactor(t);
  for (std::size_t j = 0; j < r_values.size(); ++j) {
    const double r = r_values[j];
    const double log_scale = std::log(4.0 * kPi * r / field_.sqrt_abs_disc());
    cplx sum = 0.0;
    for (std::size_t k = 0; k < shells.size(); ++k) sum += table.at_log(log_scale + half_log_norm[k]) * shells[k];
    out[j] = std::abs(constant_term({x, y, r}, t) + prefactor * r * sum);
  }
  return out;
}

BesselTable BesselTable::build(double t, double u_lo, double u_hi) {
  if (!(u_lo > 0.0 && u_hi > u_lo)) fail(ErrorCode::invalid_argument, "BesselTable: need 0 < u_lo < u_hi");
  BesselTable table;
  table.t = std::abs(t);
  // about sixteen nodes per oscillation; the phase advances by at most t per
  // unit of log u
  table.h = std::min(0.01, kPi / (8.0 * std::max(table.t, 1.0)));
  table.v0 = std::log(u_lo) - 3.0 * table.h;
  const auto n = static_cast<std::size_t>(std::ceil((std::log(u_hi) - table.v0) / table.h)) + 4;
  table.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    table.values[i] = bessel_k_scaled_log(table.t, std::exp(table.v0 + table.h * static_cast<double>(i))).value();
  }
  return table;
}

double BesselTable::at_log(double log_u) const {
  const double pos = (log_u - v0) / h;
  auto base = static_cast<std::ptrdiff_t>(std::floor(pos)) - 2;
  base = std::clamp<std::ptrdiff_t>(base, 0, static_cast<std::ptrdiff_t>(values.size()) - 6);
  const double x = pos - static_cast<double>(base);
  double total = 0.0;
  for (int i = 0; i < 6; ++i) {
    double weight = 1.0;
    for (int j = 0; j < 6; ++j) {
      if (j != i) weight *= (x - j) / static_cast<double>(i - j);
    }
    total += weight * values[static_cast<std::size_t>(base + i)];
  }
  return total;
}

cplx EisensteinEvaluator::eval(const HyperbolicPoint& p, double t) const {
  check_window(p, t);
  if (t == 0.0) return 0.0;
  return eval_truncated(p, t, round_up_cutoff(truncation_norm(t, p.r)));
}

double check_automorphy(const EisensteinEvaluator& ev, const HyperbolicPoint& p, double t,
                        const GroupElement& g) {
  const HyperbolicPoint q = mobius_act(ev.field(), g, p);
  const cplx base = ev.eval(p, t);
  const cplx moved = ev.eval(q, t);
  return std::abs(moved - base) / (std::abs(base) + 1e-30);
}

double laplacian_residual(const EisensteinEvaluator& ev, const HyperbolicPoint& p, double t, double h) {
  if (!(h >= 1e-4 && h <= 1e-2)) fail(ErrorCode::invalid_argument, "laplacian_residual: h must lie in [1e-4, 1e-2]");
  if (p.r - h < 1e-2) fail(ErrorCode::window, "laplacian_residual: stencil leaves the window");
  const double tt = (t == 0.0) ? 1e-5 : t;
  const std::int64_t X = round_up_cutoff(ev.truncation_norm(tt, p.r - h));
  auto E = [&](double dx, double dy, double dr) {
    return ev.eval_truncated({p.x + dx, p.y + dy, p.r + dr}, tt, X);
  };
  const cplx centre = E(0, 0, 0);
  const cplx exx = E(h, 0, 0) - 2.0 * centre + E(-h, 0, 0);
  const cplx eyy = E(0, h, 0) - 2.0 * centre + E(0, -h, 0);
  const cplx er_plus = E(0, 0, h);
  const cplx er_minus = E(0, 0, -h);
  const cplx err = er_plus - 2.0 * centre + er_minus;
  const cplx er = (er_plus - er_minus) / (2.0 * h);
  const cplx laplace = p.r * p.r * (exx + eyy + err) / (h * h) - p.r * er;
  const double eigen = 1.0 + tt * tt;
  return std::abs(-laplace - eigen * centre) / (eigen * std::abs(centre));
}

std::vector<HyperbolicPoint> box_grid(double x_lo, double x_hi, double y_lo, double y_hi, double r_lo,
                                      double r_hi, int n) {
  if (n < 1) fail(ErrorCode::invalid_argument, "box_grid: n must be >= 1");
  auto at = [n](double lo, double hi, int i) { return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1); };
  std::vector<HyperbolicPoint> out;
  out.reserve(static_cast<std::size_t>(n) * n * n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) out.push_back({at(x_lo, x_hi, i), at(y_lo, y_hi, j), at(r_lo, r_hi, k)});
    }
  }
  return out;
}

namespace {

struct Box {
  double lo[3];
  double hi[3];

  HyperbolicPoint clamp(const double v[3]) const {
    return {std::clamp(v[0], lo[0], hi[0]), std::clamp(v[1], lo[1], hi[1]), std::clamp(v[2], lo[2], hi[2])};
  }
};

// Nelder-Mead ascent of f over the box, started from p with step sizes step.
HyperbolicPoint nelder_mead_max(const std::function<double(const HyperbolicPoint&)>& f, const Box& box,
                                const HyperbolicPoint& p, const double step[3], int max_evals) {
  struct Vertex {
    double v[3];
    double value;
  };
  auto eval = [&](Vertex& x) {
    const HyperbolicPoint q = box.clamp(x.v);
    x.v[0] = q.x;
    x.v[1] = q.y;
    x.v[2] = q.r;
    x.value = f(q);
  };
  std::array<Vertex, 4> simplex;
  for (int i = 0; i < 4; ++i) {
    simplex[i] = {{p.x, p.y, p.r}, 0.0};
    if (i > 0) simplex[i].v[i - 1] += step[i - 1];
    eval(simplex[i]);
  }
  int evals = 4;
  auto by_value = [](const Vertex& a, const Vertex& b) { return a.value > b.value; };
  while (evals < max_evals) {
    std::sort(simplex.begin(), simplex.end(), by_value);
    if (simplex[0].value - simplex[3].value <= 1e-10 * std::abs(simplex[0].value)) break;
    double centroid[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 3; ++k) centroid[k] += simplex[i].v[k] / 3.0;
    }
    auto along = [&](double c) {
      Vertex x{};
      for (int k = 0; k < 3; ++k) x.v[k] = centroid[k] + c * (simplex[3].v[k] - centroid[k]);
      eval(x);
      ++evals;
      return x;
    };
    Vertex reflected = along(-1.0);
    if (reflected.value > simplex[0].value) {
      Vertex expanded = along(-2.0);
      simplex[3] = expanded.value > reflected.value ? expanded : reflected;
    } else if (reflected.value > simplex[2].value) {
      simplex[3] = reflected;
    } else {
      Vertex contracted = along(0.5);
      if (contracted.value > simplex[3].value) {
        simplex[3] = contracted;
      } else {
        for (int i = 1; i < 4; ++i) {
          for (int k = 0; k < 3; ++k) simplex[i].v[k] = simplex[0].v[k] + 0.5 * (simplex[i].v[k] - simplex[0].v[k]);
          eval(simplex[i]);
          ++evals;
        }
      }
    }
  }
  std::sort(simplex.begin(), simplex.end(), by_value);
  return box.clamp(simplex[0].v);
}

}  // namespace

namespace {

// spacing of the distinct values of one coordinate of the grid
double grid_spacing(const std::vector<HyperbolicPoint>& omega, int axis) {
  std::vector<double> v;
  for (const auto& p : omega) v.push_back(axis == 0 ? p.x : axis == 1 ? p.y : p.r);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  if (v.size() < 2) return std::numeric_limits<double>::infinity();
  return (v.back() - v.front()) / static_cast<double>(v.size() - 1);
}

double resolved_sup(const EisensteinEvaluator& ev, const std::vector<HyperbolicPoint>& omega, const Box& box,
                    double t, std::int64_t X, const ScanOptions& options) {
  const double root_d = ev.field().sqrt_abs_disc();
  const double ta = std::max(std::abs(t), 1.0);
  // E oscillates in z with wavelength about 2 pi r / t and in log r with
  // period about 2 pi / t.
  const double wavelength = 2.0 * kPi * box.lo[2] / ta;
  auto axis_values = [&](int axis) {
    const double step = std::min(0.5 * wavelength, 0.5 * grid_spacing(omega, axis));
    const double span = box.hi[axis] - box.lo[axis];
    const int n = std::max(1, static_cast<int>(std::ceil(span / step))) + 1;
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? box.lo[axis] : box.lo[axis] + span * i / (n - 1));
    return out;
  };
  const auto xs = axis_values(0);
  const auto ys = axis_values(1);
  std::vector<double> rs;
  const double r_step = std::min(2.0 * kPi / (4.0 * ta), 0.5 * grid_spacing(omega, 2) / box.hi[2]);
  for (double r = box.lo[2]; r < box.hi[2]; r *= 1.0 + r_step) rs.push_back(r);
  rs.push_back(box.hi[2]);

  const double u_lo = 4.0 * kPi * box.lo[2] / root_d;
  const double u_hi = 4.0 * kPi * box.hi[2] * std::sqrt(static_cast<double>(X)) / root_d;
  const BesselTable bessel = BesselTable::build(t, u_lo, u_hi);

  struct Candidate {
    double value = -1.0;
    HyperbolicPoint point;
  };
  std::vector<Candidate> column_best(xs.size() * ys.size());
  parallel_for(column_best.size(), options.threads, [&](std::size_t c) {
    const double x = xs[c % xs.size()];
    const double y = ys[c / xs.size()];
    const auto profile = ev.column_profile(x, y, t, X, bessel, rs);
    for (std::size_t k = 0; k < rs.size(); ++k) {
      if (profile[k] > column_best[c].value) column_best[c] = {profile[k], {x, y, rs[k]}};
    }
  });
  std::stable_sort(column_best.begin(), column_best.end(),
                   [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  column_best.resize(std::min<std::size_t>(column_best.size(), static_cast<std::size_t>(std::max(options.polish_starts, 1))));

  auto fast = [&](const HyperbolicPoint& q) { return std::abs(ev.eval_interpolated(q, t, X, bessel)); };
  std::vector<double> polished(column_best.size(), 0.0);
  parallel_for(column_best.size(), options.threads, [&](std::size_t i) {
    const HyperbolicPoint start = column_best[i].point;
    const double step[3] = {0.25 * wavelength, 0.25 * wavelength, start.r * 2.0 * kPi / (8.0 * ta)};
    const HyperbolicPoint peak = nelder_mead_max(fast, box, start, step, 200);
    polished[i] = std::abs(ev.eval_truncated(peak, t, X));
  });
  double sup = 0.0;
  for (double v : polished) sup = std::max(sup, v);
  return sup;
}

// least squares of log sup against log t over the upper half of the grid
double upper_half_slope(const std::vector<ScanRow>& rows, double ScanRow::*value) {
  const std::size_t first = rows.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = first; i < rows.size(); ++i) {
    if (rows[i].t <= 0.0 || rows[i].*value <= 0.0) continue;
    const double x = std::log(rows[i].t);
    const double y = std::log(rows[i].*value);
    sx += x; sy += y; sxx += x * x; sxy += x * y; ++n;
  }
  return n >= 2 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : 0.0;
}

}  // namespace

ScanTable supnorm_scan(const EisensteinEvaluator& ev, const std::vector<HyperbolicPoint>& omega,
                       const std::vector<double>& t_grid, const ScanOptions& options) {
  if (omega.empty()) fail(ErrorCode::invalid_argument, "supnorm_scan: empty point set");
  if (t_grid.empty()) fail(ErrorCode::invalid_argument, "supnorm_scan: empty t grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] > 200.0 || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
      fail(ErrorCode::invalid_argument, "supnorm_scan: t grid must increase and stay <= 200");
    }
  }
  Box box{{omega.front().x, omega.front().y, omega.front().r}, {omega.front().x, omega.front().y, omega.front().r}};
  for (const auto& p : omega) {
    const double v[3] = {p.x, p.y, p.r};
    for (int k = 0; k < 3; ++k) {
      box.lo[k] = std::min(box.lo[k], v[k]);
      box.hi[k] = std::max(box.hi[k], v[k]);
    }
  }
  const double r_min = box.lo[2];

  ScanTable table;
  std::vector<double> values(omega.size());
  for (double t : t_grid) {
    const std::int64_t X = round_up_cutoff(ev.truncation_norm(t, r_min));
    parallel_for(omega.size(), options.threads,
                 [&](std::size_t i) { values[i] = std::abs(ev.eval_truncated(omega[i], t, X)); });
    double grid_sup = 0.0;
    for (double v : values) grid_sup = std::max(grid_sup, v);
    double sup = grid_sup;
    if (options.resolve && t != 0.0) sup = std::max(sup, resolved_sup(ev, omega, box, t, X, options));
    table.rows.push_back({t, sup, grid_sup});
  }
  table.fitted_exponent = upper_half_slope(table.rows, &ScanRow::sup_value);
  table.grid_fitted_exponent = upper_half_slope(table.rows, &ScanRow::grid_sup);
  return table;
}

cplx hecke_apply(const EisensteinEvaluator& ev, const RingElement& n, const HyperbolicPoint& p, double t) {
  const Field& f = ev.field();
  if (n.is_zero()) fail(ErrorCode::invalid_argument, "hecke_apply: n must be nonzero");
  const cplx q = std::sqrt(f.to_complex(n));
  cplx total = 0.0;
  for (const auto& d : divisors_up_to_units(f, n)) {
    const RingElement a = *f.divide(n, d);
    for (const auto& b : f.residues_mod(d)) {
      // [[a, b], [0, d]] / q acting as q^{-1} (aP + b) d^{-1} q
      const HyperbolicPoint image =
          mobius_act_complex(f.to_complex(a) / q, f.to_complex(b) / q, 0.0, f.to_complex(d) / q, p);
      total += ev.eval(image, t);
    }
  }
  return total / std::sqrt(static_cast<double>(f.norm(n)));
}

cplx hecke_eigenvalue_predicted(const Field& field, const RingElement& n, double t) {
  const double abs_n = std::sqrt(static_cast<double>(field.norm(n)));
  return std::polar(1.0, t * std::log(abs_n)) * sigma_s(field, n, cplx(0.0, -t));
}

}  // namespace bianchi
