#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "bianchi/quadfield.hpp"

namespace bianchi {

/// Field plus accuracy target and a shared memo table. Copies share the
/// table, which is guarded by a mutex.
class ZetaContext {
 public:
  explicit ZetaContext(const Field& field, double precision_target = 1e-10);

  const Field& field() const { return field_; }
  double precision_target() const { return precision_target_; }

  std::complex<double> zeta(std::complex<double> s) const;

 private:
  struct Cache {
    std::mutex mutex;
    std::map<std::pair<double, double>, std::complex<double>> values;
  };

  Field field_;
  double precision_target_;
  std::shared_ptr<Cache> cache_;
};

struct CompletedZetaValue {
  std::complex<double> s;
  std::complex<double> lambda_value;
};

/// Kronecker symbol (d / n) for n >= 1.
int kronecker_character(int d, std::int64_t n);

/// Hurwitz zeta by Euler-Maclaurin summation; valid for any s != 1 and
/// 0 < a <= 1.
std::complex<double> hurwitz_zeta(std::complex<double> s, double a);

std::complex<double> riemann_zeta(std::complex<double> s);

/// L(s, chi_d) for the Kronecker character of a fundamental discriminant d.
std::complex<double> dirichlet_l(std::complex<double> s, int d);

/// zeta(s) L(s, chi_{d_K}) on the supported window Re s > 1/2, |Im s| <= 1e3.
std::complex<double> dedekind_zeta(const ZetaContext& ctx, std::complex<double> s);

/// The same product without the window check, for use on Re s <= 1/2.
std::complex<double> dedekind_zeta_continued(const Field& field, std::complex<double> s);

/// (1 / |units|) sum over nonzero omega with N(omega) <= X of N(omega)^{-s},
/// plus the leading lattice-count tail. Intended for Re s >= 2.
std::complex<double> dedekind_zeta_lattice_sum(const Field& field, std::complex<double> s,
                                               std::int64_t X = 4'000'000);

CompletedZetaValue completed_lambda(const ZetaContext& ctx, std::complex<double> s);

/// phi(s) = (2 pi / (s sqrt|d_K|)) zeta_K(s) / zeta_K(1 + s)
std::complex<double> scattering_phi(const ZetaContext& ctx, std::complex<double> s);

}  // namespace bianchi
