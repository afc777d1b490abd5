#include "core/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pnc {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

double CMat2::max_abs() const {
  return std::max(std::max(std::abs(a00), std::abs(a01)),
                  std::max(std::abs(a10), std::abs(a11)));
}

bool CMat2::is_hermitian(double tol) const {
  const double scale = std::max(max_abs(), 1.0);
  return std::abs(a01 - std::conj(a10)) <= tol * scale &&
         std::abs(a00.imag()) <= tol * scale && std::abs(a11.imag()) <= tol * scale;
}

bool CMat2::is_psd(double tol) const {
  if (!is_hermitian(1e-9)) return false;
  const double tr = a00.real() + a11.real();
  const double dt = det().real();
  const double disc = std::max(tr * tr - 4.0 * dt, 0.0);
  const double lo = 0.5 * (tr - std::sqrt(disc));
  const double hi = 0.5 * (tr + std::sqrt(disc));
  return lo >= -tol * std::max(std::abs(hi), 1.0);
}

bool CMat2::is_finite() const {
  return finite(a00) && finite(a01) && finite(a10) && finite(a11);
}

CMat2 cmat2_inverse(const CMat2& a) {
  const cplx d = a.det();
  const double scale = a.max_abs();
  if (std::abs(d) <= kSingularDetTol * scale * scale)
    throw numerics_error("non-invertible covariance (|det|=" +
                         std::to_string(std::abs(d)) + ", scale=" +
                         std::to_string(scale) + ")");
  const cplx inv_d = 1.0 / d;
  return {a.a11 * inv_d, -a.a01 * inv_d, -a.a10 * inv_d, a.a00 * inv_d};
}

void cmat2_hermitian_solve(const CMat2& a, const cplx b[2], cplx x[2]) {
  const cplx d = a.det();
  const double scale = a.max_abs();
  if (std::abs(d) <= kSingularDetTol * scale * scale)
    throw numerics_error("singular system (|det|=" + std::to_string(std::abs(d)) +
                         ", scale=" + std::to_string(scale) + ")");
  const cplx inv_d = 1.0 / d;
  x[0] = (a.a11 * b[0] - a.a01 * b[1]) * inv_d;
  x[1] = (a.a00 * b[1] - a.a10 * b[0]) * inv_d;
}

GaussianBelief GaussianBelief::flat(int dim) {
  GaussianBelief g;
  g.dim_ = dim;
  return g;
}

GaussianBelief GaussianBelief::canonical1(cplx xi, double w) {
  if (!finite(xi) || !std::isfinite(w) || w < 0.0)
    throw numerics_error("invalid scalar canonical parameters");
  GaussianBelief g;
  g.dim_ = 1;
  g.xi_[0] = xi;
  g.w_.a00 = w;
  return g;
}

GaussianBelief GaussianBelief::canonical2(const cplx xi[2], const CMat2& w) {
  if (!finite(xi[0]) || !finite(xi[1]) || !w.is_finite())
    throw numerics_error("non-finite canonical parameters");
  if (!w.is_psd()) throw numerics_error("precision not hermitian PSD");
  GaussianBelief g;
  g.dim_ = 2;
  g.xi_[0] = xi[0];
  g.xi_[1] = xi[1];
  g.w_ = w;
  return g;
}

GaussianBelief GaussianBelief::from_moments1(cplx m, double k) {
  if (!(k > 0.0) || !std::isfinite(k) || !finite(m))
    throw numerics_error("non-invertible covariance");
  return canonical1(m / k, 1.0 / k);
}

GaussianBelief GaussianBelief::from_moments2(const cplx m[2], const CMat2& k) {
  const CMat2 w = cmat2_inverse(k);
  cplx xi[2];
  cmat2_hermitian_solve(k, m, xi);
  GaussianBelief g;
  g.dim_ = 2;
  g.xi_[0] = xi[0];
  g.xi_[1] = xi[1];
  // Symmetrize: the inverse of a hermitian matrix picks up rounding skew.
  g.w_ = (w + w.adjoint()) * 0.5;
  return g;
}

bool GaussianBelief::proper() const {
  if (dim_ == 1) return w_.a00.real() > 0.0;
  const double scale = w_.max_abs();
  return std::abs(w_.det()) > kSingularDetTol * scale * scale;
}

void GaussianBelief::mean(cplx m[2]) const {
  if (dim_ == 1) {
    if (!proper()) throw numerics_error("improper belief has no mean");
    m[0] = xi_[0] / w_.a00.real();
    m[1] = 0.0;
    return;
  }
  cmat2_hermitian_solve(w_, xi_, m);
}

void GaussianBelief::to_moments(cplx m[2], CMat2& k) const {
  if (dim_ == 1) {
    if (!proper()) throw numerics_error("improper belief has no moment form");
    k = CMat2::diag(1.0 / w_.a00.real(), 0.0);
    m[0] = xi_[0] / w_.a00.real();
    m[1] = 0.0;
    return;
  }
  k = cmat2_inverse(w_);
  k = (k + k.adjoint()) * 0.5;
  cmat2_hermitian_solve(w_, xi_, m);
}

GaussianBelief GaussianBelief::product(const GaussianBelief& o) const {
  if (dim_ != o.dim_) throw numerics_error("belief dimension mismatch");
  GaussianBelief g;
  g.dim_ = dim_;
  g.xi_[0] = xi_[0] + o.xi_[0];
  g.xi_[1] = xi_[1] + o.xi_[1];
  g.w_ = w_ + o.w_;
  return g;
}

}  // namespace pnc
