#pragma once

#include <complex>
#include <stdexcept>

namespace pnc {

using cplx = std::complex<double>;

// Tolerances used throughout the estimation code.
inline constexpr double kSolveResidualTol = 1e-10;
inline constexpr double kMomentRoundTripTol = 1e-12;
inline constexpr double kPsdEigTol = 1e-10;
inline constexpr double kSingularDetTol = 1e-14;

struct numerics_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 2x2 complex matrix, row-major.
struct CMat2 {
  cplx a00{}, a01{}, a10{}, a11{};

  static CMat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static CMat2 diag(cplx d0, cplx d1) { return {d0, 0.0, 0.0, d1}; }
  static CMat2 zero() { return {}; }

  CMat2 operator+(const CMat2& o) const {
    return {a00 + o.a00, a01 + o.a01, a10 + o.a10, a11 + o.a11};
  }
  CMat2 operator-(const CMat2& o) const {
    return {a00 - o.a00, a01 - o.a01, a10 - o.a10, a11 - o.a11};
  }
  CMat2 operator*(double s) const { return {a00 * s, a01 * s, a10 * s, a11 * s}; }
  CMat2 mul(const CMat2& o) const {
    return {a00 * o.a00 + a01 * o.a10, a00 * o.a01 + a01 * o.a11,
            a10 * o.a00 + a11 * o.a10, a10 * o.a01 + a11 * o.a11};
  }
  CMat2 adjoint() const {
    return {std::conj(a00), std::conj(a10), std::conj(a01), std::conj(a11)};
  }
  cplx det() const { return a00 * a11 - a01 * a10; }
  double max_abs() const;
  bool is_hermitian(double tol = 1e-12) const;
  // Hermitian PSD test via the 2x2 eigenvalue closed form.
  bool is_psd(double tol = kPsdEigTol) const;
  bool is_finite() const;
};

CMat2 cmat2_inverse(const CMat2& a);

// Solves A x = b for hermitian PSD A. Throws numerics_error("singular system ...")
// when |det| falls under kSingularDetTol relative to the entry scale.
void cmat2_hermitian_solve(const CMat2& a, const cplx b[2], cplx x[2]);

// Complex Gaussian potential exp(-h^H W h + 2 Re(xi^H h)) in information
// (canonical) form, dim 1 or 2. W may be singular: rank-deficient and flat
// potentials are representable, which is what pilot-position messages need.
// Dim-1 beliefs use xi[0] and W.a00 only.
class GaussianBelief {
 public:
  GaussianBelief() = default;

  static GaussianBelief flat(int dim);
  static GaussianBelief canonical1(cplx xi, double w);
  static GaussianBelief canonical2(const cplx xi[2], const CMat2& w);
  static GaussianBelief from_moments1(cplx m, double k);
  static GaussianBelief from_moments2(const cplx m[2], const CMat2& k);

  int dim() const { return dim_; }
  const cplx* xi() const { return xi_; }
  const CMat2& W() const { return w_; }

  bool proper() const;  // W invertible, so a moment form exists
  void mean(cplx m[2]) const;
  void to_moments(cplx m[2], CMat2& k) const;

  // Product of Gaussian potentials: precisions and information vectors add.
  GaussianBelief product(const GaussianBelief& o) const;

 private:
  int dim_ = 2;
  cplx xi_[2]{};
  CMat2 w_{};
};

}  // namespace pnc
