// Normalized odd Jacobi theta function in additive coordinates.
//
//   theta(x) = sin(pi x)/pi * prod_{s=1..N} (1 - q^s e^{2 pi i x})(1 - q^s e^{-2 pi i x})
//                            * prod_{s=1..N} (1 - q^s)^{-2},     q = e^{2 pi i tau}.
//
// The half-power prefactor (u^{1/2} - u^{-1/2})/(2 pi i) with u^{1/2} = e^{pi i x}
// equals sin(pi x)/pi; it is evaluated that way so that values near the zero at
// x = 0 keep full relative precision. With this normalization theta'(0) = 1.

#ifndef ELLHECKE_THETA_HPP
#define ELLHECKE_THETA_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace ellhecke {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

class ThetaRangeError : public std::range_error {
public:
  using std::range_error::range_error;
};

/// Modular parameter, truncation and tolerances. Immutable; the powers q^s and
/// the normalizing product are precomputed at construction.
class ThetaParams {
public:
  ThetaParams() : ThetaParams(cplx{0.0, 0.75}) {}

  explicit ThetaParams(cplx tau, int truncation = 64, double tol_abs = 1e-9,
                       double tol_rel = 1e-9)
      : tau_(tau), truncation_(truncation), tol_abs_(tol_abs), tol_rel_(tol_rel) {
    if (!std::isfinite(tau.real()) || !std::isfinite(tau.imag()))
      throw std::domain_error("theta: tau is not finite");
    if (tau.imag() <= 0.0)
      throw std::domain_error("theta: Im(tau) must be positive");
    if (truncation < 1)
      throw std::domain_error("theta: truncation must be >= 1");
    if (!(tol_abs > 0.0) || !(tol_rel > 0.0))
      throw std::domain_error("theta: tolerances must be positive");
    q_ = std::exp(2.0 * pi * I * tau);
    qpow_.resize(static_cast<std::size_t>(truncation));
    cplx qs = 1.0;
    cplx norm = 1.0;
    for (int s = 0; s < truncation; ++s) {
      qs *= q_;
      qpow_[static_cast<std::size_t>(s)] = qs;
      norm *= (1.0 - qs) * (1.0 - qs);
    }
    inv_norm_ = 1.0 / norm;
  }

  cplx tau() const { return tau_; }
  cplx q() const { return q_; }
  int truncation() const { return truncation_; }
  double tol_abs() const { return tol_abs_; }
  double tol_rel() const { return tol_rel_; }

  /// |q|^{N+1}/(1-|q|): bound on the neglected tail of the product at Im(x) = 0.
  double tail_bound() const {
    double aq = std::abs(q_);
    return std::pow(aq, truncation_ + 1) / (1.0 - aq);
  }

  const std::vector<cplx>& q_powers() const { return qpow_; }
  cplx inverse_norm() const { return inv_norm_; }

  ThetaParams with_truncation(int n) const { return ThetaParams(tau_, n, tol_abs_, tol_rel_); }

private:
  cplx tau_;
  int truncation_;
  double tol_abs_;
  double tol_rel_;
  cplx q_;
  std::vector<cplx> qpow_;
  cplx inv_norm_;
};

/// Largest |Im x| accepted by theta(): the factors q^s e^{+-2 pi i x} must decay
/// well inside the truncation window.
inline double theta_imag_limit(const ThetaParams& p) {
  return 0.5 * p.tau().imag() * p.truncation();
}

inline cplx theta(cplx x, const ThetaParams& p) {
  if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
    throw std::domain_error("theta: argument is not finite");
  if (std::abs(x.imag()) > theta_imag_limit(p) || 2.0 * pi * std::abs(x.imag()) > 600.0)
    throw ThetaRangeError("theta: |Im x| = " + std::to_string(std::abs(x.imag())) +
                          " is outside the certified truncation window");
  const cplx u = std::exp(2.0 * pi * I * x);
  const cplx uinv = 1.0 / u;
  cplx prod = std::sin(pi * x) / pi;
  for (const cplx& qs : p.q_powers())
    prod *= (1.0 - qs * u) * (1.0 - qs * uinv);
  return prod * p.inverse_norm();
}

/// d theta / dx at x = 0 from central differences at h and h/2 combined by
/// Richardson extrapolation.
inline cplx theta_derivative_at_zero(const ThetaParams& p, double h = 1e-4) {
  auto central = [&](double step) {
    return (theta(cplx{step, 0.0}, p) - theta(cplx{-step, 0.0}, p)) / (2.0 * step);
  };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

}  // namespace ellhecke

#endif  // ELLHECKE_THETA_HPP
