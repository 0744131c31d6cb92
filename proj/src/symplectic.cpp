#include "cvqkd/symplectic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>

#include "cvqkd/errors.hpp"

namespace cvqkd {

namespace {

// No x-p cross terms: gamma is the direct sum of an x block and a p block.
bool quadratures_decoupled(const Matrix4& m) {
  return m(0, 1) == 0.0 && m(0, 3) == 0.0 && m(2, 1) == 0.0 && m(2, 3) == 0.0;
}

}  // namespace

TwoModeCovariance::TwoModeCovariance(const Matrix4& m) : m_(m) {
  if (!m.allFinite()) {
    throw DomainError("covariance matrix has non-finite entries");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("covariance matrix is not symmetric");
  }
  m_ = 0.5 * (m + m.transpose());
}

double TwoModeCovariance::determinant() const {
  if (!quadratures_decoupled(m_)) return m_.determinant();
  return (m_(0, 0) * m_(2, 2) - m_(0, 2) * m_(0, 2)) * (m_(1, 1) * m_(3, 3) - m_(1, 3) * m_(1, 3));
}

double TwoModeCovariance::second_invariant() const {
  return mode_a().determinant() + mode_b().determinant() +
         2.0 * correlations().determinant();
}

Matrix4 symplectic_form() {
  Matrix4 omega = Matrix4::Zero();
  omega(0, 1) = 1.0;
  omega(1, 0) = -1.0;
  omega(2, 3) = 1.0;
  omega(3, 2) = -1.0;
  return omega;
}

namespace {

struct Invariants {
  double det;
  double delta;
  double disc;  // delta^2 - 4 det
};

Invariants invariants_of(const TwoModeCovariance& gamma) {
  const Matrix4& m = gamma.matrix();
  const double delta = gamma.second_invariant();
  const double det = gamma.determinant();
  if (!quadratures_decoupled(m)) {
    return {det, delta, delta * delta - 4.0 * det};
  }
  const double ax = m(0, 0), ap = m(1, 1), bx = m(2, 2), bp = m(3, 3);
  const double cx = m(0, 2), cp = m(1, 3);
  // Factored discriminant; exact zero for pure symmetric states instead of
  // the rounding noise of delta^2 - 4 det.
  const double diff = ax * ap - bx * bp;
  const double disc = diff * diff + 4.0 * (cx * ap + cp * bx) * (cx * bp + cp * ax);
  return {det, delta, disc};
}

}  // namespace

SymplecticSpectrum symplectic_eigenvalues(const TwoModeCovariance& gamma) {
  if (Eigen::LLT<Matrix4>(gamma.matrix()).info() != Eigen::Success) {
    throw NonPhysicalMatrix("covariance matrix is not positive definite");
  }
  auto [det, delta, disc] = invariants_of(gamma);
  const double scale = std::max(1.0, delta * delta);
  if (det < -kPhysicalityTol * scale || delta < -kPhysicalityTol * std::sqrt(scale)) {
    throw NonPhysicalMatrix("negative symplectic invariant (det=" + std::to_string(det) +
                            ", delta=" + std::to_string(delta) + ")");
  }
  if (disc < 0.0) {
    if (disc < -kPhysicalityTol * scale) {
      throw NonPhysicalMatrix("complex symplectic eigenvalues (discriminant " +
                              std::to_string(disc) + ")");
    }
    disc = 0.0;
  }
  const double z_plus = 0.5 * (std::max(delta, 0.0) + std::sqrt(disc));
  // det / z_plus avoids the cancellation in (delta - sqrt(disc)) / 2.
  const double z_minus = z_plus > 0.0 ? std::max(det, 0.0) / z_plus : 0.0;
  return {std::sqrt(z_plus), std::sqrt(z_minus)};
}

SymplecticSpectrum symplectic_eigenvalues_generic(const TwoModeCovariance& gamma) {
  // Omega*gamma is real with eigenvalues +-i nu_k.
  const Matrix4 og = symplectic_form() * gamma.matrix();
  Eigen::EigenSolver<Matrix4> solver(og, /*computeEigenvectors=*/false);
  std::array<double, 4> moduli{};
  for (int k = 0; k < 4; ++k) {
    moduli[k] = std::abs(solver.eigenvalues()[k]);
  }
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  return {moduli[0], moduli[2]};
}

double uncertainty_margin(const TwoModeCovariance& gamma) {
  using Complex4 = Eigen::Matrix4cd;
  const Complex4 h = gamma.matrix().cast<std::complex<double>>() +
                     std::complex<double>(0.0, 1.0) * symplectic_form().cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Complex4> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_physical(const TwoModeCovariance& gamma) {
  return uncertainty_margin(gamma) >= -kPhysicalityTol;
}

double ConditionalCovariance::symplectic_eigenvalue() const {
  return std::sqrt(std::max(m_.determinant(), 0.0));
}

ConditionalCovariance condition_on_x_homodyne(const TwoModeCovariance& gamma) {
  const double v_xb = gamma(2, 2);
  if (v_xb < kPseudoInverseThreshold) {
    throw DegenerateMeasurement("homodyne on x_B with variance " + std::to_string(v_xb));
  }
  // (X gamma_B X)^MP = diag(1/v_xb, 0)
  Matrix2 projector_inverse = Matrix2::Zero();
  projector_inverse(0, 0) = 1.0 / v_xb;
  const Matrix2 c = gamma.correlations();
  Matrix2 cond = gamma.mode_a() - c * projector_inverse * c.transpose();
  cond = 0.5 * (cond + cond.transpose()).eval();
  return ConditionalCovariance(cond);
}

double bosonic_entropy(double x) {
  if (x < -1e-12 || std::isnan(x)) {
    throw DomainError("bosonic entropy argument must be >= 0, got " + std::to_string(x));
  }
  if (x <= 0.0) {
    return 0.0;
  }
  // Same as (x+1) log2(x+1) - x log2 x without the cancellation for large x.
  return std::log2(x + 1.0) + x * std::log1p(1.0 / x) / std::numbers::ln2;
}

double entropy_of_symplectic(double nu) {
  if (nu < 1.0 - kPhysicalityTol) {
    throw NonPhysicalMatrix("symplectic eigenvalue " + std::to_string(nu) + " below 1");
  }
  return bosonic_entropy(std::max(0.0, 0.5 * (nu - 1.0)));
}

}  // namespace cvqkd
