#pragma once

#include <Eigen/Dense>

namespace cvqkd {

inline constexpr double kPhysicalityTol = 1e-9;
inline constexpr double kPseudoInverseThreshold = 1e-12;

using Matrix4 = Eigen::Matrix4d;
using Matrix2 = Eigen::Matrix2d;

/// Two-mode Gaussian covariance matrix in shot-noise units, ordered
/// (x_A, p_A, x_B, p_B). Vacuum variance is 1.
class TwoModeCovariance {
 public:
  TwoModeCovariance() : m_(Matrix4::Identity()) {}
  // Throws DomainError unless the matrix is symmetric to 1e-12 relative.
  explicit TwoModeCovariance(const Matrix4& m);

  const Matrix4& matrix() const { return m_; }
  double operator()(int r, int c) const { return m_(r, c); }

  Matrix2 mode_a() const { return m_.topLeftCorner<2, 2>(); }
  Matrix2 mode_b() const { return m_.bottomRightCorner<2, 2>(); }
  Matrix2 correlations() const { return m_.topRightCorner<2, 2>(); }

  double determinant() const;
  // Second symplectic invariant: det A + det B + 2 det C.
  double second_invariant() const;

 private:
  Matrix4 m_;
};

// Omega = omega (+) omega with omega = [[0, 1], [-1, 0]].
Matrix4 symplectic_form();

struct SymplecticSpectrum {
  double nu1 = 1.0;  // larger
  double nu2 = 1.0;  // smaller
};

// Roots of z^2 - Delta z + det = 0. Throws NonPhysicalMatrix when det or
// Delta is negative, or the discriminant is negative beyond tolerance.
SymplecticSpectrum symplectic_eigenvalues(const TwoModeCovariance& gamma);

// Generic route: moduli of the eigenvalues of i*Omega*gamma.
SymplecticSpectrum symplectic_eigenvalues_generic(const TwoModeCovariance& gamma);

// Smallest eigenvalue of the Hermitian matrix gamma + i*Omega.
double uncertainty_margin(const TwoModeCovariance& gamma);

bool is_physical(const TwoModeCovariance& gamma);

/// Covariance of mode A after Bob homodynes x_B:
///   gamma_A - C (X gamma_B X)^MP C^T,  X = diag(1, 0).
class ConditionalCovariance {
 public:
  explicit ConditionalCovariance(const Matrix2& m) : m_(m) {}
  const Matrix2& matrix() const { return m_; }
  double operator()(int r, int c) const { return m_(r, c); }
  // sqrt(det), the single-mode symplectic eigenvalue.
  double symplectic_eigenvalue() const;

 private:
  Matrix2 m_;
};

ConditionalCovariance condition_on_x_homodyne(const TwoModeCovariance& gamma);

// G(x) = (x+1) log2(x+1) - x log2 x, von Neumann entropy (bits) of a thermal
// mode with mean photon number x.
double bosonic_entropy(double x);

// Entropy of a mode with symplectic eigenvalue nu: G((nu - 1) / 2).
double entropy_of_symplectic(double nu);

}  // namespace cvqkd
