#pragma once

#include "rsp/network.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace rsp {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Biorthogonal eigen-structure of W.
///
/// Column j of `left` is a unit-norm left eigenvector u_j (W^T u_j = lambda_j u_j),
/// column j of `right` the right eigenvector v_j scaled so that u_h^T v_j = delta_hj
/// under the bilinear (not Hermitian) pairing. Index 0 is the Perron pair:
/// lambda = 1, u = N^{-1/2} 1, v = v1 with strictly positive entries. The remaining
/// eigenvalues are ordered by descending real part, then descending imaginary part.
/// Conjugate eigenvalues carry conjugate eigenvectors, so U V^T is real.
struct SpectralData {
  std::vector<Complex> eigenvalues;
  CMatrix left;
  CMatrix right;
  Vector v1;
  std::optional<Complex> lambda_star;

  int size() const noexcept { return static_cast<int>(eigenvalues.size()); }
  /// Columns u_2..u_N.
  CMatrix U() const { return left.rightCols(size() - 1); }
  /// Columns v_2..v_N.
  CMatrix V() const { return right.rightCols(size() - 1); }
  /// Eigenvalues other than the Perron root, in storage order.
  CVector diag_D() const;
};

/// Tolerances used by decompose.
struct SpectralOptions {
  double cluster_tol = 1e-6;       // eigenvalues closer than this share an eigenspace
  double null_space_tol = 1e-7;    // largest singular value accepted inside an eigenspace
  double max_condition = 1e12;     // of the left eigenvector matrix
  double sign_tol = 1e-10;         // Perron entries below -sign_tol are an error
  double residual_tol = 1e-8;
};

SpectralData decompose(const WeightedNetwork& net, const SpectralOptions& options = {});

enum class RegimeCase { A, B, C };

char to_char(RegimeCase c);

inline constexpr double kRegimeTolerance = 1e-9;

struct RegimeClassification {
  double gamma = 0.0;
  double c = 0.0;
  double tol = kRegimeTolerance;
  RegimeCase regime = RegimeCase::A;
  /// Indices into SpectralData::eigenvalues with Re(lambda) on the critical line 1 - 1/(2c).
  std::vector<int> a_star;
  int m_star() const noexcept { return static_cast<int>(a_star.size()); }
};

/// A: 1/2 < gamma < 1. B: gamma = 1 and Re(lambda*) < 1 - 1/(2c). C: gamma = 1 and
/// Re(lambda*) on the critical line within tol. Anything else is refused.
RegimeClassification classify_regime(const SpectralData& spec, double gamma, double c,
                                     double tol = kRegimeTolerance);

void validate_gamma(double gamma);

struct Reconstruction {
  Matrix matrix;         // real part of u1 v1^T + U D V^T, which should equal W^T
  double max_imag = 0.0;
};

Reconstruction reconstruct(const SpectralData& spec);

}  // namespace rsp
