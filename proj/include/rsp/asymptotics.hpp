#pragma once

#include "rsp/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rsp {

/// c^2 ||v1||^2 / (N (2 gamma - 1)): asymptotic variance of the Perron component.
double sigma_tilde_sq(const SpectralData& spec, double gamma, double c);

struct SigmaHat {
  Matrix matrix;
  int rank = 0;
  double max_imag = 0.0;
};

/// Relative threshold (to the largest eigenvalue) for the numerical rank.
inline constexpr double kRankTolerance = 1e-10;

int numerical_rank(const Matrix& symmetric, double rel_tol = kRankTolerance);

/// Real part of U S U^T with the regime's kernel on index pairs 2..N:
///   A: c / (2 - (l_h + l_j)) v_h^T v_j
///   B: c^2 / (2c - c (l_h + l_j) - 1) v_h^T v_j
///   C: c^2 v_h^T v_j when l_h + l_j = 2 - 1/c, else 0
SigmaHat sigma_hat(const SpectralData& spec, const RegimeClassification& regime);

/// S[j][j] + S[k][k] - 2 S[j][k].
double pairwise_sync_variance(const Matrix& sigma_hat, int j, int k);
Matrix pairwise_matrix(const Matrix& sigma_hat);

struct CovarianceReport {
  RegimeClassification regime;
  double sigma_tilde_sq = 0.0;
  Matrix sigma_tilde;  // sigma_tilde_sq * 1 1^T
  Matrix sigma_hat;
  int rank_hat = 0;
  int expected_rank = 0;  // N - 1 in cases A/B, m* in case C
  double max_imag = 0.0;
  Matrix pairwise;
  /// Vertices whose diagonal entry vanishes (possible only in case C).
  std::vector<int> flagged_vertices;
  /// Empty when the numerical rank agrees with the theory.
  std::string diagnostic;
};

CovarianceReport covariance_report(const SpectralData& spec, const RegimeClassification& regime);

enum class ExampleKind { MeanField, SpecialVertex };

struct ClosedFormExample {
  ExampleKind kind = ExampleKind::MeanField;
  int n = 2;
  double parameter = 1.0;  // alpha for mean-field, p for special vertex
};

/// Analytic covariance report for the mean-field and special-vertex families.
/// The regime is derived analytically from (gamma, c) and the known spectrum.
CovarianceReport closed_form(const ClosedFormExample& example, double gamma, double c,
                             double tol = kRegimeTolerance);

/// E[Z_inf] = N^{-1/2} v1^T Z0 for the special-vertex network, i.e. a_p^T Z0.
double special_vertex_expected_limit(int n, double p, const Vector& z0);

struct AppendixOracleInput {
  Complex alpha1;
  Complex alpha2;
  double gamma = 0.75;
  double c = 1.0;
  std::optional<long> m0;  // default: first m >= 2 with max(a1, a2) c / m^gamma < 1
  long n = 1000;
};

/// Start index used by appendix_limit_partial.
long appendix_start_index(const AppendixOracleInput& input);

/// norm(n) p_{n,1} p_{n,2} sum_{k=m0}^n r_k^2 l_{k,1} l_{k,2}, r_k = c / k^gamma,
/// p_{n,j} = prod_{m=m0}^n (1 - alpha_j r_m), l = 1/p. norm(n) is n^gamma, or n / ln n
/// when gamma = 1 and c (a1 + a2) = 1. Products are accumulated as logs.
Complex appendix_limit_partial(const AppendixOracleInput& input);

/// The corresponding limit value.
Complex appendix_limit_value(const AppendixOracleInput& input);

}  // namespace rsp
