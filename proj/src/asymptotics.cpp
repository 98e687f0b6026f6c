#include "rsp/asymptotics.hpp"

#include "rsp/error.hpp"
#include "rsp/network.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace rsp {

double sigma_tilde_sq(const SpectralData& spec, double gamma, double c) {
  validate_gamma(gamma);
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidParameter, "c must be positive");
  return c * c * spec.v1.squaredNorm() / (spec.size() * (2.0 * gamma - 1.0));
}

int numerical_rank(const Matrix& symmetric, double rel_tol) {
  if (symmetric.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (symmetric + symmetric.transpose()), Eigen::EigenvaluesOnly);
  const Vector& ev = solver.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) > rel_tol * top) ++rank;
  return rank;
}

SigmaHat sigma_hat(const SpectralData& spec, const RegimeClassification& regime) {
  const int n = spec.size();
  const double c = regime.c;
  SigmaHat out;
  if (n == 1) {
    out.matrix = Matrix::Zero(1, 1);
    return out;
  }
  const CMatrix u = spec.U();
  const CMatrix v = spec.V();
  const CMatrix gram = v.transpose() * v;  // v_h^T v_j, bilinear
  const CVector d = spec.diag_D();
  const Complex critical_sum = 2.0 - 1.0 / c;

  CMatrix s(n - 1, n - 1);
  for (int h = 0; h < n - 1; ++h) {
    for (int j = 0; j < n - 1; ++j) {
      const Complex sum = d(h) + d(j);
      switch (regime.regime) {
        case RegimeCase::A:
          s(h, j) = c / (2.0 - sum) * gram(h, j);
          break;
        case RegimeCase::B: {
          const Complex den = 2.0 * c - c * sum - 1.0;
          if (std::abs(den) < 1e-9)
            throw Error(ErrorKind::RegimeBoundary, "case B kernel denominator vanishes");
          s(h, j) = c * c / den * gram(h, j);
          break;
        }
        case RegimeCase::C: {
          const bool on_line = std::abs(sum.real() - critical_sum.real()) <= regime.tol &&
                               std::abs(sum.imag() - critical_sum.imag()) <= regime.tol;
          s(h, j) = on_line ? c * c * gram(h, j) : Complex(0.0);
          break;
        }
      }
    }
  }
  const CMatrix full = u * s * u.transpose();
  out.matrix = full.real();
  out.max_imag = full.imag().cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, out.matrix.cwiseAbs().maxCoeff());
  if (out.max_imag > 1e-9 * scale)
    throw Error(ErrorKind::BiorthogonalizationFailed,
                "covariance has imaginary residue " + std::to_string(out.max_imag));
  out.rank = numerical_rank(out.matrix);
  return out;
}

double pairwise_sync_variance(const Matrix& sigma_hat, int j, int k) {
  if (j == k) throw Error(ErrorKind::SameVertex, "synchronization variance needs two distinct vertices");
  const int n = static_cast<int>(sigma_hat.rows());
  if (j < 0 || k < 0 || j >= n || k >= n) throw Error(ErrorKind::DimensionMismatch, "vertex index out of range");
  return sigma_hat(j, j) + sigma_hat(k, k) - 2.0 * sigma_hat(j, k);
}

Matrix pairwise_matrix(const Matrix& sigma_hat) {
  const int n = static_cast<int>(sigma_hat.rows());
  Matrix out = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (j != k) out(j, k) = pairwise_sync_variance(sigma_hat, j, k);
  return out;
}

namespace {

void finish_report(CovarianceReport& report, int n) {
  report.sigma_tilde = Matrix::Constant(n, n, report.sigma_tilde_sq);
  report.pairwise = pairwise_matrix(report.sigma_hat);
  report.expected_rank = report.regime.regime == RegimeCase::C ? report.regime.m_star() : n - 1;
  if (report.rank_hat != report.expected_rank)
    report.diagnostic = "numerical rank " + std::to_string(report.rank_hat) + " differs from expected rank " +
                        std::to_string(report.expected_rank);
  const double top = report.sigma_hat.diagonal().cwiseAbs().maxCoeff();
  for (int j = 0; j < n; ++j)
    if (report.sigma_hat(j, j) <= 1e-12 * std::max(top, 1e-300)) report.flagged_vertices.push_back(j);
}

}  // namespace

CovarianceReport covariance_report(const SpectralData& spec, const RegimeClassification& regime) {
  CovarianceReport report;
  report.regime = regime;
  report.sigma_tilde_sq = sigma_tilde_sq(spec, regime.gamma, regime.c);
  SigmaHat sh = sigma_hat(spec, regime);
  report.sigma_hat = std::move(sh.matrix);
  report.rank_hat = sh.rank;
  report.max_imag = sh.max_imag;
  finish_report(report, spec.size());
  return report;
}

double special_vertex_expected_limit(int n, double p, const Vector& z0) {
  return special_vertex_profile(n, p).dot(z0);
}

CovarianceReport closed_form(const ClosedFormExample& example, double gamma, double c, double tol) {
  validate_gamma(gamma);
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidParameter, "c must be positive");
  const int n = example.n;
  if (n < 2) throw Error(ErrorKind::NTooSmall, "closed forms need N >= 2");

  double lambda = 0.0;
  Matrix shape;
  double perron_norm_sq = 0.0;  // ||v1||^2 / N
  switch (example.kind) {
    case ExampleKind::MeanField: {
      const double alpha = example.parameter;
      if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorKind::AlphaOutOfRange, "alpha must lie in (0, 1]");
      lambda = 1.0 - alpha;
      shape = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / n);
      perron_norm_sq = 1.0 / n;
      break;
    }
    case ExampleKind::SpecialVertex: {
      const double p = example.parameter;
      if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::POutOfRange, "p must lie in (0, 1)");
      lambda = 0.0;
      const Vector a = special_vertex_profile(n, p);
      const Vector ones = Vector::Ones(n);
      shape = Matrix::Identity(n, n) + a.squaredNorm() * ones * ones.transpose() -
              (ones * a.transpose() + a * ones.transpose());
      perron_norm_sq = a.squaredNorm();
      break;
    }
    default:
      throw Error(ErrorKind::UnsupportedExample, "no closed form for this example");
  }

  CovarianceReport report;
  report.regime.gamma = gamma;
  report.regime.c = c;
  report.regime.tol = tol;
  report.sigma_tilde_sq = c * c * perron_norm_sq / (2.0 * gamma - 1.0);

  const double critical = 1.0 - 1.0 / (2.0 * c);
  double factor = 0.0;
  if (gamma < 1.0) {
    report.regime.regime = RegimeCase::A;
    factor = c / (2.0 * (1.0 - lambda));
  } else if (lambda - critical < -tol) {
    report.regime.regime = RegimeCase::B;
    factor = c * c / (2.0 * c * (1.0 - lambda) - 1.0);
  } else if (lambda - critical <= tol) {
    report.regime.regime = RegimeCase::C;
    for (int j = 1; j < n; ++j) report.regime.a_star.push_back(j);
    factor = c * c;
  } else {
    throw Error(ErrorKind::UncoveredRegime, "gamma = 1 with Re(lambda*) above the critical value");
  }
  report.sigma_hat = factor * shape;
  report.rank_hat = numerical_rank(report.sigma_hat);
  finish_report(report, n);
  return report;
}

long appendix_start_index(const AppendixOracleInput& input) {
  const double a_max = std::max(input.alpha1.real(), input.alpha2.real());
  auto rate = [&](long m) { return input.c / std::pow(static_cast<double>(m), input.gamma); };
  if (input.m0) {
    if (*input.m0 < 2 || !(a_max * rate(*input.m0) < 1.0))
      throw Error(ErrorKind::DomainError, "m0 must be >= 2 with max(a1, a2) r_m0 < 1");
    return *input.m0;
  }
  long m = 2;
  while (!(a_max * rate(m) < 1.0)) ++m;
  return m;
}

namespace {

void validate_appendix(const AppendixOracleInput& input) {
  validate_gamma(input.gamma);
  if (!(input.c > 0.0)) throw Error(ErrorKind::InvalidParameter, "c must be positive");
  if (!(input.alpha1.real() > 0.0) || !(input.alpha2.real() > 0.0))
    throw Error(ErrorKind::DomainError, "alpha_1 and alpha_2 need positive real parts");
}

enum class AppendixCase { Power, Log };

AppendixCase appendix_case(const AppendixOracleInput& input) {
  if (input.gamma < 1.0) return AppendixCase::Power;
  const double s = input.c * (input.alpha1.real() + input.alpha2.real());
  if (std::abs(s - 1.0) <= 1e-12) return AppendixCase::Log;
  if (s > 1.0) return AppendixCase::Power;
  throw Error(ErrorKind::DomainError, "gamma = 1 requires c (a1 + a2) >= 1");
}

// log(1 - alpha r) with the modulus computed through log1p.
Complex log_one_minus(const Complex& alpha, double r) {
  const double a = alpha.real();
  const double b = alpha.imag();
  const double mod = 0.5 * std::log1p(-2.0 * a * r + std::norm(alpha) * r * r);
  return {mod, std::atan2(-b * r, 1.0 - a * r)};
}

}  // namespace

Complex appendix_limit_partial(const AppendixOracleInput& input) {
  validate_appendix(input);
  const AppendixCase kind = appendix_case(input);
  const long m0 = appendix_start_index(input);
  if (input.n < m0) throw Error(ErrorKind::DomainError, "n must be >= m0");

  // Walk k = n .. m0 keeping log(p_{n,1} p_{n,2} l_{k,1} l_{k,2}) = sum_{m=k+1}^n log terms.
  Complex tail = 0.0;
  Complex sum = 0.0;
  Complex compensation = 0.0;
  for (long k = input.n; k >= m0; --k) {
    const double r = input.c / std::pow(static_cast<double>(k), input.gamma);
    const Complex term = r * r * std::exp(tail);
    const Complex y = term - compensation;
    const Complex t = sum + y;
    compensation = (t - sum) - y;
    sum = t;
    tail += log_one_minus(input.alpha1, r) + log_one_minus(input.alpha2, r);
  }
  const double nd = static_cast<double>(input.n);
  const double norm = kind == AppendixCase::Log ? nd / std::log(nd) : std::pow(nd, input.gamma);
  return norm * sum;
}

Complex appendix_limit_value(const AppendixOracleInput& input) {
  validate_appendix(input);
  const Complex s = input.alpha1 + input.alpha2;
  const double c = input.c;
  if (appendix_case(input) == AppendixCase::Log)
    return std::abs(input.alpha1.imag() + input.alpha2.imag()) <= 1e-12 ? Complex(c * c) : Complex(0.0);
  if (input.gamma < 1.0) return c / s;
  return c * c / (c * s - 1.0);
}

}  // namespace rsp
