#include "rsp/inference.hpp"

#include "rsp/distributions.hpp"
#include "rsp/dynamics.hpp"
#include "rsp/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace rsp {

Standardizer standardizer(const Matrix& sigma, double rank_tol) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch, "covariance must be a non-empty square matrix");
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-9)
    throw Error(ErrorKind::NotSymmetric, "covariance is not symmetric");

  const int n = static_cast<int>(sigma.rows());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (sigma + sigma.transpose()));
  Standardizer out;
  out.source = sigma;
  // Eigen sorts ascending; flip to descending.
  out.Lambda = solver.eigenvalues().reverse();
  out.O = solver.eigenvectors().rowwise().reverse();

  const double top = std::max(out.Lambda(0), 0.0);
  if (out.Lambda(n - 1) < -1e-9 * top)
    throw Error(ErrorKind::NegativeEigenvalue,
                "covariance has eigenvalue " + std::to_string(out.Lambda(n - 1)) + " below zero");
  out.L = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (out.Lambda(i) > rank_tol * top && top > 0.0) {
      out.L(i) = 1.0 / std::sqrt(out.Lambda(i));
      ++out.rank;
    }
  }
  if (out.rank == 0) throw Error(ErrorKind::RankZero, "covariance has no positive eigenvalue");
  out.M = out.L.head(out.rank).asDiagonal() * out.O.leftCols(out.rank).transpose();
  return out;
}

ConfidenceInterval confidence_interval(double z_tilde_n, long n, double gamma, double c, const SpectralData& spec,
                                       double level) {
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorKind::ProbOutOfRange, "level must lie in (0, 1)");
  if (n < 1) throw Error(ErrorKind::InvalidParameter, "n must be >= 1");
  if (!(z_tilde_n > 0.0 && z_tilde_n < 1.0))
    throw Error(ErrorKind::DegenerateState, "Z~_n = " + std::to_string(z_tilde_n) + " leaves no variance estimate");
  const double sigma = std::sqrt(sigma_tilde_sq(spec, gamma, c));
  const double z_theta = tail_quantile(TailDistribution::normal(), 0.5 * (1.0 - level));
  ConfidenceInterval ci;
  ci.level = level;
  ci.center = z_tilde_n;
  ci.half_width = sigma * std::sqrt(z_tilde_n * (1.0 - z_tilde_n)) *
                  std::pow(static_cast<double>(n), -(gamma - 0.5)) * z_theta;
  ci.lower = std::max(0.0, z_tilde_n - ci.half_width);
  ci.upper = std::min(1.0, z_tilde_n + ci.half_width);
  return ci;
}

double test_rate(RegimeCase regime, double gamma, long n) {
  const double nd = static_cast<double>(n);
  switch (regime) {
    case RegimeCase::A: return std::pow(nd, 0.5 * gamma);
    case RegimeCase::B: return std::sqrt(nd);
    case RegimeCase::C:
      if (n < 2) throw Error(ErrorKind::InvalidParameter, "logarithmic rate needs n >= 2");
      return std::sqrt(nd / std::log(nd));
  }
  return 0.0;
}

TopologyTest::TopologyTest(const WeightedNetwork& hypothesized, double gamma, double c, double tol)
    : spec_(decompose(hypothesized)),
      report_(covariance_report(spec_, classify_regime(spec_, gamma, c, tol))),
      whitening_(standardizer(report_.sigma_hat)),
      gamma_(gamma) {
  if (whitening_.rank != report_.expected_rank)
    throw Error(ErrorKind::RankMismatch, "covariance rank " + std::to_string(whitening_.rank) +
                                             " differs from the expected " + std::to_string(report_.expected_rank));
}

double TopologyTest::statistic(const Vector& z, long n) const {
  const Projection proj = project(spec_, z);
  if (!(proj.z_tilde > 0.0 && proj.z_tilde < 1.0))
    throw Error(ErrorKind::DegenerateState, "Z~_n = " + std::to_string(proj.z_tilde));
  const double scale = test_rate(report_.regime.regime, gamma_, n) / std::sqrt(proj.z_tilde * (1.0 - proj.z_tilde));
  const Vector t = scale * (whitening_.M * proj.z_hat);
  return t.squaredNorm();
}

TestResult TopologyTest::evaluate(const Vector& z, long n, double significance) const {
  if (!(significance > 0.0 && significance < 1.0))
    throw Error(ErrorKind::ProbOutOfRange, "significance must lie in (0, 1)");
  TestResult out;
  out.statistic = statistic(z, n);
  out.dof = dof();
  out.significance = significance;
  out.regime = report_.regime.regime;
  out.critical_value = tail_quantile(TailDistribution::chi_square(out.dof), significance);
  out.p_value = chi_square_upper_tail(out.statistic, out.dof);
  out.reject = out.p_value < significance;
  return out;
}

TestResult topology_test(const Vector& z_n, long n, const WeightedNetwork& hypothesized, double gamma, double c,
                         double significance) {
  return TopologyTest(hypothesized, gamma, c).evaluate(z_n, n, significance);
}

}  // namespace rsp
