#pragma once

#include "rsp/asymptotics.hpp"
#include "rsp/network.hpp"
#include "rsp/spectral.hpp"

namespace rsp {

/// Rank-reduced whitening of a singular Gaussian covariance:
/// Sigma = O diag(Lambda) O^T with Lambda descending, M = H L O^T maps
/// N(0, Sigma) to N(0, I_r).
struct Standardizer {
  Matrix source;
  Matrix O;
  Vector Lambda;
  int rank = 0;
  Vector L;
  Matrix M;
};

Standardizer standardizer(const Matrix& sigma, double rank_tol = kRankTolerance);

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  double center = 0.0;
  double half_width = 0.0;
};

/// Z~_n -/+ sigma~ sqrt(Z~_n (1 - Z~_n)) n^{-(gamma - 1/2)} z_theta, clamped to [0, 1].
ConfidenceInterval confidence_interval(double z_tilde_n, long n, double gamma, double c, const SpectralData& spec,
                                       double level);

struct TestResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  double critical_value = 0.0;
  double significance = 0.05;
  bool reject = false;
  RegimeCase regime = RegimeCase::A;
};

/// Normalizing rate of the topology statistic at time n: n^{gamma/2}, n^{1/2} or sqrt(n / ln n).
double test_rate(RegimeCase regime, double gamma, long n);

/// Chi-square test of H0: W = W0, prepared once for the hypothesized network and
/// evaluated on observed states Z_n.
class TopologyTest {
 public:
  TopologyTest(const WeightedNetwork& hypothesized, double gamma, double c, double tol = kRegimeTolerance);

  const SpectralData& spectral() const noexcept { return spec_; }
  const CovarianceReport& covariance() const noexcept { return report_; }
  const Standardizer& whitening() const noexcept { return whitening_; }
  int dof() const noexcept { return whitening_.rank; }

  /// ||T||^2 for state z at time n; throws DegenerateState when Z~_n is 0 or 1.
  double statistic(const Vector& z, long n) const;
  TestResult evaluate(const Vector& z, long n, double significance) const;

 private:
  SpectralData spec_;
  CovarianceReport report_;
  Standardizer whitening_;
  double gamma_;
};

TestResult topology_test(const Vector& z_n, long n, const WeightedNetwork& hypothesized, double gamma, double c,
                         double significance);

}  // namespace rsp
