#pragma once

namespace rsp {

enum class TailKind { Normal, ChiSquare };

struct TailDistribution {
  TailKind kind = TailKind::Normal;
  int dof = 1;

  static TailDistribution normal() { return {TailKind::Normal, 1}; }
  static TailDistribution chi_square(int dof) { return {TailKind::ChiSquare, dof}; }
};

double normal_cdf(double x);
double normal_upper_tail(double x);
double chi_square_cdf(double x, int dof);
double chi_square_upper_tail(double x, int dof);

double upper_tail(const TailDistribution& dist, double x);

/// x with P(X > x) = upper_prob, to absolute accuracy 1e-8 (bisection on the CDF).
double tail_quantile(const TailDistribution& dist, double upper_prob);

}  // namespace rsp
