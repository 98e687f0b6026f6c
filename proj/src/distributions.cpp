#include "rsp/distributions.hpp"

#include "rsp/error.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <string>

namespace rsp {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double chi_square_cdf(double x, int dof) {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(0.5 * dof, 0.5 * x);
}

double chi_square_upper_tail(double x, int dof) {
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

double upper_tail(const TailDistribution& dist, double x) {
  return dist.kind == TailKind::Normal ? normal_upper_tail(x) : chi_square_upper_tail(x, dist.dof);
}

double tail_quantile(const TailDistribution& dist, double upper_prob) {
  if (!(upper_prob > 0.0 && upper_prob < 1.0))
    throw Error(ErrorKind::ProbOutOfRange, "upper-tail probability must lie in (0, 1), got " + std::to_string(upper_prob));
  if (dist.kind == TailKind::ChiSquare && dist.dof < 1)
    throw Error(ErrorKind::InvalidParameter, "chi-square needs dof >= 1");

  double lo = 0.0;
  double hi = 0.0;
  if (dist.kind == TailKind::Normal) {
    lo = -40.0;
    hi = 40.0;
  } else {
    hi = std::max(1.0, static_cast<double>(dist.dof));
    while (upper_tail(dist, hi) > upper_prob) hi *= 2.0;
  }
  // upper_tail is decreasing; keep upper_tail(lo) >= p > upper_tail(hi).
  for (int iter = 0; iter < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (upper_tail(dist, mid) > upper_prob)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace rsp
