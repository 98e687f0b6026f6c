#include "rsp/distributions.hpp"
#include "rsp/error.hpp"
#include "rsp/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace rsp;

namespace {

/// Regularized upper incomplete gamma Q(a, x): power series below a + 1, Lentz continued fraction above.
double upper_gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  const double log_front = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a, sum = term;
    for (int k = 1; k < 10000 && std::abs(term) > 1e-17 * std::abs(sum); ++k) {
      term *= x / (a + k);
      sum += term;
    }
    return 1.0 - std::exp(log_front) * sum;
  }
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(log_front) * h;
}

}  // namespace

TEST_CASE("compensated summation") {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-10).epsilon(1e-9));
}

TEST_CASE("moments, median, KS") {
  const std::vector<double> xs{2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
  CHECK(mean(xs) == 5.0);
  CHECK(sample_variance(xs) == doctest::Approx(32.0 / 7.0));
  CHECK(median(xs) == 4.5);
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(std::isnan(sample_variance(std::vector<double>{1.0})));

  CHECK(ks_two_sample({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_two_sample({1, 2, 3}, {4, 5, 6}) == 1.0);
  CHECK(ks_two_sample({1, 1, 2}, {1, 2, 2}) == doctest::Approx(1.0 / 3.0));
  CHECK(ks_uniform({0.25, 0.75}) == doctest::Approx(0.25));
  CHECK(ks_standard_normal({0.0}) == doctest::Approx(0.5));
}

TEST_CASE("normal distribution") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(normal_upper_tail(8.0) == doctest::Approx(6.22096057427178e-16).epsilon(1e-10));
  CHECK(tail_quantile(TailDistribution::normal(), 0.025) == doctest::Approx(1.959963984540054).epsilon(1e-8));
  CHECK(tail_quantile(TailDistribution::normal(), 0.5) == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(tail_quantile(TailDistribution::normal(), 0.975) == doctest::Approx(-1.959963984540054).epsilon(1e-8));
}

TEST_CASE("chi-square against an independent incomplete gamma") {
  for (int dof : {1, 2, 3, 5, 10, 30})
    for (double x : {0.01, 0.5, 1.0, 2.5, 7.0, 15.0, 40.0, 80.0}) {
      const double q = upper_gamma_q(0.5 * dof, 0.5 * x);
      CHECK(chi_square_upper_tail(x, dof) == doctest::Approx(q).epsilon(1e-10));
      CHECK(chi_square_cdf(x, dof) + chi_square_upper_tail(x, dof) == doctest::Approx(1.0));
    }
  CHECK(tail_quantile(TailDistribution::chi_square(3), 0.05) == doctest::Approx(7.814727903251178).epsilon(1e-8));
  CHECK(tail_quantile(TailDistribution::chi_square(1), 0.05) == doctest::Approx(3.841458820694124).epsilon(1e-8));
  CHECK(upper_tail(TailDistribution::chi_square(50), tail_quantile(TailDistribution::chi_square(50), 1e-6)) ==
        doctest::Approx(1e-6).epsilon(1e-6));
}

TEST_CASE("quantile refusals") {
  CHECK_THROWS_AS(tail_quantile(TailDistribution::normal(), 0.0), Error);
  CHECK_THROWS_AS(tail_quantile(TailDistribution::normal(), 1.0), Error);
  CHECK_THROWS_AS(tail_quantile(TailDistribution::chi_square(0), 0.5), Error);
}
