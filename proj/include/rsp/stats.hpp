#pragma once

#include <span>
#include <vector>

namespace rsp {

/// Neumaier-compensated accumulator; results depend only on the order of add() calls.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double mean(std::span<const double> xs);
/// Unbiased sample variance (two-pass, compensated).
double sample_variance(std::span<const double> xs);
double median(std::vector<double> xs);

/// sup |F_a - F_b| between two empirical CDFs.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
/// sup |F_n - Phi| against the standard normal.
double ks_standard_normal(std::vector<double> xs);
/// sup |F_n - x| against Uniform(0, 1).
double ks_uniform(std::vector<double> xs);

}  // namespace rsp
