#pragma once

#include "rsp/asymptotics.hpp"
#include "rsp/dynamics.hpp"
#include "rsp/network.hpp"
#include "rsp/spectral.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rsp {

/// Closed interval used for every pass/fail threshold.
struct Range {
  double lower = -1e300;
  double upper = 1e300;
  bool contains(double x) const noexcept { return x >= lower && x <= upper; }
  static Range at_most(double x) { return {-1e300, x}; }
  static Range at_least(double x) { return {x, 1e300}; }
  static Range around(double center, double rel) { return {center * (1.0 - rel), center * (1.0 + rel)}; }
};

struct NetworkSpec {
  /// One of "mean-field", "cycle", "special-vertex", "matrix", "blocks".
  std::string generator = "mean-field";
  int n = 2;
  double alpha = 1.0;
  double p = 0.5;
  Matrix weights;
  std::optional<BlockSpec> blocks;

  WeightedNetwork build() const;
};

struct MartingaleCheck {
  long at = 0;  // 0: horizon
  double max_standard_errors = 4.0;
};

struct SynchronizationCheck {
  long early = 1000;
  long late = 100000;
  double max_median_spread = 0.05;
};

struct SyncCltCheck {
  long n = 0;
  int j = 0;
  int k = 1;
  Range variance_ratio{0.9, 1.1};
  std::optional<double> max_ks;
  /// When set, compare raw Var(Z_j - Z_k) at n and 4n against the rate's prediction.
  std::optional<double> rate_relative_tolerance;
};

struct ConvergenceCltCheck {
  long n = 0;
  long proxy = 0;      // 0: 100 n
  long stability = 0;  // 0: 10 n
  Range ratio{0.85, 1.15};
};

struct TestCalibrationCheck {
  long n = 0;
  NetworkSpec hypothesized;
  double significance = 0.05;
  std::optional<Range> size;
  std::optional<Range> mean_statistic;
  std::optional<double> max_ks_uniform;  // on the p-values
};

struct CiCoverageCheck {
  long n = 0;
  long proxy = 0;  // 0: 100 n
  double level = 0.95;
  Range coverage{0.90, 0.98};
};

struct ForcingCheck {
  long at = 0;
  double max_deviation = 0.01;
  double max_spread = 1.0;
};

struct ReducibleCheck {
  long at = 0;
  double margin = 0.02;
  double max_block_spread = 1.0;
};

struct LimitDistributionCheck {
  long at = 0;
  double interior_low = 0.01;
  double interior_high = 0.99;
  double min_interior_fraction = 0.0;  // strict: fraction must exceed this
  int bins = 50;
  double max_interior_bin_mass = 0.2;
};

using CheckSpec = std::variant<MartingaleCheck, SynchronizationCheck, SyncCltCheck, ConvergenceCltCheck,
                               TestCalibrationCheck, CiCoverageCheck, ForcingCheck, ReducibleCheck,
                               LimitDistributionCheck>;

std::string check_kind(const CheckSpec& check);

struct ExperimentConfig {
  std::string name = "experiment";
  NetworkSpec network;
  double gamma = 0.75;
  double c = 1.0;
  std::optional<long> n0;
  Vector z0;
  long horizon = 1000;
  long replications = 100;
  std::uint64_t seed = 0;
  std::optional<ForcingVariant> forcing;
  std::vector<long> checkpoints;
  std::vector<CheckSpec> checks;
  /// Replications with terminal Z~ outside (delta, 1 - delta) are left out of standardized statistics.
  double degenerate_delta = 1e-3;

  ReinforcementSchedule schedule() const { return {gamma, c, n0}; }
  void validate() const;
  /// Sorted union of explicit checkpoints, those required by checks, and the horizon.
  std::vector<long> required_checkpoints() const;
};

/// Per-replication states at each checkpoint plus aggregates. Replication order is
/// the index order, whatever the execution schedule was.
struct EnsembleSummary {
  std::string name;
  long replications = 0;
  std::vector<long> checkpoints;
  /// states[c] is replications x N: row r holds Z at checkpoints[c] for replication r.
  std::vector<Matrix> states;
  /// Terminal Perron component and spread per replication (z_tilde empty for reducible W).
  std::vector<double> terminal_z_tilde;
  std::vector<double> terminal_spread;
  double mean_z_tilde = 0.0;
  double var_z_tilde = 0.0;
  double mean_spread = 0.0;
  double var_spread = 0.0;

  /// Row block of `states` for checkpoint n; throws if n was not recorded.
  const Matrix& at(long n) const;
};

/// Worker count: `requested` if positive, else RSP_THREADS, else hardware concurrency.
int resolve_threads(int requested = 0);

/// Calls body(i) for i in [0, count) over `threads` workers. body must only touch index-owned data.
void parallel_for(long count, int threads, const std::function<void(long)>& body);

EnsembleSummary run_ensemble(const ExperimentConfig& config, int threads = 0);

struct Metric {
  std::string name;
  double observed = 0.0;
  std::optional<double> expected;
  std::optional<Range> bounds;
  bool pass = true;
};

struct CheckReport {
  std::string experiment;
  std::string kind;
  bool passed = true;
  long used = 0;
  long excluded = 0;
  std::vector<Metric> metrics;
  std::vector<std::string> table_header;
  std::vector<std::vector<double>> table_rows;

  void add(Metric m);
  const Metric& metric(const std::string& name) const;
};

CheckReport check_martingale(const EnsembleSummary& summary, const ExperimentConfig& config, const MartingaleCheck& spec);
CheckReport check_synchronization(const EnsembleSummary& summary, const ExperimentConfig& config,
                                  const SynchronizationCheck& spec);
CheckReport check_sync_clt(const EnsembleSummary& summary, const ExperimentConfig& config, const SpectralData& spectral,
                           const RegimeClassification& regime, const SyncCltCheck& spec);
CheckReport check_convergence_clt(const EnsembleSummary& summary, const ExperimentConfig& config,
                                  const SpectralData& spectral, const ConvergenceCltCheck& spec);
CheckReport empirical_test_calibration(const EnsembleSummary& summary, const ExperimentConfig& config,
                                       const TestCalibrationCheck& spec);
CheckReport check_ci_coverage(const EnsembleSummary& summary, const ExperimentConfig& config,
                              const SpectralData& spectral, const CiCoverageCheck& spec);
CheckReport verify_forcing(const EnsembleSummary& summary, const ExperimentConfig& config, const ForcingCheck& spec);
CheckReport verify_reducible(const EnsembleSummary& summary, const ExperimentConfig& config, const ReducibleCheck& spec);
CheckReport verify_limit_distribution(const EnsembleSummary& summary, const ExperimentConfig& config,
                                      const LimitDistributionCheck& spec);

/// Multiplier turning Var(Z~_n - Z~_proxy) into Var(Z~_n - Z_inf) for a martingale
/// whose residual variance decays like n^{-(2 gamma - 1)}: 1 - (n / proxy)^{2 gamma - 1}.
double proxy_variance_fraction(long n, long proxy, double gamma);

/// Runs every configured check against a summary.
std::vector<CheckReport> run_checks(const EnsembleSummary& summary, const ExperimentConfig& config);

struct ExperimentResult {
  EnsembleSummary summary;
  std::vector<CheckReport> reports;
  bool passed() const;
};

ExperimentResult run_experiment(const ExperimentConfig& config, int threads = 0);

}  // namespace rsp
