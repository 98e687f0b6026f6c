#pragma once

#include "rsp/network.hpp"
#include "rsp/rng.hpp"
#include "rsp/spectral.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace rsp {

/// r_n = c / (n + n0)^gamma for n >= 0.
class ReinforcementSchedule {
 public:
  /// Without an explicit offset, n0 = max(1, ceil(c^{1/gamma}) + 1), which keeps r_n < 1.
  ReinforcementSchedule(double gamma, double c, std::optional<long> n0 = std::nullopt);

  double gamma() const noexcept { return gamma_; }
  double c() const noexcept { return c_; }
  long offset() const noexcept { return n0_; }
  double rate(long n) const noexcept;

  static long default_offset(double gamma, double c);

 private:
  double gamma_;
  double c_;
  long n0_;
};

struct SystemState {
  long step = 0;
  Vector z;
};

/// Mixes a constant target q into the reinforcement: Z += r (rho X + (1 - rho) q - Z).
struct ForcingVariant {
  double rho = 0.0;
  double q = 0.0;

  void validate() const;
};

/// Success probabilities of the next round, W^T Z.
Vector success_probabilities(const WeightedNetwork& net, const Vector& z);

SystemState step(const SystemState& state, const WeightedNetwork& net, const ReinforcementSchedule& sched,
                 RngStream& rng);

SystemState step_forced(const SystemState& state, const WeightedNetwork& net, const ReinforcementSchedule& sched,
                        const ForcingVariant& variant, RngStream& rng);

/// Hot-loop engine shared by simulate() and the harness. Precomputes the rate table up
/// to `horizon`; draws one uniform per vertex per step in vertex order.
class Simulator {
 public:
  Simulator(const WeightedNetwork& net, const ReinforcementSchedule& sched, long horizon,
            std::optional<ForcingVariant> variant = std::nullopt);

  int size() const noexcept { return n_; }
  long horizon() const noexcept { return static_cast<long>(rates_.size()); }

  /// Advances `state` in place until state.step == until (until <= horizon()).
  void advance(SystemState& state, RngStream& rng, long until) const;

 private:
  int n_;
  std::vector<double> wt_;  // W^T, row-major
  std::vector<double> rates_;
  std::optional<ForcingVariant> variant_;
};

/// Which steps a trajectory keeps. Stride 0 means geometric: n = 0, 1, 2, 4, 8, ...
struct Recording {
  long stride = 0;
  static Recording geometric() { return {0}; }
  static Recording every(long k) { return {k}; }
};

struct Snapshot {
  long step = 0;
  Vector z;
};

struct Trajectory {
  ReinforcementSchedule schedule;
  Matrix weights;
  Vector z0;
  std::optional<ForcingVariant> variant;
  std::vector<Snapshot> recorded;
  SystemState final_state;
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
};

Trajectory simulate(const WeightedNetwork& net, const ReinforcementSchedule& sched, const Vector& z0, long horizon,
                    Recording recording, std::optional<ForcingVariant> variant, std::uint64_t seed,
                    std::uint64_t replication);

/// Perron component z_tilde = N^{-1/2} v1^T Z and remainder z_hat = Z - z_tilde 1.
struct Projection {
  double z_tilde = 0.0;
  Vector z_hat;
};

Projection project(const SpectralData& spec, const Vector& z);
double perron_component(const Vector& v1, const Vector& z);
double spread(const Vector& z);

struct WeightedOutcome {
  double probability = 0.0;
  Vector z;
};

inline constexpr int kMaxEnumerationBits = 24;

/// Exact law of Z_{n_max} by walking every X-sequence. Outcomes with equal Z
/// (to 1e-12) are merged; zero-probability branches are pruned.
std::vector<WeightedOutcome> enumerate_exact(const WeightedNetwork& net, const ReinforcementSchedule& sched,
                                             const Vector& z0, int n_max);

void validate_initial_state(const Vector& z0, int n);

}  // namespace rsp
