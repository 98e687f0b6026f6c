#include "rsp/dynamics.hpp"

#include "rsp/error.hpp"

#include <cassert>
#include <cmath>
#include <map>
#include <string>

namespace rsp {

ReinforcementSchedule::ReinforcementSchedule(double gamma, double c, std::optional<long> n0)
    : gamma_(gamma), c_(c), n0_(0) {
  validate_gamma(gamma);
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidParameter, "c must be positive");
  n0_ = n0 ? *n0 : default_offset(gamma, c);
  if (n0_ < 1) throw Error(ErrorKind::InvalidParameter, "schedule offset must be >= 1");
  if (!(rate(0) < 1.0))
    throw Error(ErrorKind::InvalidParameter, "schedule offset " + std::to_string(n0_) + " gives r_0 >= 1");
}

long ReinforcementSchedule::default_offset(double gamma, double c) {
  return std::max(1L, static_cast<long>(std::ceil(std::pow(c, 1.0 / gamma))) + 1);
}

double ReinforcementSchedule::rate(long n) const noexcept {
  const double base = static_cast<double>(n + n0_);
  return gamma_ == 1.0 ? c_ / base : c_ / std::pow(base, gamma_);
}

void ForcingVariant::validate() const {
  if (!(rho >= 0.0 && rho < 1.0)) throw Error(ErrorKind::InvalidParameter, "rho must lie in [0, 1)");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorKind::InvalidParameter, "q must lie in [0, 1]");
}

void validate_initial_state(const Vector& z0, int n) {
  if (z0.size() != n)
    throw Error(ErrorKind::DimensionMismatch,
                "initial state has " + std::to_string(z0.size()) + " entries, network has " + std::to_string(n));
  for (int j = 0; j < n; ++j)
    if (!(z0(j) >= 0.0 && z0(j) <= 1.0))
      throw Error(ErrorKind::InvalidParameter, "initial inclinations must lie in [0, 1]");
}

Vector success_probabilities(const WeightedNetwork& net, const Vector& z) {
  return net.weights().transpose() * z;
}

namespace {

inline double reinforce(double z, double target, double r) {
  const double next = z + r * (target - z);
  assert(next >= -1e-15 && next <= 1.0 + 1e-15);
  return next;
}

SystemState step_impl(const SystemState& state, const WeightedNetwork& net, const ReinforcementSchedule& sched,
                      const ForcingVariant* variant, RngStream& rng) {
  const Vector p = success_probabilities(net, state.z);
  const double r = sched.rate(state.step);
  SystemState next{state.step + 1, state.z};
  for (int j = 0; j < net.size(); ++j) {
    double x = rng.uniform() < p(j) ? 1.0 : 0.0;
    if (variant) x = variant->rho * x + (1.0 - variant->rho) * variant->q;
    next.z(j) = reinforce(state.z(j), x, r);
  }
  return next;
}

}  // namespace

SystemState step(const SystemState& state, const WeightedNetwork& net, const ReinforcementSchedule& sched,
                 RngStream& rng) {
  return step_impl(state, net, sched, nullptr, rng);
}

SystemState step_forced(const SystemState& state, const WeightedNetwork& net, const ReinforcementSchedule& sched,
                        const ForcingVariant& variant, RngStream& rng) {
  variant.validate();
  return step_impl(state, net, sched, &variant, rng);
}

Simulator::Simulator(const WeightedNetwork& net, const ReinforcementSchedule& sched, long horizon,
                     std::optional<ForcingVariant> variant)
    : n_(net.size()), wt_(static_cast<std::size_t>(n_) * n_), rates_(horizon), variant_(variant) {
  if (horizon < 1) throw Error(ErrorKind::HorizonZero, "horizon must be at least 1");
  if (variant_) variant_->validate();
  for (int j = 0; j < n_; ++j)
    for (int k = 0; k < n_; ++k) wt_[j * n_ + k] = net.weight(k, j);
  for (long n = 0; n < horizon; ++n) rates_[n] = sched.rate(n);
}

void Simulator::advance(SystemState& state, RngStream& rng, long until) const {
  assert(until <= horizon());
  const int n = n_;
  double* z = state.z.data();
  double p[64];
  std::vector<double> heap;
  double* prob = p;
  if (n > 64) {
    heap.resize(n);
    prob = heap.data();
  }
  const double* wt = wt_.data();
  const bool forced = variant_.has_value();
  const double rho = forced ? variant_->rho : 1.0;
  const double bias = forced ? (1.0 - variant_->rho) * variant_->q : 0.0;

  for (long step = state.step; step < until; ++step) {
    for (int j = 0; j < n; ++j) {
      const double* row = wt + j * n;
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += row[k] * z[k];
      prob[j] = s;
    }
    const double r = rates_[step];
    for (int j = 0; j < n; ++j) {
      double x = rng.uniform() < prob[j] ? 1.0 : 0.0;
      if (forced) x = rho * x + bias;
      z[j] = reinforce(z[j], x, r);
    }
  }
  state.step = std::max(state.step, until);
}

Trajectory simulate(const WeightedNetwork& net, const ReinforcementSchedule& sched, const Vector& z0, long horizon,
                    Recording recording, std::optional<ForcingVariant> variant, std::uint64_t seed,
                    std::uint64_t replication) {
  if (horizon < 1) throw Error(ErrorKind::HorizonZero, "horizon must be at least 1");
  if (recording.stride < 0) throw Error(ErrorKind::InvalidParameter, "stride must be >= 0");
  validate_initial_state(z0, net.size());

  const Simulator sim(net, sched, horizon, variant);
  RngStream rng = RngStream::for_replication(seed, replication);
  Trajectory out{sched, net.weights(), z0, variant, {}, {0, z0}, seed, replication};
  out.recorded.push_back({0, z0});

  SystemState& state = out.final_state;
  long next = recording.stride == 0 ? 1 : recording.stride;
  while (state.step < horizon) {
    const long target = std::min(next, horizon);
    sim.advance(state, rng, target);
    out.recorded.push_back({state.step, state.z});
    next = recording.stride == 0 ? next * 2 : next + recording.stride;
  }
  return out;
}

double perron_component(const Vector& v1, const Vector& z) {
  return v1.dot(z) / std::sqrt(static_cast<double>(z.size()));
}

Projection project(const SpectralData& spec, const Vector& z) {
  if (z.size() != spec.size())
    throw Error(ErrorKind::DimensionMismatch, "state and spectral data disagree on N");
  Projection out;
  out.z_tilde = perron_component(spec.v1, z);
  out.z_hat = z.array() - out.z_tilde;
  return out;
}

double spread(const Vector& z) { return z.maxCoeff() - z.minCoeff(); }

std::vector<WeightedOutcome> enumerate_exact(const WeightedNetwork& net, const ReinforcementSchedule& sched,
                                             const Vector& z0, int n_max) {
  const int n = net.size();
  validate_initial_state(z0, n);
  if (n_max < 0) throw Error(ErrorKind::InvalidParameter, "n_max must be >= 0");
  if (static_cast<long>(n) * n_max > kMaxEnumerationBits)
    throw Error(ErrorKind::TooLarge, "N * n_max = " + std::to_string(static_cast<long>(n) * n_max) + " exceeds " +
                                         std::to_string(kMaxEnumerationBits));

  std::map<std::vector<long long>, std::size_t> index;
  std::vector<WeightedOutcome> out;
  const Matrix wt = net.weights().transpose();
  std::vector<double> rates(n_max);
  for (int k = 0; k < n_max; ++k) rates[k] = sched.rate(k);

  // Depth-first over steps; at each step every X in {0,1}^N is a branch.
  struct Walker {
    const Matrix& wt;
    const std::vector<double>& rates;
    int n;
    int n_max;
    std::map<std::vector<long long>, std::size_t>& index;
    std::vector<WeightedOutcome>& out;

    void visit(const Vector& z, int depth, double weight) {
      if (depth == n_max) {
        std::vector<long long> key(n);
        for (int j = 0; j < n; ++j) key[j] = std::llround(z(j) * 1e12);
        auto [it, inserted] = index.try_emplace(std::move(key), out.size());
        if (inserted)
          out.push_back({weight, z});
        else
          out[it->second].probability += weight;
        return;
      }
      const Vector p = wt * z;
      const double r = rates[depth];
      Vector next(n);
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double w = weight;
        for (int j = 0; j < n; ++j) {
          const bool success = (mask >> j) & 1u;
          w *= success ? p(j) : 1.0 - p(j);
          next(j) = reinforce(z(j), success ? 1.0 : 0.0, r);
        }
        if (w > 0.0) visit(next, depth + 1, w);
      }
    }
  } walker{wt, rates, n, n_max, index, out};

  walker.visit(z0, 0, 1.0);
  return out;
}

}  // namespace rsp
