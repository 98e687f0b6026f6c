#include "rsp/harness.hpp"

#include "rsp/error.hpp"
#include "rsp/inference.hpp"
#include "rsp/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

namespace rsp {

WeightedNetwork NetworkSpec::build() const {
  if (generator == "mean-field") return mean_field(n, alpha);
  if (generator == "cycle") return cycle(n);
  if (generator == "special-vertex") return special_vertex(n, p);
  if (generator == "matrix") return build_network(weights);
  if (generator == "blocks") {
    if (!blocks) throw Error(ErrorKind::InvalidConfig, "generator 'blocks' needs a block specification");
    return assemble_reducible(*blocks);
  }
  throw Error(ErrorKind::InvalidConfig, "unknown network generator '" + generator + "'");
}

std::string check_kind(const CheckSpec& check) {
  struct Visitor {
    std::string operator()(const MartingaleCheck&) const { return "martingale"; }
    std::string operator()(const SynchronizationCheck&) const { return "synchronization"; }
    std::string operator()(const SyncCltCheck&) const { return "sync_clt"; }
    std::string operator()(const ConvergenceCltCheck&) const { return "convergence_clt"; }
    std::string operator()(const TestCalibrationCheck&) const { return "test_calibration"; }
    std::string operator()(const CiCoverageCheck&) const { return "ci_coverage"; }
    std::string operator()(const ForcingCheck&) const { return "forcing"; }
    std::string operator()(const ReducibleCheck&) const { return "reducible"; }
    std::string operator()(const LimitDistributionCheck&) const { return "limit_distribution"; }
  };
  return std::visit(Visitor{}, check);
}

namespace {

long or_default(long value, long fallback) { return value > 0 ? value : fallback; }

}  // namespace

void ExperimentConfig::validate() const {
  if (horizon < 1) throw Error(ErrorKind::HorizonZero, "horizon must be at least 1");
  if (replications < 1) throw Error(ErrorKind::InvalidConfig, "replications must be at least 1");
  if (!(degenerate_delta >= 0.0 && degenerate_delta < 0.5))
    throw Error(ErrorKind::InvalidConfig, "degenerate_delta must lie in [0, 1/2)");
  if (forcing) forcing->validate();
  for (long cp : required_checkpoints())
    if (cp < 0 || cp > horizon)
      throw Error(ErrorKind::InvalidConfig, "checkpoint " + std::to_string(cp) + " lies outside [0, horizon]");
}

std::vector<long> ExperimentConfig::required_checkpoints() const {
  std::set<long> points(checkpoints.begin(), checkpoints.end());
  points.insert(horizon);
  for (const auto& check : checks) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, SynchronizationCheck>) {
            points.insert(c.early);
            points.insert(c.late);
          } else if constexpr (std::is_same_v<T, SyncCltCheck>) {
            points.insert(c.n);
            if (c.rate_relative_tolerance) points.insert(4 * c.n);
          } else if constexpr (std::is_same_v<T, ConvergenceCltCheck>) {
            points.insert(c.n);
            points.insert(or_default(c.proxy, 100 * c.n));
            points.insert(or_default(c.stability, 10 * c.n));
          } else if constexpr (std::is_same_v<T, TestCalibrationCheck>) {
            points.insert(c.n);
          } else if constexpr (std::is_same_v<T, CiCoverageCheck>) {
            points.insert(c.n);
            points.insert(or_default(c.proxy, 100 * c.n));
          } else {
            points.insert(or_default(c.at, horizon));
          }
        },
        check);
  }
  return {points.begin(), points.end()};
}

const Matrix& EnsembleSummary::at(long n) const {
  const auto it = std::find(checkpoints.begin(), checkpoints.end(), n);
  if (it == checkpoints.end()) throw Error(ErrorKind::InvalidConfig, "step " + std::to_string(n) + " was not recorded");
  return states[static_cast<std::size_t>(it - checkpoints.begin())];
}

int resolve_threads(int requested) {
  int threads = requested > 0 ? requested : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("RSP_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) threads = std::min(threads, cap);
  }
  return std::max(1, threads);
}

void parallel_for(long count, int threads, const std::function<void(long)>& body) {
  if (threads <= 1 || count <= 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (long i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::jthread> pool;
  const int workers = static_cast<int>(std::min<long>(threads, count));
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

EnsembleSummary run_ensemble(const ExperimentConfig& config, int threads) {
  config.validate();
  const WeightedNetwork net = config.network.build();
  const ReinforcementSchedule sched = config.schedule();
  validate_initial_state(config.z0, net.size());

  EnsembleSummary out;
  out.name = config.name;
  out.replications = config.replications;
  out.checkpoints = config.required_checkpoints();
  out.states.assign(out.checkpoints.size(), Matrix(config.replications, net.size()));

  const Simulator sim(net, sched, config.horizon, config.forcing);
  parallel_for(config.replications, resolve_threads(threads), [&](long rep) {
    RngStream rng = RngStream::for_replication(config.seed, static_cast<std::uint64_t>(rep));
    SystemState state{0, config.z0};
    for (std::size_t c = 0; c < out.checkpoints.size(); ++c) {
      sim.advance(state, rng, out.checkpoints[c]);
      out.states[c].row(rep) = state.z.transpose();
    }
  });

  const Matrix& terminal = out.states.back();
  std::optional<Vector> v1;
  if (net.irreducible()) v1 = decompose(net).v1;
  for (long rep = 0; rep < config.replications; ++rep) {
    const Vector z = terminal.row(rep).transpose();
    if (v1) out.terminal_z_tilde.push_back(perron_component(*v1, z));
    out.terminal_spread.push_back(spread(z));
  }
  if (v1) {
    out.mean_z_tilde = mean(out.terminal_z_tilde);
    out.var_z_tilde = config.replications > 1 ? sample_variance(out.terminal_z_tilde) : 0.0;
  }
  out.mean_spread = mean(out.terminal_spread);
  out.var_spread = config.replications > 1 ? sample_variance(out.terminal_spread) : 0.0;
  return out;
}

void CheckReport::add(Metric m) {
  if (m.bounds) m.pass = m.bounds->contains(m.observed);
  passed = passed && m.pass;
  metrics.push_back(std::move(m));
}

const Metric& CheckReport::metric(const std::string& name) const {
  for (const auto& m : metrics)
    if (m.name == name) return m;
  throw Error(ErrorKind::InvalidConfig, "report has no metric '" + name + "'");
}

namespace {

std::vector<double> perron_components(const Matrix& states, const Vector& v1) {
  std::vector<double> out(static_cast<std::size_t>(states.rows()));
  for (Eigen::Index r = 0; r < states.rows(); ++r) out[r] = perron_component(v1, states.row(r).transpose());
  return out;
}

bool interior(double z, double delta) { return z > delta && z < 1.0 - delta; }

CheckReport new_report(const ExperimentConfig& config, std::string kind) {
  CheckReport r;
  r.experiment = config.name;
  r.kind = std::move(kind);
  return r;
}

const SpectralData require_spectral(const ExperimentConfig& config) {
  const WeightedNetwork net = config.network.build();
  if (!net.irreducible()) throw Error(ErrorKind::InvalidConfig, "this check needs an irreducible network");
  return decompose(net);
}

}  // namespace

CheckReport check_martingale(const EnsembleSummary& summary, const ExperimentConfig& config,
                             const MartingaleCheck& spec) {
  const SpectralData spectral = require_spectral(config);
  const long at = or_default(spec.at, config.horizon);
  const std::vector<double> zt = perron_components(summary.at(at), spectral.v1);
  const double start = perron_component(spectral.v1, config.z0);
  const double m = mean(zt);
  const double sd = zt.size() > 1 ? std::sqrt(sample_variance(zt)) : 0.0;
  const double diff = std::abs(m - start);
  const double se = sd / std::sqrt(static_cast<double>(zt.size()));
  CheckReport r = new_report(config, "martingale");
  r.used = static_cast<long>(zt.size());
  r.add({"mean_z_tilde", m, start, std::nullopt});
  r.add({"standard_errors", se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : INFINITY), std::nullopt,
         Range::at_most(spec.max_standard_errors)});
  return r;
}

CheckReport check_synchronization(const EnsembleSummary& summary, const ExperimentConfig& config,
                                  const SynchronizationCheck& spec) {
  auto spreads = [&](long n) {
    const Matrix& s = summary.at(n);
    std::vector<double> out;
    for (Eigen::Index r = 0; r < s.rows(); ++r) out.push_back(s.row(r).maxCoeff() - s.row(r).minCoeff());
    return out;
  };
  const double early = median(spreads(spec.early));
  const double late = median(spreads(spec.late));
  CheckReport r = new_report(config, "synchronization");
  r.used = summary.replications;
  r.add({"median_spread_early", early, std::nullopt, std::nullopt});
  r.add({"median_spread_late", late, std::nullopt, Range::at_most(spec.max_median_spread)});
  Metric shrink{"late_over_early", early > 0.0 ? late / early : (late == 0.0 ? 0.0 : INFINITY), std::nullopt,
                Range::at_most(1.0)};
  // Strictly below the early median, except when both are exactly synchronized.
  shrink.pass = late < early || (late == 0.0 && early == 0.0);
  shrink.bounds.reset();
  r.add(shrink);
  return r;
}

CheckReport check_sync_clt(const EnsembleSummary& summary, const ExperimentConfig& config, const SpectralData& spectral,
                           const RegimeClassification& regime, const SyncCltCheck& spec) {
  const Matrix sigma = sigma_hat(spectral, regime).matrix;
  const double pair_var = pairwise_sync_variance(sigma, spec.j, spec.k);
  if (!(pair_var > 1e-14))
    throw Error(ErrorKind::ZeroVariancePair, "vertices " + std::to_string(spec.j) + " and " + std::to_string(spec.k) +
                                                 " have zero synchronization variance");
  const Matrix& states = summary.at(spec.n);
  const std::vector<double> zt = perron_components(states, spectral.v1);
  const double rate = test_rate(regime.regime, regime.gamma, spec.n);

  CheckReport r = new_report(config, "sync_clt");
  r.table_header = {"replication", "standardized"};
  std::vector<double> standardized;
  std::vector<double> raw_n;
  std::vector<double> raw_4n;
  const Matrix* later = spec.rate_relative_tolerance ? &summary.at(4 * spec.n) : nullptr;
  for (long rep = 0; rep < summary.replications; ++rep) {
    if (!interior(zt[rep], config.degenerate_delta)) {
      ++r.excluded;
      continue;
    }
    const double diff = states(rep, spec.j) - states(rep, spec.k);
    const double s = rate * diff / std::sqrt(zt[rep] * (1.0 - zt[rep]) * pair_var);
    standardized.push_back(s);
    r.table_rows.push_back({static_cast<double>(rep), s});
    raw_n.push_back(diff);
    if (later) raw_4n.push_back((*later)(rep, spec.j) - (*later)(rep, spec.k));
  }
  r.used = static_cast<long>(standardized.size());
  if (standardized.size() < 2) throw Error(ErrorKind::DegenerateState, "fewer than two usable replications");
  r.add({"pair_variance", pair_var, std::nullopt, std::nullopt});
  r.add({"variance_ratio", sample_variance(standardized), 1.0, spec.variance_ratio});
  const double ks = ks_standard_normal(standardized);
  r.add({"ks_normal", ks, std::nullopt, spec.max_ks ? std::optional(Range::at_most(*spec.max_ks)) : std::nullopt});
  if (later) {
    const double rate_4n = test_rate(regime.regime, regime.gamma, 4 * spec.n);
    const double expected = (rate * rate) / (rate_4n * rate_4n);
    const double observed = sample_variance(raw_4n) / sample_variance(raw_n);
    r.add({"variance_scaling", observed, expected, std::nullopt});
    r.add({"variance_scaling_relative", observed / expected, 1.0,
           Range{1.0 - *spec.rate_relative_tolerance, 1.0 + *spec.rate_relative_tolerance}});
  }
  return r;
}

double proxy_variance_fraction(long n, long proxy, double gamma) {
  return 1.0 - std::pow(static_cast<double>(n) / static_cast<double>(proxy), 2.0 * gamma - 1.0);
}

CheckReport check_convergence_clt(const EnsembleSummary& summary, const ExperimentConfig& config,
                                  const SpectralData& spectral, const ConvergenceCltCheck& spec) {
  const long proxy = or_default(spec.proxy, 100 * spec.n);
  const long stability = or_default(spec.stability, 10 * spec.n);
  if (spec.n < 1 || proxy <= spec.n || stability <= spec.n)
    throw Error(ErrorKind::HorizonOrder, "proxy horizons must exceed the analysis horizon");
  const double gamma = config.gamma;
  const double st2 = sigma_tilde_sq(spectral, gamma, config.c);
  const std::vector<double> zn = perron_components(summary.at(spec.n), spectral.v1);
  const std::vector<double> zp = perron_components(summary.at(proxy), spectral.v1);
  const std::vector<double> zs = perron_components(summary.at(stability), spectral.v1);
  const double scale = std::pow(static_cast<double>(spec.n), gamma - 0.5);

  CheckReport r = new_report(config, "convergence_clt");
  r.table_header = {"replication", "scaled_gap_proxy", "scaled_gap_stability"};
  std::vector<double> gaps_p, gaps_s, mix_p, mix_s;
  for (long rep = 0; rep < summary.replications; ++rep) {
    if (!interior(zp[rep], config.degenerate_delta)) {
      ++r.excluded;
      continue;
    }
    gaps_p.push_back(scale * (zn[rep] - zp[rep]));
    gaps_s.push_back(scale * (zn[rep] - zs[rep]));
    mix_p.push_back(zp[rep] * (1.0 - zp[rep]));
    mix_s.push_back(zs[rep] * (1.0 - zs[rep]));
    r.table_rows.push_back({static_cast<double>(rep), gaps_p.back(), gaps_s.back()});
  }
  r.used = static_cast<long>(gaps_p.size());
  if (gaps_p.size() < 2) throw Error(ErrorKind::DegenerateState, "fewer than two usable replications");
  const double raw = sample_variance(gaps_p) / (st2 * mean(mix_p));
  const double raw_s = sample_variance(gaps_s) / (st2 * mean(mix_s));
  const double frac = proxy_variance_fraction(spec.n, proxy, gamma);
  const double frac_s = proxy_variance_fraction(spec.n, stability, gamma);
  r.add({"sigma_tilde_sq", st2, std::nullopt, std::nullopt});
  r.add({"raw_ratio", raw, frac, std::nullopt});
  r.add({"proxy_fraction", frac, std::nullopt, std::nullopt});
  r.add({"ratio", raw / frac, 1.0, spec.ratio});
  r.add({"stability_ratio", raw_s / frac_s, 1.0, std::nullopt});
  return r;
}

CheckReport empirical_test_calibration(const EnsembleSummary& summary, const ExperimentConfig& config,
                                       const TestCalibrationCheck& spec) {
  const TopologyTest test(spec.hypothesized.build(), config.gamma, config.c);
  const Matrix& states = summary.at(spec.n);
  CheckReport r = new_report(config, "test_calibration");
  r.table_header = {"replication", "statistic", "p_value", "reject"};
  std::vector<double> stats, pvalues;
  long rejects = 0;
  for (long rep = 0; rep < summary.replications; ++rep) {
    const Vector z = states.row(rep).transpose();
    if (!interior(perron_component(test.spectral().v1, z), config.degenerate_delta)) {
      ++r.excluded;
      continue;
    }
    const TestResult t = test.evaluate(z, spec.n, spec.significance);
    stats.push_back(t.statistic);
    pvalues.push_back(t.p_value);
    rejects += t.reject ? 1 : 0;
    r.table_rows.push_back({static_cast<double>(rep), t.statistic, t.p_value, t.reject ? 1.0 : 0.0});
  }
  r.used = static_cast<long>(stats.size());
  if (stats.empty()) throw Error(ErrorKind::DegenerateState, "no usable replications");
  r.add({"dof", static_cast<double>(test.dof()), std::nullopt, std::nullopt});
  r.add({"size", static_cast<double>(rejects) / static_cast<double>(stats.size()), spec.significance, spec.size});
  r.add({"mean_statistic", mean(stats), std::nullopt, spec.mean_statistic});
  const double ks = ks_uniform(pvalues);
  r.add({"ks_uniform_pvalues", ks, std::nullopt,
         spec.max_ks_uniform ? std::optional(Range::at_most(*spec.max_ks_uniform)) : std::nullopt});
  return r;
}

CheckReport check_ci_coverage(const EnsembleSummary& summary, const ExperimentConfig& config,
                              const SpectralData& spectral, const CiCoverageCheck& spec) {
  const long proxy = or_default(spec.proxy, 100 * spec.n);
  if (proxy <= spec.n) throw Error(ErrorKind::HorizonOrder, "proxy horizon must exceed the analysis horizon");
  const std::vector<double> zn = perron_components(summary.at(spec.n), spectral.v1);
  const std::vector<double> zp = perron_components(summary.at(proxy), spectral.v1);
  CheckReport r = new_report(config, "ci_coverage");
  r.table_header = {"replication", "lower", "upper", "proxy", "covered"};
  long covered = 0;
  for (long rep = 0; rep < summary.replications; ++rep) {
    if (!interior(zn[rep], config.degenerate_delta)) {
      ++r.excluded;
      continue;
    }
    const ConfidenceInterval ci = confidence_interval(zn[rep], spec.n, config.gamma, config.c, spectral, spec.level);
    const bool hit = zp[rep] >= ci.lower && zp[rep] <= ci.upper;
    covered += hit ? 1 : 0;
    ++r.used;
    r.table_rows.push_back({static_cast<double>(rep), ci.lower, ci.upper, zp[rep], hit ? 1.0 : 0.0});
  }
  if (r.used == 0) throw Error(ErrorKind::DegenerateState, "no usable replications");
  r.add({"coverage", static_cast<double>(covered) / static_cast<double>(r.used), spec.level, spec.coverage});
  return r;
}

CheckReport verify_forcing(const EnsembleSummary& summary, const ExperimentConfig& config, const ForcingCheck& spec) {
  if (!config.forcing) throw Error(ErrorKind::InvalidConfig, "forcing check needs a forcing variant");
  const SpectralData spectral = require_spectral(config);
  const long at = or_default(spec.at, config.horizon);
  const Matrix& states = summary.at(at);
  double max_dev = 0.0;
  double max_spread = 0.0;
  CheckReport r = new_report(config, "forcing");
  r.table_header = {"replication", "z_tilde", "spread"};
  for (long rep = 0; rep < summary.replications; ++rep) {
    const Vector z = states.row(rep).transpose();
    const double zt = perron_component(spectral.v1, z);
    max_dev = std::max(max_dev, std::abs(zt - config.forcing->q));
    max_spread = std::max(max_spread, spread(z));
    r.table_rows.push_back({static_cast<double>(rep), zt, spread(z)});
  }
  r.used = summary.replications;
  r.add({"max_abs_deviation", max_dev, 0.0, Range::at_most(spec.max_deviation)});
  r.add({"max_spread", max_spread, 0.0, Range::at_most(spec.max_spread)});
  return r;
}

CheckReport verify_reducible(const EnsembleSummary& summary, const ExperimentConfig& config,
                             const ReducibleCheck& spec) {
  if (!config.network.blocks) throw Error(ErrorKind::InvalidConfig, "reducible check needs a block specification");
  const BlockSpec& blocks = *config.network.blocks;
  const BlockLayout layout = block_layout(blocks);
  std::vector<Vector> perron;
  for (const auto& block : blocks.leader_blocks) perron.push_back(decompose(build_network(block)).v1);

  const long at = or_default(spec.at, config.horizon);
  const Matrix& states = summary.at(at);
  CheckReport r = new_report(config, "reducible");
  r.table_header = {"replication", "block_low", "block_high", "follower_min", "follower_max"};
  double max_block_spread = 0.0;
  double max_excursion = 0.0;
  for (long rep = 0; rep < summary.replications; ++rep) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (std::size_t b = 0; b < perron.size(); ++b) {
      const auto [begin, end] = layout.leaders[b];
      const Vector zb = states.row(rep).segment(begin, end - begin).transpose();
      const double limit = perron_component(perron[b], zb);
      lo = std::min(lo, limit);
      hi = std::max(hi, limit);
      max_block_spread = std::max(max_block_spread, spread(zb));
    }
    double fmin = INFINITY;
    double fmax = -INFINITY;
    for (int f = layout.follower.first; f < layout.follower.second; ++f) {
      const double z = states(rep, f);
      fmin = std::min(fmin, z);
      fmax = std::max(fmax, z);
      max_excursion = std::max({max_excursion, lo - z, z - hi});
    }
    r.table_rows.push_back({static_cast<double>(rep), lo, hi, fmin, fmax});
  }
  r.used = summary.replications;
  r.add({"max_block_spread", max_block_spread, 0.0, Range::at_most(spec.max_block_spread)});
  r.add({"max_follower_excursion", max_excursion, 0.0, Range::at_most(spec.margin)});
  return r;
}

CheckReport verify_limit_distribution(const EnsembleSummary& summary, const ExperimentConfig& config,
                                      const LimitDistributionCheck& spec) {
  const SpectralData spectral = require_spectral(config);
  const long at = or_default(spec.at, config.horizon);
  const std::vector<double> zt = perron_components(summary.at(at), spectral.v1);
  std::vector<long> counts(spec.bins, 0);
  long inside = 0;
  for (double z : zt) {
    if (z > spec.interior_low && z < spec.interior_high) ++inside;
    const int bin = std::clamp(static_cast<int>(std::floor(z * spec.bins)), 0, spec.bins - 1);
    ++counts[bin];
  }
  const double total = static_cast<double>(zt.size());
  long max_interior = 0;
  for (int b = 1; b + 1 < spec.bins; ++b) max_interior = std::max(max_interior, counts[b]);

  CheckReport r = new_report(config, "limit_distribution");
  r.used = static_cast<long>(zt.size());
  r.table_header = {"bin", "mass"};
  for (int b = 0; b < spec.bins; ++b) r.table_rows.push_back({static_cast<double>(b), counts[b] / total});
  Metric frac{"interior_fraction", inside / total, std::nullopt, std::nullopt};
  frac.pass = frac.observed > spec.min_interior_fraction;
  r.add(frac);
  Metric bin{"max_interior_bin_mass", max_interior / total, std::nullopt, std::nullopt};
  bin.pass = bin.observed < spec.max_interior_bin_mass;
  r.add(bin);
  return r;
}

std::vector<CheckReport> run_checks(const EnsembleSummary& summary, const ExperimentConfig& config) {
  std::vector<CheckReport> out;
  const WeightedNetwork net = config.network.build();
  std::optional<SpectralData> spectral;
  if (net.irreducible()) spectral = decompose(net);
  auto need_spectral = [&]() -> const SpectralData& {
    if (!spectral) throw Error(ErrorKind::InvalidConfig, "check needs an irreducible network");
    return *spectral;
  };
  for (const auto& check : config.checks) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, MartingaleCheck>) {
            out.push_back(check_martingale(summary, config, c));
          } else if constexpr (std::is_same_v<T, SynchronizationCheck>) {
            out.push_back(check_synchronization(summary, config, c));
          } else if constexpr (std::is_same_v<T, SyncCltCheck>) {
            const SpectralData& s = need_spectral();
            out.push_back(check_sync_clt(summary, config, s, classify_regime(s, config.gamma, config.c), c));
          } else if constexpr (std::is_same_v<T, ConvergenceCltCheck>) {
            out.push_back(check_convergence_clt(summary, config, need_spectral(), c));
          } else if constexpr (std::is_same_v<T, TestCalibrationCheck>) {
            out.push_back(empirical_test_calibration(summary, config, c));
          } else if constexpr (std::is_same_v<T, CiCoverageCheck>) {
            out.push_back(check_ci_coverage(summary, config, need_spectral(), c));
          } else if constexpr (std::is_same_v<T, ForcingCheck>) {
            out.push_back(verify_forcing(summary, config, c));
          } else if constexpr (std::is_same_v<T, ReducibleCheck>) {
            out.push_back(verify_reducible(summary, config, c));
          } else {
            out.push_back(verify_limit_distribution(summary, config, c));
          }
        },
        check);
  }
  return out;
}

bool ExperimentResult::passed() const {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed; });
}

ExperimentResult run_experiment(const ExperimentConfig& config, int threads) {
  ExperimentResult out{run_ensemble(config, threads), {}};
  out.reports = run_checks(out.summary, config);
  return out;
}

}  // namespace rsp
