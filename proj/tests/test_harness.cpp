#include "rsp/error.hpp"
#include "rsp/harness.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>

using namespace rsp;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an rsp::Error");
  return ErrorKind::InvalidConfig;
}

ExperimentConfig small_mean_field() {
  ExperimentConfig c;
  c.name = "small";
  c.network.generator = "mean-field";
  c.network.n = 3;
  c.network.alpha = 0.5;
  c.gamma = 0.75;
  c.z0 = Vector::Constant(3, 0.5);
  c.horizon = 2000;
  c.replications = 64;
  c.seed = 42;
  return c;
}

}  // namespace

TEST_CASE("thread resolution honours the cap") {
  unsetenv("RSP_THREADS");
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
  setenv("RSP_THREADS", "2", 1);
  CHECK(resolve_threads(3) == 2);
  CHECK(resolve_threads(1) == 1);
  unsetenv("RSP_THREADS");
}

TEST_CASE("parallel_for visits each index once and rethrows") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(1000, 4, [&](long i) { ++hits[i]; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(100, 4,
                               [](long i) {
                                 if (i == 37) throw Error(ErrorKind::InvalidConfig, "boom");
                               }),
                  Error);
}

TEST_CASE("config validation and checkpoint union") {
  ExperimentConfig c = small_mean_field();
  c.checkpoints = {10};
  c.checks = {SynchronizationCheck{100, 1000, 0.05}, ConvergenceCltCheck{10, 0, 0, {0.85, 1.15}}};
  CHECK(c.required_checkpoints() == std::vector<long>{10, 100, 1000, 2000});
  c.horizon = 500;
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::InvalidConfig);
  c.horizon = 0;
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::HorizonZero);
  c = small_mean_field();
  c.replications = 0;
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::InvalidConfig);
  c = small_mean_field();
  c.network.generator = "torus";
  CHECK(kind_of([&] { c.network.build(); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("ensembles do not depend on the thread count") {
  ExperimentConfig c = small_mean_field();
  c.checkpoints = {1, 100};
  const EnsembleSummary serial = run_ensemble(c, 1);
  const EnsembleSummary parallel = run_ensemble(c, 4);
  REQUIRE(serial.states.size() == parallel.states.size());
  for (std::size_t i = 0; i < serial.states.size(); ++i) CHECK(serial.states[i] == parallel.states[i]);
  CHECK(serial.mean_z_tilde == parallel.mean_z_tilde);
  CHECK(serial.at(100).rows() == 64);
  CHECK(kind_of([&] { serial.at(7); }) == ErrorKind::InvalidConfig);
  // Distinct replications draw distinct streams.
  CHECK(serial.at(2000).row(0) != serial.at(2000).row(1));
}

TEST_CASE("martingale and synchronization checks") {
  ExperimentConfig c = small_mean_field();
  c.replications = 400;
  c.horizon = 20000;
  c.checks = {MartingaleCheck{0, 4.0}, SynchronizationCheck{100, 20000, 0.1}};
  const ExperimentResult r = run_experiment(c, 2);
  REQUIRE(r.reports.size() == 2);
  CHECK(r.reports[0].kind == "martingale");
  CHECK(r.reports[0].passed);
  CHECK(r.reports[0].metric("mean_z_tilde").expected == doctest::Approx(0.5));
  CHECK(r.reports[1].passed);
  CHECK(r.reports[1].metric("median_spread_late").observed < r.reports[1].metric("median_spread_early").observed);
  CHECK(r.passed());
  CHECK(kind_of([&] { r.reports[0].metric("nope"); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("proxy variance fraction") {
  CHECK(proxy_variance_fraction(100, 10000, 0.75) == doctest::Approx(0.9));
  CHECK(proxy_variance_fraction(100, 10000, 1.0) == doctest::Approx(0.99));
}

TEST_CASE("CLT and inference checks produce their metrics") {
  ExperimentConfig c = small_mean_field();
  c.replications = 300;
  c.horizon = 40000;
  TestCalibrationCheck cal;
  cal.n = 1000;
  cal.hypothesized = c.network;
  c.checks = {SyncCltCheck{1000, 0, 1, {0.5, 2.0}, 0.2, 0.5}, ConvergenceCltCheck{100, 10000, 1000, {0.5, 2.0}},
              cal, CiCoverageCheck{100, 10000, 0.95, {0.8, 1.0}}};
  const ExperimentResult r = run_experiment(c, 2);
  REQUIRE(r.reports.size() == 4);
  CHECK(r.reports[0].used + r.reports[0].excluded == 300);
  CHECK(r.reports[0].metric("pair_variance").observed == doctest::Approx(2.0));
  CHECK(r.reports[0].metric("variance_scaling").expected == doctest::Approx(std::pow(4.0, -0.75)));
  CHECK(r.reports[1].metric("proxy_fraction").observed == doctest::Approx(0.9));
  CHECK(r.reports[1].metric("ratio").observed ==
        doctest::Approx(r.reports[1].metric("raw_ratio").observed / 0.9));
  CHECK(r.reports[2].metric("dof").observed == 2.0);
  CHECK(r.reports[2].table_rows.size() == static_cast<std::size_t>(r.reports[2].used));
  CHECK(r.reports[3].metric("coverage").observed > 0.5);
  // These wide bands are sanity bounds, not calibration claims.
  for (const auto& rep : r.reports) CHECK_MESSAGE(rep.passed, rep.kind);

  ExperimentConfig bad = c;
  bad.checks = {ConvergenceCltCheck{100, 100, 0, {0.5, 2.0}}};
  CHECK(kind_of([&] { run_checks(r.summary, bad); }) == ErrorKind::HorizonOrder);
}

TEST_CASE("forcing drives the ensemble to q") {
  ExperimentConfig c = small_mean_field();
  c.forcing = ForcingVariant{0.5, 0.3};
  c.horizon = 100000;
  c.replications = 20;
  c.checks = {ForcingCheck{0, 0.05, 0.1}};
  const ExperimentResult r = run_experiment(c, 2);
  CHECK(r.reports[0].passed);
  CHECK(r.reports[0].metric("max_abs_deviation").observed < 0.05);
  ExperimentConfig plain = small_mean_field();
  plain.checks = {ForcingCheck{}};
  CHECK(kind_of([&] { run_experiment(plain, 1); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("reducible network: followers land between leader limits") {
  ExperimentConfig c = small_mean_field();
  BlockSpec b;
  b.leader_blocks = {mean_field(2, 0.5).weights(), mean_field(2, 0.8).weights()};
  b.follower_block = Matrix::Constant(2, 2, 0.25);
  b.coupling_blocks = {Matrix::Constant(2, 2, 0.125), Matrix::Constant(2, 2, 0.125)};
  c.network.generator = "blocks";
  c.network.blocks = b;
  c.z0 = (Vector(6) << 0.2, 0.3, 0.8, 0.7, 0.5, 0.5).finished();
  c.horizon = 100000;
  c.replications = 20;
  c.checks = {ReducibleCheck{0, 0.05, 0.1}};
  const ExperimentResult r = run_experiment(c, 2);
  CHECK(r.reports[0].passed);
  CHECK(r.summary.terminal_z_tilde.empty());

  ExperimentConfig needs_spectrum = c;
  needs_spectrum.checks = {MartingaleCheck{}};
  CHECK(kind_of([&] { run_experiment(needs_spectrum, 1); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("limit distribution check") {
  ExperimentConfig c = small_mean_field();
  c.replications = 200;
  c.horizon = 20000;
  c.checks = {LimitDistributionCheck{0, 0.01, 0.99, 0.5, 50, 0.2}};
  CHECK(run_experiment(c, 2).reports[0].passed);
  c.z0 = Vector::Ones(3);
  const CheckReport absorbed = run_experiment(c, 2).reports[0];
  CHECK_FALSE(absorbed.passed);
  CHECK(absorbed.metric("interior_fraction").observed == 0.0);
  CHECK(absorbed.table_rows.back()[1] == 1.0);
}
