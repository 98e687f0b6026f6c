#include "rsp/dynamics.hpp"
#include "rsp/error.hpp"
#include "rsp/stats.hpp"
#include "support.hpp"

#include <doctest.h>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/binomial.hpp>

#include <cmath>
#include <random>

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

}  // namespace

TEST_CASE("schedule offsets and rates") {
  const ReinforcementSchedule a(0.75, 1.0);
  CHECK(a.offset() == 2);
  CHECK(a.rate(0) == doctest::Approx(std::pow(2.0, -0.75)));
  CHECK(a.rate(98) == doctest::Approx(std::pow(100.0, -0.75)));
  const ReinforcementSchedule b(1.0, 3.0);
  CHECK(b.offset() == 4);
  CHECK(b.rate(0) == 0.75);
  CHECK(ReinforcementSchedule(1.0, 0.5).offset() == 2);
  CHECK(ReinforcementSchedule(1.0, 1.0, 6).rate(0) == doctest::Approx(1.0 / 6.0));
  CHECK(kind_of([] { ReinforcementSchedule(1.0, 2.0, 2); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { ReinforcementSchedule(0.4, 1.0); }) == ErrorKind::GammaOutOfRange);
  CHECK(kind_of([] { ReinforcementSchedule(0.75, -1.0); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("random streams") {
  RngStream a = RngStream::for_replication(7, 0);
  RngStream b = RngStream::for_replication(7, 0);
  RngStream c = RngStream::for_replication(7, 1);
  CHECK(a == b);
  bool differs = false;
  std::vector<double> xs;
  for (int i = 0; i < 100000; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    differs = differs || x != c.uniform();
    xs.push_back(x);
  }
  CHECK(differs);
  CHECK(*std::min_element(xs.begin(), xs.end()) >= 0.0);
  CHECK(*std::max_element(xs.begin(), xs.end()) < 1.0);
  CHECK(ks_uniform(xs) < 0.01);
  CHECK(stream_seed(1, 2) != stream_seed(2, 1));
}

TEST_CASE("absorbing states") {
  const WeightedNetwork net = mean_field(3, 0.5);
  const ReinforcementSchedule sched(0.75, 1.0);
  RngStream rng(1);
  SystemState zero{0, Vector::Zero(3)};
  SystemState one{0, Vector::Ones(3)};
  for (int i = 0; i < 100; ++i) {
    zero = step(zero, net, sched, rng);
    one = step(one, net, sched, rng);
  }
  CHECK(zero.z.isZero());
  CHECK(one.z.isOnes());
  CHECK(zero.step == 100);
}

TEST_CASE("one step has the conditional mean Z + r (W^T Z - Z)") {
  Matrix w(3, 3);
  w << 0.2, 0.5, 0.1, 0.3, 0.25, 0.6, 0.5, 0.25, 0.3;
  const WeightedNetwork net = build_network(w);
  const ReinforcementSchedule sched(0.75, 1.0);
  SystemState s{5, Vector(3)};
  s.z << 0.1, 0.6, 0.9;
  const Vector expected = s.z + sched.rate(5) * (success_probabilities(net, s.z) - s.z);
  const int reps = 200000;
  RngStream rng(99);
  Vector sum = Vector::Zero(3);
  for (int i = 0; i < reps; ++i) sum += step(s, net, sched, rng).z;
  const Vector mean_next = sum / reps;
  // Each coordinate is a two-point law with spread r; standard error <= r / (2 sqrt(reps)).
  const double se = sched.rate(5) / (2.0 * std::sqrt(static_cast<double>(reps)));
  CHECK(testing::max_abs(mean_next - expected) < 5.0 * se);
}

TEST_CASE("forcing with rho = 0 is deterministic relaxation toward q") {
  const WeightedNetwork net = cycle(3);
  const ReinforcementSchedule sched(0.75, 1.0);
  RngStream rng(5);
  SystemState s{0, Vector::Constant(3, 0.9)};
  const ForcingVariant f{0.0, 0.3};
  const SystemState next = step_forced(s, net, sched, f, rng);
  CHECK(testing::max_abs(next.z - Vector::Constant(3, 0.9 + sched.rate(0) * (0.3 - 0.9))) < 1e-15);
  CHECK(kind_of([&] { step_forced(s, net, sched, ForcingVariant{1.0, 0.3}, rng); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([&] { step_forced(s, net, sched, ForcingVariant{0.5, 1.3}, rng); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("simulator engine matches repeated steps") {
  std::mt19937_64 gen(4);
  const WeightedNetwork net = build_network(testing::random_irreducible(5, gen));
  const ReinforcementSchedule sched(0.8, 1.5);
  RngStream a(17), b(17);
  SystemState s{0, Vector::Constant(5, 0.4)};
  for (int i = 0; i < 2000; ++i) s = step(s, net, sched, a);
  const Simulator sim(net, sched, 2000);
  SystemState t{0, Vector::Constant(5, 0.4)};
  sim.advance(t, b, 700);
  sim.advance(t, b, 2000);
  CHECK(t.step == 2000);
  CHECK(testing::max_abs(s.z - t.z) < 1e-12);
}

TEST_CASE("trajectory recording and determinism") {
  const WeightedNetwork net = mean_field(3, 0.5);
  const ReinforcementSchedule sched(0.75, 1.0);
  const Vector z0 = Vector::Constant(3, 0.5);
  const Trajectory t = simulate(net, sched, z0, 100, Recording::geometric(), std::nullopt, 7, 0);
  std::vector<long> steps;
  for (const auto& snap : t.recorded) steps.push_back(snap.step);
  CHECK(steps == std::vector<long>{0, 1, 2, 4, 8, 16, 32, 64, 100});
  CHECK(t.final_state.z == t.recorded.back().z);
  const Trajectory u = simulate(net, sched, z0, 100, Recording::geometric(), std::nullopt, 7, 0);
  CHECK(u.final_state.z == t.final_state.z);
  const Trajectory v = simulate(net, sched, z0, 100, Recording::geometric(), std::nullopt, 7, 1);
  CHECK(v.final_state.z != t.final_state.z);
  const Trajectory every = simulate(net, sched, z0, 10, Recording::every(3), std::nullopt, 7, 0);
  CHECK(every.recorded.size() == 5);  // 0, 3, 6, 9, 10
  CHECK(kind_of([&] { simulate(net, sched, z0, 0, {}, std::nullopt, 7, 0); }) == ErrorKind::HorizonZero);
  CHECK(kind_of([&] { simulate(net, sched, Vector::Constant(2, 0.5), 5, {}, std::nullopt, 7, 0); }) ==
        ErrorKind::DimensionMismatch);
  CHECK(kind_of([&] { simulate(net, sched, Vector::Constant(3, 1.5), 5, {}, std::nullopt, 7, 0); }) ==
        ErrorKind::InvalidParameter);
}

TEST_CASE("projection onto the Perron direction") {
  Matrix w(2, 2);
  w << 0.7, 0.4, 0.3, 0.6;
  const SpectralData spec = decompose(build_network(w));
  Vector z(2);
  z << 0.2, 0.9;
  const Projection p = project(spec, z);
  CHECK(testing::max_abs(p.z_hat.array() + p.z_tilde - z.array()) < 1e-15);
  CHECK(std::abs(spec.v1.dot(p.z_hat)) < 1e-14);
  CHECK(spread(z) == doctest::Approx(0.7));
}

TEST_CASE("exact enumeration: single vertex is a Polya urn with beta-binomial law") {
  // a red and b blue balls: Z_n = (a + reds) / (a + b + n), i.e. gamma = c = 1 with offset a + b + 1.
  const int a = 2, b = 3, n = 12;
  const ReinforcementSchedule sched(1.0, 1.0, a + b + 1);
  const auto law = enumerate_exact(mean_field(1, 1.0), sched, Vector::Constant(1, 0.4), n);
  CHECK(law.size() == n + 1);
  double total = 0.0;
  for (const auto& o : law) {
    const int k = static_cast<int>(std::lround(o.z(0) * (a + b + n) - a));
    const double p = boost::math::binomial_coefficient<double>(n, k) * boost::math::beta(a + k, b + n - k) /
                     boost::math::beta(a, b);
    CHECK(o.probability == doctest::Approx(p).epsilon(1e-12));
    total += o.probability;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("exact enumeration preserves the Perron martingale") {
  Matrix w(2, 2);
  w << 0.7, 0.4, 0.3, 0.6;
  const WeightedNetwork net = build_network(w);
  const SpectralData spec = decompose(net);
  Vector z0(2);
  z0 << 0.3, 0.8;
  for (double gamma : {0.75, 1.0}) {
    const ReinforcementSchedule sched(gamma, 1.0);
    const auto law = enumerate_exact(net, sched, z0, 9);
    double mass = 0.0, mean = 0.0;
    for (const auto& o : law) {
      mass += o.probability;
      mean += o.probability * perron_component(spec.v1, o.z);
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(mean - perron_component(spec.v1, z0)) < 1e-12);
  }
  CHECK(kind_of([&] { enumerate_exact(net, ReinforcementSchedule(1.0, 1.0), z0, 13); }) == ErrorKind::TooLarge);
}

TEST_CASE("simulated single vertex matches an independent ball-drawing urn") {
  const int a = 2, b = 3, n = 400, reps = 20000;
  const ReinforcementSchedule sched(1.0, 1.0, a + b + 1);
  const WeightedNetwork net = mean_field(1, 1.0);
  const Simulator sim(net, sched, n);
  std::vector<double> ours, urn;
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int r = 0; r < reps; ++r) {
    RngStream rng = RngStream::for_replication(3, r);
    SystemState s{0, Vector::Constant(1, 0.4)};
    sim.advance(s, rng, n);
    ours.push_back(s.z(0));
    double red = a, total = a + b;
    for (int i = 0; i < n; ++i) {
      if (u(gen) < red / total) red += 1.0;
      total += 1.0;
    }
    urn.push_back(red / total);
  }
  CHECK(ks_two_sample(ours, urn) < 0.03);
}
