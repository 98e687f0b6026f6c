#include "rsp/error.hpp"
#include "rsp/network.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace rsp;

namespace {

/// Warshall transitive closure, independent of the Tarjan walk under test.
bool closure_connected(const Matrix& w) {
  const int n = static_cast<int>(w.rows());
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) reach[i][j] = i == j || w(i, j) > 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) reach[i][j] = reach[i][j] || (reach[i][k] && reach[k][j]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!reach[i][j]) return false;
  return true;
}

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

TEST_CASE("mean-field weights") {
  const WeightedNetwork net = mean_field(4, 0.5);
  CHECK(net.size() == 4);
  CHECK(net.weight(0, 0) == doctest::Approx(0.5 + 0.125));
  CHECK(net.weight(1, 2) == doctest::Approx(0.125));
  CHECK(net.irreducible());
  CHECK((net.weights().colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-15);
  CHECK(mean_field(1, 1.0).weight(0, 0) == 1.0);
}

TEST_CASE("cycle and special vertex") {
  const WeightedNetwork c = cycle(5);
  for (int j = 0; j < 5; ++j) CHECK(c.weight(j, (j + 1) % 5) == 1.0);
  CHECK(c.weights().sum() == 5.0);
  CHECK(c.irreducible());

  const WeightedNetwork s = special_vertex(4, 0.4);
  const Vector a = special_vertex_profile(4, 0.4);
  CHECK(a.sum() == doctest::Approx(1.0));
  for (int k = 0; k < 4; ++k) CHECK(testing::max_abs(s.weights().col(k) - a) < 1e-15);
  CHECK(s.irreducible());
}

TEST_CASE("generator parameter errors") {
  CHECK(kind_of([] { mean_field(0, 0.5); }) == ErrorKind::NTooSmall);
  CHECK(kind_of([] { mean_field(3, 0.0); }) == ErrorKind::AlphaOutOfRange);
  CHECK(kind_of([] { mean_field(3, 1.5); }) == ErrorKind::AlphaOutOfRange);
  CHECK(kind_of([] { cycle(1); }) == ErrorKind::NTooSmall);
  CHECK(kind_of([] { special_vertex(1, 0.5); }) == ErrorKind::NTooSmall);
  CHECK(kind_of([] { special_vertex(3, 1.0); }) == ErrorKind::POutOfRange);
}

TEST_CASE("build_network validation") {
  CHECK(kind_of([] { build_network(Matrix::Ones(2, 3)); }) == ErrorKind::NotSquare);
  Matrix neg(2, 2);
  neg << 1.5, 0.5, -0.5, 0.5;
  CHECK(kind_of([&] { build_network(neg); }) == ErrorKind::NegativeWeight);
  Matrix off(2, 2);
  off << 0.5, 0.5, 0.4, 0.5;
  CHECK(kind_of([&] { build_network(off); }) == ErrorKind::ColumnNotNormalized);
  Matrix nan_entry = Matrix::Constant(2, 2, 0.5);
  nan_entry(0, 1) = std::nan("");
  CHECK(kind_of([&] { build_network(nan_entry); }) == ErrorKind::NegativeWeight);
}

TEST_CASE("columns within tolerance are renormalized exactly") {
  Matrix w(2, 2);
  w << 0.3 + 4e-13, 0.5, 0.7, 0.5;
  const WeightedNetwork net = build_network(w);
  CHECK(net.weights().col(0).sum() == doctest::Approx(1.0).epsilon(1e-16));
}

TEST_CASE("irreducibility agrees with transitive closure") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int connected = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + trial % 7;
    Matrix w = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (u(gen) < 0.25) w(j, k) = u(gen);
    for (int k = 0; k < n; ++k) {
      if (w.col(k).sum() == 0.0) w(k, k) = 1.0;
      w.col(k) /= w.col(k).sum();
    }
    const bool expected = closure_connected(w);
    connected += expected;
    CHECK(strongly_connected(w) == expected);
    CHECK(build_network(w).irreducible() == expected);
  }
  // The sample must exercise both outcomes.
  CHECK(connected > 10);
  CHECK(connected < 290);
}

TEST_CASE("reducible assembly") {
  BlockSpec spec;
  spec.leader_blocks = {mean_field(2, 0.5).weights(), mean_field(3, 1.0).weights()};
  spec.follower_block = Matrix::Constant(2, 2, 0.125);
  spec.coupling_blocks = {Matrix::Constant(2, 2, 0.125), Matrix::Constant(3, 2, 0.5 / 3.0)};
  const WeightedNetwork net = assemble_reducible(spec);
  CHECK(net.size() == 7);
  CHECK_FALSE(net.irreducible());
  const BlockLayout layout = block_layout(spec);
  CHECK(layout.leaders[0] == std::pair{0, 2});
  CHECK(layout.leaders[1] == std::pair{2, 5});
  CHECK(layout.follower == std::pair{5, 7});
  // Leaders do not listen to anyone outside their block.
  CHECK(net.weights().block(0, 2, 2, 3).isZero());
  CHECK(net.weights().block(5, 0, 2, 5).isZero());

  BlockSpec bad = spec;
  bad.follower_block = Matrix::Identity(2, 2);
  CHECK(kind_of([&] { assemble_reducible(bad); }) == ErrorKind::InvalidParameter);
  bad = spec;
  bad.coupling_blocks.pop_back();
  CHECK(kind_of([&] { assemble_reducible(bad); }) == ErrorKind::DimensionMismatch);
  bad = spec;
  bad.leader_blocks[0] = Matrix::Identity(2, 2);
  CHECK(kind_of([&] { assemble_reducible(bad); }) == ErrorKind::NotIrreducible);
}
