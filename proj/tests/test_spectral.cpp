#include "rsp/error.hpp"
#include "rsp/spectral.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace rsp;

namespace {

/// Perron vector of W by damped power iteration, normalized to sum sqrt(N).
Vector power_perron(const Matrix& w) {
  const int n = static_cast<int>(w.rows());
  const Matrix lazy = 0.5 * (w + Matrix::Identity(n, n));
  Vector v = Vector::Ones(n);
  for (int it = 0; it < 20000; ++it) v = lazy * v / (lazy * v).sum();
  return v * std::sqrt(static_cast<double>(n));
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

TEST_CASE("mean-field spectrum") {
  for (int n : {2, 4, 7}) {
    const SpectralData s = decompose(mean_field(n, 0.5));
    REQUIRE(s.size() == n);
    CHECK(std::abs(s.eigenvalues[0] - Complex(1.0)) < 1e-12);
    for (int j = 1; j < n; ++j) CHECK(std::abs(s.eigenvalues[j] - Complex(0.5)) < 1e-12);
    CHECK(testing::max_abs(s.v1 - Vector::Constant(n, 1.0 / std::sqrt(n))) < 1e-12);
    CHECK(std::abs(*s.lambda_star - Complex(0.5)) < 1e-12);
  }
}

TEST_CASE("cycle spectrum is ordered by real then imaginary part") {
  const SpectralData s = decompose(cycle(4));
  const std::vector<Complex> expected{{1, 0}, {0, 1}, {0, -1}, {-1, 0}};
  for (int j = 0; j < 4; ++j) CHECK(std::abs(s.eigenvalues[j] - expected[j]) < 1e-12);
  // Conjugate eigenvalues carry conjugate eigenvectors.
  CHECK(std::abs((s.left.col(1) - s.left.col(2).conjugate()).norm()) < 1e-12);
  CHECK(std::abs((s.right.col(1) - s.right.col(2).conjugate()).norm()) < 1e-12);
}

TEST_CASE("random networks: biorthogonality, reconstruction, Perron vector") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 7;
    const WeightedNetwork net = build_network(testing::random_irreducible(n, gen));
    const SpectralData s = decompose(net);
    const CMatrix pairing = s.left.transpose() * s.right;
    CHECK((pairing - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-9);
    for (int j = 0; j < n; ++j) {
      CHECK(std::abs(s.left.col(j).norm() - 1.0) < 1e-12);
      const CVector residual = net.weights().transpose() * s.left.col(j) - s.eigenvalues[j] * s.left.col(j);
      CHECK(residual.norm() < 1e-8);
    }
    CHECK(testing::max_abs(s.left.col(0).real() - Vector::Constant(n, 1.0 / std::sqrt(n))) < 1e-12);
    CHECK(s.v1.minCoeff() > 0.0);
    CHECK(testing::max_abs(s.v1 - power_perron(net.weights())) < 1e-8);
    const Reconstruction r = reconstruct(s);
    CHECK(testing::max_abs(r.matrix - net.weights().transpose()) < 1e-9);
    CHECK(r.max_imag < 1e-9);
    for (int j = 2; j < n; ++j) {
      const bool ordered = s.eigenvalues[j - 1].real() > s.eigenvalues[j].real() + 1e-9 ||
                           (std::abs(s.eigenvalues[j - 1].real() - s.eigenvalues[j].real()) <= 1e-6 &&
                            s.eigenvalues[j - 1].imag() >= s.eigenvalues[j].imag() - 1e-9);
      CHECK(ordered);
    }
  }
}

TEST_CASE("repeated eigenvalues: special vertex has a zero eigenvalue of multiplicity N - 1") {
  const SpectralData s = decompose(special_vertex(5, 0.3));
  for (int j = 1; j < 5; ++j) CHECK(std::abs(s.eigenvalues[j]) < 1e-12);
  // v1 = sqrt(N) a_p.
  CHECK(testing::max_abs(s.v1 - std::sqrt(5.0) * special_vertex_profile(5, 0.3)) < 1e-12);
  CHECK((s.left.transpose() * s.right - CMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("decompose refusals") {
  BlockSpec blocks;
  blocks.leader_blocks = {Matrix::Identity(1, 1), Matrix::Identity(1, 1)};
  CHECK(kind_of([&] { decompose(assemble_reducible(blocks)); }) == ErrorKind::NotIrreducible);

  // Companion matrix with eigenvalues 1, -1/4, -1/4: a single Jordan block for -1/4.
  Matrix p(3, 3);
  p << 0, 1, 0, 0, 0, 1, 0.0625, 0.4375, 0.5;
  CHECK(kind_of([&] { decompose(build_network(p.transpose())); }) == ErrorKind::NotDiagonalizable);
}

TEST_CASE("regime classification") {
  const SpectralData half = decompose(mean_field(4, 0.5));
  CHECK(classify_regime(half, 0.75, 1.0).regime == RegimeCase::A);
  const RegimeClassification c = classify_regime(half, 1.0, 1.0);
  CHECK(c.regime == RegimeCase::C);
  CHECK(c.m_star() == 3);
  CHECK(classify_regime(half, 1.0, 2.0).regime == RegimeCase::B);
  CHECK(kind_of([&] { classify_regime(half, 1.0, 0.9); }) == ErrorKind::UncoveredRegime);
  CHECK(classify_regime(decompose(mean_field(4, 0.75)), 1.0, 1.0).regime == RegimeCase::B);
  CHECK(kind_of([&] { classify_regime(half, 0.5, 1.0); }) == ErrorKind::GammaOutOfRange);
  CHECK(kind_of([&] { classify_regime(half, 1.2, 1.0); }) == ErrorKind::GammaOutOfRange);
  CHECK(kind_of([&] { classify_regime(half, 0.75, 0.0); }) == ErrorKind::InvalidParameter);
  // A single vertex has no lambda*; gamma = 1 is case B.
  CHECK(classify_regime(decompose(mean_field(1, 1.0)), 1.0, 1.0).regime == RegimeCase::B);
  CHECK(to_char(RegimeCase::C) == 'C');
}

TEST_CASE("regime boundary tolerance") {
  // lambda* = 1 - alpha sits exactly on 1 - 1/(2c) when 2 c alpha = 1.
  const SpectralData s = decompose(mean_field(3, 0.4));
  CHECK(classify_regime(s, 1.0, 1.25).regime == RegimeCase::C);
  CHECK(classify_regime(s, 1.0, 1.25 + 1e-6).regime == RegimeCase::B);
  CHECK(kind_of([&] { classify_regime(s, 1.0, 1.25 - 1e-6); }) == ErrorKind::UncoveredRegime);
}
