#include "rsp/spectral.hpp"

#include "rsp/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rsp {

CVector SpectralData::diag_D() const {
  CVector d(size() - 1);
  for (int j = 1; j < size(); ++j) d(j - 1) = eigenvalues[j];
  return d;
}

char to_char(RegimeCase c) {
  switch (c) {
    case RegimeCase::A: return 'A';
    case RegimeCase::B: return 'B';
    case RegimeCase::C: return 'C';
  }
  return '?';
}

namespace {

struct Cluster {
  Complex value;
  int multiplicity = 0;
};

// Groups the non-Perron eigenvalues into eigenspaces (single linkage on distance).
std::vector<Cluster> cluster_eigenvalues(const std::vector<Complex>& values, double tol) {
  const int n = static_cast<int>(values.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (std::abs(values[a] - values[b]) < tol) parent[find(a)] = find(b);

  std::vector<Cluster> clusters;
  std::vector<int> slot(n, -1);
  for (int a = 0; a < n; ++a) {
    const int root = find(a);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(clusters.size());
      clusters.push_back({});
    }
    Cluster& cl = clusters[slot[root]];
    cl.value += values[a];
    ++cl.multiplicity;
  }
  for (auto& cl : clusters) {
    cl.value /= static_cast<double>(cl.multiplicity);
    if (std::abs(cl.value.imag()) < tol) cl.value = {cl.value.real(), 0.0};
  }
  return clusters;
}

// Puts the largest-modulus entry on the positive real axis; keeps the basis orthonormal.
void fix_phase(Eigen::Ref<CVector> u) {
  Eigen::Index arg = 0;
  u.cwiseAbs().maxCoeff(&arg);
  const Complex z = u(arg);
  if (std::abs(z) > 0.0) u *= std::conj(z) / std::abs(z);
}

// Orthonormal basis of ker(W^T - lambda I) with exactly `m` vectors.
CMatrix eigenspace_basis(const Matrix& wt, const Cluster& cl, const SpectralOptions& opt) {
  const int n = static_cast<int>(wt.rows());
  CMatrix basis(n, cl.multiplicity);
  double kth_smallest = 0.0;
  if (cl.value.imag() == 0.0) {
    Matrix a = wt - cl.value.real() * Matrix::Identity(n, n);
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    basis = svd.matrixV().rightCols(cl.multiplicity).cast<Complex>();
    kth_smallest = svd.singularValues()(n - cl.multiplicity);
  } else {
    CMatrix a = wt.cast<Complex>() - cl.value * CMatrix::Identity(n, n);
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
    basis = svd.matrixV().rightCols(cl.multiplicity);
    kth_smallest = svd.singularValues()(n - cl.multiplicity);
  }
  if (kth_smallest > opt.null_space_tol * std::max(1.0, wt.norm()))
    throw Error(ErrorKind::NotDiagonalizable,
                "eigenvalue (" + std::to_string(cl.value.real()) + ", " + std::to_string(cl.value.imag()) +
                    ") has algebraic multiplicity " + std::to_string(cl.multiplicity) +
                    " but a smaller eigenspace");
  for (int j = 0; j < basis.cols(); ++j) fix_phase(basis.col(j));
  return basis;
}

bool descending(const Complex& a, const Complex& b) {
  if (std::abs(a.real() - b.real()) > kRegimeTolerance) return a.real() > b.real();
  return a.imag() > b.imag();
}

}  // namespace

SpectralData decompose(const WeightedNetwork& net, const SpectralOptions& opt) {
  if (!net.irreducible())
    throw Error(ErrorKind::NotIrreducible, "spectral analysis requires an irreducible network");
  const int n = net.size();
  const Matrix wt = net.weights().transpose();

  SpectralData out;
  out.left = CMatrix::Zero(n, n);
  out.left.col(0).setConstant(Complex(1.0 / std::sqrt(static_cast<double>(n)), 0.0));
  out.eigenvalues.push_back(1.0);

  if (n > 1) {
    Eigen::EigenSolver<Matrix> solver(wt, false);
    std::vector<Complex> values(solver.eigenvalues().begin(), solver.eigenvalues().end());
    auto perron = std::min_element(values.begin(), values.end(), [](const Complex& a, const Complex& b) {
      return std::abs(a - 1.0) < std::abs(b - 1.0);
    });
    values.erase(perron);

    std::vector<Cluster> clusters = cluster_eigenvalues(values, opt.cluster_tol);
    for (const auto& cl : clusters)
      if (std::abs(cl.value - 1.0) < opt.cluster_tol)
        throw Error(ErrorKind::NotIrreducible, "eigenvalue 1 is not simple");
    std::sort(clusters.begin(), clusters.end(),
              [](const Cluster& a, const Cluster& b) { return descending(a.value, b.value); });

    // Conjugate partners reuse the conjugated basis of the upper-half-plane cluster.
    std::vector<CMatrix> bases(clusters.size());
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      if (clusters[i].value.imag() < 0.0) continue;
      bases[i] = eigenspace_basis(wt, clusters[i], opt);
      if (clusters[i].value.imag() == 0.0) continue;
      bool paired = false;
      for (std::size_t k = 0; k < clusters.size(); ++k) {
        if (clusters[k].value.imag() < 0.0 && std::abs(clusters[k].value - std::conj(clusters[i].value)) < opt.cluster_tol &&
            clusters[k].multiplicity == clusters[i].multiplicity && bases[k].size() == 0) {
          bases[k] = bases[i].conjugate();
          clusters[k].value = std::conj(clusters[i].value);
          paired = true;
          break;
        }
      }
      if (!paired) throw Error(ErrorKind::BiorthogonalizationFailed, "complex eigenvalue without a conjugate partner");
    }

    int col = 1;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      for (int m = 0; m < clusters[i].multiplicity; ++m) {
        out.eigenvalues.push_back(clusters[i].value);
        out.left.col(col++) = bases[i].col(m);
      }
    }
  }

  Eigen::JacobiSVD<CMatrix> svd(out.left);
  const auto& sv = svd.singularValues();
  const double condition = sv(0) / sv(sv.size() - 1);
  if (!(condition <= opt.max_condition))
    throw Error(ErrorKind::NotDiagonalizable, "left eigenvector matrix has condition number " + std::to_string(condition));

  out.right = out.left.transpose().inverse();

  const CMatrix w = net.weights().cast<Complex>();
  for (int j = 0; j < n; ++j) {
    const Complex pairing = out.left.col(j).transpose() * out.right.col(j);
    if (std::abs(pairing) < 1e-12)
      throw Error(ErrorKind::BiorthogonalizationFailed, "u_j^T v_j vanishes for j = " + std::to_string(j));
    const double residual = (w * out.right.col(j) - out.eigenvalues[j] * out.right.col(j)).norm();
    if (residual > opt.residual_tol * std::max(1.0, out.right.col(j).norm()))
      throw Error(ErrorKind::BiorthogonalizationFailed,
                  "right eigenvector " + std::to_string(j) + " has residual " + std::to_string(residual));
  }

  out.v1 = out.right.col(0).real();
  if (out.v1.minCoeff() < -opt.sign_tol)
    throw Error(ErrorKind::PerronSignMismatch, "Perron right eigenvector has entries of mixed sign");
  if (n > 1) out.lambda_star = out.eigenvalues[1];
  return out;
}

void validate_gamma(double gamma) {
  if (!(gamma > 0.5 && gamma <= 1.0))
    throw Error(ErrorKind::GammaOutOfRange, "gamma must lie in (1/2, 1], got " + std::to_string(gamma));
}

RegimeClassification classify_regime(const SpectralData& spec, double gamma, double c, double tol) {
  validate_gamma(gamma);
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidParameter, "c must be positive");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "tolerance must be positive");

  RegimeClassification out;
  out.gamma = gamma;
  out.c = c;
  out.tol = tol;
  if (gamma < 1.0) {
    out.regime = RegimeCase::A;
    return out;
  }
  const double critical = 1.0 - 1.0 / (2.0 * c);
  if (!spec.lambda_star) {
    out.regime = RegimeCase::B;
    return out;
  }
  const double gap = spec.lambda_star->real() - critical;
  if (gap < -tol) {
    out.regime = RegimeCase::B;
  } else if (gap <= tol) {
    out.regime = RegimeCase::C;
    for (int j = 1; j < spec.size(); ++j)
      if (std::abs(spec.eigenvalues[j].real() - critical) <= tol) out.a_star.push_back(j);
  } else {
    throw Error(ErrorKind::UncoveredRegime, "gamma = 1 with Re(lambda*) = " + std::to_string(spec.lambda_star->real()) +
                                                " above the critical value " + std::to_string(critical));
  }
  return out;
}

Reconstruction reconstruct(const SpectralData& spec) {
  const int n = spec.size();
  CMatrix d = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) d(j, j) = spec.eigenvalues[j];
  const CMatrix full = spec.left * d * spec.right.transpose();
  return {full.real(), full.imag().cwiseAbs().maxCoeff()};
}

}  // namespace rsp
