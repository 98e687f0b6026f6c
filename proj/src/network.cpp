#include "rsp/network.hpp"

#include "rsp/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <string>

namespace rsp {

bool strongly_connected(const Matrix& weights) {
  const int n = static_cast<int>(weights.rows());
  if (n == 0) return false;
  // Tarjan's algorithm, iterative to keep the stack bounded.
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  int counter = 0;
  int components = 0;

  struct Frame {
    int v;
    int next;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next < n) {
        const int w = f.next++;
        if (!(weights(f.v, w) > 0.0)) continue;
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const int v = f.v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] == index[v]) {
        ++components;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
        } while (w != v);
      }
    }
  }
  return components == 1;
}

WeightedNetwork build_network(const Matrix& weights) {
  if (weights.rows() != weights.cols())
    throw Error(ErrorKind::NotSquare, "weighted adjacency matrix must be square");
  if (weights.rows() < 1) throw Error(ErrorKind::NotSquare, "network needs at least one vertex");

  Matrix w = weights;
  const int n = static_cast<int>(w.rows());
  for (int k = 0; k < n; ++k) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      const double x = w(j, k);
      if (!(x >= 0.0))
        throw Error(ErrorKind::NegativeWeight,
                    "w[" + std::to_string(j) + "][" + std::to_string(k) + "] = " + std::to_string(x));
      sum += x;
    }
    if (std::abs(sum - 1.0) > kColumnSumTolerance)
      throw Error(ErrorKind::ColumnNotNormalized,
                  "column " + std::to_string(k) + " sums to " + std::to_string(sum));
    w.col(k) /= sum;
  }
  const bool irreducible = strongly_connected(w);
  return WeightedNetwork(std::move(w), irreducible);
}

WeightedNetwork mean_field(int n, double alpha) {
  if (n < 1) throw Error(ErrorKind::NTooSmall, "mean-field network needs N >= 1");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw Error(ErrorKind::AlphaOutOfRange, "alpha must lie in (0, 1], got " + std::to_string(alpha));
  Matrix w = Matrix::Constant(n, n, alpha / n);
  w.diagonal().array() += 1.0 - alpha;
  return build_network(w);
}

WeightedNetwork cycle(int n) {
  if (n < 2) throw Error(ErrorKind::NTooSmall, "cycle needs N >= 2");
  Matrix w = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) w(j, (j + 1) % n) = 1.0;
  return build_network(w);
}

Vector special_vertex_profile(int n, double p) {
  Vector a = Vector::Constant(n, (1.0 - p) / (n - 1));
  a(0) = p;
  return a;
}

WeightedNetwork special_vertex(int n, double p) {
  if (n < 2) throw Error(ErrorKind::NTooSmall, "special-vertex network needs N >= 2");
  if (!(p > 0.0 && p < 1.0))
    throw Error(ErrorKind::POutOfRange, "p must lie in (0, 1), got " + std::to_string(p));
  const Vector a = special_vertex_profile(n, p);
  return build_network(a * Vector::Ones(n).transpose());
}

BlockLayout block_layout(const BlockSpec& spec) {
  BlockLayout layout;
  int offset = 0;
  for (const auto& block : spec.leader_blocks) {
    layout.leaders.emplace_back(offset, offset + static_cast<int>(block.rows()));
    offset += static_cast<int>(block.rows());
  }
  const int nf = spec.follower_block ? static_cast<int>(spec.follower_block->rows()) : 0;
  layout.follower = {offset, offset + nf};
  return layout;
}

namespace {

double max_real_eigenvalue(const Matrix& m) {
  if (m.size() == 0) return -INFINITY;
  Eigen::EigenSolver<Matrix> solver(m, false);
  return solver.eigenvalues().real().maxCoeff();
}

}  // namespace

WeightedNetwork assemble_reducible(const BlockSpec& spec) {
  if (spec.leader_blocks.empty())
    throw Error(ErrorKind::DimensionMismatch, "at least one leader block is required");
  for (const auto& block : spec.leader_blocks) {
    if (block.rows() != block.cols() || block.rows() == 0)
      throw Error(ErrorKind::DimensionMismatch, "leader blocks must be square and non-empty");
    if (!strongly_connected(block))
      throw Error(ErrorKind::NotIrreducible, "every leader block must be irreducible");
  }
  const BlockLayout layout = block_layout(spec);
  const int nf = layout.follower.second - layout.follower.first;
  if (spec.follower_block) {
    const Matrix& wf = *spec.follower_block;
    if (wf.rows() != wf.cols() || wf.rows() == 0)
      throw Error(ErrorKind::DimensionMismatch, "follower block must be square and non-empty");
    if (spec.coupling_blocks.size() != spec.leader_blocks.size())
      throw Error(ErrorKind::DimensionMismatch, "one coupling block per leader block is required");
    for (std::size_t b = 0; b < spec.leader_blocks.size(); ++b) {
      if (spec.coupling_blocks[b].rows() != spec.leader_blocks[b].rows() || spec.coupling_blocks[b].cols() != nf)
        throw Error(ErrorKind::DimensionMismatch,
                    "coupling block " + std::to_string(b) + " must be n_j x n_f");
    }
    if (!(max_real_eigenvalue(wf) < 1.0))
      throw Error(ErrorKind::InvalidParameter, "follower block must have max real eigenvalue < 1");
  } else if (!spec.coupling_blocks.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "coupling blocks given without a follower block");
  }

  const int n = layout.follower.second;
  Matrix w = Matrix::Zero(n, n);
  for (std::size_t b = 0; b < spec.leader_blocks.size(); ++b) {
    const auto [begin, end] = layout.leaders[b];
    w.block(begin, begin, end - begin, end - begin) = spec.leader_blocks[b];
    if (spec.follower_block) w.block(begin, layout.follower.first, end - begin, nf) = spec.coupling_blocks[b];
  }
  if (spec.follower_block) w.bottomRightCorner(nf, nf) = *spec.follower_block;
  return build_network(w);
}

}  // namespace rsp
