#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace rsp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Absolute tolerance on each column sum of a weighted adjacency matrix.
inline constexpr double kColumnSumTolerance = 1e-12;

/// Column-normalized weighted adjacency matrix. Entry (j, k) is the weight
/// with which vertex j influences vertex k, so W^T maps inclinations to the
/// success probabilities of the next round.
class WeightedNetwork {
 public:
  int size() const noexcept { return static_cast<int>(weights_.rows()); }
  const Matrix& weights() const noexcept { return weights_; }
  double weight(int j, int k) const { return weights_(j, k); }
  bool irreducible() const noexcept { return irreducible_; }

 private:
  friend WeightedNetwork build_network(const Matrix& weights);
  WeightedNetwork(Matrix w, bool irreducible) : weights_(std::move(w)), irreducible_(irreducible) {}

  Matrix weights_;
  bool irreducible_ = false;
};

/// Validates nonnegativity and column normalization. Columns within
/// kColumnSumTolerance of one are rescaled to sum to exactly one.
WeightedNetwork build_network(const Matrix& weights);

/// True iff the digraph of strictly positive entries is strongly connected.
bool strongly_connected(const Matrix& weights);

WeightedNetwork mean_field(int n, double alpha);
WeightedNetwork cycle(int n);
WeightedNetwork special_vertex(int n, double p);

/// The column vector (p, (1-p)/(N-1), ..., (1-p)/(N-1)).
Vector special_vertex_profile(int n, double p);

struct BlockSpec {
  std::vector<Matrix> leader_blocks;
  std::optional<Matrix> follower_block;
  /// One n_j x n_f matrix per leader block; required iff a follower exists.
  std::vector<Matrix> coupling_blocks;
};

/// Block upper-triangular composition: leaders on the diagonal, followers in
/// the last block row/column, coupling blocks above the follower block.
WeightedNetwork assemble_reducible(const BlockSpec& spec);

/// Index ranges [begin, end) of each leader block and of the follower block.
struct BlockLayout {
  std::vector<std::pair<int, int>> leaders;
  std::pair<int, int> follower{0, 0};
};
BlockLayout block_layout(const BlockSpec& spec);

}  // namespace rsp
