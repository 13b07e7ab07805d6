#pragma once

#include <span>
#include <utility>
#include <vector>

#include "gemcmc/rng.hpp"
#include "gemcmc/types.hpp"

namespace gemcmc {

enum class KnnBackend { kAuto, kBruteForce, kKdTree };

/// Exact nearest-neighbor index over a prior sample set. Median-split tree
/// on the widest dimension; queries return exact results with distance ties
/// broken by ascending point index, matching the brute-force scan bit for
/// bit.
class KdTree {
 public:
  explicit KdTree(const PriorSampleSet& set);

  /// Indices of the k points nearest to target under Euclidean distance,
  /// sorted by (distance, index). exclude_index is skipped (-1 keeps all).
  std::vector<int> query(const Vector& target, int k,
                         int exclude_index = -1) const;

 private:
  struct Node {
    int left = -1;
    int right = -1;
    int begin = 0;
    int end = 0;
    int split_dim = -1;
    double split_value = 0.0;
  };

  int build_range(int begin, int end);
  const PriorSampleSet* set_;
  std::vector<Node> nodes_;
  std::vector<int> perm_;
  int root_ = -1;
};

/// N_k(theta_i): the k indices j != i closest to point i in Euclidean
/// distance, ties broken by smaller index. Requires 1 <= k <= B-1.
std::vector<int> knn_indices(const PriorSampleSet& set, int i, int k,
                             KnnBackend backend = KnnBackend::kAuto);

/// Undirected union-kNN graph over the prior sample set: edge {i,j} present
/// iff i is among the k nearest neighbors of j or vice versa. Immutable after
/// construction and shareable across chains.
class KnnGraph {
 public:
  /// From explicit adjacency lists (deserialization path). Lists must be
  /// self-loop free and symmetric; they are sorted internally.
  KnnGraph(int k, std::vector<std::vector<int>> adjacency);

  static KnnGraph build(const PriorSampleSet& set, int k,
                        KnnBackend backend = KnnBackend::kAuto);

  int size() const { return b_; }
  int k() const { return k_; }
  int degree(int i) const { return offsets_[i + 1] - offsets_[i]; }
  std::span<const int> neighbors(int i) const {
    return {adjacency_.data() + offsets_[i],
            static_cast<std::size_t>(degree(i))};
  }
  /// O(log D) membership test; the per-iteration hot path.
  bool has_edge(int i, int j) const;

  /// Uniform draw over the neighbors of node i.
  int sample_neighbor(int i, RngStream& rng) const;

  /// Proposal mass of drawing `to` from `from` under the restart/neighbor
  /// mixture: rho/B + (1-rho)/D(from) * 1{edge}. Includes the self-proposal
  /// mass rho/B when to == from.
  double proposal_prob(int from, int to, double rho) const;

  /// {forward, reverse} proposal masses with a single edge lookup; the edge
  /// indicator is shared by both directions.
  std::pair<double, double> proposal_pair(int from, int to, double rho) const;

 private:
  KnnGraph() = default;
  int k_ = 0;
  int b_ = 0;
  std::vector<int> offsets_;    // size B+1
  std::vector<int> adjacency_;  // CSR, each row sorted ascending
};

}  // namespace gemcmc
