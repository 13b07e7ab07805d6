#include "gemcmc/knn_graph.hpp"

#include <algorithm>
#include <future>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>

namespace gemcmc {

namespace {

using DistIndex = std::pair<double, int>;  // (squared distance, index)

// Bounded worst-first queue keyed lexicographically by (distance, index);
// the pair ordering implements the ascending-index tie-break.
class NeighborHeap {
 public:
  explicit NeighborHeap(int k) : k_(k) { heap_.reserve(k); }

  bool full() const { return static_cast<int>(heap_.size()) == k_; }
  const DistIndex& worst() const { return heap_.front(); }

  void offer(DistIndex candidate) {
    if (!full()) {
      heap_.push_back(candidate);
      std::push_heap(heap_.begin(), heap_.end());
    } else if (candidate < heap_.front()) {
      std::pop_heap(heap_.begin(), heap_.end());
      heap_.back() = candidate;
      std::push_heap(heap_.begin(), heap_.end());
    }
  }

  std::vector<int> sorted_indices() {
    std::sort(heap_.begin(), heap_.end());
    std::vector<int> out;
    out.reserve(heap_.size());
    for (const auto& [d2, idx] : heap_) out.push_back(idx);
    return out;
  }

 private:
  int k_;
  std::vector<DistIndex> heap_;
};

std::vector<int> brute_force_knn(const PriorSampleSet& set, const Vector& target,
                                 int k, int exclude) {
  NeighborHeap heap(k);
  const int b = set.size();
  for (int j = 0; j < b; ++j) {
    if (j == exclude) continue;
    heap.offer({(target - set.point(j)).squaredNorm(), j});
  }
  return heap.sorted_indices();
}

void validate_k(int k, int b) {
  if (k < 1 || k > b - 1) {
    throw std::invalid_argument("k must satisfy 1 <= k <= B-1, got k=" +
                                std::to_string(k) + " with B=" +
                                std::to_string(b));
  }
}

constexpr int kLeafSize = 16;
constexpr int kBruteForceCutoff = 256;  // build backend switch for kAuto

}  // namespace

KdTree::KdTree(const PriorSampleSet& set) : set_(&set) {
  const int b = set.size();
  perm_.resize(b);
  for (int i = 0; i < b; ++i) perm_[i] = i;
  nodes_.reserve(2 * b / kLeafSize + 4);
  root_ = build_range(0, b);
}

int KdTree::build_range(int begin, int end) {
  const int node_index = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  nodes_[node_index].begin = begin;
  nodes_[node_index].end = end;
  if (end - begin <= kLeafSize) return node_index;

  // split the widest dimension at its median
  const int d = set_->dim();
  int split_dim = 0;
  double best_spread = -1.0;
  for (int dim = 0; dim < d; ++dim) {
    double lo = set_->points()(dim, perm_[begin]);
    double hi = lo;
    for (int i = begin + 1; i < end; ++i) {
      const double v = set_->points()(dim, perm_[i]);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      split_dim = dim;
    }
  }
  const int mid = begin + (end - begin) / 2;
  std::nth_element(perm_.begin() + begin, perm_.begin() + mid,
                   perm_.begin() + end, [&](int a, int b2) {
                     return set_->points()(split_dim, a) <
                            set_->points()(split_dim, b2);
                   });
  nodes_[node_index].split_dim = split_dim;
  nodes_[node_index].split_value = set_->points()(split_dim, perm_[mid]);
  const int left = build_range(begin, mid);
  const int right = build_range(mid, end);
  nodes_[node_index].left = left;
  nodes_[node_index].right = right;
  return node_index;
}

std::vector<int> KdTree::query(const Vector& target, int k,
                               int exclude_index) const {
  if (target.size() != set_->dim()) {
    throw std::invalid_argument("KdTree::query: dimension mismatch");
  }
  validate_k(k, set_->size());
  NeighborHeap heap(k);

  // Recursive descent, nearer child first. A subtree is pruned only when its
  // splitting-plane distance strictly exceeds the current worst distance;
  // equality descends so that equal-distance candidates can win the index
  // tie-break.
  auto visit = [&](auto&& self, int node_index) -> void {
    const Node& node = nodes_[node_index];
    if (node.split_dim < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int j = perm_[i];
        if (j == exclude_index) continue;
        heap.offer({(target - set_->point(j)).squaredNorm(), j});
      }
      return;
    }
    const double diff = target[node.split_dim] - node.split_value;
    const int near = diff < 0.0 ? node.left : node.right;
    const int far = diff < 0.0 ? node.right : node.left;
    self(self, near);
    if (!heap.full() || diff * diff <= heap.worst().first) self(self, far);
  };
  visit(visit, root_);
  return heap.sorted_indices();
}

std::vector<int> knn_indices(const PriorSampleSet& set, int i, int k,
                             KnnBackend backend) {
  if (i < 0 || i >= set.size()) {
    throw std::invalid_argument("knn_indices: index out of range");
  }
  validate_k(k, set.size());
  if (backend == KnnBackend::kKdTree) {
    KdTree tree(set);
    return tree.query(set.point(i), k, i);
  }
  return brute_force_knn(set, set.point(i), k, i);
}

KnnGraph::KnnGraph(int k, std::vector<std::vector<int>> adjacency) {
  b_ = static_cast<int>(adjacency.size());
  if (b_ < 2) throw std::invalid_argument("KnnGraph: need at least 2 nodes");
  validate_k(k, b_);
  k_ = k;
  offsets_.assign(b_ + 1, 0);
  std::size_t total = 0;
  for (auto& row : adjacency) {
    std::sort(row.begin(), row.end());
    total += row.size();
  }
  adjacency_.reserve(total);
  for (int i = 0; i < b_; ++i) {
    const auto& row = adjacency[i];
    for (std::size_t r = 0; r < row.size(); ++r) {
      const int j = row[r];
      if (j < 0 || j >= b_) throw std::invalid_argument("KnnGraph: bad index");
      if (j == i) throw std::invalid_argument("KnnGraph: self-loop at node " +
                                              std::to_string(i));
      if (r > 0 && row[r - 1] == j) {
        throw std::invalid_argument("KnnGraph: duplicate edge");
      }
      adjacency_.push_back(j);
    }
    offsets_[i + 1] = static_cast<int>(adjacency_.size());
  }
  for (int i = 0; i < b_; ++i) {
    if (degree(i) < k_) {
      throw std::invalid_argument("KnnGraph: node " + std::to_string(i) +
                                  " has degree below k");
    }
    for (int j : neighbors(i)) {
      if (!has_edge(j, i)) {
        throw std::invalid_argument("KnnGraph: asymmetric adjacency at {" +
                                    std::to_string(i) + "," + std::to_string(j) +
                                    "}");
      }
    }
  }
}

KnnGraph KnnGraph::build(const PriorSampleSet& set, int k, KnnBackend backend) {
  const int b = set.size();
  validate_k(k, b);
  if (backend == KnnBackend::kAuto) {
    backend = b > kBruteForceCutoff ? KnnBackend::kKdTree
                                    : KnnBackend::kBruteForce;
  }

  std::vector<std::vector<int>> nearest(b);
  auto run_range = [&](const KdTree* tree, int begin, int end) {
    for (int i = begin; i < end; ++i) {
      nearest[i] = tree ? tree->query(set.point(i), k, i)
                        : brute_force_knn(set, set.point(i), k, i);
    }
  };

  std::unique_ptr<KdTree> tree;
  if (backend == KnnBackend::kKdTree) tree = std::make_unique<KdTree>(set);

  const unsigned hw = std::thread::hardware_concurrency();
  const int n_threads =
      b >= 4096 ? static_cast<int>(std::min<unsigned>(hw == 0 ? 1 : hw, 8)) : 1;
  if (n_threads > 1) {
    std::vector<std::future<void>> futures;
    const int chunk = (b + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const int begin = t * chunk;
      const int end = std::min(b, begin + chunk);
      if (begin >= end) break;
      futures.push_back(std::async(std::launch::async, run_range, tree.get(),
                                   begin, end));
    }
    for (auto& f : futures) f.get();
  } else {
    run_range(tree.get(), 0, b);
  }

  // union rule: edge {i,j} iff i in N_k(j) or j in N_k(i)
  std::vector<std::vector<int>> adjacency(b);
  for (int i = 0; i < b; ++i) {
    for (int j : nearest[i]) {
      adjacency[i].push_back(j);
      adjacency[j].push_back(i);
    }
  }
  KnnGraph graph;
  graph.k_ = k;
  graph.b_ = b;
  graph.offsets_.assign(b + 1, 0);
  for (int i = 0; i < b; ++i) {
    auto& row = adjacency[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    graph.offsets_[i + 1] = graph.offsets_[i] + static_cast<int>(row.size());
  }
  graph.adjacency_.reserve(graph.offsets_[b]);
  for (int i = 0; i < b; ++i) {
    graph.adjacency_.insert(graph.adjacency_.end(), adjacency[i].begin(),
                            adjacency[i].end());
  }
  return graph;
}

bool KnnGraph::has_edge(int i, int j) const {
  const auto row = neighbors(i);
  return std::binary_search(row.begin(), row.end(), j);
}

int KnnGraph::sample_neighbor(int i, RngStream& rng) const {
  if (i < 0 || i >= b_) {
    throw std::invalid_argument("sample_neighbor: node out of range");
  }
  const auto row = neighbors(i);
  return row[rng.uniform_index(row.size())];
}

double KnnGraph::proposal_prob(int from, int to, double rho) const {
  if (!(rho > 0.0) || rho > 1.0) {
    throw std::invalid_argument("proposal_prob: rho must be in (0, 1]");
  }
  double p = rho / b_;
  if (to != from && has_edge(from, to)) p += (1.0 - rho) / degree(from);
  return p;
}

std::pair<double, double> KnnGraph::proposal_pair(int from, int to,
                                                  double rho) const {
  const double restart = rho / b_;
  if (to == from || !has_edge(from, to)) return {restart, restart};
  return {restart + (1.0 - rho) / degree(from),
          restart + (1.0 - rho) / degree(to)};
}

}  // namespace gemcmc
