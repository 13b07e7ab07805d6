#include "doctest.h"

#include <cmath>

#include "gemcmc/io.hpp"
#include "gemcmc/knn_graph.hpp"
#include "gemcmc/rng.hpp"
#include "gemcmc/synthetic.hpp"
#include "support/oracles.hpp"

using namespace gemcmc;

namespace {

PriorSampleSet line_points() {
  Matrix pts(4, 1);
  pts << 0.0, 1.0, 2.0, 10.0;
  return PriorSampleSet::from_rows(pts);
}

PriorSampleSet random_set(int b, int d, std::uint64_t seed,
                          bool with_duplicates = false) {
  RngStream rng(seed);
  Matrix pts(b, d);
  for (int i = 0; i < b; ++i) pts.row(i) = rng.normal_vector(d).transpose();
  if (with_duplicates) {
    for (int i = 0; i + 1 < b; i += 7) pts.row(i + 1) = pts.row(i);
  }
  return PriorSampleSet::from_rows(pts);
}

}  // namespace

TEST_CASE("knn_indices: tie-break by index, full neighborhoods, range checks") {
  const auto set = line_points();
  // point "1" is tied between "0" and "2" at distance 1; the lower index wins
  CHECK(knn_indices(set, 1, 1) == std::vector<int>{0});
  CHECK(knn_indices(set, 1, 1, KnnBackend::kKdTree) == std::vector<int>{0});

  const auto all = knn_indices(set, 2, 3);
  CHECK(all.size() == 3);
  // k = B-1 returns every other index
  for (int idx : {0, 1, 3}) {
    CHECK(std::find(all.begin(), all.end(), idx) != all.end());
  }
  CHECK_THROWS_AS(knn_indices(set, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(knn_indices(set, 0, 4), std::invalid_argument);
}

TEST_CASE("knn backends agree with the exhaustive oracle") {
  const auto set = random_set(200, 3, 99);
  for (int i : {0, 17, 199}) {
    const auto expected = oracle::brute_knn_oracle(set.points(), i, 10);
    CHECK(knn_indices(set, i, 10, KnnBackend::kBruteForce) == expected);
    CHECK(knn_indices(set, i, 10, KnnBackend::kKdTree) == expected);
  }
}

TEST_CASE("build_graph on the 1-d line example") {
  const auto graph = KnnGraph::build(line_points(), 1);
  // union edges {0,1}, {1,2}, {2,10}; degrees 1, 2, 2, 1
  CHECK(graph.degree(0) == 1);
  CHECK(graph.degree(1) == 2);
  CHECK(graph.degree(2) == 2);
  CHECK(graph.degree(3) == 1);
  CHECK(graph.has_edge(0, 1));
  CHECK(graph.has_edge(1, 2));
  CHECK(graph.has_edge(2, 3));
  CHECK_FALSE(graph.has_edge(0, 2));
  CHECK_FALSE(graph.has_edge(0, 3));
  CHECK_FALSE(graph.has_edge(1, 3));
}

TEST_CASE("build_graph: complete graph at k = B-1") {
  const auto set = random_set(12, 2, 5);
  const auto graph = KnnGraph::build(set, 11);
  for (int i = 0; i < 12; ++i) CHECK(graph.degree(i) == 11);
}

TEST_CASE("experiment-1 prior graph: symmetric with degree floor k") {
  const auto data = generate_experiment1(2024);
  const auto graph = KnnGraph::build(data.prior, 10);
  for (int i = 0; i < graph.size(); ++i) {
    CHECK(graph.degree(i) >= 10);
    for (int j : graph.neighbors(i)) {
      CHECK(graph.has_edge(j, i));
      CHECK(j != i);
    }
  }
}

TEST_CASE("backend equivalence on random instances with duplicates") {
  RngStream seeds(404);
  for (int instance = 0; instance < 100; ++instance) {
    const int b = 20 + static_cast<int>(seeds.uniform_index(481));
    const int d = 1 + static_cast<int>(seeds.uniform_index(4));
    const int k = 1 + static_cast<int>(seeds.uniform_index(8));
    const auto set = random_set(b, d, seeds.next_u64(), instance % 3 == 0);
    const auto brute = KnnGraph::build(set, k, KnnBackend::kBruteForce);
    const auto kd = KnnGraph::build(set, k, KnnBackend::kKdTree);
    REQUIRE(brute.size() == kd.size());
    for (int i = 0; i < b; ++i) {
      const auto nb = brute.neighbors(i);
      const auto nk = kd.neighbors(i);
      REQUIRE(std::vector<int>(nb.begin(), nb.end()) ==
              std::vector<int>(nk.begin(), nk.end()));
    }
  }
}

TEST_CASE("sample_neighbor is uniform over the adjacency") {
  const auto graph = KnnGraph::build(line_points(), 1);
  RngStream rng(8);
  // degree-1 node: its unique neighbor always
  for (int i = 0; i < 50; ++i) CHECK(graph.sample_neighbor(0, rng) == 1);

  // degree-2 node: binomial confidence band
  const int n = 100000;
  int count0 = 0;
  for (int i = 0; i < n; ++i) {
    if (graph.sample_neighbor(1, rng) == 0) ++count0;
  }
  const double freq = static_cast<double>(count0) / n;
  CHECK(std::abs(freq - 0.5) < 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("sample_neighbor passes a chi-square uniformity test") {
  // a node with degree 12 on a clustered instance
  RngStream rng(31);
  Matrix pts(13, 2);
  for (int i = 0; i < 13; ++i) pts.row(i) = rng.normal_vector(2).transpose();
  const auto set = PriorSampleSet::from_rows(pts);
  const auto graph = KnnGraph::build(set, 12);
  REQUIRE(graph.degree(0) == 12);

  const int n = 100000;
  std::vector<int> counts(13, 0);
  for (int i = 0; i < n; ++i) ++counts[graph.sample_neighbor(0, rng)];
  const double expected = static_cast<double>(n) / 12.0;
  double stat = 0.0;
  for (int j : graph.neighbors(0)) {
    const double diff = counts[j] - expected;
    stat += diff * diff / expected;
  }
  CHECK(stat < oracle::chi_square_quantile(0.999, 11));
}

TEST_CASE("proposal_prob formula and row-stochasticity") {
  // non-adjacent pair at B = 100
  const auto big = random_set(100, 2, 55);
  const auto big_graph = KnnGraph::build(big, 3);
  int far_i = -1, far_j = -1;
  for (int i = 0; i < 100 && far_i < 0; ++i) {
    for (int j = 0; j < 100; ++j) {
      if (i != j && !big_graph.has_edge(i, j)) {
        far_i = i;
        far_j = j;
        break;
      }
    }
  }
  REQUIRE(far_i >= 0);
  CHECK(big_graph.proposal_prob(far_i, far_j, 0.5) == doctest::Approx(0.005));

  // adjacent pair with B = 4 and degree(from) = 2: 0.125 + 0.25
  const auto graph = KnnGraph::build(line_points(), 1);
  CHECK(graph.degree(1) == 2);
  CHECK(graph.proposal_prob(1, 0, 0.5) == doctest::Approx(0.375));
  CHECK(graph.proposal_prob(1, 1, 0.5) == doctest::Approx(0.125));

  // rows sum to one including the self-proposal mass
  for (double rho : {0.2, 0.5, 0.9, 1.0}) {
    for (int i = 0; i < big_graph.size(); ++i) {
      double total = 0.0;
      for (int j = 0; j < big_graph.size(); ++j) {
        total += big_graph.proposal_prob(i, j, rho);
      }
      CHECK(std::abs(total - 1.0) < 1e-12);
    }
  }

  // proposal_pair shares the edge indicator between directions
  const auto [fwd, rev] = graph.proposal_pair(1, 0, 0.5);
  CHECK(fwd == doctest::Approx(graph.proposal_prob(1, 0, 0.5)));
  CHECK(rev == doctest::Approx(graph.proposal_prob(0, 1, 0.5)));
}

TEST_CASE("graph JSON round-trip") {
  const auto set = random_set(40, 2, 77);
  const auto graph = KnnGraph::build(set, 4);
  const auto j = graph_to_json(graph);
  const auto back = graph_from_json(j);
  CHECK(back.size() == graph.size());
  CHECK(back.k() == graph.k());
  for (int i = 0; i < graph.size(); ++i) {
    const auto a = graph.neighbors(i);
    const auto b = back.neighbors(i);
    CHECK(std::vector<int>(a.begin(), a.end()) ==
          std::vector<int>(b.begin(), b.end()));
  }
  // a tampered adjacency (asymmetric) is rejected
  auto bad = j;
  bad["adjacency"][0] = std::vector<int>{graph.neighbors(0).begin(),
                                         graph.neighbors(0).end()};
  bad["adjacency"][0].erase(0);
  CHECK_THROWS(graph_from_json(bad));
}
