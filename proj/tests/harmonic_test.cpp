#include <doctest.h>

#include <cmath>

#include "adaptive_gallery/harmonic.hpp"

using namespace adaptive_gallery;

TEST_CASE("three-node path has value 1/2 at the unlabeled node") {
  WeightedGraph g(3);
  g.set_edge(0, 1, 1.0);
  g.set_edge(1, 2, 1.0);
  const NodeLabel labels[] = {NodeLabel::Genuine, NodeLabel::Unlabeled, NodeLabel::Impostor};
  const auto r = solve_harmonic(g, labels);
  CHECK(r.converged);
  CHECK(std::fabs(r.values[1] - 0.5) <= 1e-8);
  CHECK(r.values[0] == 1.0);
  CHECK(r.values[2] == 0.0);
}

TEST_CASE("harmonic values on a chain interpolate linearly") {
  // genuine - u1 - u2 - u3 - impostor with unit weights: u_i = 1 - i/4.
  WeightedGraph g(5);
  for (std::size_t i = 0; i + 1 < 5; ++i) g.set_edge(i, i + 1, 1.0);
  const NodeLabel labels[] = {NodeLabel::Genuine, NodeLabel::Unlabeled, NodeLabel::Unlabeled,
                              NodeLabel::Unlabeled, NodeLabel::Impostor};
  const auto r = solve_harmonic(g, labels);
  CHECK(r.converged);
  CHECK(r.values[1] == doctest::Approx(0.75).epsilon(1e-7));
  CHECK(r.values[2] == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(r.values[3] == doctest::Approx(0.25).epsilon(1e-7));
}

TEST_CASE("weights pull the value toward the heavier side") {
  // u = (3*1 + 1*0) / 4.
  WeightedGraph g(3);
  g.set_edge(0, 1, 3.0);
  g.set_edge(1, 2, 1.0);
  const NodeLabel labels[] = {NodeLabel::Genuine, NodeLabel::Unlabeled, NodeLabel::Impostor};
  CHECK(solve_harmonic(g, labels).values[1] == doctest::Approx(0.75));
}

TEST_CASE("iteration cap reports non-convergence") {
  WeightedGraph g(12);
  for (std::size_t i = 0; i + 1 < 12; ++i) g.set_edge(i, i + 1, 1.0);
  std::vector<NodeLabel> labels(12, NodeLabel::Unlabeled);
  labels.front() = NodeLabel::Genuine;
  labels.back() = NodeLabel::Impostor;
  const auto r = solve_harmonic(g, labels, 1e-12, 3);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 3);
}

TEST_CASE("isolated unlabeled nodes stay at zero") {
  WeightedGraph g(2);
  const NodeLabel labels[] = {NodeLabel::Genuine, NodeLabel::Unlabeled};
  const auto r = solve_harmonic(g, labels);
  CHECK(r.values[1] == 0.0);
}

TEST_CASE("knn graph is symmetric with gaussian weights") {
  std::vector<FeatureVector> pts{{0.0}, {1.0}, {2.0}, {10.0}};
  std::vector<const FeatureVector*> refs;
  for (const auto& p : pts) refs.push_back(&p);
  const auto g = knn_graph(refs, 1, 1.0, Metric::Euclidean);
  auto weight = [&](std::size_t i, std::size_t j) {
    for (const auto& [n, w] : g.neighbors(i)) {
      if (n == j) return w;
    }
    return -1.0;
  };
  CHECK(weight(0, 1) == doctest::Approx(std::exp(-1.0)));
  CHECK(weight(1, 0) == weight(0, 1));
  // 10 is nearest to 2, so the union adds {2,3} from node 3's side.
  CHECK(weight(3, 2) == doctest::Approx(std::exp(-64.0)));
  CHECK(weight(2, 3) == weight(3, 2));
  CHECK(weight(0, 3) < 0.0);
}
