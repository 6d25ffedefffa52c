#include "adaptive_gallery/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "adaptive_gallery/matching.hpp"

namespace adaptive_gallery {

void WeightedGraph::set_edge(std::size_t i, std::size_t j, double weight) {
  if (i == j) return;
  auto upsert = [weight](auto& list, std::size_t other) {
    auto it = std::find_if(list.begin(), list.end(), [other](const auto& e) { return e.first == other; });
    if (it == list.end()) {
      list.emplace_back(other, weight);
    } else {
      it->second = weight;
    }
  };
  upsert(adjacency_.at(i), j);
  upsert(adjacency_.at(j), i);
}

HarmonicResult solve_harmonic(const WeightedGraph& graph, std::span<const NodeLabel> labels,
                              double tolerance, std::size_t max_iterations) {
  if (labels.size() != graph.size()) {
    throw Error(ErrorCode::InvalidArgument, "label count does not match graph size");
  }
  HarmonicResult result;
  result.values.assign(graph.size(), 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == NodeLabel::Genuine) result.values[i] = 1.0;
  }
  while (result.iterations < max_iterations) {
    ++result.iterations;
    double largest_change = 0.0;
    for (std::size_t i = 0; i < graph.size(); ++i) {
      if (labels[i] != NodeLabel::Unlabeled || graph.neighbors(i).empty()) continue;
      const double updated = neighbor_average(graph, result.values, i);
      largest_change = std::max(largest_change, std::fabs(updated - result.values[i]));
      result.values[i] = updated;
    }
    if (largest_change < tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

double neighbor_average(const WeightedGraph& graph, std::span<const double> values, std::size_t node) {
  double weighted = 0.0;
  double total = 0.0;
  for (const auto& [j, w] : graph.neighbors(node)) {
    weighted += w * values[j];
    total += w;
  }
  return total > 0.0 ? weighted / total : values[node];
}

WeightedGraph knn_graph(std::span<const FeatureVector* const> nodes, std::size_t k, double sigma,
                        Metric metric) {
  const std::size_t n = nodes.size();
  std::vector<double> dist(n * n, 0.0);
  std::vector<double> pairwise;
  pairwise.reserve(n * (n - (n > 0 ? 1 : 0)) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(*nodes[i], *nodes[j], metric);
      dist[i * n + j] = dist[j * n + i] = d;
      pairwise.push_back(d);
    }
  }
  if (sigma <= 0.0) {
    sigma = 1.0;
    if (!pairwise.empty()) {
      auto mid = pairwise.begin() + static_cast<std::ptrdiff_t>(pairwise.size() / 2);
      std::nth_element(pairwise.begin(), mid, pairwise.end());
      if (*mid > 0.0) sigma = *mid;
    }
  }
  const double inv_sigma2 = 1.0 / (sigma * sigma);

  WeightedGraph graph(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    order.erase(order.begin() + static_cast<std::ptrdiff_t>(i));
    const std::size_t take = std::min(k, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        const double da = dist[i * n + a];
                        const double db = dist[i * n + b];
                        return da < db || (da == db && a < b);
                      });
    for (std::size_t r = 0; r < take; ++r) {
      const std::size_t j = order[r];
      const double d = dist[i * n + j];
      graph.set_edge(i, j, std::exp(-d * d * inv_sigma2));
    }
    order.resize(n);
  }
  return graph;
}

}  // namespace adaptive_gallery
