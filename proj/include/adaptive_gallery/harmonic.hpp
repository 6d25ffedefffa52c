#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "adaptive_gallery/core.hpp"

namespace adaptive_gallery {

/// Undirected weighted graph stored as adjacency lists (each edge appears in
/// both endpoint lists).
class WeightedGraph {
 public:
  explicit WeightedGraph(std::size_t n) : adjacency_(n) {}

  std::size_t size() const noexcept { return adjacency_.size(); }
  /// Adds or overwrites the edge {i, j}. Self loops are ignored.
  void set_edge(std::size_t i, std::size_t j, double weight);
  std::span<const std::pair<std::size_t, double>> neighbors(std::size_t i) const {
    return adjacency_[i];
  }

 private:
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency_;
};

enum class NodeLabel { Genuine, Impostor, Unlabeled };

struct HarmonicResult {
  std::vector<double> values;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Harmonic function on the graph: labeled nodes are clamped (Genuine = 1,
/// Impostor = 0), each unlabeled node converges to the weighted mean of its
/// neighbours. Gauss-Seidel sweeps until the largest update is below `tolerance`.
/// Unlabeled nodes start at 0; isolated ones stay there.
HarmonicResult solve_harmonic(const WeightedGraph& graph, std::span<const NodeLabel> labels,
                              double tolerance = 1e-8, std::size_t max_iterations = 10000);

/// Weighted mean of a node's neighbours under `values` (its own value excluded).
double neighbor_average(const WeightedGraph& graph, std::span<const double> values, std::size_t node);

/// Symmetrised k-nearest-neighbour graph with weights exp(-d^2 / sigma^2).
/// sigma <= 0 selects the median pairwise distance (1 if that median is 0).
WeightedGraph knn_graph(std::span<const FeatureVector* const> nodes, std::size_t k, double sigma,
                        Metric metric);

}  // namespace adaptive_gallery
