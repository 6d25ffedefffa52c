#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "adaptive_gallery/core.hpp"
#include "adaptive_gallery/rng.hpp"

namespace adaptive_gallery {

/// Samples grouped by user, each list in temporal order.
using Batch = std::map<UserId, std::vector<Sample>>;

struct PartitionedDataset {
  /// First p samples (by seq) of each user.
  Batch initial;
  /// n_batches adaptation sets of equal per-user size.
  std::vector<Batch> batches;
  /// Trailing samples per user that did not fill a whole batch.
  std::map<UserId, std::size_t> dropped;
};

struct ExperimentTrace {
  ExperimentConfig config;
  /// Report 0: initial galleries tested on batch 1. Report i: galleries
  /// updated with batch i, tested on batch i + 1.
  std::vector<BatchReport> reports;
  GallerySet final_galleries;
};

PartitionedDataset partition(std::span<const Sample> samples, const ExperimentConfig& cfg);

/// For each user u appends ceil(rate * |batch(u)|) samples drawn without
/// replacement from the other users' samples of the same batch, re-claimed as u.
Batch inject_impostors(const Batch& batch, double rate, Rng& rng);

GallerySet enroll(const Batch& initial);

/// Runs one strategy step for a single gallery and materialises the result.
Gallery update_gallery(const Gallery& gallery, std::span<const Sample> claims, double threshold,
                       const ExperimentConfig& cfg, int batch,
                       std::span<const FeatureVector* const> cohort);

/// Update step for every user. The riskmin cohort of each user is the
/// enrolled templates of every other user, taken from `enrolled` (the initial
/// galleries) so it survives pruning.
GallerySet update_all(const GallerySet& galleries, const Batch& claims, double threshold,
                      const ExperimentConfig& cfg, int batch, const GallerySet& enrolled);

BatchReport evaluate(const GallerySet& galleries, const Batch& test, double threshold, Metric metric,
                     int batch_index);

/// Full adaptive protocol. `horizon` limits the number of reports produced
/// (defaults to n_batches) without changing the partition.
ExperimentTrace run_experiment(std::span<const Sample> samples, const ExperimentConfig& cfg,
                               std::optional<std::size_t> horizon = std::nullopt);

}  // namespace adaptive_gallery
