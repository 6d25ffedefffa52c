#pragma once

#include <cstddef>
#include <span>

#include "adaptive_gallery/core.hpp"

namespace adaptive_gallery {

/// Nearest-template match. Lower value means more similar.
struct MatchScore {
  double value = 0.0;
  std::size_t best_template_index = 0;
};

/// Euclidean: sqrt(sum (a_i - b_i)^2). Cosine: 1 - a.b / (|a||b|), clamped to [0, 2].
double distance(const FeatureVector& a, const FeatureVector& b, Metric metric);

/// Minimum distance from `probe` to any of `templates`; ties go to the lowest index.
MatchScore nearest(const FeatureVector& probe, std::span<const FeatureVector* const> templates,
                   Metric metric);

MatchScore score_claim(const Sample& sample, const Gallery& gallery, Metric metric);
MatchScore score_claim(const FeatureVector& probe, const Gallery& gallery, Metric metric);

}  // namespace adaptive_gallery
