#include "adaptive_gallery/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace adaptive_gallery {

namespace {

void require_same_dim(const FeatureVector& a, const FeatureVector& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "dimensions " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
}

}  // namespace

double distance(const FeatureVector& a, const FeatureVector& b, Metric metric) {
  require_same_dim(a, b);
  const auto x = a.values();
  const auto y = b.values();
  if (metric == Metric::Euclidean) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double diff = x[i] - y[i];
      sum += diff * diff;
    }
    return std::sqrt(sum);
  }
  double dot = 0.0, nx = 0.0, ny = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    dot += x[i] * y[i];
    nx += x[i] * x[i];
    ny += y[i] * y[i];
  }
  if (nx == 0.0 || ny == 0.0) throw Error(ErrorCode::ZeroNormVector, "cosine distance of zero vector");
  return std::clamp(1.0 - dot / (std::sqrt(nx) * std::sqrt(ny)), 0.0, 2.0);
}

MatchScore nearest(const FeatureVector& probe, std::span<const FeatureVector* const> templates,
                   Metric metric) {
  if (templates.empty()) throw Error(ErrorCode::EmptyGallery, "no templates to match against");
  MatchScore best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < templates.size(); ++i) {
    const double d = distance(probe, *templates[i], metric);
    if (d < best.value) best = {d, i};
  }
  return best;
}

MatchScore score_claim(const FeatureVector& probe, const Gallery& gallery, Metric metric) {
  if (gallery.empty()) {
    throw Error(ErrorCode::EmptyGallery, "gallery '" + gallery.owner() + "' is empty");
  }
  std::vector<const FeatureVector*> refs;
  refs.reserve(gallery.size());
  for (const auto& t : gallery.templates()) refs.push_back(&t.vector);
  return nearest(probe, refs, metric);
}

MatchScore score_claim(const Sample& sample, const Gallery& gallery, Metric metric) {
  return score_claim(sample.vector, gallery, metric);
}

}  // namespace adaptive_gallery
