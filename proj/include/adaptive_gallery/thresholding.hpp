#pragma once

#include <span>
#include <vector>

#include "adaptive_gallery/core.hpp"

namespace adaptive_gallery {

/// Distance scores split by ground truth. Accept rule everywhere: score < threshold.
struct ScoreSet {
  std::vector<double> genuine;
  std::vector<double> impostor;
};

struct OperatingPoint {
  double threshold = 0.0;
  double far = 0.0;
  double frr = 0.0;
};

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

/// Fraction of impostor scores strictly below t.
double far_at(std::span<const double> impostor, double t);
/// Fraction of genuine scores at or above t; 0 for an empty list.
double frr_at(std::span<const double> genuine, double t);

/// Scores each probe against its claimed gallery; genuine iff claimed_id == true_id.
ScoreSet build_scoreset(const GallerySet& galleries, std::span<const Sample> probes, Metric metric);

/// Score set derived from the galleries alone: each template against its own
/// gallery minus itself (genuine) and against every other user's gallery
/// (impostor). Galleries of size 1 contribute no genuine score.
ScoreSet gallery_scoreset(const GallerySet& galleries, Metric metric);

/// Test-time score set: genuine probes against their claimed gallery, and every
/// probe against every gallery other than its true owner's (impostor).
ScoreSet evaluation_scoreset(const GallerySet& galleries, std::span<const Sample> probes,
                             Metric metric);

/// Threshold placed between the k-th and (k+1)-th smallest impostor scores,
/// k = floor(target_far * |impostor|); half the smallest score when k = 0.
OperatingPoint threshold_at_far(const ScoreSet& scores, double target_far);

/// Sweeps the sorted union of scores and the midpoints between consecutive
/// distinct values; picks the candidate minimising |FAR - FRR| (lowest
/// threshold on ties) and reports (FAR + FRR) / 2.
EerResult eer(const ScoreSet& scores);

}  // namespace adaptive_gallery
