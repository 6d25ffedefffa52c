#include "adaptive_gallery/thresholding.hpp"

#include <algorithm>
#include <cmath>

#include "adaptive_gallery/matching.hpp"

namespace adaptive_gallery {

double far_at(std::span<const double> impostor, double t) {
  if (impostor.empty()) return 0.0;
  const auto accepted = std::count_if(impostor.begin(), impostor.end(), [t](double s) { return s < t; });
  return static_cast<double>(accepted) / static_cast<double>(impostor.size());
}

double frr_at(std::span<const double> genuine, double t) {
  if (genuine.empty()) return 0.0;
  const auto rejected = std::count_if(genuine.begin(), genuine.end(), [t](double s) { return s >= t; });
  return static_cast<double>(rejected) / static_cast<double>(genuine.size());
}

ScoreSet build_scoreset(const GallerySet& galleries, std::span<const Sample> probes, Metric metric) {
  ScoreSet scores;
  for (const auto& probe : probes) {
    auto it = galleries.find(probe.claimed_id);
    if (it == galleries.end()) {
      throw Error(ErrorCode::UnknownClaimedUser, "no gallery for claimed user '" + probe.claimed_id + "'");
    }
    const double s = score_claim(probe, it->second, metric).value;
    (probe.is_genuine() ? scores.genuine : scores.impostor).push_back(s);
  }
  return scores;
}

ScoreSet gallery_scoreset(const GallerySet& galleries, Metric metric) {
  if (galleries.size() < 2) {
    throw Error(ErrorCode::InsufficientPopulation, "impostor scores need at least two galleries");
  }
  ScoreSet scores;
  for (const auto& [user, gallery] : galleries) {
    const auto templates = gallery.templates();
    for (std::size_t i = 0; i < templates.size(); ++i) {
      if (templates.size() > 1) {
        std::vector<const FeatureVector*> rest;
        for (std::size_t j = 0; j < templates.size(); ++j) {
          if (j != i) rest.push_back(&templates[j].vector);
        }
        scores.genuine.push_back(nearest(templates[i].vector, rest, metric).value);
      }
      for (const auto& [other, other_gallery] : galleries) {
        if (other == user) continue;
        scores.impostor.push_back(score_claim(templates[i].vector, other_gallery, metric).value);
      }
    }
  }
  return scores;
}

ScoreSet evaluation_scoreset(const GallerySet& galleries, std::span<const Sample> probes,
                             Metric metric) {
  ScoreSet scores;
  for (const auto& probe : probes) {
    if (probe.is_genuine()) {
      auto it = galleries.find(probe.claimed_id);
      if (it == galleries.end()) {
        throw Error(ErrorCode::UnknownClaimedUser, "no gallery for claimed user '" + probe.claimed_id + "'");
      }
      scores.genuine.push_back(score_claim(probe, it->second, metric).value);
    }
    for (const auto& [user, gallery] : galleries) {
      if (user == probe.true_id) continue;
      scores.impostor.push_back(score_claim(probe, gallery, metric).value);
    }
  }
  return scores;
}

OperatingPoint threshold_at_far(const ScoreSet& scores, double target_far) {
  if (scores.impostor.empty()) throw Error(ErrorCode::EmptyImpostorSet, "no impostor scores");
  if (!(target_far > 0.0 && target_far < 1.0)) {
    throw Error(ErrorCode::OutOfRange, "target_far must be in (0,1)");
  }
  std::vector<double> sorted = scores.impostor;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  // Largest k with k/n <= target_far, evaluated the same way FAR is reported.
  auto k = static_cast<std::size_t>(std::floor(target_far * n));
  if (static_cast<double>(k + 1) / n <= target_far) ++k;
  while (k > 0 && static_cast<double>(k) / n > target_far) --k;

  OperatingPoint op;
  op.threshold = k == 0 ? sorted.front() / 2.0 : (sorted[k - 1] + sorted[k]) / 2.0;
  op.far = far_at(sorted, op.threshold);
  op.frr = frr_at(scores.genuine, op.threshold);
  return op;
}

EerResult eer(const ScoreSet& scores) {
  if (scores.genuine.empty() || scores.impostor.empty()) {
    throw Error(ErrorCode::EmptyScoreSet, "eer needs genuine and impostor scores");
  }
  std::vector<double> gen = scores.genuine;
  std::vector<double> imp = scores.impostor;
  std::sort(gen.begin(), gen.end());
  std::sort(imp.begin(), imp.end());

  std::vector<double> values;
  values.reserve(gen.size() + imp.size());
  std::merge(gen.begin(), gen.end(), imp.begin(), imp.end(), std::back_inserter(values));
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::vector<double> candidates;
  candidates.reserve(2 * values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    candidates.push_back(values[i]);
    if (i + 1 < values.size()) candidates.push_back((values[i] + values[i + 1]) / 2.0);
  }

  const double n_gen = static_cast<double>(gen.size());
  const double n_imp = static_cast<double>(imp.size());
  std::size_t imp_below = 0;  // impostor scores < t
  std::size_t gen_below = 0;  // genuine scores < t
  EerResult best;
  double best_gap = 2.0;
  for (double t : candidates) {
    while (imp_below < imp.size() && imp[imp_below] < t) ++imp_below;
    while (gen_below < gen.size() && gen[gen_below] < t) ++gen_below;
    const double far = static_cast<double>(imp_below) / n_imp;
    const double frr = static_cast<double>(gen.size() - gen_below) / n_gen;
    const double gap = std::fabs(far - frr);
    if (gap < best_gap) {
      best_gap = gap;
      best = {(far + frr) / 2.0, t};
    }
  }
  return best;
}

}  // namespace adaptive_gallery
