#include "adaptive_gallery/protocol.hpp"

#include <algorithm>
#include <cmath>

#include "adaptive_gallery/thresholding.hpp"
#include "adaptive_gallery/update.hpp"

namespace adaptive_gallery {

PartitionedDataset partition(std::span<const Sample> samples, const ExperimentConfig& cfg) {
  cfg.validate();
  validate_dataset(samples, cfg);

  Batch by_user;
  for (const auto& s : samples) by_user[s.true_id].push_back(s);

  PartitionedDataset out;
  out.batches.resize(cfg.n_batches);
  for (auto& [user, list] : by_user) {
    std::sort(list.begin(), list.end(), [](const Sample& a, const Sample& b) { return a.seq < b.seq; });
    const std::size_t per_batch = (list.size() - cfg.p) / cfg.n_batches;
    auto it = list.begin();
    out.initial[user].assign(it, it + static_cast<std::ptrdiff_t>(cfg.p));
    it += static_cast<std::ptrdiff_t>(cfg.p);
    for (std::size_t b = 0; b < cfg.n_batches; ++b) {
      out.batches[b][user].assign(it, it + static_cast<std::ptrdiff_t>(per_batch));
      it += static_cast<std::ptrdiff_t>(per_batch);
    }
    out.dropped[user] = static_cast<std::size_t>(list.end() - it);
  }
  return out;
}

Batch inject_impostors(const Batch& batch, double rate, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) throw Error(ErrorCode::OutOfRange, "impostor rate must be in [0,1)");
  if (batch.size() < 2) {
    throw Error(ErrorCode::InsufficientPopulation, "impostor injection needs at least two users");
  }
  Batch out = batch;
  if (rate == 0.0) return out;
  for (const auto& [user, own] : batch) {
    // Guard against products like 0.29 * 100 = 28.999999999999996.
    const auto wanted = static_cast<std::size_t>(std::ceil(rate * static_cast<double>(own.size()) - 1e-9));
    std::vector<const Sample*> donors;
    for (const auto& [other, samples] : batch) {
      if (other == user) continue;
      for (const auto& s : samples) donors.push_back(&s);
    }
    const std::size_t count = std::min(wanted, donors.size());
    for (std::size_t i = 0; i < count; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(donors.size() - i));
      std::swap(donors[i], donors[j]);
      Sample claim = *donors[i];
      claim.claimed_id = user;
      out[user].push_back(std::move(claim));
    }
  }
  return out;
}

GallerySet enroll(const Batch& initial) {
  GallerySet galleries;
  for (const auto& [user, samples] : initial) {
    Gallery g(user);
    for (const auto& s : samples) g.add(Template{s.vector, user, Origin::Enrolled, 0, s.true_id});
    galleries.emplace(user, std::move(g));
  }
  return galleries;
}

Gallery update_gallery(const Gallery& gallery, std::span<const Sample> claims, double threshold,
                       const ExperimentConfig& cfg, int batch,
                       std::span<const FeatureVector* const> cohort) {
  const auto templates = template_views(gallery);
  const auto claim_list = claim_views(claims);
  UpdateInput in{gallery.owner(), templates, claim_list, threshold, &cfg, batch, cohort};
  const auto decision = apply_strategy(cfg.strategy, in);
  return materialize(gallery, claims, decision, batch);
}

GallerySet update_all(const GallerySet& galleries, const Batch& claims, double threshold,
                      const ExperimentConfig& cfg, int batch, const GallerySet& enrolled) {
  GallerySet updated;
  for (const auto& [user, gallery] : galleries) {
    std::vector<const FeatureVector*> cohort;
    if (cfg.strategy == Strategy::RiskMinSelect) {
      for (const auto& [other, other_gallery] : enrolled) {
        if (other == user) continue;
        for (const auto& t : other_gallery.templates()) {
          if (t.origin == Origin::Enrolled) cohort.push_back(&t.vector);
        }
      }
    }
    static const std::vector<Sample> kNoClaims;
    auto it = claims.find(user);
    const auto& user_claims = it == claims.end() ? kNoClaims : it->second;
    updated.emplace(user, update_gallery(gallery, user_claims, threshold, cfg, batch, cohort));
  }
  return updated;
}

BatchReport evaluate(const GallerySet& galleries, const Batch& test, double threshold, Metric metric,
                     int batch_index) {
  std::vector<Sample> probes;
  for (const auto& [user, samples] : test) {
    for (const auto& s : samples) {
      if (s.is_genuine()) probes.push_back(s);
    }
  }
  const auto scores = evaluation_scoreset(galleries, probes, metric);
  BatchReport report;
  report.batch_index = batch_index;
  report.eer = eer(scores).eer;
  report.threshold = threshold;
  report.far_at_threshold = far_at(scores.impostor, threshold);
  report.frr_at_threshold = frr_at(scores.genuine, threshold);
  report.impostor_fraction = impostor_fraction(galleries);
  for (const auto& [user, g] : galleries) report.gallery_sizes[user] = g.size();
  return report;
}

ExperimentTrace run_experiment(std::span<const Sample> samples, const ExperimentConfig& cfg,
                               std::optional<std::size_t> horizon) {
  const auto data = partition(samples, cfg);
  const std::size_t n_reports = std::min(horizon.value_or(cfg.n_batches), cfg.n_batches);

  ExperimentTrace trace;
  trace.config = cfg;
  const GallerySet enrolled = enroll(data.initial);
  GallerySet galleries = enrolled;
  double threshold = threshold_at_far(gallery_scoreset(galleries, cfg.metric), cfg.target_far).threshold;

  if (n_reports >= 1) trace.reports.push_back(evaluate(galleries, data.batches[0], threshold, cfg.metric, 0));
  for (std::size_t i = 1; i < n_reports; ++i) {
    const int batch = static_cast<int>(i);
    Rng rng(substream(cfg.seed, "inject_impostors", i));
    const auto claims = inject_impostors(data.batches[i - 1], cfg.impostor_rate, rng);
    galleries = update_all(galleries, claims, threshold, cfg, batch, enrolled);
    if (cfg.reestimate_threshold) {
      threshold = threshold_at_far(gallery_scoreset(galleries, cfg.metric), cfg.target_far).threshold;
    }
    trace.reports.push_back(evaluate(galleries, data.batches[i], threshold, cfg.metric, batch));
  }
  trace.final_galleries = std::move(galleries);
  return trace;
}

}  // namespace adaptive_gallery
