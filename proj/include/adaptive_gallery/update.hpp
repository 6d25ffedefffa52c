#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "adaptive_gallery/core.hpp"

namespace adaptive_gallery {

// Strategy-facing views. They deliberately carry no ground-truth identity, so
// no update rule can depend on it.

struct TemplateView {
  const FeatureVector* vector = nullptr;
  UserId owner;
  Origin origin = Origin::Enrolled;
  int source_batch = 0;
};

struct ClaimView {
  const FeatureVector* vector = nullptr;
  UserId claimed_id;
  std::uint64_t seq = 0;
};

std::vector<TemplateView> template_views(const Gallery& gallery);
std::vector<ClaimView> claim_views(std::span<const Sample> claims);

struct Acceptance {
  std::size_t claim = 0;
  double score = 0.0;
};

/// One entry of the updated gallery: either an existing template or a claim
/// promoted to a pseudo-labeled template.
struct Kept {
  enum class Source { Template, Claim };
  Source source = Source::Template;
  std::size_t index = 0;

  bool operator==(const Kept&) const = default;
};

struct StrategyDecision {
  /// Claims passing the classification phase, in claim order.
  std::vector<Acceptance> accepted;
  /// New gallery, in order.
  std::vector<Kept> kept;
  /// Claims that did not make it into the new gallery.
  std::vector<std::size_t> discarded;
  /// riskmin only: harmonic value per claim (nullopt when not in the graph).
  std::vector<std::optional<double>> harmonic;
  /// False when the harmonic solver hit its iteration cap.
  bool converged = true;
};

struct UpdateInput {
  UserId owner;
  std::span<const TemplateView> gallery;
  std::span<const ClaimView> claims;
  double threshold = 0.0;
  const ExperimentConfig* config = nullptr;
  int batch = 0;
  /// Impostor reference vectors (other users' enrolled templates). riskmin only.
  std::span<const FeatureVector* const> cohort;
};

inline constexpr std::size_t kHarmonicMaxIterations = 10000;
inline constexpr double kHarmonicTolerance = 1e-8;

StrategyDecision no_update(const UpdateInput& in);
/// Appends every claim scoring below the threshold against the batch-start gallery.
StrategyDecision self_update(const UpdateInput& in);
/// Classification as self_update, then keeps the min(p, |pool|) pool members
/// closest to the pool centroid (ties by pool order: templates, then accepted claims).
StrategyDecision kmeans_select(const UpdateInput& in);
/// Classification as self_update, then a uniform draw without replacement
/// from a (user, batch) substream of the seed.
StrategyDecision random_select(const UpdateInput& in);
/// Graph-based selection: accepted claims are propagated on a k-NN graph with
/// gallery templates as genuine seeds and the cohort as impostor seeds; claims
/// with harmonic value > 0.5 join the pool, and the p highest-valued pool
/// members survive.
StrategyDecision riskmin_select(const UpdateInput& in);

StrategyDecision apply_strategy(Strategy strategy, const UpdateInput& in);

/// Builds the updated gallery from a decision. Claims become PseudoLabeled
/// templates of `batch`, carrying the claim's true identity for metrics.
Gallery materialize(const Gallery& before, std::span<const Sample> claims,
                    const StrategyDecision& decision, int batch);

}  // namespace adaptive_gallery
