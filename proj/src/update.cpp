#include "adaptive_gallery/update.hpp"

#include <algorithm>
#include <numeric>

#include "adaptive_gallery/harmonic.hpp"
#include "adaptive_gallery/matching.hpp"
#include "adaptive_gallery/rng.hpp"

namespace adaptive_gallery {

std::vector<TemplateView> template_views(const Gallery& gallery) {
  std::vector<TemplateView> views;
  views.reserve(gallery.size());
  for (const auto& t : gallery.templates()) {
    views.push_back({&t.vector, t.owner, t.origin, t.source_batch});
  }
  return views;
}

std::vector<ClaimView> claim_views(std::span<const Sample> claims) {
  std::vector<ClaimView> views;
  views.reserve(claims.size());
  for (const auto& s : claims) views.push_back({&s.vector, s.claimed_id, s.seq});
  return views;
}

namespace {

const ExperimentConfig& config_of(const UpdateInput& in) {
  if (in.config == nullptr) throw Error(ErrorCode::InvalidArgument, "update input without config");
  return *in.config;
}

std::vector<Kept> keep_all_templates(const UpdateInput& in) {
  std::vector<Kept> kept;
  for (std::size_t i = 0; i < in.gallery.size(); ++i) kept.push_back({Kept::Source::Template, i});
  return kept;
}

/// Threshold rule against the batch-start gallery.
std::vector<Acceptance> classify(const UpdateInput& in) {
  const auto& cfg = config_of(in);
  std::vector<Acceptance> accepted;
  if (in.gallery.empty()) return accepted;
  std::vector<const FeatureVector*> refs;
  for (const auto& t : in.gallery) refs.push_back(t.vector);
  for (std::size_t c = 0; c < in.claims.size(); ++c) {
    const double s = nearest(*in.claims[c].vector, refs, cfg.metric).value;
    if (s < in.threshold) accepted.push_back({c, s});
  }
  return accepted;
}

std::vector<Kept> pool_of(const UpdateInput& in, std::span<const Acceptance> accepted) {
  auto pool = keep_all_templates(in);
  for (const auto& a : accepted) pool.push_back({Kept::Source::Claim, a.claim});
  return pool;
}

const FeatureVector& vector_of(const UpdateInput& in, const Kept& k) {
  return k.source == Kept::Source::Template ? *in.gallery[k.index].vector : *in.claims[k.index].vector;
}

void fill_discarded(const UpdateInput& in, StrategyDecision& d) {
  std::vector<bool> in_gallery(in.claims.size(), false);
  for (const auto& k : d.kept) {
    if (k.source == Kept::Source::Claim) in_gallery[k.index] = true;
  }
  for (std::size_t c = 0; c < in.claims.size(); ++c) {
    if (!in_gallery[c]) d.discarded.push_back(c);
  }
}

/// Keeps the `count` best pool positions under `before` (strict weak order on
/// positions) and returns them in pool order.
template <typename Less>
std::vector<Kept> keep_best(const std::vector<Kept>& pool, std::size_t count, Less before) {
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), before);
  order.resize(std::min(count, order.size()));
  std::sort(order.begin(), order.end());
  std::vector<Kept> kept;
  kept.reserve(order.size());
  for (auto i : order) kept.push_back(pool[i]);
  return kept;
}

}  // namespace

StrategyDecision no_update(const UpdateInput& in) {
  StrategyDecision d;
  d.kept = keep_all_templates(in);
  fill_discarded(in, d);
  return d;
}

StrategyDecision self_update(const UpdateInput& in) {
  StrategyDecision d;
  d.accepted = classify(in);
  d.kept = pool_of(in, d.accepted);
  fill_discarded(in, d);
  return d;
}

StrategyDecision kmeans_select(const UpdateInput& in) {
  const auto& cfg = config_of(in);
  StrategyDecision d;
  d.accepted = classify(in);
  const auto pool = pool_of(in, d.accepted);
  if (pool.size() <= cfg.p) {
    d.kept = pool;
  } else {
    // k = 1: the centroid is the arithmetic mean of the pool.
    const std::size_t dim = vector_of(in, pool.front()).dim();
    std::vector<double> mean(dim, 0.0);
    for (const auto& k : pool) {
      const auto v = vector_of(in, k).values();
      for (std::size_t j = 0; j < dim; ++j) mean[j] += v[j];
    }
    for (auto& m : mean) m /= static_cast<double>(pool.size());
    const FeatureVector centroid(std::move(mean));

    std::vector<double> dist(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
      dist[i] = distance(vector_of(in, pool[i]), centroid, cfg.metric);
    }
    d.kept = keep_best(pool, cfg.p, [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  }
  fill_discarded(in, d);
  return d;
}

StrategyDecision random_select(const UpdateInput& in) {
  const auto& cfg = config_of(in);
  StrategyDecision d;
  d.accepted = classify(in);
  Rng rng(substream(cfg.seed, "random_select", in.owner, static_cast<std::uint64_t>(in.batch)));

  // Partial Fisher-Yates: the first `count` entries become a uniform draw.
  auto draw = [&rng](std::vector<Kept> items, std::size_t count) {
    count = std::min(count, items.size());
    for (std::size_t i = 0; i < count; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(items.size() - i));
      std::swap(items[i], items[j]);
    }
    items.resize(count);
    return items;
  };

  std::vector<Kept> chosen;
  if (!cfg.random_pool_pseudo_only) {
    const auto pool = pool_of(in, d.accepted);
    chosen = pool.size() <= cfg.p ? pool : draw(pool, cfg.p);
  } else if (d.accepted.empty()) {
    chosen = keep_all_templates(in);
  } else {
    std::vector<Kept> pseudo;
    for (const auto& a : d.accepted) pseudo.push_back({Kept::Source::Claim, a.claim});
    chosen = draw(pseudo, cfg.p);
    const auto leftover = cfg.p - chosen.size();
    for (const auto& k : draw(keep_all_templates(in), leftover)) chosen.push_back(k);
  }

  // Pool order: templates first, then claims, each by index.
  std::sort(chosen.begin(), chosen.end(), [](const Kept& a, const Kept& b) {
    if (a.source != b.source) return a.source == Kept::Source::Template;
    return a.index < b.index;
  });
  d.kept = std::move(chosen);
  fill_discarded(in, d);
  return d;
}

StrategyDecision riskmin_select(const UpdateInput& in) {
  const auto& cfg = config_of(in);
  if (in.cohort.empty()) throw Error(ErrorCode::CohortEmpty, "riskmin needs impostor cohort vectors");
  StrategyDecision d;
  d.harmonic.assign(in.claims.size(), std::nullopt);
  const auto candidates = classify(in);
  if (candidates.empty()) {
    d.kept = keep_all_templates(in);
    fill_discarded(in, d);
    return d;
  }

  // Node layout: [gallery templates | cohort | candidate claims].
  std::vector<const FeatureVector*> nodes;
  std::vector<NodeLabel> labels;
  for (const auto& t : in.gallery) {
    nodes.push_back(t.vector);
    labels.push_back(NodeLabel::Genuine);
  }
  for (const auto* v : in.cohort) {
    nodes.push_back(v);
    labels.push_back(NodeLabel::Impostor);
  }
  const std::size_t first_claim = nodes.size();
  for (const auto& a : candidates) {
    nodes.push_back(in.claims[a.claim].vector);
    labels.push_back(NodeLabel::Unlabeled);
  }

  const auto graph = knn_graph(nodes, cfg.riskmin_k, cfg.riskmin_sigma, cfg.metric);
  const auto solution = solve_harmonic(graph, labels, kHarmonicTolerance, kHarmonicMaxIterations);
  d.converged = solution.converged;

  // Existing templates are clamped to 1, so they are ranked by how strongly
  // their neighbourhood agrees at the fixed point.
  std::vector<Kept> pool;
  std::vector<double> value;
  for (std::size_t i = 0; i < in.gallery.size(); ++i) {
    pool.push_back({Kept::Source::Template, i});
    value.push_back(neighbor_average(graph, solution.values, i));
  }
  for (std::size_t r = 0; r < candidates.size(); ++r) {
    const double v = solution.values[first_claim + r];
    d.harmonic[candidates[r].claim] = v;
    if (v > 0.5) {
      d.accepted.push_back(candidates[r]);
      pool.push_back({Kept::Source::Claim, candidates[r].claim});
      value.push_back(v);
    }
  }
  d.kept = keep_best(pool, cfg.p, [&](std::size_t a, std::size_t b) { return value[a] > value[b]; });
  fill_discarded(in, d);
  return d;
}

StrategyDecision apply_strategy(Strategy strategy, const UpdateInput& in) {
  switch (strategy) {
    case Strategy::NoUpdate: return no_update(in);
    case Strategy::SelfUpdate: return self_update(in);
    case Strategy::KMeansSelect: return kmeans_select(in);
    case Strategy::RandomSelect: return random_select(in);
    case Strategy::RiskMinSelect: return riskmin_select(in);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown strategy");
}

Gallery materialize(const Gallery& before, std::span<const Sample> claims,
                    const StrategyDecision& decision, int batch) {
  Gallery after(before.owner());
  for (const auto& k : decision.kept) {
    if (k.source == Kept::Source::Template) {
      after.add(before[k.index]);
    } else {
      const auto& s = claims[k.index];
      after.add(Template{s.vector, before.owner(), Origin::PseudoLabeled, batch, s.true_id});
    }
  }
  return after;
}

}  // namespace adaptive_gallery
