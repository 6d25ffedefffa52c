#include "adaptive_gallery/core.hpp"

#include <cmath>
#include <set>

namespace adaptive_gallery {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DuplicateSeq: return "DuplicateSeq";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::ZeroNormVector: return "ZeroNormVector";
    case ErrorCode::EmptyGallery: return "EmptyGallery";
    case ErrorCode::UnknownClaimedUser: return "UnknownClaimedUser";
    case ErrorCode::InsufficientPopulation: return "InsufficientPopulation";
    case ErrorCode::EmptyImpostorSet: return "EmptyImpostorSet";
    case ErrorCode::EmptyScoreSet: return "EmptyScoreSet";
    case ErrorCode::CohortEmpty: return "CohortEmpty";
    case ErrorCode::TooFewReports: return "TooFewReports";
    case ErrorCode::MisalignedTraces: return "MisalignedTraces";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::MissingStrategy: return "MissingStrategy";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

FeatureVector::FeatureVector(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::NonFiniteValue, "coordinate " + std::to_string(i) + " is not finite");
    }
  }
}

FeatureVector::FeatureVector(std::initializer_list<double> values)
    : FeatureVector(std::vector<double>(values)) {}

Gallery::Gallery(UserId owner) : owner_(std::move(owner)) {}

Gallery::Gallery(UserId owner, std::vector<Template> templates) : owner_(std::move(owner)) {
  for (auto& t : templates) add(std::move(t));
}

void Gallery::check(const Template& t) const {
  if (t.owner != owner_) {
    throw Error(ErrorCode::InvalidArgument,
                "template owner '" + t.owner + "' does not match gallery '" + owner_ + "'");
  }
  if (t.origin == Origin::Enrolled && (t.source_batch != 0 || t.true_id != t.owner)) {
    throw Error(ErrorCode::InvalidArgument, "enrolled template must come from batch 0 of its owner");
  }
  if (!templates_.empty() && templates_.front().vector.dim() != t.vector.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "template dimension differs from gallery");
  }
}

void Gallery::add(Template t) {
  check(t);
  templates_.push_back(std::move(t));
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::NoUpdate: return "no_update";
    case Strategy::SelfUpdate: return "self_update";
    case Strategy::KMeansSelect: return "kmeans";
    case Strategy::RandomSelect: return "random";
    case Strategy::RiskMinSelect: return "riskmin";
  }
  return "unknown";
}

std::string to_string(Metric m) {
  return m == Metric::Euclidean ? "euclidean" : "cosine";
}

Strategy parse_strategy(const std::string& name) {
  for (auto s : kAllStrategies) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorCode::UnknownKey, "unknown strategy '" + name +
                                         "' (valid: no_update, self_update, kmeans, random, riskmin)");
}

Metric parse_metric(const std::string& name) {
  if (name == "euclidean") return Metric::Euclidean;
  if (name == "cosine") return Metric::Cosine;
  throw Error(ErrorCode::UnknownKey, "unknown metric '" + name + "' (valid: euclidean, cosine)");
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::OutOfRange, what); };
  if (p < 1) fail("p must be >= 1");
  if (n_batches < 1) fail("n_batches must be >= 1");
  if (!(target_far > 0.0 && target_far < 1.0)) fail("target_far must be in (0,1)");
  if (!(impostor_rate >= 0.0 && impostor_rate < 1.0)) fail("impostor_rate must be in [0,1)");
  if (riskmin_k < 1) fail("riskmin_k must be >= 1");
  if (!(riskmin_sigma >= 0.0) || !std::isfinite(riskmin_sigma)) fail("riskmin_sigma must be >= 0");
}

std::size_t BatchReport::total_templates() const {
  std::size_t total = 0;
  for (const auto& [user, n] : gallery_sizes) total += n;
  return total;
}

DatasetSummary validate_dataset(std::span<const Sample> samples, std::size_t p,
                                std::size_t n_batches) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "dataset is empty");
  DatasetSummary summary;
  summary.dim = samples.front().vector.dim();
  std::map<UserId, std::set<std::uint64_t>> seen;
  for (const auto& s : samples) {
    if (s.vector.dim() != summary.dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "user '" + s.true_id + "' seq " + std::to_string(s.seq) + " has dimension " +
                      std::to_string(s.vector.dim()) + ", expected " + std::to_string(summary.dim));
    }
    if (!seen[s.true_id].insert(s.seq).second) {
      throw Error(ErrorCode::DuplicateSeq,
                  "user '" + s.true_id + "' has duplicate seq " + std::to_string(s.seq));
    }
    ++summary.per_user[s.true_id];
  }
  summary.users = summary.per_user.size();
  for (const auto& [user, count] : summary.per_user) {
    if (count < p + n_batches) {
      throw Error(ErrorCode::InsufficientSamples,
                  "user '" + user + "' has " + std::to_string(count) + " samples, needs at least " +
                      std::to_string(p + n_batches));
    }
  }
  return summary;
}

DatasetSummary validate_dataset(std::span<const Sample> samples, const ExperimentConfig& cfg) {
  return validate_dataset(samples, cfg.p, cfg.n_batches);
}

double impostor_fraction(const GallerySet& galleries) {
  std::size_t total = 0;
  std::size_t impostors = 0;
  for (const auto& [user, g] : galleries) {
    for (const auto& t : g.templates()) {
      ++total;
      if (t.is_impostor()) ++impostors;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(impostors) / static_cast<double>(total);
}

}  // namespace adaptive_gallery
