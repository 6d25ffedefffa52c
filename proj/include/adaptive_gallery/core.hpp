#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace adaptive_gallery {

/// Opaque user token. Deterministic iteration uses lexicographic order.
using UserId = std::string;

enum class ErrorCode {
  DimensionMismatch,
  DuplicateSeq,
  InsufficientSamples,
  NonFiniteValue,
  ZeroNormVector,
  EmptyGallery,
  UnknownClaimedUser,
  InsufficientPopulation,
  EmptyImpostorSet,
  EmptyScoreSet,
  CohortEmpty,
  TooFewReports,
  MisalignedTraces,
  ParseError,
  UnknownKey,
  MissingStrategy,
  OutOfRange,
  IoError,
  InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Fixed-dimension embedding. Every coordinate is finite.
class FeatureVector {
 public:
  FeatureVector() = default;
  explicit FeatureVector(std::vector<double> values);
  FeatureVector(std::initializer_list<double> values);

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  bool operator==(const FeatureVector&) const = default;

 private:
  std::vector<double> values_;
};

struct Sample {
  FeatureVector vector;
  UserId true_id;
  UserId claimed_id;
  std::uint64_t seq = 0;

  bool is_genuine() const noexcept { return claimed_id == true_id; }
};

enum class Origin { Enrolled, PseudoLabeled };

struct Template {
  FeatureVector vector;
  UserId owner;
  Origin origin = Origin::Enrolled;
  int source_batch = 0;
  /// Ground truth. Read by metrics only; update strategies see TemplateView.
  UserId true_id;

  bool is_impostor() const noexcept { return true_id != owner; }
};

class Gallery {
 public:
  Gallery() = default;
  explicit Gallery(UserId owner);
  Gallery(UserId owner, std::vector<Template> templates);

  const UserId& owner() const noexcept { return owner_; }
  std::span<const Template> templates() const noexcept { return templates_; }
  std::size_t size() const noexcept { return templates_.size(); }
  bool empty() const noexcept { return templates_.empty(); }
  const Template& operator[](std::size_t i) const { return templates_[i]; }

  void add(Template t);

 private:
  void check(const Template& t) const;

  UserId owner_;
  std::vector<Template> templates_;
};

using GallerySet = std::map<UserId, Gallery>;

enum class Strategy { NoUpdate, SelfUpdate, KMeansSelect, RandomSelect, RiskMinSelect };
enum class Metric { Euclidean, Cosine };

inline constexpr Strategy kAllStrategies[] = {Strategy::NoUpdate, Strategy::SelfUpdate,
                                              Strategy::KMeansSelect, Strategy::RandomSelect,
                                              Strategy::RiskMinSelect};

/// Canonical config names: no_update, self_update, kmeans, random, riskmin.
std::string to_string(Strategy s);
std::string to_string(Metric m);
Strategy parse_strategy(const std::string& name);
Metric parse_metric(const std::string& name);

struct ExperimentConfig {
  std::size_t p = 5;
  std::size_t n_batches = 9;
  Strategy strategy = Strategy::NoUpdate;
  Metric metric = Metric::Euclidean;
  double target_far = 0.01;
  std::uint64_t seed = 42;
  double impostor_rate = 0.0;
  bool reestimate_threshold = false;
  std::size_t riskmin_k = 7;
  /// Gaussian kernel width; 0 selects the median pairwise distance.
  double riskmin_sigma = 0.0;
  bool random_pool_pseudo_only = false;

  /// Throws OutOfRange on the first violated constraint.
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

struct BatchReport {
  int batch_index = 0;
  double eer = 0.0;
  double far_at_threshold = 0.0;
  double frr_at_threshold = 0.0;
  double threshold = 0.0;
  double impostor_fraction = 0.0;
  std::map<UserId, std::size_t> gallery_sizes;

  std::size_t total_templates() const;
  bool operator==(const BatchReport&) const = default;
};

struct DatasetSummary {
  std::size_t users = 0;
  std::size_t dim = 0;
  std::map<UserId, std::size_t> per_user;
};

/// Checks uniform dimension, per-user seq uniqueness and that every user has
/// at least p + n_batches samples.
DatasetSummary validate_dataset(std::span<const Sample> samples, std::size_t p,
                                std::size_t n_batches);
DatasetSummary validate_dataset(std::span<const Sample> samples, const ExperimentConfig& cfg);

/// Fraction of templates (system-wide) whose true identity differs from the owner.
double impostor_fraction(const GallerySet& galleries);

}  // namespace adaptive_gallery
