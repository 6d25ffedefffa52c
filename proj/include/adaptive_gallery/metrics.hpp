#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adaptive_gallery/core.hpp"
#include "adaptive_gallery/protocol.hpp"

namespace adaptive_gallery {

/// Initial EER plus mean and sample (n-1) standard deviation of the EER over
/// the post-update reports.
struct StrategySummary {
  std::string label;
  double initial_eer = 0.0;
  double mean_eer = 0.0;
  double std_eer = 0.0;
  double mean_impostor_fraction = 0.0;
  /// False when only one post-update report exists; std_eer is then 0.
  bool std_defined = true;
};

StrategySummary summarize(const ExperimentTrace& trace);
StrategySummary summarize(const ExperimentTrace& trace, std::string label);

struct ComparisonTable {
  std::vector<std::string> labels;
  /// columns[c][b] is report b of trace c.
  std::vector<std::vector<BatchReport>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

/// Aligns traces batch by batch; labels default to the strategy names.
ComparisonTable compare(std::span<const ExperimentTrace> traces,
                        std::optional<std::vector<std::string>> labels = std::nullopt);

/// One row of the results CSV.
struct ResultRow {
  int batch = 0;
  std::string strategy;
  double eer = 0.0;
  double far = 0.0;
  double frr = 0.0;
  double threshold = 0.0;
  double impostor_fraction = 0.0;
  std::size_t total_templates = 0;

  bool operator==(const ResultRow&) const = default;
};

inline constexpr const char* kResultsHeader =
    "batch,strategy,eer,far,frr,threshold,impostor_fraction,total_templates";
inline constexpr const char* kSummaryHeader =
    "strategy,initial_eer,mean_eer,std_eer_sample,mean_impostor_fraction,std_defined";

/// Six significant digits, locale independent.
std::string format_real(double value);

std::vector<ResultRow> result_rows(const ComparisonTable& table);
void write_results_csv(std::ostream& out, std::span<const ResultRow> rows);
void write_reports_csv(std::ostream& out, const ExperimentTrace& trace);
void write_comparison_csv(std::ostream& out, const ComparisonTable& table);
std::vector<ResultRow> parse_results_csv(std::istream& in);

void write_summary_csv(std::ostream& out, std::span<const StrategySummary> summaries);

}  // namespace adaptive_gallery
