#include "adaptive_gallery/metrics.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace adaptive_gallery {

StrategySummary summarize(const ExperimentTrace& trace) {
  return summarize(trace, to_string(trace.config.strategy));
}

StrategySummary summarize(const ExperimentTrace& trace, std::string label) {
  const auto& reports = trace.reports;
  if (reports.size() < 2) {
    throw Error(ErrorCode::TooFewReports, "summary needs the initial report and at least one more");
  }
  StrategySummary s;
  s.label = std::move(label);
  s.initial_eer = reports.front().eer;
  const auto n = static_cast<double>(reports.size() - 1);
  double eer_sum = 0.0, contamination_sum = 0.0;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    eer_sum += reports[i].eer;
    contamination_sum += reports[i].impostor_fraction;
  }
  s.mean_eer = eer_sum / n;
  s.mean_impostor_fraction = contamination_sum / n;
  if (reports.size() == 2) {
    s.std_eer = 0.0;
    s.std_defined = false;
  } else {
    double sq = 0.0;
    for (std::size_t i = 1; i < reports.size(); ++i) {
      const double d = reports[i].eer - s.mean_eer;
      sq += d * d;
    }
    s.std_eer = std::sqrt(sq / (n - 1.0));
  }
  return s;
}

ComparisonTable compare(std::span<const ExperimentTrace> traces,
                        std::optional<std::vector<std::string>> labels) {
  ComparisonTable table;
  if (traces.empty()) return table;
  if (labels && labels->size() != traces.size()) {
    throw Error(ErrorCode::InvalidArgument, "label count does not match trace count");
  }
  const auto& first = traces.front();
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& t = traces[i];
    if (t.config.n_batches != first.config.n_batches || t.reports.size() != first.reports.size()) {
      throw Error(ErrorCode::MisalignedTraces, "trace " + std::to_string(i) + " has " +
                                                   std::to_string(t.config.n_batches) +
                                                   " batches, expected " +
                                                   std::to_string(first.config.n_batches));
    }
    table.labels.push_back(labels ? (*labels)[i] : to_string(t.config.strategy));
    table.columns.push_back(t.reports);
  }
  return table;
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::vector<ResultRow> result_rows(const ComparisonTable& table) {
  std::vector<ResultRow> rows;
  for (std::size_t b = 0; b < table.rows(); ++b) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      const auto& r = table.columns[c][b];
      rows.push_back({r.batch_index, table.labels[c], r.eer, r.far_at_threshold, r.frr_at_threshold,
                      r.threshold, r.impostor_fraction, r.total_templates()});
    }
  }
  return rows;
}

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << r.batch << ',' << r.strategy << ',' << format_real(r.eer) << ',' << format_real(r.far) << ','
        << format_real(r.frr) << ',' << format_real(r.threshold) << ','
        << format_real(r.impostor_fraction) << ',' << r.total_templates << '\n';
  }
}

void write_reports_csv(std::ostream& out, const ExperimentTrace& trace) {
  write_comparison_csv(out, compare(std::span(&trace, 1)));
}

void write_comparison_csv(std::ostream& out, const ComparisonTable& table) {
  const auto rows = result_rows(table);
  write_results_csv(out, rows);
}

namespace {

template <typename T>
T parse_number(const std::string& field, std::size_t line) {
  T value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return value;
}

}  // namespace

std::vector<ResultRow> parse_results_csv(std::istream& in) {
  std::vector<ResultRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kResultsHeader) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": unexpected header");
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 8) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 8 columns");
    }
    ResultRow r;
    r.batch = parse_number<int>(fields[0], line_no);
    r.strategy = fields[1];
    r.eer = parse_number<double>(fields[2], line_no);
    r.far = parse_number<double>(fields[3], line_no);
    r.frr = parse_number<double>(fields[4], line_no);
    r.threshold = parse_number<double>(fields[5], line_no);
    r.impostor_fraction = parse_number<double>(fields[6], line_no);
    r.total_templates = parse_number<std::size_t>(fields[7], line_no);
    rows.push_back(std::move(r));
  }
  if (!header_seen) throw Error(ErrorCode::ParseError, "missing header");
  return rows;
}

void write_summary_csv(std::ostream& out, std::span<const StrategySummary> summaries) {
  out << kSummaryHeader << '\n';
  for (const auto& s : summaries) {
    out << s.label << ',' << format_real(s.initial_eer) << ',' << format_real(s.mean_eer) << ','
        << format_real(s.std_eer) << ',' << format_real(s.mean_impostor_fraction) << ','
        << (s.std_defined ? 1 : 0) << '\n';
  }
}

}  // namespace adaptive_gallery
