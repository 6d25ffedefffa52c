#include <doctest.h>

#include <sstream>

#include "adaptive_gallery/metrics.hpp"
#include "adaptive_gallery/rng.hpp"
#include "oracles.hpp"

using namespace adaptive_gallery;

namespace {

ExperimentTrace trace_with(std::vector<double> eers, Strategy s = Strategy::NoUpdate) {
  ExperimentTrace t;
  t.config.strategy = s;
  t.config.n_batches = eers.size();
  for (std::size_t i = 0; i < eers.size(); ++i) {
    BatchReport r;
    r.batch_index = static_cast<int>(i);
    r.eer = eers[i];
    r.far_at_threshold = 0.01 * static_cast<double>(i);
    r.frr_at_threshold = 0.5 / static_cast<double>(i + 1);
    r.threshold = 1.0 / 3.0;
    r.impostor_fraction = 0.1 * static_cast<double>(i);
    r.gallery_sizes = {{"a", 5}, {"b", 5 + i}};
    t.reports.push_back(r);
  }
  return t;
}

}  // namespace

TEST_CASE("summarize examples") {
  auto s = summarize(trace_with({0.10, 0.20, 0.20}));
  CHECK(s.initial_eer == 0.10);
  CHECK(s.mean_eer == doctest::Approx(0.20));
  CHECK(s.std_eer == doctest::Approx(0.0));
  CHECK(s.std_defined);

  s = summarize(trace_with({0.0353, 0.02, 0.03}));
  CHECK(s.initial_eer == 0.0353);
  CHECK(s.mean_eer == doctest::Approx(0.025));
  CHECK(s.std_eer == doctest::Approx(0.00707107).epsilon(1e-5));

  s = summarize(trace_with({0.3, 0.1}));
  CHECK(s.mean_eer == 0.1);
  CHECK(s.std_eer == 0.0);
  CHECK_FALSE(s.std_defined);

  try {
    summarize(trace_with({0.3}));
    FAIL("expected TooFewReports");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewReports);
  }
}

TEST_CASE("sample standard deviation matches a two-pass oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> eers(3 + rng.below(10));
    for (auto& e : eers) e = rng.uniform() * 0.3;
    const auto s = summarize(trace_with(eers));
    const std::vector<double> tail(eers.begin() + 1, eers.end());
    CHECK(std::fabs(s.std_eer - oracle::sample_std(tail)) <= 1e-12);
  }
}

TEST_CASE("compare aligns traces in input order") {
  const auto a = trace_with({0.1, 0.2, 0.3}, Strategy::NoUpdate);
  const auto b = trace_with({0.1, 0.15, 0.12}, Strategy::SelfUpdate);
  const auto c = trace_with({0.1, 0.05, 0.04}, Strategy::KMeansSelect);

  const auto one = compare(std::span(&a, 1));
  CHECK(one.labels == std::vector<std::string>{"no_update"});
  CHECK(one.columns.front() == a.reports);

  const std::vector<ExperimentTrace> all{a, b, c};
  const auto table = compare(all);
  CHECK(table.labels == std::vector<std::string>{"no_update", "self_update", "kmeans"});
  CHECK(table.rows() == 3);
  CHECK(table.columns[2][1].eer == 0.05);

  const auto relabelled = compare(all, std::vector<std::string>{"x", "y", "z"});
  CHECK(relabelled.labels == std::vector<std::string>{"x", "y", "z"});

  const std::vector<ExperimentTrace> bad{a, trace_with({0.1, 0.2})};
  try {
    compare(bad);
    FAIL("expected MisalignedTraces");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MisalignedTraces);
  }
}

TEST_CASE("results CSV layout") {
  std::ostringstream out;
  write_reports_csv(out, trace_with({0.123456789, 0.2}));
  CHECK(out.str() ==
        "batch,strategy,eer,far,frr,threshold,impostor_fraction,total_templates\n"
        "0,no_update,0.123457,0,0.5,0.333333,0,10\n"
        "1,no_update,0.2,0.01,0.25,0.333333,0.1,11\n");
}

TEST_CASE("comparison CSV round-trips through the parser") {
  Rng rng(2);
  std::vector<ExperimentTrace> traces;
  for (auto s : {Strategy::NoUpdate, Strategy::SelfUpdate, Strategy::KMeansSelect}) {
    std::vector<double> eers(9);
    for (auto& e : eers) e = rng.uniform() * 0.2;
    traces.push_back(trace_with(eers, s));
  }
  std::ostringstream first;
  write_comparison_csv(first, compare(traces));
  std::istringstream in(first.str());
  const auto rows = parse_results_csv(in);
  CHECK(rows.size() == 27);
  std::ostringstream second;
  write_results_csv(second, rows);
  CHECK(second.str() == first.str());
  // Values survive to the printed precision.
  const auto direct = result_rows(compare(traces));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].strategy == direct[i].strategy);
    CHECK(rows[i].eer == doctest::Approx(direct[i].eer).epsilon(1e-5));
    CHECK(rows[i].total_templates == direct[i].total_templates);
  }
}

TEST_CASE("parse_results_csv rejects malformed rows") {
  std::istringstream no_header("0,no_update,0,0,0,0,0,10\n");
  CHECK_THROWS_AS(parse_results_csv(no_header), Error);
  std::istringstream short_row(std::string(kResultsHeader) + "\n0,no_update,0\n");
  CHECK_THROWS_AS(parse_results_csv(short_row), Error);
}

TEST_CASE("summary CSV records the std convention") {
  std::ostringstream out;
  const std::vector<StrategySummary> s{summarize(trace_with({0.1, 0.2, 0.2})), summarize(trace_with({0.3, 0.1}))};
  write_summary_csv(out, s);
  CHECK(out.str() ==
        "strategy,initial_eer,mean_eer,std_eer_sample,mean_impostor_fraction,std_defined\n"
        "no_update,0.1,0.2,0,0.15,1\n"
        "no_update,0.3,0.1,0,0.1,0\n");
}
