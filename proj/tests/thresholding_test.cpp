#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "adaptive_gallery/rng.hpp"
#include "adaptive_gallery/thresholding.hpp"
#include "oracles.hpp"

using namespace adaptive_gallery;

namespace {

Gallery gallery_of(const UserId& owner, std::vector<FeatureVector> vectors) {
  Gallery g(owner);
  for (auto& v : vectors) g.add({std::move(v), owner, Origin::Enrolled, 0, owner});
  return g;
}

std::vector<double> random_scores(Rng& rng, std::size_t n, bool coarse) {
  std::vector<double> out(n);
  for (auto& s : out) s = coarse ? static_cast<double>(rng.below(12)) : rng.uniform() * 10.0;
  return out;
}

}  // namespace

TEST_CASE("gallery_scoreset enumerates held-out and cross-gallery scores") {
  GallerySet set;
  set.emplace("a", gallery_of("a", {{0.0, 0.0}, {1.0, 0.0}}));
  set.emplace("b", gallery_of("b", {{10.0, 0.0}, {12.0, 0.0}}));
  const auto scores = gallery_scoreset(set, Metric::Euclidean);
  // Two templates per user, each scored against the single other gallery.
  CHECK(scores.impostor.size() == 4);
  CHECK(scores.genuine == std::vector<double>{1.0, 1.0, 2.0, 2.0});
  auto imp = scores.impostor;
  std::sort(imp.begin(), imp.end());
  CHECK(imp == std::vector<double>{9.0, 9.0, 10.0, 11.0});
}

TEST_CASE("gallery_scoreset needs two users") {
  GallerySet set;
  set.emplace("a", gallery_of("a", {{0.0}, {1.0}}));
  try {
    gallery_scoreset(set, Metric::Euclidean);
    FAIL("expected InsufficientPopulation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientPopulation);
  }
}

TEST_CASE("build_scoreset routes by claim") {
  GallerySet set;
  set.emplace("a", gallery_of("a", {{0.0}}));
  set.emplace("b", gallery_of("b", {{10.0}}));
  std::vector<Sample> probes{{FeatureVector{1.0}, "a", "a", 0},
                             {FeatureVector{9.0}, "b", "b", 0},
                             {FeatureVector{3.0}, "a", "b", 1}};
  const auto scores = build_scoreset(set, probes, Metric::Euclidean);
  CHECK(scores.genuine == std::vector<double>{1.0, 1.0});
  CHECK(scores.impostor == std::vector<double>{7.0});

  std::vector<Sample> genuine_only{probes[0], probes[1]};
  const auto no_impostors = build_scoreset(set, genuine_only, Metric::Euclidean);
  CHECK(no_impostors.impostor.empty());
  CHECK_THROWS_AS(threshold_at_far(no_impostors, 0.01), Error);

  std::vector<Sample> unknown{{FeatureVector{1.0}, "a", "zed", 0}};
  try {
    build_scoreset(set, unknown, Metric::Euclidean);
    FAIL("expected UnknownClaimedUser");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownClaimedUser);
  }
}

TEST_CASE("threshold_at_far examples") {
  ScoreSet s;
  s.impostor.resize(100);
  std::iota(s.impostor.begin(), s.impostor.end(), 1.0);
  auto op = threshold_at_far(s, 0.01);
  CHECK(op.threshold == 1.5);
  CHECK(op.far == 0.01);

  op = threshold_at_far({{}, {5.0}}, 0.01);
  CHECK(op.threshold == 2.5);
  CHECK(op.far == 0.0);

  op = threshold_at_far({{}, {1.0, 2.0, 3.0, 4.0}}, 0.5);
  CHECK(op.threshold == 2.5);
  CHECK(op.far == 0.5);

  op = threshold_at_far({{1.0, 2.0, 3.0}, {1.0, 2.0, 3.0, 4.0}}, 0.5);
  CHECK(op.threshold == 2.5);
  CHECK(op.frr == doctest::Approx(1.0 / 3.0));

  try {
    threshold_at_far({{1.0}, {}}, 0.01);
    FAIL("expected EmptyImpostorSet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyImpostorSet);
  }
}

TEST_CASE("threshold_at_far never overshoots and is stable under appended high scores") {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = 1 + rng.below(120);
    ScoreSet s{{}, random_scores(rng, n, trial % 2 == 0)};
    const double target = 0.005 + 0.3 * rng.uniform();
    const auto op = threshold_at_far(s, target);
    CHECK(op.far <= target);
    CHECK(op.far == oracle::far(s.impostor, op.threshold));

    // Appending a score at or above the (k+1)-th order statistic keeps the
    // threshold whenever k itself does not change.
    auto sorted = s.impostor;
    std::sort(sorted.begin(), sorted.end());
    const auto k = static_cast<std::size_t>(std::floor(target * static_cast<double>(n)));
    const auto k_next = static_cast<std::size_t>(std::floor(target * static_cast<double>(n + 1)));
    if (k == k_next && k < n) {
      auto grown = s;
      grown.impostor.push_back(sorted[k] + rng.uniform() * 5.0);
      CHECK(threshold_at_far(grown, target).threshold == op.threshold);
    }
  }
}

TEST_CASE("eer examples") {
  auto r = eer({{1.0, 2.0}, {3.0, 4.0}});
  CHECK(r.eer == 0.0);
  CHECK(r.threshold == 2.5);

  r = eer({{3.0, 4.0}, {1.0, 2.0}});
  CHECK(r.eer == 1.0);

  // Interleaved scores: FAR = FRR = 1/2 for any threshold in (2, 3].
  const auto expected = oracle::brute_force_eer({1.0, 3.0}, {2.0, 4.0});
  CHECK(expected.eer == 0.5);
  r = eer({{1.0, 3.0}, {2.0, 4.0}});
  CHECK(r.eer == 0.5);
  CHECK(r.threshold == 2.5);

  try {
    eer({{}, {1.0}});
    FAIL("expected EmptyScoreSet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyScoreSet);
  }
}

TEST_CASE("eer matches brute force on random score sets") {
  Rng rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const bool coarse = trial % 3 == 0;
    ScoreSet s{random_scores(rng, 1 + rng.below(50), coarse), random_scores(rng, 1 + rng.below(50), coarse)};
    const auto expected = oracle::brute_force_eer(s.genuine, s.impostor);
    const auto got = eer(s);
    CHECK(got.eer == expected.eer);
    CHECK(got.threshold == expected.threshold);
  }
}

TEST_CASE("FAR and FRR are monotone in the threshold") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto gen = random_scores(rng, 30, trial % 2 == 0);
    const auto imp = random_scores(rng, 30, trial % 2 == 0);
    double last_far = -1.0, last_frr = 2.0;
    for (double t = -1.0; t <= 12.0; t += 0.25) {
      const double a = far_at(imp, t);
      const double r = frr_at(gen, t);
      CHECK(a >= last_far);
      CHECK(r <= last_frr);
      last_far = a;
      last_frr = r;
    }
  }
}

TEST_CASE("scaling every score scales thresholds and keeps rates") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    ScoreSet s{random_scores(rng, 20, false), random_scores(rng, 40, false)};
    const double c = 4.0;  // power of two keeps the products exact
    ScoreSet scaled = s;
    for (auto& x : scaled.genuine) x *= c;
    for (auto& x : scaled.impostor) x *= c;
    const auto a = eer(s), b = eer(scaled);
    CHECK(b.eer == a.eer);
    CHECK(b.threshold == a.threshold * c);
    const auto op = threshold_at_far(s, 0.1), op_scaled = threshold_at_far(scaled, 0.1);
    CHECK(op_scaled.threshold == op.threshold * c);
    CHECK(op_scaled.far == op.far);
    CHECK(op_scaled.frr == op.frr);
  }
}

TEST_CASE("evaluation_scoreset scores every probe against foreign galleries") {
  GallerySet set;
  set.emplace("a", gallery_of("a", {{0.0}}));
  set.emplace("b", gallery_of("b", {{10.0}}));
  set.emplace("c", gallery_of("c", {{20.0}}));
  std::vector<Sample> probes{{FeatureVector{1.0}, "a", "a", 0}, {FeatureVector{19.0}, "c", "c", 0}};
  const auto s = evaluation_scoreset(set, probes, Metric::Euclidean);
  CHECK(s.genuine == std::vector<double>{1.0, 1.0});
  CHECK(s.impostor == std::vector<double>{9.0, 19.0, 19.0, 9.0});
}
