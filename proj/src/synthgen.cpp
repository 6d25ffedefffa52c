#include "adaptive_gallery/synthgen.hpp"

#include <cmath>
#include <cstdio>

#include "adaptive_gallery/rng.hpp"

namespace adaptive_gallery {

void DriftConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::OutOfRange, what); };
  if (n_users < 2) fail("n_users must be >= 2");
  if (samples_per_user < 1) fail("samples_per_user must be >= 1");
  if (d < 1) fail("d must be >= 1");
  if (!(class_separation > 0.0)) fail("class_separation must be > 0");
  if (!(drift_step >= 0.0)) fail("drift_step must be >= 0");
  if (!(noise_sigma > 0.0)) fail("noise_sigma must be > 0");
}

std::string synthetic_user_id(std::size_t index, std::size_t n_users) {
  int width = 3;
  for (std::size_t n = n_users; n >= 1000; n /= 10) ++width;
  char buf[32];
  std::snprintf(buf, sizeof buf, "u%0*zu", width, index);
  return buf;
}

namespace {

std::vector<double> random_unit(Rng& rng, std::size_t d) {
  std::vector<double> v(d);
  double norm = 0.0;
  while (norm == 0.0) {
    norm = 0.0;
    for (auto& x : v) {
      x = rng.normal();
      norm += x * x;
    }
    norm = std::sqrt(norm);
  }
  for (auto& x : v) x /= norm;
  return v;
}

std::vector<double> centre_of(const DriftConfig& cfg, std::size_t user) {
  Rng rng(substream(cfg.seed, "centre", user));
  auto centre = random_unit(rng, cfg.d);
  for (auto& x : centre) x *= cfg.class_separation * cfg.noise_sigma;
  return centre;
}

}  // namespace

std::vector<std::vector<double>> initial_centres(const DriftConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<double>> out;
  for (std::size_t u = 0; u < cfg.n_users; ++u) out.push_back(centre_of(cfg, u));
  return out;
}

std::vector<Sample> generate(const DriftConfig& cfg) {
  cfg.validate();
  std::vector<Sample> samples;
  samples.reserve(cfg.n_users * cfg.samples_per_user);
  const double step = cfg.drift_step * cfg.noise_sigma;
  for (std::size_t u = 0; u < cfg.n_users; ++u) {
    const auto id = synthetic_user_id(u, cfg.n_users);
    Rng walk_rng(substream(cfg.seed, "walk", u));
    Rng noise_rng(substream(cfg.seed, "noise", u));

    auto centre = centre_of(cfg, u);
    for (std::size_t t = 0; t < cfg.samples_per_user; ++t) {
      if (t > 0) {
        const auto dir = random_unit(walk_rng, cfg.d);
        for (std::size_t j = 0; j < cfg.d; ++j) centre[j] += step * dir[j];
      }
      std::vector<double> v(cfg.d);
      for (std::size_t j = 0; j < cfg.d; ++j) v[j] = centre[j] + cfg.noise_sigma * noise_rng.normal();
      samples.push_back({FeatureVector(std::move(v)), id, id, t});
    }
  }
  return samples;
}

}  // namespace adaptive_gallery
