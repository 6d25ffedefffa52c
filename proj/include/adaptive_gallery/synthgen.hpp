#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "adaptive_gallery/core.hpp"

namespace adaptive_gallery {

/// Synthetic drifting-identity dataset. Distances are in units of the
/// within-class noise sigma.
struct DriftConfig {
  std::size_t n_users = 20;
  std::size_t samples_per_user = 500;
  std::size_t d = 16;
  /// Radius of the sphere class centres are drawn on, in sigma units.
  double class_separation = 6.0;
  /// Per-sample centre displacement, in sigma units.
  double drift_step = 0.05;
  double noise_sigma = 1.0;
  std::uint64_t seed = 42;

  void validate() const;
};

/// User ids "u000", "u001", ... so lexicographic and numeric order agree.
std::string synthetic_user_id(std::size_t index, std::size_t n_users);

/// Starting class centre of each user, on the sphere of radius
/// class_separation * noise_sigma.
std::vector<std::vector<double>> initial_centres(const DriftConfig& cfg);

/// Per user: centre on the sphere, then a random walk with steps of
/// drift_step * sigma along uniformly random directions; each sample is the
/// current centre plus isotropic Gaussian noise. Centre, walk and noise use
/// independent substreams so changing drift_step leaves the noise draws fixed.
std::vector<Sample> generate(const DriftConfig& cfg);

}  // namespace adaptive_gallery
