#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace adaptive_gallery {

/// Seeded generator with portable draws. The std distributions are
/// implementation-defined, so uniform/normal/bounded are computed here from
/// the raw mt19937_64 stream to keep outputs identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);
  /// Standard normal (Box-Muller).
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;
/// FNV-1a; stable across platforms unlike std::hash.
std::uint64_t stable_hash(std::string_view text) noexcept;

/// Derives an independent substream seed from a root seed and labels.
std::uint64_t substream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0) noexcept;
std::uint64_t substream(std::uint64_t seed, std::string_view label, std::string_view key,
                        std::uint64_t index = 0) noexcept;

}  // namespace adaptive_gallery
