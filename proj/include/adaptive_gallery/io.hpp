#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "adaptive_gallery/core.hpp"

namespace adaptive_gallery {

// Embedding CSV: header `user_id,seq,claimed_id,f0,...,f{d-1}`, LF endings,
// `#` comment lines, no quoting. An empty claimed_id means the user_id.

std::vector<Sample> parse_dataset(std::istream& in);
std::vector<Sample> load_dataset(const std::filesystem::path& path);

/// Writes with 17 significant digits so values round-trip exactly. claimed_id
/// is left empty for genuine samples.
void write_dataset(std::ostream& out, std::span<const Sample> samples);
void save_dataset(const std::filesystem::path& path, std::span<const Sample> samples);

// Config file: `key=value` lines, `#` comments. Every key except `strategy`
// has a default; `require_strategy = false` is for callers that set it
// themselves (e.g. a command-line override).

ExperimentConfig parse_config(std::istream& in, bool require_strategy = true);
ExperimentConfig load_config(const std::filesystem::path& path, bool require_strategy = true);
std::string config_to_text(const ExperimentConfig& cfg);

}  // namespace adaptive_gallery
