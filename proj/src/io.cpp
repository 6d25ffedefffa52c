#include "adaptive_gallery/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace adaptive_gallery {

namespace {

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(const std::string& field, std::size_t line) {
  double value = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec == std::errc::result_out_of_range) {
    throw Error(ErrorCode::NonFiniteValue, at_line(line) + "value '" + field + "' out of range");
  }
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw Error(ErrorCode::ParseError, at_line(line) + "bad number '" + field + "'");
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::NonFiniteValue, at_line(line) + "non-finite value '" + field + "'");
  }
  return value;
}

std::uint64_t parse_unsigned(const std::string& field, std::size_t line) {
  std::uint64_t value = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw Error(ErrorCode::ParseError, at_line(line) + "bad integer '" + field + "'");
  }
  return value;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path.string() + "'");
  return in;
}

}  // namespace

std::vector<Sample> parse_dataset(std::istream& in) {
  std::vector<Sample> samples;
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_commas(line);
    if (!header_seen) {
      if (fields.size() < 4 || fields[0] != "user_id" || fields[1] != "seq" || fields[2] != "claimed_id") {
        throw Error(ErrorCode::ParseError, at_line(line_no) + "expected header user_id,seq,claimed_id,f0,...");
      }
      dim = fields.size() - 3;
      for (std::size_t j = 0; j < dim; ++j) {
        if (fields[3 + j] != "f" + std::to_string(j)) {
          throw Error(ErrorCode::ParseError, at_line(line_no) + "feature column " + std::to_string(j) +
                                                 " must be named f" + std::to_string(j));
        }
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3 + dim) {
      throw Error(ErrorCode::DimensionMismatch, at_line(line_no) + "expected " + std::to_string(3 + dim) +
                                                    " columns, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw Error(ErrorCode::ParseError, at_line(line_no) + "empty user_id");
    std::vector<double> values(dim);
    for (std::size_t j = 0; j < dim; ++j) values[j] = parse_real(fields[3 + j], line_no);
    Sample s;
    s.true_id = fields[0];
    s.seq = parse_unsigned(fields[1], line_no);
    s.claimed_id = fields[2].empty() ? fields[0] : fields[2];
    s.vector = FeatureVector(std::move(values));
    samples.push_back(std::move(s));
  }
  if (!header_seen) throw Error(ErrorCode::ParseError, "missing header");
  return samples;
}

std::vector<Sample> load_dataset(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_dataset(in);
}

void write_dataset(std::ostream& out, std::span<const Sample> samples) {
  const std::size_t dim = samples.empty() ? 0 : samples.front().vector.dim();
  out << "user_id,seq,claimed_id";
  for (std::size_t j = 0; j < dim; ++j) out << ",f" << j;
  out << '\n';
  char buf[64];
  for (const auto& s : samples) {
    if (s.vector.dim() != dim) throw Error(ErrorCode::DimensionMismatch, "mixed dimensions in dataset");
    out << s.true_id << ',' << s.seq << ',' << (s.is_genuine() ? "" : s.claimed_id);
    for (double v : s.vector.values()) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, std::span<const Sample> samples) {
  auto out = open_out(path);
  write_dataset(out, samples);
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

namespace {

long long parse_integer_value(const std::string& key, const std::string& value) {
  long long v = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end || value.empty()) {
    throw Error(ErrorCode::ParseError, "key '" + key + "': bad integer '" + value + "'");
  }
  return v;
}

std::size_t parse_count(const std::string& key, const std::string& value, long long minimum) {
  const auto v = parse_integer_value(key, value);
  if (v < minimum) {
    throw Error(ErrorCode::OutOfRange, "key '" + key + "' must be >= " + std::to_string(minimum));
  }
  return static_cast<std::size_t>(v);
}

double parse_real_value(const std::string& key, const std::string& value) {
  double v = 0.0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc() || ptr != end || value.empty() || !std::isfinite(v)) {
    throw Error(ErrorCode::ParseError, "key '" + key + "': bad number '" + value + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw Error(ErrorCode::ParseError, "key '" + key + "': expected true or false, got '" + value + "'");
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, bool require_strategy) {
  ExperimentConfig cfg;
  bool have_strategy = false;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ParseError, at_line(line_no) + "expected key=value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw Error(ErrorCode::ParseError, at_line(line_no) + "duplicate key '" + key + "'");

    if (key == "strategy") {
      cfg.strategy = parse_strategy(value);
      have_strategy = true;
    } else if (key == "p") {
      cfg.p = parse_count(key, value, 1);
    } else if (key == "n_batches") {
      cfg.n_batches = parse_count(key, value, 1);
    } else if (key == "target_far") {
      cfg.target_far = parse_real_value(key, value);
    } else if (key == "metric") {
      cfg.metric = parse_metric(value);
    } else if (key == "seed") {
      cfg.seed = parse_unsigned(value, line_no);
    } else if (key == "impostor_rate") {
      cfg.impostor_rate = parse_real_value(key, value);
    } else if (key == "reestimate_threshold") {
      cfg.reestimate_threshold = parse_bool(key, value);
    } else if (key == "riskmin_k") {
      cfg.riskmin_k = parse_count(key, value, 1);
    } else if (key == "riskmin_sigma") {
      cfg.riskmin_sigma = parse_real_value(key, value);
    } else if (key == "random_pool_pseudo_only") {
      cfg.random_pool_pseudo_only = parse_bool(key, value);
    } else {
      throw Error(ErrorCode::UnknownKey, at_line(line_no) + "unknown key '" + key + "'");
    }
  }
  if (require_strategy && !have_strategy) throw Error(ErrorCode::MissingStrategy, "config must set strategy");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, bool require_strategy) {
  auto in = open_in(path);
  return parse_config(in, require_strategy);
}

std::string config_to_text(const ExperimentConfig& cfg) {
  std::ostringstream out;
  char buf[64];
  auto real = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "strategy=" << to_string(cfg.strategy) << '\n'
      << "p=" << cfg.p << '\n'
      << "n_batches=" << cfg.n_batches << '\n'
      << "target_far=" << real(cfg.target_far) << '\n'
      << "metric=" << to_string(cfg.metric) << '\n'
      << "seed=" << cfg.seed << '\n'
      << "impostor_rate=" << real(cfg.impostor_rate) << '\n'
      << "reestimate_threshold=" << (cfg.reestimate_threshold ? "true" : "false") << '\n'
      << "riskmin_k=" << cfg.riskmin_k << '\n'
      << "riskmin_sigma=" << real(cfg.riskmin_sigma) << '\n'
      << "random_pool_pseudo_only=" << (cfg.random_pool_pseudo_only ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace adaptive_gallery
