#include "adaptive_gallery/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

#include "adaptive_gallery/io.hpp"
#include "adaptive_gallery/metrics.hpp"
#include "adaptive_gallery/protocol.hpp"
#include "adaptive_gallery/synthgen.hpp"

namespace adaptive_gallery::cli {

namespace fs = std::filesystem;

unsigned thread_cap() {
  unsigned cap = 0;
  if (const char* env = std::getenv("ADAPTIVE_GALLERY_THREADS")) {
    try {
      cap = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      cap = 0;
    }
  }
  if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
  return cap;
}

namespace {

struct GenerateOptions {
  std::size_t users = 0;
  std::size_t samples = 0;
  std::size_t dim = 0;
  double drift = DriftConfig{}.drift_step;
  double separation = DriftConfig{}.class_separation;
  double sigma = DriftConfig{}.noise_sigma;
  std::uint64_t seed = DriftConfig{}.seed;
  std::string out;
};

struct RunOptions {
  std::string data;
  std::string config;
  std::string out;
  std::string strategy;
};

int cmd_generate(const GenerateOptions& opt, std::ostream& out, std::ostream& err) {
  DriftConfig cfg;
  cfg.n_users = opt.users;
  cfg.samples_per_user = opt.samples;
  cfg.d = opt.dim;
  cfg.drift_step = opt.drift;
  cfg.class_separation = opt.separation;
  cfg.noise_sigma = opt.sigma;
  cfg.seed = opt.seed;
  std::vector<Sample> samples;
  try {
    samples = generate(cfg);
  } catch (const Error& e) {
    err << "generate: " << e.what() << '\n';
    return kUsage;
  }
  try {
    save_dataset(opt.out, samples);
  } catch (const Error& e) {
    err << "generate: " << e.what() << '\n';
    return kIo;
  }
  out << "generated " << samples.size() << " samples (" << cfg.n_users << " users, d=" << cfg.d
      << ") -> " << opt.out << '\n';
  return kOk;
}

/// Runs independent arms on up to thread_cap() workers; results keep input order.
std::vector<ExperimentTrace> run_arms(std::span<const Sample> samples,
                                      const std::vector<ExperimentConfig>& arms) {
  std::vector<std::optional<ExperimentTrace>> results(arms.size());
  std::vector<std::exception_ptr> failures(arms.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto i = next++; i < arms.size(); i = next++) {
      try {
        results[i] = run_experiment(samples, arms[i]);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const auto n_workers = std::min<std::size_t>(thread_cap(), arms.size());
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  std::vector<ExperimentTrace> traces;
  for (auto& r : results) traces.push_back(std::move(*r));
  return traces;
}

int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  ExperimentConfig base;
  bool sweep = false;
  try {
    if (!opt.config.empty()) {
      if (!fs::exists(opt.config)) {
        err << "run: config file '" << opt.config << "' not found\n";
        return kIo;
      }
      base = load_config(opt.config, opt.strategy.empty());
    } else if (opt.strategy.empty()) {
      err << "run: either --config or --strategy is required\n";
      return kUsage;
    }
    if (!opt.strategy.empty() && opt.strategy != "all") base.strategy = parse_strategy(opt.strategy);
    sweep = opt.strategy == "all";
  } catch (const Error& e) {
    err << "run: " << e.what() << '\n';
    return e.code() == ErrorCode::IoError ? kIo : kUsage;
  }

  std::vector<Sample> samples;
  try {
    samples = load_dataset(opt.data);
  } catch (const Error& e) {
    err << "run: " << e.what() << '\n';
    return e.code() == ErrorCode::IoError ? kIo : kValidation;
  }
  try {
    validate_dataset(samples, base);
  } catch (const Error& e) {
    err << "run: dataset validation failed: " << e.what() << '\n';
    return kValidation;
  }

  std::vector<ExperimentConfig> arms;
  if (sweep) {
    for (auto s : kAllStrategies) {
      arms.push_back(base);
      arms.back().strategy = s;
    }
  } else {
    arms.push_back(base);
  }

  std::vector<ExperimentTrace> traces;
  try {
    traces = run_arms(samples, arms);
  } catch (const Error& e) {
    err << "run: " << e.what() << '\n';
    return kValidation;
  }

  try {
    std::error_code ec;
    fs::create_directories(opt.out, ec);
    if (ec || !fs::is_directory(opt.out)) throw Error(ErrorCode::IoError, "cannot create '" + opt.out + "'");

    auto write_file = [](const fs::path& path, auto&& body) {
      std::ofstream f(path, std::ios::binary);
      if (!f) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
      body(f);
      if (!f) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
    };

    std::vector<StrategySummary> summaries;
    for (const auto& trace : traces) {
      const auto name = sweep ? "reports_" + to_string(trace.config.strategy) + ".csv" : std::string("reports.csv");
      write_file(fs::path(opt.out) / name, [&](std::ostream& f) { write_reports_csv(f, trace); });
      if (trace.reports.size() >= 2) summaries.push_back(summarize(trace));
    }
    write_file(fs::path(opt.out) / "summary.csv", [&](std::ostream& f) { write_summary_csv(f, summaries); });
    if (sweep) {
      write_file(fs::path(opt.out) / "comparison.csv",
                 [&](std::ostream& f) { write_comparison_csv(f, compare(traces)); });
    }
    for (const auto& s : summaries) {
      out << s.label << ": initial_eer=" << format_real(s.initial_eer) << " mean_eer=" << format_real(s.mean_eer)
          << " std_eer=" << format_real(s.std_eer) << " mean_impostor_fraction="
          << format_real(s.mean_impostor_fraction) << '\n';
    }
  } catch (const Error& e) {
    err << "run: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive template-update experiments on precomputed embeddings", "adaptive-gallery"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic drifting-identity dataset");
  generate_cmd->add_option("--users", gen.users, "Number of users")->required()->check(CLI::Range(2, 1 << 20));
  generate_cmd->add_option("--samples", gen.samples, "Samples per user")->required()->check(CLI::PositiveNumber);
  generate_cmd->add_option("--dim", gen.dim, "Embedding dimension")->required()->check(CLI::PositiveNumber);
  generate_cmd->add_option("--drift", gen.drift, "Per-sample centre drift (sigma units)")->capture_default_str();
  generate_cmd->add_option("--separation", gen.separation, "Class-centre radius (sigma units)")->capture_default_str();
  generate_cmd->add_option("--sigma", gen.sigma, "Within-class noise sigma")->capture_default_str();
  generate_cmd->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  generate_cmd->add_option("--out", gen.out, "Output Embedding CSV")->required();

  RunOptions run_opt;
  auto* run_cmd = app.add_subcommand("run", "Run the adaptive protocol and write CSV reports");
  run_cmd->add_option("--data", run_opt.data, "Embedding CSV")->required();
  run_cmd->add_option("--config", run_opt.config, "key=value config file");
  run_cmd->add_option("--out", run_opt.out, "Output directory")->required();
  run_cmd->add_option("--strategy", run_opt.strategy,
                      "Override: no_update, self_update, kmeans, random, riskmin, or all");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  if (generate_cmd->parsed()) return cmd_generate(gen, out, err);
  return cmd_run(run_opt, out, err);
}

}  // namespace adaptive_gallery::cli
