// twotier: command-line front end.
//
//   twotier synth   --preset paper --seed 42 --out-dir data
//   twotier analyze --input data/activity_log.csv --x 5,10,20 --out-dir bundle
//   twotier report  --out-dir bundle

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "twotier/report.hpp"
#include "twotier/synth.hpp"

namespace fs = std::filesystem;

namespace {

struct Flags {
  std::optional<std::string> config;
  std::map<std::string, std::string> settings;
};

// Registers a string flag whose value, if given, becomes a config setting.
void add_setting(CLI::App* app, Flags& flags, const std::string& name, const std::string& help) {
  app->add_option_function<std::string>(
      "--" + name, [&flags, name](const std::string& v) { flags.settings[name] = v; }, help);
}

int run_synth(const Flags& flags) {
  const auto get = [&](const std::string& key, const std::string& fallback) {
    const auto it = flags.settings.find(key);
    return it == flags.settings.end() ? fallback : it->second;
  };
  twotier::PipelineConfig parsed;
  twotier::apply_setting(parsed, "seed", get("seed", "42"));
  const auto format = twotier::parse_log_format(get("format", "csv"));
  const fs::path out_dir = get("out-dir", ".");
  auto config = twotier::preset_by_name(get("preset", "paper"), parsed.seed);
  if (flags.settings.count("window")) config.window = twotier::Window::parse(flags.settings.at("window"));

  const auto out = twotier::generate(config);
  fs::create_directories(out_dir);
  const fs::path log_path = out_dir / (format == twotier::LogFormat::Csv ? "activity_log.csv" : "activity_log.jsonl");
  std::ofstream log(log_path, std::ios::binary);
  twotier::write_log(log, out.records, format);
  std::ofstream truth(out_dir / "ground_truth.json", std::ios::binary);
  twotier::write_ground_truth(truth, out.truth, config);
  if (!log || !truth) throw twotier::Error("failed writing into " + out_dir.string());
  std::cout << "wrote " << out.records.size() << " team records to " << log_path.string() << '\n';
  return 0;
}

int run_analyze(const Flags& flags) {
  twotier::PipelineConfig config;
  if (flags.config) config = twotier::load_config(fs::path(*flags.config));
  for (const auto& [key, value] : flags.settings) twotier::apply_setting(config, key, value);
  if (flags.settings.count("input")) config.preset.reset();
  if (flags.settings.count("preset")) config.input.reset();
  const auto analysis = twotier::run_pipeline(config);
  std::cout << "analysed " << analysis.network.members.size() << " members over " << analysis.network.frame_count()
            << " frames; bundle in " << config.out_dir.string() << '\n';
  return 0;
}

void print_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw twotier::Error("cannot read " + path.string());
  std::cout << "== " << path.filename().string() << '\n' << in.rdbuf() << '\n';
}

int run_report(const Flags& flags) {
  const auto it = flags.settings.find("out-dir");
  const fs::path dir = it == flags.settings.end() ? fs::path("twotier-out") : fs::path(it->second);
  print_file(dir / "profiles.csv");
  print_file(dir / "summary.csv");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twotier: backbone, community and core-periphery analysis of team activity logs"};
  app.require_subcommand(1);

  Flags synth_flags, analyze_flags, report_flags;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic activity log and its ground truth");
  add_setting(synth, synth_flags, "preset", "Preset: paper or small");
  add_setting(synth, synth_flags, "seed", "Random seed");
  add_setting(synth, synth_flags, "format", "Output format: csv or jsonl");
  add_setting(synth, synth_flags, "window", "Frame window (e.g. 3, 3mo, 90d)");
  add_setting(synth, synth_flags, "out-dir", "Output directory");

  auto* analyze = app.add_subcommand("analyze", "Run the full pipeline and write a report bundle");
  analyze->add_option("--config", analyze_flags.config, "key = value config file; flags override it");
  for (const auto& [name, help] : std::initializer_list<std::pair<std::string, std::string>>{
           {"input", "Activity log (CSV or JSONL)"},
           {"preset", "Synthetic preset used instead of an input log"},
           {"format", "Input format: csv or jsonl"},
           {"window", "Frame window (e.g. 3, 3mo, 90d)"},
           {"x", "Backbone percentages, comma separated"},
           {"seed", "Seed for community detection (and presets)"},
           {"alpha", "Evolution match threshold on the earlier community"},
           {"beta", "Evolution match threshold on the later community"},
           {"out-dir", "Bundle directory"},
           {"type-filter", "Activity split: A, B or all"},
           {"max-gap", "Largest number of frames a suspended community may skip"},
           {"resolution", "Modularity resolution"}}) {
    add_setting(analyze, analyze_flags, name, help);
  }

  auto* report = app.add_subcommand("report", "Print the headline tables of an existing bundle");
  add_setting(report, report_flags, "out-dir", "Bundle directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (synth->parsed()) return run_synth(synth_flags);
    if (analyze->parsed()) return run_analyze(analyze_flags);
    return run_report(report_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 1;
}
