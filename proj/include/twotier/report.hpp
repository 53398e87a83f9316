#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twotier/abstraction.hpp"
#include "twotier/community.hpp"
#include "twotier/evolution.hpp"
#include "twotier/graph.hpp"
#include "twotier/ingest.hpp"
#include "twotier/kshell.hpp"

namespace twotier {

/// Per-member quantities behind the profile table, indexed by NodeId.
struct MemberStats {
  std::vector<double> degree;         // aggregate degree
  std::vector<double> closeness;      // on the aggregate graph
  std::vector<double> type_a;         // type-A activities joined, summed over frames
  std::vector<double> type_b;
  std::vector<double> active_frames;
};

MemberStats member_stats(const DynamicNetwork& network);

struct ProfileRow {
  std::string group;  // "BM" or "GM"
  std::size_t members = 0;
  double degree = 0.0;
  double closeness = 0.0;
  double type_a = 0.0;
  double type_b = 0.0;
  double active_frames = 0.0;
};

struct ProfileTable {
  double x = 0.0;
  ProfileRow bm;
  ProfileRow gm;
};

/// Averages over backbone and general members. An empty group reports zeros.
ProfileTable member_profiles(const BackboneSplit& split, const MemberStats& stats);
ProfileTable member_profiles(const BackboneSplit& split, const DynamicNetwork& network);

enum class TypeFilter { All, A, B };

struct PipelineConfig {
  std::optional<std::filesystem::path> input;
  /// Synthetic preset used when no input is given ("paper" or "small").
  std::optional<std::string> preset;
  std::optional<LogFormat> format;  // defaults from the input's extension
  Window window{};
  std::vector<double> xs{5.0, 10.0, 20.0};
  std::uint64_t seed = 42;
  double alpha = 0.5;
  double beta = 0.5;
  double continue_jaccard = 0.5;
  std::optional<int> max_gap;
  double resolution = 1.0;
  TypeFilter type_filter = TypeFilter::All;
  int coverage_max_x = 50;
  std::filesystem::path out_dir = "twotier-out";

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Applies one `key = value` setting (keys as in the config file; '-' and
/// '_' are interchangeable). Throws ConfigError for unknown keys or values.
void apply_setting(PipelineConfig& config, std::string_view key, std::string_view value);

/// Flat `key = value` file; blank lines and lines starting with '#' are skipped.
PipelineConfig load_config(std::istream& in);
PipelineConfig load_config(const std::filesystem::path& path);

std::vector<double> parse_x_list(std::string_view text);
TypeFilter parse_type_filter(std::string_view text);
std::string_view to_string(TypeFilter filter);

/// Tier-one and tier-two results of one (X, activity split) pair.
struct SplitAnalysis {
  std::string label;  // "all", "A" or "B"
  BackboneSplit split;
  CommunitySeries bsn;
  CommunitySeries gsn;
  CommunityTimeline bsn_timeline;
  CommunityTimeline gsn_timeline;
  std::vector<AbstractGraph> abstract;
  std::vector<FrameMetrics> metrics;
};

struct XAnalysis {
  double x = 0.0;
  ProfileTable profile;
  std::vector<SplitAnalysis> splits;

  /// Throws Error when the split was not analysed.
  const SplitAnalysis& split(std::string_view label) const;
};

struct CoverageRow {
  RankingMethod method = RankingMethod::Dwks;
  NetworkFormat format = NetworkFormat::TimeFramed;
  CoveragePoint point;
};

struct Analysis {
  DynamicNetwork network;
  InfluenceTable dynamic;
  InfluenceTable aggregate;
  ShellStatistics dynamic_shells;
  ShellStatistics aggregate_shells;
  std::vector<CoverageRow> coverage;
  MemberStats stats;
  std::vector<XAnalysis> per_x;
};

/// Reads the configured input, or generates the configured preset.
std::vector<TeamRecord> load_records(const PipelineConfig& config);

Analysis analyze(std::span<const TeamRecord> records, const PipelineConfig& config);

/// Writes the CSV/JSON bundle into config.out_dir (created if needed).
void write_bundle(const Analysis& analysis, const PipelineConfig& config);

/// load_records + analyze + write_bundle.
Analysis run_pipeline(const PipelineConfig& config);

/// One row per headline number: `x,split,metric,value`.
struct SummaryRow {
  std::string x;
  std::string split;
  std::string metric;
  double value = 0.0;
};
std::vector<SummaryRow> summarize(const Analysis& analysis);

}  // namespace twotier
