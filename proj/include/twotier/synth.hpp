#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "twotier/common.hpp"
#include "twotier/evolution.hpp"
#include "twotier/graph.hpp"
#include "twotier/ingest.hpp"
#include "twotier/timeframe.hpp"

namespace twotier {

/// Parameters of the planted activity-log generator.
///
/// Backbone members (BMs) are split into blocks and, when active in a frame,
/// team up mostly inside their block in type-B activities. General members
/// (GMs) live in small groups that are replaced at `churn_rate` per frame and
/// join type-A teams, usually hosted by one BM.
struct SynthConfig {
  std::uint64_t seed = 42;
  int frames = 24;
  Timestamp start{};
  Window window{};

  std::size_t backbone_count = 240;
  /// GMs present in the first frame; later frames keep about this many.
  std::size_t general_pool_size = 320;
  double churn_rate = 0.5;
  std::size_t teams_per_frame_a = 80;
  std::size_t teams_per_frame_b = 175;
  std::size_t activities_per_frame_a = 5;
  std::size_t activities_per_frame_b = 28;
  int team_size_min = 2;
  int team_size_max = 9;
  /// Probability that a type-A team is hosted by a BM.
  double mixing = 0.85;
  /// Probability that a hosted type-A team takes a second BM.
  double second_host = 0.3;
  /// Probability that a type-B team is BM-only (else fresh GMs only).
  double bm_type_b_bias = 0.9;
  /// Probability that a BM type-B team brings one GM guest along.
  double type_b_guest = 0.1;
  /// Probability that a BM type-B team draws partners from any block.
  double cross_block = 0.3;
  /// Probability that a type-A team adds one GM from another group.
  double cross_group = 0.1;
  /// Probability that a BM is active in a frame.
  double bm_activity = 0.75;
  std::size_t planted_blocks = 6;
  int gm_group_min = 3;
  int gm_group_max = 8;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// 24 three-month frames from 2015-05, about 5000 members and 75k links.
SynthConfig paper_preset(std::uint64_t seed = 42);
/// Same structure at a few hundred members, for fast tests.
SynthConfig small_preset(std::uint64_t seed = 42);
/// Looks up "paper" or "small"; throws ConfigError otherwise.
SynthConfig preset_by_name(std::string_view name, std::uint64_t seed = 42);

struct GroundTruthEvent {
  int frame = 0;
  std::string kind;     // EventKind name
  std::string subject;  // "block" or "group"
  std::vector<std::size_t> ids;
};

struct GroundTruth {
  std::string prng;
  std::uint64_t seed = 0;
  /// Member ids of the planted BMs, sorted.
  std::vector<std::string> backbone;
  /// Planted block of every BM, aligned with `backbone`.
  std::vector<std::size_t> block_of;
  /// blocks[t][b]: active members of block b in frame t (ids, sorted).
  std::vector<std::vector<std::vector<std::string>>> blocks;
  /// groups[t]: GM groups that teamed in frame t (ids, sorted).
  std::vector<std::vector<std::vector<std::string>>> groups;
  std::vector<GroundTruthEvent> events;
};

struct SynthOutput {
  std::vector<TeamRecord> records;
  GroundTruth truth;
};

/// Deterministic in the seed. Records are sorted by (timestamp, team id).
SynthOutput generate(const SynthConfig& config);

void write_ground_truth(std::ostream& out, const GroundTruth& truth, const SynthConfig& config);

/// Planted-partition graph on k * n unit-weight nodes (NodeIds 0..kn-1; block
/// of node i is i / n). Throws Error unless 0 <= p_out < p_in <= 1.
FrameGraph planted_partition(std::size_t blocks, std::size_t nodes_per_block, double p_in, double p_out,
                             std::uint64_t seed);

/// Network where a steady, low-degree core is active in every frame and a
/// different dense burst clique appears in each frame and never returns.
struct IntermittentNetwork {
  DynamicNetwork network;
  NodeSet core;
  NodeSet burst;
};

IntermittentNetwork intermittent_network(int frames = 12, std::size_t core_count = 10, std::size_t burst_size = 10,
                                         Weight burst_repeats = 5, std::uint64_t seed = 7);

/// Hand-built community sequence exercising every event kind, with the
/// events classify() must report (kind, frame, predecessors, successors).
struct ScriptedTimeline {
  std::vector<std::vector<Community>> frames;
  std::vector<EvolutionEvent> expected;
};

ScriptedTimeline scripted_evolution_timeline();

}  // namespace twotier
