#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "twotier/common.hpp"
#include "twotier/graph.hpp"

namespace twotier {

/// Community assignment over the nodes of one graph. Community ids are dense
/// (0..community_count-1), numbered by first appearance in node order.
struct Partition {
  int frame_index = 0;
  std::vector<NodeId> nodes;
  std::vector<std::uint32_t> assignment;
  std::uint32_t community_count = 0;
  double modularity = 0.0;
  /// Set when the graph had no edges and Q is reported as 0 by convention.
  bool degenerate = false;

  std::uint32_t community_of(NodeId node) const;
  /// Member sets, indexed by community id.
  std::vector<NodeSet> communities() const;
};

/// Builds a partition of graph's nodes from arbitrary labels (aligned with
/// graph.nodes()); labels are renumbered densely. Modularity is not filled in.
Partition make_partition(const FrameGraph& graph, std::span<const std::uint32_t> labels);

/// Newman modularity with resolution gamma:
/// Q = 1/2m * sum_ij [w_ij - gamma * e_i e_j / 2m] delta(c_i, c_j).
/// Throws Error if the partition's nodes differ from the graph's or the graph
/// has no edges.
double modularity(const FrameGraph& graph, const Partition& partition, double resolution = 1.0);

struct DetectOptions {
  std::uint64_t seed = 42;
  double resolution = 1.0;
};

/// Louvain-style modularity optimisation: seeded local moving, community
/// aggregation, repeated to a fixpoint, followed by node-level moves until no
/// single node can improve Q. Edgeless graphs yield singletons, flagged
/// degenerate with Q = 0.
Partition detect(const FrameGraph& graph, const DetectOptions& options = {});

struct CommunitySeries {
  /// One entry per input frame; empty frames get an empty degenerate partition.
  std::vector<Partition> partitions;
  /// Mean Q over frames with at least one edge; 0 when there are none.
  double mean_modularity = 0.0;
  std::size_t scored_frames = 0;
  bool degenerate = true;
};

/// Runs detect on every frame. Frame t uses seed mix_seed(options.seed, t),
/// so results do not depend on evaluation order.
CommunitySeries detect_all(std::span<const FrameGraph> frames, const DetectOptions& options = {});

/// `frame,member_id,community_id`.
void write_partition_csv(std::ostream& out, const CommunitySeries& series, const MemberRegistry& members);

}  // namespace twotier
