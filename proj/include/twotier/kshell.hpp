#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "twotier/common.hpp"
#include "twotier/graph.hpp"

namespace twotier {

/// round(sqrt(degree * strength)), computed in integers; half-way cases
/// round away from zero (they cannot occur for integer arguments).
std::uint64_t weighted_degree(std::uint64_t degree, std::uint64_t strength);
std::uint64_t weighted_degree(const FrameGraph& graph, NodeId node);

/// Shell index per node of one frame, aligned with the graph's node order.
struct ShellAssignment {
  int frame_index = 0;
  std::vector<NodeId> nodes;
  std::vector<std::uint32_t> shells;
  std::uint32_t max_shell = 0;

  /// Throws Error for nodes outside the frame.
  std::uint32_t shell_of(NodeId node) const;
};

/// Weighted k-shell pruning. At level k every node whose weighted degree in
/// the remaining graph is <= k is removed, repeatedly, until none is left at
/// that level; removed nodes get shell k. Isolated nodes land in shell 1.
ShellAssignment wks_decompose(const FrameGraph& graph);

/// Per-member influence, indexed by NodeId.
struct InfluenceTable {
  /// per_frame[t][member] = shell of member in frame t, 0 if absent.
  std::vector<std::vector<std::uint32_t>> per_frame;
  std::vector<std::uint64_t> total;
  /// Degree in the aggregate network.
  std::vector<std::uint64_t> tiebreak_degree;
  std::vector<std::uint32_t> frames_active;

  std::size_t member_count() const { return total.size(); }
};

InfluenceTable dynamic_influence(const DynamicNetwork& network);
/// Plain W-KS on one (typically aggregate) graph: total = shell, one frame.
InfluenceTable static_influence(const FrameGraph& graph, std::size_t member_count);

/// Members ordered by (total desc, tiebreak degree desc, id asc).
std::vector<NodeId> rank_members(const InfluenceTable& table);

/// floor(n * x / 100), at least 1. Throws Error unless 0 < x <= 100.
std::size_t backbone_size(std::size_t member_count, double x);

struct FrameSplit {
  FrameGraph bsn;
  FrameGraph gsn;
  /// Links with one backbone and one general endpoint.
  std::vector<WeightedEdge> cross_links;
};

struct BackboneSplit {
  double x = 0.0;
  NodeSet backbone;
  NodeSet general;
  std::vector<FrameSplit> frames;

  bool is_backbone(NodeId id) const { return contains(backbone, id); }
};

/// Top x% of members by influence become backbone members; every frame is
/// split into its backbone and general sub-networks plus cross links.
BackboneSplit select_backbone(const DynamicNetwork& network, const InfluenceTable& table, double x);
/// Applies fixed backbone labels to a network (e.g. a per-type sub-network).
BackboneSplit split_network(const DynamicNetwork& network, const NodeSet& backbone, double x);

/// |seeds and their neighbours| / |V|. Throws Error on an empty graph.
double coverage(const FrameGraph& graph, const NodeSet& seeds);

enum class CoverageAggregation { Mean, Union };

/// Per-frame coverage for frames with at least one node (-1 for empty frames).
std::vector<double> frame_coverages(const DynamicNetwork& network, const NodeSet& seeds);
/// Mean: average of per-frame coverages over non-empty frames.
/// Union: members covered in any frame over members present in any frame.
double coverage(const DynamicNetwork& network, const NodeSet& seeds,
                CoverageAggregation aggregation = CoverageAggregation::Mean);

enum class RankingMethod { WksAggregate, Dwks };
enum class NetworkFormat { Aggregate, TimeFramed };

struct CoveragePoint {
  double x = 0.0;
  double coverage = 0.0;
};

/// Coverage of the top-x% selection for each x, measured on the method's
/// native format (aggregate graph for WKS, time frames for DWKS).
std::vector<CoveragePoint> coverage_curve(const DynamicNetwork& network, RankingMethod method,
                                          std::span<const double> xs);
std::vector<CoveragePoint> coverage_curve(const DynamicNetwork& network, RankingMethod method, NetworkFormat format,
                                          std::span<const double> xs,
                                          CoverageAggregation aggregation = CoverageAggregation::Mean);

/// Number of distinct influence values and of distinct (influence, degree)
/// ranks among members.
struct ShellStatistics {
  std::size_t distinct_influence = 0;
  std::size_t distinct_ranks = 0;
};
ShellStatistics shell_statistics(const InfluenceTable& table);

/// `member_id,total_influence,tiebreak_degree,frames_active`, in rank order.
void write_influence_csv(std::ostream& out, const InfluenceTable& table, const MemberRegistry& members);

}  // namespace twotier
