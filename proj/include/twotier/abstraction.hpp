#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "twotier/common.hpp"
#include "twotier/community.hpp"
#include "twotier/graph.hpp"
#include "twotier/ingest.hpp"

namespace twotier {

/// BC: community of backbone members; GC: community of general members.
enum class CommunityClass : std::uint8_t { BC, GC };
/// BBE: BC-BC; GGE: GC-GC; BGE: BC-GC.
enum class EdgeClass : std::uint8_t { BBE, GGE, BGE };

EdgeClass classify_edge(CommunityClass a, CommunityClass b);
std::string_view to_string(CommunityClass c);
std::string_view to_string(EdgeClass c);

struct AbstractNode {
  CommunityClass cls = CommunityClass::BC;
  /// Community id inside its source partition (BSN or GSN).
  std::uint32_t community = 0;
  std::size_t size = 0;
};

struct AbstractEdge {
  std::uint32_t a = 0;  // a < b, indices into AbstractGraph::nodes
  std::uint32_t b = 0;
  EdgeClass cls = EdgeClass::BBE;
  Weight weight = 0;
};

/// Community-level network of one frame. BC nodes come first, in BSN
/// community order, followed by GC nodes in GSN community order.
struct AbstractGraph {
  int frame_index = 0;
  std::vector<AbstractNode> nodes;
  std::vector<AbstractEdge> edges;

  std::size_t count(CommunityClass c) const;
  std::size_t count(EdgeClass c) const;
  /// Communities with no inter-community edge, by class.
  std::size_t isolated(CommunityClass c) const;
  Weight total_weight() const;
};

/// Collapses each community to a node. The weight between two communities is
/// the summed member-link weight between them in the full frame graph, so
/// backbone-general cross links become BGEs; links inside a community vanish.
/// Throws Error when a member sits in both partitions or a linked member is
/// in neither.
AbstractGraph abstract_frame(const FrameGraph& frame, const Partition& bsn, const Partition& gsn);

enum class NodeFilter { All, BC, GC };

/// 2L / (N(N-1)); 0 when N <= 1.
double density(std::size_t nodes, std::size_t edges);
/// Whole graph, or the BC-only (with BBEs) / GC-only (with GGEs) sub-graph.
double density(const AbstractGraph& graph, NodeFilter filter = NodeFilter::All);

/// Raw betweenness (sum over unordered pairs of the fraction of shortest hop
/// paths through each node), by Brandes accumulation. `normalized` divides by
/// (n-1)(n-2)/2.
std::vector<double> betweenness(std::size_t node_count, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges,
                                bool normalized = false);
std::vector<double> betweenness(const AbstractGraph& graph, bool normalized = false);

struct EdgeWeightShares {
  double bbe = 0.0;
  double gge = 0.0;
  double bge = 0.0;
};

/// Fraction of total edge weight per edge class. Throws Error on an edgeless graph.
EdgeWeightShares edge_weight_shares(const AbstractGraph& graph);

/// Per-frame summary of an abstract graph.
struct FrameMetrics {
  int frame = 0;
  std::size_t bc_count = 0;
  std::size_t gc_count = 0;
  std::size_t bc_isolated = 0;
  std::size_t gc_isolated = 0;
  std::size_t bbe_count = 0;
  std::size_t gge_count = 0;
  std::size_t bge_count = 0;
  double density_all = 0.0;
  double density_bc = 0.0;
  double density_gc = 0.0;
  double mean_betweenness_bc = 0.0;
  double mean_betweenness_gc = 0.0;
  /// Unset (all zero, has_edges false) for edgeless frames.
  EdgeWeightShares shares{};
  Weight bbe_weight = 0;
  Weight gge_weight = 0;
  Weight bge_weight = 0;
  bool has_edges = false;
};

FrameMetrics frame_metrics(const AbstractGraph& graph);

/// Builds the network of one activity type over the full network's frames and
/// registry, so backbone labels stay global.
DynamicNetwork split_by_type(const ExpandedLog& log, ActivityType type, const DynamicNetwork& full);

/// `frame,comm_a,class_a,comm_b,class_b,edge_class,weight`.
void write_abstract_csv(std::ostream& out, std::span<const AbstractGraph> graphs);
/// One row per frame of FrameMetrics.
void write_metrics_csv(std::ostream& out, std::span<const FrameMetrics> metrics);

}  // namespace twotier
