#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "twotier/common.hpp"
#include "twotier/timeframe.hpp"

namespace twotier {

/// All-time member ids. NodeIds are positions in the sorted id list.
class MemberRegistry {
 public:
  MemberRegistry() = default;
  explicit MemberRegistry(std::vector<std::string> ids);

  std::size_t size() const { return names_.size(); }
  const std::string& name(NodeId id) const { return names_.at(id); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<NodeId> find(std::string_view id) const;
  /// Throws Error for unknown ids.
  NodeId id(std::string_view name) const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
};

/// Distinct activities a member joined within one frame, by type.
struct Participation {
  std::uint32_t type_a = 0;
  std::uint32_t type_b = 0;

  friend bool operator==(const Participation&, const Participation&) = default;
};

struct WeightedEdge {
  NodeId a = 0;
  NodeId b = 0;
  Weight weight = 1;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

struct Neighbor {
  std::uint32_t local = 0;
  Weight weight = 0;
};

/// Immutable undirected weighted graph of one time frame, stored as CSR over
/// local indices. Local index i corresponds to nodes()[i]; nodes are sorted.
class FrameGraph {
 public:
  static constexpr int kAggregateFrame = -1;

  FrameGraph() = default;

  /// Edge endpoints are added to the node set automatically. Parallel edges
  /// are merged by summing weights. Self-loops and zero weights throw.
  FrameGraph(int frame_index, std::vector<NodeId> nodes, std::vector<WeightedEdge> edges,
             std::vector<std::pair<NodeId, Participation>> participation = {});

  int frame_index() const { return frame_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return adjacency_.size() / 2; }
  bool empty() const { return nodes_.empty(); }

  std::span<const NodeId> nodes() const { return nodes_; }
  bool contains(NodeId id) const { return local_index(id).has_value(); }
  std::optional<std::uint32_t> local_index(NodeId id) const;
  /// Throws Error when id is not a node of this frame.
  std::uint32_t index_of(NodeId id) const;

  std::span<const Neighbor> neighbors(std::uint32_t local) const {
    return {adjacency_.data() + offsets_[local], adjacency_.data() + offsets_[local + 1]};
  }
  std::size_t degree(std::uint32_t local) const { return offsets_[local + 1] - offsets_[local]; }
  Weight strength(std::uint32_t local) const { return strength_[local]; }
  const Participation& participation(std::uint32_t local) const { return participation_[local]; }

  std::size_t degree_of(NodeId id) const { return degree(index_of(id)); }
  Weight strength_of(NodeId id) const { return strength(index_of(id)); }
  /// 0 when the nodes are not adjacent or absent.
  Weight weight(NodeId a, NodeId b) const;
  /// Sum of edge weights, each undirected edge counted once.
  Weight total_weight() const { return total_weight_; }

  /// Edges with a < b, sorted.
  std::vector<WeightedEdge> edges() const;

 private:
  int frame_ = 0;
  std::vector<NodeId> nodes_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<Weight> strength_;
  std::vector<Participation> participation_;
  Weight total_weight_ = 0;
};

/// Ordered snapshots G_0..G_T plus the member registry they index into.
struct DynamicNetwork {
  std::vector<FrameGraph> frames;
  FrameSpec spec;
  MemberRegistry members;

  int frame_count() const { return static_cast<int>(frames.size()); }
};

/// Time-collapsed graph: union of nodes, weights summed over frames.
/// Participation counters are summed too.
FrameGraph aggregate(const DynamicNetwork& network);

/// Closeness on hop distances with the Wasserman-Faust correction:
/// (r / (n-1)) * (r / sum of distances), r = nodes reachable from `node`.
double closeness(const FrameGraph& graph, NodeId node);
/// Closeness of every node, aligned with graph.nodes().
std::vector<double> closeness_all(const FrameGraph& graph);

/// Induced subgraph on the nodes satisfying `keep`.
FrameGraph restrict(const FrameGraph& graph, const std::function<bool(NodeId)>& keep);
FrameGraph restrict(const FrameGraph& graph, const NodeSet& keep);

/// `frame,node_a,node_b,weight` rows for every frame.
void write_edge_list(std::ostream& out, const DynamicNetwork& network);

}  // namespace twotier
