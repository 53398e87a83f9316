#include "twotier/graph.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <queue>

namespace twotier {

MemberRegistry::MemberRegistry(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  names_ = std::move(ids);
  index_.reserve(names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) index_.emplace(names_[i], static_cast<NodeId>(i));
}

std::optional<NodeId> MemberRegistry::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeId MemberRegistry::id(std::string_view name) const {
  if (auto found = find(name)) return *found;
  throw Error("unknown member '" + std::string(name) + "'");
}

FrameGraph::FrameGraph(int frame_index, std::vector<NodeId> nodes, std::vector<WeightedEdge> edges,
                       std::vector<std::pair<NodeId, Participation>> participation)
    : frame_(frame_index) {
  for (auto& e : edges) {
    if (e.a == e.b) throw Error("self-loop on node " + std::to_string(e.a));
    if (e.weight == 0) throw Error("zero-weight edge");
    if (e.a > e.b) std::swap(e.a, e.b);
    nodes.push_back(e.a);
    nodes.push_back(e.b);
  }
  for (const auto& [id, _] : participation) nodes.push_back(id);
  nodes_ = make_node_set(std::move(nodes));

  std::sort(edges.begin(), edges.end(),
            [](const WeightedEdge& x, const WeightedEdge& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  std::vector<WeightedEdge> merged;
  merged.reserve(edges.size());
  for (const auto& e : edges) {
    if (!merged.empty() && merged.back().a == e.a && merged.back().b == e.b) {
      merged.back().weight += e.weight;
    } else {
      merged.push_back(e);
    }
  }

  const std::size_t n = nodes_.size();
  std::vector<std::size_t> counts(n + 1, 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> local_edges;
  local_edges.reserve(merged.size());
  for (const auto& e : merged) {
    const auto la = *local_index(e.a);
    const auto lb = *local_index(e.b);
    local_edges.emplace_back(la, lb);
    ++counts[la + 1];
    ++counts[lb + 1];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + counts[i + 1];
  adjacency_.resize(offsets_[n]);
  strength_.assign(n, 0);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t k = 0; k < merged.size(); ++k) {
    const auto [la, lb] = local_edges[k];
    const Weight w = merged[k].weight;
    adjacency_[cursor[la]++] = {lb, w};
    adjacency_[cursor[lb]++] = {la, w};
    strength_[la] += w;
    strength_[lb] += w;
    total_weight_ += w;
  }
  // Edges were processed in (a, b) order, so each row is sorted by neighbor.
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]),
              [](const Neighbor& x, const Neighbor& y) { return x.local < y.local; });
  }

  participation_.assign(n, Participation{});
  for (const auto& [id, p] : participation) {
    auto& slot = participation_[*local_index(id)];
    slot.type_a += p.type_a;
    slot.type_b += p.type_b;
  }
}

std::optional<std::uint32_t> FrameGraph::local_index(NodeId id) const {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - nodes_.begin());
}

std::uint32_t FrameGraph::index_of(NodeId id) const {
  if (auto local = local_index(id)) return *local;
  throw Error("node " + std::to_string(id) + " is not in frame " + std::to_string(frame_));
}

Weight FrameGraph::weight(NodeId a, NodeId b) const {
  const auto la = local_index(a);
  const auto lb = local_index(b);
  if (!la || !lb) return 0;
  const auto row = neighbors(*la);
  const auto it = std::lower_bound(row.begin(), row.end(), *lb,
                                   [](const Neighbor& nb, std::uint32_t v) { return nb.local < v; });
  return (it != row.end() && it->local == *lb) ? it->weight : 0;
}

std::vector<WeightedEdge> FrameGraph::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(edge_count());
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    for (const auto& nb : neighbors(i)) {
      if (nb.local > i) out.push_back({nodes_[i], nodes_[nb.local], nb.weight});
    }
  }
  return out;
}

FrameGraph aggregate(const DynamicNetwork& network) {
  std::vector<NodeId> nodes;
  std::vector<WeightedEdge> edges;
  std::vector<std::pair<NodeId, Participation>> participation;
  for (const auto& frame : network.frames) {
    const auto ids = frame.nodes();
    nodes.insert(nodes.end(), ids.begin(), ids.end());
    for (std::uint32_t i = 0; i < ids.size(); ++i) participation.emplace_back(ids[i], frame.participation(i));
    const auto frame_edges = frame.edges();
    edges.insert(edges.end(), frame_edges.begin(), frame_edges.end());
  }
  return FrameGraph(FrameGraph::kAggregateFrame, std::move(nodes), std::move(edges), std::move(participation));
}

namespace {

double closeness_from(const FrameGraph& graph, std::uint32_t source, std::vector<std::int32_t>& dist,
                      std::vector<std::uint32_t>& queue) {
  const std::size_t n = graph.node_count();
  if (n <= 1) return 0.0;
  std::fill(dist.begin(), dist.end(), -1);
  queue.clear();
  dist[source] = 0;
  queue.push_back(source);
  std::uint64_t total = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto u = queue[head];
    for (const auto& nb : graph.neighbors(u)) {
      if (dist[nb.local] < 0) {
        dist[nb.local] = dist[u] + 1;
        total += static_cast<std::uint64_t>(dist[nb.local]);
        queue.push_back(nb.local);
      }
    }
  }
  const double reachable = static_cast<double>(queue.size() - 1);
  if (reachable == 0.0) return 0.0;
  return (reachable / static_cast<double>(n - 1)) * (reachable / static_cast<double>(total));
}

}  // namespace

double closeness(const FrameGraph& graph, NodeId node) {
  const auto source = graph.index_of(node);
  std::vector<std::int32_t> dist(graph.node_count());
  std::vector<std::uint32_t> queue;
  queue.reserve(graph.node_count());
  return closeness_from(graph, source, dist, queue);
}

std::vector<double> closeness_all(const FrameGraph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<double> out(n, 0.0);
  std::vector<std::int32_t> dist(n);
  std::vector<std::uint32_t> queue;
  queue.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) out[i] = closeness_from(graph, i, dist, queue);
  return out;
}

FrameGraph restrict(const FrameGraph& graph, const std::function<bool(NodeId)>& keep) {
  const auto ids = graph.nodes();
  std::vector<char> kept(ids.size(), 0);
  std::vector<NodeId> nodes;
  std::vector<std::pair<NodeId, Participation>> participation;
  for (std::uint32_t i = 0; i < ids.size(); ++i) {
    if (keep(ids[i])) {
      kept[i] = 1;
      nodes.push_back(ids[i]);
      participation.emplace_back(ids[i], graph.participation(i));
    }
  }
  std::vector<WeightedEdge> edges;
  for (std::uint32_t i = 0; i < ids.size(); ++i) {
    if (!kept[i]) continue;
    for (const auto& nb : graph.neighbors(i)) {
      if (nb.local > i && kept[nb.local]) edges.push_back({ids[i], ids[nb.local], nb.weight});
    }
  }
  return FrameGraph(graph.frame_index(), std::move(nodes), std::move(edges), std::move(participation));
}

FrameGraph restrict(const FrameGraph& graph, const NodeSet& keep) {
  return restrict(graph, [&keep](NodeId id) { return contains(keep, id); });
}

void write_edge_list(std::ostream& out, const DynamicNetwork& network) {
  out << "frame,node_a,node_b,weight\n";
  for (const auto& frame : network.frames) {
    for (const auto& e : frame.edges()) {
      out << frame.frame_index() << ',' << network.members.name(e.a) << ',' << network.members.name(e.b) << ','
          << e.weight << '\n';
    }
  }
}

}  // namespace twotier
