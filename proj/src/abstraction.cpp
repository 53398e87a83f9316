#include "twotier/abstraction.hpp"

#include <algorithm>
#include <map>
#include <ostream>

namespace twotier {

EdgeClass classify_edge(CommunityClass a, CommunityClass b) {
  if (a != b) return EdgeClass::BGE;
  return a == CommunityClass::BC ? EdgeClass::BBE : EdgeClass::GGE;
}

std::string_view to_string(CommunityClass c) { return c == CommunityClass::BC ? "BC" : "GC"; }

std::string_view to_string(EdgeClass c) {
  switch (c) {
    case EdgeClass::BBE: return "BBE";
    case EdgeClass::GGE: return "GGE";
    case EdgeClass::BGE: return "BGE";
  }
  return "?";
}

std::size_t AbstractGraph::count(CommunityClass c) const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [c](const auto& n) { return n.cls == c; }));
}

std::size_t AbstractGraph::count(EdgeClass c) const {
  return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [c](const auto& e) { return e.cls == c; }));
}

std::size_t AbstractGraph::isolated(CommunityClass c) const {
  std::vector<char> linked(nodes.size(), 0);
  for (const auto& e : edges) linked[e.a] = linked[e.b] = 1;
  std::size_t n = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].cls == c && !linked[i]) ++n;
  }
  return n;
}

Weight AbstractGraph::total_weight() const {
  Weight w = 0;
  for (const auto& e : edges) w += e.weight;
  return w;
}

AbstractGraph abstract_frame(const FrameGraph& frame, const Partition& bsn, const Partition& gsn) {
  AbstractGraph g;
  g.frame_index = frame.frame_index();
  const std::uint32_t bc_count = bsn.community_count;
  for (std::uint32_t c = 0; c < bsn.community_count; ++c) g.nodes.push_back({CommunityClass::BC, c, 0});
  for (std::uint32_t c = 0; c < gsn.community_count; ++c) g.nodes.push_back({CommunityClass::GC, c, 0});
  for (auto a : bsn.assignment) ++g.nodes[a].size;
  for (auto a : gsn.assignment) ++g.nodes[bc_count + a].size;

  // Abstract node of each frame node; both partitions are sorted by node id.
  const auto ids = frame.nodes();
  const std::uint32_t kNone = UINT32_MAX;
  std::vector<std::uint32_t> node_of(ids.size(), kNone);
  auto assign = [&](const Partition& p, std::uint32_t offset) {
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
      const auto local = frame.local_index(p.nodes[i]);
      if (!local) continue;
      if (node_of[*local] != kNone) {
        throw Error("member " + std::to_string(p.nodes[i]) + " is assigned to two communities in frame " +
                    std::to_string(frame.frame_index()));
      }
      node_of[*local] = offset + p.assignment[i];
    }
  };
  assign(bsn, 0);
  assign(gsn, bc_count);

  std::map<std::pair<std::uint32_t, std::uint32_t>, Weight> weights;
  for (std::uint32_t i = 0; i < ids.size(); ++i) {
    for (const auto& nb : frame.neighbors(i)) {
      if (nb.local <= i) continue;
      const auto a = node_of[i];
      const auto b = node_of[nb.local];
      if (a == kNone || b == kNone) {
        const auto missing = a == kNone ? ids[i] : ids[nb.local];
        throw Error("member " + std::to_string(missing) + " has links but no community in frame " +
                    std::to_string(frame.frame_index()));
      }
      if (a == b) continue;
      weights[std::minmax(a, b)] += nb.weight;
    }
  }
  g.edges.reserve(weights.size());
  for (const auto& [key, w] : weights) {
    g.edges.push_back({key.first, key.second, classify_edge(g.nodes[key.first].cls, g.nodes[key.second].cls), w});
  }
  return g;
}

double density(std::size_t nodes, std::size_t edges) {
  if (nodes <= 1) return 0.0;
  return 2.0 * static_cast<double>(edges) / (static_cast<double>(nodes) * static_cast<double>(nodes - 1));
}

double density(const AbstractGraph& graph, NodeFilter filter) {
  switch (filter) {
    case NodeFilter::All: return density(graph.nodes.size(), graph.edges.size());
    case NodeFilter::BC: return density(graph.count(CommunityClass::BC), graph.count(EdgeClass::BBE));
    case NodeFilter::GC: return density(graph.count(CommunityClass::GC), graph.count(EdgeClass::GGE));
  }
  return 0.0;
}

std::vector<double> betweenness(std::size_t n, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges,
                                bool normalized) {
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) throw Error("edge endpoint out of range");
    if (a == b) continue;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<double> score(n, 0.0), sigma(n), delta(n);
  std::vector<std::int64_t> dist(n);
  std::vector<std::uint32_t> stack;
  stack.reserve(n);
  std::vector<std::vector<std::uint32_t>> preds(n);
  for (std::uint32_t s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    for (auto& p : preds) p.clear();
    stack.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    // BFS order doubles as the stack; visiting it backwards gives
    // non-increasing distance.
    stack.push_back(s);
    for (std::size_t head = 0; head < stack.size(); ++head) {
      const auto v = stack[head];
      for (auto w : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          stack.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    for (std::size_t k = stack.size(); k-- > 1;) {
      const auto w = stack[k];
      for (auto v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      score[w] += delta[w];
    }
  }
  // Every unordered pair was counted from both endpoints.
  for (auto& x : score) x /= 2.0;
  if (normalized && n > 2) {
    const double scale = static_cast<double>(n - 1) * static_cast<double>(n - 2) / 2.0;
    for (auto& x : score) x /= scale;
  }
  return score;
}

std::vector<double> betweenness(const AbstractGraph& graph, bool normalized) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(graph.edges.size());
  for (const auto& e : graph.edges) edges.emplace_back(e.a, e.b);
  return betweenness(graph.nodes.size(), edges, normalized);
}

EdgeWeightShares edge_weight_shares(const AbstractGraph& graph) {
  if (graph.edges.empty()) throw Error("edge weight shares are undefined for an edgeless graph");
  double bbe = 0, gge = 0, bge = 0;
  for (const auto& e : graph.edges) {
    const auto w = static_cast<double>(e.weight);
    (e.cls == EdgeClass::BBE ? bbe : e.cls == EdgeClass::GGE ? gge : bge) += w;
  }
  const double total = bbe + gge + bge;
  return {bbe / total, gge / total, bge / total};
}

FrameMetrics frame_metrics(const AbstractGraph& graph) {
  FrameMetrics m;
  m.frame = graph.frame_index;
  m.bc_count = graph.count(CommunityClass::BC);
  m.gc_count = graph.count(CommunityClass::GC);
  m.bc_isolated = graph.isolated(CommunityClass::BC);
  m.gc_isolated = graph.isolated(CommunityClass::GC);
  m.bbe_count = graph.count(EdgeClass::BBE);
  m.gge_count = graph.count(EdgeClass::GGE);
  m.bge_count = graph.count(EdgeClass::BGE);
  m.density_all = density(graph, NodeFilter::All);
  m.density_bc = density(graph, NodeFilter::BC);
  m.density_gc = density(graph, NodeFilter::GC);
  const auto bc = betweenness(graph);
  double sum_b = 0.0, sum_g = 0.0;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    (graph.nodes[i].cls == CommunityClass::BC ? sum_b : sum_g) += bc[i];
  }
  m.mean_betweenness_bc = m.bc_count ? sum_b / static_cast<double>(m.bc_count) : 0.0;
  m.mean_betweenness_gc = m.gc_count ? sum_g / static_cast<double>(m.gc_count) : 0.0;
  for (const auto& e : graph.edges) {
    (e.cls == EdgeClass::BBE ? m.bbe_weight : e.cls == EdgeClass::GGE ? m.gge_weight : m.bge_weight) += e.weight;
  }
  m.has_edges = !graph.edges.empty();
  if (m.has_edges) m.shares = edge_weight_shares(graph);
  return m;
}

DynamicNetwork split_by_type(const ExpandedLog& log, ActivityType type, const DynamicNetwork& full) {
  return build_frames(filter_by_type(log, type), full.spec, full.members);
}

void write_abstract_csv(std::ostream& out, std::span<const AbstractGraph> graphs) {
  out << "frame,comm_a,class_a,comm_b,class_b,edge_class,weight\n";
  for (const auto& g : graphs) {
    for (const auto& e : g.edges) {
      const auto& a = g.nodes[e.a];
      const auto& b = g.nodes[e.b];
      out << g.frame_index << ',' << a.community << ',' << to_string(a.cls) << ',' << b.community << ','
          << to_string(b.cls) << ',' << to_string(e.cls) << ',' << e.weight << '\n';
    }
  }
}

void write_metrics_csv(std::ostream& out, std::span<const FrameMetrics> metrics) {
  out << "frame,n_bc,n_gc,isolated_bc,isolated_gc,l_bbe,l_gge,l_bge,density_all,density_bc,density_gc,"
         "mean_betweenness_bc,mean_betweenness_gc,w_bbe,w_gge,w_bge,share_bbe,share_gge,share_bge\n";
  for (const auto& m : metrics) {
    out << m.frame << ',' << m.bc_count << ',' << m.gc_count << ',' << m.bc_isolated << ',' << m.gc_isolated << ','
        << m.bbe_count << ',' << m.gge_count << ',' << m.bge_count << ',' << format_double(m.density_all) << ','
        << format_double(m.density_bc) << ',' << format_double(m.density_gc) << ','
        << format_double(m.mean_betweenness_bc) << ',' << format_double(m.mean_betweenness_gc) << ','
        << m.bbe_weight << ',' << m.gge_weight << ',' << m.bge_weight << ',';
    if (m.has_edges) {
      out << format_double(m.shares.bbe) << ',' << format_double(m.shares.gge) << ',' << format_double(m.shares.bge);
    } else {
      out << ",,";
    }
    out << '\n';
  }
}

}  // namespace twotier
