#include "twotier/community.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "twotier/random.hpp"

namespace twotier {

std::uint32_t Partition::community_of(NodeId node) const {
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
  if (it == nodes.end() || *it != node) {
    throw Error("node " + std::to_string(node) + " is not covered by the partition of frame " +
                std::to_string(frame_index));
  }
  return assignment[static_cast<std::size_t>(it - nodes.begin())];
}

std::vector<NodeSet> Partition::communities() const {
  std::vector<NodeSet> out(community_count);
  for (std::size_t i = 0; i < nodes.size(); ++i) out[assignment[i]].push_back(nodes[i]);
  return out;
}

namespace {

std::vector<std::uint32_t> relabel_dense(std::span<const std::uint32_t> labels, std::uint32_t& count) {
  std::vector<std::uint32_t> out(labels.size());
  std::vector<std::uint32_t> map;
  const std::uint32_t kUnset = UINT32_MAX;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= map.size()) map.resize(labels[i] + 1, kUnset);
    if (map[labels[i]] == kUnset) map[labels[i]] = count++;
    out[i] = map[labels[i]];
  }
  return out;
}

// Weighted graph with self-loops, used across aggregation levels.
struct LevelGraph {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
  std::vector<double> self_loop;  // weight of internal edges, each counted once
  std::vector<double> degree;     // sum of incident weights, self-loops counted twice
  double two_m = 0.0;

  std::size_t size() const { return adj.size(); }
};

LevelGraph from_frame(const FrameGraph& g) {
  LevelGraph lg;
  const std::size_t n = g.node_count();
  lg.adj.resize(n);
  lg.self_loop.assign(n, 0.0);
  lg.degree.assign(n, 0.0);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (const auto& nb : g.neighbors(i)) lg.adj[i].emplace_back(nb.local, static_cast<double>(nb.weight));
    lg.degree[i] = static_cast<double>(g.strength(i));
    lg.two_m += lg.degree[i];
  }
  return lg;
}

// Communities of `g` under dense labels `comm` (0..count-1) become nodes.
LevelGraph coarsen(const LevelGraph& g, const std::vector<std::uint32_t>& comm, std::uint32_t count) {
  LevelGraph out;
  out.adj.resize(count);
  out.self_loop.assign(count, 0.0);
  out.degree.assign(count, 0.0);
  out.two_m = g.two_m;
  std::vector<double> acc(count, 0.0);
  std::vector<std::uint32_t> touched;
  std::vector<std::vector<std::uint32_t>> members(count);
  for (std::uint32_t i = 0; i < g.size(); ++i) members[comm[i]].push_back(i);
  for (std::uint32_t c = 0; c < count; ++c) {
    touched.clear();
    for (auto i : members[c]) {
      out.self_loop[c] += g.self_loop[i];
      out.degree[c] += g.degree[i];
      for (const auto& [j, w] : g.adj[i]) {
        const auto cj = comm[j];
        if (cj == c) {
          // Each internal edge is seen from both endpoints.
          out.self_loop[c] += w / 2.0;
          continue;
        }
        if (acc[cj] == 0.0) touched.push_back(cj);
        acc[cj] += w;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (auto cj : touched) {
      out.adj[c].emplace_back(cj, acc[cj]);
      acc[cj] = 0.0;
    }
  }
  return out;
}

// One local-moving phase. Candidate targets are the neighbouring communities
// plus an empty one; a node moves only on strictly positive gain. Gains are
// scaled by 2m so that integer weights with resolution 1 compare exactly.
// Returns true if any node moved; `comm` is relabelled densely on return.
bool local_move(const LevelGraph& g, std::vector<std::uint32_t>& comm, std::uint32_t& count, Rng& rng,
                double resolution) {
  const std::size_t n = g.size();
  std::vector<double> tot(n, 0.0);
  std::vector<std::uint32_t> size(n, 0);
  for (std::uint32_t i = 0; i < n; ++i) {
    tot[comm[i]] += g.degree[i];
    ++size[comm[i]];
  }
  std::vector<std::uint32_t> empty;
  for (std::uint32_t c = static_cast<std::uint32_t>(n); c-- > 0;) {
    if (size[c] == 0) empty.push_back(c);
  }

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0U);
  rng.shuffle(std::span<std::uint32_t>(order));

  std::vector<double> link(n, 0.0);
  std::vector<char> seen(n, 0);
  std::vector<std::uint32_t> touched;
  bool moved_any = false;
  for (;;) {
    std::size_t moves = 0;
    for (auto i : order) {
      const auto current = comm[i];
      touched.clear();
      for (const auto& [j, w] : g.adj[i]) {
        const auto c = comm[j];
        if (!seen[c]) {
          seen[c] = 1;
          touched.push_back(c);
        }
        link[c] += w;
      }
      tot[current] -= g.degree[i];
      --size[current];

      auto gain = [&](std::uint32_t c) { return g.two_m * link[c] - resolution * tot[c] * g.degree[i]; };
      std::uint32_t best = current;
      double best_gain = gain(current);
      for (auto c : touched) {
        const double candidate = gain(c);
        if (candidate > best_gain) {
          best_gain = candidate;
          best = c;
        }
      }
      if (best_gain < 0.0 && size[current] != 0) {
        // Leaving for an empty community (gain 0) beats every alternative.
        best = empty.back();
        empty.pop_back();
      }
      if (best != current && size[current] == 0) empty.push_back(current);

      tot[best] += g.degree[i];
      ++size[best];
      comm[i] = best;
      if (best != current) ++moves;
      for (auto c : touched) {
        link[c] = 0.0;
        seen[c] = 0;
      }
    }
    if (moves == 0) break;
    moved_any = true;
  }
  count = 0;
  comm = relabel_dense(comm, count);
  return moved_any;
}

}  // namespace

Partition make_partition(const FrameGraph& graph, std::span<const std::uint32_t> labels) {
  if (labels.size() != graph.node_count()) throw Error("label count does not match node count");
  Partition p;
  p.frame_index = graph.frame_index();
  p.nodes.assign(graph.nodes().begin(), graph.nodes().end());
  p.assignment = relabel_dense(labels, p.community_count);
  return p;
}

double modularity(const FrameGraph& graph, const Partition& partition, double resolution) {
  if (partition.nodes.size() != graph.node_count() ||
      !std::equal(partition.nodes.begin(), partition.nodes.end(), graph.nodes().begin())) {
    throw Error("partition does not cover exactly the graph's nodes");
  }
  if (graph.total_weight() == 0) throw Error("modularity is undefined for a graph without edges");
  const double two_m = 2.0 * static_cast<double>(graph.total_weight());
  std::vector<double> internal(partition.community_count, 0.0), tot(partition.community_count, 0.0);
  for (std::uint32_t i = 0; i < graph.node_count(); ++i) {
    const auto ci = partition.assignment[i];
    tot[ci] += static_cast<double>(graph.strength(i));
    for (const auto& nb : graph.neighbors(i)) {
      if (partition.assignment[nb.local] == ci) internal[ci] += static_cast<double>(nb.weight);
    }
  }
  double q = 0.0;
  for (std::uint32_t c = 0; c < partition.community_count; ++c) {
    q += internal[c] / two_m - resolution * (tot[c] / two_m) * (tot[c] / two_m);
  }
  return q;
}

Partition detect(const FrameGraph& graph, const DetectOptions& options) {
  const std::size_t n = graph.node_count();
  std::vector<std::uint32_t> assign(n);
  std::iota(assign.begin(), assign.end(), 0U);
  if (graph.total_weight() == 0) {
    Partition p = make_partition(graph, assign);
    p.degenerate = true;
    return p;
  }

  Rng rng(options.seed);
  const LevelGraph base = from_frame(graph);
  std::uint32_t count = static_cast<std::uint32_t>(n);
  for (;;) {
    // Multi-level phase starting from the current node-level assignment.
    LevelGraph level = coarsen(base, assign, count);
    std::vector<std::uint32_t> level_comm(level.size());
    std::iota(level_comm.begin(), level_comm.end(), 0U);
    for (;;) {
      std::uint32_t level_count = 0;
      if (!local_move(level, level_comm, level_count, rng, options.resolution)) break;
      for (auto& a : assign) a = level_comm[a];
      count = level_count;
      level = coarsen(level, level_comm, level_count);
      level_comm.resize(level.size());
      std::iota(level_comm.begin(), level_comm.end(), 0U);
    }
    // Node-level polish; a move here reopens aggregation.
    if (!local_move(base, assign, count, rng, options.resolution)) break;
  }

  Partition p = make_partition(graph, assign);
  p.modularity = modularity(graph, p, options.resolution);
  return p;
}

CommunitySeries detect_all(std::span<const FrameGraph> frames, const DetectOptions& options) {
  CommunitySeries series;
  double sum = 0.0;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    DetectOptions frame_options = options;
    frame_options.seed = mix_seed(options.seed, t);
    Partition p = detect(frames[t], frame_options);
    p.frame_index = frames[t].frame_index();
    if (!p.degenerate) {
      sum += p.modularity;
      ++series.scored_frames;
    }
    series.partitions.push_back(std::move(p));
  }
  series.degenerate = series.scored_frames == 0;
  series.mean_modularity = series.degenerate ? 0.0 : sum / static_cast<double>(series.scored_frames);
  return series;
}

void write_partition_csv(std::ostream& out, const CommunitySeries& series, const MemberRegistry& members) {
  out << "frame,member_id,community_id\n";
  for (const auto& p : series.partitions) {
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
      out << p.frame_index << ',' << members.name(p.nodes[i]) << ',' << p.assignment[i] << '\n';
    }
  }
}

}  // namespace twotier
