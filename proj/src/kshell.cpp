#include "twotier/kshell.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <queue>
#include <set>

namespace twotier {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

std::uint64_t weighted_degree(std::uint64_t degree, std::uint64_t strength) {
  const std::uint64_t product = degree * strength;
  const std::uint64_t r = isqrt(product);
  // sqrt(n) >= r + 0.5  <=>  n >= r^2 + r + 0.25  <=>  n - r^2 > r for integers.
  return product - r * r > r ? r + 1 : r;
}

std::uint64_t weighted_degree(const FrameGraph& graph, NodeId node) {
  const auto local = graph.index_of(node);
  return weighted_degree(graph.degree(local), graph.strength(local));
}

std::uint32_t ShellAssignment::shell_of(NodeId node) const {
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
  if (it == nodes.end() || *it != node) {
    throw Error("node " + std::to_string(node) + " has no shell in frame " + std::to_string(frame_index));
  }
  return shells[static_cast<std::size_t>(it - nodes.begin())];
}

ShellAssignment wks_decompose(const FrameGraph& graph) {
  const std::size_t n = graph.node_count();
  ShellAssignment out;
  out.frame_index = graph.frame_index();
  out.nodes.assign(graph.nodes().begin(), graph.nodes().end());
  out.shells.assign(n, 0);
  if (n == 0) return out;

  std::vector<std::uint64_t> degree(n), strength(n), wd(n);
  std::vector<char> removed(n, 0);
  using Entry = std::pair<std::uint64_t, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::uint32_t i = 0; i < n; ++i) {
    degree[i] = graph.degree(i);
    strength[i] = graph.strength(i);
    wd[i] = weighted_degree(degree[i], strength[i]);
    heap.emplace(wd[i], i);
  }

  // Weighted degrees only fall as nodes are removed, so the nodes pruned at a
  // level form a unique closure and removal order inside it does not matter.
  // Levels at which nothing would be pruned are skipped.
  std::uint64_t level = 0;
  std::size_t remaining = n;
  while (remaining > 0) {
    while (removed[heap.top().second] || heap.top().first != wd[heap.top().second]) heap.pop();
    level = std::max(level + 1, heap.top().first);
    while (!heap.empty() && heap.top().first <= level) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (removed[u] || d != wd[u]) continue;
      removed[u] = 1;
      out.shells[u] = static_cast<std::uint32_t>(level);
      --remaining;
      for (const auto& nb : graph.neighbors(u)) {
        const auto v = nb.local;
        if (removed[v]) continue;
        --degree[v];
        strength[v] -= nb.weight;
        const auto updated = weighted_degree(degree[v], strength[v]);
        if (updated != wd[v]) {
          wd[v] = updated;
          heap.emplace(updated, v);
        }
      }
    }
    out.max_shell = static_cast<std::uint32_t>(level);
  }
  return out;
}

InfluenceTable dynamic_influence(const DynamicNetwork& network) {
  const std::size_t members = network.members.size();
  InfluenceTable table;
  table.total.assign(members, 0);
  table.frames_active.assign(members, 0);
  table.per_frame.reserve(network.frames.size());
  for (const auto& frame : network.frames) {
    const auto shells = wks_decompose(frame);
    std::vector<std::uint32_t> row(members, 0);
    for (std::size_t i = 0; i < shells.nodes.size(); ++i) {
      const auto id = shells.nodes[i];
      row[id] = shells.shells[i];
      table.total[id] += shells.shells[i];
      ++table.frames_active[id];
    }
    table.per_frame.push_back(std::move(row));
  }
  const FrameGraph agg = aggregate(network);
  table.tiebreak_degree.assign(members, 0);
  for (std::uint32_t i = 0; i < agg.node_count(); ++i) table.tiebreak_degree[agg.nodes()[i]] = agg.degree(i);
  return table;
}

InfluenceTable static_influence(const FrameGraph& graph, std::size_t member_count) {
  InfluenceTable table;
  table.total.assign(member_count, 0);
  table.frames_active.assign(member_count, 0);
  table.tiebreak_degree.assign(member_count, 0);
  std::vector<std::uint32_t> row(member_count, 0);
  const auto shells = wks_decompose(graph);
  for (std::size_t i = 0; i < shells.nodes.size(); ++i) {
    const auto id = shells.nodes[i];
    if (id >= member_count) throw Error("node id " + std::to_string(id) + " exceeds member count");
    row[id] = shells.shells[i];
    table.total[id] = shells.shells[i];
    table.frames_active[id] = 1;
    table.tiebreak_degree[id] = graph.degree(static_cast<std::uint32_t>(i));
  }
  table.per_frame.push_back(std::move(row));
  return table;
}

std::vector<NodeId> rank_members(const InfluenceTable& table) {
  std::vector<NodeId> order(table.member_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (table.total[a] != table.total[b]) return table.total[a] > table.total[b];
    if (table.tiebreak_degree[a] != table.tiebreak_degree[b]) return table.tiebreak_degree[a] > table.tiebreak_degree[b];
    return a < b;
  });
  return order;
}

std::size_t backbone_size(std::size_t member_count, double x) {
  if (!(x > 0.0 && x <= 100.0)) throw Error("backbone percentage must lie in (0, 100], got " + format_double(x));
  // The epsilon absorbs representation error in products such as 100 * 7 / 100.
  const auto k = static_cast<std::size_t>(std::floor(static_cast<double>(member_count) * x / 100.0 + 1e-9));
  return std::max<std::size_t>(1, std::min(k, member_count));
}

BackboneSplit split_network(const DynamicNetwork& network, const NodeSet& backbone, double x) {
  BackboneSplit split;
  split.x = x;
  split.backbone = backbone;
  const std::size_t members = network.members.size();
  std::vector<char> is_bm(members, 0);
  for (auto id : backbone) {
    if (id >= members) throw Error("backbone id " + std::to_string(id) + " outside the registry");
    is_bm[id] = 1;
  }
  for (NodeId id = 0; id < members; ++id) {
    if (!is_bm[id]) split.general.push_back(id);
  }
  split.frames.reserve(network.frames.size());
  for (const auto& frame : network.frames) {
    FrameSplit fs;
    fs.bsn = restrict(frame, [&](NodeId id) { return is_bm[id] != 0; });
    fs.gsn = restrict(frame, [&](NodeId id) { return is_bm[id] == 0; });
    for (const auto& e : frame.edges()) {
      if (is_bm[e.a] != is_bm[e.b]) fs.cross_links.push_back(e);
    }
    split.frames.push_back(std::move(fs));
  }
  return split;
}

BackboneSplit select_backbone(const DynamicNetwork& network, const InfluenceTable& table, double x) {
  if (table.member_count() != network.members.size()) {
    throw Error("influence table does not match the network's member registry");
  }
  const auto order = rank_members(table);
  const auto k = backbone_size(order.size(), x);
  return split_network(network, make_node_set({order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k)}), x);
}

namespace {

std::size_t covered_count(const FrameGraph& graph, const NodeSet& seeds, std::vector<char>& mark) {
  mark.assign(graph.node_count(), 0);
  std::size_t covered = 0;
  auto touch = [&](std::uint32_t local) {
    if (!mark[local]) {
      mark[local] = 1;
      ++covered;
    }
  };
  // Walk whichever side is smaller.
  if (seeds.size() < graph.node_count()) {
    for (auto id : seeds) {
      const auto local = graph.local_index(id);
      if (!local) continue;
      touch(*local);
      for (const auto& nb : graph.neighbors(*local)) touch(nb.local);
    }
  } else {
    const auto ids = graph.nodes();
    for (std::uint32_t i = 0; i < ids.size(); ++i) {
      if (!contains(seeds, ids[i])) continue;
      touch(i);
      for (const auto& nb : graph.neighbors(i)) touch(nb.local);
    }
  }
  return covered;
}

}  // namespace

double coverage(const FrameGraph& graph, const NodeSet& seeds) {
  if (graph.empty()) throw Error("coverage of an empty graph is undefined");
  std::vector<char> mark;
  return static_cast<double>(covered_count(graph, seeds, mark)) / static_cast<double>(graph.node_count());
}

std::vector<double> frame_coverages(const DynamicNetwork& network, const NodeSet& seeds) {
  std::vector<double> out;
  out.reserve(network.frames.size());
  std::vector<char> mark;
  for (const auto& frame : network.frames) {
    if (frame.empty()) {
      out.push_back(-1.0);
      continue;
    }
    out.push_back(static_cast<double>(covered_count(frame, seeds, mark)) / static_cast<double>(frame.node_count()));
  }
  return out;
}

double coverage(const DynamicNetwork& network, const NodeSet& seeds, CoverageAggregation aggregation) {
  if (aggregation == CoverageAggregation::Mean) {
    double sum = 0.0;
    std::size_t counted = 0;
    for (double c : frame_coverages(network, seeds)) {
      if (c < 0.0) continue;
      sum += c;
      ++counted;
    }
    if (counted == 0) throw Error("coverage of a network with no populated frames is undefined");
    return sum / static_cast<double>(counted);
  }
  std::vector<char> present(network.members.size(), 0), covered(network.members.size(), 0);
  std::vector<char> mark;
  for (const auto& frame : network.frames) {
    covered_count(frame, seeds, mark);
    const auto ids = frame.nodes();
    for (std::size_t i = 0; i < ids.size(); ++i) {
      present[ids[i]] = 1;
      if (mark[i]) covered[ids[i]] = 1;
    }
  }
  const auto n = std::count(present.begin(), present.end(), 1);
  if (n == 0) throw Error("coverage of a network with no populated frames is undefined");
  return static_cast<double>(std::count(covered.begin(), covered.end(), 1)) / static_cast<double>(n);
}

std::vector<CoveragePoint> coverage_curve(const DynamicNetwork& network, RankingMethod method,
                                          std::span<const double> xs) {
  const auto format = method == RankingMethod::Dwks ? NetworkFormat::TimeFramed : NetworkFormat::Aggregate;
  return coverage_curve(network, method, format, xs);
}

std::vector<CoveragePoint> coverage_curve(const DynamicNetwork& network, RankingMethod method, NetworkFormat format,
                                          std::span<const double> xs, CoverageAggregation aggregation) {
  const FrameGraph agg = aggregate(network);
  const auto table = method == RankingMethod::Dwks ? dynamic_influence(network)
                                                    : static_influence(agg, network.members.size());
  const auto order = rank_members(table);
  std::vector<CoveragePoint> curve;
  curve.reserve(xs.size());
  for (double x : xs) {
    const auto k = backbone_size(order.size(), x);
    const auto seeds = make_node_set({order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k)});
    const double c = format == NetworkFormat::Aggregate ? coverage(agg, seeds) : coverage(network, seeds, aggregation);
    curve.push_back({x, c});
  }
  return curve;
}

ShellStatistics shell_statistics(const InfluenceTable& table) {
  std::set<std::uint64_t> values;
  std::set<std::pair<std::uint64_t, std::uint64_t>> ranks;
  for (std::size_t i = 0; i < table.member_count(); ++i) {
    values.insert(table.total[i]);
    ranks.emplace(table.total[i], table.tiebreak_degree[i]);
  }
  return {values.size(), ranks.size()};
}

void write_influence_csv(std::ostream& out, const InfluenceTable& table, const MemberRegistry& members) {
  out << "member_id,total_influence,tiebreak_degree,frames_active\n";
  for (auto id : rank_members(table)) {
    out << members.name(id) << ',' << table.total[id] << ',' << table.tiebreak_degree[id] << ','
        << table.frames_active[id] << '\n';
  }
}

}  // namespace twotier
