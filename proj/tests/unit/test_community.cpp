#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "twotier/community.hpp"
#include "twotier/synth.hpp"

using namespace twotier;

namespace {

std::map<NodeId, std::uint32_t> labels_of(const Partition& p) {
  std::map<NodeId, std::uint32_t> out;
  for (std::size_t i = 0; i < p.nodes.size(); ++i) out[p.nodes[i]] = p.assignment[i];
  return out;
}

FrameGraph two_cliques(std::size_t k, Weight w = 1) {
  std::vector<WeightedEdge> edges;
  for (std::size_t block = 0; block < 2; ++block) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        edges.push_back({static_cast<NodeId>(block * k + i), static_cast<NodeId>(block * k + j), w});
      }
    }
  }
  return FrameGraph(0, {}, edges);
}

Partition by_block(const FrameGraph& g, std::size_t block_size) {
  std::vector<std::uint32_t> labels;
  for (auto id : g.nodes()) labels.push_back(static_cast<std::uint32_t>(id / block_size));
  return make_partition(g, labels);
}

}  // namespace

TEST_CASE("partition labels are renumbered by first appearance") {
  const FrameGraph g(0, {}, {{0, 1, 1}, {2, 3, 1}});
  const std::vector<std::uint32_t> labels{7, 7, 3, 9};
  const auto p = make_partition(g, labels);
  CHECK(p.assignment == std::vector<std::uint32_t>{0, 0, 1, 2});
  CHECK(p.community_count == 3);
  CHECK(p.communities() == std::vector<NodeSet>{{0, 1}, {2}, {3}});
  CHECK(p.community_of(3) == 2);
  CHECK_THROWS_AS(p.community_of(4), Error);
  CHECK_THROWS_AS(make_partition(g, std::vector<std::uint32_t>{0}), Error);
}

TEST_CASE("modularity closed forms") {
  const auto g = two_cliques(5);
  CHECK(modularity(g, by_block(g, 5)) == doctest::Approx(0.5).epsilon(1e-14));
  const auto one = make_partition(g, std::vector<std::uint32_t>(10, 0));
  CHECK(std::abs(modularity(g, one)) < 1e-12);
  const auto heavy = two_cliques(5, 13);
  CHECK(std::abs(modularity(heavy, by_block(heavy, 5)) - modularity(g, by_block(g, 5))) < 1e-12);
  CHECK_THROWS_AS(modularity(FrameGraph(0, {1, 2}, {}), make_partition(FrameGraph(0, {1, 2}, {}),
                                                                         std::vector<std::uint32_t>{0, 1})),
                  Error);
}

TEST_CASE("modularity matches the double-sum oracle") {
  Rng rng(99);
  for (int trial = 0; trial < 80; ++trial) {
    const auto og = oracle::random_graph(rng, 2 + rng.below(30), 80, 7);
    if (og.edges.empty()) continue;
    const auto g = oracle::to_frame(og);
    std::vector<std::uint32_t> labels(g.node_count());
    const auto k = 1 + rng.below(5);
    for (auto& l : labels) l = static_cast<std::uint32_t>(rng.below(k));
    const auto p = make_partition(g, labels);
    for (double gamma : {0.5, 1.0, 2.0}) {
      CHECK(modularity(g, p, gamma) == doctest::Approx(oracle::modularity(og, labels_of(p), gamma)).epsilon(1e-12));
    }
  }
}

TEST_CASE("detection stays within the exhaustive optimum") {
  Rng rng(4);
  double gap = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto og = oracle::random_graph(rng, 4 + rng.below(6), 18, 4);
    if (og.edges.empty()) continue;
    const auto g = oracle::to_frame(og);
    const auto p = detect(g, {static_cast<std::uint64_t>(trial)});
    const double best = oracle::best_modularity(og);
    CHECK(p.modularity <= best + 1e-12);
    CHECK(p.modularity >= best - 0.05);
    gap = std::max(gap, best - p.modularity);
  }
  MESSAGE("largest gap to optimum: " << gap);
}

TEST_CASE("reported modularity and local optimality") {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto og = oracle::random_graph(rng, 5 + rng.below(25), 70, 5);
    if (og.edges.empty()) continue;
    const auto g = oracle::to_frame(og);
    const auto p = detect(g, {rng.next()});
    CHECK(p.modularity == doctest::Approx(modularity(g, p)).epsilon(1e-12));
    CHECK_FALSE(p.degenerate);
    // No single node can move to another (or a new) community and gain.
    for (std::uint32_t i = 0; i < g.node_count(); ++i) {
      for (std::uint32_t c = 0; c <= p.community_count; ++c) {
        if (c == p.assignment[i]) continue;
        auto labels = p.assignment;
        labels[i] = c;
        CHECK(modularity(g, make_partition(g, labels)) <= p.modularity + 1e-12);
      }
    }
  }
}

TEST_CASE("two cliques are recovered exactly") {
  const auto g = two_cliques(6);
  const auto p = detect(g);
  CHECK(p.community_count == 2);
  CHECK(p.modularity == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("planted partition is recovered") {
  const auto g = planted_partition(4, 20, 0.3, 0.01, 3);
  const auto p = detect(g, {3});
  std::size_t agree = 0, pairs = 0;
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    for (std::uint32_t j = i + 1; j < g.node_count(); ++j) {
      const bool same_truth = g.nodes()[i] / 20 == g.nodes()[j] / 20;
      const bool same_found = p.assignment[i] == p.assignment[j];
      agree += same_truth == same_found;
      ++pairs;
    }
  }
  CHECK(static_cast<double>(agree) / static_cast<double>(pairs) >= 0.95);
  CHECK(p.modularity > 0.3);
}

TEST_CASE("detection is deterministic in the seed") {
  const auto g = planted_partition(3, 15, 0.4, 0.05, 1);
  CHECK(detect(g, {17}).assignment == detect(g, {17}).assignment);
}

TEST_CASE("edgeless graphs are degenerate singletons") {
  const FrameGraph g(0, {1, 4, 6}, {});
  const auto p = detect(g);
  CHECK(p.degenerate);
  CHECK(p.community_count == 3);
  CHECK(p.modularity == 0.0);
}

TEST_CASE("series seeds per frame and averages scored frames") {
  std::vector<FrameGraph> frames{two_cliques(4), FrameGraph(1, {0, 1}, {}), planted_partition(2, 10, 0.5, 0.05, 2)};
  const auto series = detect_all(frames, {5});
  CHECK(series.scored_frames == 2);
  CHECK_FALSE(series.degenerate);
  CHECK(series.partitions[1].degenerate);
  CHECK(series.mean_modularity ==
        doctest::Approx((series.partitions[0].modularity + series.partitions[2].modularity) / 2.0));
  CHECK(series.partitions[2].assignment == detect(frames[2], {mix_seed(5, 2)}).assignment);

  const std::vector<FrameGraph> empty_only{FrameGraph(0, {}, {})};
  const auto none = detect_all(empty_only);
  CHECK(none.degenerate);
  CHECK(none.mean_modularity == 0.0);
}

TEST_CASE("partition csv") {
  const std::vector<FrameGraph> frames{FrameGraph(0, {}, {{0, 1, 1}})};
  MemberRegistry reg({"a", "b"});
  std::ostringstream out;
  write_partition_csv(out, detect_all(frames), reg);
  CHECK(out.str() == "frame,member_id,community_id\n0,a,0\n0,b,0\n");
}
