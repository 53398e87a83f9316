// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "twotier/abstraction.hpp"
#include "twotier/community.hpp"
#include "twotier/evolution.hpp"
#include "twotier/kshell.hpp"
#include "twotier/report.hpp"
#include "twotier/synth.hpp"

using namespace twotier;
namespace fs = std::filesystem;

namespace {

constexpr double kModularityTol = 1e-12;
constexpr double kBetweennessTol = 1e-9;
constexpr double kKshellSeconds = 5.0;
constexpr double kCoverageSeconds = 30.0;
constexpr double kPipelineSeconds = 60.0;
constexpr double kPairAccuracy = 0.95;
constexpr double kQThreshold = 0.3;
constexpr int kPlantedRuns = 20;
constexpr int kPlantedRequired = 19;

int failures = 0;

void report(const char* name, bool ok, const std::string& detail) {
  std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <class... Args>
std::string fmt(const char* pattern, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

void kshell_oracle() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(20240601);
  std::size_t mismatches = 0, nodes = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto og = oracle::random_graph(rng, 1 + rng.below(50), 200, 1 + rng.below(20));
    const auto got = wks_decompose(oracle::to_frame(og));
    const auto expected = oracle::wks(og);
    for (std::size_t i = 0; i < got.nodes.size(); ++i) mismatches += got.shells[i] != expected.at(got.nodes[i]);
    nodes += got.nodes.size();
  }
  const double secs = seconds_since(start);
  report("kshell_oracle", mismatches == 0 && secs < kKshellSeconds,
         fmt("200 graphs, %zu nodes, %zu mismatches, %.2fs", nodes, mismatches, secs));
}

void weighted_degree_grid() {
  std::size_t bad = 0;
  for (std::uint64_t d = 0; d <= 20; ++d) {
    for (std::uint64_t s = 0; s <= 100; ++s) bad += weighted_degree(d, s) != oracle::weighted_degree(d, s);
  }
  report("weighted_degree_grid", bad == 0, fmt("21 x 101 grid, %zu mismatches", bad));
}

DynamicNetwork with_frames(const DynamicNetwork& base, const std::vector<int>& order) {
  DynamicNetwork out;
  out.members = base.members;
  for (int t : order) {
    if (t < 0) {
      out.frames.emplace_back(static_cast<int>(out.frames.size()), std::vector<NodeId>{}, std::vector<WeightedEdge>{});
    } else {
      out.frames.push_back(base.frames[static_cast<std::size_t>(t)]);
    }
  }
  return out;
}

void influence_semantics() {
  const auto net = build_frames(expand_teams(generate(small_preset(11)).records),
                                infer_frame_spec(generate(small_preset(11)).records, Window{}));
  const auto base = dynamic_influence(with_frames(net, {0, 1, 2}));
  const auto gapped = dynamic_influence(with_frames(net, {0, -1, 1, -1, 2}));
  const auto doubled = dynamic_influence(with_frames(net, {0, 1, 1, 2}));
  std::size_t bad = 0;
  for (std::size_t m = 0; m < base.member_count(); ++m) {
    bad += gapped.total[m] != base.total[m];
    bad += doubled.total[m] != base.total[m] + base.per_frame[1][m];
    bad += gapped.per_frame[1][m] != 0;
  }
  report("influence_semantics", bad == 0, fmt("%zu members, %zu violations", base.member_count(), bad));
}

bool non_decreasing(const std::vector<CoveragePoint>& curve) {
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].coverage < curve[i - 1].coverage) return false;
  }
  return true;
}

void coverage_properties() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> xs;
  for (int x = 1; x <= 50; ++x) xs.push_back(x);

  const auto records = generate(paper_preset()).records;
  const auto paper = build_frames(expand_teams(records), infer_frame_spec(records, Window{}));
  const auto inter = intermittent_network();
  bool monotone = true;
  for (const auto* net : {&paper, &inter.network}) {
    for (auto method : {RankingMethod::WksAggregate, RankingMethod::Dwks}) {
      for (auto format : {NetworkFormat::Aggregate, NetworkFormat::TimeFramed}) {
        monotone = monotone && non_decreasing(coverage_curve(*net, method, format, xs));
      }
    }
  }
  const auto dwks = coverage_curve(inter.network, RankingMethod::Dwks, xs);
  const auto wks = coverage_curve(inter.network, RankingMethod::WksAggregate, xs);
  const auto wks_framed = coverage_curve(inter.network, RankingMethod::WksAggregate, NetworkFormat::TimeFramed, xs);
  std::size_t below = 0, below_framed = 0;
  double min_gap = 1.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    below += dwks[i].coverage < wks[i].coverage;
    below_framed += dwks[i].coverage < wks_framed[i].coverage;
    min_gap = std::min(min_gap, dwks[i].coverage - wks[i].coverage);
  }
  const double secs = seconds_since(start);
  report("coverage_properties", monotone && below == 0 && below_framed == 0 && secs < kCoverageSeconds,
         fmt("monotone=%s, DWKS<WKS at %zu/50 X (same format %zu), min gap %.4f, %.2fs", monotone ? "yes" : "no",
             below, below_framed, min_gap, secs));
}

void modularity_suite() {
  std::vector<WeightedEdge> edges, heavy;
  for (NodeId block = 0; block < 2; ++block) {
    for (NodeId i = 0; i < 6; ++i) {
      for (NodeId j = i + 1; j < 6; ++j) {
        edges.push_back({block * 6 + i, block * 6 + j, 1});
        heavy.push_back({block * 6 + i, block * 6 + j, 37});
      }
    }
  }
  edges.push_back({0, 6, 1});
  heavy.push_back({0, 6, 37});
  const FrameGraph cliques(0, {}, {edges.begin(), edges.end() - 1});
  std::vector<std::uint32_t> halves(12);
  for (std::size_t i = 0; i < 12; ++i) halves[i] = static_cast<std::uint32_t>(i / 6);
  const double q_half = modularity(cliques, make_partition(cliques, halves));
  const double q_one = modularity(cliques, make_partition(cliques, std::vector<std::uint32_t>(12, 0)));
  const FrameGraph bridged(0, {}, edges), bridged_heavy(0, {}, heavy);
  const double q_scaled = std::abs(modularity(bridged, make_partition(bridged, halves)) -
                                   modularity(bridged_heavy, make_partition(bridged_heavy, halves)));

  int good_q = 0, good_pairs = 0;
  double worst_accuracy = 1.0, worst_q = 1.0;
  for (int seed = 1; seed <= kPlantedRuns; ++seed) {
    const auto g = planted_partition(4, 20, 0.3, 0.01, static_cast<std::uint64_t>(seed));
    const auto p = detect(g, {static_cast<std::uint64_t>(seed)});
    std::size_t agree = 0, pairs = 0;
    for (std::uint32_t i = 0; i < g.node_count(); ++i) {
      for (std::uint32_t j = i + 1; j < g.node_count(); ++j) {
        agree += (g.nodes()[i] / 20 == g.nodes()[j] / 20) == (p.assignment[i] == p.assignment[j]);
        ++pairs;
      }
    }
    const double accuracy = static_cast<double>(agree) / static_cast<double>(pairs);
    worst_accuracy = std::min(worst_accuracy, accuracy);
    worst_q = std::min(worst_q, p.modularity);
    good_pairs += accuracy >= kPairAccuracy;
    good_q += p.modularity > kQThreshold;
  }
  const bool ok = std::abs(q_one) < kModularityTol && std::abs(q_half - 0.5) < kModularityTol &&
                  q_scaled < kModularityTol && good_pairs >= kPlantedRequired && good_q >= kPlantedRequired;
  report("modularity", ok,
         fmt("|Q1|=%.1e, Q2-0.5=%.1e, scaling dQ=%.1e; planted: pairs>=95%% in %d/20 (min %.3f), Q>0.3 in %d/20 "
             "(min %.3f)",
             std::abs(q_one), q_half - 0.5, q_scaled, good_pairs, worst_accuracy, good_q, worst_q));
}

void evolution_events() {
  const auto script = scripted_evolution_timeline();
  const auto tl = classify(script.frames);
  using Key = std::tuple<int, std::vector<CommunityRef>, std::vector<CommunityRef>>;
  std::map<EventKind, std::multiset<Key>> got, want;
  bool attributes = true;
  for (const auto& e : tl.events) {
    got[e.kind].insert({e.frame, e.predecessors, e.successors});
    attributes = attributes && e.attribute == attribute_of(e.kind);
  }
  for (const auto& e : script.expected) want[e.kind].insert({e.frame, e.predecessors, e.successors});
  const std::map<EventKind, EventAttribute> table{
      {EventKind::Form, EventAttribute::V},     {EventKind::ReEmerge, EventAttribute::V},
      {EventKind::Continue, EventAttribute::None}, {EventKind::Grow, EventAttribute::S},
      {EventKind::Split, EventAttribute::S},    {EventKind::Merge, EventAttribute::S},
      {EventKind::Shrink, EventAttribute::S},   {EventKind::Suspend, EventAttribute::V},
      {EventKind::Dissolve, EventAttribute::V}};
  for (const auto& [kind, attr] : table) attributes = attributes && attribute_of(kind) == attr;

  bool perfect = want.size() == kEventKindCount;
  std::string worst;
  for (auto kind : kAllEventKinds) {
    std::size_t tp = 0;
    auto remaining = want[kind];
    for (const auto& k : got[kind]) {
      if (auto it = remaining.find(k); it != remaining.end()) {
        remaining.erase(it);
        ++tp;
      }
    }
    const double precision = got[kind].empty() ? 0.0 : static_cast<double>(tp) / static_cast<double>(got[kind].size());
    const double recall = want[kind].empty() ? 0.0 : static_cast<double>(tp) / static_cast<double>(want[kind].size());
    if (precision != 1.0 || recall != 1.0) {
      perfect = false;
      worst += fmt(" %s P=%.2f R=%.2f", std::string(to_string(kind)).c_str(), precision, recall);
    }
  }
  report("evolution_events", perfect && attributes,
         fmt("%zu events, 9 kinds, attribute map %s%s", tl.events.size(), attributes ? "exact" : "WRONG",
             worst.empty() ? ", P=R=1 for all kinds" : worst.c_str()));
}

void betweenness_suite() {
  Rng rng(8675309);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(20);
    const auto og = oracle::random_graph(rng, n, 2 * n, 1);
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (const auto& e : og.edges) pairs.emplace_back(e.a, e.b);
    const auto got = betweenness(n, pairs);
    const auto want = oracle::betweenness(n, pairs);
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
  }
  bool closed = true;
  for (std::uint32_t n = 3; n <= 20; ++n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> star, path, complete;
    for (std::uint32_t i = 1; i < n; ++i) star.emplace_back(0, i);
    for (std::uint32_t i = 0; i + 1 < n; ++i) path.emplace_back(i, i + 1);
    for (std::uint32_t i = 0; i < n; ++i)
      for (std::uint32_t j = i + 1; j < n; ++j) complete.emplace_back(i, j);
    const auto bs = betweenness(n, star), bp = betweenness(n, path), bc = betweenness(n, complete);
    closed = closed && bs[0] == (n - 1.0) * (n - 2.0) / 2.0;
    for (std::uint32_t i = 0; i < n; ++i) {
      closed = closed && (i == 0 || bs[i] == 0.0);
      closed = closed && bp[i] == static_cast<double>(i) * static_cast<double>(n - 1 - i);
      closed = closed && bc[i] == 0.0;
    }
  }
  report("betweenness", worst <= kBetweennessTol && closed,
         fmt("100 graphs, max |error| %.2e; star/path/complete n=3..20 %s", worst, closed ? "exact" : "WRONG"));
}

void density_suite() {
  bool ok = true;
  for (std::size_t n = 2; n <= 30; ++n) ok = ok && density(n, n * (n - 1) / 2) == 1.0;
  ok = ok && density(5, 2) == 0.2 && density(1, 0) == 0.0 && density(0, 0) == 0.0;
  report("density", ok, fmt("complete n=2..30 -> 1, (5,2) -> %.17g, N<=1 -> 0", density(5, 2)));
}

struct SplitTotals {
  double w_bbe = 0, w_gge = 0, w_bge = 0;
  double bet_bc = 0, bet_gc = 0;
  std::size_t eligible = 0, dense_core = 0;
};

SplitTotals totals(const SplitAnalysis& s) {
  SplitTotals t;
  for (const auto& m : s.metrics) {
    t.w_bbe += static_cast<double>(m.bbe_weight);
    t.w_gge += static_cast<double>(m.gge_weight);
    t.w_bge += static_cast<double>(m.bge_weight);
    t.bet_bc += m.mean_betweenness_bc;
    t.bet_gc += m.mean_betweenness_gc;
    if (m.bc_count >= 2 && m.gc_count >= 2) {
      ++t.eligible;
      t.dense_core += m.density_bc > m.density_gc;
    }
  }
  return t;
}

void core_periphery(const Analysis& a) {
  bool ok = true;
  std::string detail;
  for (const auto& xa : a.per_x) {
    const auto all = totals(xa.split("all"));
    const auto ta = totals(xa.split("A"));
    const auto tb = totals(xa.split("B"));
    const bool density_ok = all.eligible > 0 && all.dense_core == all.eligible;
    const bool betweenness_ok = all.bet_bc > all.bet_gc;
    const bool weight_ok = all.w_bbe + all.w_bge > all.w_gge;
    const bool a_ok = ta.w_bge > ta.w_bbe && ta.w_bge > ta.w_gge;
    const bool b_ok = tb.w_bbe > tb.w_bge;
    ok = ok && density_ok && betweenness_ok && weight_ok && a_ok && b_ok;
    const double wa = ta.w_bbe + ta.w_gge + ta.w_bge, wb = tb.w_bbe + tb.w_gge + tb.w_bge;
    detail += fmt("[X=%g dens %zu/%zu, btw %.1f>%.1f, A bge %.2f, B bbe %.2f>bge %.2f] ", xa.x, all.dense_core,
                  all.eligible, all.bet_bc / static_cast<double>(xa.split("all").metrics.size()),
                  all.bet_gc / static_cast<double>(xa.split("all").metrics.size()), ta.w_bge / wa, tb.w_bbe / wb,
                  tb.w_bge / wb);
  }
  report("core_periphery", ok, detail);
}

void member_profiles_check(const Analysis& a) {
  bool ok = true;
  std::string detail;
  for (const auto& xa : a.per_x) {
    const auto& bm = xa.profile.bm;
    const auto& gm = xa.profile.gm;
    const bool x_ok = bm.degree > gm.degree && bm.closeness > gm.closeness && bm.active_frames > gm.active_frames &&
                      bm.type_b > bm.type_a && gm.type_a > gm.type_b;
    ok = ok && x_ok;
    detail += fmt("[X=%g deg %.1f/%.1f clo %.3f/%.3f act %.1f/%.1f BM B/A %.1f/%.1f GM A/B %.2f/%.2f] ", xa.x,
                  bm.degree, gm.degree, bm.closeness, gm.closeness, bm.active_frames, gm.active_frames, bm.type_b,
                  bm.type_a, gm.type_a, gm.type_b);
  }
  report("member_profiles", ok, detail);
}

std::map<std::string, std::string> bundle_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[fs::relative(entry.path(), dir).generic_string()] = ss.str();
  }
  return out;
}

}  // namespace

int main() {
  kshell_oracle();
  weighted_degree_grid();
  influence_semantics();
  coverage_properties();
  modularity_suite();
  evolution_events();
  betweenness_suite();
  density_suite();

  const fs::path root = fs::temp_directory_path() / "twotier_acceptance";
  fs::remove_all(root);
  PipelineConfig config;
  config.preset = "paper";
  config.xs = {5, 10, 20};
  config.out_dir = root / "run1";
  const auto start = std::chrono::steady_clock::now();
  const auto analysis = run_pipeline(config);
  const double secs = seconds_since(start);

  core_periphery(analysis);
  member_profiles_check(analysis);

  config.out_dir = root / "run2";
  run_pipeline(config);
  const auto first = bundle_files(root / "run1");
  const auto second = bundle_files(root / "run2");
  report("end_to_end", secs < kPipelineSeconds && first == second && !first.empty(),
         fmt("%zu members, %d frames, pipeline %.2fs, %zu bundle files, repeat run %s",
             analysis.network.members.size(), analysis.network.frame_count(), secs, first.size(),
             first == second ? "identical" : "DIFFERS"));
  fs::remove_all(root);

  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
