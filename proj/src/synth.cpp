#include "twotier/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "twotier/random.hpp"

namespace twotier {

namespace {

void check_probability(double p, const char* key) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(key, "must lie in [0, 1]");
}

std::string numbered(const char* prefix, std::size_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, n);
  return buf;
}

Timestamp default_start() { return *parse_timestamp("2015-05-01T00:00:00Z"); }

// Draws k distinct items of `pool` (k <= pool.size()); reorders pool.
template <class T>
std::vector<T> sample(std::vector<T>& pool, std::size_t k, Rng& rng) {
  k = std::min(k, pool.size());
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  return {pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k)};
}

struct Group {
  std::size_t id = 0;
  std::vector<std::size_t> members;
  std::size_t host = 0;
};

struct RawTeam {
  ActivityType type = ActivityType::A;
  std::size_t activity = 0;
  Timestamp timestamp{};
  std::vector<std::size_t> members;
};

}  // namespace

void SynthConfig::validate() const {
  if (frames < 1) throw ConfigError("frames", "must be at least 1");
  if (window.length <= 0) throw ConfigError("window", "must be positive");
  if (backbone_count < 2) throw ConfigError("backbone_count", "must be at least 2");
  if (planted_blocks < 1 || planted_blocks > backbone_count) {
    throw ConfigError("planted_blocks", "must lie in [1, backbone_count]");
  }
  if (gm_group_min < 2) throw ConfigError("gm_group_min", "must be at least 2");
  if (gm_group_max < gm_group_min) throw ConfigError("gm_group_max", "must be >= gm_group_min");
  if (general_pool_size < static_cast<std::size_t>(gm_group_min)) {
    throw ConfigError("general_pool_size", "must hold at least one group");
  }
  if (team_size_min < 2) throw ConfigError("team_size_min", "must be at least 2");
  if (team_size_max < team_size_min) throw ConfigError("team_size_max", "must be >= team_size_min");
  if (static_cast<std::size_t>(team_size_max) > backbone_count + static_cast<std::size_t>(gm_group_max) + 1) {
    throw ConfigError("team_size_max", "exceeds the members a team can draw from");
  }
  if (teams_per_frame_a > 0 && activities_per_frame_a == 0) {
    throw ConfigError("activities_per_frame_a", "must be positive when type-A teams are generated");
  }
  if (teams_per_frame_b > 0 && activities_per_frame_b == 0) {
    throw ConfigError("activities_per_frame_b", "must be positive when type-B teams are generated");
  }
  check_probability(churn_rate, "churn_rate");
  check_probability(mixing, "mixing");
  check_probability(second_host, "second_host");
  check_probability(bm_type_b_bias, "bm_type_b_bias");
  check_probability(type_b_guest, "type_b_guest");
  check_probability(cross_block, "cross_block");
  check_probability(cross_group, "cross_group");
  check_probability(bm_activity, "bm_activity");
}

SynthConfig paper_preset(std::uint64_t seed) {
  SynthConfig c;
  c.seed = seed;
  c.start = default_start();
  return c;
}

SynthConfig small_preset(std::uint64_t seed) {
  SynthConfig c;
  c.seed = seed;
  c.start = default_start();
  c.frames = 8;
  c.backbone_count = 24;
  c.general_pool_size = 40;
  c.teams_per_frame_a = 12;
  c.teams_per_frame_b = 20;
  c.activities_per_frame_a = 2;
  c.activities_per_frame_b = 5;
  c.planted_blocks = 3;
  return c;
}

SynthConfig preset_by_name(std::string_view name, std::uint64_t seed) {
  if (name == "paper") return paper_preset(seed);
  if (name == "small") return small_preset(seed);
  throw ConfigError("preset", "unknown preset '" + std::string(name) + "' (expected paper or small)");
}

SynthOutput generate(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const FrameSpec spec(config.start, advance(config.start, config.window, config.frames), config.window);
  const std::size_t bm_count = config.backbone_count;
  const std::size_t block_count = config.planted_blocks;

  std::vector<std::size_t> block_of(bm_count);
  for (std::size_t i = 0; i < bm_count; ++i) block_of[i] = i * block_count / bm_count;

  std::size_t next_member = bm_count;
  std::size_t next_group = 0;
  std::vector<Group> groups;
  std::vector<GroundTruthEvent> events;
  std::vector<RawTeam> teams;
  std::size_t next_activity = 0;

  auto random_bm = [&](const std::vector<std::size_t>& active) { return active[rng.below(active.size())]; };
  auto form_groups = [&](std::vector<std::size_t> pool, int frame, const std::vector<std::size_t>& active) {
    rng.shuffle(std::span<std::size_t>(pool));
    std::size_t i = 0;
    while (pool.size() - i >= static_cast<std::size_t>(config.gm_group_min) || (groups.empty() && i < pool.size())) {
      const auto want = static_cast<std::size_t>(rng.between(config.gm_group_min, config.gm_group_max));
      const auto take = std::min(want, pool.size() - i);
      Group g;
      g.id = next_group++;
      g.members.assign(pool.begin() + static_cast<std::ptrdiff_t>(i), pool.begin() + static_cast<std::ptrdiff_t>(i + take));
      g.host = active.empty() ? rng.below(bm_count) : random_bm(active);
      events.push_back({frame, "Form", "group", {g.id}});
      groups.push_back(std::move(g));
      i += take;
    }
    for (; i < pool.size(); ++i) groups[rng.below(groups.size())].members.push_back(pool[i]);
  };

  GroundTruth truth;
  truth.blocks.resize(static_cast<std::size_t>(config.frames));
  truth.groups.resize(static_cast<std::size_t>(config.frames));
  std::vector<std::vector<std::vector<std::size_t>>> raw_blocks(static_cast<std::size_t>(config.frames));
  std::vector<std::vector<std::vector<std::size_t>>> raw_groups(static_cast<std::size_t>(config.frames));

  for (int t = 0; t < config.frames; ++t) {
    // Backbone activity and the block layout of this frame. Every eighth
    // frame, starting at frame 3, pairs of blocks team as one and separate
    // again the next frame.
    std::vector<std::size_t> active;
    for (std::size_t b = 0; b < bm_count; ++b) {
      if (rng.bernoulli(config.bm_activity)) active.push_back(b);
    }
    if (active.size() < 2) active = {0, 1};
    std::vector<std::size_t> cluster_of_block(block_count);
    std::iota(cluster_of_block.begin(), cluster_of_block.end(), 0U);
    const bool merged = t % 8 == 3 && block_count >= 2;
    if (merged) {
      for (std::size_t b = 0; b + 1 < block_count; b += 2) {
        cluster_of_block[b + 1] = b;
        events.push_back({t, "Merge", "block", {b, b + 1}});
        if (t + 1 < config.frames) events.push_back({t + 1, "Split", "block", {b, b + 1}});
      }
    }
    std::vector<std::vector<std::size_t>> cluster(block_count);
    raw_blocks[t].resize(block_count);
    for (auto b : active) {
      cluster[cluster_of_block[block_of[b]]].push_back(b);
      raw_blocks[t][block_of[b]].push_back(b);
    }

    // General-member churn.
    if (t == 0) {
      std::vector<std::size_t> pool(config.general_pool_size);
      std::iota(pool.begin(), pool.end(), next_member);
      next_member += pool.size();
      form_groups(std::move(pool), t, active);
    } else {
      std::size_t departed = 0;
      std::vector<std::size_t> orphans;
      std::vector<Group> kept;
      for (auto& g : groups) {
        std::vector<std::size_t> stay;
        for (auto m : g.members) {
          if (rng.bernoulli(config.churn_rate)) {
            ++departed;
          } else {
            stay.push_back(m);
          }
        }
        if (stay.size() < 2) {
          orphans.insert(orphans.end(), stay.begin(), stay.end());
          events.push_back({t - 1, "Dissolve", "group", {g.id}});
          continue;
        }
        g.members = std::move(stay);
        kept.push_back(std::move(g));
      }
      groups = std::move(kept);
      std::vector<std::size_t> fresh(departed);
      std::iota(fresh.begin(), fresh.end(), next_member);
      next_member += departed;
      // Some surviving groups recruit newcomers.
      std::size_t used = 0;
      for (auto& g : groups) {
        if (used >= fresh.size() || !rng.bernoulli(0.3)) continue;
        const auto room = static_cast<std::size_t>(config.gm_group_max) - std::min(g.members.size(), static_cast<std::size_t>(config.gm_group_max));
        const auto take = std::min({room, fresh.size() - used, static_cast<std::size_t>(rng.between(1, 2))});
        for (std::size_t k = 0; k < take; ++k) g.members.push_back(fresh[used++]);
      }
      std::vector<std::size_t> pool(fresh.begin() + static_cast<std::ptrdiff_t>(used), fresh.end());
      pool.insert(pool.end(), orphans.begin(), orphans.end());
      std::sort(pool.begin(), pool.end());
      form_groups(std::move(pool), t, active);
    }

    const auto frame_start = spec.frame_start(t);
    const auto frame_span = (spec.frame_end(t) - frame_start).count();
    auto make_activities = [&](std::size_t n) {
      std::vector<std::pair<std::size_t, Timestamp>> acts;
      for (std::size_t k = 0; k < n; ++k) {
        acts.emplace_back(next_activity++,
                          frame_start + std::chrono::seconds(static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(frame_span)))));
      }
      return acts;
    };
    const auto acts_a = make_activities(config.activities_per_frame_a);
    const auto acts_b = make_activities(config.activities_per_frame_b);

    // Type-B: BM-only teams around an initiator, or one-off teams of fresh GMs.
    std::vector<std::size_t> initiators = active;
    rng.shuffle(std::span<std::size_t>(initiators));
    std::size_t next_initiator = 0;
    for (std::size_t k = 0; k < config.teams_per_frame_b; ++k) {
      RawTeam team;
      team.type = ActivityType::B;
      const auto& act = acts_b[rng.below(acts_b.size())];
      team.activity = act.first;
      team.timestamp = act.second;
      if (rng.bernoulli(config.bm_type_b_bias)) {
        const auto lead = next_initiator < initiators.size() ? initiators[next_initiator++] : random_bm(active);
        std::vector<std::size_t> pool;
        if (rng.bernoulli(config.cross_block)) {
          pool = active;
        } else {
          pool = cluster[cluster_of_block[block_of[lead]]];
        }
        std::erase(pool, lead);
        if (pool.empty()) {
          pool = active;
          std::erase(pool, lead);
        }
        const auto size = static_cast<std::size_t>(rng.between(config.team_size_min, config.team_size_max));
        team.members = sample(pool, size - 1, rng);
        team.members.push_back(lead);
        if (!groups.empty() && rng.bernoulli(config.type_b_guest)) {
          const auto& gm = groups[rng.below(groups.size())].members;
          team.members.push_back(gm[rng.below(gm.size())]);
        }
      } else {
        const auto size = static_cast<std::size_t>(rng.between(config.team_size_min, std::min(config.team_size_max, 4)));
        for (std::size_t i = 0; i < size; ++i) team.members.push_back(next_member++);
      }
      teams.push_back(std::move(team));
    }

    // Type-A: a GM group, usually hosted by one BM.
    std::vector<std::size_t> order(groups.size());
    std::iota(order.begin(), order.end(), 0U);
    rng.shuffle(std::span<std::size_t>(order));
    std::vector<char> teamed(groups.size(), 0);
    for (std::size_t k = 0; k < config.teams_per_frame_a; ++k) {
      const auto gi = k < order.size() ? order[k] : static_cast<std::size_t>(rng.below(groups.size()));
      auto& g = groups[gi];
      teamed[gi] = 1;
      RawTeam team;
      team.type = ActivityType::A;
      const auto& act = acts_a[rng.below(acts_a.size())];
      team.activity = act.first;
      team.timestamp = act.second;
      auto size = static_cast<std::size_t>(rng.between(config.team_size_min, config.team_size_max));
      if (rng.bernoulli(config.mixing)) {
        if (std::find(active.begin(), active.end(), g.host) == active.end()) g.host = random_bm(active);
        team.members.push_back(g.host);
        if (rng.bernoulli(config.second_host)) {
          auto others = active;
          std::erase(others, g.host);
          if (!others.empty()) team.members.push_back(others[rng.below(others.size())]);
        }
      }
      const auto hosts = team.members.size();
      const auto gm_count = std::max<std::size_t>(size > hosts ? size - hosts : 1, hosts == 0 ? 2 : 1);
      auto pool = g.members;
      for (auto m : sample(pool, gm_count, rng)) team.members.push_back(m);
      if (groups.size() > 1 && rng.bernoulli(config.cross_group)) {
        auto other = static_cast<std::size_t>(rng.below(groups.size() - 1));
        if (other >= gi) ++other;
        const auto& om = groups[other].members;
        team.members.push_back(om[rng.below(om.size())]);
      }
      teams.push_back(std::move(team));
    }
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      if (teamed[gi]) raw_groups[t].push_back(groups[gi].members);
    }
  }

  // Opaque member ids: a seeded permutation of m00000..
  const std::size_t member_count = next_member;
  std::vector<std::size_t> perm(member_count);
  std::iota(perm.begin(), perm.end(), 0U);
  rng.shuffle(std::span<std::size_t>(perm));
  auto name = [&](std::size_t m) { return numbered("m", perm[m], 5); };
  auto names = [&](const std::vector<std::size_t>& ms) {
    std::vector<std::string> out;
    for (auto m : ms) out.push_back(name(m));
    std::sort(out.begin(), out.end());
    return out;
  };

  SynthOutput result;
  result.records.reserve(teams.size());
  for (std::size_t k = 0; k < teams.size(); ++k) {
    TeamRecord r;
    r.team_id = numbered("t", k, 5);
    r.activity_id = numbered(teams[k].type == ActivityType::A ? "a" : "b", teams[k].activity, 4);
    r.activity_type = teams[k].type;
    r.timestamp = teams[k].timestamp;
    r.members = names(teams[k].members);
    result.records.push_back(std::move(r));
  }
  std::sort(result.records.begin(), result.records.end(), [](const TeamRecord& a, const TeamRecord& b) {
    return std::tie(a.timestamp, a.team_id) < std::tie(b.timestamp, b.team_id);
  });

  truth.prng = std::string(Rng::kAlgorithm);
  truth.seed = config.seed;
  std::vector<std::pair<std::string, std::size_t>> bms;
  for (std::size_t b = 0; b < bm_count; ++b) bms.emplace_back(name(b), block_of[b]);
  std::sort(bms.begin(), bms.end());
  for (auto& [n, blk] : bms) {
    truth.backbone.push_back(n);
    truth.block_of.push_back(blk);
  }
  for (int t = 0; t < config.frames; ++t) {
    for (const auto& blk : raw_blocks[t]) truth.blocks[t].push_back(names(blk));
    for (const auto& grp : raw_groups[t]) truth.groups[t].push_back(names(grp));
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const GroundTruthEvent& a, const GroundTruthEvent& b) { return a.frame < b.frame; });
  truth.events = std::move(events);
  result.truth = std::move(truth);
  return result;
}

void write_ground_truth(std::ostream& out, const GroundTruth& truth, const SynthConfig& config) {
  nlohmann::ordered_json j;
  j["prng"] = truth.prng;
  j["seed"] = truth.seed;
  j["frames"] = config.frames;
  j["window"] = config.window.to_string();
  j["start"] = format_timestamp(config.start);
  j["backbone"] = truth.backbone;
  j["block_of"] = truth.block_of;
  j["blocks"] = truth.blocks;
  j["groups"] = truth.groups;
  auto events = nlohmann::ordered_json::array();
  for (const auto& e : truth.events) {
    nlohmann::ordered_json row;
    row["frame"] = e.frame;
    row["kind"] = e.kind;
    row["subject"] = e.subject;
    row["ids"] = e.ids;
    events.push_back(std::move(row));
  }
  j["events"] = std::move(events);
  out << j.dump(1) << '\n';
}

FrameGraph planted_partition(std::size_t blocks, std::size_t nodes_per_block, double p_in, double p_out,
                             std::uint64_t seed) {
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0)) {
    throw Error("planted partition needs 0 <= p_out < p_in <= 1");
  }
  Rng rng(seed);
  const auto n = static_cast<NodeId>(blocks * nodes_per_block);
  std::vector<NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), 0U);
  std::vector<WeightedEdge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      const bool same = i / nodes_per_block == j / nodes_per_block;
      if (rng.bernoulli(same ? p_in : p_out)) edges.push_back({i, j, 1});
    }
  }
  return FrameGraph(0, std::move(nodes), std::move(edges));
}

IntermittentNetwork intermittent_network(int frames, std::size_t core_count, std::size_t burst_size,
                                         Weight burst_repeats, std::uint64_t seed) {
  if (frames < 1 || core_count == 0 || burst_size < 2 || burst_repeats == 0) {
    throw Error("intermittent network needs frames >= 1, a core, a burst of 2+ and repeats >= 1");
  }
  Rng rng(seed);
  const Timestamp start = default_start();
  const Window day{86400, WindowUnit::Seconds};
  std::vector<TeamRecord> records;
  std::size_t next = 0;
  std::vector<std::string> core_names, burst_names;
  // Names are shuffled so that id order carries no role information.
  const std::size_t total = core_count + static_cast<std::size_t>(frames) * (2 * core_count + burst_size);
  std::vector<std::size_t> perm(total);
  std::iota(perm.begin(), perm.end(), 0U);
  rng.shuffle(std::span<std::size_t>(perm));
  auto fresh = [&] { return numbered("n", perm[next++], 5); };
  for (std::size_t c = 0; c < core_count; ++c) core_names.push_back(fresh());
  std::size_t team = 0;
  for (int t = 0; t < frames; ++t) {
    const Timestamp ts = advance(start, day, t) + std::chrono::hours(12);
    for (const auto& c : core_names) {
      records.push_back({numbered("t", team++, 5), numbered("a", static_cast<std::size_t>(t), 3), ActivityType::B, ts,
                         {c, fresh(), fresh()}});
    }
    std::vector<std::string> clique;
    for (std::size_t k = 0; k < burst_size; ++k) clique.push_back(fresh());
    burst_names.insert(burst_names.end(), clique.begin(), clique.end());
    for (Weight r = 0; r < burst_repeats; ++r) {
      records.push_back({numbered("t", team++, 5), numbered("a", static_cast<std::size_t>(t), 3), ActivityType::A, ts,
                         clique});
    }
  }
  for (auto& r : records) std::sort(r.members.begin(), r.members.end());
  const FrameSpec spec(start, advance(start, day, frames), day);
  IntermittentNetwork out;
  out.network = build_frames(expand_teams(records), spec);
  std::vector<NodeId> core, burst;
  for (const auto& n : core_names) core.push_back(out.network.members.id(n));
  for (const auto& n : burst_names) burst.push_back(out.network.members.id(n));
  out.core = make_node_set(std::move(core));
  out.burst = make_node_set(std::move(burst));
  return out;
}

namespace {

Community range(NodeId lo, NodeId hi) {
  Community c;
  for (NodeId i = lo; i <= hi; ++i) c.push_back(i);
  return c;
}

Community join(Community a, const Community& b) {
  a.insert(a.end(), b.begin(), b.end());
  return make_node_set(std::move(a));
}

}  // namespace

ScriptedTimeline scripted_evolution_timeline() {
  const Community a = range(1, 10), b = range(11, 20), c = range(21, 30), d = range(31, 40);
  const Community recruits = range(101, 105);
  const Community b_grown = join(b, recruits);
  const Community c1 = range(21, 25), c2 = range(26, 30), c1_small = range(21, 23);
  const Community ab = join(a, b_grown);
  const Community a_late = join(a, recruits);
  const Community g = range(201, 205), g_grown = range(201, 208);
  const Community d_small = range(31, 36), h = range(301, 306);
  const Community dh = join(d_small, h);
  const Community a_final = join(a_late, range(401, 403));
  const Community b_final = range(11, 17);

  ScriptedTimeline s;
  s.frames = {
      {a, b, c, d},                 // 0
      {a, b_grown, c1, c2},         // 1: a continues, b grows, c splits, d absent
      {ab, c1_small, c2, d, g},     // 2: merge, shrink, continue, re-emerge, form
      {ab, c1_small, d, g},         // 3: c2 gone for good
      {a_late, b, c1_small, d_small, g_grown},  // 4: split, continue, shrink, grow
      {a_late, b, d_small, h},      // 5: g away, c1 gone, h forms
      {a_late, b, g_grown, dh},     // 6: g re-emerges, d and h merge
      {a_final, b_final, g_grown, dh},  // 7: grow, shrink, continue, continue
  };

  using K = EventKind;
  auto ev = [&](K kind, int frame, std::vector<CommunityRef> preds, std::vector<CommunityRef> succs) {
    EvolutionEvent e;
    e.kind = kind;
    e.attribute = attribute_of(kind);
    e.frame = frame;
    e.predecessors = std::move(preds);
    e.successors = std::move(succs);
    s.expected.push_back(std::move(e));
  };
  for (std::uint32_t k = 0; k < 4; ++k) ev(K::Form, 0, {}, {{0, k}});
  ev(K::Suspend, 0, {{0, 3}}, {});
  ev(K::Continue, 1, {{0, 0}}, {{1, 0}});
  ev(K::Grow, 1, {{0, 1}}, {{1, 1}});
  ev(K::Split, 1, {{0, 2}}, {{1, 2}, {1, 3}});
  ev(K::Merge, 2, {{1, 0}, {1, 1}}, {{2, 0}});
  ev(K::Shrink, 2, {{1, 2}}, {{2, 1}});
  ev(K::Continue, 2, {{1, 3}}, {{2, 2}});
  ev(K::ReEmerge, 2, {{0, 3}}, {{2, 3}});
  ev(K::Form, 2, {}, {{2, 4}});
  ev(K::Dissolve, 2, {{2, 2}}, {});
  for (std::uint32_t k = 0; k < 4; ++k) {
    const std::uint32_t from = k < 2 ? k : k + 1;  // ab, c1_small, d, g
    ev(K::Continue, 3, {{2, from}}, {{3, k}});
  }
  ev(K::Split, 4, {{3, 0}}, {{4, 0}, {4, 1}});
  ev(K::Continue, 4, {{3, 1}}, {{4, 2}});
  ev(K::Shrink, 4, {{3, 2}}, {{4, 3}});
  ev(K::Grow, 4, {{3, 3}}, {{4, 4}});
  ev(K::Suspend, 4, {{4, 4}}, {});
  ev(K::Dissolve, 4, {{4, 2}}, {});
  ev(K::Continue, 5, {{4, 0}}, {{5, 0}});
  ev(K::Continue, 5, {{4, 1}}, {{5, 1}});
  ev(K::Continue, 5, {{4, 3}}, {{5, 2}});
  ev(K::Form, 5, {}, {{5, 3}});
  ev(K::Continue, 6, {{5, 0}}, {{6, 0}});
  ev(K::Continue, 6, {{5, 1}}, {{6, 1}});
  ev(K::ReEmerge, 6, {{4, 4}}, {{6, 2}});
  ev(K::Merge, 6, {{5, 2}, {5, 3}}, {{6, 3}});
  ev(K::Grow, 7, {{6, 0}}, {{7, 0}});
  ev(K::Shrink, 7, {{6, 1}}, {{7, 1}});
  ev(K::Continue, 7, {{6, 2}}, {{7, 2}});
  ev(K::Continue, 7, {{6, 3}}, {{7, 3}});
  for (auto& e : s.expected) {
    std::size_t before = 0, after = 0;
    for (const auto& r : e.predecessors) before += s.frames[r.frame][r.index].size();
    for (const auto& r : e.successors) after += s.frames[r.frame][r.index].size();
    e.size_before = before;
    e.size_after = after;
  }
  return s;
}

}  // namespace twotier
