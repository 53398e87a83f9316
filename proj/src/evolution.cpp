#include "twotier/evolution.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_map>

namespace twotier {

EventAttribute attribute_of(EventKind kind) {
  switch (kind) {
    case EventKind::Form:
    case EventKind::ReEmerge:
    case EventKind::Suspend:
    case EventKind::Dissolve:
      return EventAttribute::V;
    case EventKind::Grow:
    case EventKind::Split:
    case EventKind::Merge:
    case EventKind::Shrink:
      return EventAttribute::S;
    case EventKind::Continue:
      return EventAttribute::None;
  }
  return EventAttribute::None;
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Form: return "Form";
    case EventKind::ReEmerge: return "ReEmerge";
    case EventKind::Continue: return "Continue";
    case EventKind::Grow: return "Grow";
    case EventKind::Split: return "Split";
    case EventKind::Merge: return "Merge";
    case EventKind::Shrink: return "Shrink";
    case EventKind::Suspend: return "Suspend";
    case EventKind::Dissolve: return "Dissolve";
  }
  return "?";
}

std::string_view to_string(EventAttribute attribute) {
  switch (attribute) {
    case EventAttribute::V: return "V";
    case EventAttribute::S: return "S";
    case EventAttribute::None: return "none";
  }
  return "?";
}

namespace {

bool passes(std::size_t overlap, std::size_t prev_size, std::size_t next_size, double alpha, double beta) {
  if (overlap == 0) return false;
  const double o = static_cast<double>(overlap);
  return o / static_cast<double>(prev_size) >= alpha || o / static_cast<double>(next_size) >= beta;
}

}  // namespace

std::vector<CommunityMatch> match(std::span<const Community> prev, std::span<const Community> next, double alpha,
                                  double beta) {
  if (!(alpha > 0.0 && alpha <= 1.0) || !(beta > 0.0 && beta <= 1.0)) {
    throw Error("match thresholds must lie in (0, 1]");
  }
  std::unordered_map<NodeId, std::uint32_t> owner;
  for (std::uint32_t p = 0; p < prev.size(); ++p) {
    for (auto id : prev[p]) owner.emplace(id, p);
  }
  std::vector<CommunityMatch> out;
  std::unordered_map<std::uint32_t, std::size_t> overlap;
  for (std::uint32_t n = 0; n < next.size(); ++n) {
    overlap.clear();
    for (auto id : next[n]) {
      if (auto it = owner.find(id); it != owner.end()) ++overlap[it->second];
    }
    for (const auto& [p, o] : overlap) {
      if (!passes(o, prev[p].size(), next[n].size(), alpha, beta)) continue;
      out.push_back({p, n, o, static_cast<double>(o) / static_cast<double>(prev[p].size()),
                     static_cast<double>(o) / static_cast<double>(next[n].size())});
    }
  }
  std::sort(out.begin(), out.end(), [](const CommunityMatch& a, const CommunityMatch& b) {
    return std::tie(a.prev, a.next) < std::tie(b.prev, b.next);
  });
  return out;
}

CommunityTimeline classify(std::span<const std::vector<Community>> frames, const MatchParams& params) {
  CommunityTimeline tl;
  tl.communities.assign(frames.begin(), frames.end());
  const int frame_count = static_cast<int>(frames.size());
  if (frame_count == 0) return tl;
  const auto& comms = tl.communities;

  // succ[t][p]: matches of community p at t into t+1; pred[t][n]: into n at t from t-1.
  std::vector<std::vector<std::vector<CommunityMatch>>> succ(frames.size()), pred(frames.size());
  for (int t = 0; t < frame_count; ++t) {
    succ[t].resize(comms[t].size());
    pred[t].resize(comms[t].size());
  }
  for (int t = 0; t + 1 < frame_count; ++t) {
    auto matches = match(comms[t], comms[t + 1], params.alpha, params.beta);
    std::vector<std::size_t> out_deg(comms[t].size(), 0), in_deg(comms[t + 1].size(), 0);
    for (const auto& m : matches) {
      ++out_deg[m.prev];
      ++in_deg[m.next];
    }
    for (const auto& m : matches) {
      const auto ps = comms[t][m.prev].size();
      const auto ns = comms[t + 1][m.next].size();
      if (out_deg[m.prev] == 1 && in_deg[m.next] == 1 && ps == ns) {
        const double jaccard = static_cast<double>(m.overlap) / static_cast<double>(ps + ns - m.overlap);
        if (jaccard < params.continue_jaccard) continue;
      }
      succ[t][m.prev].push_back(m);
      pred[t + 1][m.next].push_back(m);
    }
  }

  auto size_of = [&](const std::vector<CommunityRef>& refs) {
    std::size_t s = 0;
    for (const auto& r : refs) s += comms[r.frame][r.index].size();
    return s;
  };
  auto emit = [&](EventKind kind, int frame, std::uint32_t track, std::vector<CommunityRef> preds,
                  std::vector<CommunityRef> succs) {
    EvolutionEvent e;
    e.kind = kind;
    e.attribute = attribute_of(kind);
    e.frame = frame;
    e.track = track;
    e.size_before = size_of(preds);
    e.size_after = size_of(succs);
    e.predecessors = std::move(preds);
    e.successors = std::move(succs);
    tl.events.push_back(std::move(e));
  };
  // Best successor: largest overlap, ties to the smaller index.
  auto best_successor = [](const std::vector<CommunityMatch>& ms) {
    const CommunityMatch* best = &ms.front();
    for (const auto& m : ms) {
      if (m.overlap > best->overlap || (m.overlap == best->overlap && m.next < best->next)) best = &m;
    }
    return best->next;
  };

  tl.track_of.resize(frames.size());
  auto new_track = [&](int t, std::uint32_t k) {
    const auto id = static_cast<std::uint32_t>(tl.tracks.size());
    tl.tracks.push_back({{t, k}});
    return id;
  };
  auto extend_track = [&](std::uint32_t track, int t, std::uint32_t k) { tl.tracks[track].push_back({t, k}); };

  for (std::uint32_t k = 0; k < comms[0].size(); ++k) {
    const auto track = new_track(0, k);
    tl.track_of[0].push_back(track);
    emit(EventKind::Form, 0, track, {}, {{0, k}});
  }

  for (int t = 0; t + 1 < frame_count; ++t) {
    const int nt = t + 1;
    const auto& next = comms[nt];
    tl.track_of[nt].assign(next.size(), UINT32_MAX);

    // Track threading: each predecessor hands its track to its best successor;
    // when several hand to the same successor the largest overlap wins.
    std::vector<const CommunityMatch*> heir(next.size(), nullptr);
    for (std::uint32_t p = 0; p < comms[t].size(); ++p) {
      if (succ[t][p].empty()) continue;
      const auto n = best_successor(succ[t][p]);
      const CommunityMatch* m = nullptr;
      for (const auto& cand : succ[t][p]) {
        if (cand.next == n) m = &cand;
      }
      if (!heir[n] || m->overlap > heir[n]->overlap || (m->overlap == heir[n]->overlap && m->prev < heir[n]->prev)) {
        heir[n] = m;
      }
    }

    std::vector<std::uint32_t> unmatched;
    for (std::uint32_t n = 0; n < next.size(); ++n) {
      const auto& preds = pred[nt][n];
      if (preds.empty()) {
        unmatched.push_back(n);
        continue;
      }
      const auto track = heir[n] ? tl.track_of[t][heir[n]->prev] : new_track(nt, n);
      if (heir[n]) extend_track(track, nt, n);
      tl.track_of[nt][n] = track;

      if (preds.size() >= 2) {
        std::vector<CommunityRef> refs;
        for (const auto& m : preds) refs.push_back({t, m.prev});
        emit(EventKind::Merge, nt, track, std::move(refs), {{nt, n}});
        continue;
      }
      const auto p = preds.front().prev;
      if (succ[t][p].size() >= 2) continue;  // reported once by the Split below
      const auto ps = comms[t][p].size();
      const auto ns = next[n].size();
      const auto kind = ns > ps ? EventKind::Grow : ns < ps ? EventKind::Shrink : EventKind::Continue;
      emit(kind, nt, track, {{t, p}}, {{nt, n}});
    }

    for (std::uint32_t p = 0; p < comms[t].size(); ++p) {
      if (succ[t][p].size() < 2) continue;
      std::vector<CommunityRef> refs;
      for (const auto& m : succ[t][p]) refs.push_back({nt, m.next});
      emit(EventKind::Split, nt, tl.track_of[t][p], {{t, p}}, std::move(refs));
    }

    // Re-emergence: unmatched groups against tracks whose last occurrence had
    // no successor and lies before frame t.
    struct Candidate {
      std::size_t overlap;
      int last_frame;
      std::uint32_t next;
      std::uint32_t track;
    };
    std::vector<Candidate> candidates;
    for (std::uint32_t track = 0; track < tl.tracks.size(); ++track) {
      const auto last = tl.tracks[track].back();
      if (last.frame >= t || !succ[last.frame][last.index].empty()) continue;
      const int gap = nt - last.frame - 1;
      if (params.max_gap && gap > *params.max_gap) continue;
      const auto& old = comms[last.frame][last.index];
      for (auto n : unmatched) {
        const auto overlap = set_intersection(old, next[n]).size();
        if (passes(overlap, old.size(), next[n].size(), params.alpha, params.beta)) {
          candidates.push_back({overlap, last.frame, n, track});
        }
      }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.overlap != b.overlap) return a.overlap > b.overlap;
      if (a.last_frame != b.last_frame) return a.last_frame > b.last_frame;
      if (a.next != b.next) return a.next < b.next;
      return a.track < b.track;
    });
    std::vector<char> track_taken(tl.tracks.size(), 0);
    for (const auto& c : candidates) {
      if (track_taken[c.track] || tl.track_of[nt][c.next] != UINT32_MAX) continue;
      track_taken[c.track] = 1;
      const auto last = tl.tracks[c.track].back();
      extend_track(c.track, nt, c.next);
      tl.track_of[nt][c.next] = c.track;
      emit(EventKind::ReEmerge, nt, c.track, {{last.frame, last.index}}, {{nt, c.next}});
    }
    for (auto n : unmatched) {
      if (tl.track_of[nt][n] != UINT32_MAX) continue;
      const auto track = new_track(nt, n);
      tl.track_of[nt][n] = track;
      emit(EventKind::Form, nt, track, {}, {{nt, n}});
    }
  }

  // Exits without a successor: Suspend when the track shows up again later.
  for (int t = 0; t + 1 < frame_count; ++t) {
    for (std::uint32_t p = 0; p < comms[t].size(); ++p) {
      if (!succ[t][p].empty()) continue;
      const auto track = tl.track_of[t][p];
      const auto& occ = tl.tracks[track];
      const bool resumes = occ.back().frame > t;
      emit(resumes ? EventKind::Suspend : EventKind::Dissolve, t, track, {{t, p}}, {});
    }
  }

  std::stable_sort(tl.events.begin(), tl.events.end(), [](const EvolutionEvent& a, const EvolutionEvent& b) {
    if (a.frame != b.frame) return a.frame < b.frame;
    if (a.kind != b.kind) return a.kind < b.kind;
    const auto& ra = a.successors.empty() ? a.predecessors : a.successors;
    const auto& rb = b.successors.empty() ? b.predecessors : b.successors;
    return ra < rb;
  });
  return tl;
}

std::vector<std::vector<Community>> communities_by_frame(const CommunitySeries& series) {
  std::vector<std::vector<Community>> out;
  out.reserve(series.partitions.size());
  for (const auto& p : series.partitions) out.push_back(p.communities());
  return out;
}

std::vector<EventShares> event_shares(std::span<const EventGroup> groups) {
  std::vector<EventShares> table;
  for (const auto& g : groups) {
    if (g.events.empty()) continue;
    EventShares row;
    row.group = g.name;
    row.total = g.events.size();
    std::array<std::size_t, 3> attr{};
    for (const auto& e : g.events) {
      ++row.counts[static_cast<std::size_t>(e.kind)];
      ++attr[static_cast<std::size_t>(e.attribute)];
    }
    const double total = static_cast<double>(row.total);
    for (std::size_t k = 0; k < kEventKindCount; ++k) row.kind_percent[k] = 100.0 * static_cast<double>(row.counts[k]) / total;
    for (std::size_t a = 0; a < 3; ++a) row.attribute_percent[a] = 100.0 * static_cast<double>(attr[a]) / total;
    table.push_back(std::move(row));
  }
  return table;
}

namespace {

void write_refs(std::ostream& out, const std::vector<CommunityRef>& refs) {
  for (std::size_t i = 0; i < refs.size(); ++i) {
    if (i) out << ';';
    out << refs[i].frame << ':' << refs[i].index;
  }
}

}  // namespace

void write_events_csv(std::ostream& out, std::span<const EvolutionEvent> events) {
  out << "frame,kind,attribute,track_id,predecessors,successors,size_before,size_after\n";
  for (const auto& e : events) {
    out << e.frame << ',' << to_string(e.kind) << ',' << to_string(e.attribute) << ',' << e.track << ',';
    write_refs(out, e.predecessors);
    out << ',';
    write_refs(out, e.successors);
    out << ',' << e.size_before << ',' << e.size_after << '\n';
  }
}

}  // namespace twotier
