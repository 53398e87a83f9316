#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twotier/common.hpp"
#include "twotier/community.hpp"

namespace twotier {

using Community = NodeSet;

enum class EventKind : std::uint8_t { Form, ReEmerge, Continue, Grow, Split, Merge, Shrink, Suspend, Dissolve };
inline constexpr std::size_t kEventKindCount = 9;
inline constexpr std::array<EventKind, kEventKindCount> kAllEventKinds = {
    EventKind::Form,  EventKind::ReEmerge, EventKind::Continue, EventKind::Grow,    EventKind::Split,
    EventKind::Merge, EventKind::Shrink,   EventKind::Suspend,  EventKind::Dissolve};

/// V: membership turnover; S: rewiring among existing members.
enum class EventAttribute : std::uint8_t { V, S, None };

EventAttribute attribute_of(EventKind kind);
std::string_view to_string(EventKind kind);
std::string_view to_string(EventAttribute attribute);

struct CommunityRef {
  int frame = 0;
  std::uint32_t index = 0;

  friend bool operator==(const CommunityRef&, const CommunityRef&) = default;
  friend auto operator<=>(const CommunityRef&, const CommunityRef&) = default;
};

/// Frame conventions: Form, ReEmerge and the transition events (Continue,
/// Grow, Shrink, Merge, Split) carry the frame where the new state is first
/// observed; Suspend and Dissolve carry the last frame the group was seen.
struct EvolutionEvent {
  EventKind kind = EventKind::Form;
  EventAttribute attribute = EventAttribute::V;
  int frame = 0;
  std::uint32_t track = 0;
  std::vector<CommunityRef> predecessors;
  std::vector<CommunityRef> successors;
  std::size_t size_before = 0;
  std::size_t size_after = 0;
};

struct MatchParams {
  double alpha = 0.5;
  double beta = 0.5;
  /// An equal-size one-to-one pair continues only at this Jaccard or above;
  /// below it the pair is treated as unmatched.
  double continue_jaccard = 0.5;
  /// Largest number of absent frames a suspended group may bridge.
  std::optional<int> max_gap;
};

struct CommunityMatch {
  std::uint32_t prev = 0;
  std::uint32_t next = 0;
  std::size_t overlap = 0;
  double prev_ratio = 0.0;  // |P & N| / |P|
  double next_ratio = 0.0;  // |P & N| / |N|
};

/// Inclusion matching: P and N match iff they share a member and
/// |P & N|/|P| >= alpha or |P & N|/|N| >= beta. Sorted by (prev, next).
std::vector<CommunityMatch> match(std::span<const Community> prev, std::span<const Community> next, double alpha,
                                  double beta);

struct TrackOccurrence {
  int frame = 0;
  std::uint32_t index = 0;
};

struct CommunityTimeline {
  std::vector<std::vector<Community>> communities;
  std::vector<std::vector<TrackOccurrence>> tracks;
  /// track_of[t][k]: track id of community k at frame t.
  std::vector<std::vector<std::uint32_t>> track_of;
  std::vector<EvolutionEvent> events;
};

/// Labels every community occurrence across consecutive frames.
/// Multi-successor/multi-predecessor matches give Split/Merge; remaining
/// one-to-one matches give Grow/Shrink/Continue by size. Unmatched groups are
/// tested against suspended tracks (ReEmerge) or counted as Form; groups with
/// no successor are Suspend if their track re-emerges later, else Dissolve.
CommunityTimeline classify(std::span<const std::vector<Community>> frames, const MatchParams& params = {});

std::vector<std::vector<Community>> communities_by_frame(const CommunitySeries& series);

struct EventShares {
  std::string group;
  std::size_t total = 0;
  std::array<std::size_t, kEventKindCount> counts{};
  /// Percentages; sum to 100 for a non-empty group.
  std::array<double, kEventKindCount> kind_percent{};
  /// Indexed by EventAttribute (V, S, None).
  std::array<double, 3> attribute_percent{};
};

struct EventGroup {
  std::string name;
  std::span<const EvolutionEvent> events;
};

/// One row per group with at least one event.
std::vector<EventShares> event_shares(std::span<const EventGroup> groups);

/// `frame,kind,attribute,track_id,predecessors,successors,size_before,size_after`;
/// community references are written `frame:index` and joined with ';'.
void write_events_csv(std::ostream& out, std::span<const EvolutionEvent> events);

}  // namespace twotier
