#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "twotier/common.hpp"
#include "twotier/graph.hpp"
#include "twotier/timeframe.hpp"

namespace twotier {

/// One team taking part in one activity.
struct TeamRecord {
  std::string team_id;
  std::string activity_id;
  ActivityType activity_type = ActivityType::A;
  Timestamp timestamp{};
  std::vector<std::string> members;

  friend bool operator==(const TeamRecord&, const TeamRecord&) = default;
};

/// A single team-wise link. node_a < node_b.
struct LinkRecord {
  std::string node_a;
  std::string node_b;
  std::string team_id;
  std::string activity_id;
  Timestamp timestamp{};
  ActivityType activity_type = ActivityType::A;

  friend bool operator==(const LinkRecord&, const LinkRecord&) = default;
};

/// A member's presence in a team. Teams of one produce a participation but
/// no link.
struct ParticipationRecord {
  std::string member;
  std::string team_id;
  std::string activity_id;
  Timestamp timestamp{};
  ActivityType activity_type = ActivityType::A;
};

struct ExpandedLog {
  std::vector<LinkRecord> links;
  std::vector<ParticipationRecord> participants;
};

enum class LogFormat { Csv, Jsonl };

LogFormat parse_log_format(std::string_view text);

/// Reads team records. CSV needs the header
/// `team_id,activity_id,activity_type,timestamp,members` with `;`-separated
/// members; JSONL carries the same keys with members as an array.
/// Throws ParseError with the 1-based line and offending field.
std::vector<TeamRecord> parse_log(std::istream& in, LogFormat format);
void write_log(std::ostream& out, std::span<const TeamRecord> records, LogFormat format);

/// Clique expansion: a team of m members yields m(m-1)/2 links.
ExpandedLog expand_teams(std::span<const TeamRecord> records);

ExpandedLog filter_by_type(const ExpandedLog& log, ActivityType type);

/// One FrameGraph per frame of `spec`; edge weight is the number of links
/// between the pair inside the frame. The registry is built from the log.
DynamicNetwork build_frames(const ExpandedLog& log, const FrameSpec& spec);
/// Same, indexing into an existing registry that must contain every member.
DynamicNetwork build_frames(const ExpandedLog& log, const FrameSpec& spec, const MemberRegistry& registry);

/// Smallest frame spec (month-aligned for month windows) covering every
/// record's timestamp. Throws on an empty log.
FrameSpec infer_frame_spec(std::span<const TeamRecord> records, const Window& window);

}  // namespace twotier
