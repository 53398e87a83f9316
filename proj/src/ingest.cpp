#include "twotier/ingest.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <set>
#include <tuple>

#include <json.hpp>

namespace twotier {

namespace {

constexpr std::string_view kCsvHeader = "team_id,activity_id,activity_type,timestamp,members";
constexpr std::array<std::string_view, 5> kFields = {"team_id", "activity_id", "activity_type", "timestamp",
                                                     "members"};

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool field_started_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
      field_started_quoted = false;
    } else if (c == '"' && current.empty() && !field_started_quoted) {
      quoted = true;
      field_started_quoted = true;
    } else {
      current.push_back(c);
    }
  }
  if (quoted) {
    const std::size_t idx = std::min(fields.size(), kFields.size() - 1);
    throw ParseError(line_no, std::string(kFields[idx]), "unterminated quoted field");
  }
  fields.push_back(std::move(current));
  return fields;
}

std::vector<std::string> split_members(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find(';', start);
    const auto piece = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    out.emplace_back(piece);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

TeamRecord make_record(std::size_t line, std::string team_id, std::string activity_id, std::string_view type,
                       std::string_view timestamp, std::vector<std::string> members) {
  TeamRecord rec;
  if (team_id.empty()) throw ParseError(line, "team_id", "empty");
  if (activity_id.empty()) throw ParseError(line, "activity_id", "empty");
  const auto parsed_type = parse_activity_type(type);
  if (!parsed_type) throw ParseError(line, "activity_type", "expected A or B, got '" + std::string(type) + "'");
  const auto ts = parse_timestamp(timestamp);
  if (!ts) throw ParseError(line, "timestamp", "not an RFC 3339 date-time: '" + std::string(timestamp) + "'");
  if (members.empty()) throw ParseError(line, "members", "team has no members");
  std::set<std::string_view> seen;
  for (const auto& m : members) {
    if (m.empty()) throw ParseError(line, "members", "empty member id");
    if (!seen.insert(m).second) throw ParseError(line, "members", "duplicate member '" + m + "'");
  }
  rec.team_id = std::move(team_id);
  rec.activity_id = std::move(activity_id);
  rec.activity_type = *parsed_type;
  rec.timestamp = *ts;
  rec.members = std::move(members);
  return rec;
}

std::vector<TeamRecord> parse_csv(std::istream& in) {
  std::vector<TeamRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCsvHeader) throw ParseError(line_no, "header", "expected '" + std::string(kCsvHeader) + "'");
      header_seen = true;
      continue;
    }
    auto fields = split_csv_line(line, line_no);
    if (fields.size() != kFields.size()) {
      const std::size_t idx = std::min(fields.size(), kFields.size() - 1);
      throw ParseError(line_no, std::string(kFields[idx]),
                       "expected 5 fields, got " + std::to_string(fields.size()));
    }
    records.push_back(make_record(line_no, std::move(fields[0]), std::move(fields[1]), fields[2], fields[3],
                                  split_members(fields[4])));
  }
  return records;
}

std::string json_string_field(const nlohmann::json& obj, std::string_view key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(line, std::string(key), "missing");
  if (!it->is_string()) throw ParseError(line, std::string(key), "expected a string");
  return it->get<std::string>();
}

std::vector<TeamRecord> parse_jsonl(std::istream& in) {
  std::vector<TeamRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, "line", e.what());
    }
    if (!obj.is_object()) throw ParseError(line_no, "line", "expected a JSON object");
    for (const auto& [key, _] : obj.items()) {
      if (std::find(kFields.begin(), kFields.end(), key) == kFields.end()) {
        throw ParseError(line_no, key, "unknown field");
      }
    }
    auto team = json_string_field(obj, "team_id", line_no);
    auto activity = json_string_field(obj, "activity_id", line_no);
    const auto type = json_string_field(obj, "activity_type", line_no);
    const auto ts = json_string_field(obj, "timestamp", line_no);
    const auto members_it = obj.find("members");
    if (members_it == obj.end()) throw ParseError(line_no, "members", "missing");
    if (!members_it->is_array()) throw ParseError(line_no, "members", "expected an array");
    std::vector<std::string> members;
    for (const auto& m : *members_it) {
      if (!m.is_string()) throw ParseError(line_no, "members", "member ids must be strings");
      members.push_back(m.get<std::string>());
    }
    records.push_back(make_record(line_no, std::move(team), std::move(activity), type, ts, std::move(members)));
  }
  return records;
}

void write_csv_field(std::ostream& out, std::string_view value, bool force_quote) {
  const bool needs = force_quote || value.find_first_of(",\"\n") != std::string_view::npos;
  if (!needs) {
    out << value;
    return;
  }
  out << '"';
  for (char c : value) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

LogFormat parse_log_format(std::string_view text) {
  if (text == "csv" || text == "CSV") return LogFormat::Csv;
  if (text == "jsonl" || text == "JSONL") return LogFormat::Jsonl;
  throw Error("unknown log format '" + std::string(text) + "' (expected csv or jsonl)");
}

std::vector<TeamRecord> parse_log(std::istream& in, LogFormat format) {
  return format == LogFormat::Csv ? parse_csv(in) : parse_jsonl(in);
}

void write_log(std::ostream& out, std::span<const TeamRecord> records, LogFormat format) {
  if (format == LogFormat::Csv) {
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
      write_csv_field(out, r.team_id, false);
      out << ',';
      write_csv_field(out, r.activity_id, false);
      out << ',' << to_string(r.activity_type) << ',' << format_timestamp(r.timestamp) << ',';
      std::string joined;
      for (std::size_t i = 0; i < r.members.size(); ++i) {
        if (i) joined.push_back(';');
        joined += r.members[i];
      }
      write_csv_field(out, joined, true);
      out << '\n';
    }
    return;
  }
  for (const auto& r : records) {
    nlohmann::ordered_json obj;
    obj["team_id"] = r.team_id;
    obj["activity_id"] = r.activity_id;
    obj["activity_type"] = std::string(to_string(r.activity_type));
    obj["timestamp"] = format_timestamp(r.timestamp);
    obj["members"] = r.members;
    out << obj.dump() << '\n';
  }
}

ExpandedLog expand_teams(std::span<const TeamRecord> records) {
  ExpandedLog log;
  for (const auto& r : records) {
    const std::size_t m = r.members.size();
    for (std::size_t i = 0; i < m; ++i) {
      log.participants.push_back({r.members[i], r.team_id, r.activity_id, r.timestamp, r.activity_type});
      for (std::size_t j = i + 1; j < m; ++j) {
        const auto& x = r.members[i];
        const auto& y = r.members[j];
        const bool ordered = x < y;
        log.links.push_back({ordered ? x : y, ordered ? y : x, r.team_id, r.activity_id, r.timestamp,
                             r.activity_type});
      }
    }
  }
  return log;
}

ExpandedLog filter_by_type(const ExpandedLog& log, ActivityType type) {
  ExpandedLog out;
  std::copy_if(log.links.begin(), log.links.end(), std::back_inserter(out.links),
               [type](const LinkRecord& l) { return l.activity_type == type; });
  std::copy_if(log.participants.begin(), log.participants.end(), std::back_inserter(out.participants),
               [type](const ParticipationRecord& p) { return p.activity_type == type; });
  return out;
}

DynamicNetwork build_frames(const ExpandedLog& log, const FrameSpec& spec) {
  std::vector<std::string> ids;
  ids.reserve(log.participants.size());
  for (const auto& p : log.participants) ids.push_back(p.member);
  for (const auto& l : log.links) {
    ids.push_back(l.node_a);
    ids.push_back(l.node_b);
  }
  return build_frames(log, spec, MemberRegistry(std::move(ids)));
}

DynamicNetwork build_frames(const ExpandedLog& log, const FrameSpec& spec, const MemberRegistry& registry) {
  const int frames = spec.frame_count();
  if (frames <= 0) throw Error("frame spec has no frames");
  const auto span_text = "[" + format_timestamp(spec.start()) + ", " + format_timestamp(spec.end()) + ")";

  std::vector<std::vector<WeightedEdge>> edges(static_cast<std::size_t>(frames));
  for (const auto& l : log.links) {
    const auto t = spec.frame_of(l.timestamp);
    if (!t) {
      throw Error("link " + l.node_a + "-" + l.node_b + " (team " + l.team_id + ", activity " + l.activity_id +
                  ") at " + format_timestamp(l.timestamp) + " lies outside " + span_text);
    }
    edges[static_cast<std::size_t>(*t)].push_back({registry.id(l.node_a), registry.id(l.node_b), 1});
  }

  // Distinct activities per (frame, member, type).
  using Key = std::tuple<int, NodeId, ActivityType, std::string_view>;
  std::vector<Key> keys;
  keys.reserve(log.participants.size());
  for (const auto& p : log.participants) {
    const auto t = spec.frame_of(p.timestamp);
    if (!t) {
      throw Error("participant " + p.member + " (team " + p.team_id + ", activity " + p.activity_id + ") at " +
                  format_timestamp(p.timestamp) + " lies outside " + span_text);
    }
    keys.emplace_back(*t, registry.id(p.member), p.activity_type, p.activity_id);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<std::vector<std::pair<NodeId, Participation>>> participation(static_cast<std::size_t>(frames));
  for (const auto& [t, id, type, _] : keys) {
    Participation p;
    (type == ActivityType::A ? p.type_a : p.type_b) = 1;
    participation[static_cast<std::size_t>(t)].emplace_back(id, p);
  }

  DynamicNetwork net;
  net.spec = spec;
  net.members = registry;
  net.frames.reserve(static_cast<std::size_t>(frames));
  for (int t = 0; t < frames; ++t) {
    const auto idx = static_cast<std::size_t>(t);
    net.frames.emplace_back(t, std::vector<NodeId>{}, std::move(edges[idx]), std::move(participation[idx]));
  }
  return net;
}

FrameSpec infer_frame_spec(std::span<const TeamRecord> records, const Window& window) {
  if (records.empty()) throw Error("cannot infer a frame span from an empty log");
  const auto [lo, hi] = std::minmax_element(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return a.timestamp < b.timestamp;
  });
  return FrameSpec::covering(lo->timestamp, hi->timestamp, window);
}

}  // namespace twotier
