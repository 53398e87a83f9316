#include "twotier/common.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <iterator>

namespace twotier {

NodeSet make_node_set(std::vector<NodeId> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

bool contains(const NodeSet& set, NodeId id) {
  return std::binary_search(set.begin(), set.end(), id);
}

NodeSet set_intersection(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string_view to_string(ActivityType type) {
  return type == ActivityType::A ? "A" : "B";
}

std::optional<ActivityType> parse_activity_type(std::string_view text) {
  if (text == "A") return ActivityType::A;
  if (text == "B") return ActivityType::B;
  return std::nullopt;
}

ParseError::ParseError(std::size_t line, std::string field, const std::string& what)
    : Error("line " + std::to_string(line) + ", field '" + field + "': " + what),
      line_(line),
      field_(std::move(field)) {}

ConfigError::ConfigError(std::string key, const std::string& what)
    : Error("config key '" + key + "': " + what), key_(std::move(key)) {}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf.data(), ptr);
}

}  // namespace twotier
