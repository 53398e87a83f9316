#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twotier {

/// Dense member index into a MemberRegistry. Registry order is the
/// lexicographic order of member ids, so comparing NodeIds compares ids.
using NodeId = std::uint32_t;
using Weight = std::uint64_t;
using Timestamp = std::chrono::sys_seconds;

/// Sorted, duplicate-free list of node ids.
using NodeSet = std::vector<NodeId>;

NodeSet make_node_set(std::vector<NodeId> ids);
bool contains(const NodeSet& set, NodeId id);
NodeSet set_intersection(const NodeSet& a, const NodeSet& b);

enum class ActivityType : std::uint8_t { A, B };

std::string_view to_string(ActivityType type);
std::optional<ActivityType> parse_activity_type(std::string_view text);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input row. Line numbers are 1-based and count the header.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& what);

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what);

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Shortest representation that round-trips through strtod.
std::string format_double(double value);

}  // namespace twotier
