#pragma once

#include "toponav/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace toponav {

struct HeadingSummary {
  int heading = 0;
  std::vector<std::string> classes;  ///< visible class names, sorted, unique
  double free_depth = 0.0;           ///< mean horizon-band depth (m)
};

struct OracleRequest {
  std::string topo_text;
  std::string target;
  std::vector<HeadingSummary> panorama;
  std::vector<NodeId> history;

  int num_headings() const { return static_cast<int>(panorama.size()); }
  /// Throws ConfigError unless headings cover 0..n-1 exactly once.
  void validate() const;
};

struct OracleDecision {
  NodeId next_node = 0;
  int direction = 0;
  bool found = false;

  bool operator==(const OracleDecision&) const = default;
};

/// Base of every recoverable oracle failure.
class OracleError : public Error {
 public:
  using Error::Error;
};
class TransportError : public OracleError {
 public:
  using OracleError::OracleError;
};
class MalformedReplyError : public OracleError {
 public:
  using OracleError::OracleError;
};
class InvariantViolationError : public OracleError {
 public:
  using OracleError::OracleError;
};

class DecisionOracle {
 public:
  virtual ~DecisionOracle() = default;
  virtual OracleDecision decide(const OracleRequest& request) = 0;
};

/// Deterministic stand-in for the vision-language model.
///  - found: the target appears in some heading's visible classes;
///  - direction: lowest heading showing the target, else the heading with
///    the largest free depth (ties to the lowest index);
///  - next node: the current node while it reports frontiers, otherwise the
///    other node with the most frontiers, ties to the least recently visited
///    (never visited counts as least recent), then the lowest id.
/// Node attributes come from the request's topo text, so blanked fields
/// degrade the choice.
OracleDecision scripted_decide(const OracleRequest& request);

class ScriptedOracle final : public DecisionOracle {
 public:
  OracleDecision decide(const OracleRequest& request) override { return scripted_decide(request); }
};

/// Checks a decision against the request's heading count and node list.
/// Throws InvariantViolationError.
void validate_decision(const OracleDecision& decision, const OracleRequest& request);

// Room classification

using RoomTable = std::map<std::string, std::string>;  ///< class name -> room label

RoomTable default_room_table();
/// Whitespace-separated `class room` pairs, `#` comments. Throws Error on
/// unreadable files.
RoomTable load_room_table(const std::string& path);

/// Majority vote of mapped classes over all headings (ties to the
/// alphabetically first room); "unknown" when nothing maps.
std::string classify_room(const std::vector<HeadingSummary>& panorama, const RoomTable& table);

}  // namespace toponav
