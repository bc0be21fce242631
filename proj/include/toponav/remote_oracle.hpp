#pragma once

#include "toponav/oracle.hpp"

#include <json.hpp>

#include <string>

namespace toponav {

struct RemoteOracleConfig {
  std::string url = "http://127.0.0.1:8080";  ///< scheme://host[:port]
  std::string path = "/decide";
  std::string api_key;
  double timeout_s = 30.0;
  int retries = 2;

  /// Reads TOPONAV_ORACLE_URL, _PATH, _KEY and _TIMEOUT over the defaults.
  static RemoteOracleConfig from_env();
};

nlohmann::json request_to_json(const OracleRequest& request);
OracleRequest request_from_json(const nlohmann::json& j);

/// Strict reply parser: {"next_node": int, "direction": int, "found": 0|1}.
/// Throws MalformedReplyError or InvariantViolationError.
OracleDecision parse_decision_reply(const std::string& body, const OracleRequest& request);

/// One POST round trip. Throws TransportError, MalformedReplyError or
/// InvariantViolationError.
OracleDecision remote_decide(const OracleRequest& request, const RemoteOracleConfig& config);

/// Remote oracle with retries, falling back to scripted_decide once the
/// retries are exhausted. Never throws OracleError.
class RemoteOracle final : public DecisionOracle {
 public:
  explicit RemoteOracle(RemoteOracleConfig config) : config_(std::move(config)) {}

  OracleDecision decide(const OracleRequest& request) override;

  int failures() const { return failures_; }
  int fallbacks() const { return fallbacks_; }

 private:
  RemoteOracleConfig config_;
  int failures_ = 0;
  int fallbacks_ = 0;
};

}  // namespace toponav
