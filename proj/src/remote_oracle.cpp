#include "toponav/remote_oracle.hpp"

#include <httplib.h>

#include <cmath>
#include <cstdlib>

namespace toponav {

RemoteOracleConfig RemoteOracleConfig::from_env() {
  RemoteOracleConfig cfg;
  if (const char* v = std::getenv("TOPONAV_ORACLE_URL")) cfg.url = v;
  if (const char* v = std::getenv("TOPONAV_ORACLE_PATH")) cfg.path = v;
  if (const char* v = std::getenv("TOPONAV_ORACLE_KEY")) cfg.api_key = v;
  if (const char* v = std::getenv("TOPONAV_ORACLE_TIMEOUT")) cfg.timeout_s = std::atof(v);
  return cfg;
}

nlohmann::json request_to_json(const OracleRequest& request) {
  nlohmann::json panorama = nlohmann::json::array();
  for (const auto& h : request.panorama) {
    panorama.push_back({{"heading", h.heading}, {"classes", h.classes}, {"free_depth", h.free_depth}});
  }
  return {{"topo_text", request.topo_text},
          {"target", request.target},
          {"panorama", std::move(panorama)},
          {"history", request.history}};
}

OracleRequest request_from_json(const nlohmann::json& j) {
  OracleRequest r;
  try {
    r.topo_text = j.at("topo_text").get<std::string>();
    r.target = j.at("target").get<std::string>();
    for (const auto& h : j.at("panorama")) {
      r.panorama.push_back({h.at("heading").get<int>(), h.at("classes").get<std::vector<std::string>>(),
                            h.at("free_depth").get<double>()});
    }
    r.history = j.at("history").get<std::vector<NodeId>>();
  } catch (const nlohmann::json::exception& e) {
    throw MalformedReplyError(std::string("bad oracle request: ") + e.what());
  }
  return r;
}

OracleDecision parse_decision_reply(const std::string& body, const OracleRequest& request) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedReplyError(std::string("reply is not JSON: ") + e.what());
  }
  if (!j.is_object()) throw MalformedReplyError("reply is not a JSON object");
  for (const char* key : {"next_node", "direction", "found"}) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
      throw MalformedReplyError(std::string("reply field '") + key + "' missing or not an integer");
    }
  }
  const auto found = j["found"].get<long long>();
  if (found != 0 && found != 1) throw MalformedReplyError("reply field 'found' must be 0 or 1");

  OracleDecision d;
  d.next_node = j["next_node"].get<NodeId>();
  const auto direction = j["direction"].get<long long>();
  if (direction < 0 || direction >= request.num_headings()) {
    throw InvariantViolationError("direction " + std::to_string(direction) + " outside the panorama");
  }
  d.direction = static_cast<int>(direction);
  d.found = found == 1;
  validate_decision(d, request);
  return d;
}

OracleDecision remote_decide(const OracleRequest& request, const RemoteOracleConfig& config) {
  httplib::Client client(config.url);
  const auto sec = static_cast<time_t>(config.timeout_s);
  const auto usec = static_cast<time_t>((config.timeout_s - std::floor(config.timeout_s)) * 1e6);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);

  httplib::Headers headers;
  if (!config.api_key.empty()) headers.emplace("Authorization", "Bearer " + config.api_key);

  const auto res = client.Post(config.path, headers, request_to_json(request).dump(), "application/json");
  if (!res) throw TransportError("oracle request failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw TransportError("oracle replied HTTP " + std::to_string(res->status));
  return parse_decision_reply(res->body, request);
}

OracleDecision RemoteOracle::decide(const OracleRequest& request) {
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    try {
      return remote_decide(request, config_);
    } catch (const OracleError&) {
      ++failures_;
    }
  }
  ++fallbacks_;
  return scripted_decide(request);
}

}  // namespace toponav
