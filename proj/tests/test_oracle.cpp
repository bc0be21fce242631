#include <doctest.h>

#include "oracles.hpp"

#include "toponav/oracle.hpp"
#include "toponav/remote_oracle.hpp"

#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

using namespace toponav;

namespace {

std::string node_line(NodeId id, double x, double y, long frontiers) {
  std::ostringstream os;
  os << "NODE " << id << " pos=(" << x << ".00," << y << ".00) room=unknown objects=[]";
  if (frontiers >= 0) os << " frontiers=" << frontiers;
  os << '\n';
  return os.str();
}

OracleRequest base_request() {
  OracleRequest r;
  r.topo_text = node_line(1, 0, 0, 0) + node_line(2, 3, 0, 5) + "HISTORY 1\nCURRENT 1\nTARGET bed\n";
  r.target = "bed";
  for (int h = 0; h < 4; ++h) r.panorama.push_back({h, {}, 1.0 + h});
  r.history = {1};
  return r;
}

// Minimal decision endpoint on an ephemeral port.
class StubServer {
 public:
  explicit StubServer(std::function<void(const httplib::Request&, httplib::Response&)> handler) {
    server_.Post("/decide", std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~StubServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("scripted: target visible") {
    auto r = base_request();
    r.panorama[2].classes = {"bed", "lamp"};
    r.panorama[3].classes = {"bed"};
    const auto d = scripted_decide(r);
    CHECK(d.found);
    CHECK(d.direction == 2);
    CHECK(d.next_node == 2);  // current node has no frontiers
  }

  TEST_CASE("scripted: deepest heading, current node keeps frontiers") {
    auto r = base_request();
    r.topo_text = node_line(1, 0, 0, 3) + node_line(2, 3, 0, 5) + "HISTORY 1\nCURRENT 1\nTARGET bed\n";
    r.panorama[1].free_depth = 9.0;
    r.panorama[3].free_depth = 9.0;
    const auto d = scripted_decide(r);
    CHECK_FALSE(d.found);
    CHECK(d.direction == 1);
    CHECK(d.next_node == 1);
  }

  TEST_CASE("scripted: recency breaks frontier ties") {
    auto r = base_request();
    r.topo_text = node_line(1, 0, 0, 0) + node_line(2, 3, 0, 4) + node_line(3, 6, 0, 4) +
                  "HISTORY 2,1\nCURRENT 1\nTARGET bed\n";
    r.history = {2, 1};
    CHECK(scripted_decide(r).next_node == 3);
    r.history = {3, 2, 1};
    r.topo_text = node_line(1, 0, 0, 0) + node_line(2, 3, 0, 4) + node_line(3, 6, 0, 4) +
                  "HISTORY 3,2,1\nCURRENT 1\nTARGET bed\n";
    CHECK(scripted_decide(r).next_node == 3);
  }

  TEST_CASE("scripted: hidden frontiers count as zero") {
    auto r = base_request();
    r.topo_text = node_line(1, 0, 0, -1) + node_line(2, 3, 0, -1) + "HISTORY 1\nCURRENT 1\nTARGET bed\n";
    CHECK(scripted_decide(r).next_node == 2);
  }

  TEST_CASE("scripted decisions match the rule oracle") {
    std::mt19937_64 rng(41);
    const std::vector<std::string> names{"bed", "sofa", "oven", "toilet", "lamp"};
    for (int trial = 0; trial < 500; ++trial) {
      const int heads = std::uniform_int_distribution<int>(1, 12)(rng);
      const int n_nodes = std::uniform_int_distribution<int>(0, 6)(rng);
      std::vector<oracle::TopoNodeView> views;
      std::string text;
      for (int i = 0; i < n_nodes; ++i) {
        const NodeId id = 1 + 2 * i;
        const long f = std::uniform_int_distribution<long>(-1, 3)(rng);
        views.push_back({id, f});
        text += node_line(id, i, 0, f);
      }
      std::vector<NodeId> hist;
      const int h_len = n_nodes ? std::uniform_int_distribution<int>(0, 8)(rng) : 0;
      for (int i = 0; i < h_len; ++i) hist.push_back(views[std::uniform_int_distribution<std::size_t>(0, views.size() - 1)(rng)].id);
      std::optional<NodeId> current;
      if (!hist.empty()) current = hist.back();
      std::string hs;
      for (std::size_t i = 0; i < hist.size(); ++i) hs += (i ? "," : "") + std::to_string(hist[i]);
      text += "HISTORY" + std::string(hs.empty() ? "" : " ") + hs + "\nCURRENT " +
              (current ? std::to_string(*current) : std::string("none")) + "\nTARGET bed\n";

      OracleRequest r;
      r.topo_text = text;
      r.target = "bed";
      r.history = hist;
      std::vector<std::pair<int, std::set<std::string>>> headings;
      std::vector<double> depth;
      for (int h = 0; h < heads; ++h) {
        std::set<std::string> cls;
        for (const auto& n : names) {
          if (std::uniform_int_distribution<int>(0, 9)(rng) == 0) cls.insert(n);
        }
        const double fd = std::uniform_int_distribution<int>(0, 4)(rng) * 0.5;
        headings.emplace_back(h, cls);
        depth.push_back(fd);
        r.panorama.push_back({h, {cls.begin(), cls.end()}, fd});
      }
      const auto got = scripted_decide(r);
      const auto want = oracle::scripted(headings, depth, "bed", views, current, hist);
      INFO("trial " << trial);
      CHECK(got.found == want.found);
      CHECK(got.direction == want.direction);
      CHECK(got.next_node == want.next_node);
      CHECK_NOTHROW(validate_decision(got, r));
    }
  }

  TEST_CASE("room classification") {
    const auto table = default_room_table();
    CHECK(classify_room({{0, {"bed", "lamp"}, 1}}, table) == "bedroom");
    CHECK(classify_room({}, table) == "unknown");
    CHECK(classify_room({{0, {"lamp"}, 1}}, table) == "unknown");
    CHECK(classify_room({{0, {"oven"}, 1}, {1, {"sofa"}, 1}, {2, {"oven"}, 1}}, table) == "kitchen");
    // one vote each: alphabetical
    CHECK(classify_room({{0, {"sofa"}, 1}, {1, {"bed"}, 1}}, table) == "bedroom");
  }

  TEST_CASE("room table file") {
    const auto path = std::filesystem::temp_directory_path() / "toponav_rooms_test.txt";
    {
      std::ofstream os(path);
      os << "# custom table\nbed   guest_room\n\nlamp study  # trailing\n";
    }
    const auto t = load_room_table(path.string());
    CHECK(t.size() == 2);
    CHECK(t.at("bed") == "guest_room");
    CHECK(t.at("lamp") == "study");
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_room_table("/nonexistent/rooms.txt"), Error);
  }

  TEST_CASE("request validation") {
    auto r = base_request();
    CHECK_NOTHROW(r.validate());
    r.panorama[1].heading = 0;
    CHECK_THROWS_AS(r.validate(), ConfigError);
  }

  TEST_CASE("reply parsing") {
    const auto r = base_request();
    CHECK(parse_decision_reply(R"({"next_node": 2, "direction": 3, "found": 1})", r) ==
          OracleDecision{2, 3, true});
    CHECK_THROWS_AS(parse_decision_reply(R"({"next_node": 2, "direction": 99, "found": 0})", r),
                    InvariantViolationError);
    CHECK_THROWS_AS(parse_decision_reply(R"({"next_node": 7, "direction": 0, "found": 0})", r),
                    InvariantViolationError);
    CHECK_THROWS_AS(parse_decision_reply(R"({"next_node": 2, "direc)", r), MalformedReplyError);
    CHECK_THROWS_AS(parse_decision_reply(R"({"next_node": 2, "direction": 0, "found": 2})", r), MalformedReplyError);
    CHECK_THROWS_AS(parse_decision_reply(R"({"next_node": "2", "direction": 0, "found": 0})", r),
                    MalformedReplyError);
    CHECK_THROWS_AS(parse_decision_reply("[1,2,3]", r), MalformedReplyError);
  }

  TEST_CASE("request wire format round trips") {
    auto r = base_request();
    r.panorama[0].classes = {"bed"};
    const auto j = request_to_json(r);
    CHECK(j.at("target") == "bed");
    CHECK(j.at("panorama").size() == 4);
    CHECK(j.at("panorama")[0].at("classes")[0] == "bed");
    CHECK(j.at("history") == nlohmann::json::array({1}));
    const auto back = request_from_json(j);
    CHECK(back.topo_text == r.topo_text);
    CHECK(back.history == r.history);
    CHECK(back.panorama.size() == r.panorama.size());
    CHECK_THROWS_AS(request_from_json(nlohmann::json::object()), MalformedReplyError);
  }

  TEST_CASE("remote round trip") {
    std::string seen_auth;
    nlohmann::json seen_body;
    StubServer server([&](const httplib::Request& req, httplib::Response& res) {
      seen_auth = req.get_header_value("Authorization");
      seen_body = nlohmann::json::parse(req.body);
      res.set_content(R"({"next_node": 2, "direction": 1, "found": 0})", "application/json");
    });
    RemoteOracleConfig cfg;
    cfg.url = server.url();
    cfg.api_key = "secret";
    cfg.timeout_s = 5;
    const auto r = base_request();
    CHECK(remote_decide(r, cfg) == OracleDecision{2, 1, false});
    CHECK(seen_auth == "Bearer secret");
    CHECK(seen_body.at("topo_text") == r.topo_text);

    RemoteOracle o(cfg);
    CHECK(o.decide(r) == OracleDecision{2, 1, false});
    CHECK(o.failures() == 0);
    CHECK(o.fallbacks() == 0);
  }

  TEST_CASE("remote falls back after bad replies") {
    int calls = 0;
    StubServer server([&](const httplib::Request&, httplib::Response& res) {
      ++calls;
      res.set_content(R"({"next_node": 2, "direction": 42, "found": 0})", "application/json");
    });
    RemoteOracleConfig cfg;
    cfg.url = server.url();
    cfg.retries = 1;
    cfg.timeout_s = 5;
    RemoteOracle o(cfg);
    const auto r = base_request();
    CHECK(o.decide(r) == scripted_decide(r));
    CHECK(calls == 2);
    CHECK(o.failures() == 2);
    CHECK(o.fallbacks() == 1);
  }

  TEST_CASE("unreachable endpoint") {
    RemoteOracleConfig cfg;
    cfg.url = "http://127.0.0.1:1";
    cfg.timeout_s = 1;
    cfg.retries = 0;
    const auto r = base_request();
    CHECK_THROWS_AS(remote_decide(r, cfg), TransportError);
    RemoteOracle o(cfg);
    CHECK(o.decide(r) == scripted_decide(r));
    CHECK(o.fallbacks() == 1);
  }
}
