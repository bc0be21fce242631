#include <doctest.h>

#include "toponav/app/app.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace toponav;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("toponav_cli_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& p) const { return path_ / p; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  os << text;
}

std::string scene(const std::string& file) { return std::string(TOPONAV_SCENES_DIR) + "/" + file; }

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

// Records every request it answers.
class Recorder final : public DecisionOracle {
 public:
  OracleDecision decide(const OracleRequest& r) override {
    texts.push_back(r.topo_text);
    return scripted_decide(r);
  }
  std::vector<std::string> texts;
};

const char* kOneStepLog =
    R"({"step":0,"pose":[1.0,1.0,0.0],"phase":"exploration","decision":{"next_node":1,"direction":0,"found":false},)"
    R"("waypoint":[2.0,1.0],"path":[[1.0,1.0],[2.0,1.0]],"node_count":1,"frontier_count":0,)"
    R"("nodes":[{"id":1,"pos":[1.0,1.0]}]})";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("run writes metrics, logs and a manifest") {
    TempDir tmp;
    app::RunOptions o;
    o.scene_patterns = {scene("two_room_hallway.json")};
    o.out_dir = (tmp / "run").string();
    std::ostringstream out, err;
    REQUIRE(app::run_command(o, out, err) == 0);
    CHECK(err.str().empty());
    CHECK(out.str().find("SR 1.000000") != std::string::npos);
    const auto rows = app::read_metrics_csv(o.out_dir);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].sr == 1.0);
    CHECK(rows[0].episodes == 1);
    CHECK(fs::exists(tmp / "run/logs/two_room_hallway_0.jsonl"));
    CHECK(fs::exists(tmp / "run/episodes.csv"));
    const auto manifest = nlohmann::json::parse(slurp(tmp / "run/manifest.json"));
    CHECK(manifest.at("label") == "scripted");
    CHECK(manifest.at("episode_specs").size() == 1);

    // the log replays into an SVG
    app::PlotOptions p{(tmp / "run/logs/two_room_hallway_0.jsonl").string(), scene("two_room_hallway.json"),
                       (tmp / "run/plot.svg").string(), ""};
    std::ostringstream perr;
    REQUIRE(app::plot_command(p, perr) == 0);
    const auto svg = slurp(tmp / "run/plot.svg");
    CHECK(svg.find("<polyline id=\"trajectory\"") != std::string::npos);
    CHECK(count(svg, "class=\"node\"") >= 2);
  }

  TEST_CASE("run reports missing scenes") {
    TempDir tmp;
    app::RunOptions o;
    o.scene_patterns = {"/nonexistent/*.json"};
    o.out_dir = (tmp / "run").string();
    std::ostringstream out, err;
    CHECK(app::run_command(o, out, err) != 0);
    CHECK(err.str().find("toponav run:") == 0);

    o.scene_patterns = {scene("one_room.json")};
    o.ablate = {"disable_everything"};
    CHECK(app::run_command(o, out, err) != 0);
    CHECK_THROWS_AS(app::resolve_components(o), ConfigError);
  }

  TEST_CASE("binary exit status and stderr") {
    TempDir tmp;
    const std::string cli = TOPONAV_CLI_PATH;
    const auto errf = (tmp / "err.txt").string();
    CHECK(shell(cli + " run --scenes /nonexistent.json --out " + (tmp / "r").string() + " 2> " + errf) != 0);
    CHECK_FALSE(slurp(errf).empty());
    CHECK(shell(cli + " run --scenes " + scene("one_room.json") + " --out " + (tmp / "ok").string() +
                " > /dev/null 2> " + errf) == 0);
    CHECK(slurp(errf).empty());
    CHECK(shell(cli + " report " + (tmp / "ok").string() + " > " + (tmp / "rep.txt").string()) == 0);
    CHECK(slurp(tmp / "rep.txt").find("scripted") != std::string::npos);
    CHECK(shell(cli + " bogus 2> /dev/null") != 0);
  }

  TEST_CASE("room ablation blanks rooms in the oracle prompt") {
    app::RunOptions o;
    o.ablate = {"disable_room_attr"};
    const auto cc = app::resolve_components(o);
    CHECK(cc.ablations.disable_room_attr);
    CHECK(app::default_label(o) == "scripted+disable_room_attr");
    sim::EpisodeSpec spec;
    spec.scene = sim::load_scene(scene("two_room_hallway.json"));
    spec.start = spec.scene.episodes[0].start;
    spec.start_yaw = spec.scene.episodes[0].yaw;
    spec.target = spec.scene.episodes[0].target;
    Recorder rec;
    sim::run_episode(spec, cc, rec);
    REQUIRE_FALSE(rec.texts.empty());
    for (const auto& t : rec.texts) {
      const auto topo = parse_topo_text(t);
      for (const auto& n : topo.nodes) CHECK(n.room == "unknown");
    }
    // without the ablation some room gets a label
    Recorder full;
    sim::run_episode(spec, app::resolve_components({}), full);
    bool labeled = false;
    for (const auto& t : full.texts) labeled = labeled || t.find("room=bedroom") != std::string::npos;
    CHECK(labeled);
  }

  TEST_CASE("plot: single-step log") {
    TempDir tmp;
    spit(tmp / "log.jsonl", std::string(kOneStepLog) + "\n");
    const auto svg = app::render_svg(sim::load_scene(scene("one_room.json")), app::read_log((tmp / "log.jsonl").string()));
    CHECK(count(svg, "class=\"node\"") == 1);
    CHECK(count(svg, "<polyline") == 1);
    CHECK(svg.find("points=\"80.00,200.00 140.00,200.00\"") != std::string::npos);
  }

  TEST_CASE("plot: merged nodes disappear") {
    TempDir tmp;
    std::string first = kOneStepLog;
    std::string second = kOneStepLog;
    const std::string one = R"("nodes":[{"id":1,"pos":[1.0,1.0]}])";
    first.replace(first.find(one), one.size(), R"("nodes":[{"id":1,"pos":[1.0,1.0]},{"id":3,"pos":[1.3,1.0]}])");
    second.replace(second.find("\"step\":0"), 8, "\"step\":1");
    second.replace(second.find(R"("nodes")"), 7, R"("merges":[[1,3]],"nodes")");
    spit(tmp / "log.jsonl", first + "\n" + second + "\n");
    const auto svg = app::render_svg(sim::load_scene(scene("one_room.json")), app::read_log((tmp / "log.jsonl").string()));
    CHECK(svg.find("data-id=\"1\"") != std::string::npos);
    CHECK(svg.find("data-id=\"3\"") == std::string::npos);
  }

  TEST_CASE("plot: heatmap scores come from the CSV") {
    TempDir tmp;
    spit(tmp / "log.jsonl", std::string(kOneStepLog) + "\n");
    spit(tmp / "f.csv", "x,y,z,score,masked\n1.5,1.5,0.0,0.123456789,0\n2.0,2.0,0.0,2.5,1\n");
    const auto svg = app::render_svg(sim::load_scene(scene("one_room.json")),
                                     app::read_log((tmp / "log.jsonl").string()), (tmp / "f.csv").string());
    CHECK(svg.find("data-score=\"0.123457\"") != std::string::npos);
    CHECK(svg.find("data-score=\"2.500000\" data-masked=\"1\"") != std::string::npos);
    spit(tmp / "bad.csv", "x,y,z,score,masked\n1,2,oops\n");
    CHECK_THROWS_WITH_AS(app::render_svg(sim::load_scene(scene("one_room.json")), {}, (tmp / "bad.csv").string()),
                         doctest::Contains("bad.csv:2"), Error);
  }

  TEST_CASE("plot: parse errors name the line") {
    TempDir tmp;
    spit(tmp / "log.jsonl", std::string(kOneStepLog) + "\n{not json\n");
    CHECK_THROWS_WITH_AS(app::read_log((tmp / "log.jsonl").string()), doctest::Contains("log.jsonl:2"), Error);
    spit(tmp / "log2.jsonl", R"({"step":0})" "\n");
    CHECK_THROWS_WITH_AS(app::read_log((tmp / "log2.jsonl").string()), doctest::Contains("missing field"), Error);
    app::PlotOptions p{(tmp / "log.jsonl").string(), scene("one_room.json"), (tmp / "o.svg").string(), ""};
    std::ostringstream err;
    CHECK(app::plot_command(p, err) != 0);
    CHECK(err.str().find("log.jsonl:2") != std::string::npos);
  }

  TEST_CASE("report") {
    TempDir tmp;
    spit(tmp / "a.csv", "config,episodes,sr,spl,dtg\nfull,50,0.900000,0.612345,0.800000\n");
    spit(tmp / "b.csv", "config,episodes,sr,spl,dtg\nvlm-only,50,0.500000,0.300000,2.000000\n");
    std::ostringstream out, err;
    REQUIRE(app::report_command({(tmp / "a.csv").string(), (tmp / "b.csv").string()}, out, err) == 0);
    const auto text = out.str();
    CHECK(count(text, "\n") == 3);
    CHECK(text.find("full") != std::string::npos);
    CHECK(text.find("0.612") != std::string::npos);
    CHECK(text.find("vlm-only") != std::string::npos);

    // rows written by the metrics writer read back to the same numbers
    const std::vector<sim::EpisodeOutcome> outc{{true, 3.0, 2.0, 0.5}, {false, 4.0, 1.0, 3.0}};
    const auto m = sim::compute_metrics(outc);
    {
      std::ofstream os(tmp / "c.csv");
      sim::write_metrics_header(os);
      sim::write_metrics_row(os, "x", m);
    }
    const auto rows = app::read_metrics_csv((tmp / "c.csv").string());
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].sr == doctest::Approx(m.sr).epsilon(1e-6));
    CHECK(rows[0].spl == doctest::Approx(m.spl).epsilon(1e-6));
    CHECK(rows[0].dtg == doctest::Approx(m.dtg).epsilon(1e-6));

    spit(tmp / "bad.csv", "name,sr\nx,1\n");
    std::ostringstream out2, err2;
    CHECK(app::report_command({(tmp / "bad.csv").string()}, out2, err2) != 0);
    CHECK(err2.str().find("schema mismatch") != std::string::npos);
    CHECK_THROWS_AS(app::read_metrics_csv((tmp / "missing.csv").string()), Error);
  }
}
