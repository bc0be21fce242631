#include "toponav/oracle.hpp"

#include "toponav/topo_memory.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

namespace toponav {

void OracleRequest::validate() const {
  std::vector<int> seen(panorama.size(), 0);
  for (const auto& h : panorama) {
    if (h.heading < 0 || h.heading >= num_headings() || seen[static_cast<std::size_t>(h.heading)]++) {
      throw ConfigError("panorama headings must cover 0..n-1 exactly once");
    }
  }
}

OracleDecision scripted_decide(const OracleRequest& request) {
  const TopoText topo = parse_topo_text(request.topo_text);

  std::vector<const HeadingSummary*> headings;
  for (const auto& h : request.panorama) headings.push_back(&h);
  std::sort(headings.begin(), headings.end(),
            [](const HeadingSummary* a, const HeadingSummary* b) { return a->heading < b->heading; });

  OracleDecision d;
  const HeadingSummary* showing = nullptr;
  for (const auto* h : headings) {
    if (std::find(h->classes.begin(), h->classes.end(), request.target) != h->classes.end()) {
      showing = h;
      break;
    }
  }
  d.found = showing != nullptr;
  if (showing) {
    d.direction = showing->heading;
  } else {
    const HeadingSummary* deepest = nullptr;
    for (const auto* h : headings) {
      if (!deepest || h->free_depth > deepest->free_depth) deepest = h;
    }
    d.direction = deepest ? deepest->heading : 0;
  }

  // last position of each node id in the history; -1 = never visited
  const auto last_visit = [&](NodeId id) -> long {
    for (long i = static_cast<long>(request.history.size()) - 1; i >= 0; --i) {
      if (request.history[static_cast<std::size_t>(i)] == id) return i;
    }
    return -1;
  };
  const auto frontiers = [](const TopoText::Node& n) { return n.frontiers.value_or(0); };

  const TopoText::Node* current = nullptr;
  if (topo.current) {
    for (const auto& n : topo.nodes) {
      if (n.id == *topo.current) current = &n;
    }
  }
  if (current && frontiers(*current) > 0) {
    d.next_node = current->id;
    return d;
  }

  const TopoText::Node* best = nullptr;
  long best_visit = 0;
  for (const auto& n : topo.nodes) {
    if (&n == current) continue;
    const long visit = last_visit(n.id);
    const bool better = !best || frontiers(n) > frontiers(*best) ||
                        (frontiers(n) == frontiers(*best) &&
                         (visit < best_visit || (visit == best_visit && n.id < best->id)));
    if (better) {
      best = &n;
      best_visit = visit;
    }
  }
  if (best) {
    d.next_node = best->id;
  } else {
    d.next_node = current ? current->id : topo.current.value_or(0);
  }
  return d;
}

void validate_decision(const OracleDecision& decision, const OracleRequest& request) {
  if (decision.direction < 0 || decision.direction >= request.num_headings()) {
    throw InvariantViolationError("direction " + std::to_string(decision.direction) + " outside 0.." +
                                  std::to_string(request.num_headings() - 1));
  }
  const TopoText topo = parse_topo_text(request.topo_text);
  if (!topo.nodes.empty() &&
      std::none_of(topo.nodes.begin(), topo.nodes.end(),
                   [&](const TopoText::Node& n) { return n.id == decision.next_node; })) {
    throw InvariantViolationError("next_node " + std::to_string(decision.next_node) + " is not a live node");
  }
}

RoomTable default_room_table() {
  return {
      {"bed", "bedroom"},         {"wardrobe", "bedroom"},   {"nightstand", "bedroom"},
      {"oven", "kitchen"},        {"fridge", "kitchen"},     {"sink", "kitchen"},
      {"sofa", "living_room"},    {"tv", "living_room"},     {"fireplace", "living_room"},
      {"toilet", "bathroom"},     {"bathtub", "bathroom"},   {"shower", "bathroom"},
      {"desk", "office"},         {"bookshelf", "office"},   {"dining_table", "dining_room"},
  };
}

RoomTable load_room_table(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot read room table " + path);
  RoomTable table;
  std::string line;
  while (std::getline(is, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string cls, room;
    if (!(ls >> cls)) continue;
    if (!(ls >> room)) throw Error("room table entry without a room: " + cls);
    table[cls] = room;
  }
  return table;
}

std::string classify_room(const std::vector<HeadingSummary>& panorama, const RoomTable& table) {
  std::map<std::string, int> votes;
  for (const auto& h : panorama) {
    for (const auto& c : h.classes) {
      if (auto it = table.find(c); it != table.end()) ++votes[it->second];
    }
  }
  std::string best = "unknown";
  int best_votes = 0;
  for (const auto& [room, n] : votes) {  // alphabetical, so strict > keeps the first on ties
    if (n > best_votes) {
      best = room;
      best_votes = n;
    }
  }
  return best;
}

}  // namespace toponav
