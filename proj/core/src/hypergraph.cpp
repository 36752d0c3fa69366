#include "hypersgg/hypergraph.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "hypersgg/errors.hpp"
#include "hypersgg/file_util.hpp"
#include "hypersgg/json_writer.hpp"
#include "hypersgg/rng.hpp"

namespace hypersgg {

const char* to_string(EdgeOrigin origin) {
  switch (origin) {
    case EdgeOrigin::kSpatial: return "spatial";
    case EdgeOrigin::kTransition: return "transition";
    case EdgeOrigin::kSampled: return "sampled";
  }
  return "?";
}

int Hypergraph::add_node(const HyperNode& node) {
  if (auto existing = find_node(node)) return *existing;
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  incidence_.emplace_back();
  if (node.kind == NodeKind::kEntity) {
    entity_ids_.emplace(node.entity_key, id);
  } else {
    predicate_ids_.emplace(node.predicate, id);
  }
  return id;
}

std::optional<int> Hypergraph::find_node(const HyperNode& node) const {
  if (node.kind == NodeKind::kEntity) {
    auto it = entity_ids_.find(node.entity_key);
    if (it != entity_ids_.end()) return it->second;
  } else {
    auto it = predicate_ids_.find(node.predicate);
    if (it != predicate_ids_.end()) return it->second;
  }
  return std::nullopt;
}

std::optional<int> Hypergraph::add_edge(std::vector<int> members, EdgeOrigin origin,
                                        std::optional<double> weight) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.size() < 2) {
    throw std::invalid_argument("Hypergraph::add_edge: a hyperedge needs >= 2 distinct members");
  }
  for (int id : members) {
    if (id < 0 || id >= static_cast<int>(nodes_.size())) {
      throw std::invalid_argument("Hypergraph::add_edge: unknown node id");
    }
  }
  if (!edge_keys_.emplace(members, origin).second) return std::nullopt;

  const int id = static_cast<int>(edges_.size());
  for (int member : members) incidence_[static_cast<std::size_t>(member)].push_back(id);
  member_sets_.insert(members);
  edges_.push_back(Hyperedge{std::move(members), origin, weight});
  return id;
}

const HyperNode& Hypergraph::node(int id) const {
  if (id < 0 || id >= static_cast<int>(nodes_.size())) {
    throw std::invalid_argument("Hypergraph::node: unknown node id");
  }
  return nodes_[static_cast<std::size_t>(id)];
}

const Hyperedge& Hypergraph::edge(int id) const {
  if (id < 0 || id >= static_cast<int>(edges_.size())) {
    throw std::invalid_argument("Hypergraph::edge: unknown edge id");
  }
  return edges_[static_cast<std::size_t>(id)];
}

const std::vector<int>& Hypergraph::incident_edges(int node_id) const {
  if (node_id < 0 || node_id >= static_cast<int>(nodes_.size())) {
    throw std::invalid_argument("Hypergraph::incident_edges: unknown node id");
  }
  return incidence_[static_cast<std::size_t>(node_id)];
}

bool Hypergraph::has_member_set(const std::vector<int>& sorted_members) const {
  return member_sets_.count(sorted_members) > 0;
}

std::size_t Hypergraph::count_edges(EdgeOrigin origin) const {
  std::size_t n = 0;
  for (const Hyperedge& e : edges_) {
    if (e.origin == origin) ++n;
  }
  return n;
}

Hypergraph unify_hypergraph(std::span<const VideoAnnotation> videos, const ProceduralGraph& pg) {
  for (const VideoAnnotation& video : videos) {
    if (!(video.vocab == pg.vocab())) {
      throw ConfigError("unify_hypergraph: video '" + video.video_id +
                        "' uses a different vocabulary than the procedural graph");
    }
  }

  Hypergraph graph;

  // Entity nodes in (video, frame, listing) order. The order never depends on
  // the id strings themselves, so relabeling entities permutes nothing.
  for (const VideoAnnotation& video : videos) {
    for (const FrameSceneGraph& frame : video.frames) {
      for (const EntityInstance& entity : frame.entities) {
        graph.add_node(HyperNode::entity({video.video_id, frame.frame_index, entity.entity_id}));
      }
    }
  }

  // Predicate nodes, ascending id, for categories used anywhere.
  std::set<PredicateId> used;
  for (const VideoAnnotation& video : videos) {
    for (const FrameSceneGraph& frame : video.frames) {
      for (const RelationshipTriplet& t : frame.triplets) used.insert(t.predicate);
    }
  }
  for (PredicateId m = 0; m < pg.size(); ++m) {
    for (PredicateId n = 0; n < pg.size(); ++n) {
      if (pg.weight(m, n) > 0.0) {
        used.insert(m);
        used.insert(n);
      }
    }
  }
  for (PredicateId id : used) graph.add_node(HyperNode::predicate(id));

  // Spatial edges, one per triplet. A pair annotated in both directions with
  // the same predicate collapses to one member set and is kept once.
  for (const VideoAnnotation& video : videos) {
    for (const FrameSceneGraph& frame : video.frames) {
      for (const RelationshipTriplet& t : frame.triplets) {
        auto subject =
            graph.find_node(HyperNode::entity({video.video_id, frame.frame_index, t.subject_id}));
        auto object =
            graph.find_node(HyperNode::entity({video.video_id, frame.frame_index, t.object_id}));
        auto predicate = graph.find_node(HyperNode::predicate(t.predicate));
        if (!subject || !object || !predicate) {
          throw std::invalid_argument("unify_hypergraph: triplet references a missing entity; "
                                      "validate annotations first");
        }
        graph.add_edge({*subject, *predicate, *object}, EdgeOrigin::kSpatial);
      }
    }
  }

  // Transition edges over unordered predicate pairs; hyperedges are sets, so
  // a pair positive in both directions keeps the larger weight.
  for (PredicateId m = 0; m < pg.size(); ++m) {
    for (PredicateId n = m + 1; n < pg.size(); ++n) {
      const double w = std::max(pg.weight(m, n), pg.weight(n, m));
      if (w <= 0.0) continue;
      auto a = graph.find_node(HyperNode::predicate(m));
      auto b = graph.find_node(HyperNode::predicate(n));
      graph.add_edge({*a, *b}, EdgeOrigin::kTransition, w);
    }
  }

  return graph;
}

Hypergraph random_walk_construct(const Hypergraph& graph, const WalkConfig& cfg,
                                 std::vector<WalkTrace>* traces) {
  if (cfg.num_walks < 1) throw std::invalid_argument("WalkConfig: num_walks must be >= 1");
  if (cfg.walk_length < 1) throw std::invalid_argument("WalkConfig: walk_length must be >= 1");

  Hypergraph result = graph;
  if (traces) traces->clear();
  if (graph.nodes().empty()) return result;

  // Member sets sampled so far in this call; checked together with the input
  // edge set when deciding whether a candidate is new.
  std::set<std::vector<int>> sampled;

  for (int walk = 0; walk < cfg.num_walks; ++walk) {
    Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(walk));

    const int start = static_cast<int>(rng.index(graph.nodes().size()));
    WalkTrace trace;
    trace.sequence.push_back({false, start});
    std::set<int> visited{start};

    int current_node = start;
    int current_edge = -1;
    for (int step = 1; step <= cfg.walk_length; ++step) {
      if (step % 2 == 1) {
        // Node to hyperedge.
        const std::vector<int>& incident = graph.incident_edges(current_node);
        if (incident.empty()) break;  // stalled: keep the nodes visited so far
        std::size_t pick;
        if (cfg.weight_transition_edges) {
          std::vector<double> weights;
          weights.reserve(incident.size());
          for (int edge_id : incident) {
            weights.push_back(graph.edge(edge_id).weight.value_or(1.0));
          }
          pick = rng.weighted_index(weights);
        } else {
          pick = rng.index(incident.size());
        }
        current_edge = incident[pick];
        trace.sequence.push_back({true, current_edge});
      } else {
        // Hyperedge to node.
        const std::vector<int>& members = graph.edge(current_edge).members;
        current_node = members[rng.index(members.size())];
        trace.sequence.push_back({false, current_node});
        visited.insert(current_node);
      }
    }

    if (traces) traces->push_back(std::move(trace));

    std::vector<int> candidate(visited.begin(), visited.end());
    if (candidate.size() < 2) continue;
    if (graph.has_member_set(candidate) || sampled.count(candidate)) continue;
    sampled.insert(candidate);
    result.add_edge(std::move(candidate), EdgeOrigin::kSampled);
  }

  return result;
}

std::string to_json(const Hypergraph& graph) {
  JsonWriter out;
  out.begin_object();
  out.key("nodes").begin_array();
  for (const HyperNode& node : graph.nodes()) {
    out.begin_object();
    if (node.kind == NodeKind::kEntity) {
      out.key("kind").value("entity");
      out.key("video_id").value(node.entity_key.video_id);
      out.key("frame_index").value(node.entity_key.frame_index);
      out.key("entity_id").value(node.entity_key.entity_id);
    } else {
      out.key("kind").value("predicate");
      out.key("predicate").value(node.predicate);
    }
    out.end_object();
  }
  out.end_array();
  out.key("edges").begin_array();
  for (const Hyperedge& edge : graph.edges()) {
    out.begin_object();
    out.key("members").begin_array();
    for (int member : edge.members) out.value(member);
    out.end_array();
    out.key("origin").value(to_string(edge.origin));
    if (edge.weight) out.key("weight").value(*edge.weight);
    out.end_object();
  }
  out.end_array();
  out.end_object();
  return out.take();
}

namespace {

EdgeOrigin origin_from_string(const std::string& text) {
  if (text == "spatial") return EdgeOrigin::kSpatial;
  if (text == "transition") return EdgeOrigin::kTransition;
  if (text == "sampled") return EdgeOrigin::kSampled;
  throw DataError("hypergraph: unknown edge origin '" + text + "'");
}

}  // namespace

Hypergraph hypergraph_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("hypergraph: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges")) {
    throw DataError("hypergraph: expected {nodes, edges}");
  }
  Hypergraph graph;
  for (const auto& n : doc["nodes"]) {
    if (!n.is_object() || !n.contains("kind")) throw DataError("hypergraph: malformed node");
    const std::string kind = n["kind"].get<std::string>();
    int id;
    if (kind == "entity") {
      id = graph.add_node(HyperNode::entity({n.at("video_id").get<std::string>(),
                                             n.at("frame_index").get<int>(),
                                             n.at("entity_id").get<std::string>()}));
    } else if (kind == "predicate") {
      id = graph.add_node(HyperNode::predicate(n.at("predicate").get<PredicateId>()));
    } else {
      throw DataError("hypergraph: unknown node kind '" + kind + "'");
    }
    if (id != static_cast<int>(graph.nodes().size()) - 1) {
      throw DataError("hypergraph: duplicate node in document");
    }
  }
  for (const auto& e : doc["edges"]) {
    if (!e.is_object() || !e.contains("members") || !e.contains("origin")) {
      throw DataError("hypergraph: malformed edge");
    }
    std::vector<int> members;
    for (const auto& m : e["members"]) members.push_back(m.get<int>());
    std::optional<double> weight;
    if (e.contains("weight") && !e["weight"].is_null()) weight = e["weight"].get<double>();
    std::optional<int> added;
    try {
      added = graph.add_edge(std::move(members), origin_from_string(e["origin"].get<std::string>()),
                             weight);
    } catch (const std::invalid_argument& err) {
      throw DataError(std::string("hypergraph: ") + err.what());
    }
    if (!added) throw DataError("hypergraph: duplicate edge in document");
  }
  return graph;
}

void save_hypergraph(const Hypergraph& graph, const std::filesystem::path& path) {
  write_file_atomic(path, to_json(graph) + "\n");
}

Hypergraph load_hypergraph(const std::filesystem::path& path) {
  return hypergraph_from_json(read_file(path));
}

std::string to_dot(const Hypergraph& graph) {
  std::ostringstream out;
  out << "graph hypergraph {\n";
  out << "  node [fontsize=10];\n";
  for (std::size_t i = 0; i < graph.nodes().size(); ++i) {
    const HyperNode& node = graph.nodes()[i];
    if (node.kind == NodeKind::kEntity) {
      out << "  n" << i << " [shape=ellipse,label=\""
          << JsonWriter::escape(node.entity_key.entity_id) << "@"
          << node.entity_key.frame_index << "\"];\n";
    } else {
      out << "  n" << i << " [shape=oval,style=filled,fillcolor=palegreen,label=\"p"
          << node.predicate << "\"];\n";
    }
  }
  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    const Hyperedge& edge = graph.edges()[e];
    out << "  h" << e << " [shape=point,width=0.08,label=\"\"];  // "
        << to_string(edge.origin) << "\n";
    for (int member : edge.members) {
      out << "  h" << e << " -- n" << member << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace hypersgg
