#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hypersgg/model.hpp"
#include "hypersgg/procedural_graph.hpp"

namespace hypersgg {

enum class NodeKind { kEntity, kPredicate };

struct EntityKey {
  std::string video_id;
  int frame_index = 0;
  std::string entity_id;
  auto operator<=>(const EntityKey&) const = default;
};

// Entity nodes are frame-qualified (the same tracked object yields one node
// per frame); predicate nodes are shared across the whole graph.
struct HyperNode {
  static HyperNode entity(EntityKey key) {
    HyperNode n;
    n.kind = NodeKind::kEntity;
    n.entity_key = std::move(key);
    return n;
  }
  static HyperNode predicate(PredicateId id) {
    HyperNode n;
    n.kind = NodeKind::kPredicate;
    n.predicate = id;
    return n;
  }

  NodeKind kind = NodeKind::kEntity;
  EntityKey entity_key;        // meaningful when kind == kEntity
  PredicateId predicate = -1;  // meaningful when kind == kPredicate
  friend bool operator==(const HyperNode&, const HyperNode&) = default;
};

enum class EdgeOrigin { kSpatial, kTransition, kSampled };

const char* to_string(EdgeOrigin origin);

struct Hyperedge {
  std::vector<int> members;  // sorted unique node ids, size >= 2
  EdgeOrigin origin = EdgeOrigin::kSpatial;
  std::optional<double> weight;  // transition edges carry w(m, n)
  friend bool operator==(const Hyperedge&, const Hyperedge&) = default;
};

// Append-only hypergraph with an incidence index kept consistent with the
// edge list. Node and edge ids are insertion positions, which makes every
// downstream draw and serialization deterministic.
class Hypergraph {
 public:
  // Returns the existing id when the node is already present.
  int add_node(const HyperNode& node);
  std::optional<int> find_node(const HyperNode& node) const;

  // Members may arrive in any order and are canonicalized to a sorted unique
  // id vector. Duplicate (member set, origin) pairs are rejected with
  // nullopt; fewer than 2 distinct members or unknown ids raise
  // std::invalid_argument.
  std::optional<int> add_edge(std::vector<int> members, EdgeOrigin origin,
                              std::optional<double> weight = std::nullopt);

  const std::vector<HyperNode>& nodes() const { return nodes_; }
  const std::vector<Hyperedge>& edges() const { return edges_; }
  const HyperNode& node(int id) const;
  const Hyperedge& edge(int id) const;

  // Edge ids whose member set contains the node, in insertion order.
  const std::vector<int>& incident_edges(int node_id) const;

  // Whether any edge (of any origin) has exactly this member set.
  bool has_member_set(const std::vector<int>& sorted_members) const;

  std::size_t count_edges(EdgeOrigin origin) const;

 private:
  std::vector<HyperNode> nodes_;
  std::vector<Hyperedge> edges_;
  std::vector<std::vector<int>> incidence_;
  std::map<EntityKey, int> entity_ids_;
  std::map<PredicateId, int> predicate_ids_;
  std::set<std::pair<std::vector<int>, EdgeOrigin>> edge_keys_;
  std::set<std::vector<int>> member_sets_;
};

struct WalkConfig {
  int num_walks = 60;   // N_w
  int walk_length = 7;  // N_l
  std::uint64_t seed = 0;
  // Bias node->edge steps by transition weight instead of picking uniformly.
  bool weight_transition_edges = false;
};

// One walk's visit sequence: starts at a node and alternates node, edge,
// node, ... Exposed for tests and debugging.
struct WalkTrace {
  struct Step {
    bool is_edge = false;
    int id = 0;
    friend bool operator==(const Step&, const Step&) = default;
  };
  std::vector<Step> sequence;
};

// Union of the per-frame entity scene graphs with the predicate-transition
// graph: one node per entity instance, one node per predicate category used
// by a triplet or by a positive transition weight, one 3-member spatial edge
// per triplet {subject, predicate, object} and one 2-member transition edge
// per unordered predicate pair with positive weight (the larger direction
// wins when both are positive). Videos must match the graph's vocabulary.
Hypergraph unify_hypergraph(std::span<const VideoAnnotation> videos, const ProceduralGraph& pg);

// Random-walk construction: num_walks alternating node/hyperedge walks over
// `graph`; each walk's distinct visited nodes form a candidate hyperedge,
// kept when it has >= 2 members and repeats no existing member set. Walk i
// draws from RNG stream (seed, i): the start node first, then one draw per
// completed step; a node without incident edges ends the walk early. Walks
// observe only the input edge set, never each other's samples. Returns the
// augmented graph; the input is untouched.
Hypergraph random_walk_construct(const Hypergraph& graph, const WalkConfig& cfg,
                                 std::vector<WalkTrace>* traces = nullptr);

// JSON document {"nodes": [...], "edges": [{members, origin, weight?}]}.
std::string to_json(const Hypergraph& graph);
Hypergraph hypergraph_from_json(const std::string& text);
void save_hypergraph(const Hypergraph& graph, const std::filesystem::path& path);
Hypergraph load_hypergraph(const std::filesystem::path& path);

// Graphviz rendering: hyperedges become square connector nodes linked to
// their members.
std::string to_dot(const Hypergraph& graph);

}  // namespace hypersgg
