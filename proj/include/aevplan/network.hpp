#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aevplan {

using NodeId = std::int32_t;

struct Node {
  NodeId id = 0;
  std::string name;
  double gravity_weight = 0.0;
  double electricity_price = 0.0;                // currency per kWh
  std::optional<double> parking_capacity;        // vehicles; nullopt = unbounded
};

struct Arc {
  NodeId tail = 0;
  NodeId head = 0;
  double length_km = 0.0;
};

// Directed road network. Node ids are dense and equal to their position in
// nodes(). Validated on construction; immutable afterwards.
class Network {
 public:
  Network() = default;
  Network(std::vector<Node> nodes, std::vector<Arc> arcs);

  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Arc> arcs() const { return arcs_; }
  std::size_t node_count() const { return nodes_.size(); }
  const Node& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  bool contains(NodeId id) const { return id >= 0 && static_cast<std::size_t>(id) < nodes_.size(); }

  // Indices into arcs() leaving `id`, sorted by head.
  std::span<const std::size_t> out_arcs(NodeId id) const { return out_[static_cast<std::size_t>(id)]; }

  std::optional<NodeId> find(std::string_view name) const;
  const std::string& name(NodeId id) const { return node(id).name; }

 private:
  std::vector<Node> nodes_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> out_;
};

// Single-source shortest directed distances. Among equal-length routes the
// predecessor tree realizes the lexicographically smallest node sequence.
struct ShortestPathTree {
  NodeId source = 0;
  std::vector<double> distance;                  // +inf when unreachable
  std::vector<std::optional<NodeId>> predecessor;

  bool reachable(NodeId target) const;
  // Node sequence source..target; empty when unreachable.
  std::vector<NodeId> path_to(NodeId target) const;
};

ShortestPathTree shortest_path_lengths(const Network& net, NodeId source);

struct ExpandedArc {
  NodeId tail = 0;
  NodeId head = 0;
  double length_km = 0.0;
  bool is_original = false;
  std::vector<NodeId> witness_path;  // physical route tail..head
};

// Single-charge reachability closure of a road network: one arc (i, j) for
// every ordered pair whose shortest distance is at most the driving range.
class ExpandedNetwork {
 public:
  ExpandedNetwork() = default;
  ExpandedNetwork(Network base, std::vector<ExpandedArc> arcs, double range_km);

  const Network& base() const { return base_; }
  std::span<const ExpandedArc> arcs() const { return arcs_; }
  const ExpandedArc& arc(std::size_t index) const { return arcs_.at(index); }
  double range_km() const { return range_km_; }
  std::size_t node_count() const { return base_.node_count(); }

  std::span<const std::size_t> out_arcs(NodeId id) const { return out_[static_cast<std::size_t>(id)]; }
  std::optional<std::size_t> find_arc(NodeId tail, NodeId head) const;

 private:
  Network base_;
  std::vector<ExpandedArc> arcs_;
  double range_km_ = 0.0;
  std::vector<std::vector<std::size_t>> out_;
};

// Arcs are sorted by (tail, head). Throws InputError when range_km <= 0.
ExpandedNetwork expand_network(const Network& net, double range_km);

// Text network format:
//
//   # comment
//   node <name> <gravity_weight> <electricity_price> [parking_capacity]
//   arc  <tail-name> <head-name> <length_km>
//
// Node lines must precede the arcs that reference them. Ids are assigned in
// order of appearance.
Network parse_network(std::istream& in, const std::string& source = "<network>");
Network load_network(const std::filesystem::path& path);
void write_network(std::ostream& out, const Network& net);

}  // namespace aevplan
