#include "aevplan/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

#include "aevplan/error.hpp"
#include "aevplan/numeric.hpp"

namespace aevplan {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::vector<std::size_t>> build_out_index(std::size_t node_count, auto const& arcs) {
  std::vector<std::vector<std::size_t>> out(node_count);
  for (std::size_t a = 0; a < arcs.size(); ++a) out[static_cast<std::size_t>(arcs[a].tail)].push_back(a);
  for (auto& list : out) {
    std::stable_sort(list.begin(), list.end(),
                     [&](std::size_t l, std::size_t r) { return arcs[l].head < arcs[r].head; });
  }
  return out;
}

// Lexicographic comparison of the tree paths source..a and source..b.
bool tree_path_less(const std::vector<std::optional<NodeId>>& pred, NodeId a, NodeId b) {
  auto walk = [&](NodeId v) {
    std::vector<NodeId> seq;
    for (std::optional<NodeId> cur = v; cur; cur = pred[static_cast<std::size_t>(*cur)]) seq.push_back(*cur);
    std::reverse(seq.begin(), seq.end());
    return seq;
  };
  return walk(a) < walk(b);
}

}  // namespace

Network::Network(std::vector<Node> nodes, std::vector<Arc> arcs)
    : nodes_(std::move(nodes)), arcs_(std::move(arcs)) {
  std::set<std::string> names;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.id != static_cast<NodeId>(i)) throw InputError("node ids must be contiguous from 0");
    if (!(n.gravity_weight >= 0.0)) throw InputError("node '" + n.name + "': gravity_weight must be >= 0");
    if (!(n.electricity_price >= 0.0)) throw InputError("node '" + n.name + "': electricity_price must be >= 0");
    if (n.parking_capacity && !(*n.parking_capacity >= 0.0)) {
      throw InputError("node '" + n.name + "': parking_capacity must be >= 0");
    }
    if (!n.name.empty() && !names.insert(n.name).second) throw InputError("duplicate node name '" + n.name + "'");
  }
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const Arc& a : arcs_) {
    if (!contains(a.tail) || !contains(a.head)) throw InputError("arc references unknown node");
    if (a.tail == a.head) throw InputError("arc tail equals head (node " + std::to_string(a.tail) + ")");
    if (!(a.length_km > 0.0) || std::isinf(a.length_km)) throw InputError("arc length must be positive and finite");
    if (!seen.emplace(a.tail, a.head).second) {
      throw InputError("duplicate arc " + std::to_string(a.tail) + "->" + std::to_string(a.head));
    }
  }
  out_ = build_out_index(nodes_.size(), arcs_);
}

std::optional<NodeId> Network::find(std::string_view name) const {
  for (const Node& n : nodes_) {
    if (n.name == name) return n.id;
  }
  return std::nullopt;
}

bool ShortestPathTree::reachable(NodeId target) const {
  return std::isfinite(distance.at(static_cast<std::size_t>(target)));
}

std::vector<NodeId> ShortestPathTree::path_to(NodeId target) const {
  if (!reachable(target)) return {};
  std::vector<NodeId> seq;
  for (std::optional<NodeId> cur = target; cur; cur = predecessor[static_cast<std::size_t>(*cur)]) {
    seq.push_back(*cur);
  }
  std::reverse(seq.begin(), seq.end());
  return seq;
}

ShortestPathTree shortest_path_lengths(const Network& net, NodeId source) {
  if (!net.contains(source)) throw InputError("unknown source node id " + std::to_string(source));
  const std::size_t n = net.node_count();
  ShortestPathTree tree;
  tree.source = source;
  tree.distance.assign(n, kInf);
  tree.predecessor.assign(n, std::nullopt);
  std::vector<bool> settled(n, false);
  tree.distance[static_cast<std::size_t>(source)] = 0.0;

  // O(V^2) label setting keeps the lexicographic tie-breaking simple.
  for (std::size_t iter = 0; iter < n; ++iter) {
    std::optional<NodeId> u;
    for (std::size_t v = 0; v < n; ++v) {
      if (settled[v] || !std::isfinite(tree.distance[v])) continue;
      if (!u || tree.distance[v] < tree.distance[static_cast<std::size_t>(*u)]) u = static_cast<NodeId>(v);
    }
    if (!u) break;
    settled[static_cast<std::size_t>(*u)] = true;
    const double du = tree.distance[static_cast<std::size_t>(*u)];
    for (std::size_t a : net.out_arcs(*u)) {
      const Arc& arc = net.arcs()[a];
      const auto h = static_cast<std::size_t>(arc.head);
      if (settled[h]) continue;
      const double cand = du + arc.length_km;
      if (cand < tree.distance[h] && !nearly_equal(cand, tree.distance[h], 1e-12)) {
        tree.distance[h] = cand;
        tree.predecessor[h] = *u;
      } else if (nearly_equal(cand, tree.distance[h], 1e-12) && tree.predecessor[h] &&
                 tree_path_less(tree.predecessor, *u, *tree.predecessor[h])) {
        tree.predecessor[h] = *u;
      }
    }
  }
  return tree;
}

ExpandedNetwork::ExpandedNetwork(Network base, std::vector<ExpandedArc> arcs, double range_km)
    : base_(std::move(base)), arcs_(std::move(arcs)), range_km_(range_km) {
  out_ = build_out_index(base_.node_count(), arcs_);
}

std::optional<std::size_t> ExpandedNetwork::find_arc(NodeId tail, NodeId head) const {
  if (!base_.contains(tail)) return std::nullopt;
  for (std::size_t a : out_arcs(tail)) {
    if (arcs_[a].head == head) return a;
  }
  return std::nullopt;
}

ExpandedNetwork expand_network(const Network& net, double range_km) {
  if (!(range_km > 0.0)) throw InputError("driving range must be positive");
  std::set<std::pair<NodeId, NodeId>> original;
  for (const Arc& a : net.arcs()) original.emplace(a.tail, a.head);

  std::vector<ExpandedArc> arcs;
  for (const Node& src : net.nodes()) {
    const ShortestPathTree tree = shortest_path_lengths(net, src.id);
    for (const Node& dst : net.nodes()) {
      if (dst.id == src.id || !tree.reachable(dst.id)) continue;
      const double d = tree.distance[static_cast<std::size_t>(dst.id)];
      if (d > range_km) continue;
      ExpandedArc arc;
      arc.tail = src.id;
      arc.head = dst.id;
      arc.length_km = d;
      arc.witness_path = tree.path_to(dst.id);
      arc.is_original = arc.witness_path.size() == 2 && original.contains({src.id, dst.id});
      arcs.push_back(std::move(arc));
    }
  }
  return ExpandedNetwork(net, std::move(arcs), range_km);
}

Network parse_network(std::istream& in, const std::string& source) {
  std::vector<Node> nodes;
  std::vector<Arc> arcs;
  std::string line;
  std::size_t lineno = 0;
  auto lookup = [&](const std::string& name) -> NodeId {
    for (const Node& n : nodes) {
      if (n.name == name) return n.id;
    }
    throw ParseError(source, lineno, "unknown node '" + name + "'");
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    try {
      if (tok[0] == "node") {
        if (tok.size() != 4 && tok.size() != 5) {
          throw ParseError(source, lineno, "expected: node <name> <gravity> <price> [parking_capacity]");
        }
        Node n;
        n.id = static_cast<NodeId>(nodes.size());
        n.name = tok[1];
        for (const Node& other : nodes) {
          if (other.name == n.name) throw ParseError(source, lineno, "duplicate node '" + n.name + "'");
        }
        n.gravity_weight = parse_number(tok[2]);
        n.electricity_price = parse_number(tok[3]);
        if (tok.size() == 5 && tok[4] != "inf") n.parking_capacity = parse_number(tok[4]);
        nodes.push_back(std::move(n));
      } else if (tok[0] == "arc") {
        if (tok.size() != 4) throw ParseError(source, lineno, "expected: arc <tail> <head> <length_km>");
        arcs.push_back(Arc{lookup(tok[1]), lookup(tok[2]), parse_number(tok[3])});
      } else {
        throw ParseError(source, lineno, "unknown record '" + tok[0] + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(source, lineno, e.what());
    }
  }
  try {
    return Network(std::move(nodes), std::move(arcs));
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open network file '" + path.string() + "'");
  return parse_network(in, path.string());
}

void write_network(std::ostream& out, const Network& net) {
  out << "# node <name> <gravity_weight> <electricity_price> [parking_capacity]\n";
  for (const Node& n : net.nodes()) {
    out << "node " << n.name << ' ' << format_number(n.gravity_weight) << ' ' << format_number(n.electricity_price);
    if (n.parking_capacity) out << ' ' << format_number(*n.parking_capacity);
    out << '\n';
  }
  out << "# arc <tail> <head> <length_km>\n";
  for (const Arc& a : net.arcs()) {
    out << "arc " << net.name(a.tail) << ' ' << net.name(a.head) << ' ' << format_number(a.length_km) << '\n';
  }
}

}  // namespace aevplan
