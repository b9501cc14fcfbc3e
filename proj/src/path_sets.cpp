#include "aevplan/path_sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <set>

#include "aevplan/error.hpp"
#include "aevplan/numeric.hpp"

namespace aevplan {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Key {
  double primary = 0.0;
  double secondary = 0.0;
};

Key operator+(Key a, Key b) { return {a.primary + b.primary, a.secondary + b.secondary}; }

// -1, 0, +1 with tolerance on both components.
int compare(Key a, Key b) {
  if (!nearly_equal(a.primary, b.primary)) return a.primary < b.primary ? -1 : 1;
  if (!nearly_equal(a.secondary, b.secondary)) return a.secondary < b.secondary ? -1 : 1;
  return 0;
}

std::vector<Key> arc_keys(const PathContext& ctx, NodeId destination, Mode mode, PathRanking ranking) {
  const ExpandedNetwork& net = ctx.net();
  std::vector<Key> keys;
  keys.reserve(net.arcs().size());
  for (const ExpandedArc& a : net.arcs()) {
    const bool dest = a.head == destination;
    const double price = net.base().node(a.head).electricity_price;
    const double cost = arc_operation_cost(a.length_km, dest, ctx.vehicle, ctx.charger, mode, price, ctx.costs);
    if (ranking == PathRanking::OperationCost) {
      keys.push_back({cost, a.length_km});
    } else {
      keys.push_back({arc_occupancy_time(a.length_km, ctx.vehicle, ctx.charger), cost});
    }
  }
  return keys;
}

// Best path source -> target under the arc keys, ties broken by the
// lexicographically smallest node sequence. Blocked nodes and arcs are skipped.
std::optional<std::vector<NodeId>> best_path(const ExpandedNetwork& net, const std::vector<Key>& keys, NodeId source,
                                             NodeId target, const std::vector<char>& node_blocked,
                                             const std::vector<char>& arc_blocked) {
  const std::size_t n = net.node_count();
  std::vector<Key> dist(n, Key{kInf, kInf});
  std::vector<std::optional<NodeId>> pred(n);
  std::vector<char> reached(n, 0), settled(n, 0);
  auto seq = [&](NodeId v) {
    std::vector<NodeId> s;
    for (std::optional<NodeId> cur = v; cur; cur = pred[static_cast<std::size_t>(*cur)]) s.push_back(*cur);
    std::reverse(s.begin(), s.end());
    return s;
  };
  dist[static_cast<std::size_t>(source)] = Key{0.0, 0.0};
  reached[static_cast<std::size_t>(source)] = 1;
  for (;;) {
    std::optional<std::size_t> u;
    for (std::size_t v = 0; v < n; ++v) {
      if (!reached[v] || settled[v]) continue;
      if (!u || compare(dist[v], dist[*u]) < 0) u = v;
    }
    if (!u) break;
    settled[*u] = 1;
    if (static_cast<NodeId>(*u) == target) break;
    for (std::size_t a : net.out_arcs(static_cast<NodeId>(*u))) {
      if (arc_blocked[a]) continue;
      const auto h = static_cast<std::size_t>(net.arc(a).head);
      if (node_blocked[h] || settled[h]) continue;
      const Key cand = dist[*u] + keys[a];
      const int c = reached[h] ? compare(cand, dist[h]) : -1;
      bool smaller_sequence = false;
      if (c == 0) {
        std::vector<NodeId> via_u = seq(static_cast<NodeId>(*u)), via_pred = seq(*pred[h]);
        via_u.push_back(static_cast<NodeId>(h));
        via_pred.push_back(static_cast<NodeId>(h));
        smaller_sequence = via_u < via_pred;
      }
      if (c < 0 || smaller_sequence) {
        dist[h] = cand;
        pred[h] = static_cast<NodeId>(*u);
        reached[h] = 1;
      }
    }
  }
  if (!settled[static_cast<std::size_t>(target)]) return std::nullopt;
  return seq(target);
}

}  // namespace

Path path_metrics(std::span<const NodeId> nodes, const PathContext& ctx) {
  if (nodes.size() < 2) throw InputError("a path needs at least one arc");
  const ExpandedNetwork& net = ctx.net();
  std::set<NodeId> visited;
  for (NodeId v : nodes) {
    if (!net.base().contains(v)) throw InputError("path references unknown node " + std::to_string(v));
    if (!visited.insert(v).second) throw InputError("path repeats node " + std::to_string(v));
  }

  Path p;
  p.origin = nodes.front();
  p.destination = nodes.back();
  p.nodes.assign(nodes.begin(), nodes.end());
  double elapsed = 0.0;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const auto idx = net.find_arc(nodes[k], nodes[k + 1]);
    if (!idx) {
      throw InputError("no expanded arc " + std::to_string(nodes[k]) + "->" + std::to_string(nodes[k + 1]));
    }
    const ExpandedArc& arc = net.arc(*idx);
    const bool dest = k + 2 == nodes.size();
    const ArcTimes t = arc_times(arc.length_km, ctx.vehicle, ctx.charger);
    const double price = net.base().node(arc.head).electricity_price;
    p.arcs.push_back(*idx);
    p.length_km += arc.length_km;
    p.drive_hours += t.drive_hours;
    p.charge_hours += t.charge_hours;
    if (!dest) p.passenger_charge_hours += t.charge_hours;
    p.arrival_offsets_hours.push_back(elapsed + t.drive_hours);
    elapsed += t.occupancy_hours();
    p.electricity_cost += price * arc_grid_energy(arc.length_km, ctx.vehicle, ctx.charger);
    p.maintenance_cost += ctx.costs.maintenance_cost * arc.length_km;
  }
  p.passenger_hours = p.drive_hours + p.passenger_charge_hours;
  p.occupancy_hours = p.drive_hours + p.charge_hours;
  p.occupancy_slots = std::max(1, static_cast<int>(std::ceil(p.occupancy_hours - 1e-9)));
  p.goods_cost = p.electricity_cost + p.maintenance_cost;
  p.passenger_cost = ctx.costs.time_cost * p.passenger_hours + p.goods_cost;
  return p;
}

bool path_precedes(const Path& a, const Path& b, Mode mode, PathRanking ranking) {
  const Key ka = ranking == PathRanking::OperationCost ? Key{a.cost(mode), a.length_km}
                                                        : Key{a.occupancy_hours, a.cost(mode)};
  const Key kb = ranking == PathRanking::OperationCost ? Key{b.cost(mode), b.length_km}
                                                        : Key{b.occupancy_hours, b.cost(mode)};
  if (const int c = compare(ka, kb); c != 0) return c < 0;
  return a.nodes < b.nodes;
}

std::vector<Path> k_cheapest_paths(const PathContext& ctx, NodeId origin, NodeId destination, int k, Mode mode,
                                   PathRanking ranking) {
  const ExpandedNetwork& net = ctx.net();
  if (k < 1) throw InputError("k must be >= 1");
  if (!net.base().contains(origin) || !net.base().contains(destination)) throw InputError("unknown OD node");
  if (origin == destination) throw InputError("origin equals destination");

  const std::vector<Key> keys = arc_keys(ctx, destination, mode, ranking);
  std::vector<char> node_blocked(net.node_count(), 0);
  std::vector<char> arc_blocked(net.arcs().size(), 0);

  std::vector<Path> accepted;
  const auto first = best_path(net, keys, origin, destination, node_blocked, arc_blocked);
  if (!first) return accepted;
  accepted.push_back(path_metrics(*first, ctx));

  std::vector<Path> pending;
  std::set<std::vector<NodeId>> seen{*first};
  while (static_cast<int>(accepted.size()) < k) {
    const std::vector<NodeId> prev = accepted.back().nodes;
    for (std::size_t i = 0; i + 1 < prev.size(); ++i) {
      std::fill(node_blocked.begin(), node_blocked.end(), 0);
      std::fill(arc_blocked.begin(), arc_blocked.end(), 0);
      for (std::size_t r = 0; r < i; ++r) node_blocked[static_cast<std::size_t>(prev[r])] = 1;
      for (const Path& p : accepted) {
        if (p.nodes.size() > i + 1 && std::equal(prev.begin(), prev.begin() + static_cast<long>(i) + 1,
                                                 p.nodes.begin())) {
          arc_blocked[p.arcs[i]] = 1;
        }
      }
      const auto spur = best_path(net, keys, prev[i], destination, node_blocked, arc_blocked);
      if (!spur) continue;
      std::vector<NodeId> total(prev.begin(), prev.begin() + static_cast<long>(i));
      total.insert(total.end(), spur->begin(), spur->end());
      if (seen.insert(total).second) pending.push_back(path_metrics(total, ctx));
    }
    if (pending.empty()) break;
    auto best = std::min_element(pending.begin(), pending.end(), [&](const Path& a, const Path& b) {
      return path_precedes(a, b, mode, ranking);
    });
    accepted.push_back(std::move(*best));
    pending.erase(best);
  }
  return accepted;
}

double delta_cost(const Path& candidate, const Path& base, double flow, const PathContext& ctx, Mode mode) {
  if (candidate.origin != base.origin || candidate.destination != base.destination) {
    throw InputError("delta_cost: paths belong to different OD pairs");
  }
  if (!(flow >= 0.0)) throw InputError("delta_cost: flow must be >= 0");
  const CostParams& c = ctx.costs;
  double delta = 365.0 * (base.cost(mode) - candidate.cost(mode)) * flow;
  if (candidate.occupancy_hours < base.occupancy_hours &&
      !nearly_equal(candidate.occupancy_hours, base.occupancy_hours)) {
    delta += c.capital_recovery * c.aev_cost * flow;
  }
  double released_charge_hours = 0.0;
  for (std::size_t a : base.arcs) {
    if (std::find(candidate.arcs.begin(), candidate.arcs.end(), a) != candidate.arcs.end()) continue;
    released_charge_hours += arc_times(ctx.net().arc(a).length_km, ctx.vehicle, ctx.charger).charge_hours;
  }
  delta += c.capital_recovery * c.charger_cost * c.charger_margin * released_charge_hours * flow;
  return delta;
}

PruneResult prune_loaded(std::span<const Path> candidates, double warmup_objective, double gap, double flow_scale,
                         const PathContext& ctx, Mode mode) {
  if (candidates.empty()) throw InputError("prune_loaded: no candidate paths");
  if (!(gap >= 0.0)) throw InputError("prune_loaded: gap must be >= 0");
  PruneResult out;
  out.candidates = candidates.size();
  out.kept.push_back(candidates.front());
  const double threshold = gap * warmup_objective;
  for (std::size_t q = 1; q < candidates.size(); ++q) {
    if (delta_cost(candidates[q], candidates.front(), flow_scale, ctx, mode) > threshold) {
      out.kept.push_back(candidates[q]);
    }
  }
  return out;
}

std::vector<OdPaths> relocation_pathsets(const PathContext& ctx) {
  std::vector<OdPaths> out;
  for (const ExpandedArc& a : ctx.net().arcs()) {
    const NodeId hop[2] = {a.tail, a.head};
    out.push_back(OdPaths{a.tail, a.head, {path_metrics(hop, ctx)}});
  }
  return out;
}

std::vector<OdPaths> enumerated_relocation_pathsets(const PathContext& ctx, int k) {
  std::vector<OdPaths> out;
  const auto n = static_cast<NodeId>(ctx.net().node_count());
  for (NodeId o = 0; o < n; ++o) {
    for (NodeId d = 0; d < n; ++d) {
      if (o == d) continue;
      std::vector<Path> paths = k_cheapest_paths(ctx, o, d, k, Mode::Goods);
      if (!paths.empty()) out.push_back(OdPaths{o, d, std::move(paths)});
    }
  }
  return out;
}

const OdPaths* PathCatalog::find_loaded(NodeId origin, NodeId destination) const {
  for (const OdPaths& od : loaded) {
    if (od.origin == origin && od.destination == destination) return &od;
  }
  return nullptr;
}

std::size_t PathCatalog::loaded_path_count() const {
  std::size_t n = 0;
  for (const OdPaths& od : loaded) n += od.paths.size();
  return n;
}

std::size_t PathCatalog::relocation_path_count() const {
  std::size_t n = 0;
  for (const OdPaths& od : relocation) n += od.paths.size();
  return n;
}

void write_catalog(std::ostream& out, const PathCatalog& catalog, const Network& net) {
  out << "kind,origin,destination,index,nodes,length_km,drive_hours,charge_hours,passenger_hours,"
         "occupancy_hours,occupancy_slots,passenger_cost,goods_cost\n";
  auto emit = [&](const char* kind, const std::vector<OdPaths>& sets) {
    for (const OdPaths& od : sets) {
      for (std::size_t q = 0; q < od.paths.size(); ++q) {
        const Path& p = od.paths[q];
        out << kind << ',' << net.name(od.origin) << ',' << net.name(od.destination) << ',' << q << ',';
        for (std::size_t i = 0; i < p.nodes.size(); ++i) out << (i ? " " : "") << net.name(p.nodes[i]);
        out << ',' << format_number(p.length_km) << ',' << format_number(p.drive_hours) << ','
            << format_number(p.charge_hours) << ',' << format_number(p.passenger_hours) << ','
            << format_number(p.occupancy_hours) << ',' << p.occupancy_slots << ','
            << format_number(p.passenger_cost) << ',' << format_number(p.goods_cost) << '\n';
      }
    }
  };
  emit("loaded", catalog.loaded);
  emit("relocation", catalog.relocation);
}

}  // namespace aevplan
