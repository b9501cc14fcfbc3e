#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "aevplan/cost_model.hpp"
#include "aevplan/network.hpp"

namespace aevplan {

// Everything needed to price a route on the expanded network.
struct PathContext {
  const ExpandedNetwork* network = nullptr;
  VehicleSpec vehicle;
  ChargerSpec charger;
  CostParams costs;

  const ExpandedNetwork& net() const { return *network; }
};

// A range-feasible route over expanded arcs with per-trip metrics.
struct Path {
  NodeId origin = 0;
  NodeId destination = 0;
  std::vector<NodeId> nodes;
  std::vector<std::size_t> arcs;  // indices into ExpandedNetwork::arcs()

  double length_km = 0.0;
  double drive_hours = 0.0;
  double charge_hours = 0.0;             // every recharge, destination included
  double passenger_charge_hours = 0.0;   // recharges before the destination
  double passenger_hours = 0.0;
  double occupancy_hours = 0.0;
  int occupancy_slots = 1;               // whole hours the vehicle is busy, ceil(occupancy)

  double electricity_cost = 0.0;  // per trip
  double maintenance_cost = 0.0;  // per trip
  double passenger_cost = 0.0;    // time + electricity + maintenance
  double goods_cost = 0.0;        // electricity + maintenance

  // Per arc: hours elapsed from departure until the vehicle reaches the arc head.
  std::vector<double> arrival_offsets_hours;

  double cost(Mode mode) const { return mode == Mode::Passenger ? passenger_cost : goods_cost; }
};

// Aggregates arc metrics along `nodes`; the final arc is the destination arc.
// Throws InputError for fewer than two nodes, repeated nodes, or a hop that is
// not an expanded arc.
Path path_metrics(std::span<const NodeId> nodes, const PathContext& ctx);

enum class PathRanking {
  OperationCost,  // per-trip cost, then length, then node sequence
  OccupancyTime,  // occupancy hours, then per-trip cost, then node sequence
};

// Strict total order used for enumeration output.
bool path_precedes(const Path& a, const Path& b, Mode mode, PathRanking ranking = PathRanking::OperationCost);

// The k best simple paths origin -> destination under `ranking` (Yen's
// algorithm). Fewer are returned when fewer exist; empty when unreachable.
std::vector<Path> k_cheapest_paths(const PathContext& ctx, NodeId origin, NodeId destination, int k, Mode mode,
                                   PathRanking ranking = PathRanking::OperationCost);

// Upper bound on the annual system saving from moving `flow` vehicles/hour
// from `base` (the min-operation path) onto `candidate`: operation cost
// difference, plus the fleet saving if the candidate is faster, plus the
// charger saving on base arcs the candidate no longer visits.
double delta_cost(const Path& candidate, const Path& base, double flow, const PathContext& ctx, Mode mode);

struct PruneResult {
  std::vector<Path> kept;
  std::size_t candidates = 0;
};

// Keeps candidates[0] and every candidate with delta_cost > gap * warmup_objective.
PruneResult prune_loaded(std::span<const Path> candidates, double warmup_objective, double gap, double flow_scale,
                         const PathContext& ctx, Mode mode);

struct OdPaths {
  NodeId origin = 0;
  NodeId destination = 0;
  std::vector<Path> paths;
};

// One single-arc relocation path per expanded arc (adjacent relocation only).
std::vector<OdPaths> relocation_pathsets(const PathContext& ctx);

// The k cheapest relocation paths for every ordered pair connected in the
// expanded network. Only used to check the adjacent-only reduction.
std::vector<OdPaths> enumerated_relocation_pathsets(const PathContext& ctx, int k);

struct CatalogStats {
  int k = 0;
  double gap = 0.0;
  std::size_t candidate_paths = 0;  // loaded paths before pruning
  std::size_t kept_paths = 0;       // loaded paths after pruning
};

struct PathCatalog {
  std::vector<OdPaths> loaded;      // ordered by (origin, destination)
  std::vector<OdPaths> relocation;  // ordered by (origin, destination)
  CatalogStats stats;

  const OdPaths* find_loaded(NodeId origin, NodeId destination) const;
  std::size_t loaded_path_count() const;
  std::size_t relocation_path_count() const;
};

// One CSV record per path: kind,origin,destination,index,nodes,metrics...
void write_catalog(std::ostream& out, const PathCatalog& catalog, const Network& net);

}  // namespace aevplan
