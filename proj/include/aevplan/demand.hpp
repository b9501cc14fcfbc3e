#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aevplan/network.hpp"

namespace aevplan {

struct DemandEntry {
  NodeId origin = 0;
  NodeId destination = 0;
  std::vector<double> hourly;  // vehicles departing during each hour

  double total() const;
  double peak() const;
};

// Hourly origin-destination trip rates over a cyclic horizon of T hours.
class DemandSet {
 public:
  DemandSet() = default;
  // Validates: origin != destination, volumes >= 0 and finite, one entry per
  // ordered pair, every entry has exactly `horizon` volumes.
  DemandSet(int horizon, std::vector<DemandEntry> entries);

  int horizon() const { return horizon_; }
  std::span<const DemandEntry> entries() const { return entries_; }
  const DemandEntry* find(NodeId origin, NodeId destination) const;
  double total() const;
  // Total over all pairs in each hour.
  std::vector<double> hourly_totals() const;

 private:
  int horizon_ = 24;
  std::vector<DemandEntry> entries_;
};

// Hour weights summing to 1: flat, with one hour scaled by `peak_multiplier`.
std::vector<double> peaked_profile(int horizon, int peak_hour, double peak_multiplier);

struct GravityDemand {
  DemandSet demands;
  std::vector<std::pair<NodeId, NodeId>> skipped_pairs;  // positive weights but unreachable
};

// Gravity spatial interaction: pair weight w_o w_d / dist(o, d)^beta over all
// ordered reachable pairs, normalized so the set totals `daily_total` trips.
// Pairs with zero weight product are omitted.
GravityDemand gravity_demands(const Network& net, double daily_total, std::span<const double> profile,
                              double beta = 2.0);

// Demand file format:
//
//   # comment
//   horizon,<T>
//   <origin>,<destination>,<v_0>,...,<v_{T-1}>
//
// Node names resolve against `net`.
DemandSet parse_demands(std::istream& in, const Network& net, const std::string& source = "<demands>");
DemandSet load_demands(const std::filesystem::path& path, const Network& net);
void write_demands(std::ostream& out, const DemandSet& demands, const Network& net);

}  // namespace aevplan
