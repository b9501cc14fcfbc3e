#include "aevplan/demand.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "aevplan/error.hpp"
#include "aevplan/numeric.hpp"

namespace aevplan {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

double DemandEntry::total() const { return std::accumulate(hourly.begin(), hourly.end(), 0.0); }

double DemandEntry::peak() const { return hourly.empty() ? 0.0 : *std::max_element(hourly.begin(), hourly.end()); }

DemandSet::DemandSet(int horizon, std::vector<DemandEntry> entries) : horizon_(horizon), entries_(std::move(entries)) {
  if (horizon_ < 1) throw InputError("demand horizon must be >= 1");
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const DemandEntry& e : entries_) {
    const std::string pair = std::to_string(e.origin) + "->" + std::to_string(e.destination);
    if (e.origin == e.destination) throw InputError("demand origin equals destination (" + pair + ")");
    if (static_cast<int>(e.hourly.size()) != horizon_) {
      throw InputError("demand " + pair + " has " + std::to_string(e.hourly.size()) + " volumes, expected " +
                       std::to_string(horizon_));
    }
    for (double v : e.hourly) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("demand " + pair + " has a negative or invalid volume");
    }
    if (!seen.emplace(e.origin, e.destination).second) throw InputError("duplicate demand pair " + pair);
  }
}

const DemandEntry* DemandSet::find(NodeId origin, NodeId destination) const {
  for (const DemandEntry& e : entries_) {
    if (e.origin == origin && e.destination == destination) return &e;
  }
  return nullptr;
}

double DemandSet::total() const {
  double sum = 0.0;
  for (const DemandEntry& e : entries_) sum += e.total();
  return sum;
}

std::vector<double> DemandSet::hourly_totals() const {
  std::vector<double> out(static_cast<std::size_t>(horizon_), 0.0);
  for (const DemandEntry& e : entries_) {
    for (std::size_t h = 0; h < out.size(); ++h) out[h] += e.hourly[h];
  }
  return out;
}

std::vector<double> peaked_profile(int horizon, int peak_hour, double peak_multiplier) {
  if (horizon < 1) throw InputError("profile horizon must be >= 1");
  if (peak_hour < 0 || peak_hour >= horizon) throw InputError("peak hour outside the horizon");
  if (!(peak_multiplier > 0.0)) throw InputError("peak multiplier must be > 0");
  std::vector<double> w(static_cast<std::size_t>(horizon), 1.0);
  w[static_cast<std::size_t>(peak_hour)] = peak_multiplier;
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= sum;
  return w;
}

GravityDemand gravity_demands(const Network& net, double daily_total, std::span<const double> profile, double beta) {
  if (!(daily_total >= 0.0)) throw InputError("daily_total must be >= 0");
  if (profile.empty()) throw InputError("time profile is empty");
  double profile_sum = 0.0;
  for (double p : profile) {
    if (!(p >= 0.0)) throw InputError("time profile weights must be >= 0");
    profile_sum += p;
  }
  if (!nearly_equal(profile_sum, 1.0, 1e-9)) throw InputError("time profile must sum to 1");
  const auto positive = std::count_if(net.nodes().begin(), net.nodes().end(),
                                      [](const Node& n) { return n.gravity_weight > 0.0; });
  if (positive < 2) throw InputError("gravity model needs at least two nodes with positive weight");

  struct Weighted {
    NodeId o, d;
    double w;
  };
  std::vector<Weighted> pairs;
  GravityDemand out;
  double total_weight = 0.0;
  for (const Node& o : net.nodes()) {
    if (o.gravity_weight <= 0.0) continue;
    const ShortestPathTree tree = shortest_path_lengths(net, o.id);
    for (const Node& d : net.nodes()) {
      if (d.id == o.id || d.gravity_weight <= 0.0) continue;
      if (!tree.reachable(d.id)) {
        out.skipped_pairs.emplace_back(o.id, d.id);
        continue;
      }
      const double dist = tree.distance[static_cast<std::size_t>(d.id)];
      const double w = o.gravity_weight * d.gravity_weight / std::pow(dist, beta);
      pairs.push_back({o.id, d.id, w});
      total_weight += w;
    }
  }
  if (!(total_weight > 0.0)) throw InputError("gravity weights are all zero (no reachable weighted pair)");

  std::vector<DemandEntry> entries;
  entries.reserve(pairs.size());
  for (const Weighted& p : pairs) {
    DemandEntry e{p.o, p.d, {}};
    e.hourly.reserve(profile.size());
    for (double share : profile) e.hourly.push_back(daily_total * share * p.w / total_weight);
    entries.push_back(std::move(e));
  }
  out.demands = DemandSet(static_cast<int>(profile.size()), std::move(entries));
  return out;
}

DemandSet parse_demands(std::istream& in, const Network& net, const std::string& source) {
  std::optional<int> horizon;
  std::vector<DemandEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::vector<std::string> f = split_csv(line);
    try {
      if (!horizon) {
        if (f.size() != 2 || f[0] != "horizon") throw ParseError(source, lineno, "expected header 'horizon,<T>'");
        const double t = parse_number(f[1]);
        if (t < 1 || t != std::floor(t)) throw ParseError(source, lineno, "horizon must be a positive integer");
        horizon = static_cast<int>(t);
        continue;
      }
      if (f.size() != static_cast<std::size_t>(*horizon) + 2) {
        throw ParseError(source, lineno,
                         "expected origin,destination and " + std::to_string(*horizon) + " hourly volumes");
      }
      const auto o = net.find(f[0]);
      const auto d = net.find(f[1]);
      if (!o) throw ParseError(source, lineno, "unknown origin '" + f[0] + "'");
      if (!d) throw ParseError(source, lineno, "unknown destination '" + f[1] + "'");
      DemandEntry e{*o, *d, {}};
      for (std::size_t i = 2; i < f.size(); ++i) e.hourly.push_back(parse_number(f[i]));
      entries.push_back(std::move(e));
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(source, lineno, e.what());
    }
  }
  if (!horizon) throw ParseError(source, lineno, "missing 'horizon,<T>' header");
  try {
    return DemandSet(*horizon, std::move(entries));
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
}

DemandSet load_demands(const std::filesystem::path& path, const Network& net) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open demand file '" + path.string() + "'");
  return parse_demands(in, net, path.string());
}

void write_demands(std::ostream& out, const DemandSet& demands, const Network& net) {
  out << "horizon," << demands.horizon() << '\n';
  for (const DemandEntry& e : demands.entries()) {
    out << net.name(e.origin) << ',' << net.name(e.destination);
    for (double v : e.hourly) out << ',' << format_number(v);
    out << '\n';
  }
}

}  // namespace aevplan
