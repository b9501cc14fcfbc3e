#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "aevplan/harness.hpp"

namespace fixture {

inline std::filesystem::path data(const std::string& name) { return std::filesystem::path(AEVPLAN_DATA_DIR) / name; }

// Scenarios small enough for exhaustive integer enumeration (<= 3 nodes, <= 2 OD pairs).
inline const std::vector<std::string> kSmallScenarios = {
    "toy2.yaml", "toy2_bidir.yaml", "line3.yaml", "tri3.yaml", "tri3_short.yaml", "imbalance3.yaml", "sweep2.yaml",
};

inline aevplan::ScenarioConfig config(const std::string& yaml, const std::vector<std::string>& overrides = {}) {
  aevplan::ScenarioConfig c = aevplan::ScenarioConfig::load(data(yaml));
  for (const auto& o : overrides) c.set_assignment(o);
  return c;
}

inline aevplan::PreparedScenario prepared(const std::string& yaml, const std::vector<std::string>& overrides = {}) {
  return aevplan::prepare(aevplan::resolve(config(yaml, overrides)));
}

inline aevplan::PathCatalog catalog(const aevplan::PreparedScenario& p, aevplan::Strategy strategy,
                                    aevplan::Mode mode) {
  double obj0 = 0.0;
  if (strategy == aevplan::Strategy::Optimal || strategy == aevplan::Strategy::NoRelocation) {
    obj0 = aevplan::warmup_objective(p, mode).objective;
  }
  return aevplan::build_catalog(p, strategy, mode, obj0);
}

inline aevplan::PlanProblem problem(const aevplan::PreparedScenario& p, const aevplan::PathCatalog& cat,
                                    aevplan::Strategy strategy, aevplan::Mode mode) {
  return aevplan::build_problem(aevplan::PlanInputs{p.context(), &p.demands, &cat, mode, strategy,
                                                    p.scenario.relocation_window_hours});
}

inline aevplan::PlanProblem problem(const aevplan::PreparedScenario& p, aevplan::Strategy strategy,
                                    aevplan::Mode mode) {
  const aevplan::PathCatalog cat = catalog(p, strategy, mode);
  return problem(p, cat, strategy, mode);
}

// Candidate sets without any pruning: the k cheapest paths for every pair.
inline aevplan::PathCatalog unpruned_catalog(const aevplan::PreparedScenario& p, aevplan::Mode mode) {
  aevplan::PathCatalog cat;
  const aevplan::PathContext ctx = p.context();
  for (const auto& e : p.demands.entries()) {
    if (!(e.total() > 0.0)) continue;
    cat.loaded.push_back({e.origin, e.destination,
                          aevplan::k_cheapest_paths(ctx, e.origin, e.destination, p.scenario.k, mode)});
  }
  cat.relocation = aevplan::relocation_pathsets(ctx);
  return cat;
}

inline bool relative_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace fixture
