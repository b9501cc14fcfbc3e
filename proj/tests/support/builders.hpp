#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aevplan/network.hpp"

namespace fixture {

inline aevplan::Network network_from_text(const std::string& text) {
  std::istringstream in(text);
  return aevplan::parse_network(in, "<test>");
}

// Random directed network with integer arc lengths (exact float sums).
inline aevplan::Network random_network(std::mt19937& rng, int nodes, double arc_probability) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> len(10, 120);
  std::vector<aevplan::Node> ns;
  for (int i = 0; i < nodes; ++i) {
    ns.push_back({i, "n" + std::to_string(i), 1.0 + u(rng) * 4.0, 0.1 + 0.2 * u(rng), std::nullopt});
  }
  std::vector<aevplan::Arc> arcs;
  for (int i = 0; i < nodes; ++i) {
    for (int j = 0; j < nodes; ++j) {
      if (i != j && u(rng) < arc_probability) arcs.push_back({i, j, static_cast<double>(len(rng))});
    }
  }
  return aevplan::Network(std::move(ns), std::move(arcs));
}

}  // namespace fixture
