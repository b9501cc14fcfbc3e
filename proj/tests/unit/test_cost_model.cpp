#include <doctest.h>

#include <cmath>
#include <random>

#include "aevplan/cost_model.hpp"
#include "aevplan/error.hpp"

using namespace aevplan;

namespace {

// Annuity from the present value of a unit payment stream.
double annuity(double r, int years) {
  double pv = 0.0;
  for (int t = 1; t <= years; ++t) pv += 1.0 / std::pow(1.0 + r, t);
  return 1.0 / pv;
}

VehicleSpec base_vehicle() { return VehicleSpec{75.0, 15.0, 0.18275, 100.0}; }

}  // namespace

TEST_SUITE("cost_model") {

TEST_CASE("capital recovery factor") {
  CHECK(capital_recovery(0.08, 15) == doctest::Approx(0.11683).epsilon(1e-4));
  CHECK(std::abs(capital_recovery(0.08, 15) - 0.11683) < 1e-5);
  for (double r : {0.01, 0.05, 0.08, 0.12}) {
    for (int y : {1, 5, 15, 30}) CHECK(capital_recovery(r, y) == doctest::Approx(annuity(r, y)).epsilon(1e-12));
  }
  CHECK(capital_recovery(0.08, 1) == doctest::Approx(1.08).epsilon(1e-14));
  CHECK(capital_recovery(0.10, 15) > capital_recovery(0.08, 15));
  CHECK_THROWS_AS(capital_recovery(0.0, 15), InputError);
  CHECK_THROWS_AS(capital_recovery(0.08, 0), InputError);
}

TEST_CASE("unit costs from battery size and charger power") {
  ChargerSpec charger;
  const DerivedParameters p = derive_unit_costs(75.0, charger, 0.08, 15.0);
  CHECK(p.costs.aev_cost == 45000.0);
  CHECK(p.costs.charger_cost == 92500.0);
  CHECK(p.efficiency_kwh_per_km == 0.155 + 0.00037 * 75.0);
  CHECK(std::abs(p.efficiency_kwh_per_km - 0.18275) < 1e-15);
  CHECK(p.costs.time_cost == 22.62);
  CHECK(p.costs.maintenance_cost == 0.025);
  CHECK(derive_unit_costs(60.0, charger, 0.08, 15.0).costs.aev_cost == 42000.0);
  CHECK(efficiency_for_battery(0.0) == 0.155);
  charger.power_kw = 50.0;
  CHECK(derive_unit_costs(75.0, charger, 0.08, 15.0).costs.charger_cost == 46250.0);
  CHECK(derive_unit_costs(75.0, charger, 0.08, 10.0).costs.charger_cost == (700.0 + 150.0) * 50.0);
}

TEST_CASE("range deducts the reserve from the nameplate capacity") {
  const VehicleSpec v = base_vehicle();
  CHECK(v.range_km() == doctest::Approx(60.0 / 0.18275).epsilon(1e-14));
  VehicleSpec bad = v;
  bad.battery_kwh = 10.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = v;
  bad.speed_kmh = 0.0;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("arc times") {
  const VehicleSpec v = base_vehicle();
  const ChargerSpec c;
  const ArcTimes t = arc_times(100.0, v, c);
  CHECK(t.drive_hours == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(t.charge_hours == doctest::Approx(18.275 / 92.0).epsilon(1e-14));
  CHECK(t.occupancy_hours() == doctest::Approx(1.19864).epsilon(1e-5));
  CHECK(arc_passenger_time(100.0, false, v, c) == doctest::Approx(1.19864).epsilon(1e-5));
  CHECK(arc_passenger_time(100.0, true, v, c) == 1.0);
  CHECK(arc_passenger_time(0.0, false, v, c) == 0.0);
  CHECK(arc_occupancy_time(100.0, v, c) == t.occupancy_hours());
  CHECK(arc_grid_energy(100.0, v, c) == doctest::Approx(18.275 / 0.92).epsilon(1e-14));
  CHECK_THROWS_AS(arc_times(v.range_km() + 1.0, v, c), InfeasibleError);
}

TEST_CASE("arc operation cost") {
  const VehicleSpec v = base_vehicle();
  const ChargerSpec c;
  CostParams k;
  const double electricity = 0.12 * 18.275 / 0.92;
  const double passenger = 22.62 * (1.0 + 18.275 / 92.0) + electricity + 2.5;
  CHECK(arc_operation_cost(100.0, false, v, c, Mode::Passenger, 0.12, k) == doctest::Approx(passenger).epsilon(1e-12));
  CHECK(arc_operation_cost(100.0, false, v, c, Mode::Passenger, 0.12, k) == doctest::Approx(31.997).epsilon(1e-4));
  CHECK(arc_operation_cost(100.0, false, v, c, Mode::Goods, 0.12, k) == doctest::Approx(4.884).epsilon(1e-3));
  CHECK(arc_operation_cost(100.0, true, v, c, Mode::Passenger, 0.12, k) ==
        doctest::Approx(22.62 + electricity + 2.5).epsilon(1e-12));
  const double doubled = arc_operation_cost(100.0, false, v, c, Mode::Passenger, 0.24, k) -
                         arc_operation_cost(100.0, false, v, c, Mode::Passenger, 0.12, k);
  CHECK(doubled == doctest::Approx(electricity).epsilon(1e-12));
  CHECK(arc_relocation_cost(100.0, v, c, 0.12, k) == arc_operation_cost(100.0, true, v, c, Mode::Goods, 0.12, k));
}

TEST_CASE("goods cost equals passenger cost with zero time cost; linearity in each rate") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> len(0.0, 300.0), price(0.0, 0.5), rate(0.0, 50.0);
  const VehicleSpec v = base_vehicle();
  const ChargerSpec c;
  for (int i = 0; i < 200; ++i) {
    const double l = len(rng), p = price(rng);
    const bool dest = i % 2 == 0;
    CostParams k;
    k.time_cost = rate(rng);
    CostParams k0 = k;
    k0.time_cost = 0.0;
    CHECK(arc_operation_cost(l, dest, v, c, Mode::Goods, p, k) ==
          arc_operation_cost(l, dest, v, c, Mode::Passenger, p, k0));

    // f(a + b) = f(a) + f(b) - f(0) in each rate separately.
    auto with = [&](double ct, double ce, double cm) {
      CostParams q;
      q.time_cost = ct;
      q.maintenance_cost = cm;
      return arc_operation_cost(l, dest, v, c, Mode::Passenger, ce, q);
    };
    const double a = rate(rng), b = rate(rng);
    CHECK(with(a + b, p, 0.025) == doctest::Approx(with(a, p, 0.025) + with(b, p, 0.025) - with(0, p, 0.025)));
    CHECK(with(22.62, a + b, 0.025) ==
          doctest::Approx(with(22.62, a, 0.025) + with(22.62, b, 0.025) - with(22.62, 0, 0.025)));
    CHECK(with(22.62, p, a + b) == doctest::Approx(with(22.62, p, a) + with(22.62, p, b) - with(22.62, p, 0)));

    const double occ = arc_occupancy_time(l, v, c);
    CHECK(occ >= arc_passenger_time(l, dest, v, c));
    CHECK(occ == arc_passenger_time(l, false, v, c));
    if (l > 0.0) CHECK(occ > arc_passenger_time(l, true, v, c));
  }
}

TEST_CASE("mode names") {
  CHECK(parse_mode("passenger") == Mode::Passenger);
  CHECK(parse_mode("goods") == Mode::Goods);
  CHECK(to_string(Mode::Goods) == "goods");
  CHECK_THROWS_AS(parse_mode("freight"), InputError);
}

}
