#include "aevplan/cost_model.hpp"

#include <cmath>

#include "aevplan/error.hpp"
#include "aevplan/numeric.hpp"

namespace aevplan {

void VehicleSpec::validate() const {
  if (!(reserve_kwh >= 0.0)) throw InputError("vehicle reserve_kwh must be >= 0");
  if (!(battery_kwh > reserve_kwh)) throw InputError("vehicle battery_kwh must exceed reserve_kwh");
  if (!(efficiency_kwh_per_km > 0.0)) throw InputError("vehicle efficiency must be > 0");
  if (!(speed_kmh > 0.0)) throw InputError("vehicle speed must be > 0");
}

void ChargerSpec::validate() const {
  if (!(power_kw > 0.0)) throw InputError("charger power must be > 0");
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw InputError("charger efficiency must be in (0, 1]");
  if (!(lifetime_years > 0.0)) throw InputError("charger lifetime must be > 0");
}

void CostParams::validate() const {
  if (!(aev_cost >= 0.0 && charger_cost >= 0.0 && time_cost >= 0.0 && maintenance_cost >= 0.0)) {
    throw InputError("cost parameters must be >= 0");
  }
  if (!(capital_recovery > 0.0)) throw InputError("capital recovery factor must be > 0");
  if (!(charger_margin >= 1.0)) throw InputError("charger margin alpha must be >= 1");
}

std::string_view to_string(Mode mode) { return mode == Mode::Passenger ? "passenger" : "goods"; }

Mode parse_mode(std::string_view text) {
  if (text == "passenger") return Mode::Passenger;
  if (text == "goods") return Mode::Goods;
  throw InputError("unknown mode '" + std::string(text) + "' (expected passenger|goods)");
}

double capital_recovery(double rate, double years) {
  if (!(rate > 0.0)) throw InputError("discount rate must be > 0");
  if (!(years >= 1.0)) throw InputError("lifetime must be >= 1 year");
  const double growth = std::pow(1.0 + rate, years);
  return rate * growth / (growth - 1.0);
}

double efficiency_for_battery(double battery_kwh) { return 0.155 + 0.00037 * battery_kwh; }

DerivedParameters derive_unit_costs(double battery_kwh, const ChargerSpec& charger, double rate, double years) {
  DerivedParameters out;
  out.costs.aev_cost = 30000.0 + 200.0 * battery_kwh;
  out.costs.charger_cost = (700.0 + 15.0 * years) * charger.power_kw;
  out.costs.time_cost = 22.62;
  out.costs.maintenance_cost = 0.025;
  out.costs.discount_rate = rate;
  out.costs.lifetime_years = years;
  out.costs.capital_recovery = capital_recovery(rate, years);
  out.efficiency_kwh_per_km = efficiency_for_battery(battery_kwh);
  return out;
}

ArcTimes arc_times(double length_km, const VehicleSpec& veh, const ChargerSpec& charger) {
  if (length_km < 0.0) throw InputError("arc length must be >= 0");
  if (length_km > veh.range_km() && !nearly_equal(length_km, veh.range_km(), 1e-12)) {
    throw InfeasibleError("arc of " + format_number(length_km) + " km exceeds vehicle range " +
                          format_number(veh.range_km()) + " km");
  }
  ArcTimes t;
  t.drive_hours = length_km / veh.speed_kmh;
  t.charge_hours = veh.efficiency_kwh_per_km * length_km / (charger.efficiency * charger.power_kw);
  return t;
}

double arc_passenger_time(double length_km, bool is_destination_arc, const VehicleSpec& veh,
                          const ChargerSpec& charger) {
  const ArcTimes t = arc_times(length_km, veh, charger);
  return is_destination_arc ? t.drive_hours : t.drive_hours + t.charge_hours;
}

double arc_passenger_time(const ExpandedArc& arc, bool is_destination_arc, const VehicleSpec& veh,
                          const ChargerSpec& charger) {
  return arc_passenger_time(arc.length_km, is_destination_arc, veh, charger);
}

double arc_occupancy_time(double length_km, const VehicleSpec& veh, const ChargerSpec& charger) {
  return arc_times(length_km, veh, charger).occupancy_hours();
}

double arc_grid_energy(double length_km, const VehicleSpec& veh, const ChargerSpec& charger) {
  return veh.efficiency_kwh_per_km * length_km / charger.efficiency;
}

double arc_operation_cost(double length_km, bool is_destination_arc, const VehicleSpec& veh,
                          const ChargerSpec& charger, Mode mode, double price_at_head, const CostParams& costs) {
  const double time_cost = mode == Mode::Goods ? 0.0 : costs.time_cost;
  return time_cost * arc_passenger_time(length_km, is_destination_arc, veh, charger) +
         price_at_head * arc_grid_energy(length_km, veh, charger) + costs.maintenance_cost * length_km;
}

double arc_operation_cost(const ExpandedArc& arc, bool is_destination_arc, const VehicleSpec& veh,
                          const ChargerSpec& charger, Mode mode, double price_at_head, const CostParams& costs) {
  return arc_operation_cost(arc.length_km, is_destination_arc, veh, charger, mode, price_at_head, costs);
}

double arc_relocation_cost(double length_km, const VehicleSpec& veh, const ChargerSpec& charger,
                           double price_at_head, const CostParams& costs) {
  return arc_operation_cost(length_km, true, veh, charger, Mode::Goods, price_at_head, costs);
}

}  // namespace aevplan
