#pragma once

#include <string>
#include <string_view>

#include "aevplan/network.hpp"

namespace aevplan {

// Default reserve deducted from the nameplate capacity when computing range.
inline constexpr double kDefaultReserveKwh = 15.0;

struct VehicleSpec {
  double battery_kwh = 75.0;
  double reserve_kwh = kDefaultReserveKwh;
  double efficiency_kwh_per_km = 0.18275;
  double speed_kmh = 100.0;

  double usable_kwh() const { return battery_kwh - reserve_kwh; }
  double range_km() const { return usable_kwh() / efficiency_kwh_per_km; }

  // Throws InputError unless B > reserve >= 0, efficiency > 0, speed > 0.
  void validate() const;
};

struct ChargerSpec {
  double power_kw = 100.0;
  double efficiency = 0.92;
  double lifetime_years = 15.0;

  void validate() const;
};

struct CostParams {
  double aev_cost = 45000.0;          // per vehicle
  double charger_cost = 92500.0;      // per charger
  double time_cost = 22.62;           // per passenger hour
  double maintenance_cost = 0.025;    // per km
  double discount_rate = 0.08;
  double lifetime_years = 15.0;
  double capital_recovery = 0.0;      // annuity factor, see capital_recovery()
  double charger_margin = 1.2;        // alpha >= 1

  void validate() const;
};

enum class Mode { Passenger, Goods };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

// r (1+r)^Y / ((1+r)^Y - 1). Throws InputError for r <= 0 or Y < 1.
double capital_recovery(double rate, double years);

// Vehicle efficiency as a function of nameplate battery capacity (kWh/km).
double efficiency_for_battery(double battery_kwh);

struct DerivedParameters {
  CostParams costs;
  double efficiency_kwh_per_km = 0.0;
};

// Unit costs from battery capacity and charger spec: vehicle price, charger
// price, efficiency, maintenance and passenger time cost defaults, and the
// capital recovery factor for (rate, years).
DerivedParameters derive_unit_costs(double battery_kwh, const ChargerSpec& charger, double rate, double years);

struct ArcTimes {
  double drive_hours = 0.0;
  double charge_hours = 0.0;  // full recharge of the energy used on the arc
  double occupancy_hours() const { return drive_hours + charge_hours; }
};

// Throws InfeasibleError when the arc exceeds the vehicle range.
ArcTimes arc_times(double length_km, const VehicleSpec& veh, const ChargerSpec& charger);

// Time a passenger spends on the arc; the recharge at the destination is not
// charged to the passenger.
double arc_passenger_time(double length_km, bool is_destination_arc, const VehicleSpec& veh,
                          const ChargerSpec& charger);
double arc_passenger_time(const ExpandedArc& arc, bool is_destination_arc, const VehicleSpec& veh,
                          const ChargerSpec& charger);

// Time the vehicle is unavailable (driving plus recharge, always).
double arc_occupancy_time(double length_km, const VehicleSpec& veh, const ChargerSpec& charger);

// Energy drawn from the grid to recharge after the arc, kWh.
double arc_grid_energy(double length_km, const VehicleSpec& veh, const ChargerSpec& charger);

// c^t * t + c_j^e * xi l / eta + c^m * l, with c^t = 0 in goods mode.
double arc_operation_cost(double length_km, bool is_destination_arc, const VehicleSpec& veh,
                          const ChargerSpec& charger, Mode mode, double price_at_head, const CostParams& costs);
double arc_operation_cost(const ExpandedArc& arc, bool is_destination_arc, const VehicleSpec& veh,
                          const ChargerSpec& charger, Mode mode, double price_at_head, const CostParams& costs);

// Empty relocation trips never carry a time cost.
double arc_relocation_cost(double length_km, const VehicleSpec& veh, const ChargerSpec& charger,
                           double price_at_head, const CostParams& costs);

}  // namespace aevplan
