#include "evsim/charging.hpp"

namespace evsim::charging {

double trip_energy(double distance_km, double mileage_kwh_per_km) { return distance_km * mileage_kwh_per_km; }

TripOutcome apply_trip(const fleet::EvState& ev, double energy_kwh)
{
    TripOutcome out{ev, 0.0, false};
    if (energy_kwh > ev.soc_kwh) {
        out.infeasible = true;
        out.consumed_kwh = ev.soc_kwh;
        out.ev.soc_kwh = 0.0;
    } else {
        out.consumed_kwh = energy_kwh;
        out.ev.soc_kwh = ev.soc_kwh - energy_kwh;
    }
    return out;
}

HourCharge charging_load_for_hour(double soc_kwh, double capacity_kwh, double power_kw,
                                  double hour_fraction_available)
{
    const double available = power_kw * hour_fraction_available;
    const double deficit = capacity_kwh - soc_kwh;
    if (deficit <= 0.0) {
        return {0.0, soc_kwh, true};
    }
    if (available >= deficit) {
        return {deficit, capacity_kwh, true};
    }
    return {available, soc_kwh + available, false};
}

HourCharge charge_hour(fleet::EvState& ev, const fleet::EvModel& model, double power_kw,
                       double hour_fraction_available)
{
    const auto step = charging_load_for_hour(ev.soc_kwh, model.battery_capacity_kwh, power_kw, hour_fraction_available);
    ev.soc_kwh = step.soc_kwh;
    if (step.full) {
        ev.status = fleet::EvStatus::home_idle;
    }
    return step;
}

const char* to_string(SessionEnd end)
{
    switch (end) {
    case SessionEnd::full:
        return "full";
    case SessionEnd::departed:
        return "departed";
    case SessionEnd::horizon:
        return "horizon";
    }
    return "unknown";
}

} // namespace evsim::charging
