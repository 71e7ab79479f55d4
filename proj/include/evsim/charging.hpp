#pragma once

#include "evsim/fleet.hpp"
#include "evsim/timeutil.hpp"

namespace evsim::charging {

double trip_energy(double distance_km, double mileage_kwh_per_km);

struct TripOutcome {
    fleet::EvState ev;
    double consumed_kwh = 0.0;
    bool infeasible = false; ///< demand exceeded the stored energy; soc clamped to zero
};

TripOutcome apply_trip(const fleet::EvState& ev, double energy_kwh);

struct HourCharge {
    double load_kw = 0.0; ///< average over the hour, equal to energy in kWh
    double soc_kwh = 0.0;
    bool full = false;
};

/// Traditional strategy: full effective power until the battery is full.
HourCharge charging_load_for_hour(double soc_kwh, double capacity_kwh, double power_kw,
                                  double hour_fraction_available = 1.0);

/// Applies one charging hour to an EV in `charging` state, flipping it to
/// `home_idle` once full.
HourCharge charge_hour(fleet::EvState& ev, const fleet::EvModel& model, double power_kw,
                       double hour_fraction_available = 1.0);

enum class SessionEnd { full, departed, horizon };

const char* to_string(SessionEnd end);

struct ChargeSession {
    int ev_id = 0;
    Hour start{};
    double power_kw = 0.0;
    double soc_at_start_kwh = 0.0;
    double soc_at_end_kwh = 0.0;
    double energy_delivered_kwh = 0.0;
    int hours = 0;
    SessionEnd end = SessionEnd::horizon;
};

} // namespace evsim::charging
