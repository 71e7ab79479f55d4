#include "evsim/engine.hpp"

#include "evsim/errors.hpp"

#include <algorithm>
#include <numeric>

namespace evsim::engine {

using std::chrono::hours;

void SimulationParams::validate() const
{
    if (hour_of_day(sim_start) != 0) {
        throw ValidationError("simulation must start at midnight");
    }
    if (!(sim_start < hard_end)) {
        throw ValidationError("simulation start must precede the hard end");
    }
    if (!(transformer_capacity_kw > 0.0)) {
        throw ValidationError("transformer capacity must be positive");
    }
    for (const auto& w : {departure_window, arrival_window}) {
        if (w.first < 0 || w.last > 23 || w.first > w.last) {
            throw ValidationError("hour windows must lie within 0..23 with first <= last");
        }
    }
    if (arrival_window.first <= departure_window.last) {
        throw ValidationError("arrival window must start after the departure window ends");
    }
    if (!(significance_factor > 0.0)) {
        throw ValidationError("significance factor must be positive");
    }
    if (!(decay.rate >= 0.0)) {
        throw ValidationError("decay rate must be non-negative");
    }
}

Hour stop_time(std::optional<Hour> first_overload, Hour hard_end)
{
    if (!first_overload) {
        return hard_end;
    }
    return std::min(add_years(*first_overload, 1), hard_end);
}

namespace {

struct DayPlan {
    int departure = -1;
    int arrival = -1;
    double distance_km = 0.0;
};

struct OpenSession {
    bool active = false;
    charging::ChargeSession session;
};

} // namespace

SimulationResult run(const SimulationParams& params, const SimulationInputs& in, const RunHooks& hooks)
{
    params.validate();
    in.consumption.validate();
    in.local_curve.validate();

    const auto& catalog = in.catalog;
    const auto& data = in.consumption;
    const std::size_t n_households = data.households();
    const double limit_kw = catalog.household_power_limit_kw();

    SimulationResult result;
    result.params = params;
    result.households = n_households;

    Rng rng(params.seed);

    // Adoption: pre-simulation fleet, then the realized in-simulation schedule.
    const int start_year = year_of(params.sim_start);
    const auto& rows = in.local_curve.yearly_counts;
    std::int64_t initial = rows.front().year < start_year ? in.local_curve.count_at(start_year - 1) : rows.front().count;
    initial = std::min<std::int64_t>(initial, std::int64_t(n_households));
    std::vector<adoption::YearRate> rates;
    for (const auto& r : adoption::yearly_adoption_rates(in.local_curve)) {
        if (r.year >= start_year) {
            rates.push_back(r);
        }
    }
    const auto schedule =
        adoption::realize_schedule(rates, params.mode, rng, std::int64_t(n_households) - initial);

    std::vector<std::size_t> order(n_households);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(order));

    std::vector<std::size_t> model_slot(n_households);
    for (auto& m : model_slot) {
        m = fleet::sample_model(catalog, rng);
    }

    // Driving inference depends only on the (yearly repeating) profiles.
    const int source_days = data.days();
    std::vector<std::vector<int>> inferred_dep(n_households, std::vector<int>(std::size_t(source_days), -1));
    std::vector<std::vector<int>> inferred_arr(n_households, std::vector<int>(std::size_t(source_days), -1));
    for (std::size_t i = 0; i < n_households; ++i) {
        for (int d = 0; d < source_days; ++d) {
            const auto profile = data.day_profile(i, d);
            const double threshold = driving::significance_threshold(driving::idle_load(profile), params.significance_factor);
            if (auto dep = driving::infer_departure(profile, params.departure_window, threshold)) {
                inferred_dep[i][std::size_t(d)] = *dep;
            }
            if (auto arr = driving::infer_arrival(profile, params.arrival_window, threshold)) {
                inferred_arr[i][std::size_t(d)] = *arr;
            }
        }
    }

    std::vector<fleet::EvState> evs;
    std::vector<double> ev_power;
    std::vector<double> ev_load;
    std::vector<OpenSession> sessions;
    std::vector<int> ev_of(n_households, -1);
    evs.reserve(n_households);

    auto adopt = [&](Hour when) {
        const std::size_t k = evs.size();
        const std::size_t household = order[k];
        const std::size_t model = model_slot[k];
        const auto& m = catalog.model(model);
        evs.push_back({model, m.battery_capacity_kwh, fleet::EvStatus::home_idle, household, int(k)});
        ev_power.push_back(fleet::effective_charge_power(m, limit_kw));
        ev_load.push_back(0.0);
        sessions.emplace_back();
        ev_of[household] = int(k);
        result.adoptions.push_back({int(k), household, model, when});
    };

    auto close_session = [&](std::size_t e, charging::SessionEnd why) {
        auto& s = sessions[e];
        if (!s.active) {
            return;
        }
        s.session.soc_at_end_kwh = evs[e].soc_kwh;
        s.session.end = why;
        result.sessions.push_back(s.session);
        s.active = false;
    };

    for (std::int64_t k = 0; k < initial; ++k) {
        adopt(params.sim_start);
    }

    std::vector<DayPlan> plans(n_households);
    std::vector<double> baseline_now(n_households, 0.0);
    std::vector<double> charging_now(n_households, 0.0);
    std::size_t next_event = 0;
    int source_day = 0;
    Hour horizon = params.hard_end;
    Hour window_end{};
    bool first_iteration = true;

    result.trace.start = params.sim_start;
    for (Hour t = params.sim_start; t < horizon; t += hours{1}) {
        const auto c = civil(t);
        const int h = int(c.hour);

        if (h == 0 || first_iteration) {
            source_day = hour_index_in_year(data.year, c.month, c.day, 0) / 24;
            for (std::size_t i = 0; i < n_households; ++i) {
                const auto [fb_dep, fb_arr] = driving::fallback_times(rng, params.departure_window, params.arrival_window);
                auto& p = plans[i];
                p.distance_km = driving::sample_distance(in.distances, rng);
                const int dep = inferred_dep[i][std::size_t(source_day)];
                const int arr = inferred_arr[i][std::size_t(source_day)];
                p.departure = dep >= 0 ? dep : fb_dep;
                p.arrival = arr >= 0 ? arr : fb_arr;
                if (p.arrival <= p.departure) {
                    p.departure = fb_dep;
                    p.arrival = fb_arr;
                }
            }
            first_iteration = false;
        }

        // (1) adoption events due
        while (next_event < schedule.events.size() && schedule.events[next_event] <= t &&
               evs.size() < n_households) {
            adopt(t);
            ++next_event;
        }

        const std::size_t hour_index = std::size_t(source_day) * 24 + std::size_t(h);
        int evs_charging = 0;
        for (std::size_t i = 0; i < n_households; ++i) {
            baseline_now[i] = data.kwh[i][hour_index];
            charging_now[i] = 0.0;
            const int e = ev_of[i];
            if (e < 0) {
                continue;
            }
            auto& ev = evs[std::size_t(e)];
            const auto& model = catalog.model(ev.model);
            const auto& plan = plans[i];
            // (2) departure
            if (h == plan.departure && ev.status != fleet::EvStatus::away) {
                if (ev.status == fleet::EvStatus::charging) {
                    close_session(std::size_t(e), charging::SessionEnd::departed);
                }
                ev.status = fleet::EvStatus::away;
            }
            // (3) arrival: trip energy, then plug in
            if (h == plan.arrival && ev.status == fleet::EvStatus::away) {
                const auto trip = charging::apply_trip(ev, charging::trip_energy(plan.distance_km, model.mileage_kwh_per_km));
                ev.soc_kwh = trip.ev.soc_kwh;
                result.total_trip_kwh += trip.consumed_kwh;
                if (trip.infeasible) {
                    if (++result.infeasible_trips <= 20) {
                        result.diagnostics.push_back("infeasible trip: ev " + std::to_string(ev.id) + " at " +
                                                     format_hour(t) + " needed more than the stored energy");
                    }
                }
                if (ev.soc_kwh < model.battery_capacity_kwh) {
                    ev.status = fleet::EvStatus::charging;
                    auto& s = sessions[std::size_t(e)];
                    s.active = true;
                    s.session = {ev.id, t, ev_power[std::size_t(e)], ev.soc_kwh, ev.soc_kwh, 0.0, 0,
                                 charging::SessionEnd::horizon};
                } else {
                    ev.status = fleet::EvStatus::home_idle;
                }
            }
            // (4) charging load
            double load = 0.0;
            if (ev.status == fleet::EvStatus::charging) {
                const auto step = charging::charge_hour(ev, model, ev_power[std::size_t(e)]);
                load = step.load_kw;
                auto& s = sessions[std::size_t(e)].session;
                s.energy_delivered_kwh += load;
                ++s.hours;
                if (step.full) {
                    close_session(std::size_t(e), charging::SessionEnd::full);
                }
            }
            ev_load[std::size_t(e)] = load;
            charging_now[i] = load;
            if (load > 0.0) {
                ++evs_charging;
            }
        }

        // (5) aggregate
        const auto entry = grid::aggregate_load(baseline_now, charging_now);
        result.trace.push(entry, evs_charging);
        result.total_charging_kwh += entry.charging_kw;
        if (entry.total_kw > result.peak_load_kw) {
            result.peak_load_kw = entry.total_kw;
            result.peak_load_time = t;
        }

        // (6) emissions
        if (evs_charging > 0) {
            const double intensity = emissions::intensity_at(in.intensity, t, params.sim_start, params.decay);
            for (std::size_t i = 0; i < n_households; ++i) {
                if (charging_now[i] > 0.0) {
                    emissions::record_charge_emission(result.ledger, evs[std::size_t(ev_of[i])].id, t, charging_now[i],
                                                      intensity);
                }
            }
        }

        // (7) overload
        if (entry.total_kw > params.transformer_capacity_kw) {
            const grid::OverloadEvent event{t, entry.total_kw - params.transformer_capacity_kw, entry.total_kw,
                                            entry.charging_kw, evs_charging};
            result.overloads.push_back(event);
            if (!result.first_overload) {
                result.first_overload = event;
                result.evs_at_first_overload = std::int64_t(evs.size());
                window_end = add_years(t, 1);
                horizon = std::min(params.hard_end, window_end + hours{1});
                result.window_start = t + hours{1};
                result.window_loads.assign(n_households, {});
            }
        }
        if (result.first_overload && t > result.first_overload->time && t <= window_end) {
            for (std::size_t i = 0; i < n_households; ++i) {
                result.window_loads[i].push_back(baseline_now[i] + charging_now[i]);
            }
        }

        if (hooks.on_hour) {
            hooks.on_hour(HourSnapshot{t, evs, ev_power, ev_load, entry});
        }
    }

    for (std::size_t e = 0; e < evs.size(); ++e) {
        close_session(e, charging::SessionEnd::horizon);
    }

    result.horizon_end = horizon;
    result.stop_time =
        stop_time(result.first_overload ? std::optional<Hour>(result.first_overload->time) : std::nullopt,
                  params.hard_end);
    result.final_evs = evs;
    result.total_emitted_kg = result.ledger.total_kg();
    result.total_overload_hours = std::int64_t(result.overloads.size());
    result.initial_fleet = initial;

    if (result.first_overload) {
        const Hour first = result.first_overload->time;
        result.following_year = grid::overload_stats(result.overloads, first);
        result.load_factor_first_overload_day = grid::load_factor(result.trace, grid::Period::day_of(first));
        if (!result.window_loads.empty() && !result.window_loads.front().empty()) {
            try {
                const auto cf = grid::coincidence_factor(result.window_loads);
                result.coincidence_factor_year_after = cf.factor;
                result.coincidence_consumers_excluded = cf.consumers_excluded;
                if (cf.consumers_excluded > 0) {
                    result.diagnostics.push_back(std::to_string(cf.consumers_excluded) +
                                                 " consumers with zero peak excluded from the coincidence factor");
                }
            } catch (const ValidationError& e) {
                result.diagnostics.push_back(std::string("coincidence factor unavailable: ") + e.what());
            }
        }
    }

    for (int y = start_year; y <= year_of(horizon - hours{1}); ++y) {
        const Hour cutoff = std::min(make_hour(y + 1, 1, 1), horizon);
        std::int64_t n = 0;
        for (const auto& a : result.adoptions) {
            n += a.time < cutoff ? 1 : 0;
        }
        result.evs_end_of_year.push_back({y, n});
    }

    for (std::size_t m = 0; m < catalog.size(); ++m) {
        std::int64_t n = 0;
        for (const auto& ev : evs) {
            n += ev.model == m ? 1 : 0;
        }
        result.model_distribution_end.emplace_back(catalog.model(m).name, n);
    }

    std::vector<emissions::Ownership> owners;
    for (const auto& a : result.adoptions) {
        owners.push_back({a.ev_id, a.time});
    }
    result.annual = emissions::annual_report(result.ledger, owners, params.sim_start, horizon);
    for (const auto& row : result.annual.years) {
        if (row.year == params.report_year) {
            result.avg_kg_per_ev_report_year = row.avg_kg_per_ev;
        }
    }
    return result;
}

} // namespace evsim::engine
