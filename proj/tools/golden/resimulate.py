#!/usr/bin/env python3
"""Standalone re-simulation of a scenario file, used to produce golden summaries.

Shares no code with the C++ engine. It reimplements the random stream, the
input parsing and the hourly loop from the documented rules in README.md, and
writes the summary document the `run` command emits.

Supported scenario subset: local adoption curve from CSV, poisson or
deterministic realization, catalog/distance CSVs, any decay mode.
"""

import argparse
import csv
import datetime as dt
import json
import math
import os
import sys

MASK = (1 << 64) - 1
HOUR = dt.timedelta(hours=1)
SCHEMA_VERSION = 1


class SplitMix64:
    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def uniform01(self):
        return (self.next() >> 11) * 2.0**-53

    def uniform_int(self, lo, hi):
        span = hi - lo + 1
        limit = MASK - (MASK % span + 1) % span
        x = self.next()
        while x > limit:
            x = self.next()
        return lo + x % span

    def poisson(self, mean):
        total = 0
        while mean > 0.0:
            chunk = 30.0 if mean > 30.0 else mean
            mean -= chunk
            floor = math.exp(-chunk)
            k = 0
            p = self.uniform01()
            while p > floor:
                k += 1
                p *= self.uniform01()
            total += k
        return total

    def pick(self, cumulative):
        u = self.uniform01()
        for i, c in enumerate(cumulative):
            if u < c:
                return i
        return len(cumulative) - 1

    def shuffle(self, items):
        for i in range(len(items), 1, -1):
            j = self.uniform_int(0, i - 1)
            items[i - 1], items[j] = items[j], items[i - 1]


def leap(y):
    return y % 4 == 0 and (y % 100 != 0 or y % 400 == 0)


def year_hours(y):
    return 8784 if leap(y) else 8760


def slot_in_year(year, month, day, hour):
    if month == 2 and day == 29 and not leap(year):
        day = 28
    return (dt.date(year, month, day) - dt.date(year, 1, 1)).days * 24 + hour


def plus_one_year(t):
    day = t.day
    if t.month == 2 and day == 29 and not leap(t.year + 1):
        day = 28
    return t.replace(year=t.year + 1, day=day)


def stamp(t):
    return t.strftime("%Y-%m-%dT%H:%M")


def parse_stamp(text):
    text = text.strip().replace(" ", "T")
    fmt = "%Y-%m-%dT%H:%M:%S" if text.count(":") == 2 else "%Y-%m-%dT%H:%M"
    return dt.datetime.strptime(text, fmt)


def rows(path):
    """CSV data rows after the header; blank and '#' lines skipped."""
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    reader = csv.reader(lines)
    next(reader)
    return list(reader)


def load_catalog(path, limit):
    models = [(r[0], float(r[1]), float(r[2]), float(r[3]), float(r[4])) for r in rows(path)]
    total = 0.0
    for m in models:
        total += m[4]
    cumulative, running = [], 0.0
    for m in models:
        running += m[4] / total
        cumulative.append(running)
    return [
        {"name": n, "capacity": cap, "mileage": mil, "power": min(p, limit)} for n, cap, mil, p, _ in models
    ], cumulative


def load_distances(path):
    bins, cumulative, running = [], [], 0.0
    for r in rows(path):
        bins.append(float(r[0]))
        running += float(r[1])
        cumulative.append(running)
    return bins, cumulative


def load_consumption(path):
    ids, series, year = [], {}, None
    for hid, ts, kwh in rows(path):
        t = parse_stamp(ts)
        if year is None:
            year = t.year
        if hid not in series:
            ids.append(hid)
            series[hid] = [None] * year_hours(year)
        series[hid][int((t - dt.datetime(year, 1, 1)).total_seconds() // 3600)] = float(kwh)
    for hid in ids:
        assert None not in series[hid], hid
    return year, ids, [series[h] for h in ids]


def load_intensity(path):
    groups = {}
    for ts, g in rows(path):
        t = parse_stamp(ts)
        key = t.replace(minute=0)
        s, n = groups.get(key, (0.0, 0))
        groups[key] = (s + float(g), n + 1)
    keys = sorted(groups)
    first = keys[0].year
    years = {}
    for k in keys:
        s, n = groups[k]
        years.setdefault(k.year, [None] * year_hours(k.year))[slot_in_year(k.year, k.month, k.day, k.hour)] = s / n
    return first, [years[y] for y in sorted(years)]


def load_curve(path):
    return [(int(r[0]), int(r[1])) for r in rows(path)]


def inferred(day, dep_window, arr_window, factor):
    idle = 0.0
    for h in range(6):
        idle += day[h]
    threshold = factor * (idle / 6.0)
    dep = None
    above = False
    for h in range(dep_window[0], dep_window[1] + 1):
        if not above:
            above = day[h] > threshold
        elif day[h] <= threshold:
            dep = h
            break
    arr = None
    for h in range(arr_window[0], arr_window[1] + 1):
        if day[h] > threshold:
            arr = h
            break
    return dep, arr


def simulate(cfg_path):
    with open(cfg_path) as fh:
        cfg = json.load(fh)
    base = os.path.dirname(os.path.abspath(cfg_path))
    rel = lambda p: p if os.path.isabs(p) else os.path.join(base, p)

    name = cfg.get("name", "scenario")
    seed = cfg.get("seed", 1)
    start = parse_stamp(cfg.get("sim_start", "2020-01-01T00:00"))
    hard_end = parse_stamp(cfg.get("hard_end", "2033-01-01T00:00"))
    report_year = cfg.get("report_year", 2031)
    limit = cfg.get("household_power_limit_kw", 17.3)
    adoption = cfg["adoption"]
    mode = adoption.get("mode", "poisson")
    if "curve_csv" not in adoption or adoption.get("scope", "local") != "local":
        raise SystemExit("only local CSV adoption curves are supported")
    inputs = cfg["inputs"]
    capacity = float(cfg.get("grid", {}).get("transformer_capacity_kw", 400.0))
    drv = cfg.get("driving", {})
    dep_window = drv.get("departure_window", [5, 9])
    arr_window = drv.get("arrival_window", [14, 22])
    factor = drv.get("significance_factor", 1.8)
    em = cfg.get("emissions", {})
    decay_mode = em.get("decay_mode", "continuous")
    decay_rate = em.get("decay_rate", 0.203)

    models, shares = load_catalog(rel(inputs["catalog"]), limit)
    bins, bin_cum = load_distances(rel(inputs["distances"]))
    data_year, ids, kwh = load_consumption(rel(inputs["consumption"]))
    int_first, int_years = load_intensity(rel(inputs["intensity"]))
    curve = load_curve(rel(adoption["curve_csv"]))
    n = len(ids)
    curve = [(y, min(c, n)) for y, c in curve]

    rng = SplitMix64(seed)

    # adoption schedule
    y0 = start.year
    counts = dict(curve)
    if curve[0][0] < y0:
        initial = counts.get(y0 - 1, curve[-1][1] if y0 - 1 > curve[-1][0] else 0)
    else:
        initial = curve[0][1]
    initial = min(initial, n)
    events = []
    room = n - initial
    for (py, pc), (y, c) in zip(curve, curve[1:]):
        if y < y0:
            continue
        new = max(0, c - pc)
        hy = year_hours(y)
        if mode == "poisson":
            want = min(rng.poisson(float(new)), hy)
            chosen = set()
            picks = []
            while len(picks) < want:
                h = rng.uniform_int(0, hy - 1)
                if h not in chosen:
                    chosen.add(h)
                    picks.append(h)
            picks.sort()
        else:
            k = min(new, hy)
            picks = [((2 * j + 1) * hy) // (2 * k) for j in range(k)]
        take = min(room, len(picks))
        events += [dt.datetime(y, 1, 1) + h * HOUR for h in picks[:take]]
        room -= take

    order = list(range(n))
    rng.shuffle(order)
    slots = [rng.pick(shares) for _ in range(n)]

    days = len(kwh[0]) // 24
    plan_src = [
        [inferred(kwh[i][d * 24:(d + 1) * 24], dep_window, arr_window, factor) for d in range(days)] for i in range(n)
    ]

    evs = []  # dicts: model, soc, status, session
    ev_of = [-1] * n
    adoptions = []
    sessions = []

    def adopt(when):
        k = len(evs)
        m = models[slots[k]]
        evs.append({"model": slots[k], "soc": m["capacity"], "status": "idle", "session": None})
        ev_of[order[k]] = k
        adoptions.append((k, order[k], slots[k], when))

    for _ in range(initial):
        adopt(start)

    totals = []
    overloads = []
    ledger = []  # (ev, t, energy, intensity, kg)
    first = None
    evs_at_first = None
    window_end = None
    window = None
    horizon = hard_end
    trip_total = 0.0
    charge_total = 0.0
    infeasible = 0
    peak, peak_t = 0.0, start
    plans = [None] * n
    next_ev = 0

    t = start
    while t < horizon:
        h = t.hour
        if h == 0 or t == start:
            sd = slot_in_year(data_year, t.month, t.day, 0) // 24
            for i in range(n):
                fb_dep = rng.uniform_int(dep_window[0], dep_window[1])
                fb_arr = rng.uniform_int(arr_window[0], arr_window[1])
                dist = bins[rng.pick(bin_cum)]
                dep, arr = plan_src[i][sd]
                dep = fb_dep if dep is None else dep
                arr = fb_arr if arr is None else arr
                if arr <= dep:
                    dep, arr = fb_dep, fb_arr
                plans[i] = (dep, arr, dist)

        while next_ev < len(events) and events[next_ev] <= t and len(evs) < n:
            adopt(t)
            next_ev += 1

        slot = sd * 24 + h
        base_now = [kwh[i][slot] for i in range(n)]
        chg_now = [0.0] * n
        charging = 0
        for i in range(n):
            e = ev_of[i]
            if e < 0:
                continue
            ev = evs[e]
            m = models[ev["model"]]
            dep, arr, dist = plans[i]
            if h == dep and ev["status"] != "away":
                if ev["status"] == "charging":
                    sessions.append("departed")
                ev["status"] = "away"
            if h == arr and ev["status"] == "away":
                need = dist * m["mileage"]
                if need > ev["soc"]:
                    infeasible += 1
                    trip_total += ev["soc"]
                    ev["soc"] = 0.0
                else:
                    trip_total += need
                    ev["soc"] = ev["soc"] - need
                ev["status"] = "charging" if ev["soc"] < m["capacity"] else "idle"
            load = 0.0
            if ev["status"] == "charging":
                avail = m["power"] * 1.0
                gap = m["capacity"] - ev["soc"]
                if gap <= 0.0:
                    load = 0.0
                    full = True
                elif avail >= gap:
                    load, ev["soc"], full = gap, m["capacity"], True
                else:
                    load, ev["soc"], full = avail, ev["soc"] + avail, False
                if full:
                    ev["status"] = "idle"
                    sessions.append("full")
            chg_now[i] = load
            if load > 0.0:
                charging += 1

        b = 0.0
        for v in base_now:
            b += v
        c = 0.0
        for v in chg_now:
            c += v
        total = b + c
        totals.append(total)
        charge_total += c
        if total > peak:
            peak, peak_t = total, t

        if charging > 0:
            cyc = int_years[(t.year - y0) % len(int_years)]
            g = cyc[slot_in_year(int_first + (t.year - y0) % len(int_years), t.month, t.day, t.hour)]
            if decay_mode == "continuous":
                g = g * math.exp(-decay_rate * (((t - start).total_seconds() // 3600) / 8766.0))
            elif decay_mode == "stepwise":
                g = g * math.exp(-decay_rate * float(t.year - y0))
            for i in range(n):
                if chg_now[i] > 0.0:
                    ledger.append((ev_of[i], t, chg_now[i], g, chg_now[i] * g / 1000.0))

        if total > capacity:
            overloads.append((t, total - capacity, total, c, charging))
            if first is None:
                first = overloads[-1]
                evs_at_first = len(evs)
                window_end = plus_one_year(t)
                horizon = min(hard_end, window_end + HOUR)
                window = [[] for _ in range(n)]
        if first is not None and first[0] < t <= window_end:
            for i in range(n):
                window[i].append(base_now[i] + chg_now[i])
        t += HOUR

    for ev in evs:
        if ev["status"] == "charging":
            sessions.append("horizon")

    out = {
        "schema_version": SCHEMA_VERSION,
        "scenario": name,
        "seed": seed,
        "mode": mode,
        "sim_start": stamp(start),
        "hard_end": stamp(hard_end),
        "stop_time": stamp(min(plus_one_year(first[0]), hard_end) if first else hard_end),
        "horizon_end": stamp(horizon),
        "households": n,
        "transformer_capacity_kw": capacity,
        "initial_fleet": initial,
        "adoptions": len(adoptions),
    }

    if first:
        ft = first[0]
        out["first_overload"] = {
            "timestamp": stamp(ft),
            "magnitude_kw": first[1],
            "total_load_kw": first[2],
            "charging_load_kw": first[3],
            "simultaneous_charging_evs": first[4],
        }
        after = [o for o in overloads if ft < o[0] <= window_end]
        out["overloads_following_year"] = len(after)
        out["days_with_overload_following_year"] = len({o[0].date() for o in after})
        d0 = dt.datetime(ft.year, ft.month, ft.day)
        i0 = int((d0 - start).total_seconds() // 3600)
        day = totals[max(i0, 0):min(i0 + 24, len(totals))]
        s = 0.0
        for v in day:
            s += v
        lf = (s / len(day)) / max(day)
        cf = None
        if window and window[0]:
            summed = None
            peaks = 0.0
            for loads in window:
                p = max(loads)
                if not p > 0.0:
                    continue
                if summed is None:
                    summed = [0.0] * len(loads)
                for k, v in enumerate(loads):
                    summed[k] += v
                peaks += p
            if summed is not None:
                cf = max(summed) / peaks
    else:
        out["first_overload"] = None
        out["overloads_following_year"] = None
        out["days_with_overload_following_year"] = None
        lf = cf = None
    out["evs_at_first_overload"] = evs_at_first
    out["total_overload_hours"] = len(overloads)
    out["load_factor_first_overload_day"] = lf
    out["coincidence_factor_year_after"] = cf

    last_year = (horizon - HOUR).year
    out["evs_end_of_year"] = [
        {"year": y, "evs": sum(1 for a in adoptions if a[3] < min(dt.datetime(y + 1, 1, 1), horizon))}
        for y in range(y0, last_year + 1)
    ]
    out["model_distribution_end"] = {
        m["name"]: sum(1 for ev in evs if ev["model"] == k) for k, m in enumerate(models)
    }

    # annual emissions
    year_kg = {y: 0.0 for y in range(y0, last_year + 1)}
    per_ev = {}
    for e, when, _, _, kg in ledger:
        year_kg[when.year] += kg
        per_ev[(e, when.year)] = per_ev.get((e, when.year), 0.0) + kg
    complete = lambda y: dt.datetime(y, 1, 1) >= start and dt.datetime(y + 1, 1, 1) <= horizon
    annual = []
    pooled_kg, pooled_n = 0.0, 0
    report_avg = None
    for y in range(y0, last_year + 1):
        present = sum(1 for a in adoptions if a[3] < dt.datetime(y + 1, 1, 1))
        avg = year_kg[y] / present if present > 0 else None
        annual.append(
            {"year": y, "evs_present": present, "total_kg": year_kg[y], "avg_kg_per_ev": avg, "complete": complete(y)}
        )
        if complete(y) and present > 0:
            pooled_kg += year_kg[y]
            pooled_n += present
        if y == report_year:
            report_avg = avg
    means_sum, means_n = 0.0, 0
    for a in adoptions:
        s, k = 0.0, 0
        for y in range(y0, last_year + 1):
            if complete(y) and a[3] < dt.datetime(y + 1, 1, 1):
                s += per_ev.get((a[0], y), 0.0)
                k += 1
        if k:
            means_sum += s / k
            means_n += 1
    out["annual_emissions"] = annual
    out["report_year"] = report_year
    out["avg_kg_per_ev_report_year"] = report_avg
    out["mean_of_ev_means_kg"] = means_sum / means_n if means_n else None
    out["pooled_mean_kg"] = pooled_kg / pooled_n if pooled_n else None

    kg_total = 0.0
    for rec in ledger:
        kg_total += rec[4]
    out["total_charging_kwh"] = charge_total
    out["total_trip_kwh"] = trip_total
    out["total_emitted_kg"] = kg_total
    out["infeasible_trips"] = infeasible
    out["charge_sessions"] = len(sessions)
    out["peak_load_kw"] = peak
    out["peak_load_time"] = stamp(peak_t)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    ap.add_argument("--out", help="write here instead of stdout")
    ap.add_argument("--check", help="compare against this summary file and exit nonzero on mismatch")
    args = ap.parse_args()
    summary = simulate(args.config)
    if args.check:
        with open(args.check) as fh:
            expected = json.load(fh)
        if expected != summary:
            for key in sorted(set(expected) | set(summary)):
                if expected.get(key) != summary.get(key):
                    print(f"mismatch in {key}: file={expected.get(key)!r} resimulated={summary.get(key)!r}")
            return 1
        print("golden file matches the re-simulation")
        return 0
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
