#pragma once

// Hourly expected profit and profit-maximizing on/off schedules, with an
// optional minimum dwell time between switches.

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "minegrid/errors.hpp"
#include "minegrid/model.hpp"
#include "minegrid/schedule.hpp"
#include "minegrid/segments.hpp"
#include "minegrid/tariff.hpp"

namespace minegrid {

/// Minimum consecutive hours on / off once a switch happens. The state
/// before the horizon is `initial_on`, held for `initial_elapsed_hours`;
/// the default elapsed count means "settled", i.e. free to switch at once.
/// A run cut off by the end of the horizon is exempt from the minimum.
struct DwellConstraint {
    static constexpr int kSettled = 1 << 20;

    int min_on_hours = 1;
    int min_off_hours = 1;
    bool initial_on = false;
    int initial_elapsed_hours = kSettled;

    void validate() const {
        if (min_on_hours < 1 || min_off_hours < 1) throw DomainError("dwell minimums must be at least 1 hour");
        if (initial_elapsed_hours < 0) throw DomainError("initial elapsed dwell must be non-negative");
    }

    /// True when no dwell rule can bind, so the greedy schedule is optimal.
    bool is_unconstrained() const {
        const int need = initial_on ? min_on_hours : min_off_hours;
        return min_on_hours == 1 && min_off_hours == 1 && initial_elapsed_hours >= need;
    }

    /// Per-segment defaults; calibration knobs rather than measured values.
    static DwellConstraint default_for(SegmentKind kind) {
        switch (kind) {
            case SegmentKind::Hobbyist: return {1, 1};
            case SegmentKind::SemiProfessional: return {3, 2};
            case SegmentKind::Professional: return {6, 4};
        }
        return {};
    }
};

/// Expected profit of running the rig during the hour starting at `t`.
inline double hourly_profit(const MinerRig& rig, const NetworkSnapshot& snap, const Tariff& tariff, EpochSeconds t) {
    return revenue_per_hour(rig, snap) - cost_per_hour(rig.total_power_kw(), tariff.price_at(t));
}

/// Per-hour price, revenue, cost and profit over a horizon, assuming the
/// rig runs.
struct HourlyLedger {
    Horizon horizon;
    std::vector<double> price_usd_per_kwh;
    std::vector<double> revenue_usd;
    std::vector<double> cost_usd;
    std::vector<double> profit_usd;
};

inline HourlyLedger hourly_ledger(const MinerRig& rig, const NetworkSeries& network, const Tariff& tariff,
                                  const Horizon& horizon) {
    if (horizon.hours == 0) throw DomainError("horizon must cover at least one hour");
    HourlyLedger out;
    out.horizon = horizon;
    out.price_usd_per_kwh.reserve(horizon.hours);
    out.revenue_usd.reserve(horizon.hours);
    out.cost_usd.reserve(horizon.hours);
    out.profit_usd.reserve(horizon.hours);

    std::vector<std::string> missing;
    std::size_t missing_count = 0;
    for (std::size_t i = 0; i < horizon.hours; ++i) {
        const EpochSeconds t = horizon.hour_start(i);
        try {
            const NetworkSnapshot& snap = network.at(t);
            const double price = tariff.price_at(t);
            const double revenue = revenue_per_hour(rig, snap);
            const double cost = cost_per_hour(rig.total_power_kw(), price);
            out.price_usd_per_kwh.push_back(price);
            out.revenue_usd.push_back(revenue);
            out.cost_usd.push_back(cost);
            out.profit_usd.push_back(revenue - cost);
        } catch (const LookupError&) {
            if (missing.size() < 5) missing.push_back(format_iso8601(t));
            ++missing_count;
        }
    }
    if (missing_count > 0) {
        std::string msg = "inputs do not cover " + std::to_string(missing_count) + " hour(s): ";
        for (std::size_t i = 0; i < missing.size(); ++i) msg += (i ? ", " : "") + missing[i];
        if (missing_count > missing.size()) msg += ", ...";
        throw LookupError(msg);
    }
    return out;
}

/// Sum of `profits` over on-hours, accumulated in hour order.
inline double schedule_profit(std::span<const double> profits, const std::vector<bool>& on) {
    if (profits.size() != on.size()) throw DomainError("profit and schedule lengths differ");
    double total = 0.0;
    for (std::size_t i = 0; i < profits.size(); ++i) {
        if (on[i]) total += profits[i];
    }
    return total;
}

/// On exactly in the strictly profitable hours. Hours are independent, so
/// this maximizes total profit when no dwell rule applies.
inline std::vector<bool> greedy_flags(std::span<const double> profits) {
    std::vector<bool> on(profits.size());
    for (std::size_t i = 0; i < profits.size(); ++i) on[i] = profits[i] > 0.0;
    return on;
}

/// Profit-maximizing flags subject to `dwell`, by backward dynamic
/// programming over (hour, state, hours-in-state capped at the state's
/// minimum). Among equal-profit choices the earliest hour goes off.
inline std::vector<bool> dwell_optimal_flags(std::span<const double> profits, const DwellConstraint& dwell) {
    dwell.validate();
    if (dwell.is_unconstrained()) return greedy_flags(profits);
    const std::size_t n = profits.size();
    const std::array<int, 2> min_run{dwell.min_off_hours, dwell.min_on_hours};  // [state]

    // value[h][state][run] = best profit over hours h..n-1 given the state
    // held just before hour h for `run` hours (run in 0..min_run[state]).
    const std::size_t width = static_cast<std::size_t>(std::max(min_run[0], min_run[1])) + 1;
    auto idx = [&](std::size_t h, int s, int r) {
        return (h * 2 + static_cast<std::size_t>(s)) * width + static_cast<std::size_t>(r);
    };
    constexpr double kInfeasible = -std::numeric_limits<double>::infinity();
    std::vector<double> value((n + 1) * 2 * width, kInfeasible);
    for (int s = 0; s < 2; ++s)
        for (int r = 0; r <= min_run[static_cast<std::size_t>(s)]; ++r) value[idx(n, s, r)] = 0.0;

    auto next_run = [&](int s, int r, int f) {
        return f == s ? std::min(r + 1, min_run[static_cast<std::size_t>(s)]) : 1;
    };
    auto allowed = [&](int s, int r, int f) { return f == s || r >= min_run[static_cast<std::size_t>(s)]; };
    auto gain = [&](std::size_t h, int f) { return f == 1 ? profits[h] : 0.0; };

    for (std::size_t h = n; h-- > 0;) {
        for (int s = 0; s < 2; ++s) {
            for (int r = 0; r <= min_run[static_cast<std::size_t>(s)]; ++r) {
                double best = kInfeasible;
                for (int f = 0; f < 2; ++f) {
                    if (!allowed(s, r, f)) continue;
                    best = std::max(best, gain(h, f) + value[idx(h + 1, f, next_run(s, r, f))]);
                }
                value[idx(h, s, r)] = best;
            }
        }
    }

    std::vector<bool> on(n);
    int s = dwell.initial_on ? 1 : 0;
    int r = std::min(dwell.initial_elapsed_hours, min_run[static_cast<std::size_t>(s)]);
    for (std::size_t h = 0; h < n; ++h) {
        double off_value = kInfeasible, on_value = kInfeasible;
        if (allowed(s, r, 0)) off_value = value[idx(h + 1, 0, next_run(s, r, 0))];
        if (allowed(s, r, 1)) on_value = profits[h] + value[idx(h + 1, 1, next_run(s, r, 1))];
        const int f = on_value > off_value ? 1 : 0;
        on[h] = f == 1;
        r = next_run(s, r, f);
        s = f;
    }
    return on;
}

inline Schedule greedy_schedule(const MinerRig& rig, const NetworkSeries& network, const Tariff& tariff,
                                const Horizon& horizon) {
    const HourlyLedger ledger = hourly_ledger(rig, network, tariff, horizon);
    return Schedule(horizon.start, greedy_flags(ledger.profit_usd));
}

inline Schedule constrained_schedule(const MinerRig& rig, const NetworkSeries& network, const Tariff& tariff,
                                     const Horizon& horizon, const DwellConstraint& dwell) {
    const HourlyLedger ledger = hourly_ledger(rig, network, tariff, horizon);
    return Schedule(horizon.start, dwell_optimal_flags(ledger.profit_usd, dwell));
}

}  // namespace minegrid
