#pragma once

// Backtests: join a network series, a tariff and a rig into always-on vs
// smart profit, and size fleets against a target network share.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "minegrid/errors.hpp"
#include "minegrid/model.hpp"
#include "minegrid/schedule.hpp"
#include "minegrid/scheduler.hpp"
#include "minegrid/segments.hpp"
#include "minegrid/tariff.hpp"

namespace minegrid {

struct Scenario {
    std::string name;
    NetworkSeries network;
    Tariff tariff = Tariff::fixed(0.0);
    MinerRig rig{1, 4730.0, 1.43};
    SegmentKind segment = SegmentKind::Hobbyist;
    CostAssumptions assumptions;
    DwellConstraint dwell;
    std::optional<double> duty_override;   // forces the on-fraction, best hours first
    std::optional<double> mw_capacity;     // Professional capex; defaults to rated power
    bool new_facility = false;
};

/// Replaces the block subsidy in every snapshot (e.g. a halving).
inline Scenario with_block_reward(Scenario s, double block_reward_btc) {
    s.network = s.network.transformed([&](NetworkSnapshot& snap) { snap.block_reward_btc = block_reward_btc; });
    return s;
}

/// Multiplies every electricity price by `factor`.
inline Scenario with_price_scale(Scenario s, double factor) {
    s.tariff = s.tariff.scaled(factor);
    return s;
}

struct Report {
    std::string name;
    Schedule schedule;
    HourlyLedger ledger;
    double profit_always_on = 0.0;
    double profit_smart = 0.0;
    std::optional<double> multiplier;        // only when profit_always_on > 0
    double duty_cycle = 0.0;
    double avg_effective_price = 0.0;        // smart schedule, USD/kWh
    double avg_price_always_on = 0.0;
    CapexBreakdown capex;
    double non_asic_fraction = 0.0;
    std::optional<double> roi_days;          // nullopt: never pays back
    std::optional<double> margin_delta_halved_electricity;
};

/// Relative change in always-on profit when electricity is cheaper:
/// (halved - base) / |base|.
inline double compare_costs(const Report& base, const Report& halved) {
    if (base.profit_always_on == 0.0)
        throw ComparisonError("base profit is zero; margin change is undefined");
    return (halved.profit_always_on - base.profit_always_on) / std::abs(base.profit_always_on);
}

inline double network_share(double fleet_hashrate_ghs, double network_hashrate_ghs) {
    if (!(network_hashrate_ghs > 0.0)) throw DomainError("network hashrate must be positive");
    if (fleet_hashrate_ghs < 0.0) throw DomainError("fleet hashrate must be non-negative");
    return fleet_hashrate_ghs / network_hashrate_ghs;
}

/// Days to recover `capex_total` at `mean_daily_profit`; nullopt when the
/// profit is not positive (and capex is non-zero).
inline std::optional<double> roi_days(double capex_total, double mean_daily_profit) {
    if (capex_total < 0.0) throw DomainError("capex must be non-negative");
    if (capex_total == 0.0) return 0.0;
    if (!(mean_daily_profit > 0.0)) return std::nullopt;
    return capex_total / mean_daily_profit;
}

struct FleetPlan {
    std::int64_t miner_count = 0;
    std::int64_t units_per_miner = 0;
    std::int64_t total_units = 0;
    CapexBreakdown per_miner_capex;
    double total_capex = 0.0;
    double achieved_share = 0.0;
};

/// Number of identical miners needed to reach `target_share` of the
/// network, and what building them costs.
inline FleetPlan fleet_plan(double target_share, double network_hashrate_ghs, double per_miner_hashrate_ghs,
                            SegmentKind kind, const CostAssumptions& assumptions,
                            double unit_hashrate_ghs = 4730.0) {
    if (!(target_share > 0.0) || !(network_hashrate_ghs > 0.0) || !(per_miner_hashrate_ghs > 0.0) ||
        !(unit_hashrate_ghs > 0.0))
        throw DomainError("fleet plan inputs must be positive");
    FleetPlan plan;
    plan.miner_count = static_cast<std::int64_t>(std::ceil(target_share * network_hashrate_ghs / per_miner_hashrate_ghs));
    plan.units_per_miner = static_cast<std::int64_t>(std::ceil(per_miner_hashrate_ghs / unit_hashrate_ghs));
    plan.total_units = plan.miner_count * plan.units_per_miner;
    plan.per_miner_capex = capex(kind, plan.units_per_miner, assumptions);
    plan.total_capex = static_cast<double>(plan.miner_count) * plan.per_miner_capex.total;
    plan.achieved_share =
        network_share(static_cast<double>(plan.miner_count) * per_miner_hashrate_ghs, network_hashrate_ghs);
    return plan;
}

namespace detail {

/// The `count` most profitable hours (earlier hour first on ties).
inline std::vector<bool> best_hours(std::span<const double> profits, std::size_t count) {
    std::vector<std::size_t> order(profits.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return profits[a] > profits[b]; });
    std::vector<bool> on(profits.size(), false);
    for (std::size_t i = 0; i < count && i < order.size(); ++i) on[order[i]] = true;
    return on;
}

inline Horizon scenario_horizon(const NetworkSeries& network) {
    if (network.size() == 0) throw DomainError("scenario has no network data");
    if (network.cadence_seconds() % kSecondsPerHour != 0)
        throw DomainError("network cadence must be a whole number of hours");
    return {network.start(), static_cast<std::size_t>((network.end() - network.start()) / kSecondsPerHour)};
}

inline Report run_backtest(const Scenario& s) {
    if (classify(rated_power_kw(s.rig.unit_count(), s.rig.unit_power_kw())) != s.segment)
        throw ConstraintError("rig power " + std::to_string(s.rig.total_power_kw()) + " kW is outside the " +
                              std::string(to_string(s.segment)) + " envelope");
    if (s.duty_override && !(*s.duty_override >= 0.0 && *s.duty_override <= 1.0))
        throw DomainError("duty override must lie in [0, 1]");

    const Horizon horizon = scenario_horizon(s.network);
    HourlyLedger ledger = hourly_ledger(s.rig, s.network, s.tariff, horizon);
    const std::vector<bool> always(horizon.hours, true);

    std::vector<bool> smart;
    if (s.duty_override) {
        const auto count = static_cast<std::size_t>(std::llround(*s.duty_override * static_cast<double>(horizon.hours)));
        smart = best_hours(ledger.profit_usd, count);
    } else {
        smart = dwell_optimal_flags(ledger.profit_usd, s.dwell);
    }

    CostAssumptions a = s.assumptions;
    a.unit_power_kw = s.rig.unit_power_kw();

    const double profit_always = schedule_profit(ledger.profit_usd, always);
    const double profit_smart = schedule_profit(ledger.profit_usd, smart);
    const Schedule always_schedule(horizon.start, always);
    Schedule schedule(horizon.start, std::move(smart));
    const CapexBreakdown cap = capex(s.segment, s.rig.unit_count(), a, s.mw_capacity, s.new_facility);
    const double days = static_cast<double>(horizon.hours) / kHoursPerDay;

    Report r{.name = s.name,
             .schedule = schedule,
             .ledger = std::move(ledger),
             .profit_always_on = profit_always,
             .profit_smart = profit_smart,
             .multiplier = profit_always > 0.0 ? std::optional<double>(profit_smart / profit_always) : std::nullopt,
             .duty_cycle = schedule.duty_cycle(),
             .avg_effective_price = average_effective_price(s.tariff, schedule, s.rig.total_power_kw()),
             .avg_price_always_on = average_effective_price(s.tariff, always_schedule, s.rig.total_power_kw()),
             .capex = cap,
             .non_asic_fraction = non_asic_fraction(cap),
             .roi_days = roi_days(cap.total, profit_smart / days),
             .margin_delta_halved_electricity = std::nullopt};
    return r;
}

}  // namespace detail

/// Runs the scenario: always-on profit, the smart schedule (dwell-optimal,
/// or the best `duty_override` fraction of hours), capex, ROI and the
/// margin change from halving electricity prices. Errors carry the
/// scenario name.
inline Report backtest(const Scenario& s) {
    try {
        Report base = detail::run_backtest(s);
        const Report halved = detail::run_backtest(with_price_scale(s, 0.5));
        if (base.profit_always_on != 0.0) base.margin_delta_halved_electricity = compare_costs(base, halved);
        return base;
    } catch (const Error& e) {
        rethrow_with_context(e, "scenario '" + s.name + "'");
    }
}

/// Backtests independent scenarios concurrently; results keep input order.
inline std::vector<Report> backtest_all(std::span<const Scenario> scenarios) {
    std::vector<std::future<Report>> pending;
    pending.reserve(scenarios.size());
    for (const auto& s : scenarios) pending.push_back(std::async(std::launch::async, [&s] { return backtest(s); }));
    std::vector<Report> out;
    out.reserve(pending.size());
    for (auto& f : pending) out.push_back(f.get());
    return out;
}

}  // namespace minegrid
