#pragma once

// Command-line front end. Exit status: 0 success, 1 validation or usage
// error, 2 I/O error.

#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "minegrid/io.hpp"
#include "minegrid/scenario.hpp"
#include "minegrid/scheduler.hpp"
#include "minegrid/segments.hpp"
#include "minegrid/tariff.hpp"

namespace minegrid::cli {

enum class LogLevel { Quiet, Info, Debug };

/// Reads MINEGRID_LOG (quiet | info | debug); anything else means info.
inline LogLevel log_level_from_env() {
    const char* v = std::getenv("MINEGRID_LOG");
    if (!v) return LogLevel::Info;
    const std::string s(v);
    if (s == "quiet") return LogLevel::Quiet;
    if (s == "debug") return LogLevel::Debug;
    return LogLevel::Info;
}

class Logger {
public:
    Logger(std::ostream& sink, LogLevel level) : sink_(sink), level_(level) {}

    void info(const std::string& msg) const {
        if (level_ != LogLevel::Quiet) sink_ << "[info] " << msg << '\n';
    }
    void debug(const std::string& msg) const {
        if (level_ == LogLevel::Debug) sink_ << "[debug] " << msg << '\n';
    }

private:
    std::ostream& sink_;
    LogLevel level_;
};

namespace detail {

inline std::string money(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
}

inline void print_capex(std::ostream& out, const CapexBreakdown& b) {
    out << "asic_units        " << money(b.asic_units) << '\n'
        << "smart_meter       " << money(b.smart_meter) << '\n'
        << "racks_networking  " << money(b.racks_networking) << '\n'
        << "infrastructure    " << money(b.infrastructure) << '\n'
        << "step_down         " << money(b.step_down) << '\n'
        << "total             " << money(b.total) << '\n';
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const Logger log(err, log_level_from_env());

    CLI::App app{"Mining profitability backtests under electricity tariffs", "minegrid"};
    app.require_subcommand(1);

    std::string config_path, out_path, plot_path, schedule_path, day;
    auto* backtest_cmd = app.add_subcommand("backtest", "Backtest a scenario config");
    backtest_cmd->add_option("config", config_path, "Scenario config (JSON)")->required();
    backtest_cmd->add_option("--out", out_path, "Write the report JSON here instead of stdout");
    backtest_cmd->add_option("--plot", plot_path, "Write per-hour plot data (CSV)");
    backtest_cmd->add_option("--schedule", schedule_path, "Write the smart schedule (CSV)");

    auto* schedule_cmd = app.add_subcommand("schedule", "Print one day's smart schedule");
    schedule_cmd->add_option("config", config_path, "Scenario config (JSON)")->required();
    schedule_cmd->add_option("--day", day, "Local date, YYYY-MM-DD")->required();

    std::string segment;
    std::int64_t units = 0;
    double mw = -1.0, unit_power = 1.43;
    bool new_facility = false;
    auto* capex_cmd = app.add_subcommand("capex", "Sunk-cost breakdown for a deployment");
    capex_cmd->add_option("--segment", segment, "hobbyist | semi-professional | professional")->required();
    capex_cmd->add_option("--units", units, "Unit count")->required();
    capex_cmd->add_option("--mw", mw, "Facility capacity in MW (professional)");
    capex_cmd->add_flag("--new-facility", new_facility, "Include high-voltage step-down");
    capex_cmd->add_option("--unit-power-kw", unit_power, "Power per unit in kW");

    double share = 0.0, h0 = 0.0, per_miner = 0.0, unit_hashrate = 4730.0;
    auto* fleet_cmd = app.add_subcommand("fleet-plan", "Miners needed for a network share");
    fleet_cmd->add_option("--share", share, "Target share of network hashrate")->required();
    fleet_cmd->add_option("--h0", h0, "Network hashrate in GH/s")->required();
    fleet_cmd->add_option("--per-miner", per_miner, "Hashrate per miner in GH/s")->required();
    fleet_cmd->add_option("--segment", segment, "Segment of each miner")->required();
    fleet_cmd->add_option("--unit-hashrate", unit_hashrate, "Hashrate per unit in GH/s");
    fleet_cmd->add_option("--unit-power-kw", unit_power, "Power per unit in kW");

    std::string bids_path;
    double demand = 0.0;
    auto* auction_cmd = app.add_subcommand("clear-auction", "Clear a day-ahead supply auction");
    auction_cmd->add_option("--bids", bids_path, "Bids CSV (bidder_id,quantity_mw,price_usd_per_mwh)")->required();
    auction_cmd->add_option("--demand", demand, "Demand in MW")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (*backtest_cmd) {
            const Scenario s = io::load_scenario(config_path);
            log.debug("loaded scenario '" + s.name + "' with " + std::to_string(s.network.size()) + " snapshots");
            const Report r = backtest(s);
            const std::string json = io::report_json(r);
            if (out_path.empty()) {
                out << json;
            } else {
                io::write_file_atomic(out_path, json);
                log.info("wrote " + out_path);
            }
            if (!plot_path.empty()) {
                io::write_file_atomic(plot_path, io::plot_csv(r, s.tariff.tz_offset_minutes()));
                log.info("wrote " + plot_path);
            }
            if (!schedule_path.empty()) {
                io::write_file_atomic(schedule_path, io::schedule_csv(r.schedule, r.ledger, s.tariff.tz_offset_minutes()));
                log.info("wrote " + schedule_path);
            }
            return 0;
        }

        if (*schedule_cmd) {
            const Scenario s = io::load_scenario(config_path);
            const auto days = parse_date(day);
            if (!days) throw DomainError("--day must be YYYY-MM-DD, got '" + day + "'");
            const int tz = s.tariff.tz_offset_minutes();
            const Horizon horizon{*days * kSecondsPerDay - static_cast<EpochSeconds>(tz) * 60, 24};
            HourlyLedger ledger;
            try {
                ledger = hourly_ledger(s.rig, s.network, s.tariff, horizon);
            } catch (const Error& e) {
                rethrow_with_context(e, "scenario '" + s.name + "'");
            }
            const Schedule sched(horizon.start, dwell_optimal_flags(ledger.profit_usd, s.dwell));
            out << "time,price_usd_per_kwh,revenue_usd,cost_usd,profit_usd,on\n";
            for (std::size_t i = 0; i < 24; ++i) {
                out << format_iso8601(horizon.hour_start(i), tz) << ',' << io::detail::format_g(ledger.price_usd_per_kwh[i], 9)
                    << ',' << io::detail::format_g(ledger.revenue_usd[i], 9) << ','
                    << io::detail::format_g(ledger.cost_usd[i], 9) << ',' << io::detail::format_g(ledger.profit_usd[i], 9)
                    << ',' << (sched.is_on(i) ? 1 : 0) << '\n';
            }
            out << "# duty_cycle " << io::detail::format_g(sched.duty_cycle(), 9) << ", profit_usd "
                << io::detail::format_g(schedule_profit(ledger.profit_usd, sched.hours()), 9) << '\n';
            return 0;
        }

        if (*capex_cmd) {
            CostAssumptions a;
            a.unit_power_kw = unit_power;
            const auto kind = parse_segment_kind(segment);
            const CapexBreakdown b =
                capex(kind, units, a, mw >= 0.0 ? std::optional<double>(mw) : std::nullopt, new_facility);
            out << "segment           " << to_string(kind) << '\n' << "units             " << units << '\n';
            detail::print_capex(out, b);
            out << "non_asic_fraction " << io::detail::format_g(non_asic_fraction(b), 6) << '\n';
            return 0;
        }

        if (*fleet_cmd) {
            CostAssumptions a;
            a.unit_power_kw = unit_power;
            const auto kind = parse_segment_kind(segment);
            const FleetPlan plan = fleet_plan(share, h0, per_miner, kind, a, unit_hashrate);
            out << "miners            " << plan.miner_count << '\n'
                << "units_per_miner   " << plan.units_per_miner << '\n'
                << "total_units       " << plan.total_units << '\n'
                << "capex_per_miner   " << detail::money(plan.per_miner_capex.total) << '\n'
                << "total_capex       " << detail::money(plan.total_capex) << '\n'
                << "achieved_share    " << io::detail::format_g(plan.achieved_share, 9) << '\n';
            return 0;
        }

        if (*auction_cmd) {
            const auto bids = io::read_bids_csv(bids_path);
            const ClearingResult r = clear_day_ahead(bids, demand);
            out << "clearing_price_usd_per_mwh " << io::detail::format_g(r.clearing_price, 9) << '\n'
                << "total_dispatched_mw " << io::detail::format_g(r.total_dispatched, 9) << '\n'
                << "bidder_id,quantity_mw,price_usd_per_mwh,dispatched_mw\n";
            for (std::size_t i = 0; i < bids.size(); ++i) {
                out << bids[i].bidder_id << ',' << io::detail::format_g(bids[i].quantity_mw, 9) << ','
                    << io::detail::format_g(bids[i].price_usd_per_mwh, 9) << ','
                    << io::detail::format_g(r.dispatched[i].mw, 9) << '\n';
            }
            return 0;
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace minegrid::cli
