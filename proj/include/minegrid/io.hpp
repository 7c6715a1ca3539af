#pragma once

// File formats: network/price/bid CSVs, the scenario JSON config, and the
// report and plot outputs.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "minegrid/civil_time.hpp"
#include "minegrid/errors.hpp"
#include "minegrid/model.hpp"
#include "minegrid/scenario.hpp"
#include "minegrid/segments.hpp"
#include "minegrid/tariff.hpp"

namespace minegrid::io {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr std::string_view kNetworkHeader =
    "timestamp,hashrate_ghs,difficulty,price_usd,block_reward_btc,fees_btc_per_block";
inline constexpr std::string_view kPriceHeader = "timestamp,usd_per_kwh";
inline constexpr std::string_view kBidsHeader = "bidder_id,quantity_mw,price_usd_per_mwh";
inline constexpr std::string_view kPlotHeader = "timestamp,on,price_usd_per_kwh,revenue_usd,cost_usd,profit_usd";
inline constexpr std::string_view kScheduleHeader = "timestamp,on,profit_usd";

// --- files ------------------------------------------------------------------

inline std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open file for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError(path.string(), "read failed");
    return buf.str();
}

/// Writes via a sibling temp file and a rename, so readers never observe
/// a partially written file.
inline void write_file_atomic(const fs::path& path, std::string_view content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(path.string(), "cannot open file for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw IoError(path.string(), "write failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError(path.string(), "rename failed");
    }
}

// --- CSV --------------------------------------------------------------------

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        out.push_back(trim(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

/// Non-blank lines with their 1-based line numbers.
inline std::vector<std::pair<std::size_t, std::string_view>> lines_of(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string_view>> out;
    std::size_t number = 0, pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++number;
        if (!trim(line).empty()) out.emplace_back(number, trim(line));
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return out;
}

inline double parse_number(std::string_view field, const std::string& path, std::size_t line, std::string_view column) {
    double v = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
        throw ParseError(path, line, "column '" + std::string(column) + "': not a number: '" + std::string(field) + "'");
    return v;
}

inline EpochSeconds parse_timestamp(std::string_view field, const std::string& path, std::size_t line) {
    const auto t = parse_iso8601(field);
    if (!t) throw ParseError(path, line, "bad ISO-8601 timestamp '" + std::string(field) + "'");
    return *t;
}

inline void expect_header(std::string_view got, std::string_view want, const std::string& path, std::size_t line) {
    if (got != want)
        throw ParseError(path, line, "expected header '" + std::string(want) + "', got '" + std::string(got) + "'");
}

inline std::string format_g(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

}  // namespace detail

/// Parses a network series; `path` labels error messages.
inline NetworkSeries parse_network_csv(std::string_view text, const std::string& path) {
    const auto lines = detail::lines_of(text);
    if (lines.empty()) throw ParseError(path, 0, "file is empty");
    if (lines[0].second.find("fees_btc_per_day") != std::string_view::npos)
        throw ParseError(path, lines[0].first, "per-day fee columns are not supported; supply fees_btc_per_block");
    detail::expect_header(lines[0].second, kNetworkHeader, path, lines[0].first);
    if (lines.size() < 2) throw ParseError(path, 0, "no data rows");

    std::vector<NetworkSnapshot> snaps;
    snaps.reserve(lines.size() - 1);
    EpochSeconds cadence = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto [number, line] = lines[i];
        const auto f = detail::split_fields(line);
        if (f.size() != 6) throw ParseError(path, number, "expected 6 fields, got " + std::to_string(f.size()));
        NetworkSnapshot s;
        s.timestamp = detail::parse_timestamp(f[0], path, number);
        s.hashrate_ghs = detail::parse_number(f[1], path, number, "hashrate_ghs");
        s.difficulty = detail::parse_number(f[2], path, number, "difficulty");
        s.price_usd = detail::parse_number(f[3], path, number, "price_usd");
        s.block_reward_btc = detail::parse_number(f[4], path, number, "block_reward_btc");
        s.fees_btc_per_block = detail::parse_number(f[5], path, number, "fees_btc_per_block");
        try {
            s.validate();
        } catch (const DomainError& e) {
            throw ParseError(path, number, e.what());
        }
        if (!snaps.empty()) {
            const EpochSeconds gap = s.timestamp - snaps.back().timestamp;
            if (gap <= 0) throw CadenceError(path, number, "timestamp does not increase");
            if (cadence == 0) cadence = gap;
            if (gap != cadence)
                throw CadenceError(path, number,
                                   "gap of " + std::to_string(gap) + " s breaks the " + std::to_string(cadence) + " s cadence");
        }
        snaps.push_back(s);
    }
    return NetworkSeries(std::move(snaps), cadence == 0 ? kSecondsPerHour : cadence);
}

inline NetworkSeries read_network_csv(const fs::path& path) {
    return parse_network_csv(read_text_file(path), path.string());
}

/// Serializes with full precision so that re-parsing is lossless.
inline std::string network_csv(const NetworkSeries& series) {
    std::string out(kNetworkHeader);
    out += '\n';
    for (const auto& s : series.snapshots()) {
        out += format_iso8601(s.timestamp);
        for (double v : {s.hashrate_ghs, s.difficulty, s.price_usd, s.block_reward_btc, s.fees_btc_per_block})
            out += "," + detail::format_g(v, 17);
        out += '\n';
    }
    return out;
}

/// Hourly price series; rows must be consecutive hours.
inline Tariff parse_price_csv(std::string_view text, const std::string& path, int tz_offset_minutes) {
    const auto lines = detail::lines_of(text);
    if (lines.empty()) throw ParseError(path, 0, "file is empty");
    detail::expect_header(lines[0].second, kPriceHeader, path, lines[0].first);
    if (lines.size() < 2) throw ParseError(path, 0, "no data rows");

    std::map<EpochSeconds, double> prices;
    std::optional<EpochSeconds> prev;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto [number, line] = lines[i];
        const auto f = detail::split_fields(line);
        if (f.size() != 2) throw ParseError(path, number, "expected 2 fields, got " + std::to_string(f.size()));
        const EpochSeconds t = detail::parse_timestamp(f[0], path, number);
        const double p = detail::parse_number(f[1], path, number, "usd_per_kwh");
        if (p < 0.0) throw ParseError(path, number, "negative electricity prices are not supported");
        if (prev) {
            if (t <= *prev) throw CadenceError(path, number, "timestamp does not increase");
            if (t - *prev != kSecondsPerHour) throw CadenceError(path, number, "gap in hourly price series");
        }
        prev = t;
        prices.emplace(t, p);
    }
    return Tariff::hourly(prices, tz_offset_minutes);
}

inline Tariff read_price_csv(const fs::path& path, int tz_offset_minutes) {
    return parse_price_csv(read_text_file(path), path.string(), tz_offset_minutes);
}

inline std::vector<SupplyBid> parse_bids_csv(std::string_view text, const std::string& path) {
    const auto lines = detail::lines_of(text);
    if (lines.empty()) throw ParseError(path, 0, "file is empty");
    detail::expect_header(lines[0].second, kBidsHeader, path, lines[0].first);
    std::vector<SupplyBid> bids;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto [number, line] = lines[i];
        const auto f = detail::split_fields(line);
        if (f.size() != 3) throw ParseError(path, number, "expected 3 fields, got " + std::to_string(f.size()));
        SupplyBid b{detail::parse_number(f[1], path, number, "quantity_mw"),
                    detail::parse_number(f[2], path, number, "price_usd_per_mwh"), std::string(f[0])};
        if (!(b.quantity_mw > 0.0)) throw ParseError(path, number, "bid quantity must be positive");
        if (b.price_usd_per_mwh < 0.0) throw ParseError(path, number, "bid price must be non-negative");
        bids.push_back(std::move(b));
    }
    if (bids.empty()) throw ParseError(path, 0, "no bids");
    return bids;
}

inline std::vector<SupplyBid> read_bids_csv(const fs::path& path) {
    return parse_bids_csv(read_text_file(path), path.string());
}

// --- JSON config --------------------------------------------------------------

namespace detail {

inline void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> known, const std::string& path,
                                const std::string& where) {
    if (!j.is_object()) throw ParseError(path, 0, where + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (auto k : known) ok = ok || key == k;
        if (!ok) throw ParseError(path, 0, "unknown key '" + key + "' in " + where);
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

inline fs::path resolve(const fs::path& base_dir, const std::string& p) {
    const fs::path candidate(p);
    return candidate.is_absolute() ? candidate : base_dir / candidate;
}

}  // namespace detail

/// Tariff object: `{"kind":"fixed","usd_per_kwh":..}`,
/// `{"kind":"tou","tz_offset_minutes":..,"bands":[{"start":..,"end":..,"usd_per_kwh":..}]}`
/// or `{"kind":"hourly","csv":"prices.csv","tz_offset_minutes":..}`.
/// Relative CSV paths resolve against `base_dir`.
inline Tariff tariff_from_json(const json& j, const fs::path& base_dir, const std::string& path) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        const int tz = detail::get_or<int>(j, "tz_offset_minutes", 0);
        if (kind == "fixed") {
            detail::reject_unknown_keys(j, {"kind", "usd_per_kwh", "tz_offset_minutes"}, path, "tariff");
            return Tariff::fixed(j.at("usd_per_kwh").get<double>());
        }
        if (kind == "tou") {
            detail::reject_unknown_keys(j, {"kind", "bands", "tz_offset_minutes"}, path, "tariff");
            std::vector<TouBand> bands;
            for (const auto& b : j.at("bands")) {
                detail::reject_unknown_keys(b, {"start", "end", "usd_per_kwh"}, path, "tariff band");
                bands.push_back({b.at("start").get<int>(), b.at("end").get<int>(), b.at("usd_per_kwh").get<double>()});
            }
            return Tariff::time_of_use(std::move(bands), tz);
        }
        if (kind == "hourly") {
            detail::reject_unknown_keys(j, {"kind", "csv", "tz_offset_minutes"}, path, "tariff");
            return read_price_csv(detail::resolve(base_dir, j.at("csv").get<std::string>()), tz);
        }
        throw ParseError(path, 0, "unknown tariff kind '" + kind + "'");
    } catch (const json::exception& e) {
        throw ParseError(path, 0, std::string("tariff: ") + e.what());
    } catch (const DomainError& e) {
        throw ParseError(path, 0, std::string("tariff: ") + e.what());
    }
}

inline Tariff read_tariff_json(const fs::path& path) {
    try {
        return tariff_from_json(json::parse(read_text_file(path)), path.parent_path(), path.string());
    } catch (const json::exception& e) {
        throw ParseError(path.string(), 0, e.what());
    }
}

/// Overrides on top of the default cost assumptions.
inline CostAssumptions assumptions_from_json(const json& j, const std::string& path) {
    detail::reject_unknown_keys(j,
                                {"base_unit_price", "semi_pro_discount", "pro_discount", "semi_pro_discount_threshold",
                                 "pro_discount_threshold", "smart_meter_price", "racks_networking_fixed",
                                 "racks_networking_per_unit", "infra_per_mw_min", "infra_per_mw_max", "infra_per_mw",
                                 "step_down_per_mw", "unit_power_kw"},
                                path, "assumptions");
    CostAssumptions a;
    auto set = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    set("base_unit_price", a.base_unit_price);
    set("semi_pro_discount", a.semi_pro_discount);
    set("pro_discount", a.pro_discount);
    set("semi_pro_discount_threshold", a.semi_pro_discount_threshold);
    set("pro_discount_threshold", a.pro_discount_threshold);
    set("smart_meter_price", a.smart_meter_price);
    set("racks_networking_fixed", a.racks_networking_fixed);
    set("racks_networking_per_unit", a.racks_networking_per_unit);
    set("infra_per_mw_min", a.infra_per_mw_min);
    set("infra_per_mw_max", a.infra_per_mw_max);
    set("infra_per_mw", a.infra_per_mw);
    set("step_down_per_mw", a.step_down_per_mw);
    set("unit_power_kw", a.unit_power_kw);
    try {
        a.validate();
    } catch (const DomainError& e) {
        throw ParseError(path, 0, std::string("assumptions: ") + e.what());
    }
    return a;
}

/// Loads a scenario config and the files it references.
inline Scenario load_scenario(const fs::path& path) {
    const std::string label = path.string();
    const std::string text = read_text_file(path);
    const fs::path base = path.parent_path();
    try {
        const json j = json::parse(text);
        detail::reject_unknown_keys(j,
                                    {"name", "network_csv", "segment", "rig", "tariff", "dwell", "assumptions", "capex",
                                     "transforms", "duty_override"},
                                    label, "scenario");
        Scenario s;
        s.name = detail::get_or<std::string>(j, "name", path.stem().string());
        s.segment = parse_segment_kind(j.at("segment").get<std::string>());

        const json rig = detail::get_or<json>(j, "rig", json::object());
        detail::reject_unknown_keys(rig, {"unit_count", "unit_hashrate_ghs", "unit_power_kw"}, label, "rig");
        s.rig = MinerRig(detail::get_or<std::int64_t>(rig, "unit_count", 1),
                         detail::get_or<double>(rig, "unit_hashrate_ghs", 4730.0),
                         detail::get_or<double>(rig, "unit_power_kw", 1.43));

        s.tariff = tariff_from_json(j.at("tariff"), base, label);
        s.network = read_network_csv(detail::resolve(base, j.at("network_csv").get<std::string>()));
        if (j.contains("assumptions")) s.assumptions = assumptions_from_json(j.at("assumptions"), label);

        s.dwell = DwellConstraint::default_for(s.segment);
        if (j.contains("dwell")) {
            const json& d = j.at("dwell");
            detail::reject_unknown_keys(d, {"min_on_hours", "min_off_hours", "initial_on", "initial_elapsed_hours"},
                                        label, "dwell");
            s.dwell.min_on_hours = detail::get_or<int>(d, "min_on_hours", s.dwell.min_on_hours);
            s.dwell.min_off_hours = detail::get_or<int>(d, "min_off_hours", s.dwell.min_off_hours);
            s.dwell.initial_on = detail::get_or<bool>(d, "initial_on", false);
            s.dwell.initial_elapsed_hours =
                detail::get_or<int>(d, "initial_elapsed_hours", DwellConstraint::kSettled);
            s.dwell.validate();
        }
        if (j.contains("capex")) {
            const json& c = j.at("capex");
            detail::reject_unknown_keys(c, {"mw_capacity", "new_facility"}, label, "capex");
            if (c.contains("mw_capacity")) s.mw_capacity = c.at("mw_capacity").get<double>();
            s.new_facility = detail::get_or<bool>(c, "new_facility", false);
        }
        if (j.contains("duty_override") && !j.at("duty_override").is_null())
            s.duty_override = j.at("duty_override").get<double>();
        if (j.contains("transforms")) {
            const json& t = j.at("transforms");
            detail::reject_unknown_keys(t, {"price_scale", "block_reward_btc"}, label, "transforms");
            if (t.contains("price_scale")) s = with_price_scale(std::move(s), t.at("price_scale").get<double>());
            if (t.contains("block_reward_btc"))
                s = with_block_reward(std::move(s), t.at("block_reward_btc").get<double>());
        }
        return s;
    } catch (const json::exception& e) {
        throw ParseError(label, 0, e.what());
    } catch (const DomainError& e) {
        throw ParseError(label, 0, e.what());
    }
}

// --- outputs ------------------------------------------------------------------

/// Report as JSON with a fixed key order and 9 significant digits, so the
/// same inputs always give the same bytes.
inline std::string report_json(const Report& r) {
    auto num = [](double v) { return detail::format_g(v, 9); };
    auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : std::string("null"); };
    std::string out = "{\n";
    out += "  \"scenario\": " + json(r.name).dump() + ",\n";
    out += "  \"hours\": " + std::to_string(r.schedule.size()) + ",\n";
    out += "  \"profit_always_on_usd\": " + num(r.profit_always_on) + ",\n";
    out += "  \"profit_smart_usd\": " + num(r.profit_smart) + ",\n";
    out += "  \"multiplier\": " + opt(r.multiplier) + ",\n";
    out += "  \"duty_cycle\": " + num(r.duty_cycle) + ",\n";
    out += "  \"avg_effective_price_usd_per_kwh\": " + num(r.avg_effective_price) + ",\n";
    out += "  \"avg_price_always_on_usd_per_kwh\": " + num(r.avg_price_always_on) + ",\n";
    out += "  \"capex_usd\": {\n";
    out += "    \"asic_units\": " + num(r.capex.asic_units) + ",\n";
    out += "    \"smart_meter\": " + num(r.capex.smart_meter) + ",\n";
    out += "    \"racks_networking\": " + num(r.capex.racks_networking) + ",\n";
    out += "    \"infrastructure\": " + num(r.capex.infrastructure) + ",\n";
    out += "    \"step_down\": " + num(r.capex.step_down) + ",\n";
    out += "    \"total\": " + num(r.capex.total) + "\n";
    out += "  },\n";
    out += "  \"non_asic_fraction\": " + num(r.non_asic_fraction) + ",\n";
    out += "  \"roi_days\": " + opt(r.roi_days) + ",\n";
    out += "  \"margin_delta_halved_electricity\": " + opt(r.margin_delta_halved_electricity) + "\n";
    out += "}\n";
    return out;
}

/// Per-hour values for charting. Revenue, cost and profit are what the
/// hour yields when the rig runs; `on` says whether the smart schedule
/// ran it. Timestamps use `tz_offset_minutes`.
inline std::string plot_csv(const Report& r, int tz_offset_minutes = 0) {
    auto num = [](double v) { return detail::format_g(v, 9); };
    std::string out(kPlotHeader);
    out += '\n';
    for (std::size_t i = 0; i < r.schedule.size(); ++i) {
        out += format_iso8601(r.ledger.horizon.hour_start(i), tz_offset_minutes);
        out += r.schedule.is_on(i) ? ",1," : ",0,";
        out += num(r.ledger.price_usd_per_kwh[i]) + "," + num(r.ledger.revenue_usd[i]) + "," +
               num(r.ledger.cost_usd[i]) + "," + num(r.ledger.profit_usd[i]) + "\n";
    }
    return out;
}

/// `timestamp,on,profit_usd` rows; profit is the hour's expected profit
/// when running.
inline std::string schedule_csv(const Schedule& schedule, const HourlyLedger& ledger, int tz_offset_minutes = 0) {
    std::string out(kScheduleHeader);
    out += '\n';
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        out += format_iso8601(schedule.horizon().hour_start(i), tz_offset_minutes);
        out += schedule.is_on(i) ? ",1," : ",0,";
        out += detail::format_g(ledger.profit_usd.at(i), 9) + "\n";
    }
    return out;
}

}  // namespace minegrid::io
