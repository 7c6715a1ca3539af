#pragma once

// Electricity price schedules and the day-ahead uniform clearing auction.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "minegrid/civil_time.hpp"
#include "minegrid/errors.hpp"
#include "minegrid/schedule.hpp"

namespace minegrid {

enum class TariffKind { Fixed, TimeOfUse, HourlySeries };

/// One time-of-use band: local hours [start_hour, end_hour), wrapping past
/// midnight when end_hour <= start_hour. end_hour may be 24.
struct TouBand {
    int start_hour = 0;
    int end_hour = 24;
    double usd_per_kwh = 0.0;

    int length_hours() const {
        const int len = (end_hour - start_hour + 24) % 24;
        return len == 0 ? 24 : len;
    }
};

class Tariff {
public:
    static Tariff fixed(double usd_per_kwh) {
        check_price(usd_per_kwh);
        return Tariff(Fixed{usd_per_kwh}, 0);
    }

    static Tariff time_of_use(std::vector<TouBand> bands, int tz_offset_minutes = 0) {
        std::array<int, 24> hour_to_band;
        hour_to_band.fill(-1);
        for (std::size_t i = 0; i < bands.size(); ++i) {
            const auto& b = bands[i];
            if (b.start_hour < 0 || b.start_hour > 23 || b.end_hour < 0 || b.end_hour > 24)
                throw DomainError("TOU band hours must satisfy 0 <= start <= 23 and 0 <= end <= 24");
            check_price(b.usd_per_kwh);
            for (int k = 0; k < b.length_hours(); ++k) {
                const int h = (b.start_hour + k) % 24;
                if (hour_to_band[static_cast<std::size_t>(h)] != -1)
                    throw DomainError("TOU bands overlap at hour " + std::to_string(h));
                hour_to_band[static_cast<std::size_t>(h)] = static_cast<int>(i);
            }
        }
        for (int h = 0; h < 24; ++h) {
            if (hour_to_band[static_cast<std::size_t>(h)] == -1)
                throw DomainError("TOU bands leave hour " + std::to_string(h) + " uncovered");
        }
        return Tariff(TimeOfUse{std::move(bands), hour_to_band}, tz_offset_minutes);
    }

    /// Hourly price series keyed by timestamp; keys are truncated to the
    /// UTC hour.
    static Tariff hourly(const std::map<EpochSeconds, double>& prices, int tz_offset_minutes = 0) {
        Series s;
        for (const auto& [t, p] : prices) {
            check_price(p);
            if (!s.prices.emplace(truncate_to_hour(t), p).second)
                throw DomainError("duplicate hourly price for " + format_iso8601(truncate_to_hour(t)));
        }
        return Tariff(std::move(s), tz_offset_minutes);
    }

    TariffKind kind() const noexcept { return static_cast<TariffKind>(rep_.index()); }
    int tz_offset_minutes() const noexcept { return tz_offset_; }

    double price_at(EpochSeconds t) const {
        return std::visit(
            [&](const auto& r) -> double {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Fixed>) {
                    return r.price;
                } else if constexpr (std::is_same_v<T, TimeOfUse>) {
                    const int h = local_hour(t, tz_offset_);
                    return r.bands[static_cast<std::size_t>(r.hour_to_band[static_cast<std::size_t>(h)])]
                        .usd_per_kwh;
                } else {
                    const auto it = r.prices.find(truncate_to_hour(t));
                    if (it == r.prices.end())
                        throw LookupError("hourly tariff has no price for hour " +
                                          format_iso8601(truncate_to_hour(t)));
                    return it->second;
                }
            },
            rep_);
    }

    /// Same schedule with every price multiplied by `factor`.
    Tariff scaled(double factor) const {
        if (!(factor >= 0.0) || !std::isfinite(factor)) throw DomainError("price scale must be non-negative");
        Tariff out = *this;
        std::visit(
            [&](auto& r) {
                using T = std::decay_t<decltype(r)>;
                if constexpr (std::is_same_v<T, Fixed>) {
                    r.price *= factor;
                } else if constexpr (std::is_same_v<T, TimeOfUse>) {
                    for (auto& b : r.bands) b.usd_per_kwh *= factor;
                } else {
                    for (auto& [t, p] : r.prices) p *= factor;
                }
            },
            out.rep_);
        return out;
    }

    // Kind-specific accessors; each throws when the tariff is another kind.
    double fixed_price() const { return get<Fixed>("fixed").price; }
    const std::vector<TouBand>& bands() const { return get<TimeOfUse>("time-of-use").bands; }
    const std::map<EpochSeconds, double>& series() const { return get<Series>("hourly").prices; }

private:
    struct Fixed {
        double price;
    };
    struct TimeOfUse {
        std::vector<TouBand> bands;
        std::array<int, 24> hour_to_band;
    };
    struct Series {
        std::map<EpochSeconds, double> prices;
    };
    using Rep = std::variant<Fixed, TimeOfUse, Series>;

    Tariff(Rep rep, int tz_offset_minutes) : rep_(std::move(rep)), tz_offset_(tz_offset_minutes) {
        if (tz_offset_minutes < -24 * 60 || tz_offset_minutes > 24 * 60)
            throw DomainError("tz offset must be within +/-1440 minutes");
    }

    static void check_price(double p) {
        if (!std::isfinite(p) || p < 0.0) throw DomainError("tariff prices must be finite and non-negative");
    }

    template <typename T>
    const T& get(const char* name) const {
        if (const T* p = std::get_if<T>(&rep_)) return *p;
        throw DomainError(std::string("tariff is not a ") + name + " tariff");
    }

    Rep rep_;
    int tz_offset_ = 0;
};

inline double price_at(const Tariff& tariff, EpochSeconds t) { return tariff.price_at(t); }

/// Energy-weighted mean price paid over the schedule's on-hours. With no
/// on-hours (or zero power) nothing is billed and the plain mean price
/// over the horizon is reported instead.
inline double average_effective_price(const Tariff& tariff, const Schedule& schedule, double power_kw) {
    if (power_kw < 0.0) throw DomainError("power must be non-negative");
    double cost = 0.0, energy = 0.0, price_sum = 0.0;
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const double p = tariff.price_at(schedule.horizon().hour_start(i));
        price_sum += p;
        if (schedule.is_on(i)) {
            cost += power_kw * p;
            energy += power_kw;
        }
    }
    if (energy > 0.0) return cost / energy;
    return price_sum / static_cast<double>(schedule.size());
}

// --- Day-ahead market -------------------------------------------------------

struct SupplyBid {
    double quantity_mw = 0.0;
    double price_usd_per_mwh = 0.0;
    std::string bidder_id;
};

struct Dispatch {
    std::string bidder_id;
    double mw = 0.0;
};

struct ClearingResult {
    double clearing_price = 0.0;     // USD/MWh, the marginal bid's price
    std::vector<Dispatch> dispatched;  // one entry per input bid, input order
    double total_dispatched = 0.0;
    std::size_t marginal_index = 0;  // index of the marginal bid in the input
};

/// Uniform-price merit-order clearing. Bids are accepted cheapest first
/// (ties: bidder_id, then input order) until supply meets `demand_mw`; the
/// marginal bid is partially accepted and sets the price for everyone.
inline ClearingResult clear_day_ahead(const std::vector<SupplyBid>& bids, double demand_mw) {
    if (!(demand_mw > 0.0) || !std::isfinite(demand_mw)) throw DomainError("demand must be positive");
    if (bids.empty()) throw DomainError("no supply bids");
    double offered = 0.0;
    for (const auto& b : bids) {
        if (!(b.quantity_mw > 0.0) || !std::isfinite(b.quantity_mw))
            throw DomainError("bid quantity must be positive (bidder '" + b.bidder_id + "')");
        if (!(b.price_usd_per_mwh >= 0.0) || !std::isfinite(b.price_usd_per_mwh))
            throw DomainError("bid price must be non-negative (bidder '" + b.bidder_id + "')");
        offered += b.quantity_mw;
    }
    if (offered < demand_mw) {
        const double deficit = demand_mw - offered;
        throw ShortageError("demand exceeds offered supply by " + std::to_string(deficit) + " MW", deficit);
    }

    std::vector<std::size_t> order(bids.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (bids[a].price_usd_per_mwh != bids[b].price_usd_per_mwh)
            return bids[a].price_usd_per_mwh < bids[b].price_usd_per_mwh;
        return bids[a].bidder_id < bids[b].bidder_id;
    });

    ClearingResult out;
    out.dispatched.reserve(bids.size());
    for (const auto& b : bids) out.dispatched.push_back({b.bidder_id, 0.0});

    double accepted = 0.0;
    for (std::size_t idx : order) {
        const double remaining = demand_mw - accepted;
        const bool marginal = accepted + bids[idx].quantity_mw >= demand_mw;
        out.dispatched[idx].mw = marginal ? remaining : bids[idx].quantity_mw;
        accepted += out.dispatched[idx].mw;
        out.marginal_index = idx;
        out.clearing_price = bids[idx].price_usd_per_mwh;
        if (marginal) break;
    }
    out.total_dispatched = demand_mw;
    return out;
}

}  // namespace minegrid
