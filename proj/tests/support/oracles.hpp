#pragma once

// Brute-force reference implementations. These deliberately share no code
// with the library paths they check.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace oracle {

/// Profit of a bitmask schedule (bit i = hour i on), summed in hour order.
inline double mask_profit(const std::vector<double>& profits, std::uint32_t mask) {
    double total = 0.0;
    for (std::size_t i = 0; i < profits.size(); ++i) {
        if (mask >> i & 1u) total += profits[i];
    }
    return total;
}

/// Maximum total profit over all 2^H on/off vectors.
inline double best_profit_exhaustive(const std::vector<double>& profits) {
    double best = -std::numeric_limits<double>::infinity();
    const std::uint32_t count = 1u << profits.size();
    for (std::uint32_t mask = 0; mask < count; ++mask) best = std::max(best, mask_profit(profits, mask));
    return best;
}

struct Dwell {
    int min_on = 1;
    int min_off = 1;
    bool initial_on = false;
    int initial_elapsed = 1 << 20;
};

/// Every run that ends inside the horizon must meet its minimum; the run
/// in progress at the start counts the hours already elapsed; the final
/// run is exempt.
inline bool feasible(std::uint32_t mask, std::size_t hours, const Dwell& d) {
    bool state = d.initial_on;
    long run = d.initial_elapsed;
    for (std::size_t i = 0; i < hours; ++i) {
        const bool on = (mask >> i & 1u) != 0;
        if (on == state) {
            ++run;
        } else {
            if (run < (state ? d.min_on : d.min_off)) return false;
            state = on;
            run = 1;
        }
    }
    return true;
}

inline double best_feasible_profit_exhaustive(const std::vector<double>& profits, const Dwell& d) {
    double best = -std::numeric_limits<double>::infinity();
    const std::uint32_t count = 1u << profits.size();
    for (std::uint32_t mask = 0; mask < count; ++mask) {
        if (feasible(mask, profits.size(), d)) best = std::max(best, mask_profit(profits, mask));
    }
    return best;
}

struct Bid {
    double quantity;
    double price;
    std::string id;
};

struct Clearing {
    double price;
    std::vector<double> dispatched;  // input order
};

/// Sort-and-accumulate: build the cumulative supply curve in merit order
/// and locate the first tier whose cumulative quantity reaches demand.
inline Clearing clear(const std::vector<Bid>& bids, double demand) {
    struct Tier {
        double price;
        std::string id;
        std::size_t index;
        double quantity;
    };
    std::vector<Tier> tiers;
    for (std::size_t i = 0; i < bids.size(); ++i) tiers.push_back({bids[i].price, bids[i].id, i, bids[i].quantity});
    std::sort(tiers.begin(), tiers.end(), [](const Tier& a, const Tier& b) {
        if (a.price != b.price) return a.price < b.price;
        if (a.id != b.id) return a.id < b.id;
        return a.index < b.index;
    });
    std::vector<double> cumulative(tiers.size());
    double run = 0.0;
    for (std::size_t k = 0; k < tiers.size(); ++k) cumulative[k] = run += tiers[k].quantity;

    std::size_t marginal = tiers.size() - 1;
    for (std::size_t k = 0; k < tiers.size(); ++k) {
        if (cumulative[k] >= demand) {
            marginal = k;
            break;
        }
    }
    Clearing out{tiers[marginal].price, std::vector<double>(bids.size(), 0.0)};
    for (std::size_t k = 0; k < marginal; ++k) out.dispatched[tiers[k].index] = tiers[k].quantity;
    out.dispatched[tiers[marginal].index] = demand - (marginal == 0 ? 0.0 : cumulative[marginal - 1]);
    return out;
}

}  // namespace oracle
