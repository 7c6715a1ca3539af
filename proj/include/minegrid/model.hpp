#pragma once

// Expected-value revenue and cost of a proof-of-work mining rig, plus the
// older "share of block reward minus linear costs" profit function kept as
// a comparison baseline.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "minegrid/civil_time.hpp"
#include "minegrid/errors.hpp"

namespace minegrid {

inline constexpr double kHashesPerGigahash = 1e9;
inline constexpr double kHashesPerDifficultyUnit = 4294967296.0;  // 2^32
inline constexpr double kHoursPerDay = 24.0;

/// Network state for one sampling interval (an hour or a day).
struct NetworkSnapshot {
    EpochSeconds timestamp = 0;
    double hashrate_ghs = 0.0;        // whole-network hashrate
    double difficulty = 0.0;
    double price_usd = 0.0;           // USD per BTC
    double block_reward_btc = 0.0;    // subsidy per block
    double fees_btc_per_block = 0.0;

    void validate() const {
        auto finite = [](double v) { return std::isfinite(v); };
        if (!finite(hashrate_ghs) || hashrate_ghs <= 0.0)
            throw DomainError("network hashrate must be positive");
        if (!finite(difficulty) || difficulty <= 0.0) throw DomainError("difficulty must be positive");
        if (!finite(price_usd) || price_usd < 0.0) throw DomainError("bitcoin price must be non-negative");
        if (!finite(block_reward_btc) || block_reward_btc < 0.0)
            throw DomainError("block reward must be non-negative");
        if (!finite(fees_btc_per_block) || fees_btc_per_block < 0.0)
            throw DomainError("fee volume must be non-negative");
    }

    /// Fiat value of one block: price x (subsidy + fees).
    double usd_per_block() const { return price_usd * (block_reward_btc + fees_btc_per_block); }
};

/// A homogeneous deployment of mining units.
class MinerRig {
public:
    MinerRig(std::int64_t unit_count, double unit_hashrate_ghs, double unit_power_kw)
        : unit_count_(unit_count), unit_hashrate_ghs_(unit_hashrate_ghs), unit_power_kw_(unit_power_kw) {
        if (unit_count < 1) throw DomainError("unit count must be at least 1");
        if (!(unit_hashrate_ghs > 0.0) || !std::isfinite(unit_hashrate_ghs))
            throw DomainError("unit hashrate must be positive");
        if (!(unit_power_kw > 0.0) || !std::isfinite(unit_power_kw))
            throw DomainError("unit power must be positive");
    }

    std::int64_t unit_count() const noexcept { return unit_count_; }
    double unit_hashrate_ghs() const noexcept { return unit_hashrate_ghs_; }
    double unit_power_kw() const noexcept { return unit_power_kw_; }

    double hashrate_ghs() const noexcept { return static_cast<double>(unit_count_) * unit_hashrate_ghs_; }
    double total_power_kw() const noexcept { return static_cast<double>(unit_count_) * unit_power_kw_; }

private:
    std::int64_t unit_count_;
    double unit_hashrate_ghs_;
    double unit_power_kw_;
};

/// Parameters of the legacy profit function.
struct LegacyProfitParams {
    double opex_per_ghs = 0.0;   // operating cost, USD per GH/s per period
    double periods = 1.0;        // amortization period count
    double ghs_per_usd = 1.0;    // hardware efficiency per dollar
    double nre_usd = 0.0;        // non-recurring engineering cost

    void validate() const {
        if (!(periods > 0.0)) throw DomainError("amortization period count must be positive");
        if (!(ghs_per_usd > 0.0)) throw DomainError("hashrate per USD must be positive");
        if (nre_usd < 0.0) throw DomainError("NRE must be non-negative");
        if (opex_per_ghs < 0.0) throw DomainError("operating cost must be non-negative");
    }
};

/// Expected blocks found per day by `hashrate_ghs` at `difficulty`.
inline double expected_blocks_per_day(double hashrate_ghs, double difficulty) {
    if (!(difficulty > 0.0)) throw DomainError("difficulty must be positive");
    if (hashrate_ghs < 0.0) throw DomainError("hashrate must be non-negative");
    return hashrate_ghs * kHashesPerGigahash * static_cast<double>(kSecondsPerDay) /
           (difficulty * kHashesPerDifficultyUnit);
}

/// Expected USD revenue per day. Evaluated as the rig's share of all
/// hashing times the fiat reward times the number of blocks the combined
/// hashrate (network + rig) would find at this difficulty.
inline double revenue_per_day(const MinerRig& rig, const NetworkSnapshot& snap) {
    snap.validate();
    const double x = rig.hashrate_ghs();
    const double total = snap.hashrate_ghs + x;
    const double share = x / total;
    const double blocks = total * (kHashesPerGigahash * static_cast<double>(kSecondsPerDay)) /
                          (snap.difficulty * kHashesPerDifficultyUnit);
    return share * snap.usd_per_block() * blocks;
}

inline double revenue_per_hour(const MinerRig& rig, const NetworkSnapshot& snap) {
    return revenue_per_day(rig, snap) / kHoursPerDay;
}

/// Energy cost of running `power_kw` for one hour at `usd_per_kwh`.
inline double cost_per_hour(double power_kw, double usd_per_kwh) {
    if (power_kw < 0.0) throw DomainError("power must be non-negative");
    if (usd_per_kwh < 0.0) throw DomainError("negative electricity prices are not supported");
    return power_kw * 1.0 * usd_per_kwh;
}

/// Legacy profit: share of the block reward minus linear opex and the
/// amortized hardware + NRE outlay.
inline double legacy_profit(double hashrate_ghs, const LegacyProfitParams& params, const NetworkSnapshot& snap) {
    params.validate();
    snap.validate();
    if (hashrate_ghs < 0.0) throw DomainError("hashrate must be non-negative");
    const double reward = hashrate_ghs / (snap.hashrate_ghs + hashrate_ghs) * snap.usd_per_block();
    const double opex = hashrate_ghs * params.opex_per_ghs;
    const double amortized = (hashrate_ghs / params.ghs_per_usd + params.nre_usd) / params.periods;
    return reward - opex - amortized;
}

/// A time-sorted snapshot sequence with uniform spacing. Daily data is
/// broadcast to every hour it spans.
class NetworkSeries {
public:
    NetworkSeries() = default;

    /// `cadence_seconds` is required only for single-snapshot series; for
    /// longer ones it is detected and must be uniform.
    explicit NetworkSeries(std::vector<NetworkSnapshot> snaps, EpochSeconds cadence_seconds = kSecondsPerHour)
        : snaps_(std::move(snaps)), cadence_(cadence_seconds) {
        if (snaps_.empty()) throw DomainError("network series is empty");
        for (const auto& s : snaps_) s.validate();
        if (snaps_.size() > 1) cadence_ = snaps_[1].timestamp - snaps_[0].timestamp;
        if (cadence_ <= 0) throw DomainError("network series timestamps must be strictly increasing");
        for (std::size_t i = 1; i < snaps_.size(); ++i) {
            if (snaps_[i].timestamp - snaps_[i - 1].timestamp != cadence_)
                throw DomainError("network series cadence is not uniform at index " + std::to_string(i));
        }
    }

    const std::vector<NetworkSnapshot>& snapshots() const noexcept { return snaps_; }
    EpochSeconds cadence_seconds() const noexcept { return cadence_; }
    std::size_t size() const noexcept { return snaps_.size(); }

    EpochSeconds start() const { return snaps_.front().timestamp; }
    /// Exclusive end of the covered span.
    EpochSeconds end() const { return snaps_.back().timestamp + cadence_; }

    bool covers(EpochSeconds t) const { return !snaps_.empty() && t >= start() && t < end(); }

    const NetworkSnapshot& at(EpochSeconds t) const {
        if (!covers(t)) throw LookupError("no network snapshot covers " + format_iso8601(t));
        return snaps_[static_cast<std::size_t>((t - start()) / cadence_)];
    }

    /// Applies `fn` to a copy of every snapshot.
    template <typename Fn>
    NetworkSeries transformed(Fn&& fn) const {
        NetworkSeries out = *this;
        for (auto& s : out.snaps_) fn(s);
        for (const auto& s : out.snaps_) s.validate();
        return out;
    }

private:
    std::vector<NetworkSnapshot> snaps_;
    EpochSeconds cadence_ = kSecondsPerHour;
};

}  // namespace minegrid
