#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "minegrid/civil_time.hpp"
#include "minegrid/errors.hpp"

namespace minegrid {

/// A contiguous run of whole hours starting at `start`.
struct Horizon {
    EpochSeconds start = 0;
    std::size_t hours = 0;

    EpochSeconds hour_start(std::size_t i) const {
        return start + static_cast<EpochSeconds>(i) * kSecondsPerHour;
    }
    EpochSeconds end() const { return hour_start(hours); }
};

/// Per-hour on/off flags over a horizon.
class Schedule {
public:
    Schedule(EpochSeconds start, std::vector<bool> on) : start_(start), on_(std::move(on)) {
        if (on_.empty()) throw DomainError("schedule must cover at least one hour");
    }

    EpochSeconds start_timestamp() const noexcept { return start_; }
    const std::vector<bool>& hours() const noexcept { return on_; }
    std::size_t size() const noexcept { return on_.size(); }
    bool is_on(std::size_t i) const { return on_.at(i); }

    Horizon horizon() const { return {start_, on_.size()}; }

    std::size_t on_hours() const {
        return static_cast<std::size_t>(std::count(on_.begin(), on_.end(), true));
    }

    double duty_cycle() const {
        return static_cast<double>(on_hours()) / static_cast<double>(on_.size());
    }

private:
    EpochSeconds start_;
    std::vector<bool> on_;
};

inline double duty_cycle(const Schedule& schedule) { return schedule.duty_cycle(); }

}  // namespace minegrid
