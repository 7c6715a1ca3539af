#pragma once

// ISO-8601 timestamps <-> UTC epoch seconds. Only the fixed-offset forms
// used by the data files are accepted: YYYY-MM-DDTHH:MM:SS followed by
// `Z` or `+HH:MM` / `-HH:MM`.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace minegrid {

using EpochSeconds = std::int64_t;

inline constexpr EpochSeconds kSecondsPerHour = 3600;
inline constexpr EpochSeconds kSecondsPerDay = 86400;

namespace detail {

constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

constexpr std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

inline std::optional<int> digits(std::string_view s, std::size_t pos, std::size_t n) {
    if (pos + n > s.size()) return std::nullopt;
    int v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
        if (s[i] < '0' || s[i] > '9') return std::nullopt;
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

}  // namespace detail

/// Days since 1970-01-01 for a proleptic Gregorian date, or nullopt when
/// the date does not exist.
inline std::optional<std::int64_t> days_from_civil(int y, int m, int d) {
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return sys_days{ymd}.time_since_epoch().count();
}

/// Parses `YYYY-MM-DD`.
inline std::optional<std::int64_t> parse_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    auto y = detail::digits(s, 0, 4), m = detail::digits(s, 5, 2), d = detail::digits(s, 8, 2);
    if (!y || !m || !d) return std::nullopt;
    return days_from_civil(*y, *m, *d);
}

inline std::optional<EpochSeconds> parse_iso8601(std::string_view s) {
    if (s.size() < 20 || s[10] != 'T' || s[13] != ':' || s[16] != ':') return std::nullopt;
    auto days = parse_date(s.substr(0, 10));
    auto hh = detail::digits(s, 11, 2), mm = detail::digits(s, 14, 2), ss = detail::digits(s, 17, 2);
    if (!days || !hh || !mm || !ss || *hh > 23 || *mm > 59 || *ss > 59) return std::nullopt;

    const std::string_view zone = s.substr(19);
    int offset_minutes = 0;
    if (zone == "Z") {
        offset_minutes = 0;
    } else if (zone.size() == 6 && (zone[0] == '+' || zone[0] == '-') && zone[3] == ':') {
        auto oh = detail::digits(zone, 1, 2), om = detail::digits(zone, 4, 2);
        if (!oh || !om || *oh > 23 || *om > 59) return std::nullopt;
        offset_minutes = (*oh * 60 + *om) * (zone[0] == '-' ? -1 : 1);
    } else {
        return std::nullopt;
    }
    return *days * kSecondsPerDay + *hh * 3600 + *mm * 60 + *ss - offset_minutes * 60;
}

/// Formats as local civil time at `offset_minutes` east of UTC; offset 0
/// is written as `Z`.
inline std::string format_iso8601(EpochSeconds t, int offset_minutes = 0) {
    using namespace std::chrono;
    const EpochSeconds local = t + static_cast<EpochSeconds>(offset_minutes) * 60;
    const std::int64_t days = detail::floor_div(local, kSecondsPerDay);
    const std::int64_t secs = local - days * kSecondsPerDay;
    const year_month_day ymd{sys_days{std::chrono::days{days}}};

    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(secs / 3600), static_cast<int>(secs / 60 % 60), static_cast<int>(secs % 60));
    std::string out = buf;
    if (offset_minutes == 0) return out + "Z";
    const int a = offset_minutes < 0 ? -offset_minutes : offset_minutes;
    std::snprintf(buf, sizeof buf, "%c%02d:%02d", offset_minutes < 0 ? '-' : '+', a / 60, a % 60);
    return out + buf;
}

/// Hour of day (0-23) in civil time at `offset_minutes` east of UTC.
inline int local_hour(EpochSeconds t, int offset_minutes) {
    const EpochSeconds local = t + static_cast<EpochSeconds>(offset_minutes) * 60;
    return static_cast<int>(detail::floor_mod(local, kSecondsPerDay) / kSecondsPerHour);
}

/// Start of the UTC hour containing `t`.
inline EpochSeconds truncate_to_hour(EpochSeconds t) {
    return detail::floor_div(t, kSecondsPerHour) * kSecondsPerHour;
}

}  // namespace minegrid
