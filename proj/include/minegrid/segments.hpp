#pragma once

// Miner scale segments: power envelopes, ASIC order discounts and the
// one-time (sunk) cost of standing up a deployment.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "minegrid/errors.hpp"

namespace minegrid {

enum class SegmentKind { Hobbyist, SemiProfessional, Professional };

inline std::string_view to_string(SegmentKind k) {
    switch (k) {
        case SegmentKind::Hobbyist: return "hobbyist";
        case SegmentKind::SemiProfessional: return "semi-professional";
        case SegmentKind::Professional: return "professional";
    }
    return "unknown";
}

inline SegmentKind parse_segment_kind(std::string_view s) {
    if (s == "hobbyist") return SegmentKind::Hobbyist;
    if (s == "semi-professional" || s == "semi_professional" || s == "semipro") return SegmentKind::SemiProfessional;
    if (s == "professional" || s == "pro") return SegmentKind::Professional;
    throw DomainError("unknown segment '" + std::string(s) + "'");
}

/// Descriptive power envelope of a segment in kW. The classification
/// thresholds below close the gaps between these envelopes.
struct SegmentSpec {
    SegmentKind kind;
    double min_power_kw;
    double max_power_kw;  // +inf for Professional
};

inline SegmentSpec segment_spec(SegmentKind k) {
    switch (k) {
        case SegmentKind::Hobbyist: return {k, 0.0, 10.0};
        case SegmentKind::SemiProfessional: return {k, 50.0, 250.0};
        case SegmentKind::Professional: return {k, 1000.0, std::numeric_limits<double>::infinity()};
    }
    throw DomainError("unknown segment");
}

inline constexpr double kHobbyistCeilingKw = 10.0;
inline constexpr double kSemiProfessionalCeilingKw = 250.0;

inline SegmentKind classify(double total_power_kw) {
    if (!(total_power_kw > 0.0) || std::isnan(total_power_kw)) throw DomainError("total power must be positive");
    if (total_power_kw <= kHobbyistCeilingKw) return SegmentKind::Hobbyist;
    if (total_power_kw <= kSemiProfessionalCeilingKw) return SegmentKind::SemiProfessional;
    return SegmentKind::Professional;
}

/// Nameplate power of a deployment, rounded to 0.1 kW (the resolution the
/// envelopes are quoted at). 7 x 1.43 kW rates as 10.0 kW.
inline double rated_power_kw(std::int64_t unit_count, double unit_power_kw) {
    return std::round(static_cast<double>(unit_count) * unit_power_kw * 10.0) / 10.0;
}

struct CostAssumptions {
    double base_unit_price = 1000.0;
    double semi_pro_discount = 0.005;
    double pro_discount = 0.015;
    std::int64_t semi_pro_discount_threshold = 30;   // units
    std::int64_t pro_discount_threshold = 300;       // units
    double smart_meter_price = 2000.0;
    double racks_networking_fixed = 5000.0;
    double racks_networking_per_unit = 300.0;
    double infra_per_mw_min = 50000.0;
    double infra_per_mw_max = 250000.0;
    double infra_per_mw = 150000.0;                  // selected point in [min, max]
    double step_down_per_mw = 200000.0;
    double unit_power_kw = 1.43;                     // used for envelope checks

    void validate() const {
        auto frac = [](double d) { return d >= 0.0 && d < 1.0; };
        if (!frac(semi_pro_discount) || !frac(pro_discount)) throw DomainError("discounts must lie in [0, 1)");
        if (semi_pro_discount_threshold < 1 || pro_discount_threshold < semi_pro_discount_threshold)
            throw DomainError("discount thresholds must satisfy 1 <= semi-pro <= pro");
        for (double v : {base_unit_price, smart_meter_price, racks_networking_fixed, racks_networking_per_unit,
                         infra_per_mw_min, infra_per_mw_max, infra_per_mw, step_down_per_mw}) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("cost assumptions must be non-negative");
        }
        if (infra_per_mw_min > infra_per_mw_max || infra_per_mw < infra_per_mw_min || infra_per_mw > infra_per_mw_max)
            throw DomainError("infra_per_mw must lie within [infra_per_mw_min, infra_per_mw_max]");
        if (!(unit_power_kw > 0.0)) throw DomainError("unit power must be positive");
    }
};

/// Per-unit ASIC price for an order of `order_size` units. Discounts are
/// flat tiers, not compounding per unit.
inline double unit_price(std::int64_t order_size, const CostAssumptions& a) {
    if (order_size < 1) throw DomainError("order size must be at least 1");
    if (order_size >= a.pro_discount_threshold) return a.base_unit_price * (1.0 - a.pro_discount);
    if (order_size >= a.semi_pro_discount_threshold) return a.base_unit_price * (1.0 - a.semi_pro_discount);
    return a.base_unit_price;
}

struct CapexBreakdown {
    double asic_units = 0.0;
    double smart_meter = 0.0;
    double racks_networking = 0.0;
    double infrastructure = 0.0;
    double step_down = 0.0;
    double total = 0.0;
};

/// Sunk cost of a deployment, excluding the facility itself.
///
/// Hobbyists pay for units and a smart meter; Semi-Professionals for units
/// plus racks and networking; Professionals for units, per-MW
/// infrastructure and, for a new facility, per-MW high-voltage step-down.
/// `mw_capacity` defaults to the rated power of the units. Throws
/// ConstraintError when the units' rated power falls outside `kind`.
inline CapexBreakdown capex(SegmentKind kind, std::int64_t unit_count, const CostAssumptions& a,
                            std::optional<double> mw_capacity = std::nullopt, bool new_facility = false) {
    a.validate();
    if (unit_count < 1) throw ConstraintError("unit count must be at least 1");
    const double rated = rated_power_kw(unit_count, a.unit_power_kw);
    if (classify(rated) != kind) {
        throw ConstraintError(std::to_string(unit_count) + " units at " + std::to_string(a.unit_power_kw) +
                              " kW rate " + std::to_string(rated) + " kW, outside the " +
                              std::string(to_string(kind)) + " envelope");
    }
    const double mw = mw_capacity.value_or(rated / 1000.0);
    if (!(mw >= 0.0) || !std::isfinite(mw)) throw DomainError("MW capacity must be non-negative");

    CapexBreakdown b;
    b.asic_units = static_cast<double>(unit_count) * unit_price(unit_count, a);
    switch (kind) {
        case SegmentKind::Hobbyist:
            b.smart_meter = a.smart_meter_price;
            break;
        case SegmentKind::SemiProfessional:
            b.racks_networking = a.racks_networking_fixed + static_cast<double>(unit_count) * a.racks_networking_per_unit;
            break;
        case SegmentKind::Professional:
            b.infrastructure = a.infra_per_mw * mw;
            b.step_down = new_facility ? a.step_down_per_mw * mw : 0.0;
            break;
    }
    b.total = b.asic_units + b.smart_meter + b.racks_networking + b.infrastructure + b.step_down;
    return b;
}

/// Share of sunk cost not spent on ASIC units.
inline double non_asic_fraction(const CapexBreakdown& b) {
    if (!(b.total > 0.0)) throw DomainError("capex total must be positive");
    return (b.total - b.asic_units) / b.total;
}

}  // namespace minegrid
