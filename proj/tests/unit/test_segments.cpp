#include <catch_amalgamated.hpp>

#include "minegrid/segments.hpp"

using namespace minegrid;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("classify by total power", "[segments]") {
    CHECK(classify(7.0) == SegmentKind::Hobbyist);
    CHECK(classify(10.0) == SegmentKind::Hobbyist);
    CHECK(classify(10.01) == SegmentKind::SemiProfessional);
    CHECK(classify(200.0) == SegmentKind::SemiProfessional);
    CHECK(classify(250.0) == SegmentKind::SemiProfessional);
    CHECK(classify(1200.0) == SegmentKind::Professional);
    CHECK_THROWS_AS(classify(0.0), DomainError);
    CHECK_THROWS_AS(classify(-3.0), DomainError);

    int prev = 0;
    for (double kw = 0.5; kw < 5000.0; kw *= 1.07) {
        const int rank = static_cast<int>(classify(kw));
        CHECK(rank >= prev);
        prev = rank;
    }
}

TEST_CASE("segment envelopes", "[segments]") {
    CHECK(segment_spec(SegmentKind::Hobbyist).max_power_kw == 10.0);
    CHECK(segment_spec(SegmentKind::SemiProfessional).min_power_kw == 50.0);
    CHECK(segment_spec(SegmentKind::SemiProfessional).max_power_kw == 250.0);
    CHECK(segment_spec(SegmentKind::Professional).min_power_kw == 1000.0);
    CHECK(std::isinf(segment_spec(SegmentKind::Professional).max_power_kw));
}

TEST_CASE("unit price tiers", "[segments]") {
    const CostAssumptions a;
    CHECK(unit_price(7, a) == 1000.0);
    CHECK(unit_price(29, a) == 1000.0);
    CHECK(unit_price(30, a) == 995.0);
    CHECK(unit_price(150, a) == 995.0);
    CHECK(unit_price(299, a) == 995.0);
    CHECK(unit_price(300, a) == 985.0);
    CHECK(unit_price(500, a) == 985.0);
    CHECK_THROWS_AS(unit_price(0, a), DomainError);

    double prev_price = unit_price(1, a), prev_total = prev_price;
    for (std::int64_t n = 2; n <= 1000; ++n) {
        const double p = unit_price(n, a);
        CHECK(p <= prev_price);
        // Flat tiers make 300 units cheaper in total than 299.
        if (n != a.pro_discount_threshold) CHECK(static_cast<double>(n) * p > prev_total);
        prev_price = p;
        prev_total = static_cast<double>(n) * p;
    }
    CHECK(300 * unit_price(300, a) < 299 * unit_price(299, a));
}

TEST_CASE("hobbyist capex spans 3 to 9 thousand USD", "[segments]") {
    const CostAssumptions a;
    CHECK(capex(SegmentKind::Hobbyist, 1, a).total == 3000.0);
    CHECK(capex(SegmentKind::Hobbyist, 7, a).total == 9000.0);
    for (int n = 1; n <= 7; ++n) {
        const auto b = capex(SegmentKind::Hobbyist, n, a);
        CHECK(b.total >= 3000.0);
        CHECK(b.total <= 9000.0);
        CHECK(b.smart_meter == 2000.0);
        CHECK(b.racks_networking == 0.0);
    }
    CHECK_THROWS_AS(capex(SegmentKind::Hobbyist, 8, a), ConstraintError);
    CHECK_THROWS_AS(capex(SegmentKind::Hobbyist, 0, a), ConstraintError);
}

TEST_CASE("semi-professional capex range", "[segments]") {
    const CostAssumptions a;
    const auto low = capex(SegmentKind::SemiProfessional, 30, a);
    const auto high = capex(SegmentKind::SemiProfessional, 150, a);
    CHECK(low.total == 30 * 995.0 + 5000.0 + 30 * 300.0);
    CHECK(high.total == 150 * 995.0 + 5000.0 + 150 * 300.0);
    CHECK(low.total >= 40000.0);
    CHECK(high.total <= 200000.0);
    CHECK_THROWS_AS(capex(SegmentKind::SemiProfessional, 200, a), ConstraintError);
    CHECK_THROWS_AS(capex(SegmentKind::SemiProfessional, 5, a), ConstraintError);
}

TEST_CASE("professional capex", "[segments]") {
    const CostAssumptions a;
    const auto b = capex(SegmentKind::Professional, 500, a, 1.0, true);
    CHECK(b.asic_units == 500 * 985.0);
    CHECK(b.infrastructure == 150000.0);
    CHECK(b.step_down == 200000.0);
    CHECK(b.total == 842500.0);
    CHECK_THAT(non_asic_fraction(b), WithinRel(350000.0 / 842500.0, 1e-12));

    const auto existing = capex(SegmentKind::Professional, 500, a, 1.0, false);
    CHECK(existing.step_down == 0.0);
    CHECK(existing.total == 500 * 985.0 + 150000.0);

    // Capacity defaults to the rated power: 500 x 1.43 kW = 0.715 MW.
    CHECK_THAT(capex(SegmentKind::Professional, 500, a).infrastructure, WithinRel(0.715 * 150000.0, 1e-12));

    CostAssumptions out_of_range;
    out_of_range.infra_per_mw = 300000.0;
    CHECK_THROWS_AS(capex(SegmentKind::Professional, 500, out_of_range, 1.0), DomainError);
}

TEST_CASE("capex total is the sum of its parts", "[segments]") {
    const CostAssumptions a;
    for (auto [kind, lo, hi] : {std::tuple{SegmentKind::Hobbyist, 1, 7}, std::tuple{SegmentKind::SemiProfessional, 8, 174},
                                std::tuple{SegmentKind::Professional, 175, 2000}}) {
        for (int n = lo; n <= hi; n += 1 + (hi - lo) / 40) {
            const auto b = capex(kind, n, a, std::nullopt, n % 2 == 0);
            CHECK(b.total == b.asic_units + b.smart_meter + b.racks_networking + b.infrastructure + b.step_down);
            CHECK(b.asic_units >= 0.0);
        }
    }
}

TEST_CASE("non-ASIC fraction", "[segments]") {
    const CostAssumptions a;
    CHECK_THAT(non_asic_fraction(capex(SegmentKind::Hobbyist, 7, a)), WithinAbs(0.2222222222, 1e-9));
    CapexBreakdown only_units{5000.0, 0, 0, 0, 0, 5000.0};
    CHECK(non_asic_fraction(only_units) == 0.0);
    CHECK_THROWS_AS(non_asic_fraction(CapexBreakdown{}), DomainError);
}

TEST_CASE("segment names round-trip", "[segments]") {
    for (auto k : {SegmentKind::Hobbyist, SegmentKind::SemiProfessional, SegmentKind::Professional})
        CHECK(parse_segment_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_segment_kind("whale"), DomainError);
}
