#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "minegrid/civil_time.hpp"
#include "minegrid/tariff.hpp"
#include "support/oracles.hpp"

using namespace minegrid;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// 2015-08-01T00:00:00Z
constexpr EpochSeconds kAug1 = 1438387200;

Tariff three_band() {
    return Tariff::time_of_use({{0, 8, 0.05}, {8, 22, 0.25}, {22, 24, 0.05}});
}

}  // namespace

TEST_CASE("price_at for each tariff kind", "[tariff]") {
    const auto fixed = Tariff::fixed(0.12);
    CHECK(fixed.price_at(0) == 0.12);
    CHECK(fixed.price_at(kAug1 + 12345) == 0.12);

    const auto tou = three_band();
    CHECK(tou.price_at(kAug1 + 9 * 3600) == 0.25);
    CHECK(tou.price_at(kAug1 + 23 * 3600) == 0.05);
    CHECK(tou.price_at(kAug1 + 7 * 3600 + 3599) == 0.05);
    CHECK(tou.price_at(kAug1 + 8 * 3600) == 0.25);

    // 09:00 in New York (UTC-4) is 13:00Z.
    const auto ny = Tariff::time_of_use({{0, 8, 0.05}, {8, 22, 0.25}, {22, 24, 0.05}}, -240);
    CHECK(ny.price_at(kAug1 + 13 * 3600) == 0.25);
    CHECK(ny.price_at(kAug1 + 3 * 3600) == 0.05);  // 23:00 local, Jul 31
    CHECK(ny.price_at(kAug1 + 1 * 3600) == 0.25);  // 21:00 local, Jul 31
}

TEST_CASE("wrapping TOU band", "[tariff]") {
    const auto tou = Tariff::time_of_use({{22, 6, 0.04}, {6, 22, 0.20}});
    CHECK(tou.price_at(kAug1 + 23 * 3600) == 0.04);
    CHECK(tou.price_at(kAug1 + 2 * 3600) == 0.04);
    CHECK(tou.price_at(kAug1 + 6 * 3600) == 0.20);
}

TEST_CASE("TOU bands must partition the day", "[tariff]") {
    CHECK_THROWS_AS(Tariff::time_of_use({{0, 8, 0.05}, {9, 24, 0.25}}), DomainError);
    CHECK_THROWS_AS(Tariff::time_of_use({{0, 9, 0.05}, {8, 24, 0.25}}), DomainError);
    CHECK_THROWS_AS(Tariff::time_of_use({{0, 24, -0.05}}), DomainError);
    CHECK_THROWS_AS(Tariff::time_of_use({{0, 25, 0.05}}), DomainError);
    CHECK_NOTHROW(Tariff::time_of_use({{0, 24, 0.05}}));
    CHECK_NOTHROW(Tariff::time_of_use({{5, 5, 0.05}}));  // one band all day, starting at 05:00
}

TEST_CASE("a full day visits every TOU band and their hours sum to 24", "[tariff]") {
    const auto tou = Tariff::time_of_use({{0, 7, 0.1}, {7, 10, 0.2}, {10, 19, 0.3}, {19, 23, 0.4}, {23, 0, 0.15}}, -300);
    std::set<double> seen;
    for (int h = 0; h < 24; ++h) seen.insert(tou.price_at(kAug1 + h * 3600));
    CHECK(seen.size() == tou.bands().size());
    int total = 0;
    for (const auto& b : tou.bands()) total += b.length_hours();
    CHECK(total == 24);
}

TEST_CASE("hourly series lookup", "[tariff]") {
    const auto t = Tariff::hourly({{kAug1, 0.031}, {kAug1 + 3600, 0.029}});
    CHECK(t.price_at(kAug1 + 1800) == 0.031);
    CHECK(t.price_at(kAug1 + 3600) == 0.029);
    CHECK_THROWS_WITH(t.price_at(kAug1 + 7200), Catch::Matchers::ContainsSubstring("2015-08-01T02:00:00Z"));
    CHECK_THROWS_AS(Tariff::hourly({{kAug1, -0.01}}), DomainError);
    CHECK_THROWS_AS(t.fixed_price(), DomainError);
}

TEST_CASE("average effective price", "[tariff]") {
    const auto halves = Tariff::time_of_use({{0, 12, 0.05}, {12, 24, 0.15}});

    std::vector<bool> morning(24, false);
    std::fill(morning.begin(), morning.begin() + 12, true);
    CHECK_THAT(average_effective_price(halves, Schedule(kAug1, morning), 1.43), WithinRel(0.05, 1e-12));

    const Schedule always(kAug1, std::vector<bool>(24, true));
    CHECK_THAT(average_effective_price(halves, always, 1.43), WithinRel((12 * 0.05 + 12 * 0.15) / 24.0, 1e-9));

    CHECK(average_effective_price(Tariff::fixed(0.10), Schedule(kAug1, morning), 7.0) == 0.10);

    // Nothing billed: report the plain mean.
    const Schedule never(kAug1, std::vector<bool>(24, false));
    CHECK_THAT(average_effective_price(halves, never, 1.43), WithinRel(0.10, 1e-12));
}

TEST_CASE("always-on effective price is the duration-weighted band mean", "[tariff]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> price(0.0, 0.5);
    std::uniform_int_distribution<int> cut(1, 23);
    for (int trial = 0; trial < 200; ++trial) {
        std::set<int> cuts{0};
        const int n = std::uniform_int_distribution<int>(0, 5)(rng);
        for (int i = 0; i < n; ++i) cuts.insert(cut(rng));
        std::vector<int> c(cuts.begin(), cuts.end());
        c.push_back(24);
        std::vector<TouBand> bands;
        double weighted = 0.0;
        for (std::size_t i = 0; i + 1 < c.size(); ++i) {
            bands.push_back({c[i], c[i + 1], price(rng)});
            weighted += (c[i + 1] - c[i]) * bands.back().usd_per_kwh;
        }
        const auto tou = Tariff::time_of_use(bands);
        const Schedule always(kAug1, std::vector<bool>(24 * 3, true));
        const double got = average_effective_price(tou, always, 2.5);
        CHECK_THAT(got, WithinRel(weighted / 24.0, 1e-9) || WithinAbs(0.0, 1e-15));
    }
}

TEST_CASE("day-ahead clearing examples", "[tariff]") {
    const std::vector<SupplyBid> book{{100, 20, "a"}, {50, 30, "b"}, {80, 40, "c"}};
    const auto r = clear_day_ahead(book, 130);
    CHECK(r.clearing_price == 30);
    CHECK(r.dispatched[0].mw == 100);
    CHECK(r.dispatched[1].mw == 30);
    CHECK(r.dispatched[2].mw == 0);
    CHECK(r.total_dispatched == 130);
    CHECK(r.marginal_index == 1);

    const auto exact = clear_day_ahead({{100, 20, "solo"}}, 100);
    CHECK(exact.clearing_price == 20);
    CHECK(exact.dispatched[0].mw == 100);

    try {
        clear_day_ahead({{60, 20, "a"}, {40, 25, "b"}}, 150);
        FAIL("expected a shortage");
    } catch (const ShortageError& e) {
        CHECK(e.deficit_mw() == 50);
    }
    CHECK_THROWS_AS(clear_day_ahead(book, 0.0), DomainError);
    CHECK_THROWS_AS(clear_day_ahead({}, 10.0), DomainError);
}

TEST_CASE("equal prices break ties by bidder id", "[tariff]") {
    const auto r = clear_day_ahead({{50, 30, "zeta"}, {50, 30, "alpha"}, {10, 10, "base"}}, 40);
    CHECK(r.dispatched[1].mw == 30);  // alpha before zeta
    CHECK(r.dispatched[0].mw == 0);
    CHECK(r.clearing_price == 30);
}

TEST_CASE("clearing matches the sort-and-accumulate oracle on random books", "[tariff]") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> qty(1.0, 200.0);
    std::uniform_int_distribution<int> price_tick(0, 40);
    std::uniform_int_distribution<int> size(1, 12);
    std::uniform_int_distribution<int> id(0, 5);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<SupplyBid> bids;
        std::vector<oracle::Bid> ref;
        double offered = 0.0;
        for (int i = 0, n = size(rng); i < n; ++i) {
            const SupplyBid b{qty(rng), 5.0 * price_tick(rng), "g" + std::to_string(id(rng))};
            bids.push_back(b);
            ref.push_back({b.quantity_mw, b.price_usd_per_mwh, b.bidder_id});
            offered += b.quantity_mw;
        }
        const double demand = std::uniform_real_distribution<double>(0.01, offered)(rng);
        const auto got = clear_day_ahead(bids, demand);
        const auto want = oracle::clear(ref, demand);
        CHECK(got.clearing_price == want.price);
        double sum = 0.0;
        for (std::size_t i = 0; i < bids.size(); ++i) {
            CHECK_THAT(got.dispatched[i].mw, WithinAbs(want.dispatched[i], 1e-9));
            if (got.dispatched[i].mw > 0.0) CHECK(bids[i].price_usd_per_mwh <= got.clearing_price);
            sum += got.dispatched[i].mw;
        }
        CHECK_THAT(sum, WithinAbs(demand, 1e-9));

        auto shuffled = bids;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(clear_day_ahead(shuffled, demand).clearing_price == got.clearing_price);
    }
}
