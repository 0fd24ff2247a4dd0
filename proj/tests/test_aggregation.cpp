#include "parity/aggregation.hpp"
#include "parity/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace parity;
using namespace std::chrono;

namespace {

const Date kDate{year{2024}, October, day{9}};

ImpliedYieldPoint point(double ttm, double strike, double spot, double y) {
    ImpliedYieldPoint p;
    p.ttm_years = ttm;
    p.strike = strike;
    p.moneyness = strike / spot;
    p.implied_yield = y;
    p.discount_factor = std::exp(-y * ttm);
    p.sign_class = sign_of_yield(y);
    return p;
}

ImpliedYieldSurface surface(double spot, std::vector<ImpliedYieldPoint> pts) {
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.ttm_years != b.ttm_years ? a.ttm_years < b.ttm_years : a.strike < b.strike;
    });
    return ImpliedYieldSurface{kDate, spot, std::move(pts), 1.0};
}

InterpolatedCurve flat_curve(double r) {
    return fit_pchip(ParYieldCurve{kDate, {1.0 / 12, 1, 30}, {r, r, r}, true});
}

}  // namespace

TEST_CASE("median examples") {
    CHECK(median({0.03, 0.05, -0.40}) == 0.03);
    CHECK(median({0.02, 0.04}) == doctest::Approx(0.03).epsilon(1e-15));
    CHECK(median({0.07}) == 0.07);
    CHECK_THROWS_AS(median({}), DataError);
}

TEST_CASE("median_curve reduces each maturity") {
    const auto s = surface(100, {point(0.1, 90, 100, 0.03), point(0.1, 100, 100, 0.05), point(0.1, 110, 100, -0.40),
                                 point(0.5, 95, 100, 0.02), point(0.5, 105, 100, 0.04), point(1.0, 100, 100, 0.045)});
    const auto c = median_curve(s);
    REQUIRE(c.points.size() == 3);
    CHECK(c.method == AggregationMethod::median);
    CHECK(c.points[0].value == 0.03);
    CHECK(c.points[0].support == 3);
    CHECK(c.points[1].value == doctest::Approx(0.03));
    CHECK(c.points[1].support == 2);
    CHECK(c.points[2].value == 0.045);
    CHECK(c.points[2].support == 1);
}

TEST_CASE("median follows the order-statistic definition") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> z(0.0, 0.02);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + 2 * (trial % 10);  // odd support
        std::vector<ImpliedYieldPoint> pts;
        std::vector<double> ys;
        for (std::size_t i = 0; i < n; ++i) {
            ys.push_back(z(rng));
            pts.push_back(point(0.25, 1000.0 + static_cast<double>(i), 1000, ys.back()));
        }
        std::vector<double> sorted = ys;
        std::sort(sorted.begin(), sorted.end());
        CHECK(median_curve(surface(1000, pts)).points[0].value == sorted[n / 2]);

        std::shuffle(pts.begin(), pts.end(), rng);
        for (std::size_t i = 0; i < pts.size(); ++i) pts[i].strike = 1000.0 + static_cast<double>(i);
        CHECK(median_curve(surface(1000, pts)).points[0].value == sorted[n / 2]);

        // One extra point beyond the maximum: median becomes the mean of the two
        // central order statistics of the n + 1 values.
        pts.push_back(point(0.25, 5000, 1000, sorted.back() + 1.0));
        sorted.push_back(sorted.back() + 1.0);
        CHECK(median_curve(surface(1000, pts)).points[0].value ==
              doctest::Approx(0.5 * (sorted[n / 2] + sorted[n / 2 + 1])).epsilon(1e-15));
    }
}

TEST_CASE("atm_curve examples") {
    SUBCASE("symmetric tie goes to the lower strike") {
        const auto s = surface(5800, {point(0.1, 5700, 5800, 0.01), point(0.1, 5795, 5800, 0.02),
                                      point(0.1, 5805, 5800, 0.03), point(0.1, 5900, 5800, 0.04)});
        const auto r = atm_curve(s, 0.02);
        REQUIRE(r.curve.points.size() == 1);
        CHECK(r.curve.points[0].value == 0.02);
        CHECK(r.curve.points[0].support == 1);
        CHECK(r.omitted == 0);
    }
    SUBCASE("exact at-the-money strike") {
        const auto r = atm_curve(surface(5800, {point(0.1, 5800, 5800, 0.042)}));
        CHECK(r.curve.points[0].value == 0.042);
    }
    SUBCASE("maturity without a strike inside tolerance is omitted") {
        const auto s = surface(100, {point(0.1, 108, 100, 0.01), point(0.2, 100, 100, 0.02)});
        const auto r = atm_curve(s, 0.05);
        REQUIRE(r.curve.points.size() == 1);
        CHECK(r.curve.points[0].ttm_years == 0.2);
        CHECK(r.omitted == 1);
    }
    SUBCASE("all omitted is an error") {
        CHECK_THROWS_WITH_AS(atm_curve(surface(100, {point(0.1, 108, 100, 0.01)}), 0.05),
                             "no ATM contracts within tolerance", DataError);
    }
}

TEST_CASE("ATM selection is invariant to rescaling strikes and spot") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const double spot = 1000 + 5000 * u(rng);
        std::vector<ImpliedYieldPoint> pts;
        for (int i = 0; i < 15; ++i) {
            const double k = std::round(spot * (0.95 + 0.1 * u(rng)));
            pts.push_back(point(0.3, k, spot, 0.001 * i));
        }
        // a mirrored strike to exercise the tie rule
        pts.push_back(point(0.3, 2 * spot - pts[0].strike, spot, 0.5));
        const auto base = atm_curve(surface(spot, pts), 0.1);
        const double lambda = std::exp(6 * u(rng) - 3);
        for (auto& p : pts) p.strike *= lambda;
        const auto scaled = atm_curve(surface(spot * lambda, pts), 0.1);
        CHECK(scaled.curve.points.at(0).value == base.curve.points.at(0).value);
    }
}

TEST_CASE("bin_by_moneyness examples") {
    const auto s = surface(100, {point(0.1, 90, 100, 0.01), point(0.1, 95, 100, 0.02), point(0.1, 100, 100, 0.03),
                                 point(0.1, 105, 100, 0.04), point(0.1, 110, 100, 0.05)});
    SUBCASE("two bins, last one closed") {
        const auto b = bin_by_moneyness(s, 2);
        REQUIRE(b.bins.size() == 2);
        CHECK(b.edges[0] == 0.9);
        CHECK(b.edges[1] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(b.edges[2] == 1.1);
        CHECK(b.bins[0].yields.size() == 2);
        CHECK(b.bins[1].yields.size() == 3);
        CHECK(b.bins[0].representative == doctest::Approx(0.925));
        CHECK(b.bins[1].representative == doctest::Approx(1.05));
    }
    SUBCASE("one bin holds everything") {
        const auto b = bin_by_moneyness(s, 1);
        REQUIRE(b.bins.size() == 1);
        CHECK(b.bins[0].yields.size() == 5);
        CHECK(b.bins[0].representative == 1.0);
    }
    SUBCASE("identical moneyness lands in one occupied bin") {
        const auto same = surface(100, {point(0.1, 100, 100, 0.01), point(0.2, 100, 100, 0.02)});
        const auto b = bin_by_moneyness(same, 5);
        std::size_t occupied = 0;
        for (const auto& bin : b.bins) occupied += bin.empty() ? 0 : 1;
        CHECK(occupied == 1);
        CHECK(b.bins[b.bin_index(1.0)].representative == 1.0);
    }
}

TEST_CASE("every point belongs to exactly one bin") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<ImpliedYieldPoint> pts;
        const int n = 1 + static_cast<int>(200 * u(rng));
        for (int i = 0; i < n; ++i) pts.push_back(point(0.1 * (1 + i % 7), 4000 + 3000 * u(rng), 5800, u(rng)));
        const auto s = surface(5800, pts);
        const auto bins = bin_by_moneyness(s, 1 + static_cast<std::size_t>(40 * u(rng)));
        std::size_t total = 0;
        for (const auto& bin : bins.bins) {
            total += bin.yields.size();
            if (!bin.empty()) {
                CHECK(bin.representative >= bin.lower);
                CHECK(bin.representative <= bin.upper);
            }
        }
        CHECK(total == s.points.size());
        for (const auto& p : s.points) {
            const auto& bin = bins.bins[bins.bin_index(p.moneyness)];
            CHECK(p.moneyness >= bin.lower);
            CHECK(p.moneyness <= bin.upper);
        }
    }
}

TEST_CASE("dislocation examples") {
    AggregatedCurve agg{kDate, AggregationMethod::median, {{0.5, 0.03, 4}}};
    const auto d = dislocation(agg, flat_curve(0.045));
    REQUIRE(d.points.size() == 1);
    CHECK(d.points[0].delta == doctest::Approx(-0.015).epsilon(1e-14));

    AggregatedCurve same{kDate, AggregationMethod::atm, {{0.05, 0.045, 1}, {2.0, 0.045, 1}, {40.0, 0.045, 1}}};
    for (const auto& p : dislocation(same, flat_curve(0.045)).points) CHECK(p.delta == 0.0);
}

TEST_CASE("dislocation plus market rate reconstructs the aggregated yield") {
    const auto curve = fit_pchip(ParYieldCurve{kDate, {1.0 / 12, 0.5, 1, 2, 5, 10, 30},
                                               {0.0461, 0.0443, 0.0418, 0.0403, 0.0395, 0.0406, 0.0435}, true});
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> ttm(0.001, 6.0), y(-0.3, 0.1);
    AggregatedCurve agg{kDate, AggregationMethod::median, {}};
    for (int i = 0; i < 500; ++i) agg.points.push_back({ttm(rng), y(rng), 1});
    const auto d = dislocation(agg, curve);
    for (std::size_t i = 0; i < agg.points.size(); ++i) {
        CHECK(std::abs(d.points[i].delta + market_rate(curve, agg.points[i].ttm_years) - agg.points[i].value) <=
              1e-14);
    }
}
