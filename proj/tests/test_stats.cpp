#include "parity/error.hpp"
#include "parity/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace parity;
using namespace std::chrono;

TEST_CASE("summarize with an upper outlier") {
    // type-7 quartiles of {1,2,3,4,100}: positions 1, 2, 3 -> 2, 3, 4.
    const auto s = summarize({1, 2, 3, 4, 100});
    CHECK(s.q1 == 2);
    CHECK(s.median == 3);
    CHECK(s.q3 == 4);
    CHECK(s.iqr() == 2);
    CHECK(s.upper_fence() == 7);
    CHECK(s.lower_fence() == -1);
    CHECK(s.lower_whisker == 1);
    CHECK(s.upper_whisker == 4);
    REQUIRE(s.outliers.size() == 1);
    CHECK(s.outliers[0] == 100);
    CHECK(s.count == 5);
}

TEST_CASE("summarize degenerate groups") {
    const auto one = summarize({5});
    CHECK(one.q1 == 5);
    CHECK(one.median == 5);
    CHECK(one.q3 == 5);
    CHECK(one.outliers.empty());

    const auto flat = summarize({0.03, 0.03, 0.03, 0.03});
    CHECK(flat.iqr() == 0);
    CHECK(flat.lower_whisker == 0.03);
    CHECK(flat.upper_whisker == 0.03);
    CHECK(flat.outliers.empty());

    CHECK_THROWS_AS(summarize({}), DataError);
}

TEST_CASE("type-7 interpolation between order statistics") {
    const std::vector<double> v = {1, 2, 3, 4};
    CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
    CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
    CHECK(quantile_sorted(v, 0.75) == doctest::Approx(3.25));
    CHECK(quantile_sorted(v, 1.0) == 4);
}

TEST_CASE("summary properties") {
    std::mt19937_64 rng(31);
    std::student_t_distribution<double> heavy(1.5);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 60;
        std::vector<double> v(n);
        for (auto& x : v) x = heavy(rng);
        const auto s = summarize(v);

        CHECK(s.q1 <= s.median);
        CHECK(s.median <= s.q3);
        // in-fence points plus outliers account for every value
        std::size_t inside = 0;
        for (double x : v) inside += (x >= s.lower_fence() && x <= s.upper_fence()) ? 1 : 0;
        CHECK(inside + s.outliers.size() == n);
        for (double o : s.outliers) CHECK((o < s.lower_fence() || o > s.upper_fence()));
        CHECK(std::count(v.begin(), v.end(), s.lower_whisker) >= 1);
        CHECK(std::count(v.begin(), v.end(), s.upper_whisker) >= 1);

        auto shuffled = v;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto s2 = summarize(shuffled);
        CHECK(s2.q1 == s.q1);
        CHECK(s2.median == s.median);
        CHECK(s2.q3 == s.q3);
        CHECK(s2.outliers == s.outliers);

        if (n % 2 == 1) {
            auto extended = v;
            extended.push_back(s.median);
            CHECK(summarize(extended).median == s.median);
        }
    }
}

TEST_CASE("grouped summaries") {
    const Date date{year{2024}, October, day{9}};
    ImpliedYieldSurface surface{date, 100, {}, 1.0};
    for (double k : {90.0, 100.0, 110.0}) surface.points.push_back({0.1, k, k / 100, 1, 0.01 * k / 100, SignClass::positive});
    for (double k : {95.0, 105.0}) surface.points.push_back({0.5, k, k / 100, 1, 0.02, SignClass::positive});

    const auto by_t = summarize_by_maturity(surface);
    REQUIRE(by_t.size() == 2);
    CHECK(by_t[0].key == 0.1);
    CHECK(by_t[0].count == 3);
    CHECK(by_t[1].key == 0.5);
    CHECK(by_t[1].iqr() == 0.0);

    const auto by_m = summarize_by_moneyness(bin_by_moneyness(surface, 25));
    std::size_t total = 0;
    for (std::size_t i = 0; i < by_m.size(); ++i) {
        total += by_m[i].count;
        if (i > 0) CHECK(by_m[i].key > by_m[i - 1].key);
    }
    CHECK(total == 5);
    CHECK(by_m.size() == 5);
}
