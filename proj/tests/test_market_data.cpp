#include "parity/error.hpp"
#include "parity/market_data.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

using namespace parity;
using namespace std::chrono;

namespace {

const char* kChain =
    "trade_date,expiry,kind,strike,bid,ask,last,volume,open_interest\n"
    "2024-10-09,2024-10-09,spot,,,,5792.04,,\n"
    "2024-10-09,2024-11-15,call,5700,150.1,152.3,151,12,340\n"
    "2024-10-09,2024-11-15,put,5700,48.2,49.0,48.5,30,900\n"
    "2024-10-09,2024-11-15,call,5800,88.0,89.4,88.7,5,120\n"
    "2024-10-09,2024-11-15,put,5800,86.1,87.3,86.0,7,80\n"
    "2024-10-09,2024-12-20,call,5800,130,131,130.2,1,10\n"
    "2024-10-09,2024-12-20,put,5800,118,119.5,118.4,2,20\n"
    "2024-10-09,2024-12-20,call,5900,80.5,81.5,81,0,0\n"
    "2024-10-09,2024-12-20,put,5900,168,170,169,0,3\n"
    "2024-10-09,2024-12-20,call,6000,40,41,40.4,9,9\n";

Date d(int y, unsigned m, unsigned day) { return Date{year{y}, month{m}, std::chrono::day{day}}; }

OptionQuote quote(OptionKind kind, double strike, Date expiry, double bid, double ask, double last = 0.0) {
    OptionQuote q;
    q.trade_date = d(2024, 10, 9);
    q.expiry = expiry;
    q.kind = kind;
    q.strike = strike;
    q.bid = bid;
    q.ask = ask;
    q.last = last;
    return q;
}

const SpotQuote kSpot{d(2024, 10, 9), 100.0};

ChainData read(const std::string& text, IngestConfig cfg = {}) {
    std::istringstream in(text);
    return read_option_chain(in, cfg);
}

}  // namespace

TEST_CASE("well-formed chain file parses into quotes and one spot") {
    const auto data = read(kChain);
    CHECK(data.quotes.size() == 9);
    REQUIRE(data.spots.size() == 1);
    CHECK(data.spots[0].spot == doctest::Approx(5792.04));
    CHECK(data.rejects.empty());
    CHECK(data.spot_for(d(2024, 10, 9)).spot == 5792.04);
    CHECK(data.quotes[0].volume == 12);
    CHECK(data.quotes[0].open_interest == 340);
}

TEST_CASE("crossed market is rejected with its row number") {
    std::string text = kChain;
    text += "2024-10-09,2024-12-20,put,6000,5,3,4,0,0\n";
    const auto data = read(text);
    CHECK(data.quotes.size() == 9);
    REQUIRE(data.rejects.size() == 1);
    CHECK(data.rejects[0].row == 12);
    CHECK(data.rejects[0].reason == "crossed market");

    std::ostringstream out;
    write_rejects(out, data.rejects);
    CHECK(out.str() == "row,reason\n12,crossed market\n");
}

TEST_CASE("strict ingestion throws on the first bad row") {
    std::string text = kChain;
    text += "2024-10-09,2024-12-20,put,6000,5,3,4,0,0\n";
    CHECK_THROWS_AS(read(text, IngestConfig{true}), ParseError);
}

TEST_CASE("malformed rows are collected, not fatal") {
    std::string text = kChain;
    text += "2024-10-09,2024-12-20,put,abc,5,6,4,0,0\n";
    text += "2024-10-09,2024-12-20,put\n";
    text += "2024-10-09,2024-09-20,put,6000,5,6,4,0,0\n";
    text += "2024-10-09,2024-12-20,put,-5,5,6,4,0,0\n";
    const auto data = read(text);
    REQUIRE(data.rejects.size() == 4);
    CHECK(data.rejects[0].reason.rfind("malformed", 0) == 0);
    CHECK(data.rejects[1].reason.rfind("malformed", 0) == 0);
    CHECK(data.rejects[2].reason == "expiry before trade date");
    CHECK(data.rejects[3].reason == "non-positive strike");
}

TEST_CASE("spot rows: duplicate or missing is a hard error") {
    std::string dup = kChain;
    dup += "2024-10-09,2024-10-09,spot,,,,5793,,\n";
    CHECK_THROWS_AS(read(dup), DataError);

    std::string missing =
        "trade_date,expiry,kind,strike,bid,ask,last,volume,open_interest\n"
        "2024-10-09,2024-11-15,call,5700,150.1,152.3,151,12,340\n";
    CHECK_THROWS_AS(read(missing), DataError);
}

TEST_CASE("header columns are matched by name") {
    const std::string text =
        "kind,trade_date,expiry,strike,bid,ask,last,volume,open_interest\n"
        "spot,2024-10-09,2024-10-09,,,,100,,\n"
        "call,2024-10-09,2024-11-15,100,1,2,1.5,,\n";
    const auto data = read(text);
    REQUIRE(data.quotes.size() == 1);
    CHECK(data.quotes[0].bid == 1.0);
    CHECK_THROWS_AS(read("trade_date,expiry,kind,strike\n"), ParseError);
}

TEST_CASE("pair_contracts examples") {
    const Date e1 = d(2024, 11, 15);
    SUBCASE("matching call and put form one pair") {
        const auto r = pair_contracts({quote(OptionKind::call, 100, e1, 4, 6), quote(OptionKind::put, 100, e1, 2, 4)},
                                      kSpot);
        REQUIRE(r.pairs.size() == 1);
        CHECK(r.dropped_total() == 0);
        CHECK(r.pairs[0].call_price == 5.0);
        CHECK(r.pairs[0].put_price == 3.0);
        CHECK(r.pairs[0].ttm_years == 37.0 / 365.0);
        CHECK(r.pairs[0].moneyness == 1.0);
    }
    SUBCASE("no common strike") {
        const auto r = pair_contracts({quote(OptionKind::call, 100, e1, 4, 6), quote(OptionKind::put, 105, e1, 2, 4)},
                                      kSpot);
        CHECK(r.pairs.empty());
        CHECK(r.dropped_unmatched == 2);
        CHECK(r.dropped_total() == 2);
    }
    SUBCASE("mid falls back to last when a side is missing") {
        const auto r = pair_contracts({quote(OptionKind::call, 100, e1, 0, 6, 5.5), quote(OptionKind::put, 100, e1, 2, 4, 9)},
                                      kSpot);
        REQUIRE(r.pairs.size() == 1);
        CHECK(r.pairs[0].call_price == 5.5);
        CHECK(r.pairs[0].put_price == 3.0);
    }
    SUBCASE("last rule ignores bid and ask") {
        const auto r = pair_contracts({quote(OptionKind::call, 100, e1, 4, 6, 5.2), quote(OptionKind::put, 100, e1, 2, 4, 2.9)},
                                      kSpot, PriceRule::last);
        REQUIRE(r.pairs.size() == 1);
        CHECK(r.pairs[0].call_price == 5.2);
        CHECK(r.pairs[0].put_price == 2.9);
    }
    SUBCASE("zero-priced leg is dropped and counted") {
        const auto r = pair_contracts({quote(OptionKind::call, 100, e1, 0, 0, 0), quote(OptionKind::put, 100, e1, 2, 4)},
                                      kSpot);
        CHECK(r.pairs.empty());
        CHECK(r.dropped_unpriced == 1);
        CHECK(r.dropped_unmatched == 1);
    }
    SUBCASE("duplicated leg is ambiguous") {
        const auto r = pair_contracts({quote(OptionKind::call, 100, e1, 4, 6), quote(OptionKind::call, 100, e1, 4, 7),
                                       quote(OptionKind::put, 100, e1, 2, 4)},
                                      kSpot);
        CHECK(r.pairs.empty());
        CHECK(r.dropped_duplicate == 2);
        CHECK(r.dropped_unmatched == 1);
    }
    SUBCASE("same-day expiry has no time to maturity") {
        const auto r = pair_contracts({quote(OptionKind::call, 100, kSpot.trade_date, 4, 6),
                                       quote(OptionKind::put, 100, kSpot.trade_date, 2, 4)},
                                      kSpot);
        CHECK(r.pairs.empty());
        CHECK(r.dropped_expired == 2);
    }
    SUBCASE("mismatched trade date is rejected") {
        auto q = quote(OptionKind::call, 100, e1, 4, 6);
        q.trade_date = d(2024, 10, 10);
        CHECK_THROWS_AS(pair_contracts({q}, kSpot), DataError);
    }
}

TEST_CASE("pairing is order independent and keys are unique") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> strike_idx(0, 12), expiry_idx(0, 5), kind(0, 1);
    std::uniform_real_distribution<double> px(0.0, 20.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<OptionQuote> quotes;
        for (int i = 0; i < 80; ++i) {
            const double bid = px(rng);
            quotes.push_back(quote(kind(rng) ? OptionKind::call : OptionKind::put, 80.0 + 5.0 * strike_idx(rng),
                                   add_days(kSpot.trade_date, 7 * expiry_idx(rng)), bid, bid + px(rng) * 0.1,
                                   px(rng)));
        }
        const auto base = pair_contracts(quotes, kSpot);
        std::set<std::pair<long, double>> keys;
        for (const auto& p : base.pairs) {
            CHECK(keys.insert({days_between(kSpot.trade_date, p.expiry), p.strike}).second);
            CHECK(p.ttm_years > 0.0);
            CHECK(p.call_price >= 0.0);
            CHECK(p.put_price >= 0.0);
        }
        std::shuffle(quotes.begin(), quotes.end(), rng);
        const auto shuffled = pair_contracts(quotes, kSpot);
        REQUIRE(shuffled.pairs.size() == base.pairs.size());
        CHECK(shuffled.dropped_total() == base.dropped_total());
        for (std::size_t i = 0; i < base.pairs.size(); ++i) {
            CHECK(shuffled.pairs[i].expiry == base.pairs[i].expiry);
            CHECK(shuffled.pairs[i].strike == base.pairs[i].strike);
            CHECK(shuffled.pairs[i].call_price == base.pairs[i].call_price);
            CHECK(shuffled.pairs[i].put_price == base.pairs[i].put_price);
        }
    }
}

TEST_CASE("chain write then read is lossless") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<OptionQuote> quotes;
    for (int i = 0; i < 200; ++i) {
        const double bid = u(rng) * 50.0;
        auto q = quote(i % 2 ? OptionKind::put : OptionKind::call, 1000.0 * u(rng) + 1.0 / 3.0,
                       add_days(kSpot.trade_date, 1 + i), bid, bid + u(rng), u(rng) / 7.0);
        q.volume = i;
        q.open_interest = 3 * i;
        quotes.push_back(q);
    }
    std::stringstream buf;
    write_option_chain(buf, quotes, {SpotQuote{kSpot.trade_date, 5792.0 + 1.0 / 3.0}});
    const auto back = read_option_chain(buf);
    REQUIRE(back.quotes.size() == quotes.size());
    CHECK(back.spots.at(0).spot == 5792.0 + 1.0 / 3.0);
    for (std::size_t i = 0; i < quotes.size(); ++i) {
        CHECK(back.quotes[i].strike == quotes[i].strike);
        CHECK(back.quotes[i].bid == quotes[i].bid);
        CHECK(back.quotes[i].ask == quotes[i].ask);
        CHECK(back.quotes[i].last == quotes[i].last);
        CHECK(back.quotes[i].kind == quotes[i].kind);
        CHECK(back.quotes[i].expiry == quotes[i].expiry);
        CHECK(back.quotes[i].volume == quotes[i].volume);
        CHECK(back.quotes[i].open_interest == quotes[i].open_interest);
    }
}

// ---------------------------------------------------------------------------
// Treasury

namespace {

const char* kTreasuryHeader = "Date,1 Mo,2 Mo,3 Mo,4 Mo,6 Mo,1 Yr,2 Yr,3 Yr,5 Yr,7 Yr,10 Yr,20 Yr,30 Yr\n";

ParYieldData read_treasury(const std::string& text) {
    std::istringstream in(text);
    return read_par_yields(in);
}

}  // namespace

TEST_CASE("treasury row converts percent to decimals") {
    const auto data = read_treasury(std::string(kTreasuryHeader) +
                                    "10/09/2024,4.61,4.65,4.65,4.58,4.43,4.18,4.03,3.96,3.95,4.00,4.06,4.37,4.35\n");
    REQUIRE(data.curves.size() == 1);
    const auto& c = data.curves[0];
    CHECK(c.curve_date == d(2024, 10, 9));
    REQUIRE(c.rates.size() == 13);
    CHECK(c.rates[0] == doctest::Approx(0.0461).epsilon(1e-15));
    CHECK(c.rates[12] == doctest::Approx(0.0435).epsilon(1e-15));
    CHECK(c.maturities == standard_tenors());
    CHECK(c.complete);
    CHECK(std::is_sorted(c.maturities.begin(), c.maturities.end()));
}

TEST_CASE("treasury header errors") {
    CHECK_THROWS_AS(read_treasury("Date,1 Mo,2 Yr,2 Yr\n"), ParseError);
    CHECK_THROWS_AS(read_treasury("Date,1 Yr,6 Mo\n"), ParseError);
    CHECK_THROWS_AS(read_treasury("When,1 Mo\n"), ParseError);
}

TEST_CASE("empty treasury file yields no curves and a warning") {
    const auto data = read_treasury("");
    CHECK(data.curves.empty());
    CHECK(data.warnings.size() == 1);
}

TEST_CASE("missing cells flag the curve incomplete; output is date-ascending") {
    const auto data = read_treasury(std::string(kTreasuryHeader) +
                                    "10/10/2024,4.62,4.66,,4.59,4.44,4.19,4.04,3.97,3.96,4.01,4.07,4.38,4.36\n"
                                    "10/09/2024,4.61,4.65,4.65,4.58,4.43,4.18,4.03,3.96,3.95,4.00,4.06,4.37,4.35\n");
    REQUIRE(data.curves.size() == 2);
    CHECK(data.curves[0].curve_date == d(2024, 10, 9));
    CHECK(data.curves[1].curve_date == d(2024, 10, 10));
    CHECK_FALSE(data.curves[1].complete);
    CHECK(data.curves[1].maturities.size() == 12);
}

TEST_CASE("tenor labels") {
    CHECK(parse_tenor_label("1 Mo") == 1.0 / 12.0);
    CHECK(parse_tenor_label("6 Mo") == 6.0 / 12.0);
    CHECK(parse_tenor_label("30 Yr") == 30.0);
    CHECK(parse_tenor_label("1.5 Month") == 1.5 / 12.0);
    CHECK_THROWS_AS(parse_tenor_label("Mo"), ParseError);
}

TEST_CASE("fill_missing_date averages the neighbors per tenor") {
    const auto data = read_treasury(std::string(kTreasuryHeader) +
                                    "10/15/2024,4.69,4.68,4.63,4.55,4.42,4.17,3.94,3.86,3.83,3.88,3.97,4.28,4.26\n"
                                    "10/11/2024,4.71,4.70,4.64,4.57,4.44,4.21,3.96,3.90,3.89,3.97,4.08,4.41,4.39\n"
                                    "10/10/2024,4.70,4.68,4.65,4.58,4.43,4.21,3.98,3.89,3.88,3.96,4.06,4.40,4.38\n");
    const auto filled = fill_missing_date(data.curves, d(2024, 10, 14));
    const auto& before = data.curves[1];
    const auto& after = data.curves[2];
    CHECK(filled.curve_date == d(2024, 10, 14));
    CHECK(filled.maturities == before.maturities);
    for (std::size_t i = 0; i < filled.rates.size(); ++i) {
        CHECK(filled.rates[i] == (before.rates[i] + after.rates[i]) / 2.0);
    }
    CHECK(filled.rates[0] == doctest::Approx(0.0470).epsilon(1e-14));
    CHECK(filled.complete);
    CHECK(std::adjacent_find(filled.maturities.begin(), filled.maturities.end(),
                             std::greater_equal<>()) == filled.maturities.end());
}

TEST_CASE("fill_missing_date edge cases") {
    ParYieldCurve a{d(2024, 10, 11), {1.0 / 12, 1.0}, {0.04, 0.03}, true};
    ParYieldCurve b{d(2024, 10, 15), {1.0 / 12, 1.0}, {0.05, 0.03}, true};
    const auto mid = fill_missing_date({a, b}, d(2024, 10, 14));
    CHECK(mid.rates[0] == doctest::Approx(0.045).epsilon(1e-15));
    CHECK(mid.rates[1] == 0.03);  // identical neighbors reproduce exactly

    CHECK_THROWS_AS(fill_missing_date({a, b}, d(2024, 10, 16)), DataError);
    CHECK_THROWS_AS(fill_missing_date({a, b}, d(2024, 10, 1)), DataError);
    CHECK_THROWS_AS(fill_missing_date({a, b}, d(2024, 10, 11)), DataError);
    b.complete = false;
    CHECK_THROWS_AS(fill_missing_date({a, b}, d(2024, 10, 14)), DataError);
}

TEST_CASE("treasury write then read keeps the curve") {
    const auto data = read_treasury(std::string(kTreasuryHeader) +
                                    "10/09/2024,4.61,4.65,4.65,4.58,4.43,4.18,4.03,3.96,3.95,4.00,4.06,4.37,4.35\n");
    std::stringstream buf;
    write_par_yields(buf, data.curves);
    CHECK(buf.str().substr(0, buf.str().find('\n') + 1) == kTreasuryHeader);
    const auto back = read_par_yields(buf);
    REQUIRE(back.curves.size() == 1);
    for (std::size_t i = 0; i < 13; ++i) {
        CHECK(back.curves[0].rates[i] == doctest::Approx(data.curves[0].rates[i]).epsilon(1e-14));
    }
}
