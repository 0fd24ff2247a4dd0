#pragma once

#include "parity/date.hpp"
#include "parity/market_data.hpp"

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace parity::synthetic {

/// Deterministic short rate r_t = rate.
struct ConstantRate {
    double rate = 0.0;
};

/// Vasicek short rate under the pricing measure:
/// dr = speed * (level - r) dt + volatility dW, r(0) = initial.
struct VasicekRate {
    double speed = 0.1;
    double level = 0.05;
    double volatility = 0.01;
    double initial = 0.03;
};

using ShortRateModel = std::variant<ConstantRate, VasicekRate>;

/// Throws DataError unless speed > 0 and volatility >= 0.
void validate(const VasicekRate& m);

/// Lognormal index with constant coefficients.
struct EquityModel {
    double spot = 100.0;
    double volatility = 0.2;
    double drift = 0.0;  ///< real-world drift; only enters the market price of risk

    /// (drift - r) / volatility.
    [[nodiscard]] double market_price_of_risk(double r) const { return (drift - r) / volatility; }
};

/// Standard normal CDF.
double norm_cdf(double x);

/// Black-Scholes value of a European option with constant rate and
/// volatility. With zero volatility or time the option is worth its
/// discounted forward intrinsic value.
double bs_price(OptionKind kind, double spot, double strike, double rate, double volatility,
                double ttm_years);

/// Closed-form Vasicek zero-coupon bond price for time to maturity `ttm`.
double vasicek_bond_analytic(const VasicekRate& m, double ttm_years);

/// B(tau) = (1 - exp(-a tau)) / a of the affine bond formula.
double vasicek_b(double speed, double ttm_years);

enum class StaleProfile {
    uniform,   ///< stale quotes priced off a spot shifted down by `stale_shift`
    distance,  ///< stale premium of stale_shift * S0 * |M - 1| * U(0,1)
};

/// Quote noise for generated chains. Every stale quote moves the implied
/// yield downwards.
struct NoiseSpec {
    double half_spread = 0.0;   ///< bid = price - h (floored at 0), ask = price + h
    double stale_fraction = 0.0;  ///< probability a contract on `stale_leg` is stale
    double stale_shift = 0.01;
    StaleProfile profile = StaleProfile::uniform;
    OptionKind stale_leg = OptionKind::put;

    [[nodiscard]] bool active() const { return half_spread > 0.0 || stale_fraction > 0.0; }
};

struct ChainSpec {
    Date trade_date{std::chrono::year{2024}, std::chrono::October, std::chrono::day{9}};
    EquityModel equity;
    double rate = 0.0;                   ///< constant short rate
    std::vector<int> maturity_days;      ///< calendar days to expiry
    std::vector<double> moneyness_grid;  ///< strikes are M * spot
    NoiseSpec noise;
    std::uint64_t seed = 0;
};

struct SyntheticChain {
    std::vector<OptionQuote> quotes;  ///< ordered by (maturity, moneyness, call before put)
    SpotQuote spot;
    double ground_truth_rate = 0.0;
    std::size_t stale_count = 0;

    /// Discount factor the chain was priced with, ACT/365.
    [[nodiscard]] double ground_truth_discount(double ttm_years) const;
};

/// Prices a call and a put at every (maturity, moneyness) node. Noise draws
/// come from a generator seeded by `spec.seed` in node order.
SyntheticChain generate_chain(const ChainSpec& spec);

/// Treasury-style curve with every standard tenor at `rate`.
ParYieldCurve flat_par_curve(const Date& date, double rate);

struct McConfig {
    std::size_t paths = 100000;
    std::size_t steps = 252;  ///< Euler steps over [t, T]
    std::uint64_t seed = 0;
    unsigned threads = 0;     ///< 0 = hardware concurrency
};

struct McResult {
    double price = 0.0;
    double standard_error = 0.0;
    std::size_t paths = 0;
    std::size_t steps = 0;
    std::uint64_t seed = 0;
};

/// Monte-Carlo price of the unit zero bond E[exp(-int_t^T r ds)].
///
/// Vasicek paths use Euler steps and trapezoidal integration of the rate.
/// Path i draws from a generator seeded by (seed, i) alone, and the path
/// values are reduced by pairwise summation, so the estimate does not
/// depend on the thread count. A constant rate has a deterministic
/// integrand: exact price, zero standard error.
McResult mc_zero_bond(const ShortRateModel& model, double t, double maturity,
                      const McConfig& config = {});

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values);

}  // namespace parity::synthetic
