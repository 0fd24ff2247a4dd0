#include "parity/synthetic.hpp"

#include "parity/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace parity::synthetic {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void validate(const VasicekRate& m) {
    if (!(m.speed > 0.0)) throw DataError("vasicek speed must be positive");
    if (!(m.volatility >= 0.0)) throw DataError("vasicek volatility must be non-negative");
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double bs_price(OptionKind kind, double spot, double strike, double rate, double volatility,
                double ttm_years) {
    if (!(spot > 0.0) || !(strike > 0.0)) throw DataError("spot and strike must be positive");
    if (volatility < 0.0 || ttm_years < 0.0) throw DataError("volatility and time must be non-negative");
    const double df = std::exp(-rate * ttm_years);
    const double sd = volatility * std::sqrt(ttm_years);
    if (sd == 0.0) {
        const double forward_gap = spot - strike * df;
        return kind == OptionKind::call ? std::max(forward_gap, 0.0) : std::max(-forward_gap, 0.0);
    }
    const double d1 = (std::log(spot / strike) + (rate + 0.5 * volatility * volatility) * ttm_years) / sd;
    const double d2 = d1 - sd;
    if (kind == OptionKind::call) return spot * norm_cdf(d1) - strike * df * norm_cdf(d2);
    return strike * df * norm_cdf(-d2) - spot * norm_cdf(-d1);
}

double vasicek_b(double speed, double ttm_years) {
    return -std::expm1(-speed * ttm_years) / speed;
}

double vasicek_bond_analytic(const VasicekRate& m, double ttm_years) {
    validate(m);
    if (ttm_years < 0.0) throw DataError("time to maturity must be non-negative");
    const double a = m.speed;
    const double s2 = m.volatility * m.volatility;
    const double b = vasicek_b(a, ttm_years);
    const double log_a = (m.level - s2 / (2.0 * a * a)) * (b - ttm_years) - s2 * b * b / (4.0 * a);
    return std::exp(log_a - b * m.initial);
}

double SyntheticChain::ground_truth_discount(double ttm_years) const {
    return std::exp(-ground_truth_rate * ttm_years);
}

SyntheticChain generate_chain(const ChainSpec& spec) {
    const auto& eq = spec.equity;
    if (!(eq.spot > 0.0) || !(eq.volatility > 0.0)) {
        throw DataError("equity spot and volatility must be positive");
    }
    const auto& noise = spec.noise;
    if (noise.half_spread < 0.0 || noise.stale_fraction < 0.0 || noise.stale_fraction > 1.0) {
        throw DataError("invalid noise specification");
    }

    SyntheticChain chain;
    chain.spot = {spec.trade_date, eq.spot};
    chain.ground_truth_rate = spec.rate;
    chain.quotes.reserve(spec.maturity_days.size() * spec.moneyness_grid.size() * 2);

    std::mt19937_64 rng(spec.seed);
    for (const int days : spec.maturity_days) {
        if (days <= 0) throw DataError("maturities must be at least one day");
        const double ttm = static_cast<double>(days) / kDaysPerYear;
        const Date expiry = add_days(spec.trade_date, days);
        for (const double m : spec.moneyness_grid) {
            if (!(m > 0.0)) throw DataError("moneyness grid must be positive");
            const double strike = m * eq.spot;
            for (const auto kind : {OptionKind::call, OptionKind::put}) {
                double price = bs_price(kind, eq.spot, strike, spec.rate, eq.volatility, ttm);
                if (noise.stale_fraction > 0.0 && kind == noise.stale_leg &&
                    unit_uniform(rng) < noise.stale_fraction) {
                    ++chain.stale_count;
                    if (noise.profile == StaleProfile::uniform) {
                        const double stale_spot = eq.spot * (1.0 - noise.stale_shift);
                        price = bs_price(kind, stale_spot, strike, spec.rate, eq.volatility, ttm);
                    } else {
                        const double premium =
                            noise.stale_shift * eq.spot * std::abs(m - 1.0) * unit_uniform(rng);
                        price = kind == OptionKind::put ? price + premium : std::max(price - premium, 0.0);
                    }
                }
                OptionQuote q;
                q.trade_date = spec.trade_date;
                q.expiry = expiry;
                q.strike = strike;
                q.kind = kind;
                q.last = price;
                q.bid = std::max(price - noise.half_spread, 0.0);
                q.ask = price + noise.half_spread;
                chain.quotes.push_back(q);
            }
        }
    }
    return chain;
}

ParYieldCurve flat_par_curve(const Date& date, double rate) {
    ParYieldCurve curve;
    curve.curve_date = date;
    curve.maturities = standard_tenors();
    curve.rates.assign(curve.maturities.size(), rate);
    return curve;
}

double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t kBlock = 64;
    if (values.size() <= kBlock) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

McResult mc_zero_bond(const ShortRateModel& model, double t, double maturity, const McConfig& config) {
    if (config.paths < 100) throw DataError("need at least 100 Monte-Carlo paths");
    if (config.steps == 0) throw DataError("need at least one time step");
    if (!(maturity > t)) throw DataError("bond maturity must be after the valuation time");
    const double tau = maturity - t;

    McResult result{0.0, 0.0, config.paths, config.steps, config.seed};
    if (const auto* c = std::get_if<ConstantRate>(&model)) {
        result.price = std::exp(-c->rate * tau);
        return result;
    }
    const auto& v = std::get<VasicekRate>(model);
    validate(v);

    const double h = tau / static_cast<double>(config.steps);
    const double sqrt_h = std::sqrt(h);
    std::vector<double> discounts(config.paths);

    auto run_paths = [&](std::size_t begin, std::size_t end) {
        std::normal_distribution<double> normal;
        for (std::size_t i = begin; i < end; ++i) {
            std::mt19937_64 rng(splitmix64(config.seed ^ splitmix64(i)));
            normal.reset();
            double r = v.initial;
            double integral = 0.0;
            for (std::size_t k = 0; k < config.steps; ++k) {
                const double next = r + v.speed * (v.level - r) * h + v.volatility * sqrt_h * normal(rng);
                integral += 0.5 * (r + next) * h;
                r = next;
            }
            discounts[i] = std::exp(-integral);
        }
    };

    unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                           : config.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, config.paths));
    if (threads <= 1) {
        run_paths(0, config.paths);
    } else {
        std::vector<std::jthread> workers;
        const std::size_t chunk = (config.paths + threads - 1) / threads;
        for (std::size_t begin = 0; begin < config.paths; begin += chunk) {
            workers.emplace_back(run_paths, begin, std::min(begin + chunk, config.paths));
        }
    }

    const auto n = static_cast<double>(config.paths);
    const double mean = pairwise_sum(discounts) / n;
    std::vector<double> sq(discounts.size());
    std::transform(discounts.begin(), discounts.end(), sq.begin(),
                   [mean](double x) { return (x - mean) * (x - mean); });
    const double variance = pairwise_sum(sq) / (n - 1.0);
    result.price = mean;
    result.standard_error = std::sqrt(variance / n);
    return result;
}

}  // namespace parity::synthetic
