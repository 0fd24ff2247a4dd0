#include "parity/parity_core.hpp"

#include "parity/error.hpp"
#include "parity/format.hpp"
#include "text.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace parity {

std::string_view to_string(SignClass s) {
    switch (s) {
        case SignClass::positive: return "positive";
        case SignClass::negative: return "negative";
        case SignClass::zero: return "zero";
    }
    return "zero";
}

std::string_view to_string(Cluster c) {
    return c == Cluster::short_term ? "short" : "long";
}

double discount_factor(const PutCallPair& pair) {
    if (!(pair.strike > 0.0)) throw DataError("strike must be positive");
    return (pair.spot + pair.put_price - pair.call_price) / pair.strike;
}

double implied_yield(double df, double ttm_years) {
    if (!(df > 0.0)) throw DataError("non-positive discount factor");
    if (!(ttm_years > 0.0)) throw DataError("non-positive time to maturity");
    return -std::log(df) / ttm_years;
}

SignClass classify_sign(const PutCallPair& pair) {
    const double lhs = pair.spot + pair.put_price;
    const double rhs = pair.strike + pair.call_price;
    if (lhs < rhs) return SignClass::positive;
    if (lhs > rhs) return SignClass::negative;
    return SignClass::zero;
}

SignClass sign_of_yield(double yield, double tolerance) {
    if (yield > tolerance) return SignClass::positive;
    if (yield < -tolerance) return SignClass::negative;
    return SignClass::zero;
}

bool signs_agree(SignClass price_class, double yield, double tolerance) {
    switch (price_class) {
        case SignClass::positive: return yield > -tolerance;
        case SignClass::negative: return yield < tolerance;
        case SignClass::zero: return std::abs(yield) <= tolerance;
    }
    return false;
}

ClusterRule parse_cluster_rule(std::string_view text) {
    const auto s = text::to_lower(text::trim(text));
    if (s == "gap" || s == "largest_gap") return ClusterRule::largest_gap();
    if (s.rfind("fixed:", 0) == 0) {
        const double days = text::parse_double(std::string_view(s).substr(6), "cluster days");
        if (!(days > 0.0)) throw ParseError("cluster days must be positive");
        return ClusterRule::fixed(days);
    }
    throw ParseError("unknown cluster rule '" + std::string(text) + "', expected gap|fixed:<days>");
}

std::string to_string(const ClusterRule& rule) {
    if (rule.kind == ClusterRule::Kind::fixed) return "fixed:" + format_number(rule.fixed_days);
    return "gap";
}

ClusterSplit split_clusters(std::vector<double> maturities, const ClusterRule& rule) {
    if (rule.kind == ClusterRule::Kind::fixed) {
        return {rule.fixed_days / kDaysPerYear, std::nullopt};
    }
    if (maturities.empty()) throw DataError("cannot split clusters of an empty maturity set");
    std::sort(maturities.begin(), maturities.end());
    maturities.erase(std::unique(maturities.begin(), maturities.end()), maturities.end());
    if (maturities.size() == 1) {
        return {maturities.front() + 1.0 / kDaysPerYear,
                "single distinct maturity; all contracts are short-term"};
    }
    std::size_t widest = 1;
    for (std::size_t i = 2; i < maturities.size(); ++i) {
        if (maturities[i] - maturities[i - 1] > maturities[widest] - maturities[widest - 1]) widest = i;
    }
    return {0.5 * (maturities[widest - 1] + maturities[widest]), std::nullopt};
}

ImpliedYieldSurface ImpliedYieldSurface::subset(Cluster c) const {
    ImpliedYieldSurface out;
    out.trade_date = trade_date;
    out.spot = spot;
    out.cluster_boundary = cluster_boundary;
    std::copy_if(points.begin(), points.end(), std::back_inserter(out.points),
                 [&](const ImpliedYieldPoint& p) { return cluster_of(p) == c; });
    return out;
}

SurfaceBuild build_surface(const std::vector<PutCallPair>& pairs, const ClusterRule& rule) {
    if (pairs.empty()) throw DataError("no valid pairs");

    SurfaceBuild build;
    build.surface.trade_date = pairs.front().trade_date;
    build.surface.spot = pairs.front().spot;
    build.surface.points.reserve(pairs.size());
    for (const auto& pair : pairs) {
        if (pair.trade_date != build.surface.trade_date) {
            throw DataError("pairs span more than one trade date");
        }
        const double df = discount_factor(pair);
        if (!(df > 0.0)) {
            build.diagnostics.push_back({pair, df, "non-positive discount factor"});
            continue;
        }
        if (!(pair.ttm_years > 0.0)) {
            build.diagnostics.push_back({pair, df, "non-positive time to maturity"});
            continue;
        }
        ImpliedYieldPoint p;
        p.ttm_years = pair.ttm_years;
        p.strike = pair.strike;
        p.moneyness = pair.moneyness;
        p.discount_factor = df;
        p.implied_yield = implied_yield(df, pair.ttm_years);
        p.sign_class = std::abs(p.implied_yield) <= kZeroYieldTolerance ? SignClass::zero
                                                                       : classify_sign(pair);
        build.surface.points.push_back(p);
    }
    if (build.surface.points.empty()) throw DataError("no valid pairs");

    std::sort(build.surface.points.begin(), build.surface.points.end(),
              [](const ImpliedYieldPoint& a, const ImpliedYieldPoint& b) {
                  return a.ttm_years != b.ttm_years ? a.ttm_years < b.ttm_years : a.strike < b.strike;
              });

    std::vector<double> maturities;
    maturities.reserve(build.surface.points.size());
    for (const auto& p : build.surface.points) maturities.push_back(p.ttm_years);
    auto split = split_clusters(std::move(maturities), rule);
    build.surface.cluster_boundary = split.boundary;
    build.cluster_warning = std::move(split.warning);
    return build;
}

void write_surface(std::ostream& out, const ImpliedYieldSurface& surface) {
    out << "ttm_years,strike,moneyness,discount_factor,implied_yield,sign_class,cluster\n";
    for (const auto& p : surface.points) {
        out << format_number(p.ttm_years) << ',' << format_number(p.strike) << ','
            << format_number(p.moneyness) << ',' << format_number(p.discount_factor) << ','
            << format_number(p.implied_yield) << ',' << to_string(p.sign_class) << ','
            << to_string(surface.cluster_of(p)) << '\n';
    }
}

void write_diagnostics(std::ostream& out, const std::vector<InvalidPoint>& diagnostics) {
    out << "expiry,strike,call_price,put_price,discount_factor,reason\n";
    for (const auto& d : diagnostics) {
        out << format_iso_date(d.pair.expiry) << ',' << format_number(d.pair.strike) << ','
            << format_number(d.pair.call_price) << ',' << format_number(d.pair.put_price) << ','
            << format_number(d.discount_factor) << ',' << d.reason << '\n';
    }
}

}  // namespace parity
