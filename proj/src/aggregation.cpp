#include "parity/aggregation.hpp"

#include "parity/error.hpp"
#include "parity/format.hpp"
#include "text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace parity {

AggregationMethod parse_method(std::string_view text) {
    const auto s = text::to_lower(text::trim(text));
    if (s == "median" || s == "med") return AggregationMethod::median;
    if (s == "atm") return AggregationMethod::atm;
    throw ParseError("unknown aggregation method '" + std::string(text) + "', expected median|atm");
}

std::string_view to_string(AggregationMethod m) {
    return m == AggregationMethod::median ? "median" : "atm";
}

double median(std::vector<double> values) {
    if (values.empty()) throw DataError("median of an empty set");
    const std::size_t n = values.size();
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    if (n % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

namespace {

// Calls `fn(first, last)` for each run of points sharing one maturity.
template <typename Fn>
void for_each_maturity(const ImpliedYieldSurface& surface, Fn&& fn) {
    const auto& pts = surface.points;
    for (std::size_t i = 0; i < pts.size();) {
        std::size_t j = i;
        while (j < pts.size() && pts[j].ttm_years == pts[i].ttm_years) ++j;
        fn(i, j);
        i = j;
    }
}

}  // namespace

AggregatedCurve median_curve(const ImpliedYieldSurface& surface) {
    if (surface.points.empty()) throw DataError("empty implied-yield surface");
    AggregatedCurve out{surface.trade_date, AggregationMethod::median, {}};
    for_each_maturity(surface, [&](std::size_t first, std::size_t last) {
        std::vector<double> ys;
        ys.reserve(last - first);
        for (std::size_t i = first; i < last; ++i) ys.push_back(surface.points[i].implied_yield);
        out.points.push_back({surface.points[first].ttm_years, median(std::move(ys)), last - first});
    });
    return out;
}

AtmCurveResult atm_curve(const ImpliedYieldSurface& surface, double tolerance) {
    if (surface.points.empty()) throw DataError("empty implied-yield surface");
    // Distances within this band count as ties (so rescaled inputs select
    // the same strike).
    constexpr double kTieBand = 1e-12;

    AtmCurveResult result{{surface.trade_date, AggregationMethod::atm, {}}, 0};
    for_each_maturity(surface, [&](std::size_t first, std::size_t last) {
        const ImpliedYieldPoint* best = nullptr;
        double best_distance = std::numeric_limits<double>::infinity();
        // Points within a maturity are sorted by strike, so on a tie the
        // earlier (lower) strike is kept.
        for (std::size_t i = first; i < last; ++i) {
            const auto& p = surface.points[i];
            const double distance = std::abs(p.strike - surface.spot) / surface.spot;
            if (distance < best_distance - kTieBand) {
                best = &p;
                best_distance = distance;
            }
        }
        if (best_distance > tolerance) {
            ++result.omitted;
            return;
        }
        result.curve.points.push_back({best->ttm_years, best->implied_yield, 1});
    });
    if (result.curve.points.empty()) throw DataError("no ATM contracts within tolerance");
    return result;
}

std::size_t MoneynessBinning::bin_index(double m) const {
    const auto inner_begin = edges.begin() + 1;
    const auto inner_end = edges.end() - 1;
    return static_cast<std::size_t>(std::upper_bound(inner_begin, inner_end, m) - inner_begin);
}

MoneynessBinning bin_by_moneyness(const ImpliedYieldSurface& surface, std::size_t bin_count) {
    if (surface.points.empty()) throw DataError("empty implied-yield surface");
    if (bin_count == 0) throw DataError("bin count must be at least 1");

    const auto [lo_it, hi_it] = std::minmax_element(
        surface.points.begin(), surface.points.end(),
        [](const ImpliedYieldPoint& a, const ImpliedYieldPoint& b) { return a.moneyness < b.moneyness; });
    const double lo = lo_it->moneyness;
    const double hi = hi_it->moneyness;

    MoneynessBinning binning;
    binning.edges.resize(bin_count + 1);
    const auto n = static_cast<double>(bin_count);
    for (std::size_t i = 0; i <= bin_count; ++i) {
        const auto w = static_cast<double>(i) / n;
        binning.edges[i] = lo * (1.0 - w) + hi * w;
    }
    binning.edges.front() = lo;
    binning.edges.back() = hi;

    binning.bins.resize(bin_count);
    for (std::size_t i = 0; i < bin_count; ++i) {
        binning.bins[i].lower = binning.edges[i];
        binning.bins[i].upper = binning.edges[i + 1];
    }
    for (const auto& p : surface.points) {
        auto& bin = binning.bins[binning.bin_index(p.moneyness)];
        bin.strikes.push_back(p.strike);
        bin.yields.push_back(p.implied_yield);
    }
    for (auto& bin : binning.bins) {
        bin.representative = bin.empty() ? std::numeric_limits<double>::quiet_NaN()
                                         : median(bin.strikes) / surface.spot;
    }
    return binning;
}

DislocationSeries dislocation(const AggregatedCurve& agg, const InterpolatedCurve& curve) {
    DislocationSeries out{agg.trade_date, agg.method, {}};
    out.points.reserve(agg.points.size());
    for (const auto& p : agg.points) {
        out.points.push_back({p.ttm_years, p.value - market_rate(curve, p.ttm_years)});
    }
    return out;
}

void write_aggregated(std::ostream& out, const AggregatedCurve& agg) {
    out << "ttm_years,value,support\n";
    for (const auto& p : agg.points) {
        out << format_number(p.ttm_years) << ',' << format_number(p.value) << ',' << p.support << '\n';
    }
}

void write_dislocation(std::ostream& out, const DislocationSeries& series) {
    out << "ttm_years,delta\n";
    for (const auto& p : series.points) {
        out << format_number(p.ttm_years) << ',' << format_number(p.delta) << '\n';
    }
}

}  // namespace parity
