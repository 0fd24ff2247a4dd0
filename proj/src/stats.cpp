#include "parity/stats.hpp"

#include "parity/error.hpp"
#include "parity/format.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace parity {

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw DataError("quantile of an empty set");
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    if (frac == 0.0) return sorted[lo];
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxWhiskerSummary summarize(std::vector<double> values, double key) {
    if (values.empty()) throw DataError("cannot summarize an empty group");
    std::sort(values.begin(), values.end());

    BoxWhiskerSummary s;
    s.key = key;
    s.count = values.size();
    s.q1 = quantile_sorted(values, 0.25);
    s.median = quantile_sorted(values, 0.5);
    s.q3 = quantile_sorted(values, 0.75);

    const double lo_fence = s.lower_fence();
    const double hi_fence = s.upper_fence();
    s.lower_whisker = s.q1;
    s.upper_whisker = s.q3;
    bool lower_set = false;
    for (double v : values) {
        if (v < lo_fence || v > hi_fence) {
            s.outliers.push_back(v);
            continue;
        }
        if (!lower_set) {
            s.lower_whisker = v;
            lower_set = true;
        }
        s.upper_whisker = v;
    }
    return s;
}

std::vector<BoxWhiskerSummary> summarize_by_maturity(const ImpliedYieldSurface& surface) {
    std::vector<BoxWhiskerSummary> out;
    const auto& pts = surface.points;
    for (std::size_t i = 0; i < pts.size();) {
        std::vector<double> ys;
        std::size_t j = i;
        for (; j < pts.size() && pts[j].ttm_years == pts[i].ttm_years; ++j) {
            ys.push_back(pts[j].implied_yield);
        }
        out.push_back(summarize(std::move(ys), pts[i].ttm_years));
        i = j;
    }
    return out;
}

std::vector<BoxWhiskerSummary> summarize_by_moneyness(const MoneynessBinning& binning) {
    std::vector<BoxWhiskerSummary> out;
    for (const auto& bin : binning.bins) {
        if (bin.empty()) continue;
        out.push_back(summarize(bin.yields, bin.representative));
    }
    return out;
}

void write_summaries(std::ostream& out, const std::vector<BoxWhiskerSummary>& summaries) {
    out << "group,q1,median,q3,lo_whisker,hi_whisker,n_outliers\n";
    for (const auto& s : summaries) {
        out << format_number(s.key) << ',' << format_number(s.q1) << ',' << format_number(s.median)
            << ',' << format_number(s.q3) << ',' << format_number(s.lower_whisker) << ','
            << format_number(s.upper_whisker) << ',' << s.outliers.size() << '\n';
    }
}

void write_outliers(std::ostream& out, const std::vector<BoxWhiskerSummary>& summaries) {
    out << "group,value\n";
    for (const auto& s : summaries) {
        for (double v : s.outliers) out << format_number(s.key) << ',' << format_number(v) << '\n';
    }
}

}  // namespace parity
