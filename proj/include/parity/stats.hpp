#pragma once

#include "parity/aggregation.hpp"
#include "parity/parity_core.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace parity {

/// Box-and-whisker summary of one group of yields.
///
/// Quartiles interpolate linearly between order statistics (the "type 7"
/// rule: position (n - 1) * p). Whiskers reach the most extreme values
/// inside the Tukey fences [q1 - 1.5 IQR, q3 + 1.5 IQR]; everything outside
/// is an outlier.
struct BoxWhiskerSummary {
    double key = 0.0;  ///< maturity in years, or bin moneyness
    std::size_t count = 0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double lower_whisker = 0.0;
    double upper_whisker = 0.0;
    std::vector<double> outliers;  ///< ascending

    [[nodiscard]] double iqr() const { return q3 - q1; }
    [[nodiscard]] double lower_fence() const { return q1 - 1.5 * iqr(); }
    [[nodiscard]] double upper_fence() const { return q3 + 1.5 * iqr(); }
};

/// Type-7 quantile of already sorted data, p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

BoxWhiskerSummary summarize(std::vector<double> values, double key = 0.0);

std::vector<BoxWhiskerSummary> summarize_by_maturity(const ImpliedYieldSurface& surface);

/// One summary per occupied bin, keyed by the bin's representative moneyness.
std::vector<BoxWhiskerSummary> summarize_by_moneyness(const MoneynessBinning& binning);

/// CSV `group,q1,median,q3,lo_whisker,hi_whisker,n_outliers`.
void write_summaries(std::ostream& out, const std::vector<BoxWhiskerSummary>& summaries);
/// Sidecar CSV `group,value`, one row per outlier.
void write_outliers(std::ostream& out, const std::vector<BoxWhiskerSummary>& summaries);

}  // namespace parity
