#pragma once

#include "parity/curves.hpp"
#include "parity/parity_core.hpp"

#include <iosfwd>
#include <vector>

namespace parity {

enum class AggregationMethod { median, atm };

AggregationMethod parse_method(std::string_view text);
std::string_view to_string(AggregationMethod m);

struct AggregatedPoint {
    double ttm_years = 0.0;
    double value = 0.0;
    std::size_t support = 0;  ///< strikes behind the value
};

/// One yield per maturity, reduced across strikes.
struct AggregatedCurve {
    Date trade_date;
    AggregationMethod method = AggregationMethod::median;
    std::vector<AggregatedPoint> points;  ///< ascending ttm
};

/// Median of `values` (mean of the central pair for even counts).
double median(std::vector<double> values);

/// Per-maturity median implied yield across strikes.
AggregatedCurve median_curve(const ImpliedYieldSurface& surface);

constexpr double kDefaultAtmTolerance = 0.02;

struct AtmCurveResult {
    AggregatedCurve curve;
    std::size_t omitted = 0;  ///< maturities with no strike within tolerance
};

/// Per-maturity yield of the strike nearest the money (smallest |M - 1|,
/// lower strike on ties). Maturities whose nearest strike lies more than
/// `tolerance` from M = 1 are omitted. Throws DataError if all are omitted.
AtmCurveResult atm_curve(const ImpliedYieldSurface& surface,
                         double tolerance = kDefaultAtmTolerance);

struct MoneynessBin {
    double lower = 0.0;
    double upper = 0.0;
    double representative = 0.0;  ///< median member strike / spot; NaN when empty
    std::vector<double> strikes;
    std::vector<double> yields;

    [[nodiscard]] bool empty() const { return yields.empty(); }
};

/// Equal-width moneyness histogram; bins are [lo, hi) except the last,
/// which is closed.
struct MoneynessBinning {
    std::vector<double> edges;  ///< bins.size() + 1 values
    std::vector<MoneynessBin> bins;

    /// Index of the bin holding moneyness `m` (clamped to the range).
    [[nodiscard]] std::size_t bin_index(double m) const;
};

constexpr std::size_t kDefaultBinCount = 25;

MoneynessBinning bin_by_moneyness(const ImpliedYieldSurface& surface,
                                  std::size_t bin_count = kDefaultBinCount);

struct DislocationPoint {
    double ttm_years = 0.0;
    double delta = 0.0;
};

struct DislocationSeries {
    Date trade_date;
    AggregationMethod method = AggregationMethod::median;
    std::vector<DislocationPoint> points;
};

/// Aggregated yield minus market rate at each maturity.
DislocationSeries dislocation(const AggregatedCurve& agg, const InterpolatedCurve& curve);

/// CSV `ttm_years,value,support`.
void write_aggregated(std::ostream& out, const AggregatedCurve& agg);
/// CSV `ttm_years,delta`.
void write_dislocation(std::ostream& out, const DislocationSeries& series);

}  // namespace parity
