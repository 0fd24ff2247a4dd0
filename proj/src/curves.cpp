#include "parity/curves.hpp"

#include "parity/error.hpp"
#include "parity/format.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace parity {
namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

// Three-point end slope, clamped so the end piece neither overshoots nor
// changes sign against its secant.
double end_slope(double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (sign(m) != sign(d0)) {
        m = 0.0;
    } else if (sign(d0) != sign(d1) && std::abs(m) > std::abs(3.0 * d0)) {
        m = 3.0 * d0;
    }
    return m;
}

}  // namespace

std::vector<double> pchip_slopes(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw DataError("knot maturities and rates differ in length");
    if (n < 2) throw DataError("PCHIP needs at least two knots");

    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x[k + 1] - x[k];
        if (!(h[k] > 0.0)) throw DataError("knot maturities must be strictly increasing");
        delta[k] = (y[k + 1] - y[k]) / h[k];
    }

    std::vector<double> m(n, 0.0);
    if (n == 2) {
        m[0] = m[1] = delta[0];
        return m;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (sign(delta[k - 1]) * sign(delta[k]) <= 0) continue;  // extremum or flat secant
        const double w1 = 2.0 * h[k] + h[k - 1];
        const double w2 = h[k] + 2.0 * h[k - 1];
        m[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    m[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    m[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return m;
}

InterpolatedCurve::InterpolatedCurve(Date curve_date, std::vector<double> maturities,
                                     std::vector<double> rates)
    : curve_date_(curve_date), maturities_(std::move(maturities)), rates_(std::move(rates)) {
    slopes_ = pchip_slopes(maturities_, rates_);
}

std::size_t InterpolatedCurve::piece_index(double maturity, bool from_left) const {
    // Piece k spans [x_k, x_{k+1}].
    const auto begin = maturities_.begin();
    const auto it = from_left ? std::lower_bound(begin, maturities_.end(), maturity)
                              : std::upper_bound(begin, maturities_.end(), maturity);
    const auto k = static_cast<std::ptrdiff_t>(it - begin) - 1;
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
        k, 0, static_cast<std::ptrdiff_t>(maturities_.size()) - 2));
}

double InterpolatedCurve::evaluate(double maturity) const {
    if (maturity <= maturities_.front()) return rates_.front();
    if (maturity >= maturities_.back()) return rates_.back();
    const std::size_t k = piece_index(maturity, false);
    const double h = maturities_[k + 1] - maturities_[k];
    const double t = (maturity - maturities_[k]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * rates_[k] + h10 * h * slopes_[k] + h01 * rates_[k + 1] + h11 * h * slopes_[k + 1];
}

double InterpolatedCurve::derivative(double maturity, bool from_left) const {
    if (maturity < maturities_.front() || maturity > maturities_.back()) return 0.0;
    if (from_left && maturity == maturities_.front()) return 0.0;
    if (!from_left && maturity == maturities_.back()) return 0.0;
    const std::size_t k = piece_index(maturity, from_left);
    const double h = maturities_[k + 1] - maturities_[k];
    const double t = (maturity - maturities_[k]) / h;
    const double t2 = t * t;
    const double d00 = 6.0 * t2 - 6.0 * t;
    const double d10 = 3.0 * t2 - 4.0 * t + 1.0;
    const double d01 = -6.0 * t2 + 6.0 * t;
    const double d11 = 3.0 * t2 - 2.0 * t;
    return (d00 * rates_[k] + d01 * rates_[k + 1]) / h + d10 * slopes_[k] + d11 * slopes_[k + 1];
}

InterpolatedCurve fit_pchip(const ParYieldCurve& curve) {
    if (curve.maturities.size() < 2) throw DataError("PCHIP needs at least two knots");
    return InterpolatedCurve(curve.curve_date, curve.maturities, curve.rates);
}

double market_rate(const InterpolatedCurve& curve, double ttm_years) {
    return curve.evaluate(std::max(ttm_years, InterpolatedCurve::kFloorMaturity));
}

void write_curve(std::ostream& out, const InterpolatedCurve& curve, double from, double to,
                 std::size_t samples) {
    out << "ttm_years,rate\n";
    if (samples == 0) return;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = samples == 1 ? from
                                      : from + (to - from) * static_cast<double>(i) /
                                                   static_cast<double>(samples - 1);
        out << format_number(t) << ',' << format_number(market_rate(curve, t)) << '\n';
    }
}

}  // namespace parity
