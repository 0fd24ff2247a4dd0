#pragma once

#include "parity/date.hpp"
#include "parity/market_data.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace parity {

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Carlson
/// derivatives) through par yield knots. Immutable once fitted.
///
/// Outside the knot range the curve is flat at the end knots. Market-rate
/// lookup additionally holds maturities below `floor_maturity` at the rate
/// for `floor_maturity` (the 1-month bill).
class InterpolatedCurve {
public:
    InterpolatedCurve(Date curve_date, std::vector<double> maturities, std::vector<double> rates);

    [[nodiscard]] double operator()(double maturity) const { return evaluate(maturity); }
    [[nodiscard]] double evaluate(double maturity) const;

    /// Derivative of the cubic piece on the given side of `maturity`. At a
    /// knot, `from_left` selects the piece ending there.
    [[nodiscard]] double derivative(double maturity, bool from_left = false) const;

    [[nodiscard]] const Date& curve_date() const { return curve_date_; }
    [[nodiscard]] std::span<const double> maturities() const { return maturities_; }
    [[nodiscard]] std::span<const double> rates() const { return rates_; }
    [[nodiscard]] std::span<const double> slopes() const { return slopes_; }

    static constexpr double kFloorMaturity = 1.0 / 12.0;

private:
    [[nodiscard]] std::size_t piece_index(double maturity, bool from_left) const;

    Date curve_date_;
    std::vector<double> maturities_;
    std::vector<double> rates_;
    std::vector<double> slopes_;
};

/// Fritsch-Carlson knot derivatives for strictly increasing `x`.
std::vector<double> pchip_slopes(std::span<const double> x, std::span<const double> y);

/// Fits the PCHIP interpolant. Throws DataError on fewer than two knots or
/// non-increasing maturities.
InterpolatedCurve fit_pchip(const ParYieldCurve& curve);

/// Market rate at an option maturity: flat at the 1-month rate below one
/// month, PCHIP inside the knot range, flat at the last knot beyond it.
double market_rate(const InterpolatedCurve& curve, double ttm_years);

/// CSV `ttm_years,rate` on an evenly spaced grid of `samples` points over
/// [from, to].
void write_curve(std::ostream& out, const InterpolatedCurve& curve, double from, double to,
                 std::size_t samples);

}  // namespace parity
