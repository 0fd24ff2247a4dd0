#pragma once

#include "parity/date.hpp"
#include "parity/market_data.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace parity {

/// Sign of the implied yield, as read off the parity inequality.
enum class SignClass { positive, negative, zero };

std::string_view to_string(SignClass s);

/// Half-width of the band around zero yield that counts as SignClass::zero.
constexpr double kZeroYieldTolerance = 1e-12;

/// Zero-bond discount factor implied by European put-call parity:
/// (S + P - C) / K.
double discount_factor(const PutCallPair& pair);

/// Continuously compounded yield -ln(df) / ttm. Throws DataError when
/// df <= 0 ("non-positive discount factor") or ttm <= 0.
double implied_yield(double df, double ttm_years);

/// Compares S + P against K + C on the raw prices: positive when S + P is
/// smaller (discount factor below one), negative when larger.
SignClass classify_sign(const PutCallPair& pair);

/// Sign of a yield value with the zero band applied.
SignClass sign_of_yield(double yield, double tolerance = kZeroYieldTolerance);

/// True when a price-based class and a yield are consistent up to the zero band.
bool signs_agree(SignClass price_class, double yield, double tolerance = kZeroYieldTolerance);

struct ImpliedYieldPoint {
    double ttm_years = 0.0;
    double strike = 0.0;
    double moneyness = 0.0;
    double discount_factor = 0.0;
    double implied_yield = 0.0;
    SignClass sign_class = SignClass::zero;
};

/// How to separate short-dated from long-dated contracts.
struct ClusterRule {
    enum class Kind { largest_gap, fixed };
    Kind kind = Kind::largest_gap;
    double fixed_days = 0.0;

    static ClusterRule largest_gap() { return {}; }
    static ClusterRule fixed(double days) { return {Kind::fixed, days}; }
};

/// Parses `gap` or `fixed:<days>`.
ClusterRule parse_cluster_rule(std::string_view text);
std::string to_string(const ClusterRule& rule);

struct ClusterSplit {
    double boundary = 0.0;  ///< year fraction; ttm <= boundary is short-term
    std::optional<std::string> warning;
};

/// Boundary between the short- and long-term maturity clusters.
/// `largest_gap`: midpoint of the widest gap between consecutive distinct
/// maturities (the first one when several tie). `fixed(d)`: d / 365.
ClusterSplit split_clusters(std::vector<double> maturities, const ClusterRule& rule);

enum class Cluster { short_term, long_term };
std::string_view to_string(Cluster c);

struct ImpliedYieldSurface {
    Date trade_date;
    double spot = 0.0;
    std::vector<ImpliedYieldPoint> points;  ///< sorted by (ttm, strike)
    double cluster_boundary = 0.0;

    [[nodiscard]] Cluster cluster_of(const ImpliedYieldPoint& p) const {
        return p.ttm_years <= cluster_boundary ? Cluster::short_term : Cluster::long_term;
    }
    /// Copy holding only the points of one cluster.
    [[nodiscard]] ImpliedYieldSurface subset(Cluster c) const;
};

/// A pair excluded from the surface because its discount factor is not positive.
struct InvalidPoint {
    PutCallPair pair;
    double discount_factor = 0.0;
    std::string reason;
};

struct SurfaceBuild {
    ImpliedYieldSurface surface;
    std::vector<InvalidPoint> diagnostics;
    std::optional<std::string> cluster_warning;
};

/// One point per pair with a positive discount factor; the rest land in
/// diagnostics. Throws DataError when `pairs` is empty or nothing is valid.
SurfaceBuild build_surface(const std::vector<PutCallPair>& pairs,
                           const ClusterRule& rule = ClusterRule::largest_gap());

/// CSV `ttm_years,strike,moneyness,discount_factor,implied_yield,sign_class,cluster`.
void write_surface(std::ostream& out, const ImpliedYieldSurface& surface);

/// CSV `expiry,strike,call_price,put_price,discount_factor,reason`.
void write_diagnostics(std::ostream& out, const std::vector<InvalidPoint>& diagnostics);

}  // namespace parity
