#pragma once

#include "parity/date.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace parity {

enum class OptionKind { call, put };

std::string_view to_string(OptionKind kind);

/// One quoted contract from a chain file. Prices in index points.
struct OptionQuote {
    Date trade_date;
    Date expiry;
    double strike = 0.0;
    OptionKind kind = OptionKind::call;
    double bid = 0.0;
    double ask = 0.0;
    double last = 0.0;
    std::int64_t volume = 0;
    std::int64_t open_interest = 0;
};

/// Returns the first invariant an OptionQuote violates, if any.
std::optional<std::string> validate(const OptionQuote& quote);

struct SpotQuote {
    Date trade_date;
    double spot = 0.0;
};

/// A call and a put matched on (expiry, strike) with one usable price each.
struct PutCallPair {
    Date trade_date;
    Date expiry;
    double strike = 0.0;
    double call_price = 0.0;
    double put_price = 0.0;
    double spot = 0.0;
    double ttm_years = 0.0;
    double moneyness = 0.0;
};

enum class PriceRule {
    mid,   ///< bid/ask midpoint when both are positive, otherwise last
    last,  ///< last traded price only
};

PriceRule parse_price_rule(std::string_view text);
std::string_view to_string(PriceRule rule);

/// Usable price for a quote under `rule`, or nullopt when none is positive.
std::optional<double> usable_price(const OptionQuote& quote, PriceRule rule);

// ---------------------------------------------------------------------------
// Chain ingestion

struct IngestConfig {
    /// Throw on the first rejected row instead of collecting it.
    bool strict = false;
};

/// A data row that failed validation. `row` is the 1-based physical line
/// number in the file (the header is row 1).
struct RejectedRow {
    std::size_t row = 0;
    std::string reason;
};

struct ChainData {
    std::vector<OptionQuote> quotes;
    std::vector<SpotQuote> spots;  ///< one per trade date, ascending
    std::vector<RejectedRow> rejects;

    /// Spot for `date`; throws DataError when absent.
    [[nodiscard]] const SpotQuote& spot_for(const Date& date) const;
};

/// Reads the chain CSV schema
/// `trade_date,expiry,kind,strike,bid,ask,last,volume,open_interest`.
/// Rows with `kind=spot` carry the index level in `last`.
ChainData read_option_chain(std::istream& in, const IngestConfig& config = {});
ChainData load_option_chain(const std::filesystem::path& path,
                            const IngestConfig& config = {});

/// Writes quotes and spots in the chain CSV schema. Numbers use the shortest
/// representation that round-trips, so re-reading is lossless.
void write_option_chain(std::ostream& out, const std::vector<OptionQuote>& quotes,
                        const std::vector<SpotQuote>& spots);

void write_rejects(std::ostream& out, const std::vector<RejectedRow>& rejects);

// ---------------------------------------------------------------------------
// Pairing

struct PairingResult {
    std::vector<PutCallPair> pairs;  ///< sorted by (expiry, strike)
    std::size_t dropped_unmatched = 0;  ///< legs with no counterpart
    std::size_t dropped_unpriced = 0;   ///< legs with no usable price
    std::size_t dropped_duplicate = 0;  ///< legs quoted more than once
    std::size_t dropped_expired = 0;    ///< legs expiring on the trade date

    [[nodiscard]] std::size_t dropped_total() const {
        return dropped_unmatched + dropped_unpriced + dropped_duplicate + dropped_expired;
    }
};

/// Matches calls with puts on (expiry, strike). All quotes must share the
/// spot's trade date. Legs quoted twice are ambiguous and dropped, so the
/// result does not depend on input order.
PairingResult pair_contracts(const std::vector<OptionQuote>& quotes, const SpotQuote& spot,
                             PriceRule rule = PriceRule::mid);

// ---------------------------------------------------------------------------
// Treasury par yields

/// Par yield knots for one business date. Rates are decimals per annum and
/// maturities year fractions (1 Mo = 1/12).
struct ParYieldCurve {
    Date curve_date;
    std::vector<double> maturities;
    std::vector<double> rates;
    /// False when the row had empty cells or the header lacked a standard tenor.
    bool complete = true;
};

/// Maturities of the standard treasury tenor set, in years.
const std::vector<double>& standard_tenors();

/// Parses tenor labels like `1 Mo`, `6 Mo`, `2 Yr`, `30 Yr` into years.
double parse_tenor_label(std::string_view label);

struct ParYieldData {
    std::vector<ParYieldCurve> curves;  ///< ascending by date
    std::vector<std::string> warnings;
};

ParYieldData read_par_yields(std::istream& in);
ParYieldData load_par_yields(const std::filesystem::path& path);

/// Writes curves in the treasury CSV layout (rates as percent).
void write_par_yields(std::ostream& out, const std::vector<ParYieldCurve>& curves);

/// Synthesizes a curve for a date missing from `curves` (e.g. a federal
/// holiday) as the per-tenor mean of the nearest earlier and later curves.
ParYieldCurve fill_missing_date(const std::vector<ParYieldCurve>& curves, const Date& target);

}  // namespace parity
