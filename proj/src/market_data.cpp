#include "parity/market_data.hpp"

#include "parity/error.hpp"
#include "parity/format.hpp"
#include "text.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace parity {

std::string_view to_string(OptionKind kind) {
    return kind == OptionKind::call ? "call" : "put";
}

PriceRule parse_price_rule(std::string_view text) {
    const auto s = text::to_lower(text::trim(text));
    if (s == "mid") return PriceRule::mid;
    if (s == "last") return PriceRule::last;
    throw ParseError("unknown price rule '" + std::string(text) + "', expected mid|last");
}

std::string_view to_string(PriceRule rule) {
    return rule == PriceRule::mid ? "mid" : "last";
}

std::optional<std::string> validate(const OptionQuote& q) {
    if (!(q.strike > 0.0)) return "non-positive strike";
    if (days_between(q.trade_date, q.expiry) < 0) return "expiry before trade date";
    if (q.bid < 0.0 || q.ask < 0.0 || q.last < 0.0) return "negative price";
    if (q.bid > 0.0 && q.ask > 0.0 && q.bid > q.ask) return "crossed market";
    if (q.volume < 0 || q.open_interest < 0) return "negative count";
    return std::nullopt;
}

std::optional<double> usable_price(const OptionQuote& q, PriceRule rule) {
    if (rule == PriceRule::mid && q.bid > 0.0 && q.ask > 0.0) {
        return 0.5 * (q.bid + q.ask);
    }
    if (q.last > 0.0) return q.last;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Chain CSV

namespace {

constexpr std::array<std::string_view, 9> kChainColumns = {
    "trade_date", "expiry", "kind", "strike", "bid", "ask", "last", "volume", "open_interest"};

enum ChainCol { kTradeDate, kExpiry, kKind, kStrike, kBid, kAsk, kLast, kVolume, kOpenInterest };

struct ChainHeader {
    std::array<std::size_t, kChainColumns.size()> index{};
    std::size_t width = 0;
};

ChainHeader parse_chain_header(const std::string& line) {
    const auto fields = text::split_csv(line);
    ChainHeader header;
    header.width = fields.size();
    std::array<bool, kChainColumns.size()> seen{};
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto name = text::to_lower(text::trim(fields[i]));
        const auto it = std::find(kChainColumns.begin(), kChainColumns.end(), name);
        if (it == kChainColumns.end()) continue;
        const auto col = static_cast<std::size_t>(it - kChainColumns.begin());
        if (seen[col]) throw ParseError("duplicate chain column '" + name + "'");
        seen[col] = true;
        header.index[col] = i;
    }
    for (std::size_t c = 0; c < kChainColumns.size(); ++c) {
        if (!seen[c]) {
            throw ParseError("chain header missing column '" + std::string(kChainColumns[c]) + "'");
        }
    }
    return header;
}

enum class RowKind { call, put, spot };

RowKind parse_row_kind(std::string_view field) {
    const auto s = text::to_lower(text::trim(field));
    if (s == "call" || s == "c") return RowKind::call;
    if (s == "put" || s == "p") return RowKind::put;
    if (s == "spot") return RowKind::spot;
    throw ParseError("unknown kind '" + std::string(field) + "'");
}

}  // namespace

const SpotQuote& ChainData::spot_for(const Date& date) const {
    const auto it = std::find_if(spots.begin(), spots.end(),
                                 [&](const SpotQuote& s) { return s.trade_date == date; });
    if (it == spots.end()) throw DataError("no spot row for " + format_iso_date(date));
    return *it;
}

ChainData read_option_chain(std::istream& in, const IngestConfig& config) {
    ChainData data;
    std::string line;
    std::size_t row = 0;

    std::optional<ChainHeader> header;
    while (std::getline(in, line)) {
        ++row;
        if (text::trim(line).empty()) continue;
        header = parse_chain_header(line);
        break;
    }
    if (!header) throw ParseError("chain file has no header");

    std::map<std::chrono::sys_days, SpotQuote> spots;
    auto reject = [&](std::size_t r, std::string reason) {
        if (config.strict) throw ParseError("row " + std::to_string(r) + ": " + reason);
        data.rejects.push_back({r, std::move(reason)});
    };

    while (std::getline(in, line)) {
        ++row;
        if (text::trim(line).empty()) continue;
        const auto fields = text::split_csv(line);
        if (fields.size() != header->width) {
            reject(row, "malformed: expected " + std::to_string(header->width) + " fields, found " +
                            std::to_string(fields.size()));
            continue;
        }
        const auto field = [&](ChainCol c) -> const std::string& { return fields[header->index[c]]; };

        try {
            const auto kind = parse_row_kind(field(kKind));
            const auto trade_date = parse_iso_date(field(kTradeDate));
            if (kind == RowKind::spot) {
                const double spot = text::parse_double(field(kLast), "spot");
                if (!(spot > 0.0)) {
                    reject(row, "non-positive spot");
                    continue;
                }
                const auto [it, inserted] = spots.emplace(std::chrono::sys_days{trade_date},
                                                          SpotQuote{trade_date, spot});
                if (!inserted) {
                    throw DataError("duplicate spot row for " + format_iso_date(trade_date) +
                                    " at row " + std::to_string(row));
                }
                continue;
            }
            OptionQuote q;
            q.trade_date = trade_date;
            q.expiry = parse_iso_date(field(kExpiry));
            q.kind = kind == RowKind::call ? OptionKind::call : OptionKind::put;
            q.strike = text::parse_double(field(kStrike), "strike");
            q.bid = text::trim(field(kBid)).empty() ? 0.0 : text::parse_double(field(kBid), "bid");
            q.ask = text::trim(field(kAsk)).empty() ? 0.0 : text::parse_double(field(kAsk), "ask");
            q.last = text::trim(field(kLast)).empty() ? 0.0 : text::parse_double(field(kLast), "last");
            q.volume = text::parse_int(field(kVolume), "volume");
            q.open_interest = text::parse_int(field(kOpenInterest), "open_interest");
            if (auto why = validate(q)) {
                reject(row, *why);
                continue;
            }
            data.quotes.push_back(q);
        } catch (const ParseError& e) {
            if (config.strict) throw ParseError("row " + std::to_string(row) + ": " + e.what());
            data.rejects.push_back({row, std::string("malformed: ") + e.what()});
        }
    }

    for (const auto& [day, spot] : spots) data.spots.push_back(spot);
    for (const auto& q : data.quotes) {
        if (!spots.contains(std::chrono::sys_days{q.trade_date})) {
            throw DataError("missing spot row for trade date " + format_iso_date(q.trade_date));
        }
    }
    return data;
}

ChainData load_option_chain(const std::filesystem::path& path, const IngestConfig& config) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open chain file " + path.string());
    return read_option_chain(in, config);
}

void write_option_chain(std::ostream& out, const std::vector<OptionQuote>& quotes,
                        const std::vector<SpotQuote>& spots) {
    out << "trade_date,expiry,kind,strike,bid,ask,last,volume,open_interest\n";
    for (const auto& s : spots) {
        const auto d = format_iso_date(s.trade_date);
        out << d << ',' << d << ",spot,,,," << format_exact(s.spot) << ",,\n";
    }
    for (const auto& q : quotes) {
        out << format_iso_date(q.trade_date) << ',' << format_iso_date(q.expiry) << ','
            << to_string(q.kind) << ',' << format_exact(q.strike) << ',' << format_exact(q.bid)
            << ',' << format_exact(q.ask) << ',' << format_exact(q.last) << ',' << q.volume << ','
            << q.open_interest << '\n';
    }
}

void write_rejects(std::ostream& out, const std::vector<RejectedRow>& rejects) {
    out << "row,reason\n";
    for (const auto& r : rejects) {
        std::string reason = r.reason;
        if (reason.find_first_of(",\"") != std::string::npos) {
            std::string quoted = "\"";
            for (char c : reason) {
                if (c == '"') quoted += '"';
                quoted += c;
            }
            reason = quoted + '"';
        }
        out << r.row << ',' << reason << '\n';
    }
}

// ---------------------------------------------------------------------------
// Pairing

PairingResult pair_contracts(const std::vector<OptionQuote>& quotes, const SpotQuote& spot,
                             PriceRule rule) {
    if (!(spot.spot > 0.0)) throw DataError("spot must be positive");

    struct Legs {
        std::vector<const OptionQuote*> calls;
        std::vector<const OptionQuote*> puts;
    };
    std::map<std::pair<std::chrono::sys_days, double>, Legs> book;
    for (const auto& q : quotes) {
        if (q.trade_date != spot.trade_date) {
            throw DataError("quote trade date " + format_iso_date(q.trade_date) +
                            " differs from spot date " + format_iso_date(spot.trade_date));
        }
        auto& legs = book[{std::chrono::sys_days{q.expiry}, q.strike}];
        (q.kind == OptionKind::call ? legs.calls : legs.puts).push_back(&q);
    }

    PairingResult result;
    for (const auto& [key, legs] : book) {
        auto price_leg = [&](const std::vector<const OptionQuote*>& leg) -> std::optional<double> {
            if (leg.empty()) return std::nullopt;
            if (leg.size() > 1) {
                result.dropped_duplicate += leg.size();
                return std::nullopt;
            }
            if (days_between(spot.trade_date, leg.front()->expiry) <= 0) {
                ++result.dropped_expired;
                return std::nullopt;
            }
            auto price = usable_price(*leg.front(), rule);
            if (!price) ++result.dropped_unpriced;
            return price;
        };
        const auto call = price_leg(legs.calls);
        const auto put = price_leg(legs.puts);
        if (call && put) {
            const auto& q = *legs.calls.front();
            PutCallPair p;
            p.trade_date = spot.trade_date;
            p.expiry = q.expiry;
            p.strike = q.strike;
            p.call_price = *call;
            p.put_price = *put;
            p.spot = spot.spot;
            p.ttm_years = year_fraction(spot.trade_date, q.expiry);
            p.moneyness = q.strike / spot.spot;
            result.pairs.push_back(p);
        } else {
            result.dropped_unmatched += (call ? 1 : 0) + (put ? 1 : 0);
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Treasury par yields

const std::vector<double>& standard_tenors() {
    static const std::vector<double> tenors = {1.0 / 12, 2.0 / 12, 3.0 / 12, 4.0 / 12, 6.0 / 12,
                                               1.0,      2.0,      3.0,      5.0,      7.0,
                                               10.0,     20.0,     30.0};
    return tenors;
}

double parse_tenor_label(std::string_view label) {
    const auto s = text::to_lower(text::trim(label));
    const auto space = s.find(' ');
    if (space == std::string::npos) throw ParseError("invalid tenor label '" + std::string(label) + "'");
    const double n = text::parse_double(std::string_view(s).substr(0, space), "tenor");
    const auto unit = text::trim(std::string_view(s).substr(space + 1));
    if (!(n > 0.0)) throw ParseError("invalid tenor label '" + std::string(label) + "'");
    if (unit == "mo" || unit == "month" || unit == "months") return n / 12.0;
    if (unit == "yr" || unit == "year" || unit == "years") return n;
    if (unit == "wk" || unit == "week" || unit == "weeks") return n * 7.0 / kDaysPerYear;
    throw ParseError("invalid tenor label '" + std::string(label) + "'");
}

namespace {

std::string tenor_label(double maturity) {
    const double months = maturity * 12.0;
    if (maturity < 1.0 && std::abs(months - std::round(months)) < 1e-9) {
        return format_number(std::round(months)) + " Mo";
    }
    return format_number(maturity) + " Yr";
}

bool is_missing_cell(std::string_view cell) {
    const auto s = text::to_lower(text::trim(cell));
    return s.empty() || s == "n/a" || s == "na" || s == "nan";
}

}  // namespace

ParYieldData read_par_yields(std::istream& in) {
    ParYieldData data;
    std::string line;
    std::size_t row = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++row;
        if (text::trim(line).empty()) continue;
        header = text::split_csv(line);
        break;
    }
    if (header.empty()) {
        data.warnings.push_back("treasury file is empty");
        return data;
    }
    if (text::to_lower(text::trim(header.front())) != "date") {
        throw ParseError("treasury header must start with 'Date'");
    }
    std::vector<double> tenors;
    for (std::size_t i = 1; i < header.size(); ++i) {
        const double t = parse_tenor_label(header[i]);
        if (!tenors.empty() && t <= tenors.back()) {
            throw ParseError(t == tenors.back()
                                 ? "duplicate tenor column '" + std::string(text::trim(header[i])) + "'"
                                 : "non-monotone tenor header at '" +
                                       std::string(text::trim(header[i])) + "'");
        }
        tenors.push_back(t);
    }
    if (tenors.empty()) throw ParseError("treasury header has no tenor columns");

    const auto& standard = standard_tenors();
    const bool standard_header =
        tenors.size() == standard.size() &&
        std::equal(tenors.begin(), tenors.end(), standard.begin(),
                   [](double a, double b) { return std::abs(a - b) < 1e-12; });
    if (!standard_header) {
        data.warnings.push_back("treasury header differs from the standard 13-tenor set");
    }

    std::map<std::chrono::sys_days, ParYieldCurve> by_date;
    while (std::getline(in, line)) {
        ++row;
        if (text::trim(line).empty()) continue;
        const auto cells = text::split_csv(line);
        if (cells.size() > header.size()) {
            throw ParseError("row " + std::to_string(row) + ": too many cells");
        }
        const auto date_text = text::trim(cells.front());
        ParYieldCurve curve;
        curve.curve_date = date_text.find('/') != std::string_view::npos ? parse_us_date(date_text)
                                                                         : parse_iso_date(date_text);
        curve.complete = standard_header && cells.size() == header.size();
        for (std::size_t i = 1; i < cells.size(); ++i) {
            if (is_missing_cell(cells[i])) {
                curve.complete = false;
                continue;
            }
            curve.maturities.push_back(tenors[i - 1]);
            curve.rates.push_back(text::parse_double(cells[i], "par yield") / 100.0);
        }
        if (!curve.complete) {
            data.warnings.push_back("curve " + format_iso_date(curve.curve_date) + " is incomplete");
        }
        const auto key = std::chrono::sys_days{curve.curve_date};
        if (!by_date.emplace(key, std::move(curve)).second) {
            throw ParseError("row " + std::to_string(row) + ": duplicate curve date");
        }
    }
    if (by_date.empty()) data.warnings.push_back("treasury file has no data rows");
    for (auto& [day, curve] : by_date) data.curves.push_back(std::move(curve));
    return data;
}

ParYieldData load_par_yields(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open treasury file " + path.string());
    return read_par_yields(in);
}

void write_par_yields(std::ostream& out, const std::vector<ParYieldCurve>& curves) {
    std::vector<double> tenors;
    for (const auto& c : curves) {
        for (double m : c.maturities) {
            if (std::find(tenors.begin(), tenors.end(), m) == tenors.end()) tenors.push_back(m);
        }
    }
    std::sort(tenors.begin(), tenors.end());
    out << "Date";
    for (double t : tenors) out << ',' << tenor_label(t);
    out << '\n';
    // Treasury downloads list the newest date first.
    for (auto it = curves.rbegin(); it != curves.rend(); ++it) {
        out << format_us_date(it->curve_date);
        for (double t : tenors) {
            out << ',';
            const auto pos = std::find(it->maturities.begin(), it->maturities.end(), t);
            if (pos != it->maturities.end()) {
                out << format_number(it->rates[static_cast<std::size_t>(pos - it->maturities.begin())] * 100.0);
            }
        }
        out << '\n';
    }
}

ParYieldCurve fill_missing_date(const std::vector<ParYieldCurve>& curves, const Date& target) {
    const ParYieldCurve* before = nullptr;
    const ParYieldCurve* after = nullptr;
    for (const auto& c : curves) {
        const long gap = days_between(target, c.curve_date);
        if (gap == 0) throw DataError("curve for " + format_iso_date(target) + " already exists");
        if (gap < 0 && (!before || c.curve_date > before->curve_date)) before = &c;
        if (gap > 0 && (!after || c.curve_date < after->curve_date)) after = &c;
    }
    if (!before || !after) {
        throw DataError("cannot fill " + format_iso_date(target) + ": no curve on " +
                        (before ? "the following" : "the preceding") + " side");
    }
    if (!before->complete || !after->complete) {
        throw DataError("cannot fill " + format_iso_date(target) + ": neighbor curve incomplete");
    }
    if (before->maturities != after->maturities) {
        throw DataError("cannot fill " + format_iso_date(target) + ": neighbor tenors differ");
    }
    ParYieldCurve filled;
    filled.curve_date = target;
    filled.maturities = before->maturities;
    filled.rates.resize(before->rates.size());
    for (std::size_t i = 0; i < filled.rates.size(); ++i) {
        filled.rates[i] = 0.5 * (before->rates[i] + after->rates[i]);
    }
    return filled;
}

}  // namespace parity
