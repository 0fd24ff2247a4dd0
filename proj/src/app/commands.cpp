#include "commands.hpp"

#include "output.hpp"
#include "svg.hpp"

#include "parity/curves.hpp"
#include "parity/error.hpp"
#include "parity/format.hpp"
#include "parity/stats.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#ifndef PARITY_CURVE_VERSION
#define PARITY_CURVE_VERSION "0.0.0"
#endif

namespace parity::app {

namespace fs = std::filesystem;

OutputFormat parse_format(std::string_view text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    if (text == "svg") return OutputFormat::svg;
    throw ParseError("unknown format '" + std::string(text) + "', expected csv|json|svg");
}

std::string_view to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::csv: return "csv";
        case OutputFormat::json: return "json";
        case OutputFormat::svg: return "svg";
    }
    return "?";
}

GroupBy parse_group_by(std::string_view text) {
    if (text == "maturity") return GroupBy::maturity;
    if (text == "moneyness") return GroupBy::moneyness;
    throw ParseError("unknown grouping '" + std::string(text) + "', expected maturity|moneyness");
}

std::string_view to_string(GroupBy g) { return g == GroupBy::maturity ? "maturity" : "moneyness"; }

void validate(const RunConfig& config) {
    if (config.chain_paths.empty()) throw Error("no chain file given");
    if (config.formats.empty()) throw Error("at least one output format is required");
    if (config.methods.empty()) throw Error("at least one aggregation method is required");
    if (!(config.atm_tolerance >= 0.0)) throw Error("ATM tolerance must be non-negative");
    if (config.bin_count == 0) throw Error("bin count must be positive");
    if (config.curve_samples < 2) throw Error("curve samples must be at least 2");
    if (config.day_count != "ACT/365") throw Error("unsupported day count '" + config.day_count + "'");
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (!fs::is_directory(config.out_dir)) throw Error("output directory not writable: " + config.out_dir.string());
}

fs::path default_out_dir() {
    const char* env = std::getenv("PARITY_CURVE_OUT");
    return env && *env ? fs::path(env) : fs::path(".");
}

namespace {

/// Input holds nothing to work with; maps to kNoData.
struct NoData : Error {
    using Error::Error;
};

Json manifest_header(std::string_view command) {
    Json j;
    j["tool"] = "parity-curve";
    j["version"] = PARITY_CURVE_VERSION;
    j["command"] = command;
    return j;
}

Json config_json(const RunConfig& c) {
    Json j;
    j["price_rule"] = to_string(c.price_rule);
    j["cluster"] = to_string(c.cluster);
    j["day_count"] = c.day_count;
    j["atm_tolerance"] = json_number(c.atm_tolerance);
    j["bins"] = c.bin_count;
    Json methods = Json::array();
    for (auto m : c.methods) methods.push_back(to_string(m));
    j["methods"] = methods;
    j["group_by"] = to_string(c.group_by);
    j["curve_samples"] = c.curve_samples;
    Json formats = Json::array();
    for (auto f : c.formats) formats.push_back(to_string(f));
    j["formats"] = formats;
    j["strict"] = c.strict;
    return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void finish_manifest(OutputSet& out, Json manifest) {
    manifest["outputs"] = out.files();
    out.write("manifest.json", dump(manifest));
}

// ---------------------------------------------------------------------------
// Chain pipeline shared by surface, compare and stats

struct SurfaceRun {
    ChainData chain;
    SpotQuote spot;
    PairingResult pairing;
    SurfaceBuild build;
};

SurfaceRun run_pipeline(const fs::path& path, const RunConfig& config) {
    if (!fs::exists(path)) throw Error("cannot open chain file " + path.string());
    SurfaceRun run;
    if (fs::file_size(path) == 0) throw NoData("no valid pairs");
    run.chain = load_option_chain(path, {config.strict});
    if (run.chain.quotes.empty()) throw NoData("no valid pairs");
    if (run.chain.spots.size() != 1) {
        throw Error("chain file spans " + std::to_string(run.chain.spots.size()) +
                    " trade dates; split it into one file per date");
    }
    run.spot = run.chain.spots.front();
    run.pairing = pair_contracts(run.chain.quotes, run.spot, config.price_rule);
    if (run.pairing.pairs.empty()) throw NoData("no valid pairs");
    try {
        run.build = build_surface(run.pairing.pairs, config.cluster);
    } catch (const DataError&) {
        throw NoData("no valid pairs");
    }
    return run;
}

Json counts_json(const SurfaceRun& run) {
    const auto& s = run.build.surface;
    const auto short_points = static_cast<std::size_t>(std::count_if(
        s.points.begin(), s.points.end(), [&](const auto& p) { return s.cluster_of(p) == Cluster::short_term; }));
    Json j;
    j["quotes"] = run.chain.quotes.size();
    j["rejected_rows"] = run.chain.rejects.size();
    j["pairs"] = run.pairing.pairs.size();
    j["dropped_unmatched"] = run.pairing.dropped_unmatched;
    j["dropped_unpriced"] = run.pairing.dropped_unpriced;
    j["dropped_duplicate"] = run.pairing.dropped_duplicate;
    j["dropped_expired"] = run.pairing.dropped_expired;
    j["invalid_discount_factor"] = run.build.diagnostics.size();
    j["surface_points"] = s.points.size();
    j["short_term_points"] = short_points;
    j["long_term_points"] = s.points.size() - short_points;
    return j;
}

Json surface_json(const SurfaceRun& run) {
    const auto& s = run.build.surface;
    Json j;
    j["trade_date"] = format_iso_date(s.trade_date);
    j["spot"] = json_number(s.spot);
    j["cluster_boundary"] = json_number(s.cluster_boundary);
    j["cluster_boundary_days"] = json_number(s.cluster_boundary * kDaysPerYear);
    return j;
}

Json base_manifest(std::string_view command, const fs::path& chain, const RunConfig& config,
                   const SurfaceRun& run) {
    Json m = manifest_header(command);
    m["inputs"] = Json::array({describe_input("chain", chain)});
    m["config"] = config_json(config);
    m["surface"] = surface_json(run);
    m["counts"] = counts_json(run);
    Json warnings = Json::array();
    if (run.build.cluster_warning) warnings.push_back(*run.build.cluster_warning);
    m["warnings"] = warnings;
    return m;
}

void report_run(const SurfaceRun& run, std::ostream& log) {
    if (!run.chain.rejects.empty()) log << "note: " << run.chain.rejects.size() << " rejected rows\n";
    if (run.build.cluster_warning) log << "warning: " << *run.build.cluster_warning << '\n';
}

using FileJob = std::function<void(const fs::path& chain, const fs::path& dir, std::ostream& log)>;

/// Runs `job` once per chain file, concurrently when there are several.
/// Returns the worst exit code.
int for_each_chain(const RunConfig& config, std::ostream& log, const FileJob& job) {
    try {
        validate(config);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kFailure;
    }
    const auto n = config.chain_paths.size();
    std::vector<std::ostringstream> logs(n);
    std::vector<int> codes(n, kOk);
    auto run_one = [&](std::size_t i) {
        const auto& path = config.chain_paths[i];
        const fs::path dir = n == 1 ? config.out_dir : config.out_dir / path.stem();
        const std::string prefix = n == 1 ? "" : path.string() + ": ";
        try {
            fs::create_directories(dir);
            job(path, dir, logs[i]);
        } catch (const NoData& e) {
            logs[i] << "error: " << prefix << e.what() << '\n';
            codes[i] = kNoData;
        } catch (const std::exception& e) {
            logs[i] << "error: " << prefix << e.what() << '\n';
            codes[i] = kFailure;
        }
    };
    if (n == 1) {
        run_one(0);
    } else {
        std::vector<std::jthread> workers;
        workers.reserve(n);
        for (std::size_t i = 0; i < n; ++i) workers.emplace_back(run_one, i);
    }
    for (auto& l : logs) log << l.str();
    return *std::max_element(codes.begin(), codes.end());
}

// ---------------------------------------------------------------------------
// compare helpers

struct TreasuryChoice {
    ParYieldCurve curve;
    bool gap_filled = false;
    std::vector<std::string> warnings;
};

TreasuryChoice choose_treasury(const fs::path& path, const Date& trade_date) {
    if (path.empty()) throw Error("compare needs a treasury file (--treasury)");
    auto data = load_par_yields(path);
    TreasuryChoice choice;
    choice.warnings = data.warnings;
    const auto it = std::find_if(data.curves.begin(), data.curves.end(),
                                 [&](const ParYieldCurve& c) { return c.curve_date == trade_date; });
    if (it != data.curves.end()) {
        choice.curve = *it;
        return choice;
    }
    try {
        choice.curve = fill_missing_date(data.curves, trade_date);
    } catch (const DataError& e) {
        throw Error("no treasury curve for " + format_iso_date(trade_date) + ": " + e.what());
    }
    choice.gap_filled = true;
    return choice;
}

std::vector<double> grid(double from, double to, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = n == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

std::string compare_svg(const AggregatedCurve& agg, const InterpolatedCurve& market, Cluster cluster) {
    Series implied{"implied (" + std::string(to_string(agg.method)) + ")", {}, {}};
    for (const auto& p : agg.points) {
        implied.x.push_back(p.ttm_years);
        implied.y.push_back(p.value);
    }
    Series par{"treasury par (PCHIP)", {}, {}, true};
    par.x = grid(agg.points.front().ttm_years, agg.points.back().ttm_years, 200);
    for (double t : par.x) par.y.push_back(market_rate(market, t));
    const PlotLabels labels{"Implied vs treasury yield, " + std::string(to_string(cluster)) + "-term, " +
                                format_iso_date(agg.trade_date),
                            "time to maturity (years)", "yield"};
    return line_plot_svg(labels, {implied, par});
}

Json curve_json(const AggregatedCurve& agg, const DislocationSeries& d) {
    Json points = Json::array();
    for (std::size_t i = 0; i < agg.points.size(); ++i) {
        Json p;
        p["ttm_years"] = json_number(agg.points[i].ttm_years);
        p["value"] = json_number(agg.points[i].value);
        p["support"] = agg.points[i].support;
        p["delta"] = json_number(d.points[i].delta);
        points.push_back(p);
    }
    return points;
}

// ---------------------------------------------------------------------------
// stats helpers

std::vector<BoxWhiskerSummary> summaries_for(const ImpliedYieldSurface& s, const RunConfig& config) {
    if (config.group_by == GroupBy::maturity) return summarize_by_maturity(s);
    return summarize_by_moneyness(bin_by_moneyness(s, config.bin_count));
}

Json summaries_json(const std::vector<BoxWhiskerSummary>& summaries) {
    Json rows = Json::array();
    for (const auto& b : summaries) {
        Json r;
        r["group"] = json_number(b.key);
        r["count"] = b.count;
        r["q1"] = json_number(b.q1);
        r["median"] = json_number(b.median);
        r["q3"] = json_number(b.q3);
        r["lo_whisker"] = json_number(b.lower_whisker);
        r["hi_whisker"] = json_number(b.upper_whisker);
        Json outliers = Json::array();
        for (double o : b.outliers) outliers.push_back(json_number(o));
        r["outliers"] = outliers;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_surface(const RunConfig& config, std::ostream& log) {
    return for_each_chain(config, log, [&](const fs::path& chain, const fs::path& dir, std::ostream& flog) {
        const auto run = run_pipeline(chain, config);
        report_run(run, flog);
        OutputSet out(dir);
        const auto& s = run.build.surface;
        if (config.wants(OutputFormat::csv)) {
            out.write("surface.csv", [&](std::ostream& o) { write_surface(o, s); });
            out.write("rejects.csv", [&](std::ostream& o) { write_rejects(o, run.chain.rejects); });
            out.write("diagnostics.csv", [&](std::ostream& o) { write_diagnostics(o, run.build.diagnostics); });
        }
        if (config.wants(OutputFormat::json)) {
            Json j = surface_json(run);
            Json points = Json::array();
            for (const auto& p : s.points) {
                Json row;
                row["ttm_years"] = json_number(p.ttm_years);
                row["strike"] = json_number(p.strike);
                row["moneyness"] = json_number(p.moneyness);
                row["discount_factor"] = json_number(p.discount_factor);
                row["implied_yield"] = json_number(p.implied_yield);
                row["sign_class"] = to_string(p.sign_class);
                row["cluster"] = to_string(s.cluster_of(p));
                points.push_back(row);
            }
            j["points"] = points;
            out.write("surface.json", dump(j));
        }
        if (config.wants(OutputFormat::svg)) {
            Series pts{"implied yield", {}, {}, false, true};
            for (const auto& p : s.points) {
                pts.x.push_back(p.ttm_years);
                pts.y.push_back(p.implied_yield);
            }
            out.write("surface.svg",
                      line_plot_svg({"Implied yields, " + format_iso_date(s.trade_date), "time to maturity (years)",
                                     "implied yield"},
                                    {pts}));
        }
        finish_manifest(out, base_manifest("surface", chain, config, run));
    });
}

int cmd_compare(const RunConfig& config, std::ostream& log) {
    return for_each_chain(config, log, [&](const fs::path& chain, const fs::path& dir, std::ostream& flog) {
        const auto run = run_pipeline(chain, config);
        report_run(run, flog);
        const auto& surface = run.build.surface;
        const auto treasury = choose_treasury(config.treasury_path, surface.trade_date);
        for (const auto& w : treasury.warnings) flog << "warning: " << w << '\n';
        if (treasury.gap_filled) {
            flog << "note: treasury curve for " << format_iso_date(surface.trade_date)
                 << " filled from neighboring dates\n";
        }
        const auto market = fit_pchip(treasury.curve);

        OutputSet out(dir);
        Json manifest = base_manifest("compare", chain, config, run);
        manifest["inputs"].push_back(describe_input("treasury", config.treasury_path));
        Json tj;
        tj["curve_date"] = format_iso_date(treasury.curve.curve_date);
        tj["gap_filled"] = treasury.gap_filled;
        tj["complete"] = treasury.curve.complete;
        tj["tenors"] = treasury.curve.maturities.size();
        manifest["treasury"] = tj;
        for (const auto& w : treasury.warnings) manifest["warnings"].push_back(w);

        const double max_ttm = std::max(30.0, surface.points.back().ttm_years);
        if (config.wants(OutputFormat::csv)) {
            out.write("market_curve.csv",
                      [&](std::ostream& o) { write_curve(o, market, 0.0, max_ttm, config.curve_samples); });
        }

        Json results;
        Json omitted;
        std::size_t curves_written = 0;
        for (Cluster cluster : {Cluster::short_term, Cluster::long_term}) {
            const std::string cname(to_string(cluster));
            const auto sub = surface.subset(cluster);
            if (sub.points.empty()) {
                flog << "note: no " << cname << "-term points\n";
                continue;
            }
            for (AggregationMethod method : config.methods) {
                const std::string mname(to_string(method));
                const std::string suffix = mname + "_" + cname;
                AggregatedCurve agg;
                if (method == AggregationMethod::median) {
                    agg = median_curve(sub);
                } else {
                    try {
                        auto atm = atm_curve(sub, config.atm_tolerance);
                        agg = std::move(atm.curve);
                        omitted[cname] = atm.omitted;
                    } catch (const DataError& e) {
                        omitted[cname] = median_curve(sub).points.size();
                        flog << "warning: " << cname << "-term: " << e.what() << '\n';
                        continue;
                    }
                }
                const auto delta = dislocation(agg, market);
                if (config.wants(OutputFormat::csv)) {
                    out.write("implied_" + suffix + ".csv", [&](std::ostream& o) { write_aggregated(o, agg); });
                    out.write("dislocation_" + suffix + ".csv", [&](std::ostream& o) { write_dislocation(o, delta); });
                }
                if (config.wants(OutputFormat::svg)) {
                    out.write("compare_" + suffix + ".svg", compare_svg(agg, market, cluster));
                }
                results[cname][mname] = curve_json(agg, delta);
                ++curves_written;
            }
        }
        if (!omitted.is_null()) {
            manifest["counts"]["atm_omitted_maturities"] = omitted;
            for (auto it = omitted.begin(); it != omitted.end(); ++it) {
                if (it.value().get<std::size_t>() > 0) {
                    flog << "note: ATM omitted " << it.value().get<std::size_t>() << ' ' << it.key()
                         << "-term maturities (tolerance " << format_number(config.atm_tolerance) << ")\n";
                }
            }
        }
        if (curves_written == 0) throw NoData("no ATM contracts within tolerance");
        if (config.wants(OutputFormat::json)) {
            Json j;
            j["trade_date"] = format_iso_date(surface.trade_date);
            j["treasury_date"] = format_iso_date(treasury.curve.curve_date);
            j["curves"] = results;
            out.write("compare.json", dump(j));
        }
        finish_manifest(out, std::move(manifest));
    });
}

int cmd_stats(const RunConfig& config, std::ostream& log) {
    return for_each_chain(config, log, [&](const fs::path& chain, const fs::path& dir, std::ostream& flog) {
        const auto run = run_pipeline(chain, config);
        report_run(run, flog);
        const auto& surface = run.build.surface;
        const std::string group(to_string(config.group_by));

        OutputSet out(dir);
        Json manifest = base_manifest("stats", chain, config, run);
        Json groups;
        Json tables;
        const std::pair<std::string, std::optional<Cluster>> scopes[] = {
            {"all", std::nullopt}, {"short", Cluster::short_term}, {"long", Cluster::long_term}};
        for (const auto& [scope, cluster] : scopes) {
            const auto sub = cluster ? surface.subset(*cluster) : surface;
            if (sub.points.empty()) continue;
            const auto summaries = summaries_for(sub, config);
            groups[scope] = summaries.size();
            const std::string stem = "stats_" + group + "_" + scope;
            if (config.wants(OutputFormat::csv)) {
                out.write(stem + ".csv", [&](std::ostream& o) { write_summaries(o, summaries); });
                out.write(stem + "_outliers.csv", [&](std::ostream& o) { write_outliers(o, summaries); });
            }
            if (config.wants(OutputFormat::svg)) {
                const PlotLabels labels{"Implied yield by " + group + " (" + scope + "), " +
                                            format_iso_date(surface.trade_date),
                                        config.group_by == GroupBy::maturity ? "time to maturity (years)"
                                                                             : "moneyness K/S",
                                        "implied yield"};
                out.write(stem + ".svg", box_plot_svg(labels, summaries));
            }
            tables[scope] = summaries_json(summaries);
        }
        manifest["counts"]["groups"] = groups;
        if (config.wants(OutputFormat::json)) {
            Json j;
            j["trade_date"] = format_iso_date(surface.trade_date);
            j["group_by"] = group;
            j["summaries"] = tables;
            out.write("stats_" + group + ".json", dump(j));
        }
        finish_manifest(out, std::move(manifest));
    });
}

int cmd_synth(const SynthConfig& config, std::ostream& log) {
    try {
        const auto& spec = config.spec;
        const auto chain = synthetic::generate_chain(spec);
        fs::create_directories(config.out_dir);
        OutputSet out(config.out_dir);
        out.write(config.chain_file,
                  [&](std::ostream& o) { write_option_chain(o, chain.quotes, {chain.spot}); });
        if (config.write_treasury) {
            out.write(config.treasury_file, [&](std::ostream& o) {
                write_par_yields(o, {synthetic::flat_par_curve(spec.trade_date, spec.rate)});
            });
        }

        Json m = manifest_header("synth");
        m["inputs"] = Json::array();
        Json c;
        c["trade_date"] = format_iso_date(spec.trade_date);
        c["spot"] = json_number(spec.equity.spot);
        c["volatility"] = json_number(spec.equity.volatility);
        c["drift"] = json_number(spec.equity.drift);
        c["rate"] = json_number(spec.rate);
        c["maturity_days"] = spec.maturity_days;
        Json grid_json = Json::array();
        for (double g : spec.moneyness_grid) grid_json.push_back(json_number(g));
        c["moneyness"] = grid_json;
        c["half_spread"] = json_number(spec.noise.half_spread);
        c["stale_fraction"] = json_number(spec.noise.stale_fraction);
        c["stale_shift"] = json_number(spec.noise.stale_shift);
        c["stale_profile"] = spec.noise.profile == synthetic::StaleProfile::uniform ? "uniform" : "distance";
        c["stale_leg"] = to_string(spec.noise.stale_leg);
        c["seed"] = spec.seed;
        m["config"] = c;
        Json counts;
        counts["quotes"] = chain.quotes.size();
        counts["stale_quotes"] = chain.stale_count;
        m["counts"] = counts;
        m["market_price_of_risk"] = json_number(spec.equity.market_price_of_risk(spec.rate));
        finish_manifest(out, std::move(m));
        return kOk;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kFailure;
    }
}

int cmd_mc_bond(const McBondConfig& config, std::ostream& out_stream, std::ostream& log) {
    try {
        const auto r = synthetic::mc_zero_bond(config.model, config.t, config.maturity, config.mc);
        Json result;
        result["price"] = json_number(r.price);
        result["stderr"] = json_number(r.standard_error);
        result["paths"] = r.paths;
        result["steps"] = r.steps;
        result["seed"] = r.seed;

        fs::create_directories(config.out_dir);
        OutputSet out(config.out_dir);
        out.write("mc_bond.json", dump(result));

        Json m = manifest_header("mc-bond");
        m["inputs"] = Json::array();
        Json c;
        std::visit(
            [&](const auto& model) {
                using T = std::decay_t<decltype(model)>;
                if constexpr (std::is_same_v<T, synthetic::ConstantRate>) {
                    c["model"] = "constant";
                    c["rate"] = json_number(model.rate);
                } else {
                    c["model"] = "vasicek";
                    c["speed"] = json_number(model.speed);
                    c["level"] = json_number(model.level);
                    c["volatility"] = json_number(model.volatility);
                    c["initial"] = json_number(model.initial);
                }
            },
            config.model);
        c["t"] = json_number(config.t);
        c["maturity"] = json_number(config.maturity);
        c["paths"] = config.mc.paths;
        c["steps"] = config.mc.steps;
        c["seed"] = config.mc.seed;
        m["config"] = c;
        finish_manifest(out, std::move(m));

        out_stream << result.dump() << '\n';
        return kOk;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace parity::app
