// parity-curve: put-call parity implied yield curves from option chains.

#include "commands.hpp"

#include "parity/date.hpp"
#include "parity/error.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>

using namespace parity;
using namespace parity::app;

namespace {

struct RunFlags {
    std::vector<std::string> chains;
    std::string treasury;
    std::string price_rule = "mid";
    std::string cluster = "gap";
    std::vector<std::string> methods{"median"};
    std::vector<std::string> formats{"csv"};
    std::string group_by = "maturity";
    std::string out_dir;
    RunConfig config;
};

void add_output_flags(CLI::App* cmd, std::string& out_dir, std::vector<std::string>& formats) {
    cmd->add_option("--out-dir", out_dir, "Output directory (default: $PARITY_CURVE_OUT or .)");
    cmd->add_option("--format", formats, "Output formats: csv, json, svg (comma separated)")->delimiter(',');
}

void add_run_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("chains", f.chains, "Option chain CSV file(s), one trade date each")->required();
    cmd->add_option("--price-rule", f.price_rule, "Usable price: mid|last")->capture_default_str();
    cmd->add_option("--cluster", f.cluster, "Maturity split: gap|fixed:<days>")->capture_default_str();
    cmd->add_flag("--strict", f.config.strict, "Fail on the first malformed row");
    add_output_flags(cmd, f.out_dir, f.formats);
}

RunConfig resolve(RunFlags& f) {
    RunConfig c = f.config;
    for (const auto& p : f.chains) c.chain_paths.emplace_back(p);
    c.treasury_path = f.treasury;
    c.price_rule = parse_price_rule(f.price_rule);
    c.cluster = parse_cluster_rule(f.cluster);
    c.methods.clear();
    for (const auto& m : f.methods) c.methods.push_back(parse_method(m));
    c.formats.clear();
    for (const auto& fm : f.formats) c.formats.insert(parse_format(fm));
    c.group_by = parse_group_by(f.group_by);
    c.out_dir = f.out_dir.empty() ? default_out_dir() : std::filesystem::path(f.out_dir);
    return c;
}

synthetic::StaleProfile parse_profile(const std::string& s) {
    if (s == "uniform") return synthetic::StaleProfile::uniform;
    if (s == "distance") return synthetic::StaleProfile::distance;
    throw ParseError("unknown stale profile '" + s + "', expected uniform|distance");
}

OptionKind parse_leg(const std::string& s) {
    if (s == "put") return OptionKind::put;
    if (s == "call") return OptionKind::call;
    throw ParseError("unknown stale leg '" + s + "', expected put|call");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Put-call parity implied yield curves from option chains"};
    app.set_version_flag("--version", PARITY_CURVE_VERSION);
    app.require_subcommand(1);

    RunFlags surface_flags;
    auto* surface = app.add_subcommand("surface", "Implied yield surface, rejects and diagnostics");
    add_run_flags(surface, surface_flags);

    RunFlags compare_flags;
    auto* compare = app.add_subcommand("compare", "Aggregated implied curves against the treasury par curve");
    add_run_flags(compare, compare_flags);
    compare->add_option("--treasury", compare_flags.treasury, "Treasury par yield CSV")->required();
    compare->add_option("--method", compare_flags.methods, "Aggregation: median, atm (comma separated)")
        ->delimiter(',');
    compare->add_option("--atm-tol", compare_flags.config.atm_tolerance, "Max |K/S - 1| for the ATM strike")
        ->capture_default_str();
    compare->add_option("--curve-samples", compare_flags.config.curve_samples, "Market curve export grid size")
        ->capture_default_str();

    RunFlags stats_flags;
    auto* stats = app.add_subcommand("stats", "Box-whisker summaries of implied yields");
    add_run_flags(stats, stats_flags);
    stats->add_option("--groupby", stats_flags.group_by, "maturity|moneyness")->capture_default_str();
    stats->add_option("--bins", stats_flags.config.bin_count, "Moneyness bin count")->capture_default_str();

    SynthConfig synth_config;
    auto& spec = synth_config.spec;
    spec.rate = 0.03;
    spec.maturity_days = {7, 14, 30, 60, 91, 182, 365, 730, 1095, 1825};
    for (int i = 0; i <= 12; ++i) spec.moneyness_grid.push_back(0.7 + 0.05 * i);
    std::string synth_date = format_iso_date(spec.trade_date);
    std::string synth_out, stale_profile = "uniform", stale_leg = "put";
    std::vector<std::string> synth_formats;
    auto* synth = app.add_subcommand("synth", "Generate a Black-Scholes option chain");
    synth->add_option("--trade-date", synth_date, "Trade date (YYYY-MM-DD)")->capture_default_str();
    synth->add_option("--spot", spec.equity.spot)->capture_default_str();
    synth->add_option("--vol", spec.equity.volatility)->capture_default_str();
    synth->add_option("--drift", spec.equity.drift, "Real-world drift (reported only)")->capture_default_str();
    synth->add_option("--rate", spec.rate, "Constant short rate")->capture_default_str();
    synth->add_option("--maturities", spec.maturity_days, "Days to expiry (comma separated)")->delimiter(',');
    synth->add_option("--moneyness", spec.moneyness_grid, "Strike/spot grid (comma separated)")->delimiter(',');
    synth->add_option("--half-spread", spec.noise.half_spread)->capture_default_str();
    synth->add_option("--stale-fraction", spec.noise.stale_fraction)->capture_default_str();
    synth->add_option("--stale-shift", spec.noise.stale_shift)->capture_default_str();
    synth->add_option("--stale-profile", stale_profile, "uniform|distance")->capture_default_str();
    synth->add_option("--stale-leg", stale_leg, "put|call")->capture_default_str();
    synth->add_option("--seed", spec.seed)->capture_default_str();
    synth->add_option("--chain-out", synth_config.chain_file, "Chain file name")->capture_default_str();
    synth->add_flag("--treasury-out", synth_config.write_treasury, "Also write a flat treasury par file");
    add_output_flags(synth, synth_out, synth_formats);

    McBondConfig mc_config;
    std::string model = "constant";
    double rate = 0.05;
    synthetic::VasicekRate vasicek;
    std::string mc_out;
    std::vector<std::string> mc_formats;
    auto* mc = app.add_subcommand("mc-bond", "Monte-Carlo zero-coupon bond price");
    mc->add_option("--model", model, "constant|vasicek")->capture_default_str();
    mc->add_option("--rate", rate, "Constant short rate")->capture_default_str();
    mc->add_option("--speed", vasicek.speed)->capture_default_str();
    mc->add_option("--level", vasicek.level)->capture_default_str();
    mc->add_option("--sigma", vasicek.volatility)->capture_default_str();
    mc->add_option("--r0", vasicek.initial)->capture_default_str();
    mc->add_option("--t", mc_config.t, "Valuation time (years)")->capture_default_str();
    mc->add_option("--maturity", mc_config.maturity, "Bond maturity (years)")->capture_default_str();
    mc->add_option("--paths", mc_config.mc.paths)->capture_default_str();
    mc->add_option("--steps", mc_config.mc.steps)->capture_default_str();
    mc->add_option("--seed", mc_config.mc.seed)->capture_default_str();
    mc->add_option("--threads", mc_config.mc.threads, "0 = all cores")->capture_default_str();
    add_output_flags(mc, mc_out, mc_formats);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*surface) return cmd_surface(resolve(surface_flags), std::cerr);
        if (*compare) return cmd_compare(resolve(compare_flags), std::cerr);
        if (*stats) return cmd_stats(resolve(stats_flags), std::cerr);
        if (*synth) {
            spec.trade_date = parse_iso_date(synth_date);
            spec.noise.profile = parse_profile(stale_profile);
            spec.noise.stale_leg = parse_leg(stale_leg);
            synth_config.out_dir = synth_out.empty() ? default_out_dir() : std::filesystem::path(synth_out);
            return cmd_synth(synth_config, std::cerr);
        }
        if (*mc) {
            if (model == "constant") {
                mc_config.model = synthetic::ConstantRate{rate};
            } else if (model == "vasicek") {
                mc_config.model = vasicek;
            } else {
                throw ParseError("unknown model '" + model + "', expected constant|vasicek");
            }
            mc_config.out_dir = mc_out.empty() ? default_out_dir() : std::filesystem::path(mc_out);
            return cmd_mc_bond(mc_config, std::cout, std::cerr);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
