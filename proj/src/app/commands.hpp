#pragma once

#include "parity/aggregation.hpp"
#include "parity/market_data.hpp"
#include "parity/parity_core.hpp"
#include "parity/synthetic.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace parity::app {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,  ///< I/O, parse or configuration error
    kNoData = 2,   ///< nothing usable in the input (no valid pairs, no ATM contracts)
};

enum class OutputFormat { csv, json, svg };
OutputFormat parse_format(std::string_view text);
std::string_view to_string(OutputFormat f);

enum class GroupBy { maturity, moneyness };
GroupBy parse_group_by(std::string_view text);
std::string_view to_string(GroupBy g);

/// Settings shared by the chain-processing commands.
struct RunConfig {
    std::vector<std::filesystem::path> chain_paths;
    std::filesystem::path treasury_path;
    PriceRule price_rule = PriceRule::mid;
    ClusterRule cluster;
    std::string day_count = "ACT/365";
    double atm_tolerance = kDefaultAtmTolerance;
    std::size_t bin_count = kDefaultBinCount;
    std::vector<AggregationMethod> methods{AggregationMethod::median};
    GroupBy group_by = GroupBy::maturity;
    std::size_t curve_samples = 361;  ///< market curve export grid
    std::filesystem::path out_dir = ".";
    std::set<OutputFormat> formats{OutputFormat::csv};
    bool strict = false;

    [[nodiscard]] bool wants(OutputFormat f) const { return formats.contains(f); }
};

/// Throws parity::Error when a RunConfig cannot be used.
void validate(const RunConfig& config);

/// Output directory from the environment (PARITY_CURVE_OUT), or ".".
std::filesystem::path default_out_dir();

struct SynthConfig {
    synthetic::ChainSpec spec;
    std::filesystem::path out_dir = ".";
    std::string chain_file = "chain.csv";
    /// Also write a flat treasury par curve at the chain rate.
    bool write_treasury = false;
    std::string treasury_file = "treasury.csv";
};

struct McBondConfig {
    synthetic::ShortRateModel model = synthetic::ConstantRate{0.05};
    double t = 0.0;
    double maturity = 1.0;
    synthetic::McConfig mc;
    std::filesystem::path out_dir = ".";
};

// Each command writes its outputs plus manifest.json into the output
// directory and returns an ExitCode. Messages go to `log`. With several
// chain files, each file gets its own subdirectory named after its stem.
int cmd_surface(const RunConfig& config, std::ostream& log);
int cmd_compare(const RunConfig& config, std::ostream& log);
int cmd_stats(const RunConfig& config, std::ostream& log);
int cmd_synth(const SynthConfig& config, std::ostream& log);
/// Also prints the result JSON to `out`.
int cmd_mc_bond(const McBondConfig& config, std::ostream& out, std::ostream& log);

}  // namespace parity::app
