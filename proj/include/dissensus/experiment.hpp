#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dissensus/io.hpp"
#include "dissensus/netgen.hpp"

namespace dissensus {

/**
 * A grid of experimental settings. Exactly one of `sbm` and `files` is set.
 *
 * An empty grid means "keep the value of the source"; with a file source the
 * opinion and susceptibility grids must stay empty because both come from disk.
 * Every grid point is run `repeats` times with seeds seed, seed + 1, ...
 */
struct ExperimentSpec {
    std::optional<SbmConfig> sbm;
    std::optional<io::NetworkFiles> files;
    SusceptibilityMode susceptibility = SusceptibilityMode::Beta;
    std::vector<double> epsilon_grid;
    std::vector<BetaParams> lambda_beta_grid;
    /// Each entry holds one Beta per community.
    std::vector<std::vector<BetaParams>> opinion_beta_grid;
    std::size_t repeats = 1;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir;
    /// 0 picks the hardware concurrency.
    unsigned threads = 0;

    void validate() const;
    /// Number of distinct settings (seeds excluded).
    std::size_t gridSize() const;
};

struct TableRow {
    std::size_t point = 0;
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    std::optional<BetaParams> lambda;
    std::vector<BetaParams> opinion;
    double innate = 0.0;
    double basic = 0.0;
    double extended = 0.0;
    double manipulated = 0.0;
    std::optional<std::string> bestNode;
    /// Count of repulsive edges.
    std::size_t negativeEdges = 0;
    /// "ok", or the solver error that stopped this row.
    std::string status = "ok";

    bool ok() const noexcept { return status == "ok"; }
};

/// Runs every (point, seed) pair. Solver failures are recorded in the row; other errors propagate.
std::vector<TableRow> runTable(const ExperimentSpec& spec);

/// Disruptions of one network: innate, basic, extended and best single-node manipulation.
TableRow evaluateNetwork(const Network& net);

/// Fixed header, then one row per entry; reals in 17 significant digits, NaN for missing values.
void writeTableCsv(std::ostream& out, const std::vector<TableRow>& rows);
/// Per-point means over successful seeds, rounded to two decimals.
void writeTablePretty(std::ostream& out, const std::vector<TableRow>& rows);
io::json toJson(const TableRow& row);

/**
 * JSON keys: "sbm" (object) or "input" (directory of network files),
 * "susceptibility" ("beta" | "degree"), "epsilon_grid", "lambda_beta_grid"
 * ([[a, b], ...]), "opinion_beta_grid" ([[a1, b1, a2, b2], ...]), "repeats",
 * "seed", "out_dir", "threads".
 */
ExperimentSpec experimentSpecFromJson(const io::json& doc);

} // namespace dissensus
