#pragma once

#include <string>
#include <vector>

#include "kgwave/fdtd.hpp"
#include "kgwave/field.hpp"
#include "kgwave/types.hpp"

namespace kgwave {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
    exit_ok = 0,
    exit_config_error = 2,
    exit_numerical_error = 3,
};

enum class OutputFormat { Csv, Json, Svg };

[[nodiscard]] OutputFormat output_format_from_string(const std::string& name);

/** Inclusive equispaced grid; n == 1 collapses to the lower bound. */
struct GridSpec {
    double min = 0.0;
    double max = 0.0;
    int n = 1;

    [[nodiscard]] std::vector<double> points() const;
};

/**
 * Fully resolved run configuration for one subcommand invocation.  The CLI
 * front end fills it from flags and an optional key=value config file; tests
 * construct it directly.
 */
struct RunConfig {
    WaveguideParams params{1.0, 1.0};
    std::string out_path;  ///< empty or "-" = stdout
    OutputFormat format = OutputFormat::Csv;
    int threads = 0;       ///< grid evaluation workers; 0 = hardware

    // field / compare
    GridSpec t_grid{1.0, 10.0, 10};
    GridSpec x_grid{0.0, 0.0, 1};
    std::vector<FieldMethod> methods;
    FieldSettings field;
    double tolerance = 1e-8; ///< compare: allowed deviation from the closed form

    // dispersion
    double omega_max = 0.0;  ///< 0 = 3 * omega_co
    int n_samples = 200;

    // trace
    double V = 0.5;

    // fdtd
    FdtdConfig fdtd;
    int levels = 3;
    std::vector<SpacetimePoint> probes; ///< empty = default probe set
};

/** One key=value setting from a config file or a command-line flag. */
struct ConfigEntry {
    std::string key;
    std::string value;
};

/// Parse a flat key=value file; '#' starts a comment, blank lines are skipped.
[[nodiscard]] std::vector<ConfigEntry> parse_config_file(const std::string& path);

/**
 * Apply one setting to the configuration.  Keys mirror the long option names
 * ("c", "omega-co", "t-min", "method", "dx", ...).  Throws
 * std::invalid_argument for unknown keys or malformed values.  Command-line
 * flags are applied after file entries, so flags win.
 */
void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value);

/// Evaluate the selected methods over the (t, x) grid and write the table.
int cmd_field(const RunConfig& cfg);
/// Deviation statistics of each method against the closed form over the grid.
int cmd_compare(const RunConfig& cfg);
/// Dispersion-diagram table for both real branches.
int cmd_dispersion(const RunConfig& cfg);
/// Steepest-descent curves through both saddles at speed V.
int cmd_trace(const RunConfig& cfg);
/// Grid-convergence study of the reference simulation against the closed form.
int cmd_fdtd(const RunConfig& cfg);

} // namespace kgwave
