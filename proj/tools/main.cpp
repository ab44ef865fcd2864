#include <deque>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "kgwave/cli.hpp"

namespace {

/// Capture slot: one long option mapped onto a config key.
struct FlagSlot {
    std::string key;
    std::string value;
    CLI::Option* opt = nullptr;
};

class SubcommandSpec {
  public:
    SubcommandSpec(CLI::App& app, const std::string& name,
                   const std::string& desc) {
        sub_ = app.add_subcommand(name, desc);
        sub_->add_option("--config", config_path_,
                         "key=value config file; flags override file entries");
        add("c", "signal speed c > 0");
        add("omega-co", "cut-off frequency > 0");
        add("out", "output path ('-' = stdout)");
        add("format", "csv | json | svg");
        add("threads", "evaluation workers (0 = hardware)");
    }

    void add(const std::string& key, const std::string& help) {
        slots_.push_back({key, "", nullptr});
        FlagSlot& slot = slots_.back();
        slot.opt = sub_->add_option("--" + key, slot.value, help);
    }

    [[nodiscard]] bool parsed() const { return sub_->parsed(); }

    /// File entries first, then every flag the user actually passed.
    void apply(kgwave::RunConfig& cfg) const {
        if (!config_path_.empty())
            for (const kgwave::ConfigEntry& e :
                 kgwave::parse_config_file(config_path_))
                kgwave::apply_config_entry(cfg, e.key, e.value);
        for (const FlagSlot& s : slots_)
            if (s.opt->count() > 0) kgwave::apply_config_entry(cfg, s.key, s.value);
    }

  private:
    CLI::App* sub_ = nullptr;
    std::string config_path_;
    std::deque<FlagSlot> slots_; // stable addresses for CLI11 bindings
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical toolkit for the causal response of a waveguide "
                 "with a cut-off frequency"};
    app.require_subcommand(1);

    SubcommandSpec field(app, "field", "evaluate the response over a (t, x) grid");
    field.add("t-min", "first time sample (>= 0)");
    field.add("t-max", "last time sample");
    field.add("t-n", "number of time samples");
    field.add("x-min", "first position sample");
    field.add("x-max", "last position sample");
    field.add("x-n", "number of position samples");
    field.add("method", "comma list of methods, or 'all'");
    field.add("n-nodes", "loop quadrature nodes (>= 8)");
    field.add("epsilon", "spectral-line height (0 = 0.1 * omega-co)");

    SubcommandSpec compare(app, "compare",
                           "deviation of each method from the closed form");
    compare.add("t-min", "first time sample (>= 0)");
    compare.add("t-max", "last time sample");
    compare.add("t-n", "number of time samples");
    compare.add("x-min", "first position sample");
    compare.add("x-max", "last position sample");
    compare.add("x-n", "number of position samples");
    compare.add("method", "comma list of methods, or 'all'");
    compare.add("n-nodes", "loop quadrature nodes (>= 8)");
    compare.add("epsilon", "spectral-line height (0 = 0.1 * omega-co)");
    compare.add("tolerance", "allowed absolute deviation");

    SubcommandSpec dispersion(app, "dispersion",
                              "tabulate both real dispersion branches");
    dispersion.add("omega-max", "largest frequency (0 = 3 * omega-co)");
    dispersion.add("n-samples", "number of frequency samples (>= 2)");

    SubcommandSpec trace(app, "trace",
                         "steepest-descent curves through both saddles");
    trace.add("V", "observation speed, 0 < V < c");
    trace.add("depth", "terminate arms after this rise of Im(h)");

    SubcommandSpec fdtd(app, "fdtd",
                        "grid-convergence study of the reference simulation");
    fdtd.add("dx", "coarsest grid spacing");
    fdtd.add("cfl", "Courant number c*dt/dx");
    fdtd.add("t-end", "simulated duration");
    fdtd.add("half-width", "domain half width (0 = auto)");
    fdtd.add("snapshot-stride", "record full grid every n steps (0 = off)");
    fdtd.add("levels", "number of refinement levels");
    fdtd.add("probes", "probe list 't,x;t,x;...'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kgwave::exit_config_error;
    }

    kgwave::RunConfig cfg;
    const std::vector<std::pair<const SubcommandSpec*, int (*)(const kgwave::RunConfig&)>>
        table = {{&field, kgwave::cmd_field},
                 {&compare, kgwave::cmd_compare},
                 {&dispersion, kgwave::cmd_dispersion},
                 {&trace, kgwave::cmd_trace},
                 {&fdtd, kgwave::cmd_fdtd}};
    for (const auto& [spec, fn] : table) {
        if (!spec->parsed()) continue;
        try {
            spec->apply(cfg);
        } catch (const std::exception& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return kgwave::exit_config_error;
        }
        return fn(cfg);
    }
    std::cerr << "config error: no subcommand selected\n";
    return kgwave::exit_config_error;
}
