#include "kgwave/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "kgwave/contour.hpp"
#include "kgwave/dispersion.hpp"
#include "kgwave/io.hpp"
#include "kgwave/svg.hpp"

namespace kgwave {

using nlohmann::json;

OutputFormat output_format_from_string(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    if (name == "svg") return OutputFormat::Svg;
    throw std::invalid_argument("unknown output format: " + name);
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_num(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad numeric value for " + key + ": " + value);
    }
    if (used != value.size() || !std::isfinite(v))
        throw std::invalid_argument("bad numeric value for " + key + ": " + value);
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_num(key, value);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw std::invalid_argument("expected integer for " + key + ": " + value);
    return i;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (const char ch : s) {
        if (ch == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

} // namespace

std::vector<ConfigEntry> parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file: " + path);
    std::vector<ConfigEntry> out;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config file " + path + " line " +
                                        std::to_string(lineno) +
                                        ": expected key=value");
        ConfigEntry e{trim(body.substr(0, eq)), trim(body.substr(eq + 1))};
        if (e.key.empty())
            throw std::invalid_argument("config file " + path + " line " +
                                        std::to_string(lineno) + ": empty key");
        out.push_back(std::move(e));
    }
    return out;
}

void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value) {
    if (key == "c") cfg.params.c = parse_num(key, value);
    else if (key == "omega-co") cfg.params.omega_co = parse_num(key, value);
    else if (key == "out") cfg.out_path = value;
    else if (key == "format") cfg.format = output_format_from_string(value);
    else if (key == "threads") cfg.threads = parse_int(key, value);
    else if (key == "t-min") cfg.t_grid.min = parse_num(key, value);
    else if (key == "t-max") cfg.t_grid.max = parse_num(key, value);
    else if (key == "t-n") cfg.t_grid.n = parse_int(key, value);
    else if (key == "x-min") cfg.x_grid.min = parse_num(key, value);
    else if (key == "x-max") cfg.x_grid.max = parse_num(key, value);
    else if (key == "x-n") cfg.x_grid.n = parse_int(key, value);
    else if (key == "method" || key == "methods") {
        cfg.methods.clear();
        if (value == "all") {
            cfg.methods = all_field_methods();
        } else {
            for (const std::string& name : split(value, ','))
                cfg.methods.push_back(field_method_from_string(name));
        }
        if (cfg.methods.empty())
            throw std::invalid_argument("methods: list must not be empty");
    } else if (key == "n-nodes") cfg.field.n_nodes = parse_int(key, value);
    else if (key == "epsilon") cfg.field.epsilon = parse_num(key, value);
    else if (key == "tolerance") cfg.tolerance = parse_num(key, value);
    else if (key == "omega-max") cfg.omega_max = parse_num(key, value);
    else if (key == "n-samples") cfg.n_samples = parse_int(key, value);
    else if (key == "V") cfg.V = parse_num(key, value);
    else if (key == "depth") cfg.field.trace.depth = parse_num(key, value);
    else if (key == "dx") cfg.fdtd.dx = parse_num(key, value);
    else if (key == "cfl") cfg.fdtd.cfl = parse_num(key, value);
    else if (key == "t-end") cfg.fdtd.t_end = parse_num(key, value);
    else if (key == "half-width") cfg.fdtd.half_width = parse_num(key, value);
    else if (key == "snapshot-stride") cfg.fdtd.snapshot_stride = parse_int(key, value);
    else if (key == "levels") cfg.levels = parse_int(key, value);
    else if (key == "probes") {
        cfg.probes.clear();
        for (const std::string& pair : split(value, ';')) {
            if (pair.empty()) continue;
            const std::vector<std::string> tx = split(pair, ',');
            if (tx.size() != 2)
                throw std::invalid_argument("probes: expected t,x;t,x pairs");
            cfg.probes.emplace_back(parse_num("probe t", tx[0]),
                                    parse_num("probe x", tx[1]));
        }
    } else {
        throw std::invalid_argument("unknown config key: " + key);
    }
}

std::vector<double> GridSpec::points() const {
    if (n < 1) throw std::invalid_argument("grid: need at least one point");
    if (!std::isfinite(min) || !std::isfinite(max))
        throw std::invalid_argument("grid: bounds must be finite");
    if (n == 1) return {min};
    if (!(max > min))
        throw std::invalid_argument("grid: max must exceed min for n > 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out.push_back(min + (max - min) * static_cast<double>(i) / (n - 1));
    return out;
}

namespace {

const char* format_name(OutputFormat f) {
    switch (f) {
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Json: return "json";
        case OutputFormat::Svg: return "svg";
    }
    return "?";
}

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                         "#ff7f0e", "#8c564b", "#17becf"};

/// NaN-safe cell: empty in CSV, null in JSON.
std::string csv_num(double v) { return std::isnan(v) ? "" : format_double(v); }
json json_num(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

struct CommandError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check_config(bool ok, const char* what) {
    if (!ok) throw CommandError(what);
}

json params_json(const WaveguideParams& p) {
    return json{{"c", p.c}, {"omega_co", p.omega_co}};
}

/// Deterministic parallel map over evaluation jobs (interleaved static split).
template <typename Job, typename Fn>
std::vector<FieldSample> run_jobs(const std::vector<Job>& jobs, int threads,
                                  Fn&& fn) {
    std::vector<FieldSample> results(jobs.size());
    unsigned n_workers = threads > 0
                             ? static_cast<unsigned>(threads)
                             : std::max(1u, std::thread::hardware_concurrency());
    n_workers = std::min<unsigned>(n_workers, 64);
    if (jobs.size() < 32) n_workers = 1;
    auto work = [&](unsigned w) {
        for (std::size_t i = w; i < jobs.size(); i += n_workers) {
            try {
                results[i] = fn(jobs[i]);
            } catch (const std::exception& e) {
                FieldSample s;
                s.point = SpacetimePoint(jobs[i].t, jobs[i].x);
                s.method = jobs[i].method;
                s.converged = false;
                s.validity_note = e.what();
                results[i] = s;
            }
        }
    };
    if (n_workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    return results;
}

struct PointJob {
    double t = 0.0, x = 0.0;
    FieldMethod method = FieldMethod::Exact;
};

void validate_grid_config(const RunConfig& cfg) {
    cfg.params.validate();
    check_config(cfg.threads >= 0, "threads must be >= 0");
    check_config(cfg.t_grid.min >= 0.0, "t grid must start at t >= 0");
    check_config(cfg.field.n_nodes >= 8, "n-nodes must be >= 8");
    check_config(cfg.field.epsilon >= 0.0, "epsilon must be >= 0");
    (void)cfg.t_grid.points();
    (void)cfg.x_grid.points();
}

std::vector<FieldMethod> resolve_methods(const RunConfig& cfg, bool with_exact) {
    if (!cfg.methods.empty()) return cfg.methods;
    std::vector<FieldMethod> out;
    for (const FieldMethod m : all_field_methods())
        if (with_exact || m != FieldMethod::Exact) out.push_back(m);
    return out;
}

int write_and_exit(const RunConfig& cfg, const std::string& text, bool numerical_ok) {
    write_text_output(cfg.out_path, text);
    return numerical_ok ? exit_ok : exit_numerical_error;
}

} // namespace

// ---------------------------------------------------------------------------
// field

int cmd_field(const RunConfig& cfg) {
    try {
        validate_grid_config(cfg);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config_error;
    }
    try {
        const std::vector<FieldMethod> methods = resolve_methods(cfg, true);
        const std::vector<double> ts = cfg.t_grid.points();
        const std::vector<double> xs = cfg.x_grid.points();
        std::vector<PointJob> jobs;
        jobs.reserve(ts.size() * xs.size() * methods.size());
        for (const double t : ts)
            for (const double x : xs)
                for (const FieldMethod m : methods) jobs.push_back({t, x, m});

        const std::vector<FieldSample> samples =
            run_jobs(jobs, cfg.threads, [&](const PointJob& j) {
                return evaluate(SpacetimePoint(j.t, j.x), cfg.params, j.method,
                                cfg.field);
            });
        const bool ok = std::all_of(samples.begin(), samples.end(),
                                    [](const FieldSample& s) { return s.converged; });

        std::string text;
        if (cfg.format == OutputFormat::Csv) {
            CsvWriter csv({"t", "x", "method", "value_re", "value_im",
                           "error_estimate", "converged", "validity_note"});
            for (const FieldSample& s : samples)
                csv.add_row({format_double(s.point.t), format_double(s.point.x),
                             to_string(s.method), format_double(s.value.real()),
                             format_double(s.value.imag()),
                             format_double(s.error_estimate),
                             s.converged ? "true" : "false", s.validity_note});
            text = csv.str();
        } else if (cfg.format == OutputFormat::Json) {
            json rows = json::array();
            for (const FieldSample& s : samples)
                rows.push_back({{"t", s.point.t},
                                {"x", s.point.x},
                                {"method", to_string(s.method)},
                                {"value_re", s.value.real()},
                                {"value_im", s.value.imag()},
                                {"error_estimate", s.error_estimate},
                                {"converged", s.converged},
                                {"validity_note", s.validity_note}});
            json methods_j = json::array();
            for (const FieldMethod m : methods) methods_j.push_back(to_string(m));
            json doc = {
                {"config",
                 {{"command", "field"},
                  {"params", params_json(cfg.params)},
                  {"t_grid", {{"min", cfg.t_grid.min}, {"max", cfg.t_grid.max}, {"n", cfg.t_grid.n}}},
                  {"x_grid", {{"min", cfg.x_grid.min}, {"max", cfg.x_grid.max}, {"n", cfg.x_grid.n}}},
                  {"methods", methods_j},
                  {"n_nodes", cfg.field.n_nodes},
                  {"epsilon", cfg.field.epsilon},
                  {"format", format_name(cfg.format)}}},
                {"rows", rows}};
            text = doc.dump(2) + "\n";
        } else {
            // One series per method: u against x at the last time row, or
            // against t when the spatial grid is a single point.
            const bool over_x = xs.size() > 1;
            SvgPlot plot(860, 540, "field response",
                         over_x ? "x" : "t", "Re u");
            int color = 0;
            for (const FieldMethod m : methods) {
                std::vector<double> ax, ay;
                for (std::size_t i = 0; i < jobs.size(); ++i) {
                    if (jobs[i].method != m) continue;
                    if (over_x && jobs[i].t != ts.back()) continue;
                    ax.push_back(over_x ? jobs[i].x : jobs[i].t);
                    ay.push_back(samples[i].value.real());
                }
                plot.add_line(ax, ay, palette[color % 7], to_string(m));
                ++color;
            }
            text = plot.render();
        }
        return write_and_exit(cfg, text, ok);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical_error;
    }
}

// ---------------------------------------------------------------------------
// compare

int cmd_compare(const RunConfig& cfg) {
    try {
        validate_grid_config(cfg);
        check_config(std::isfinite(cfg.tolerance) && cfg.tolerance > 0.0,
                     "tolerance must be > 0");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config_error;
    }
    try {
        const std::vector<FieldMethod> methods = resolve_methods(cfg, false);
        const std::vector<double> ts = cfg.t_grid.points();
        const std::vector<double> xs = cfg.x_grid.points();
        std::vector<PointJob> jobs;
        for (const FieldMethod m : methods)
            for (const double t : ts)
                for (const double x : xs) jobs.push_back({t, x, m});

        const std::vector<FieldSample> samples =
            run_jobs(jobs, cfg.threads, [&](const PointJob& j) {
                return evaluate(SpacetimePoint(j.t, j.x), cfg.params, j.method,
                                cfg.field);
            });

        struct Stats {
            double max_dev = 0.0, sum_dev = 0.0;
            long n = 0;
            bool converged = true;
        };
        std::vector<Stats> stats(methods.size());
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            const std::size_t mi = i / (ts.size() * xs.size());
            const double ref =
                exact_field(SpacetimePoint(jobs[i].t, jobs[i].x), cfg.params,
                            cfg.field.bessel);
            const double dev = std::abs(samples[i].value - Complex(ref, 0.0));
            stats[mi].max_dev = std::max(stats[mi].max_dev, dev);
            stats[mi].sum_dev += dev;
            stats[mi].n += 1;
            stats[mi].converged = stats[mi].converged && samples[i].converged;
        }

        bool ok = true;
        std::string text;
        auto violation = [&](const Stats& s) {
            return s.max_dev > cfg.tolerance || !s.converged;
        };
        for (const Stats& s : stats) ok = ok && !violation(s);

        if (cfg.format == OutputFormat::Csv) {
            CsvWriter csv({"method", "n_points", "max_abs_dev", "mean_abs_dev",
                           "tolerance", "violation"});
            for (std::size_t mi = 0; mi < methods.size(); ++mi)
                csv.add_row({to_string(methods[mi]), std::to_string(stats[mi].n),
                             format_double(stats[mi].max_dev),
                             format_double(stats[mi].sum_dev / stats[mi].n),
                             format_double(cfg.tolerance),
                             violation(stats[mi]) ? "true" : "false"});
            text = csv.str();
        } else if (cfg.format == OutputFormat::Json) {
            json rows = json::array();
            for (std::size_t mi = 0; mi < methods.size(); ++mi)
                rows.push_back({{"method", to_string(methods[mi])},
                                {"n_points", stats[mi].n},
                                {"max_abs_dev", stats[mi].max_dev},
                                {"mean_abs_dev", stats[mi].sum_dev / stats[mi].n},
                                {"tolerance", cfg.tolerance},
                                {"violation", violation(stats[mi])}});
            json doc = {{"config",
                         {{"command", "compare"},
                          {"params", params_json(cfg.params)},
                          {"tolerance", cfg.tolerance},
                          {"format", format_name(cfg.format)}}},
                        {"rows", rows}};
            text = doc.dump(2) + "\n";
        } else {
            SvgPlot plot(860, 540, "max deviation from the closed form",
                         "method index", "max |deviation|");
            std::vector<double> ax, ay;
            for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                ax.push_back(static_cast<double>(mi));
                ay.push_back(stats[mi].max_dev);
            }
            plot.add_markers(ax, ay, palette[0], "per-method max deviation");
            text = plot.render();
        }
        return write_and_exit(cfg, text, ok);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical_error;
    }
}

// ---------------------------------------------------------------------------
// dispersion

int cmd_dispersion(const RunConfig& cfg) {
    double omega_max = 0.0;
    try {
        cfg.params.validate();
        omega_max = cfg.omega_max > 0.0 ? cfg.omega_max : 3.0 * cfg.params.omega_co;
        check_config(std::isfinite(omega_max) && omega_max > 0.0,
                     "omega-max must be > 0");
        check_config(cfg.n_samples >= 2, "n-samples must be >= 2");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config_error;
    }
    try {
        const std::vector<DiagramSample> rows =
            sample_diagram(cfg.params, omega_max, cfg.n_samples);
        std::string text;
        if (cfg.format == OutputFormat::Csv) {
            CsvWriter csv({"omega", "k_magnitude", "branch", "W", "K"});
            for (const DiagramSample& d : rows)
                csv.add_row({format_double(d.omega), format_double(d.k_magnitude),
                             d.branch == BranchKind::Propagating ? "propagating"
                                                                 : "evanescent",
                             format_double(d.W), format_double(d.K)});
            text = csv.str();
        } else if (cfg.format == OutputFormat::Json) {
            json jrows = json::array();
            for (const DiagramSample& d : rows)
                jrows.push_back({{"omega", d.omega},
                                 {"k_magnitude", d.k_magnitude},
                                 {"branch", d.branch == BranchKind::Propagating
                                                ? "propagating"
                                                : "evanescent"},
                                 {"W", d.W},
                                 {"K", d.K}});
            json doc = {{"config",
                         {{"command", "dispersion"},
                          {"params", params_json(cfg.params)},
                          {"omega_max", omega_max},
                          {"n_samples", cfg.n_samples},
                          {"format", format_name(cfg.format)}}},
                        {"rows", jrows}};
            text = doc.dump(2) + "\n";
        } else {
            SvgPlot branches(560, 420, "dispersion branches", "k", "omega");
            std::vector<double> kp, wp, ke, we;
            for (const DiagramSample& d : rows) {
                if (d.branch == BranchKind::Propagating) {
                    kp.push_back(d.k_magnitude);
                    wp.push_back(d.omega);
                } else {
                    ke.push_back(d.k_magnitude);
                    we.push_back(d.omega);
                }
            }
            branches.add_line(ke, we, palette[1], "evanescent |k|");
            branches.add_line(kp, wp, palette[0], "propagating k");

            SvgPlot squared(560, 420, "squared coordinates", "K = k^2",
                            "W = omega^2");
            std::vector<double> Ks, Ws;
            for (const DiagramSample& d : rows) {
                Ks.push_back(d.K);
                Ws.push_back(d.W);
            }
            squared.add_line(Ks, Ws, palette[2], "W = c^2 K + omega_co^2");
            text = svg_panel_row({&branches, &squared});
        }
        write_text_output(cfg.out_path, text);
        return exit_ok;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical_error;
    }
}

// ---------------------------------------------------------------------------
// trace

int cmd_trace(const RunConfig& cfg) {
    try {
        cfg.params.validate();
        check_config(std::isfinite(cfg.V) && cfg.V > 0.0 && cfg.V < cfg.params.c,
                     "V must satisfy 0 < V < c");
        cfg.field.trace.validate();
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config_error;
    }
    try {
        const SaddleData saddle = saddle_points(cfg.V, cfg.params);
        std::vector<DescentTrace> traces;
        traces.push_back(trace_descent(saddle, +1, cfg.params, cfg.field.trace));
        traces.push_back(trace_descent(saddle, -1, cfg.params, cfg.field.trace));

        auto phase_h = [&](Complex xi) {
            return Complex(0.0, cfg.params.omega_co / cfg.params.c) * std::cos(xi) -
                   (cfg.params.omega_co / cfg.V) * std::sin(xi);
        };

        std::string text;
        if (cfg.format == OutputFormat::Csv || cfg.format == OutputFormat::Json) {
            CsvWriter csv({"branch_sign", "node_index", "s", "omega_re", "omega_im",
                           "xi_re", "xi_im", "phase_residual"});
            json jrows = json::array();
            for (const DescentTrace& tr : traces) {
                double s = 0.0;
                Complex prev_w{0.0, 0.0};
                for (std::size_t i = 0; i < tr.xi_nodes.size(); ++i) {
                    const Complex xi = tr.xi_nodes[i];
                    const Complex w = cfg.params.omega_co * std::sin(xi);
                    if (i > 0) s += std::abs(w - prev_w);
                    prev_w = w;
                    const double res =
                        std::abs(phase_h(xi).real() - tr.phase_const);
                    if (cfg.format == OutputFormat::Csv)
                        csv.add_row({std::to_string(tr.branch_sign),
                                     std::to_string(i), format_double(s),
                                     format_double(w.real()),
                                     format_double(w.imag()),
                                     format_double(xi.real()),
                                     format_double(xi.imag()),
                                     format_double(res)});
                    else
                        jrows.push_back({{"branch_sign", tr.branch_sign},
                                         {"node_index", i},
                                         {"s", s},
                                         {"omega_re", w.real()},
                                         {"omega_im", w.imag()},
                                         {"xi_re", xi.real()},
                                         {"xi_im", xi.imag()},
                                         {"phase_residual", res}});
                }
            }
            if (cfg.format == OutputFormat::Csv) {
                text = csv.str();
            } else {
                json doc = {
                    {"config",
                     {{"command", "trace"},
                      {"params", params_json(cfg.params)},
                      {"V", cfg.V},
                      {"depth", cfg.field.trace.depth},
                      {"format", format_name(cfg.format)}}},
                    {"rows", jrows}};
                text = doc.dump(2) + "\n";
            }
        } else {
            SvgPlot plot(860, 540, "steepest-descent curves", "Re omega",
                         "Im omega");
            int color = 0;
            std::vector<double> sx, sy;
            for (const DescentTrace& tr : traces) {
                std::vector<double> ax, ay;
                for (const Complex& w : tr.nodes.nodes()) {
                    ax.push_back(w.real());
                    ay.push_back(w.imag());
                }
                plot.add_line(ax, ay, palette[color % 7],
                              tr.branch_sign > 0 ? "through +omega*"
                                                 : "through -omega*");
                sx.push_back(tr.branch_sign * saddle.omega_star);
                sy.push_back(0.0);
                ++color;
            }
            plot.add_markers(sx, sy, palette[3], "saddles");
            text = plot.render();
        }
        write_text_output(cfg.out_path, text);
        return exit_ok;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical_error;
    }
}

// ---------------------------------------------------------------------------
// fdtd

int cmd_fdtd(const RunConfig& cfg) {
    FdtdConfig sim = cfg.fdtd;
    sim.params = cfg.params;
    std::vector<SpacetimePoint> probes = cfg.probes;
    try {
        sim.validate();
        check_config(cfg.levels >= 1 && cfg.levels <= 12,
                     "levels must be in [1, 12]");
        if (probes.empty()) {
            const double te = sim.t_end;
            const double ce = sim.params.c * te;
            probes = {SpacetimePoint(0.8 * te, 0.0),
                      SpacetimePoint(0.8 * te, 0.3 * ce),
                      SpacetimePoint(0.6 * te, 0.2 * ce),
                      SpacetimePoint(0.9 * te, 0.5 * ce)};
        }
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config_error;
    }
    try {
        const std::vector<ConvergenceLevel> levels =
            convergence_study(sim, probes, cfg.levels);
        FdtdConfig finest = sim;
        finest.dx = sim.dx / static_cast<double>(1 << (cfg.levels - 1));
        const FdtdResult fine = simulate(finest, probes);
        bool monotone = true;
        for (std::size_t i = 1; i < levels.size(); ++i)
            monotone = monotone && levels[i].max_error < levels[i - 1].max_error;

        std::string text;
        if (cfg.format == OutputFormat::Csv) {
            CsvWriter csv({"record", "dx", "max_error", "observed_order", "t", "x",
                           "simulated", "exact", "abs_error"});
            for (const ConvergenceLevel& l : levels)
                csv.add_row({"level", format_double(l.dx),
                             format_double(l.max_error),
                             csv_num(l.observed_order), "", "", "", "", ""});
            for (std::size_t i = 0; i < probes.size(); ++i) {
                const double ref = exact_field(probes[i], sim.params);
                csv.add_row({"probe", "", "", "", format_double(probes[i].t),
                             format_double(probes[i].x),
                             format_double(fine.probes[i].value),
                             format_double(ref),
                             format_double(std::abs(fine.probes[i].value - ref))});
            }
            text = csv.str();
        } else if (cfg.format == OutputFormat::Json) {
            json rows = json::array();
            for (const ConvergenceLevel& l : levels)
                rows.push_back({{"kind", "level"},
                                {"dx", l.dx},
                                {"max_error", l.max_error},
                                {"observed_order", json_num(l.observed_order)}});
            for (std::size_t i = 0; i < probes.size(); ++i) {
                const double ref = exact_field(probes[i], sim.params);
                rows.push_back(
                    {{"kind", "probe"},
                     {"t", probes[i].t},
                     {"x", probes[i].x},
                     {"simulated", fine.probes[i].value},
                     {"exact", ref},
                     {"abs_error", std::abs(fine.probes[i].value - ref)}});
            }
            json doc = {{"config",
                         {{"command", "fdtd"},
                          {"params", params_json(sim.params)},
                          {"dx", sim.dx},
                          {"cfl", sim.cfl},
                          {"t_end", sim.t_end},
                          {"levels", cfg.levels},
                          {"format", format_name(cfg.format)}}},
                        {"rows", rows}};
            text = doc.dump(2) + "\n";
        } else {
            SvgPlot plot(860, 540, "grid convergence", "dx", "max probe error");
            std::vector<double> ax, ay;
            for (const ConvergenceLevel& l : levels) {
                ax.push_back(l.dx);
                ay.push_back(l.max_error);
            }
            plot.add_line(ax, ay, palette[0], "max error");
            plot.add_markers(ax, ay, palette[1], "");
            text = plot.render();
        }
        write_text_output(cfg.out_path, text);
        if (!monotone)
            std::cerr << "fdtd: errors did not decrease monotonically across levels\n";
        return monotone ? exit_ok : exit_numerical_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical_error;
    }
}

} // namespace kgwave
