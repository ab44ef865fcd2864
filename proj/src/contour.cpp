#include "kgwave/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace kgwave {

// ---------------------------------------------------------------------------
// paths

ContourPath ContourPath::segment(Complex a, Complex b) {
    detail::require_finite(a, "segment endpoint");
    detail::require_finite(b, "segment endpoint");
    if (a == b) throw std::invalid_argument("segment: endpoints must differ");
    ContourPath p;
    p.kind_ = Kind::Segment;
    p.a_ = a;
    p.b_ = b;
    p.length_ = std::abs(b - a);
    return p;
}

ContourPath ContourPath::horizontal_line(double epsilon, double half_width) {
    detail::require_finite(epsilon, "epsilon");
    if (!(std::isfinite(half_width) && half_width > 0.0))
        throw std::invalid_argument("horizontal_line: half_width must be > 0");
    ContourPath p;
    p.kind_ = Kind::HorizontalLine;
    p.epsilon_ = epsilon;
    p.half_width_ = half_width;
    p.length_ = 2.0 * half_width;
    return p;
}

ContourPath ContourPath::tube_loop(double height) {
    detail::require_finite(height, "height");
    ContourPath p;
    p.kind_ = Kind::TubeLoop;
    p.height_ = height;
    p.length_ = 2.0 * pi;
    return p;
}

ContourPath ContourPath::traced_polyline(std::vector<Complex> nodes) {
    if (nodes.size() < 2)
        throw std::invalid_argument("traced_polyline: need at least 2 nodes");
    ContourPath p;
    p.kind_ = Kind::TracedPolyline;
    p.cumlen_.reserve(nodes.size());
    p.cumlen_.push_back(0.0);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        detail::require_finite(nodes[i], "polyline node");
        const double d = std::abs(nodes[i] - nodes[i - 1]);
        if (d == 0.0)
            throw std::invalid_argument("traced_polyline: repeated node");
        p.cumlen_.push_back(p.cumlen_.back() + d);
    }
    detail::require_finite(nodes[0], "polyline node");
    p.nodes_ = std::move(nodes);
    p.length_ = p.cumlen_.back();
    return p;
}

Complex ContourPath::position(double s) const {
    if (length_ <= 0.0) throw std::logic_error("ContourPath: empty path");
    if (!(s >= 0.0 && s <= length_))
        throw std::domain_error("ContourPath::position: parameter out of range");
    const double sf = reversed_ ? length_ - s : s;
    switch (kind_) {
        case Kind::Segment:
            return a_ + (b_ - a_) * (sf / length_);
        case Kind::HorizontalLine:
            return Complex(-half_width_ + sf, epsilon_);
        case Kind::TubeLoop:
            return Complex(-pi / 2.0 + sf, height_);
        case Kind::TracedPolyline: {
            auto it = std::upper_bound(cumlen_.begin(), cumlen_.end(), sf);
            std::size_t i = static_cast<std::size_t>(it - cumlen_.begin());
            if (i == 0) i = 1;
            if (i >= cumlen_.size()) i = cumlen_.size() - 1;
            const double seg = cumlen_[i] - cumlen_[i - 1];
            const double f = (sf - cumlen_[i - 1]) / seg;
            return nodes_[i - 1] + (nodes_[i] - nodes_[i - 1]) * f;
        }
    }
    throw std::logic_error("ContourPath: bad kind");
}

Complex ContourPath::derivative(double s) const {
    if (length_ <= 0.0) throw std::logic_error("ContourPath: empty path");
    if (!(s >= 0.0 && s <= length_))
        throw std::domain_error("ContourPath::derivative: parameter out of range");
    const double sign = reversed_ ? -1.0 : 1.0;
    const double sf = reversed_ ? length_ - s : s;
    switch (kind_) {
        case Kind::Segment:
            return sign * (b_ - a_) / length_;
        case Kind::HorizontalLine:
        case Kind::TubeLoop:
            return Complex(sign, 0.0);
        case Kind::TracedPolyline: {
            auto it = std::upper_bound(cumlen_.begin(), cumlen_.end(), sf);
            std::size_t i = static_cast<std::size_t>(it - cumlen_.begin());
            if (i == 0) i = 1;
            if (i >= cumlen_.size()) i = cumlen_.size() - 1;
            const double seg = cumlen_[i] - cumlen_[i - 1];
            return sign * (nodes_[i] - nodes_[i - 1]) / seg;
        }
    }
    throw std::logic_error("ContourPath: bad kind");
}

ContourPath ContourPath::reversed() const {
    ContourPath p = *this;
    p.reversed_ = !reversed_;
    return p;
}

const std::vector<Complex>& ContourPath::nodes() const {
    if (kind_ != Kind::TracedPolyline)
        throw std::logic_error("ContourPath::nodes: not a polyline");
    return nodes_;
}

// ---------------------------------------------------------------------------
// quadrature

void QuadratureSettings::validate() const {
    if (!(std::isfinite(abs_tol) && abs_tol > 0.0))
        throw std::invalid_argument("QuadratureSettings: abs_tol must be > 0");
    if (!(std::isfinite(rel_tol) && rel_tol >= 0.0))
        throw std::invalid_argument("QuadratureSettings: rel_tol must be >= 0");
    if (max_intervals < 1)
        throw std::invalid_argument("QuadratureSettings: max_intervals must be >= 1");
    if (tube_nodes < 8)
        throw std::invalid_argument("QuadratureSettings: tube_nodes must be >= 8");
    if (!(std::isfinite(tail_panel_width) && tail_panel_width >= 0.0))
        throw std::invalid_argument("QuadratureSettings: tail_panel_width must be >= 0");
    if (!(std::isfinite(tail_start) && tail_start >= 0.0))
        throw std::invalid_argument("QuadratureSettings: tail_start must be >= 0");
    if (max_tail_panels < 2)
        throw std::invalid_argument("QuadratureSettings: max_tail_panels must be >= 2");
}

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr double gk_x[8] = {
    0.9914553711208126392068547, 0.9491079123427585245261897,
    0.8648644233597690727897128, 0.7415311855993944398638648,
    0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0};
constexpr double gk_wk[8] = {
    0.0229353220105292249637320, 0.0630920926299785532907007,
    0.1047900103222501838398763, 0.1406532597155259187451896,
    0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992};
constexpr double gk_wg[4] = {
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020};

struct Panel {
    double a = 0.0, b = 0.0;
    Complex value{0.0, 0.0};
    double error = 0.0;
};

// One 15-point rule over [a, b] of g(s); the error estimate follows the
// classic scaled |K15 - G7| heuristic.
Panel gk15(const std::function<Complex(double)>& g, double a, double b,
           long& evaluations) {
    const double center = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const Complex fc = g(center);
    Complex resk = gk_wk[7] * fc;
    Complex resg = gk_wg[3] * fc;
    double resabs = gk_wk[7] * std::abs(fc);
    Complex fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        fv1[j] = g(center - h * gk_x[j]);
        fv2[j] = g(center + h * gk_x[j]);
        resk += gk_wk[j] * (fv1[j] + fv2[j]);
        resabs += gk_wk[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) resg += gk_wg[j / 2] * (fv1[j] + fv2[j]);
    }
    evaluations += 15;
    const Complex mean = resk * 0.5;
    double resasc = gk_wk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += gk_wk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    resasc *= std::abs(h);

    Panel p;
    p.a = a;
    p.b = b;
    p.value = resk * h;
    double err = std::abs(resk - resg) * std::abs(h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double round_floor =
        50.0 * std::numeric_limits<double>::epsilon() * resabs * std::abs(h);
    p.error = std::max(err, round_floor);
    return p;
}

QuadratureResult adaptive_gk(const std::function<Complex(double)>& g,
                             const std::vector<double>& breakpoints,
                             const QuadratureSettings& s) {
    QuadratureResult out;
    auto cmp = [](const Panel& l, const Panel& r) { return l.error < r.error; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);
    Complex total{0.0, 0.0};
    double err_total = 0.0;
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        Panel p = gk15(g, breakpoints[i - 1], breakpoints[i], out.evaluations);
        total += p.value;
        err_total += p.error;
        heap.push(p);
    }
    int splits = 0;
    const double min_width =
        64.0 * std::numeric_limits<double>::epsilon() *
        (std::abs(breakpoints.front()) + std::abs(breakpoints.back()) + 1.0);
    while (err_total > std::max(s.abs_tol, s.rel_tol * std::abs(total)) &&
           splits < s.max_intervals && !heap.empty()) {
        Panel worst = heap.top();
        if (worst.b - worst.a < min_width) break; // refinement exhausted
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Panel l = gk15(g, worst.a, mid, out.evaluations);
        Panel r = gk15(g, mid, worst.b, out.evaluations);
        total += l.value + r.value - worst.value;
        err_total += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++splits;
    }
    out.value = total;
    out.error_estimate = err_total;
    out.converged = err_total <= std::max(s.abs_tol, s.rel_tol * std::abs(total));
    return out;
}

QuadratureResult trapezoid_loop(const std::function<Complex(Complex)>& f,
                                const ContourPath& path,
                                const QuadratureSettings& s) {
    int n = s.tube_nodes;
    if (n % 2 != 0) ++n;
    const double period = path.s_end();
    const double hstep = period / n;
    Complex sum{0.0, 0.0};
    Complex sum_half{0.0, 0.0};
    double mag = 0.0;
    for (int j = 0; j < n; ++j) {
        const double sj = j * hstep;
        const Complex fj = f(path.position(sj)) * path.derivative(sj);
        sum += fj;
        if (j % 2 == 0) sum_half += fj;
        mag += std::abs(fj);
    }
    QuadratureResult out;
    out.evaluations = n;
    out.value = sum * hstep;
    const Complex coarse = sum_half * (2.0 * hstep);
    const double round_floor =
        20.0 * std::numeric_limits<double>::epsilon() * mag * hstep;
    out.error_estimate = std::max(std::abs(out.value - coarse), round_floor);
    out.converged =
        out.error_estimate <= std::max(s.abs_tol, s.rel_tol * std::abs(out.value));
    return out;
}

/**
 * Horizontal line with oscillatory tails: adaptive rule over the central
 * region, then mirrored half-period panels combined by iterated averaging of
 * the partial sums.  Half-period panels make the panel series alternate, and
 * the averaging transform extrapolates it to its limit, so the result targets
 * the full-line integral rather than a hard cutoff at the nominal half-width;
 * the half-width only budgets how many panels may be laid down.  The tail
 * error is sized by the drop across the last two averaging depths, the same
 * measure the epsilon-algorithm extrapolators use.
 */
QuadratureResult line_with_tails(const std::function<Complex(Complex)>& f,
                                 const ContourPath& path,
                                 const QuadratureSettings& s) {
    const double W = path.s_end() / 2.0; // half-width in Re
    const double eps_im = path.position(path.s_end() / 2.0).imag();
    const double sign = path.reversed_orientation() ? -1.0 : 1.0;
    auto g = [&](double u) { return f(Complex(u, eps_im)); };

    const double wp = s.tail_panel_width;
    const double u0 = std::min(s.tail_start > 0.0 ? s.tail_start : W, W);
    const int m_max =
        std::min(s.max_tail_panels, static_cast<int>(std::floor((W - u0) / wp)));
    if (u0 >= W || m_max < 2) {
        // Tail region too narrow for panel acceleration: plain adaptive rule.
        std::vector<double> bp{-W, 0.0, W};
        if (u0 > 0.0 && u0 < W) bp = {-W, -u0, 0.0, u0, W};
        QuadratureResult r = adaptive_gk(g, bp, s);
        r.value *= sign;
        return r;
    }

    QuadratureResult central;
    {
        std::vector<double> bp{-u0, 0.0, u0};
        central = adaptive_gk(g, bp, s);
    }
    long evals = central.evaluations;

    // One mirrored panel pair; wide panels are split geometrically so a
    // single 15-point rule never has to bridge a decade of 1/u amplitude.
    auto panel_pair = [&](double lo, double hi) {
        const int n_sub = std::clamp(
            static_cast<int>(std::ceil(std::log2(hi / lo))), 1, 8);
        Panel sum;
        for (int j = 0; j < n_sub; ++j) {
            const double a = lo * std::pow(hi / lo, double(j) / n_sub);
            const double b = j + 1 == n_sub
                                 ? hi
                                 : lo * std::pow(hi / lo, double(j + 1) / n_sub);
            const Panel right = gk15(g, a, b, evals);
            const Panel left = gk15(g, -b, -a, evals);
            sum.value += right.value + left.value;
            sum.error += right.error + left.error;
        }
        return sum;
    };

    std::vector<Complex> partial;
    partial.reserve(static_cast<std::size_t>(m_max));
    Complex acc{0.0, 0.0};
    double panel_err = 0.0;
    double last_mag = 0.0;
    for (int m = 0; m < m_max; ++m) {
        const Panel pair = panel_pair(u0 + m * wp, u0 + (m + 1) * wp);
        acc += pair.value;
        panel_err += pair.error;
        partial.push_back(acc);
        last_mag = std::abs(pair.value);
        if (last_mag < 0.05 * s.abs_tol && m >= 3) break; // absolutely converged
    }

    Complex tail = partial.front();
    double accel_err = last_mag;
    if (partial.size() > 1) {
        std::vector<Complex> row = partial;
        Complex best = row.front();
        Complex prev = best;
        Complex prev2 = best;
        while (row.size() > 1) {
            for (std::size_t i = 0; i + 1 < row.size(); ++i)
                row[i] = 0.5 * (row[i] + row[i + 1]);
            row.pop_back();
            prev2 = prev;
            prev = best;
            best = row.front();
        }
        tail = best;
        accel_err = 2.0 * (std::abs(best - prev) + std::abs(prev - prev2));
    }

    QuadratureResult out;
    out.value = sign * (central.value + tail);
    out.error_estimate = central.error_estimate + panel_err + accel_err;
    out.evaluations = evals;
    out.converged =
        out.error_estimate <= std::max(s.abs_tol, s.rel_tol * std::abs(out.value));
    out.tail_panels = static_cast<int>(partial.size());
    return out;
}

} // namespace

QuadratureResult integrate(const std::function<Complex(Complex)>& f,
                           const ContourPath& path, const QuadratureSettings& s) {
    s.validate();
    if (!f) throw std::invalid_argument("integrate: integrand must be callable");

    if (path.kind() == ContourPath::Kind::TubeLoop) return trapezoid_loop(f, path, s);
    if (path.kind() == ContourPath::Kind::HorizontalLine &&
        s.tail_panel_width > 0.0)
        return line_with_tails(f, path, s);

    auto g = [&](double sp) { return f(path.position(sp)) * path.derivative(sp); };
    std::vector<double> bp;
    if (path.kind() == ContourPath::Kind::TracedPolyline) {
        // One initial panel per straight piece keeps kinks off panel interiors.
        const auto& nodes = path.nodes();
        bp.reserve(nodes.size());
        double acc = 0.0;
        bp.push_back(0.0);
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            acc += std::abs(nodes[i] - nodes[i - 1]);
            bp.push_back(acc);
        }
        bp.back() = path.s_end();
    } else if (path.kind() == ContourPath::Kind::HorizontalLine) {
        bp = {0.0, path.s_end() / 2.0, path.s_end()};
    } else {
        bp = {0.0, path.s_end()};
    }
    return adaptive_gk(g, bp, s);
}

// ---------------------------------------------------------------------------
// steepest-descent tracing

void TraceSettings::validate() const {
    if (!(std::isfinite(depth) && depth > 0.0))
        throw std::invalid_argument("TraceSettings: depth must be > 0");
    if (!(std::isfinite(seed_offset) && seed_offset > 0.0))
        throw std::invalid_argument("TraceSettings: seed_offset must be > 0");
    if (!(std::isfinite(initial_step) && initial_step > 0.0))
        throw std::invalid_argument("TraceSettings: initial_step must be > 0");
    if (!(max_step >= initial_step))
        throw std::invalid_argument("TraceSettings: max_step must be >= initial_step");
    if (!(min_step > 0.0 && min_step <= initial_step))
        throw std::invalid_argument("TraceSettings: min_step must be in (0, initial_step]");
    if (!(std::isfinite(step_tol) && step_tol > 0.0))
        throw std::invalid_argument("TraceSettings: step_tol must be > 0");
    if (!(std::isfinite(phase_tol) && phase_tol > 0.0))
        throw std::invalid_argument("TraceSettings: phase_tol must be > 0");
    if (max_nodes < 16)
        throw std::invalid_argument("TraceSettings: max_nodes must be >= 16");
}

namespace {

// Phase function h(xi) = k(xi) - omega(xi)/V on the tube, where it is entire;
// tracing here avoids the branch cuts of k(omega) entirely.
struct PhaseOnTube {
    double omega_co, c, V;

    [[nodiscard]] Complex h(Complex xi) const {
        return Complex(0.0, omega_co / c) * std::cos(xi) -
               (omega_co / V) * std::sin(xi);
    }
    [[nodiscard]] Complex dh(Complex xi) const {
        return Complex(0.0, -omega_co / c) * std::sin(xi) -
               (omega_co / V) * std::cos(xi);
    }
    [[nodiscard]] Complex d2h(Complex xi) const { return -h(xi); }

    /// Unit-speed descent flow: conserves Re(h), increases Im(h) at rate |dh|.
    [[nodiscard]] Complex flow(Complex xi) const {
        const Complex d = dh(xi);
        const double mag = std::abs(d);
        if (mag < 1e-300)
            throw std::runtime_error("trace_descent: flow degenerate (at a saddle?)");
        return Complex(0.0, 1.0) * std::conj(d) / mag;
    }
};

Complex rk4_step(const PhaseOnTube& ph, Complex xi, double ds) {
    const Complex k1 = ph.flow(xi);
    const Complex k2 = ph.flow(xi + 0.5 * ds * k1);
    const Complex k3 = ph.flow(xi + 0.5 * ds * k2);
    const Complex k4 = ph.flow(xi + ds * k3);
    return xi + (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Newton correction transverse to the flow, restoring Re(h) = target.
Complex project_to_phase(const PhaseOnTube& ph, Complex xi, double target,
                         double tol) {
    for (int it = 0; it < 8; ++it) {
        const double d = ph.h(xi).real() - target;
        if (std::abs(d) <= tol) break;
        const Complex grad = ph.dh(xi);
        const double g2 = std::norm(grad);
        if (g2 < 1e-300) break;
        xi -= d * std::conj(grad) / g2;
    }
    return xi;
}

std::vector<Complex> march_arm(const PhaseOnTube& ph, Complex xi_s, double theta,
                               double dxi_mag, double phase_c, double im_h0,
                               const TraceSettings& s, double proj_tol) {
    std::vector<Complex> arm;
    Complex xi = xi_s + std::polar(dxi_mag, theta);
    xi = project_to_phase(ph, xi, phase_c, proj_tol);
    arm.push_back(xi);
    double step = std::min(s.initial_step, 10.0 * dxi_mag);
    while (ph.h(xi).imag() - im_h0 < s.depth) {
        const Complex full = rk4_step(ph, xi, step);
        const Complex half = rk4_step(ph, rk4_step(ph, xi, 0.5 * step), 0.5 * step);
        const double err = std::abs(full - half);
        if (err > s.step_tol && step > s.min_step) {
            step = std::max(s.min_step, 0.5 * step);
            continue;
        }
        xi = project_to_phase(ph, half, phase_c, proj_tol);
        arm.push_back(xi);
        if (arm.size() > static_cast<std::size_t>(s.max_nodes))
            throw std::runtime_error("trace_descent: node budget exhausted");
        if (err < 0.0625 * s.step_tol) step = std::min(s.max_step, 1.6 * step);
    }
    return arm;
}

} // namespace

DescentTrace trace_descent(const SaddleData& saddle, int branch_sign,
                           const WaveguideParams& p, const TraceSettings& s) {
    s.validate();
    p.validate();
    if (branch_sign != 1 && branch_sign != -1)
        throw std::invalid_argument("trace_descent: branch_sign must be +1 or -1");
    if (!(saddle.V > 0.0 && saddle.V < p.c))
        throw std::domain_error("trace_descent: requires 0 < V < c");

    const PhaseOnTube ph{p.omega_co, p.c, saddle.V};
    const Complex xi_plus = saddle.xi_star.value();
    const Complex xi_s = branch_sign > 0 ? xi_plus : xi_plus - pi;

    const Complex hpp = ph.d2h(xi_s);
    if (std::abs(hpp) < 1e-300)
        throw std::runtime_error("trace_descent: degenerate saddle");
    // Descent axis: h''(xi) e^{2 i theta} purely positive imaginary.
    double theta = 0.5 * (pi / 2.0 - std::arg(hpp));
    if (std::cos(theta) < 0.0) theta += pi; // exit arm runs toward larger Re
    const double theta_exit = theta;
    const double theta_enter = theta + pi;

    const double phase_c = ph.h(xi_s).real();
    const double im_h0 = ph.h(xi_s).imag();
    const double h_scale = p.omega_co * (1.0 / p.c + 1.0 / saddle.V);
    const double proj_tol = 1e-13 * h_scale;

    const double omega_rate = std::abs(p.omega_co * std::cos(xi_s));
    double dxi_mag = s.seed_offset * p.omega_co /
                     std::max(omega_rate, 1e-12 * p.omega_co);
    dxi_mag = std::clamp(dxi_mag, 1e-9, 1e-3);

    const auto exit_arm =
        march_arm(ph, xi_s, theta_exit, dxi_mag, phase_c, im_h0, s, proj_tol);
    const auto enter_arm =
        march_arm(ph, xi_s, theta_enter, dxi_mag, phase_c, im_h0, s, proj_tol);

    DescentTrace tr;
    tr.saddle = saddle;
    tr.branch_sign = branch_sign;
    tr.phase_const = phase_c;
    tr.xi_nodes.reserve(enter_arm.size() + exit_arm.size() + 1);
    for (auto it = enter_arm.rbegin(); it != enter_arm.rend(); ++it)
        tr.xi_nodes.push_back(*it);
    tr.xi_nodes.push_back(xi_s);
    for (const Complex& z : exit_arm) tr.xi_nodes.push_back(z);

    double max_res = 0.0;
    for (const Complex& z : tr.xi_nodes)
        max_res = std::max(max_res, std::abs(ph.h(z).real() - phase_c));
    tr.max_phase_residual = max_res;
    tr.depth_reached =
        std::min(ph.h(tr.xi_nodes.front()).imag(), ph.h(tr.xi_nodes.back()).imag()) -
        im_h0;

    std::vector<Complex> omega_nodes;
    omega_nodes.reserve(tr.xi_nodes.size());
    for (const Complex& z : tr.xi_nodes) {
        const Complex w = p.omega_co * std::sin(z);
        if (omega_nodes.empty() || w != omega_nodes.back()) omega_nodes.push_back(w);
    }
    tr.nodes = ContourPath::traced_polyline(std::move(omega_nodes));
    return tr;
}

} // namespace kgwave
