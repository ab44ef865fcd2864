#include "kgwave/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "kgwave/dispersion.hpp"

namespace kgwave {

namespace {

const char* method_names[] = {
    "exact",           "tube-loop",       "saddle-height-loop", "spectral-line",
    "far-asymptotic",  "near-asymptotic", "steepest-descent",
};

constexpr double four_pi = 4.0 * pi;

FieldSample zero_outside_cone(const SpacetimePoint& pt, FieldMethod m) {
    FieldSample s;
    s.point = pt;
    s.method = m;
    s.value = Complex(0.0, 0.0);
    s.error_estimate = 0.0;
    s.converged = true;
    s.validity_note = "outside the light cone; the causal response vanishes identically";
    return s;
}

std::string note_with_scale(const char* fmt, double z) {
    char buf[160];
    std::snprintf(buf, sizeof buf, fmt, z);
    return buf;
}

/// Loop integrand exp(i(k(xi) x - omega(xi) t)) on the tube.
Complex loop_integrand(Complex xi, const SpacetimePoint& pt,
                       const WaveguideParams& p) {
    // i(kx - omega t) = -(omega_co x / c) cos(xi) - i omega_co t sin(xi)
    const Complex cz = std::cos(xi);
    const Complex sz = std::sin(xi);
    return std::exp(-(p.omega_co * pt.x / p.c) * cz -
                    Complex(0.0, 1.0) * (p.omega_co * pt.t) * sz);
}

/// Largest |Re exponent| the base loop tolerates before roundoff from the
/// integrand's big lobe swamps the small one: exp(12) * eps ~ 4e-11, inside
/// the 1e-10 quadrature budget.  Beyond it no node count helps.
constexpr double max_base_exponent = 12.0;

/// Loop height that tames the integrand when the base-loop exponent
/// omega_co*|x|/c is too large.  The integrand is analytic on the whole
/// cylinder, so the loop can be slid to any height without changing the
/// integral.  After the front the balanced height artanh(x/(c t)) cancels the
/// real part of the exponent identically (unit-modulus integrand); on the
/// front that height diverges, but sliding to sign(x)*log(z) shrinks the
/// modulus range from exp(+-z) to exp(+-1).
double conditioned_height(const SpacetimePoint& pt, const WaveguideParams& p) {
    const double z = p.omega_co * std::abs(pt.x) / p.c;
    if (z <= max_base_exponent) return 0.0;
    if (pt.region(p) == FrontRegion::AfterFront)
        return std::atanh(pt.x / (p.c * pt.t));
    return std::copysign(std::log(z), pt.x);
}

FieldSample loop_eval(const SpacetimePoint& pt, const WaveguideParams& p,
                      double height, int n_nodes, FieldMethod m) {
    QuadratureSettings qs;
    qs.tube_nodes = n_nodes;
    const ContourPath path = ContourPath::tube_loop(height);
    const QuadratureResult r = integrate(
        [&](Complex xi) { return loop_integrand(xi, pt, p); }, path, qs);
    FieldSample s;
    s.point = pt;
    s.method = m;
    s.value = -r.value / (four_pi * p.c);
    s.error_estimate = r.error_estimate / (four_pi * p.c);
    s.converged = r.converged;
    return s;
}

} // namespace

std::string to_string(FieldMethod m) {
    return method_names[static_cast<int>(m)];
}

FieldMethod field_method_from_string(const std::string& name) {
    for (const FieldMethod m : all_field_methods())
        if (name == method_names[static_cast<int>(m)]) return m;
    throw std::invalid_argument("unknown field method: " + name);
}

const std::vector<FieldMethod>& all_field_methods() {
    static const std::vector<FieldMethod> all = {
        FieldMethod::Exact,          FieldMethod::TubeLoop,
        FieldMethod::SaddleHeightLoop, FieldMethod::SpectralLine,
        FieldMethod::FarAsymptotic,  FieldMethod::NearAsymptotic,
        FieldMethod::SteepestDescent,
    };
    return all;
}

FieldSample field_tube_loop(const SpacetimePoint& pt, const WaveguideParams& p,
                            int n_nodes) {
    p.validate();
    if (pt.region(p) == FrontRegion::BeforeFront)
        return zero_outside_cone(pt, FieldMethod::TubeLoop);
    const double height = conditioned_height(pt, p);
    FieldSample s = loop_eval(pt, p, height, n_nodes, FieldMethod::TubeLoop);
    if (height != 0.0)
        s.validity_note =
            "base loop ill-conditioned at this exponent; contour slid to "
            "height " +
            std::to_string(height) + " (value unchanged by analyticity)";
    return s;
}

FieldSample field_saddle_height_loop(const SpacetimePoint& pt,
                                     const WaveguideParams& p, int n_nodes) {
    p.validate();
    switch (pt.region(p)) {
        case FrontRegion::BeforeFront:
            return zero_outside_cone(pt, FieldMethod::SaddleHeightLoop);
        case FrontRegion::OnFront: {
            const double height = conditioned_height(pt, p);
            FieldSample s = loop_eval(pt, p, height, n_nodes,
                                      FieldMethod::SaddleHeightLoop);
            s.validity_note = height == 0.0
                                  ? "on the front the saddle height diverges; "
                                    "evaluated on the base loop"
                                  : "on the front the saddle height diverges; "
                                    "evaluated on a conditioned loop height";
            return s;
        }
        case FrontRegion::AfterFront: break;
    }
    const double beta = pt.x / (p.c * pt.t);
    return loop_eval(pt, p, std::atanh(beta), n_nodes,
                     FieldMethod::SaddleHeightLoop);
}

FieldSample field_spectral_line(const SpacetimePoint& pt, const WaveguideParams& p,
                                double epsilon, const QuadratureSettings& qs) {
    p.validate();
    if (!(std::isfinite(epsilon) && epsilon > 0.0))
        throw std::invalid_argument("field_spectral_line: epsilon must be > 0");

    const double dphase = std::abs(pt.t - pt.x / p.c);
    const double tscale = pt.t > 0.0 ? pt.t : 1.0 / p.omega_co;
    const double T0 = 200.0 * std::max(p.omega_co, 1.0 / tscale);

    double u0 = std::max(3.0 * p.omega_co, 2.0 * epsilon);
    if (pt.t > 0.0 && pt.x < p.c * pt.t) {
        // Keep the real-axis stationary frequency inside the central region.
        const double beta = pt.x / (p.c * pt.t);
        u0 = std::max(u0, 1.5 * p.omega_co / std::sqrt((1.0 - beta) * (1.0 + beta)));
    }
    u0 = std::min(u0, 0.5 * T0);

    // Near the front the half-period widens like 1/|t - x/c|; stretch the
    // cutoff (within a fixed budget) so enough panels fit to accelerate.
    double T = T0;
    const double wp = dphase > 0.0 ? pi / dphase : 0.0;
    if (wp > 0.0)
        T = std::clamp(u0 + 17.5 * wp, T0, 50.0 * T0);
    else
        T = 50.0 * T0; // on the front only the cutoff length helps

    QuadratureSettings settings = qs;
    settings.tail_start = u0;
    settings.tail_panel_width = wp;

    auto f = [&](Complex omega) {
        const Complex k = wavenumber_branch(omega, p);
        return std::exp(Complex(0.0, 1.0) * (k * pt.x - omega * pt.t)) / k;
    };
    const QuadratureResult r =
        integrate(f, ContourPath::horizontal_line(epsilon, T), settings);

    FieldSample s;
    s.point = pt;
    s.method = FieldMethod::SpectralLine;
    const Complex scale = Complex(0.0, -1.0) / (four_pi * p.c * p.c);
    s.value = scale * r.value;
    s.error_estimate = r.error_estimate / (four_pi * p.c * p.c);
    s.converged = r.converged;
    if (r.tail_panels == 0) {
        // Plain cutoff integral: account for the discarded tails.  Beyond the
        // cutoff the mirrored integrand pair behaves like
        // -2ic sin(u (t - x/c) + x omega_co^2 / (2 c u)) / u, so the remainder
        // is bounded by the sum of its oscillatory and algebraic parts.
        double trunc = 1.5 * pt.x * p.omega_co * p.omega_co / T;
        if (dphase > 0.0) trunc += 2.0 * p.c / (T * dphase);
        trunc = std::min(trunc, pi * p.c);
        s.error_estimate += trunc / (four_pi * p.c * p.c);
        s.converged =
            s.converged && trunc <= std::max(qs.abs_tol, qs.rel_tol * std::abs(r.value));
        s.validity_note = "too close to the front for tail acceleration; "
                          "cutoff truncation dominates the estimate";
    } else if (r.tail_panels < 8) {
        s.validity_note = "close to the front few tail half-periods fit under "
                          "the frequency cutoff; acceleration is weak";
    }
    if (dphase == 0.0) {
        // At the jump the line integral converges to the midpoint of the
        // discontinuity, half the assigned on-front value.
        s.error_estimate += 1.0 / (4.0 * p.c);
        s.converged = false;
        s.validity_note = "on the front the line integral converges to the "
                          "midpoint of the field jump, half the on-front value";
    }
    return s;
}

FieldSample field_far_asymptotic(const SpacetimePoint& pt,
                                 const WaveguideParams& p) {
    p.validate();
    switch (pt.region(p)) {
        case FrontRegion::BeforeFront:
            return zero_outside_cone(pt, FieldMethod::FarAsymptotic);
        case FrontRegion::OnFront: {
            FieldSample s;
            s.point = pt;
            s.method = FieldMethod::FarAsymptotic;
            s.converged = false;
            s.validity_note = "stationary-phase amplitude is singular on the front";
            return s;
        }
        case FrontRegion::AfterFront: break;
    }
    const HyperbolicCoords h = spacetime_to_hyperbolic(pt, p);
    const double z = p.omega_co * h.r;
    const double amp = 1.0 / (p.c * std::sqrt(2.0 * pi * z));
    FieldSample s;
    s.point = pt;
    s.method = FieldMethod::FarAsymptotic;
    s.value = Complex(-amp * std::cos(z - pi / 4.0), 0.0);
    s.error_estimate = amp / (8.0 * z); // size of the next expansion order
    s.converged = true;
    if (z < 5.0)
        s.validity_note = note_with_scale(
            "far-zone form used at omega_co r = %.3g; intended for omega_co r >> 1",
            z);
    return s;
}

FieldSample field_near_asymptotic(const SpacetimePoint& pt,
                                  const WaveguideParams& p) {
    p.validate();
    switch (pt.region(p)) {
        case FrontRegion::BeforeFront:
            return zero_outside_cone(pt, FieldMethod::NearAsymptotic);
        case FrontRegion::OnFront: {
            FieldSample s;
            s.point = pt;
            s.method = FieldMethod::NearAsymptotic;
            s.value = Complex(-1.0 / (2.0 * p.c), 0.0);
            s.converged = true;
            return s;
        }
        case FrontRegion::AfterFront: break;
    }
    const HyperbolicCoords h = spacetime_to_hyperbolic(pt, p);
    const double z = p.omega_co * h.r;
    FieldSample s;
    s.point = pt;
    s.method = FieldMethod::NearAsymptotic;
    s.value = Complex(-1.0 / (2.0 * p.c), 0.0);
    s.error_estimate = z * z / (8.0 * p.c); // leading deviation term
    s.converged = true;
    if (z > 0.3)
        s.validity_note = note_with_scale(
            "near-front form used at omega_co r = %.3g; intended for omega_co r << 1",
            z);
    return s;
}

FieldSample field_steepest_descent(const SpacetimePoint& pt,
                                   const WaveguideParams& p,
                                   const TraceSettings& ts,
                                   const QuadratureSettings& qs) {
    p.validate();
    if (pt.region(p) == FrontRegion::BeforeFront)
        return zero_outside_cone(pt, FieldMethod::SteepestDescent);
    if (pt.region(p) == FrontRegion::OnFront) {
        FieldSample s;
        s.point = pt;
        s.method = FieldMethod::SteepestDescent;
        s.converged = false;
        s.validity_note = "descent geometry degenerates on the front (V = c)";
        return s;
    }
    if (pt.x == 0.0)
        throw std::domain_error(
            "field_steepest_descent: requires x > 0 so that V = x/t > 0");

    const double V = pt.x / pt.t;
    const SaddleData saddle = saddle_points(V, p);

    // Ensure the truncated ends contribute below ~exp(-40) of the peak.
    TraceSettings ts_eff = ts;
    ts_eff.depth = std::max(ts.depth, 40.0 / pt.x);

    Complex total{0.0, 0.0};
    double err = 0.0;
    bool converged = true;
    for (const int sign : {+1, -1}) {
        const DescentTrace tr = trace_descent(saddle, sign, p, ts_eff);
        const ContourPath path = ContourPath::traced_polyline(tr.xi_nodes);
        auto f = [&](Complex xi) {
            const Complex h = Complex(0.0, p.omega_co / p.c) * std::cos(xi) -
                              (p.omega_co / V) * std::sin(xi);
            return std::exp(Complex(0.0, pt.x) * h);
        };
        const QuadratureResult r = integrate(f, path, qs);
        total += r.value;
        err += r.error_estimate;
        converged = converged && r.converged;
        // Truncated-tail bound at both endpoints.
        for (const Complex& end : {tr.xi_nodes.front(), tr.xi_nodes.back()}) {
            const Complex dh = Complex(0.0, -p.omega_co / p.c) * std::sin(end) -
                               (p.omega_co / V) * std::cos(end);
            const Complex h = Complex(0.0, p.omega_co / p.c) * std::cos(end) -
                              (p.omega_co / V) * std::sin(end);
            const double rate = pt.x * std::abs(dh);
            if (rate > 0.0) err += std::exp(-pt.x * h.imag()) / rate;
        }
    }

    FieldSample s;
    s.point = pt;
    s.method = FieldMethod::SteepestDescent;
    s.value = -total / (four_pi * p.c);
    s.error_estimate = err / (four_pi * p.c);
    s.converged = converged;
    return s;
}

FieldSample evaluate(const SpacetimePoint& pt, const WaveguideParams& p,
                     FieldMethod method, const FieldSettings& s) {
    if (s.n_nodes < 8)
        throw std::invalid_argument("FieldSettings: n_nodes must be >= 8");
    switch (method) {
        case FieldMethod::Exact: {
            FieldSample out;
            out.point = pt;
            out.method = FieldMethod::Exact;
            out.value = Complex(exact_field(pt, p, s.bessel), 0.0);
            out.error_estimate = s.bessel.target_abs_error / (2.0 * p.c);
            out.converged = true;
            return out;
        }
        case FieldMethod::TubeLoop:
            return field_tube_loop(pt, p, s.n_nodes);
        case FieldMethod::SaddleHeightLoop:
            return field_saddle_height_loop(pt, p, s.n_nodes);
        case FieldMethod::SpectralLine: {
            const double eps = s.epsilon > 0.0 ? s.epsilon : 0.1 * p.omega_co;
            return field_spectral_line(pt, p, eps, s.quadrature);
        }
        case FieldMethod::FarAsymptotic:
            return field_far_asymptotic(pt, p);
        case FieldMethod::NearAsymptotic:
            return field_near_asymptotic(pt, p);
        case FieldMethod::SteepestDescent:
            return field_steepest_descent(pt, p, s.trace, s.quadrature);
    }
    throw std::logic_error("evaluate: bad method");
}

} // namespace kgwave
