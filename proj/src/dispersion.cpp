#include "kgwave/dispersion.hpp"

#include <cmath>
#include <string>

namespace kgwave {

namespace {
// The tube chart collapses at omega_co = 0; the chart operations refuse it
// even though WaveguideParams itself allows the pure-wave-equation limit.
void require_cutoff(const WaveguideParams& p, const char* what) {
    p.validate();
    if (!(p.omega_co > 0.0))
        throw std::domain_error(std::string(what) + ": requires omega_co > 0");
}
} // namespace

Complex dispersion_residual(Complex omega, Complex k, const WaveguideParams& p) {
    detail::require_finite(omega, "omega");
    detail::require_finite(k, "k");
    return omega * omega - (p.c * p.c) * k * k - p.omega_co * p.omega_co;
}

Complex wavenumber_branch(Complex omega, const WaveguideParams& p) {
    detail::require_finite(omega, "omega");
    if (omega.imag() == 0.0) {
        // Limit from Im(omega) -> 0+.  The principal square root lands on the
        // wrong side of the cut for real omega < -omega_co, so the real axis
        // is handled explicitly.
        const double w = omega.real();
        const double wc = p.omega_co;
        if (std::abs(w) <= wc)
            return Complex(0.0, std::sqrt((wc - w) * (wc + w)) / p.c);
        const double kr = std::sqrt((w - wc) * (w + wc)) / p.c;
        return Complex(w > 0.0 ? kr : -kr, 0.0);
    }
    const Complex arg = p.omega_co * p.omega_co - omega * omega;
    return Complex(0.0, 1.0) * std::sqrt(arg) / p.c;
}

Complex wavenumber_derivative(Complex omega, const WaveguideParams& p) {
    const Complex k = wavenumber_branch(omega, p);
    if (k == Complex(0.0, 0.0))
        throw std::domain_error("wavenumber_derivative: branch point, k(omega) = 0");
    return omega / (p.c * p.c * k);
}

double group_velocity(double omega, const WaveguideParams& p) {
    detail::require_finite(omega, "omega");
    if (!(omega > p.omega_co))
        throw std::domain_error("group_velocity: requires omega > omega_co");
    return p.c * std::sqrt((omega - p.omega_co) * (omega + p.omega_co)) / omega;
}

DispersionPoint tube_to_plane(const TubeCoordinate& xi, const WaveguideParams& p) {
    require_cutoff(p, "tube_to_plane");
    const Complex z = xi.value();
    return {p.omega_co * std::sin(z),
            Complex(0.0, 1.0) * (p.omega_co / p.c) * std::cos(z)};
}

DispersionPoint tube_embedding_derivative(const TubeCoordinate& xi,
                                          const WaveguideParams& p) {
    require_cutoff(p, "tube_embedding_derivative");
    const Complex z = xi.value();
    return {p.omega_co * std::cos(z),
            Complex(0.0, -1.0) * (p.omega_co / p.c) * std::sin(z)};
}

TubeCoordinate plane_to_tube(Complex omega, Complex k, const WaveguideParams& p,
                             double tol) {
    require_cutoff(p, "plane_to_tube");
    detail::require_finite(omega, "omega");
    detail::require_finite(k, "k");
    if (!(std::isfinite(tol) && tol > 0.0))
        throw std::invalid_argument("plane_to_tube: tol must be > 0");
    const double scale = p.omega_co * p.omega_co;
    const Complex res = dispersion_residual(omega, k, p);
    if (std::abs(res) > tol * scale)
        throw std::domain_error("plane_to_tube: point is off the dispersion manifold");
    // omega - c k = -i omega_co exp(i xi) and omega + c k = i omega_co
    // exp(-i xi); whichever exponential has modulus >= 1 is formed without
    // cancellation, so the log recovers xi to full precision on both half
    // strips.  The strip normalisation is handled by TubeCoordinate.
    const Complex up = Complex(0.0, 1.0) * (omega - p.c * k) / p.omega_co;
    const Complex down = Complex(0.0, -1.0) * (omega + p.c * k) / p.omega_co;
    const Complex xi = std::abs(up) >= std::abs(down)
                           ? Complex(0.0, -1.0) * std::log(up)
                           : Complex(0.0, 1.0) * std::log(down);
    return TubeCoordinate(xi);
}

HyperbolicCoords spacetime_to_hyperbolic(const SpacetimePoint& pt,
                                         const WaveguideParams& p) {
    if (pt.region(p) != FrontRegion::AfterFront)
        throw std::domain_error(
            "spacetime_to_hyperbolic: point must lie strictly inside the cone");
    const double tau = pt.x / p.c;
    HyperbolicCoords h;
    h.r = std::sqrt((pt.t - tau) * (pt.t + tau));
    h.eta = Complex(-pi / 2.0, std::atanh(pt.x / (p.c * pt.t)));
    return h;
}

SaddleData saddle_points(double V, const WaveguideParams& p) {
    require_cutoff(p, "saddle_points");
    detail::require_finite(V, "V");
    if (!(V >= 0.0 && V < p.c))
        throw std::domain_error("saddle_points: requires 0 <= V < c");
    SaddleData s;
    s.V = V;
    const double beta = V / p.c;
    s.omega_star = p.omega_co / std::sqrt((1.0 - beta) * (1.0 + beta));
    s.xi_star = TubeCoordinate(Complex(pi / 2.0, std::atanh(beta)));
    return s;
}

double saddle_residual(const SaddleData& s, const WaveguideParams& p) {
    if (!(s.V > 0.0))
        throw std::domain_error("saddle_residual: requires V > 0");
    const Complex dk = wavenumber_derivative(Complex(s.omega_star, 0.0), p);
    return std::abs(dk - Complex(1.0 / s.V, 0.0));
}

std::vector<DiagramSample> sample_diagram(const WaveguideParams& p,
                                          double omega_max, int n) {
    require_cutoff(p, "sample_diagram");
    detail::require_finite(omega_max, "omega_max");
    if (!(omega_max > 0.0))
        throw std::invalid_argument("sample_diagram: omega_max must be > 0");
    if (n < 2)
        throw std::invalid_argument("sample_diagram: need at least 2 samples");
    std::vector<DiagramSample> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double w = omega_max * static_cast<double>(i) / (n - 1);
        DiagramSample d;
        d.omega = w;
        if (w <= p.omega_co) {
            d.branch = BranchKind::Evanescent;
            d.k_magnitude = std::sqrt((p.omega_co - w) * (p.omega_co + w)) / p.c;
        } else {
            d.branch = BranchKind::Propagating;
            d.k_magnitude = std::sqrt((w - p.omega_co) * (w + p.omega_co)) / p.c;
        }
        // Squared coordinates: the diagram is the line W = c^2 K + omega_co^2,
        // with K < 0 on the evanescent branch.
        d.W = w * w;
        d.K = (w - p.omega_co) * (w + p.omega_co) / (p.c * p.c);
        out.push_back(d);
    }
    return out;
}

} // namespace kgwave
