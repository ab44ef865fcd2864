#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kgwave {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/** Medium parameters of the waveguide: propagation speed and cut-off frequency. */
struct WaveguideParams {
    double c = 1.0;        ///< signal speed, length/time
    double omega_co = 1.0; ///< cut-off (angular) frequency, 1/time

    WaveguideParams() = default;
    WaveguideParams(double c_, double omega_co_) : c(c_), omega_co(omega_co_) {
        validate();
    }

    /**
     * omega_co = 0 is legal (pure wave equation, used by the time-domain
     * solver as a degenerate check); operations built on the tube chart
     * require omega_co > 0 and enforce that themselves.
     */
    void validate() const {
        if (!(std::isfinite(c) && c > 0.0))
            throw std::invalid_argument("WaveguideParams: c must be finite and > 0");
        if (!(std::isfinite(omega_co) && omega_co >= 0.0))
            throw std::invalid_argument("WaveguideParams: omega_co must be finite and >= 0");
    }
};

/// Position of an observation point relative to the light front x = c t.
enum class FrontRegion { BeforeFront, OnFront, AfterFront };

/**
 * Observation point (t, x) with t >= 0.  The field is even in x, so the
 * distance is stored as |x|; evaluators exploit that symmetry throughout.
 */
struct SpacetimePoint {
    double t = 0.0;
    double x = 0.0;

    SpacetimePoint() = default;
    SpacetimePoint(double t_, double x_) : t(t_), x(std::abs(x_)) {
        if (!std::isfinite(t_) || !std::isfinite(x_))
            throw std::invalid_argument("SpacetimePoint: coordinates must be finite");
        if (t_ < 0.0)
            throw std::invalid_argument("SpacetimePoint: t must be >= 0");
    }

    [[nodiscard]] FrontRegion region(const WaveguideParams& p) const {
        const double front = p.c * t;
        if (x < front) return FrontRegion::AfterFront;
        if (x > front) return FrontRegion::BeforeFront;
        return FrontRegion::OnFront;
    }
};

/**
 * Point on the dispersion manifold in the tube chart, omega = omega_co sin(xi),
 * k = i (omega_co / c) cos(xi).  The real part is normalised to the fundamental
 * strip [-pi/2, 3*pi/2); one period of Re(xi) covers the manifold once.
 */
class TubeCoordinate {
  public:
    TubeCoordinate() : xi_(0.0, 0.0) {}

    explicit TubeCoordinate(Complex xi) {
        if (!std::isfinite(xi.real()) || !std::isfinite(xi.imag()))
            throw std::invalid_argument("TubeCoordinate: xi must be finite");
        double re = std::fmod(xi.real() + pi / 2.0, 2.0 * pi);
        if (re < 0.0) re += 2.0 * pi;
        re -= pi / 2.0;
        // fmod can land exactly on the excluded right edge after rounding
        if (re >= 1.5 * pi) re -= 2.0 * pi;
        xi_ = Complex(re, xi.imag());
    }

    [[nodiscard]] Complex value() const { return xi_; }

  private:
    Complex xi_;
};

/** Hyperbolic chart of the interior of the light cone. */
struct HyperbolicCoords {
    double r = 0.0;    ///< invariant radius sqrt(t^2 - x^2/c^2), time units
    Complex eta;       ///< complex angle; Re(eta) = -pi/2 on the physical slice
};

/** Stationary point of the spectral phase for observation speed V = x/t. */
struct SaddleData {
    double V = 0.0;          ///< observation speed, 0 <= V < c
    double omega_star = 0.0; ///< saddle frequency omega_co / sqrt(1 - V^2/c^2)
    TubeCoordinate xi_star;  ///< tube coordinate of the +frequency saddle
};

/// Classification of a real-frequency dispersion sample.
enum class BranchKind { Propagating, Evanescent };

/**
 * One row of a dispersion diagram.  For evanescent samples k_magnitude holds
 * the decay rate |k| (the wavenumber itself is i*k_magnitude).  W = omega^2
 * and K = k^2 (negative on the evanescent branch), in which coordinates the
 * diagram is the straight line W = c^2 K + omega_co^2.
 */
struct DiagramSample {
    double omega = 0.0;
    double k_magnitude = 0.0;
    BranchKind branch = BranchKind::Propagating;
    double W = 0.0;
    double K = 0.0;
};

namespace detail {
inline void require_finite(Complex z, const char* what) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument(std::string(what) + " must be finite");
}
inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x))
        throw std::invalid_argument(std::string(what) + " must be finite");
}
} // namespace detail

} // namespace kgwave
