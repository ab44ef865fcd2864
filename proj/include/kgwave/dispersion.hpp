#pragma once

#include <vector>

#include "kgwave/types.hpp"

namespace kgwave {

/** A point of the complex dispersion manifold in the (omega, k) plane. */
struct DispersionPoint {
    Complex omega;
    Complex k;
};

/// D(omega, k) = omega^2 - c^2 k^2 - omega_co^2; zero on the manifold.
[[nodiscard]] Complex dispersion_residual(Complex omega, Complex k,
                                          const WaveguideParams& p);

/**
 * Branch of k(omega) that is analytic in the open upper half-plane and equals
 * i*omega_co/c at omega = 0.  Real frequencies are evaluated as the limit from
 * Im(omega) -> 0+: propagating frequencies map to sign(omega)*sqrt(...)/c,
 * the stop band |omega| <= omega_co to i*sqrt(omega_co^2 - omega^2)/c.
 */
[[nodiscard]] Complex wavenumber_branch(Complex omega, const WaveguideParams& p);

/**
 * dk/domega = omega / (c^2 k) on the branch above.  Throws std::domain_error
 * at the branch points omega = +-omega_co where k vanishes.
 */
[[nodiscard]] Complex wavenumber_derivative(Complex omega, const WaveguideParams& p);

/**
 * Group velocity c*sqrt(omega^2 - omega_co^2)/omega for a propagating real
 * frequency omega > omega_co; throws std::domain_error otherwise.
 */
[[nodiscard]] double group_velocity(double omega, const WaveguideParams& p);

/// Embed a tube coordinate into the (omega, k) plane.
[[nodiscard]] DispersionPoint tube_to_plane(const TubeCoordinate& xi,
                                            const WaveguideParams& p);

/// d(omega)/d(xi) and dk/d(xi) of the embedding at xi.
[[nodiscard]] DispersionPoint tube_embedding_derivative(const TubeCoordinate& xi,
                                                        const WaveguideParams& p);

/**
 * Invert the tube embedding.  The pair (omega, k) must satisfy the dispersion
 * relation to within `tol` relative to omega_co^2, else std::domain_error.
 * The result is normalised to the fundamental strip and satisfies
 * tube_to_plane(plane_to_tube(omega, k)) == (omega, k) up to roundoff.
 */
[[nodiscard]] TubeCoordinate plane_to_tube(Complex omega, Complex k,
                                           const WaveguideParams& p,
                                           double tol = 1e-9);

/**
 * Hyperbolic chart of an interior point: r = sqrt(t^2 - x^2/c^2) and
 * eta = -pi/2 + i*artanh(x/(c t)).  Requires t > x/c (strictly after the
 * front); throws std::domain_error on or outside the light cone.
 */
[[nodiscard]] HyperbolicCoords spacetime_to_hyperbolic(const SpacetimePoint& pt,
                                                       const WaveguideParams& p);

/**
 * Stationary points of the phase k(omega)*x - omega*t at observation speed
 * V = x/t, 0 <= V < c: omega_star = omega_co/sqrt(1 - V^2/c^2), with tube
 * coordinate xi_star = pi/2 + i*artanh(V/c); the -frequency saddle sits at
 * xi_star - pi.  Throws std::domain_error for V outside [0, c).
 */
[[nodiscard]] SaddleData saddle_points(double V, const WaveguideParams& p);

/// |dk/domega(omega_star) - 1/V| for V > 0; stationarity check of the phase.
[[nodiscard]] double saddle_residual(const SaddleData& s, const WaveguideParams& p);

/**
 * Sample both real branches of the diagram on [0, omega_max]: the stop band
 * as evanescent decay rates, omega > omega_co as propagating wavenumbers.
 * n >= 2 equispaced frequencies.
 */
[[nodiscard]] std::vector<DiagramSample> sample_diagram(const WaveguideParams& p,
                                                        double omega_max, int n);

} // namespace kgwave
