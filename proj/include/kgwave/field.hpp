#pragma once

#include <string>
#include <vector>

#include "kgwave/contour.hpp"
#include "kgwave/specfun.hpp"
#include "kgwave/types.hpp"

namespace kgwave {

/// Independent routes to the causal response u(t, x).
enum class FieldMethod {
    Exact,           ///< closed form via J0
    TubeLoop,        ///< loop integral in the tube chart
    SaddleHeightLoop,///< same loop lifted to the height of the saddles
    SpectralLine,    ///< frequency integral on Im(omega) = epsilon
    FarAsymptotic,   ///< two-saddle stationary-phase form
    NearAsymptotic,  ///< leading behaviour just inside the front
    SteepestDescent, ///< quadrature along traced descent curves
};

[[nodiscard]] std::string to_string(FieldMethod m);
[[nodiscard]] FieldMethod field_method_from_string(const std::string& name);
[[nodiscard]] const std::vector<FieldMethod>& all_field_methods();

/** One evaluation of the field by one method. */
struct FieldSample {
    SpacetimePoint point;
    FieldMethod method = FieldMethod::Exact;
    Complex value{0.0, 0.0};
    double error_estimate = 0.0;
    bool converged = true;
    std::string validity_note; ///< empty when the method is fully applicable
};

/** Shared knobs for evaluate(); method-specific fields are ignored. */
struct FieldSettings {
    int n_nodes = 256;       ///< loop-quadrature resolution
    double epsilon = 0.0;    ///< spectral-line height; 0 = 0.1 * omega_co
    QuadratureSettings quadrature;
    TraceSettings trace;
    BesselSettings bessel;
};

/// Loop integral of exp(i(k(xi) x - omega(xi) t)) over the base tube loop.
/// When omega_co*|x|/c is large enough that the base-loop integrand's modulus
/// range exp(+-omega_co x/c) drowns the result in roundoff, the loop is slid
/// (value unchanged, the integrand being analytic on the whole cylinder) to a
/// height where the integrand is well conditioned, and the sample carries a
/// validity note saying so.
[[nodiscard]] FieldSample field_tube_loop(const SpacetimePoint& pt,
                                          const WaveguideParams& p,
                                          int n_nodes = 256);

/// The same loop shifted to Im(xi) = artanh(V/c), through both saddles.
[[nodiscard]] FieldSample field_saddle_height_loop(const SpacetimePoint& pt,
                                                   const WaveguideParams& p,
                                                   int n_nodes = 256);

/**
 * Frequency-plane evaluation on the line Im(omega) = epsilon > 0.  Valid at
 * any t > 0, x >= 0; convergence degrades as the point approaches the front.
 */
[[nodiscard]] FieldSample field_spectral_line(const SpacetimePoint& pt,
                                              const WaveguideParams& p,
                                              double epsilon,
                                              const QuadratureSettings& qs = {});

/**
 * Stationary-phase approximation
 *   u ~ -cos(omega_co r - pi/4) / (c sqrt(2 pi omega_co r))
 * inside the cone.  Accurate for omega_co r >> 1; the sample carries a
 * validity note once omega_co r < 5.
 */
[[nodiscard]] FieldSample field_far_asymptotic(const SpacetimePoint& pt,
                                               const WaveguideParams& p);

/**
 * Leading near-front behaviour: the constant -1/(2c) inside the cone, with
 * the first correction (omega_co r)^2/(8c) reported as the error scale;
 * notes reduced validity once omega_co r > 0.3.
 */
[[nodiscard]] FieldSample field_near_asymptotic(const SpacetimePoint& pt,
                                                const WaveguideParams& p);

/**
 * Field by numerical quadrature along the traced steepest-descent curves of
 * both saddles at V = x/t.  Requires 0 < x < c t.
 */
[[nodiscard]] FieldSample field_steepest_descent(const SpacetimePoint& pt,
                                                 const WaveguideParams& p,
                                                 const TraceSettings& ts = {},
                                                 const QuadratureSettings& qs = {});

/** Uniform front end: dispatch on method with shared settings. */
[[nodiscard]] FieldSample evaluate(const SpacetimePoint& pt, const WaveguideParams& p,
                                   FieldMethod method, const FieldSettings& s = {});

} // namespace kgwave
