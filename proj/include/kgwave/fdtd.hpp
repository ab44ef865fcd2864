#pragma once

#include <vector>

#include "kgwave/specfun.hpp"
#include "kgwave/types.hpp"

namespace kgwave {

/**
 * Configuration of the leapfrog reference simulation on [-L, L].  The time
 * step is dt = cfl * dx / c; the scheme is stable iff
 * cfl^2 + (omega_co dt / 2)^2 <= 1, which validate() enforces.
 */
struct FdtdConfig {
    WaveguideParams params;
    double dx = 8e-3;
    double cfl = 0.9;
    double half_width = 0.0; ///< 0 = auto: c*t_end + small margin
    double t_end = 10.0;
    int snapshot_stride = 0; ///< full-grid snapshots every n steps; 0 = none

    [[nodiscard]] double dt() const { return cfl * dx / params.c; }
    void validate() const;
};

struct ProbeSample {
    SpacetimePoint point;
    double value = 0.0;
};

struct GridSnapshot {
    double time = 0.0;
    std::vector<double> u;
};

struct FdtdResult {
    double dx = 0.0;
    double dt = 0.0;
    double grid_origin = 0.0; ///< x of node 0
    std::vector<ProbeSample> probes;
    std::vector<GridSnapshot> snapshots;
};

/**
 * Second-order leapfrog integration of the cut-off wave equation with a unit
 * impulse at the origin.  The impulse is realised through the second time
 * level: the cell average of the early-time box response, band-limited by a
 * binomial smoother.  This keeps the injected mass at exactly -dt while
 * leaving the upper half of the grid band empty, so the slow spurious modes
 * of the stencil are never excited.  Probe values are linear-interpolated
 * in space and time.  Probes must satisfy t <= t_end and |x| <= half_width.
 */
[[nodiscard]] FdtdResult simulate(const FdtdConfig& cfg,
                                  const std::vector<SpacetimePoint>& probes);

struct ConvergenceLevel {
    double dx = 0.0;
    double max_error = 0.0;      ///< max probe deviation from the closed form
    double observed_order = 0.0; ///< log2(e_prev/e_this); NaN on the first level
};

/**
 * Run n_levels simulations, halving dx each time, and compare probes against
 * the closed-form response.  Probes should sit strictly inside the cone.
 */
[[nodiscard]] std::vector<ConvergenceLevel> convergence_study(
    const FdtdConfig& base, const std::vector<SpacetimePoint>& probes,
    int n_levels);

} // namespace kgwave
