#pragma once

#include <functional>
#include <vector>

#include "kgwave/dispersion.hpp"
#include "kgwave/types.hpp"

namespace kgwave {

/**
 * Oriented integration path in a complex plane.  Four shapes cover every
 * contour the field evaluators need:
 *
 *  - Segment:        straight line between two complex endpoints,
 *  - HorizontalLine: Im = epsilon, Re in [-half_width, half_width],
 *  - TubeLoop:       the closed curve Re(xi) in [-pi/2, 3*pi/2) at fixed
 *                    Im(xi) = height (periodic in the parameter),
 *  - TracedPolyline: numerically traced nodes joined by straight pieces,
 *                    parametrised by cumulative chord length.
 *
 * position(s) and derivative(s) are with respect to the scalar parameter
 * s in [s_begin, s_end].  reversed() flips orientation; integrals over the
 * reversed path are the exact negation of the original.
 */
class ContourPath {
  public:
    enum class Kind { Segment, HorizontalLine, TubeLoop, TracedPolyline };

    /// Default state is an empty path; using it throws std::logic_error.
    ContourPath() = default;

    [[nodiscard]] static ContourPath segment(Complex a, Complex b);
    [[nodiscard]] static ContourPath horizontal_line(double epsilon, double half_width);
    [[nodiscard]] static ContourPath tube_loop(double height);
    /// nodes.size() >= 2; consecutive duplicates are rejected.
    [[nodiscard]] static ContourPath traced_polyline(std::vector<Complex> nodes);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] bool periodic() const { return kind_ == Kind::TubeLoop; }
    [[nodiscard]] bool reversed_orientation() const { return reversed_; }

    [[nodiscard]] double s_begin() const { return 0.0; }
    [[nodiscard]] double s_end() const { return length_; }

    /// Point on the path; s outside [s_begin, s_end] throws std::domain_error.
    [[nodiscard]] Complex position(double s) const;
    /// d(position)/ds including the orientation sign.
    [[nodiscard]] Complex derivative(double s) const;

    [[nodiscard]] ContourPath reversed() const;

    /// Polyline nodes (TracedPolyline only).
    [[nodiscard]] const std::vector<Complex>& nodes() const;

  private:
    Kind kind_ = Kind::Segment;
    bool reversed_ = false;
    double length_ = 0.0;
    Complex a_, b_;                 // Segment
    double epsilon_ = 0.0;          // HorizontalLine
    double half_width_ = 0.0;       // HorizontalLine
    double height_ = 0.0;           // TubeLoop
    std::vector<Complex> nodes_;    // TracedPolyline
    std::vector<double> cumlen_;    // TracedPolyline, node parameters
};

/** Accuracy and cost controls for integrate(). */
struct QuadratureSettings {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    int max_intervals = 4000;  ///< adaptive bisection budget
    int tube_nodes = 256;      ///< trapezoid nodes for periodic loops
    /// Oscillatory-tail handling for horizontal lines: panel width (0 = plain
    /// adaptive over the whole range), start of the tail region, panel budget.
    double tail_panel_width = 0.0;
    double tail_start = 0.0;
    int max_tail_panels = 96;

    void validate() const;
};

/** Result of a path integral with an a-posteriori error estimate. */
struct QuadratureResult {
    Complex value{0.0, 0.0};
    double error_estimate = 0.0;
    long evaluations = 0;
    bool converged = false;
    /// Half-period panels consumed by the oscillatory-tail rule; 0 whenever
    /// the plain adaptive rule ran instead (callers needing a hard-cutoff
    /// truncation bound key off this).
    int tail_panels = 0;
};

/**
 * Integrate f along the path.  Periodic loops use the equispaced trapezoid
 * rule (spectrally accurate for analytic integrands; the error estimate
 * compares against the half-resolution rule).  Segments and polylines use
 * adaptive Gauss-Kronrod 7/15.  Horizontal lines add mirrored fixed-width
 * tail panels with iterated averaging when tail_panel_width > 0, which
 * converges the slowly decaying oscillatory tails far faster than bisection.
 */
[[nodiscard]] QuadratureResult integrate(const std::function<Complex(Complex)>& f,
                                         const ContourPath& path,
                                         const QuadratureSettings& s = {});

/** Controls for steepest-descent path tracing. */
struct TraceSettings {
    double depth = 30.0;        ///< stop once Im(h) has risen by this much
    double seed_offset = 1e-6;  ///< initial displacement, units of omega_co
    double initial_step = 1e-3; ///< arc-length steps in the tube chart
    double max_step = 0.05;
    double min_step = 1e-12;
    double step_tol = 1e-10;    ///< local error target for step control
    double phase_tol = 1e-8;    ///< allowed |Re h - const| drift per node
    int max_nodes = 200000;

    void validate() const;
};

/**
 * One steepest-descent curve through a saddle of h = k(omega) - omega/V.
 * The trace is computed in the tube chart, where h is entire; `nodes` is the
 * same curve pushed to the omega plane.  Orientation runs in the direction of
 * increasing Re(xi) through the saddle.
 */
struct DescentTrace {
    SaddleData saddle;
    int branch_sign = +1;           ///< +1: saddle at +omega_star, -1: mirror
    ContourPath nodes;              ///< TracedPolyline in the omega plane
    std::vector<Complex> xi_nodes;  ///< same nodes in the tube chart
    double phase_const = 0.0;       ///< Re(h) on the curve
    double max_phase_residual = 0.0;
    double depth_reached = 0.0;     ///< Im(h) rise at the endpoints
};

/**
 * Trace the constant-phase curve through the saddle selected by branch_sign
 * for observation speed V = saddle.V (0 < V < c required).  Both arms are
 * marched with an adaptive RK4 on the unit descent flow and re-projected onto
 * Re(h) = const after every step, so the phase is conserved to roundoff.
 */
[[nodiscard]] DescentTrace trace_descent(const SaddleData& saddle, int branch_sign,
                                         const WaveguideParams& p,
                                         const TraceSettings& s = {});

} // namespace kgwave
