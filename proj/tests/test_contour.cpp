#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <kgwave/contour.hpp>
#include <kgwave/specfun.hpp>

using namespace kgwave;

namespace {
const WaveguideParams unit{1.0, 1.0};
const Complex I{0.0, 1.0};

Complex loop_around_square(const std::function<Complex(Complex)>& f) {
    const Complex c0{1.0, -1.0}, c1{1.0, 1.0}, c2{-1.0, 1.0}, c3{-1.0, -1.0};
    Complex acc{0.0, 0.0};
    for (const auto& [a, b] :
         {std::pair{c0, c1}, {c1, c2}, {c2, c3}, {c3, c0}})
        acc += integrate(f, ContourPath::segment(a, b)).value;
    return acc;
}
} // namespace

TEST_CASE("path construction, parameter range, orientation bookkeeping") {
    const ContourPath seg = ContourPath::segment(Complex(0, 0), Complex(1, 1));
    CHECK(seg.kind() == ContourPath::Kind::Segment);
    CHECK(!seg.periodic());
    CHECK(seg.s_begin() == 0.0);
    CHECK(seg.s_end() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(std::abs(seg.position(0.0)) == 0.0);
    CHECK(std::abs(seg.position(seg.s_end()) - Complex(1, 1)) < 1e-15);
    const Complex mid = seg.position(0.5 * seg.s_end());
    CHECK(std::abs(mid - Complex(0.5, 0.5)) < 1e-15);
    CHECK_THROWS_AS((void)seg.position(-0.1), std::domain_error);
    CHECK_THROWS_AS((void)seg.position(seg.s_end() + 0.1), std::domain_error);
    CHECK_THROWS_AS((void)seg.nodes(), std::logic_error);
    CHECK_THROWS_AS((void)ContourPath::segment(Complex(1, 1), Complex(1, 1)),
                    std::invalid_argument);

    const ContourPath rev = seg.reversed();
    CHECK(rev.reversed_orientation());
    CHECK(std::abs(rev.position(0.0) - Complex(1, 1)) < 1e-15);
    CHECK(std::abs(rev.derivative(0.3) + seg.derivative(seg.s_end() - 0.3)) < 1e-15);

    const ContourPath empty;
    CHECK_THROWS_AS((void)empty.position(0.0), std::logic_error);
    CHECK_THROWS_AS((void)empty.derivative(0.0), std::logic_error);

    const ContourPath loop = ContourPath::tube_loop(0.4);
    CHECK(loop.periodic());
    CHECK(loop.s_end() == doctest::Approx(2.0 * pi).epsilon(1e-15));
    CHECK(std::abs(loop.position(0.0) - Complex(-pi / 2.0, 0.4)) < 1e-15);

    CHECK_THROWS_AS((void)ContourPath::traced_polyline({Complex(0, 0)}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)ContourPath::traced_polyline(
                        {Complex(0, 0), Complex(0, 0), Complex(1, 0)}),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)ContourPath::horizontal_line(0.1, 0.0),
                    std::invalid_argument);
}

TEST_CASE("segment quadrature: constants, residue loop, path independence") {
    const QuadratureResult one =
        integrate([](Complex) { return Complex(1.0, 0.0); },
                  ContourPath::segment(Complex(0, 0), Complex(1, 1)));
    CHECK(one.converged);
    CHECK(std::abs(one.value - Complex(1, 1)) < 1e-13);

    // winding integral of 1/z around the unit square picks up the residue
    const Complex winding = loop_around_square([](Complex z) { return 1.0 / z; });
    CHECK(std::abs(winding - 2.0 * pi * I) < 1e-10);

    // an entire integrand only sees the endpoints
    const Complex target = std::pow(Complex(1, 1), 3) / 3.0;
    const Complex direct =
        integrate([](Complex z) { return z * z; },
                  ContourPath::segment(Complex(0, 0), Complex(1, 1)))
            .value;
    const Complex dogleg =
        integrate([](Complex z) { return z * z; },
                  ContourPath::traced_polyline({Complex(0, 0), Complex(0.3, 0.1),
                                                Complex(0.8, 0.9), Complex(1, 1)}))
            .value;
    CHECK(std::abs(direct - target) < 1e-12);
    CHECK(std::abs(dogleg - target) < 1e-12);

    // reversal negates the integral exactly
    const ContourPath seg = ContourPath::segment(Complex(-1, 0), Complex(2, 1));
    const auto f = [](Complex z) { return std::exp(z) / (z + Complex(0, 3)); };
    const Complex fwd = integrate(f, seg).value;
    const Complex bwd = integrate(f, seg.reversed()).value;
    CHECK(std::abs(fwd + bwd) < 1e-14);
}

TEST_CASE("periodic loop quadrature is spectral and deformation invariant") {
    // the loop parameter sweeps one full period: integral of d(xi) is 2*pi
    const QuadratureResult total =
        integrate([](Complex) { return Complex(1.0, 0.0); },
                  ContourPath::tube_loop(0.3));
    CHECK(total.converged);
    CHECK(std::abs(total.value - Complex(2.0 * pi, 0.0)) < 1e-13);

    // closed-loop average of exp(i z cos xi) reproduces the Bessel value
    for (const double z : {1.0, 5.0}) {
        const auto f = [z](Complex xi) { return std::exp(I * z * std::cos(xi)); };
        const Complex at0 = integrate(f, ContourPath::tube_loop(0.0)).value;
        const Complex at3 = integrate(f, ContourPath::tube_loop(0.3)).value;
        CHECK(std::abs(at0 - 2.0 * pi * bessel_j0(z)) < 1e-12);
        // height deformation leaves a periodic entire integrand unchanged
        CHECK(std::abs(at3 - at0) < 1e-10);
    }

    // halving the node count does not move a resolved answer
    QuadratureSettings coarse;
    coarse.tube_nodes = 128;
    const auto osc = [](Complex xi) { return std::exp(I * 30.0 * std::cos(xi)); };
    const Complex lo = integrate(osc, ContourPath::tube_loop(0.0), coarse).value;
    const Complex hi = integrate(osc, ContourPath::tube_loop(0.0)).value;
    CHECK(std::abs(lo - hi) < 1e-12);
}

TEST_CASE("horizontal line: analytic Gaussian and oscillatory tail handling") {
    // shifting a Gaussian off the real axis does not change its integral
    const QuadratureResult g =
        integrate([](Complex z) { return std::exp(-z * z); },
                  ContourPath::horizontal_line(0.5, 8.0));
    CHECK(g.converged);
    CHECK(std::abs(g.value - Complex(std::sqrt(pi), 0.0)) < 1e-12);

    // a slowly decaying oscillatory integrand: closing the contour gives
    // 2*pi*i*exp(-T) for the pole at z = i
    const double T = 3.0;
    const auto f = [T](Complex z) { return std::exp(I * T * z) / (z - I); };
    const Complex truth = 2.0 * pi * I * std::exp(-T);

    QuadratureSettings plain; // no tail rule: truncation error dominates
    const QuadratureResult cut =
        integrate(f, ContourPath::horizontal_line(0.01, 50.0), plain);
    CHECK(cut.tail_panels == 0);
    CHECK(std::abs(cut.value - truth) > 1e-5);

    QuadratureSettings accel = plain;
    accel.tail_panel_width = pi / T; // half oscillation period
    accel.tail_start = 10.0;
    const QuadratureResult tail =
        integrate(f, ContourPath::horizontal_line(0.01, 50.0), accel);
    CHECK(tail.converged);
    CHECK(tail.tail_panels > 0);
    CHECK(std::abs(tail.value - truth) < 1e-8);
    CHECK(std::abs(tail.value - truth) < 1e-3 * std::abs(cut.value - truth));
}

TEST_CASE("quadrature settings and integrand validation") {
    QuadratureSettings s;
    s.abs_tol = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = {};
    s.tube_nodes = 4;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = {};
    s.max_tail_panels = 1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    CHECK_THROWS_AS((void)integrate(nullptr, ContourPath::tube_loop(0.0)),
                    std::invalid_argument);
}

TEST_CASE("steepest-descent trace through the moving-observer saddle") {
    const SaddleData saddle = saddle_points(0.5, unit);
    const DescentTrace up = trace_descent(saddle, +1, unit);

    // phase level of the curve: Re h at the saddle is -sqrt(3) here
    CHECK(up.phase_const == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-9));
    CHECK(up.max_phase_residual <= 1e-8);
    CHECK(up.depth_reached >= 29.0);
    CHECK(up.branch_sign == +1);
    CHECK(up.nodes.kind() == ContourPath::Kind::TracedPolyline);
    REQUIRE(up.xi_nodes.size() >= 16);
    CHECK(up.xi_nodes.size() == up.nodes.nodes().size());

    // the traced nodes really live on the dispersion manifold image
    for (std::size_t i = 0; i < up.xi_nodes.size(); i += 97) {
        const DispersionPoint d = tube_to_plane(TubeCoordinate(up.xi_nodes[i]), unit);
        CHECK(std::abs(d.omega - up.nodes.nodes()[i]) < 1e-9);
    }

    // the mirror saddle carries the opposite phase level
    const DescentTrace down = trace_descent(saddle, -1, unit);
    CHECK(down.phase_const == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
    CHECK(down.max_phase_residual <= 1e-8);

    CHECK_THROWS_AS((void)trace_descent(saddle, 0, unit), std::invalid_argument);
    SaddleData still = saddle_points(0.0, unit);
    CHECK_THROWS_AS((void)trace_descent(still, +1, unit), std::domain_error);

    TraceSettings bad;
    bad.depth = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    TraceSettings bad2;
    bad2.max_step = 1e-6; // below initial_step
    CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
}
