#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include <kgwave/dispersion.hpp>

using namespace kgwave;

namespace {
const WaveguideParams unit{1.0, 1.0};

Complex fd_derivative(const std::function<Complex(Complex)>& f, Complex z,
                      double h) {
    return (f(z + Complex(h, 0.0)) - f(z - Complex(h, 0.0))) / (2.0 * h);
}
} // namespace

TEST_CASE("residual vanishes on the diagram and matches hand values off it") {
    CHECK(std::abs(dispersion_residual(Complex(1.0, 0.0), Complex(0.0, 0.0), unit)) == 0.0);
    CHECK(std::abs(dispersion_residual(Complex(0.0, 0.0), Complex(0.0, 1.0), unit)) == 0.0);
    CHECK(dispersion_residual(Complex(2.0, 0.0), Complex(0.0, 0.0), unit).real() ==
          doctest::Approx(3.0).epsilon(1e-15));

    const WaveguideParams p{2.0, 0.5};
    const Complex r = dispersion_residual(Complex(1.5, 0.25), Complex(0.3, -0.1), p);
    const Complex w(1.5, 0.25), k(0.3, -0.1);
    CHECK(std::abs(r - (w * w - 4.0 * k * k - 0.25)) < 1e-15);
}

TEST_CASE("wavenumber branch: evanescent at zero, branch points, near-axis values") {
    // at omega = 0 the real-axis convention gives the pure decay i*omega_co/c
    const Complex k0 = wavenumber_branch(Complex(0.0, 0.0), unit);
    CHECK(k0.real() == 0.0);
    CHECK(k0.imag() == doctest::Approx(1.0).epsilon(1e-15));

    CHECK(std::abs(wavenumber_branch(Complex(1.0, 0.0), unit)) == 0.0);
    CHECK(std::abs(wavenumber_branch(Complex(-1.0, 0.0), unit)) == 0.0);

    // just above the axis at omega = 2: k = sqrt(3) with a small positive Im
    const Complex k2 = wavenumber_branch(Complex(2.0, 1e-8), unit);
    CHECK(k2.real() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(k2.imag() > 0.0);
    CHECK(k2.imag() < 1e-7);

    // real propagating frequencies keep the sign of omega
    CHECK(wavenumber_branch(Complex(2.0, 0.0), unit).real() ==
          doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(wavenumber_branch(Complex(-2.0, 0.0), unit).real() ==
          doctest::Approx(-std::sqrt(3.0)).epsilon(1e-15));

    // stop band maps to pure decay rates
    const Complex ks = wavenumber_branch(Complex(0.5, 0.0), unit);
    CHECK(ks.real() == 0.0);
    CHECK(ks.imag() == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));

    // scaling with c
    const WaveguideParams p{2.0, 1.0};
    CHECK(wavenumber_branch(Complex(0.0, 0.0), p).imag() ==
          doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("wavenumber branch satisfies the dispersion relation off the axis") {
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> re(-10.0, 10.0), im(1e-3, 3.0);
    for (int i = 0; i < 200; ++i) {
        const Complex w(re(rng), im(rng));
        const Complex k = wavenumber_branch(w, unit);
        CHECK(std::abs(dispersion_residual(w, k, unit)) <
              1e-12 * std::max({1.0, std::norm(w), std::norm(k)}));
        CHECK(k.imag() > 0.0); // upper half-plane positivity
    }
}

TEST_CASE("wavenumber derivative matches finite differences and rejects branch points") {
    const Complex w(2.0, 0.5);
    const Complex d = wavenumber_derivative(w, unit);
    const Complex fd = fd_derivative(
        [&](Complex z) { return wavenumber_branch(z, unit); }, w, 1e-6);
    CHECK(std::abs(d - fd) < 1e-8);
    CHECK_THROWS_AS((void)wavenumber_derivative(Complex(1.0, 0.0), unit),
                    std::domain_error);
    CHECK_THROWS_AS((void)wavenumber_derivative(Complex(-1.0, 0.0), unit),
                    std::domain_error);
}

TEST_CASE("group velocity: closed-form values, limits, monotonicity, domain") {
    CHECK(group_velocity(std::sqrt(2.0), unit) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));

    const WaveguideParams c2{2.0, 1.0};
    // omega = 10*omega_co, c = 2: v = 2*sqrt(99)/10
    CHECK(group_velocity(10.0, c2) ==
          doctest::Approx(1.9899748742132399).epsilon(1e-15));

    CHECK(group_velocity(1.0 + 1e-9, unit) < 1e-4); // -> 0 at the cut-off
    CHECK(group_velocity(1e6, unit) == doctest::Approx(1.0).epsilon(1e-12));

    double prev = 0.0;
    for (double e = 1e-6; e <= 3.0; e += 0.05) {
        const double v = group_velocity(std::pow(10.0, e), unit);
        CHECK(v > prev);
        CHECK(v < 1.0);
        prev = v;
    }

    CHECK_THROWS_AS((void)group_velocity(1.0, unit), std::domain_error);
    CHECK_THROWS_AS((void)group_velocity(0.5, unit), std::domain_error);
}

TEST_CASE("tube chart embedding at landmark coordinates") {
    const DispersionPoint top = tube_to_plane(TubeCoordinate(Complex(pi / 2.0, 0.0)), unit);
    CHECK(std::abs(top.omega - Complex(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(top.k) < 1e-15);

    const DispersionPoint ev = tube_to_plane(TubeCoordinate(Complex(0.0, 0.0)), unit);
    CHECK(std::abs(ev.omega) == 0.0);
    CHECK(std::abs(ev.k - Complex(0.0, 1.0)) < 1e-15);

    // xi = pi/2 + i: omega = cosh(1), k = sinh(1), both real
    const DispersionPoint h = tube_to_plane(TubeCoordinate(Complex(pi / 2.0, 1.0)), unit);
    CHECK(h.omega.real() == doctest::Approx(1.5430806348152437785).epsilon(1e-15));
    CHECK(std::abs(h.omega.imag()) < 1e-16);
    CHECK(h.k.real() == doctest::Approx(1.1752011936438014569).epsilon(1e-15));
    CHECK(std::abs(h.k.imag()) < 1e-16);
}

TEST_CASE("tube coordinate normalises its real part into one period") {
    CHECK(std::abs(TubeCoordinate(Complex(1.5 * pi, 0.3)).value() -
                   Complex(-0.5 * pi, 0.3)) < 1e-12);
    CHECK(std::abs(TubeCoordinate(Complex(2.0 * pi, 0.0)).value().real()) < 1e-12);
    CHECK(TubeCoordinate(Complex(-0.6 * pi, 0.0)).value().real() ==
          doctest::Approx(1.4 * pi).epsilon(1e-12));
    // the right edge of the strip belongs to the next period
    CHECK(TubeCoordinate(Complex(1.5 * pi, 0.0)).value().real() < 0.0);
    CHECK_THROWS_AS(TubeCoordinate(Complex(std::nan(""), 0.0)),
                    std::invalid_argument);
}

TEST_CASE("embedding derivative matches finite differences and never degenerates") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> re(-0.5 * pi, 1.5 * pi), im(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const Complex xi(re(rng), im(rng));
        const DispersionPoint d = tube_embedding_derivative(TubeCoordinate(xi), unit);
        const double h = 1e-6;
        const DispersionPoint a = tube_to_plane(TubeCoordinate(xi + Complex(h, 0)), unit);
        const DispersionPoint b = tube_to_plane(TubeCoordinate(xi - Complex(h, 0)), unit);
        CHECK(std::abs(d.omega - (a.omega - b.omega) / (2.0 * h)) < 1e-7 * std::exp(std::abs(xi.imag())));
        CHECK(std::abs(d.k - (a.k - b.k) / (2.0 * h)) < 1e-7 * std::exp(std::abs(xi.imag())));
        CHECK(std::norm(d.omega) + std::norm(d.k) > 0.0);
    }
}

TEST_CASE("chart inversion: landmarks, roundtrip, off-manifold rejection") {
    CHECK(std::abs(plane_to_tube(Complex(1.0, 0.0), Complex(0.0, 0.0), unit).value() -
                   Complex(pi / 2.0, 0.0)) < 1e-14);
    CHECK(std::abs(plane_to_tube(Complex(0.0, 0.0), Complex(0.0, 1.0), unit).value()) <
          1e-14);

    std::mt19937 rng(20240818);
    std::uniform_real_distribution<double> re(-0.5 * pi, 1.5 * pi), im(-5.0, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Complex xi(re(rng), im(rng));
        const DispersionPoint d = tube_to_plane(TubeCoordinate(xi), unit);
        const Complex back = plane_to_tube(d.omega, d.k, unit).value();
        worst = std::max(worst, std::abs(back - TubeCoordinate(xi).value()));
    }
    CHECK(worst < 1e-12);

    // a point violating the dispersion relation is refused
    CHECK_THROWS_AS((void)plane_to_tube(Complex(2.0, 0.0), Complex(0.0, 0.0), unit),
                    std::domain_error);
}

TEST_CASE("hyperbolic chart: axis, interior point, identity, domain") {
    const HyperbolicCoords ax = spacetime_to_hyperbolic(SpacetimePoint(7.0, 0.0), unit);
    CHECK(ax.r == doctest::Approx(7.0).epsilon(1e-15));
    CHECK(ax.eta == Complex(-pi / 2.0, 0.0));

    const HyperbolicCoords in = spacetime_to_hyperbolic(SpacetimePoint(2.0, 1.0), unit);
    CHECK(in.r == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(in.eta.real() == doctest::Approx(-pi / 2.0).epsilon(1e-15));
    CHECK(in.eta.imag() == doctest::Approx(0.5493061443340548457).epsilon(1e-15));

    // defining identities of the chart: i x / c = r cos(eta), -t = r sin(eta)
    const Complex rc = in.r * std::cos(in.eta);
    const Complex rs = in.r * std::sin(in.eta);
    CHECK(std::abs(rc - Complex(0.0, 1.0)) < 1e-14);
    CHECK(std::abs(rs - Complex(-2.0, 0.0)) < 1e-14);

    // the front itself and the outside are rejected
    CHECK_THROWS_AS((void)spacetime_to_hyperbolic(SpacetimePoint(1.0, 1.0), unit),
                    std::domain_error);
    CHECK_THROWS_AS((void)spacetime_to_hyperbolic(SpacetimePoint(1.0, 2.0), unit),
                    std::domain_error);
}

TEST_CASE("saddle data: closed form, stationarity, tube location, domain") {
    const SaddleData still = saddle_points(0.0, unit);
    CHECK(still.omega_star == 1.0); // exact equality at V = 0
    CHECK(std::abs(still.xi_star.value() - Complex(pi / 2.0, 0.0)) < 1e-15);

    const SaddleData half = saddle_points(1.0 / std::sqrt(2.0), unit);
    CHECK(half.omega_star == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

    for (const double V : {0.3, 0.6, 0.9}) {
        const SaddleData s = saddle_points(V, unit);
        CHECK(saddle_residual(s, unit) <= 1e-12);
        // independent check: finite difference of the branch at omega_star
        const Complex fd = fd_derivative(
            [&](Complex z) { return wavenumber_branch(z, unit); },
            Complex(s.omega_star, 0.0), 1e-6 * s.omega_star);
        CHECK(std::abs(fd - Complex(1.0 / V, 0.0)) < 1e-4);
        // xi_star sits at Re = pi/2 with Im = artanh(V/c)
        CHECK(s.xi_star.value().real() == doctest::Approx(pi / 2.0).epsilon(1e-14));
        CHECK(s.xi_star.value().imag() ==
              doctest::Approx(std::atanh(V)).epsilon(1e-14));
        // the embedded saddle frequency is one of the pair +-omega_star
        const DispersionPoint d = tube_to_plane(s.xi_star, unit);
        CHECK(std::min(std::abs(d.omega - Complex(s.omega_star, 0.0)),
                       std::abs(d.omega + Complex(s.omega_star, 0.0))) < 1e-12);
    }

    CHECK_THROWS_AS((void)saddle_points(-0.1, unit), std::domain_error);
    CHECK_THROWS_AS((void)saddle_points(1.0, unit), std::domain_error);
    CHECK_THROWS_AS((void)saddle_points(1.5, unit), std::domain_error);
}

TEST_CASE("diagram sampling covers both branches on the stated line") {
    // grid [0, 2] with 201 samples passes exactly through the cut-off
    const std::vector<DiagramSample> rows = sample_diagram(unit, 2.0, 201);
    REQUIRE(rows.size() == 201);

    const DiagramSample& dc = rows[100];
    CHECK(dc.omega == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dc.k_magnitude == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(dc.W == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(dc.K) < 1e-14);

    CHECK(rows.front().omega == 0.0);
    CHECK(rows.front().K == doctest::Approx(-1.0).epsilon(1e-15)); // -omega_co^2/c^2
    CHECK(rows.front().branch == BranchKind::Evanescent);
    CHECK(rows.back().branch == BranchKind::Propagating);

    for (const DiagramSample& d : rows) {
        CHECK(std::abs(d.W - (d.K + 1.0)) < 1e-12); // W = c^2 K + omega_co^2
        CHECK(d.W == doctest::Approx(d.omega * d.omega).epsilon(1e-15));
        if (d.branch == BranchKind::Evanescent) {
            CHECK(d.omega <= 1.0);
            CHECK(d.K <= 0.0);
        } else {
            CHECK(d.omega > 1.0);
            CHECK(d.K >= 0.0);
        }
    }

    const WaveguideParams p{2.0, 0.5};
    for (const DiagramSample& d : sample_diagram(p, 1.5, 31))
        CHECK(std::abs(d.W - (4.0 * d.K + 0.25)) < 1e-12);

    CHECK_THROWS_AS((void)sample_diagram(unit, 2.0, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)sample_diagram(unit, 0.0, 10), std::invalid_argument);
}

TEST_CASE("degenerate cut-off: params allow it, chart operations refuse it") {
    const WaveguideParams wave{1.0, 0.0};
    CHECK_NOTHROW(wave.validate());
    CHECK_THROWS_AS((void)tube_to_plane(TubeCoordinate(Complex(0.0, 0.0)), wave),
                    std::domain_error);
    CHECK_THROWS_AS((void)plane_to_tube(Complex(1.0, 0.0), Complex(1.0, 0.0), wave),
                    std::domain_error);
    CHECK_THROWS_AS((void)saddle_points(0.5, wave), std::domain_error);
    CHECK_THROWS_AS((void)sample_diagram(wave, 1.0, 10), std::domain_error);

    CHECK_THROWS_AS(WaveguideParams(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(WaveguideParams(1.0, -0.5), std::invalid_argument);
}
