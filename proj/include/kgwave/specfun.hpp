#pragma once

#include "kgwave/types.hpp"

namespace kgwave {

/** Controls for the Bessel evaluation. */
struct BesselSettings {
    /// Switch point between the ascending series and the large-argument form.
    double series_cutoff = 15.0;
    /// Absolute accuracy target; both regimes meet it on [0, 1e4].
    double target_abs_error = 1e-13;

    void validate() const {
        if (!(std::isfinite(series_cutoff) && series_cutoff > 0.0))
            throw std::invalid_argument("BesselSettings: series_cutoff must be > 0");
        if (!(std::isfinite(target_abs_error) && target_abs_error > 0.0))
            throw std::invalid_argument("BesselSettings: target_abs_error must be > 0");
    }
};

/**
 * Bessel function J0(z) for z >= 0.  Ascending series below the cutoff,
 * Hankel-type large-argument expansion with optimal truncation above it.
 * Throws std::domain_error for negative or non-finite z.
 */
[[nodiscard]] double bessel_j0(double z, const BesselSettings& s = {});

/**
 * Closed-form causal response: 0 before the front, -1/(2c) on it, and
 * -J0(omega_co * r)/(2c) inside, with r the invariant radius of the point.
 */
[[nodiscard]] double exact_field(const SpacetimePoint& pt, const WaveguideParams& p,
                                 const BesselSettings& s = {});

namespace detail {
/// Ascending power series for J0; accurate for |z| <~ 20 in double precision.
[[nodiscard]] double j0_power_series(double z);
/// Large-argument cosine/sine form; `target` bounds the truncation error.
[[nodiscard]] double j0_large_argument(double z, double target);
} // namespace detail

} // namespace kgwave
