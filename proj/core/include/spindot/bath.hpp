#pragma once

#include <vector>

#include "spindot/grid.hpp"
#include "spindot/model.hpp"

namespace spindot {

/**
 * Quasi-Ohmic bath spectrum in reduced units,
 *
 *   K(omega) = (1/4) omega e^{-|omega|/Gamma} / (e^{omega/T} - 1),
 *
 * continuous at omega = 0 with value T/4.  Satisfies the KMS relation
 * K(-omega) = e^{omega/T} K(omega); both branches are evaluated directly from
 * the formula so that relation stays a testable property.
 */
struct BathKernel {
    double temperature = 1.0; ///< T
    double cutoff = 1.0;      ///< Gamma

    /// K(omega); underflows gracefully to 0 for omega/T beyond ~700.
    double spectrum(double omega) const;

    /// ln K(omega), finite wherever the formula is (use for extreme omega/T).
    double log_spectrum(double omega) const;
};

/**
 * Total collective flip rates of a magnet sector on the magnetization grid.
 *
 * For sector_spin s, the effective per-spin field is h(m) = g s + J m; each
 * grid bond k <-> k+1 carries the frequency of the actual shell energy
 * difference, omega_k = 2 h(m_k + 1/N).  Using the bond midpoint (rather than
 * the left shell) makes the degeneracy-weighted sector Gibbs measure exactly
 * stationary, not just to O(1/N).
 *
 * Per-spin rates are w+ = 2 gamma K(-omega), w- = 2 gamma K(+omega); the
 * factor 2 normalizes the linearized drift of <m> to gamma ((J-T) m + g s).
 * Totals count the spins able to flip: up(m_k) = (N-k) w+, down(m_k) = k w-.
 */
struct FlipRates {
    int sector_spin = +1;
    std::vector<double> up_rates;       ///< index k: total rate m_k -> m_{k+1}; entry N is 0
    std::vector<double> down_rates;     ///< index k: total rate m_k -> m_{k-1}; entry 0 is 0
    std::vector<double> bond_frequency; ///< index k = 0..N-1: omega of bond k <-> k+1
    double max_total_rate = 0.0;        ///< max_k (up_rates[k] + down_rates[k])
};

FlipRates build_flip_rates(const ModelParams& params, int sector_spin);

/// Per-spin up/down flip rates at continuum magnetization m (no bond shift).
double flip_up_rate(const ModelParams& params, int sector_spin, double m);
double flip_down_rate(const ModelParams& params, int sector_spin, double m);

/// Mean-field drift velocity (1-m) w+(m) - (1+m) w-(m) of <m>.
double mean_field_drift(const ModelParams& params, int sector_spin, double m);

} // namespace spindot
