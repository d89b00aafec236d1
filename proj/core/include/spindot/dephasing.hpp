#pragma once

#include <complex>
#include <limits>
#include <span>
#include <vector>

#include "spindot/grid.hpp"
#include "spindot/model.hpp"

namespace spindot {

/**
 * Magnet shell distribution of the metastable paramagnet.
 *
 * prep_temperature is the preparation temperature T0 of the quench; the
 * default T0 = infinity gives the maximally mixed binomial C(N,k)/2^N.
 * Finite T0 > T_C tilts the shells by the Ising Boltzmann factor
 * exp(+N J m^2 / (2 T0)).
 */
std::vector<double> initial_magnet_distribution(
    const MagnetizationGrid& grid, double coupling_j = 0.0,
    double prep_temperature = std::numeric_limits<double>::infinity());

std::vector<double> initial_magnet_distribution(
    const ModelParams& params,
    double prep_temperature = std::numeric_limits<double>::infinity());

/**
 * The traced amplitude A(t) of the up-down block for the binomial paramagnet.
 *
 * Both evaluation routes are exposed: the m-resolved spectral sum
 * sum_k P0(m_k) e^{2 i N g m_k t} and the closed form cos^N(2gt).  Both are
 * computed from the same phase 2gt reduced mod 2pi (the reduction is exact
 * because the per-shell multiplier 2k-N is an integer), so the identity
 * between them is testable at machine precision.
 */
struct DephasingAmplitude {
    std::complex<double> spectral_sum; ///< sum over shells
    double closed_form = 1.0;          ///< cos^N(2gt), signed; may underflow to 0
    double log_abs = 0.0;              ///< N ln|cos(2gt)|, usable when closed_form underflows
};

DephasingAmplitude dephasing_amplitude(const ModelParams& params, double t);

/// exp(-(t/tau_irrev)^4); equal to 1 for all t when gamma = 0 (no bath).
double bath_suppression_envelope(const ModelParams& params, double t);

/// First t > 0 with |A(t)| = 1/e (bisection on the closed form).
double reduction_crossing_time(const ModelParams& params);

struct TrajectoryPoint {
    double t = 0.0;
    double abs_amplitude = 0.0; ///< |A(t)|
    double envelope = 1.0;      ///< bath suppression factor
    double product = 0.0;       ///< |A(t)| * envelope(t)
};

struct OffDiagonalTrajectory {
    std::vector<TrajectoryPoint> points;
    double first_recurrence_time = 0.0; ///< pi/(2g)
    double recurrence_product = 0.0;    ///< |A| * envelope at the first recurrence
    bool recurrence_survives = false;   ///< recurrence_product > threshold
};

/// Evaluates |A|*envelope on a sorted time grid and probes the first recurrence.
OffDiagonalTrajectory offdiagonal_trajectory(const ModelParams& params,
                                             std::span<const double> times,
                                             double survival_threshold = 1e-3);

/**
 * The m-resolved up-down block at time t, bath envelope included, normalized
 * so that scalar_amplitude(0) = 1.  The down-up block is the complex
 * conjugate; the physical block carries an extra factor r_ud(0).
 */
struct OffDiagonalBlock {
    std::vector<std::complex<double>> amplitudes;
    std::complex<double> scalar_amplitude{1.0, 0.0};
};

OffDiagonalBlock offdiagonal_block(const ModelParams& params, double t);

} // namespace spindot
