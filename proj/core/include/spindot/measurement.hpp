#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "spindot/dephasing.hpp"
#include "spindot/grid.hpp"
#include "spindot/model.hpp"
#include "spindot/registration.hpp"

namespace spindot {

/// 2x2 density matrix of the tested spin at t = 0; r_du is implied by
/// hermiticity.
struct InitialSpinState {
    double r_uu = 0.5;
    double r_dd = 0.5;
    std::complex<double> r_ud{0.0, 0.0};

    /// Checks trace 1 and positivity |r_ud|^2 <= r_uu r_dd.
    void validate() const;
};

/// Row-major 2x2 complex matrix of the tested spin.
using SpinMatrix = std::array<std::complex<double>, 4>;

double spin_entropy(const SpinMatrix& rho);

/// Degeneracy-resolved shell entropy -sum p ln p + sum p ln C(N,k); exact for
/// states uniform within each magnetization shell.
double magnet_shell_entropy(const MagnetizationGrid& grid, const std::vector<double>& p);

/// The four spin blocks of the S+A density operator in the collective sector.
/// Diagonal blocks carry normalized shell distributions with Born weights
/// factored out; the up-down block is unit-normalized (the physical block is
/// r_ud(0) times it) and the down-up block is its conjugate.
struct CompoundState {
    DiagonalBlock block_uu;
    DiagonalBlock block_dd;
    OffDiagonalBlock block_ud;
    InitialSpinState spin0;
    double time = 0.0;

    double trace() const { return block_uu.weight + block_dd.weight; }
};

struct EntropyReport {
    double spin_initial = 0.0;
    double spin_final = 0.0;        ///< entropy of the truncated (diagonal) spin state
    double magnet_initial = 0.0;    ///< N ln 2 for the binomial paramagnet
    double magnet_final_up = 0.0;
    double magnet_final_down = 0.0;
    double magnet_final_mean = 0.0; ///< sum_i p_i S_A[block_i]
    double bath_delta = 0.0;        ///< heat released to the bath / T
    double entropy_initial = 0.0;   ///< spin_initial + magnet_initial
    double entropy_final = 0.0;     ///< spin_final + magnet_final_mean + bath_delta
    double gap = 0.0;               ///< entropy_final - entropy_initial
    double spin_gap = 0.0;          ///< spin_final - spin_initial
    bool decomposition_exact = true; ///< false when the off-diagonal residual is too large
};

/**
 * Entropy balance of the measurement.  The apparatus is magnet plus bath: the
 * magnet terms are shell entropies of the evolved blocks, and the bath term
 * is the weak-coupling entropy production Q/T with Q the heat handed to the
 * bath by the master equation.  (The magnet-only balance is negative for the
 * maximum-entropy initial paramagnet; the report exposes every term.)
 */
EntropyReport entropy_balance(const InitialSpinState& spin0, const std::vector<double>& p0,
                              const CompoundState& final_state, double heat_to_bath,
                              double temperature, double residual_tolerance = 1e-3);

struct PointerSummary {
    double weight = 0.0;          ///< Born weight of this pointer value
    double location = 0.0;        ///< <m> of the block
    double spread = 0.0;          ///< std dev of the block
    double wrong_well_mass = 0.0; ///< block mass at the opposite sign of m
    bool unimodal = false;
};

struct FinalStateReport {
    double p_up = 0.0;
    double p_down = 0.0;
    PointerSummary pointer_up;
    PointerSummary pointer_down;

    /// |A(t_f)| * envelope(t_f): the surviving fraction of the off-diagonal
    /// blocks relative to |r_ud(0)|.
    double offdiag_residual = 0.0;
    double offdiag_threshold = 1e-3;

    SpinMatrix post_spin_state{};
    EntropyReport entropy;

    bool correlation_check = false; ///< sector signs aligned with pointer signs
    bool complete = false;          ///< residual below threshold, wells unimodal

    Timescales timescales;
    double measured_registration_time_up = std::numeric_limits<double>::quiet_NaN();
    double measured_registration_time_down = std::numeric_limits<double>::quiet_NaN();
    double growth_rate_up = std::numeric_limits<double>::quiet_NaN();
    double growth_rate_down = std::numeric_limits<double>::quiet_NaN();

    double max_trace_error = 0.0;
    double min_probability = 0.0;
};

struct MeasurementSchedule {
    double t_f = 2.0e4;       ///< coupled window [0, t_f], g on
    double relax_time = 0.0;  ///< optional window after switch-off, g = 0
    std::size_t sample_count = 200;
    double dt_safety = 0.1;
};

struct MeasurementOptions {
    bool force_regime = false;   ///< run even when validate_regime fails
    double regime_margin = 10.0;
    double offdiag_threshold = 1e-3;
    double threshold_fraction = 1.0 - std::exp(-1.0);
    double prep_temperature = std::numeric_limits<double>::infinity();
};

/// Time series of the block observables over the run.
struct MeasurementRecord {
    std::vector<double> times;
    std::vector<double> mean_up, var_up;
    std::vector<double> mean_down, var_down;
    std::vector<double> offdiag_abs; ///< |A| * envelope (frozen after t_f)
    std::vector<double> envelope;
};

struct MeasurementResult {
    CompoundState state;
    FinalStateReport report;
    MeasurementRecord record;
    double heat_to_bath = 0.0;
    RegistrationResult sector_up;
    RegistrationResult sector_down;
};

/**
 * Full measurement pipeline: dephasing of the off-diagonal blocks (closed
 * form, bath envelope included) plus master-equation registration of both
 * diagonal sectors, evolved in parallel.  Throws RegimeError when the regime
 * fails and force_regime is off, and ScheduleError when a weighted sector
 * fails to register within the schedule.
 */
MeasurementResult run_measurement(const InitialSpinState& spin, const ModelParams& params,
                                  const MeasurementSchedule& schedule,
                                  const MeasurementOptions& options = {});

/// p(m): Born-weighted mixture of the two diagonal blocks.
std::vector<double> pointer_distribution(const CompoundState& state);

struct ReadoutSample {
    std::vector<int> outcomes; ///< ±1 per repetition (sign of the sampled m)
    std::uint64_t seed = 0;
    double f_up = 0.0;
    double f_down = 0.0;
};

/// I.i.d. samples of m from a normalized grid distribution, classified by
/// sign; deterministic given the seed; exact zeros of m are resampled.
ReadoutSample sample_readout(const MagnetizationGrid& grid, const std::vector<double>& distribution,
                             std::size_t n_samples, std::uint64_t seed);

/// Same, from a completed run; throws ScheduleError when the run's
/// off-diagonal residual exceeds its threshold (measurement not complete).
ReadoutSample sample_readout(const MeasurementResult& run, std::size_t n_samples,
                             std::uint64_t seed);

/// Traces out the apparatus at the end of a run.
SpinMatrix post_measurement_spin_state(const CompoundState& state);

struct StopReductionReport {
    double t_stop = 0.0;
    SpinMatrix spin_state{};
    double amplitude_abs = 0.0;      ///< |A(t_stop)|
    double envelope = 1.0;           ///< bath envelope at t_stop
    double offdiag_factor = 0.0;     ///< |A| * envelope
    double log_offdiag_factor = 0.0; ///< ln of the above (usable under underflow)
    double apparatus_mean = 0.0;
    double apparatus_var = 0.0;
    bool apparatus_unimodal = false;
};

/// Diagnostics of the stop-after-reduction scenario at t_stop: spin marginal
/// with the cat terms suppressed by dephasing alone, apparatus still the
/// untouched paramagnet (the bath has not acted yet on this window).
StopReductionReport stop_reduction_diagnostics(const InitialSpinState& spin,
                                               const ModelParams& params, double t_stop);

/// Same, but enforces the window margin*tau_red <= t_stop <= tau_irrev/margin
/// (throws ScheduleError outside it).
StopReductionReport stop_after_reduction(const InitialSpinState& spin, const ModelParams& params,
                                         double t_stop, double window_margin = 3.0);

} // namespace spindot
