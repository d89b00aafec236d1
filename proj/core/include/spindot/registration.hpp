#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "spindot/bath.hpp"
#include "spindot/grid.hpp"
#include "spindot/model.hpp"

namespace spindot {

/// One diagonal sector of the compound state: a normalized shell distribution
/// plus the (conserved) Born prefactor it carries.
struct DiagonalBlock {
    std::vector<double> probabilities;
    double weight = 1.0;
};

struct FixedPoint {
    double m = 0.0;
    bool stable = false;
};

/// Real roots of the self-consistency relation m = tanh((J m + g s)/T).
struct FixedPoints {
    int sector_spin = 0;           ///< +1/-1, or 0 for the bare magnet (g dropped)
    std::vector<FixedPoint> roots; ///< ascending in m

    bool has_ferromagnetic_pair() const;
    /// Largest stable root (throws std::domain_error when T >= J).
    double ferro_plus() const;
    /// Smallest stable root (throws std::domain_error when T >= J).
    double ferro_minus() const;
    /// The stable root the sector drives towards: ferro_plus for s=+1, ferro_minus for s=-1.
    double aligned_root() const;
};

FixedPoints solve_fixed_points(const ModelParams& params, int sector_spin);

/// dP/dt of the birth-death master equation, written into dpdt.
void apply_generator(const FlipRates& rates, const std::vector<double>& p,
                     std::vector<double>& dpdt);

/**
 * One explicit flux-form step.  Probability moves only between neighbouring
 * shells, so the trace is conserved to rounding and every entry stays
 * non-negative as long as dt * max_total_rate <= 1.  Throws ScheduleError on
 * a step-size violation instead of producing negative probabilities.
 */
void step_master_equation(DiagonalBlock& block, const FlipRates& rates, double dt);

struct RegistrationSettings {
    int sector_spin = +1;
    double t_max = 2.5e4;
    /// Coupling schedule: g is on from t = 0 and switches off at this time.
    double g_off_time = std::numeric_limits<double>::infinity();
    std::size_t sample_count = 200;      ///< uniform (t, mean, var) records
    std::vector<double> snapshot_times;  ///< full P(m) snapshots at these times
    double dt_safety = 0.1;              ///< dt = dt_safety / max_total_rate
    /// Registration threshold as a fraction of the bare ferromagnetic value m_F.
    double threshold_fraction = 1.0 - std::exp(-1.0);
    /// Window on |<m>| for the exponential-growth-rate fit.
    double fit_lo = 0.02;
    double fit_hi = 0.15;
    double prep_temperature = std::numeric_limits<double>::infinity();
};

struct SeriesPoint {
    double t = 0.0;
    double mean = 0.0;
    double var = 0.0;
};

struct GridSnapshot {
    double t = 0.0;
    std::vector<double> probabilities;
};

struct RegistrationResult {
    std::vector<SeriesPoint> series;
    std::vector<GridSnapshot> snapshots;

    bool registered = false;
    double measured_registration_time = std::numeric_limits<double>::quiet_NaN();
    double threshold = std::numeric_limits<double>::quiet_NaN(); ///< |<m>| level used
    double m_ferro = std::numeric_limits<double>::quiet_NaN();         ///< bare magnet root
    double m_ferro_coupled = std::numeric_limits<double>::quiet_NaN(); ///< root with g on

    /// LSQ slope of ln(|<m>| + g/(J-T)) over the fit window; the linearized
    /// dynamics makes that variable exactly exponential with rate gamma(J-T).
    double growth_rate = std::numeric_limits<double>::quiet_NaN();

    double final_mean = 0.0;
    double final_var = 0.0;
    bool unimodal_final = false;
    double wrong_well_mass = 0.0; ///< mass at sign(m) opposite to the sector

    double heat_to_bath = 0.0;      ///< energy handed to the bath over the run
    double max_trace_error = 0.0;   ///< max |sum P - 1| seen at any step
    double min_probability = 0.0;   ///< most negative entry seen (0 when clean)

    DiagonalBlock final_block;
};

/// Evolves a paramagnetic initial block in the given sector and measures the
/// registration observables.
RegistrationResult run_registration(const ModelParams& params,
                                    const RegistrationSettings& settings = {});

struct ParamagnetProbePoint {
    double t = 0.0;
    double mean = 0.0;
    double var = 0.0;
    std::size_t modes = 1;
};

struct ParamagnetProbeResult {
    std::vector<ParamagnetProbePoint> series;
    double bimodality_onset = std::numeric_limits<double>::quiet_NaN();
    double max_abs_mean = 0.0;
};

/// Tracks the decay of the unstable bare paramagnet (requires g = 0): variance
/// growth, the onset of bimodality, and the exact <m> = 0 symmetry.
ParamagnetProbeResult paramagnet_lifetime_probe(const ModelParams& params, double t_max,
                                                std::size_t sample_count = 400);

/// All four timescales; tau_reg is NaN when Eq-form preconditions fail (T >= J
/// or ln-argument <= 1).
Timescales compute_timescales(const ModelParams& params);

} // namespace spindot
