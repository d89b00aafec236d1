#include "spindot/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <sstream>
#include <stdexcept>

#include "spindot/errors.hpp"

namespace spindot {

void InitialSpinState::validate() const {
    if (!(r_uu >= 0.0 && r_uu <= 1.0) || !(r_dd >= 0.0 && r_dd <= 1.0))
        throw std::invalid_argument("spin state: diagonal entries must lie in [0,1]");
    if (std::abs(r_uu + r_dd - 1.0) > 1e-12)
        throw std::invalid_argument("spin state: r_uu + r_dd must equal 1");
    if (std::norm(r_ud) > r_uu * r_dd + 1e-12)
        throw std::invalid_argument("spin state: |r_ud|^2 <= r_uu r_dd violated (not positive)");
}

double spin_entropy(const SpinMatrix& rho) {
    const double a = rho[0].real(), d = rho[3].real();
    const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(rho[1]));
    const double lp = std::clamp(0.5 * (a + d) + half_gap, 0.0, 1.0);
    const double lm = std::clamp(0.5 * (a + d) - half_gap, 0.0, 1.0);
    auto h = [](double x) { return x > 0.0 ? -x * std::log(x) : 0.0; };
    return h(lp) + h(lm);
}

double magnet_shell_entropy(const MagnetizationGrid& grid, const std::vector<double>& p) {
    if (p.size() != grid.size())
        throw std::invalid_argument("magnet_shell_entropy: size mismatch");
    double acc = 0.0, comp = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] <= 0.0) continue;
        const double term = p[k] * (grid.log_degeneracy(k) - std::log(p[k]));
        const double y = term - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    return acc;
}

EntropyReport entropy_balance(const InitialSpinState& spin0, const std::vector<double>& p0,
                              const CompoundState& final_state, double heat_to_bath,
                              double temperature, double residual_tolerance) {
    if (!(temperature > 0.0))
        throw std::invalid_argument("entropy_balance: temperature must be > 0");
    const MagnetizationGrid grid(p0.size() - 1);
    EntropyReport rep;
    rep.spin_initial = spin_entropy({spin0.r_uu, spin0.r_ud, std::conj(spin0.r_ud), spin0.r_dd});
    rep.spin_final = spin_entropy({spin0.r_uu, 0.0, 0.0, spin0.r_dd});
    rep.magnet_initial = magnet_shell_entropy(grid, p0);
    rep.magnet_final_up = magnet_shell_entropy(grid, final_state.block_uu.probabilities);
    rep.magnet_final_down = magnet_shell_entropy(grid, final_state.block_dd.probabilities);
    rep.magnet_final_mean = final_state.block_uu.weight * rep.magnet_final_up +
                            final_state.block_dd.weight * rep.magnet_final_down;
    rep.bath_delta = heat_to_bath / temperature;
    rep.entropy_initial = rep.spin_initial + rep.magnet_initial;
    rep.entropy_final = rep.spin_final + rep.magnet_final_mean + rep.bath_delta;
    rep.gap = rep.entropy_final - rep.entropy_initial;
    rep.spin_gap = rep.spin_final - rep.spin_initial;
    rep.decomposition_exact = std::abs(final_state.block_ud.scalar_amplitude) <= residual_tolerance;
    return rep;
}

namespace {

PointerSummary summarize_block(const MagnetizationGrid& grid, const DiagonalBlock& block,
                               int sector) {
    PointerSummary s;
    s.weight = block.weight;
    s.location = grid_mean(grid, block.probabilities);
    s.spread = std::sqrt(grid_variance(grid, block.probabilities));
    double wrong = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
        if (grid.value(k) * sector < 0.0) wrong += block.probabilities[k];
    s.wrong_well_mass = wrong;
    s.unimodal = count_modes(block.probabilities) == 1;
    return s;
}

} // namespace

MeasurementResult run_measurement(const InitialSpinState& spin, const ModelParams& params,
                                  const MeasurementSchedule& schedule,
                                  const MeasurementOptions& options) {
    spin.validate();
    params.validate();
    if (!(schedule.t_f > 0.0)) throw std::invalid_argument("schedule: t_f must be > 0");
    if (!(schedule.relax_time >= 0.0))
        throw std::invalid_argument("schedule: relax_time must be >= 0");

    const RegimeReport regime = validate_regime(params, options.regime_margin);
    if (!regime.overall && !options.force_regime) {
        std::ostringstream msg;
        msg << "parameters fail the validated regime (margin " << options.regime_margin << "):";
        for (const auto& c : regime.checks)
            if (!c.satisfied) msg << " [" << c.name << ": " << c.left << " vs " << c.right << "]";
        msg << "; pass force to override";
        throw RegimeError(msg.str());
    }

    const double t_total = schedule.t_f + schedule.relax_time;
    RegistrationSettings base;
    base.t_max = t_total;
    base.g_off_time = schedule.t_f;
    base.sample_count = schedule.sample_count;
    base.dt_safety = schedule.dt_safety;
    base.threshold_fraction = options.threshold_fraction;
    base.prep_temperature = options.prep_temperature;

    RegistrationSettings up_settings = base;
    up_settings.sector_spin = +1;
    RegistrationSettings down_settings = base;
    down_settings.sector_spin = -1;

    // the two sectors are independent; evolve them concurrently
    auto fut_up = std::async(std::launch::async,
                             [&] { return run_registration(params, up_settings); });
    RegistrationResult down = run_registration(params, down_settings);
    RegistrationResult up = fut_up.get();

    for (const RegistrationResult* r : {&up, &down}) {
        const double w = (r == &up) ? spin.r_uu : spin.r_dd;
        if (w > 1e-15 && !r->registered)
            throw ScheduleError("sector did not register within the schedule; extend t_f");
    }

    const MagnetizationGrid grid(params.n_spins);

    MeasurementResult result;
    result.state.block_uu = up.final_block;
    result.state.block_uu.weight = spin.r_uu;
    result.state.block_dd = down.final_block;
    result.state.block_dd.weight = spin.r_dd;
    result.state.block_ud = offdiagonal_block(params, schedule.t_f);
    result.state.spin0 = spin;
    result.state.time = t_total;
    result.heat_to_bath = spin.r_uu * up.heat_to_bath + spin.r_dd * down.heat_to_bath;

    // record: the sector series share their time grid by construction
    MeasurementRecord& rec = result.record;
    for (std::size_t i = 0; i < up.series.size(); ++i) {
        const double t = up.series[i].t;
        rec.times.push_back(t);
        rec.mean_up.push_back(up.series[i].mean);
        rec.var_up.push_back(up.series[i].var);
        rec.mean_down.push_back(down.series[i].mean);
        rec.var_down.push_back(down.series[i].var);
        const double t_eff = std::min(t, schedule.t_f); // off-diagonal frozen after switch-off
        const DephasingAmplitude a = dephasing_amplitude(params, t_eff);
        rec.envelope.push_back(bath_suppression_envelope(params, t_eff));
        rec.offdiag_abs.push_back(std::abs(a.closed_form) * rec.envelope.back());
    }

    FinalStateReport& rep = result.report;
    rep.p_up = spin.r_uu;
    rep.p_down = spin.r_dd;
    rep.pointer_up = summarize_block(grid, result.state.block_uu, +1);
    rep.pointer_down = summarize_block(grid, result.state.block_dd, -1);
    rep.offdiag_residual = std::abs(result.state.block_ud.scalar_amplitude);
    rep.offdiag_threshold = options.offdiag_threshold;
    rep.post_spin_state = post_measurement_spin_state(result.state);
    rep.correlation_check = rep.pointer_up.location > 0.0 && rep.pointer_down.location < 0.0;
    rep.complete = rep.offdiag_residual < options.offdiag_threshold &&
                   rep.pointer_up.unimodal && rep.pointer_down.unimodal &&
                   rep.correlation_check;
    rep.timescales = compute_timescales(params);
    rep.measured_registration_time_up = up.measured_registration_time;
    rep.measured_registration_time_down = down.measured_registration_time;
    rep.growth_rate_up = up.growth_rate;
    rep.growth_rate_down = down.growth_rate;
    rep.max_trace_error = std::max(up.max_trace_error, down.max_trace_error);
    rep.min_probability = std::min(up.min_probability, down.min_probability);

    const std::vector<double> p0 =
        initial_magnet_distribution(grid, params.coupling_j, options.prep_temperature);
    rep.entropy = entropy_balance(spin, p0, result.state, result.heat_to_bath,
                                  params.temperature, options.offdiag_threshold);

    result.sector_up = std::move(up);
    result.sector_down = std::move(down);
    return result;
}

std::vector<double> pointer_distribution(const CompoundState& state) {
    const std::size_t n = state.block_uu.probabilities.size();
    if (state.block_dd.probabilities.size() != n)
        throw std::invalid_argument("pointer_distribution: block size mismatch");
    std::vector<double> p(n);
    for (std::size_t k = 0; k < n; ++k)
        p[k] = state.block_uu.weight * state.block_uu.probabilities[k] +
               state.block_dd.weight * state.block_dd.probabilities[k];
    return p;
}

ReadoutSample sample_readout(const MagnetizationGrid& grid, const std::vector<double>& distribution,
                             std::size_t n_samples, std::uint64_t seed) {
    if (distribution.size() != grid.size())
        throw std::invalid_argument("sample_readout: size mismatch");
    const double total = compensated_sum(distribution);
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("sample_readout: distribution is not normalized");

    std::vector<double> cdf(distribution.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < distribution.size(); ++k) {
        acc += distribution[k];
        cdf[k] = acc;
    }
    cdf.back() = std::max(cdf.back(), 1.0); // guard the last bin against rounding

    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() {
        // 53 uniform mantissa bits in [0, 1); independent of library distributions
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };

    ReadoutSample sample;
    sample.seed = seed;
    sample.outcomes.reserve(n_samples);
    std::size_t ups = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        int outcome = 0;
        for (int attempt = 0; attempt < 1024 && outcome == 0; ++attempt) {
            const double u = uniform();
            const std::size_t k = static_cast<std::size_t>(
                std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            const double m = grid.value(std::min(k, grid.size() - 1));
            if (m > 0.0) outcome = +1;
            else if (m < 0.0) outcome = -1;
            // m == 0 (possible for even N): resample
        }
        if (outcome == 0)
            throw std::runtime_error("sample_readout: distribution concentrated at m = 0");
        sample.outcomes.push_back(outcome);
        ups += outcome > 0 ? 1u : 0u;
    }
    sample.f_up = n_samples ? static_cast<double>(ups) / static_cast<double>(n_samples) : 0.0;
    sample.f_down = n_samples ? 1.0 - sample.f_up : 0.0;
    return sample;
}

ReadoutSample sample_readout(const MeasurementResult& run, std::size_t n_samples,
                             std::uint64_t seed) {
    if (run.report.offdiag_residual >= run.report.offdiag_threshold)
        throw ScheduleError("sample_readout: measurement not complete "
                            "(off-diagonal residual above threshold)");
    const MagnetizationGrid grid(run.state.block_uu.probabilities.size() - 1);
    return sample_readout(grid, pointer_distribution(run.state), n_samples, seed);
}

SpinMatrix post_measurement_spin_state(const CompoundState& state) {
    const std::complex<double> off = state.spin0.r_ud * state.block_ud.scalar_amplitude;
    return {std::complex<double>(state.block_uu.weight, 0.0), off, std::conj(off),
            std::complex<double>(state.block_dd.weight, 0.0)};
}

StopReductionReport stop_reduction_diagnostics(const InitialSpinState& spin,
                                               const ModelParams& params, double t_stop) {
    spin.validate();
    params.validate();
    if (!(t_stop > 0.0)) throw std::invalid_argument("t_stop must be > 0");

    const MagnetizationGrid grid(params.n_spins);
    const std::vector<double> p0 = initial_magnet_distribution(grid);
    const DephasingAmplitude a = dephasing_amplitude(params, t_stop);

    StopReductionReport rep;
    rep.t_stop = t_stop;
    rep.amplitude_abs = std::abs(a.closed_form);
    rep.envelope = bath_suppression_envelope(params, t_stop);
    rep.offdiag_factor = rep.amplitude_abs * rep.envelope;
    const double log_env = (params.gamma == 0.0)
                               ? 0.0
                               : -std::pow(t_stop / tau_irreversibility(params), 4.0);
    rep.log_offdiag_factor = a.log_abs + log_env;
    const std::complex<double> off = spin.r_ud * a.closed_form * rep.envelope;
    rep.spin_state = {std::complex<double>(spin.r_uu, 0.0), off, std::conj(off),
                      std::complex<double>(spin.r_dd, 0.0)};
    // before the bath acts the diagonal blocks are the untouched paramagnet
    rep.apparatus_mean = grid_mean(grid, p0);
    rep.apparatus_var = grid_variance(grid, p0);
    rep.apparatus_unimodal = count_modes(p0) == 1;
    return rep;
}

StopReductionReport stop_after_reduction(const InitialSpinState& spin, const ModelParams& params,
                                         double t_stop, double window_margin) {
    if (!(window_margin >= 1.0))
        throw std::invalid_argument("stop_after_reduction: window_margin must be >= 1");
    const double lo = window_margin * tau_reduction(params);
    const double hi = tau_irreversibility(params) / window_margin;
    if (!(t_stop >= lo && t_stop <= hi)) {
        std::ostringstream msg;
        msg << "stop_after_reduction: t_stop = " << t_stop
            << " outside the dephasing window [" << lo << ", " << hi << "]";
        if (lo > hi)
            msg << " (window empty: tau_irrev/tau_red = "
                << tau_irreversibility(params) / tau_reduction(params)
                << " is too small for margin " << window_margin << ")";
        throw ScheduleError(msg.str());
    }
    return stop_reduction_diagnostics(spin, params, t_stop);
}

} // namespace spindot
