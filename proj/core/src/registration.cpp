#include "spindot/registration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spindot/dephasing.hpp"
#include "spindot/errors.hpp"

namespace spindot {

bool FixedPoints::has_ferromagnetic_pair() const {
    std::size_t stable = 0;
    for (const auto& r : roots) stable += r.stable ? 1u : 0u;
    return stable >= 2;
}

double FixedPoints::ferro_plus() const {
    for (auto it = roots.rbegin(); it != roots.rend(); ++it)
        if (it->stable) return it->m;
    throw std::domain_error("FixedPoints: no stable root");
}

double FixedPoints::ferro_minus() const {
    for (const auto& r : roots)
        if (r.stable) return r.m;
    throw std::domain_error("FixedPoints: no stable root");
}

double FixedPoints::aligned_root() const {
    if (sector_spin >= 0) return ferro_plus();
    return ferro_minus();
}

FixedPoints solve_fixed_points(const ModelParams& p, int sector_spin) {
    p.validate();
    if (sector_spin != -1 && sector_spin != 0 && sector_spin != +1)
        throw std::invalid_argument("sector_spin must be -1, 0 or +1");
    const double gs = (sector_spin == 0) ? 0.0 : p.coupling_g * sector_spin;
    const auto f = [&](double m) {
        return std::tanh((p.coupling_j * m + gs) / p.temperature) - m;
    };
    const auto fprime = [&](double m) {
        const double c = std::cosh((p.coupling_j * m + gs) / p.temperature);
        return p.coupling_j / (p.temperature * c * c) - 1.0;
    };

    FixedPoints fps;
    fps.sector_spin = sector_spin;
    constexpr int kScan = 4096;
    double a = -1.0, fa = f(a);
    for (int i = 1; i <= kScan; ++i) {
        const double b = -1.0 + 2.0 * static_cast<double>(i) / kScan;
        const double fb = f(b);
        if (fa == 0.0) {
            fps.roots.push_back({a, fprime(a) < 0.0});
        } else if (fa * fb < 0.0) {
            double lo = a, hi = b, flo = fa;
            for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if (flo * fm <= 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            const double r = 0.5 * (lo + hi);
            fps.roots.push_back({r, fprime(r) < 0.0});
        }
        a = b;
        fa = fb;
    }
    return fps;
}

void apply_generator(const FlipRates& rates, const std::vector<double>& p,
                     std::vector<double>& dpdt) {
    const std::size_t n = rates.up_rates.size() - 1;
    if (p.size() != n + 1)
        throw std::invalid_argument("apply_generator: size mismatch");
    dpdt.assign(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double flux = rates.up_rates[k] * p[k] - rates.down_rates[k + 1] * p[k + 1];
        dpdt[k] -= flux;
        dpdt[k + 1] += flux;
    }
}

void step_master_equation(DiagonalBlock& block, const FlipRates& rates, double dt) {
    const std::size_t n = rates.up_rates.size() - 1;
    if (block.probabilities.size() != n + 1)
        throw std::invalid_argument("step_master_equation: size mismatch");
    if (!(dt > 0.0)) throw ScheduleError("step_master_equation: dt must be > 0");
    if (dt * rates.max_total_rate > 1.0)
        throw ScheduleError("step_master_equation: dt exceeds 1/max_total_rate, "
                            "positivity not guaranteed");
    std::vector<double>& p = block.probabilities;
    std::vector<double> flux(n);
    for (std::size_t k = 0; k < n; ++k)
        flux[k] = dt * (rates.up_rates[k] * p[k] - rates.down_rates[k + 1] * p[k + 1]);
    for (std::size_t k = 0; k < n; ++k) {
        p[k] -= flux[k];
        p[k + 1] += flux[k];
    }
}

namespace {

struct StepAudit {
    double max_trace_error = 0.0;
    double min_probability = 0.0;
    double heat = 0.0;
};

/// Advances p in place with fixed rates, auditing trace and positivity at
/// every step.  The mean is tracked incrementally from the net flux (exact up
/// to rounding) and resynchronized against the full sum every 1024 steps and
/// at every event boundary.
class SectorIntegrator {
public:
    SectorIntegrator(const MagnetizationGrid& grid, std::vector<double>& p)
        : grid_(grid), p_(p), n_(grid.n_spins()), flux_(n_, 0.0) {
        mean_ = grid_mean(grid_, p_);
    }

    void set_rates(const FlipRates* rates, double dt_safety) {
        rates_ = rates;
        dt_max_ = dt_safety / std::max(rates->max_total_rate, 1e-300);
    }

    double mean() const { return mean_; }
    double time() const { return t_; }
    const StepAudit& audit() const { return audit_; }

    /// on_step(prev_t, t, prev_mean, mean) after every accepted step.
    template <typename OnStep>
    void advance_to(double t_end, OnStep&& on_step) {
        const auto& up = rates_->up_rates;
        const auto& dn = rates_->down_rates;
        const auto& omega = rates_->bond_frequency;
        while (t_ < t_end) {
            const double dt = std::min(dt_max_, t_end - t_);
            double sum_flux = 0.0, sum_flux_omega = 0.0;
            for (std::size_t k = 0; k < n_; ++k) {
                const double f = dt * (up[k] * p_[k] - dn[k + 1] * p_[k + 1]);
                flux_[k] = f;
                sum_flux += f;
                sum_flux_omega += f * omega[k];
            }
            p_[0] -= flux_[0];
            for (std::size_t k = 1; k < n_; ++k) p_[k] += flux_[k - 1] - flux_[k];
            p_[n_] += flux_[n_ - 1];

            double trace = 0.0, trace_c = 0.0, pmin = p_[0];
            for (std::size_t k = 0; k <= n_; ++k) {
                const double y = p_[k] - trace_c;
                const double s = trace + y;
                trace_c = (s - trace) - y;
                trace = s;
                pmin = std::min(pmin, p_[k]);
            }
            audit_.heat += sum_flux_omega;
            audit_.max_trace_error = std::max(audit_.max_trace_error, std::abs(trace - 1.0));
            audit_.min_probability = std::min(audit_.min_probability, pmin);
            if (pmin < -1e-12)
                throw ScheduleError("master equation produced a negative probability");

            const double prev_t = t_;
            const double prev_mean = mean_;
            mean_ += grid_.spacing() * sum_flux;
            if (++steps_since_sync_ >= 1024) {
                mean_ = grid_mean(grid_, p_);
                steps_since_sync_ = 0;
            }
            t_ += dt;
            on_step(prev_t, t_, prev_mean, mean_);
        }
        mean_ = grid_mean(grid_, p_);
    }

private:
    const MagnetizationGrid& grid_;
    std::vector<double>& p_;
    std::size_t n_;
    std::vector<double> flux_;
    const FlipRates* rates_ = nullptr;
    double dt_max_ = 0.0;
    double t_ = 0.0;
    double mean_ = 0.0;
    int steps_since_sync_ = 0;
    StepAudit audit_;
};

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return sxy / sxx;
}

} // namespace

RegistrationResult run_registration(const ModelParams& params,
                                    const RegistrationSettings& settings) {
    params.validate();
    if (settings.sector_spin != +1 && settings.sector_spin != -1)
        throw std::invalid_argument("run_registration: sector_spin must be +1 or -1");
    if (!(settings.t_max > 0.0)) throw std::invalid_argument("run_registration: t_max must be > 0");
    if (!(settings.dt_safety > 0.0) || settings.dt_safety > 1.0)
        throw std::invalid_argument("run_registration: dt_safety must be in (0, 1]");
    if (settings.sample_count < 1)
        throw std::invalid_argument("run_registration: sample_count must be >= 1");

    const MagnetizationGrid grid(params.n_spins);
    const int s = settings.sector_spin;

    RegistrationResult result;
    {
        const FixedPoints bare = solve_fixed_points(params, 0);
        if (bare.has_ferromagnetic_pair()) {
            result.m_ferro = (s > 0) ? bare.ferro_plus() : bare.ferro_minus();
            result.threshold = settings.threshold_fraction * std::abs(result.m_ferro);
        }
        const FixedPoints coupled = solve_fixed_points(params, s);
        if (!coupled.roots.empty()) result.m_ferro_coupled = coupled.aligned_root();
    }

    std::vector<double> p =
        initial_magnet_distribution(grid, params.coupling_j, settings.prep_temperature);

    const FlipRates rates_on = build_flip_rates(params, s);
    FlipRates rates_off;
    const double g_off = std::max(0.0, settings.g_off_time);
    const bool has_off_phase = g_off < settings.t_max && params.coupling_g > 0.0;
    if (has_off_phase) {
        ModelParams bare = params;
        bare.coupling_g = 0.0;
        rates_off = build_flip_rates(bare, s);
    }

    // event grid: uniform samples, snapshot times, the phase switch
    std::vector<double> events;
    for (std::size_t i = 1; i <= settings.sample_count; ++i)
        events.push_back(settings.t_max * static_cast<double>(i) /
                         static_cast<double>(settings.sample_count));
    for (double ts : settings.snapshot_times)
        if (ts > 0.0 && ts <= settings.t_max) events.push_back(ts);
    if (has_off_phase) events.push_back(g_off);
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());

    auto is_snapshot_time = [&](double t) {
        return std::find(settings.snapshot_times.begin(), settings.snapshot_times.end(), t) !=
               settings.snapshot_times.end();
    };

    result.series.push_back({0.0, grid_mean(grid, p), grid_variance(grid, p)});
    if (is_snapshot_time(0.0)) result.snapshots.push_back({0.0, p});

    const double source_shift =
        (params.coupling_j > params.temperature)
            ? params.coupling_g / (params.coupling_j - params.temperature)
            : 0.0;

    std::vector<double> fit_t, fit_logu;
    double crossing = std::numeric_limits<double>::quiet_NaN();
    int fit_decimate = 0;

    auto on_step = [&](double prev_t, double t, double prev_mean, double mean) {
        const double am_prev = std::abs(prev_mean), am = std::abs(mean);
        if (std::isnan(crossing) && !std::isnan(result.threshold) &&
            am >= result.threshold && am_prev < result.threshold) {
            const double w = (result.threshold - am_prev) / (am - am_prev);
            crossing = prev_t + w * (t - prev_t);
        }
        if (source_shift > 0.0 && am >= settings.fit_lo && am <= settings.fit_hi) {
            if (++fit_decimate >= 4) {
                fit_decimate = 0;
                fit_t.push_back(t);
                fit_logu.push_back(std::log(am + source_shift));
            }
        }
    };

    SectorIntegrator integ(grid, p);
    integ.set_rates(&rates_on, settings.dt_safety);
    bool g_is_on = true;
    for (double te : events) {
        integ.advance_to(te, on_step);
        if (has_off_phase && g_is_on && te == g_off) {
            integ.set_rates(&rates_off, settings.dt_safety);
            g_is_on = false;
        }
        result.series.push_back({te, integ.mean(), grid_variance(grid, p)});
        if (is_snapshot_time(te)) result.snapshots.push_back({te, p});
    }

    result.registered = !std::isnan(crossing);
    result.measured_registration_time = crossing;
    if (fit_t.size() >= 8) result.growth_rate = least_squares_slope(fit_t, fit_logu);

    result.final_mean = grid_mean(grid, p);
    result.final_var = grid_variance(grid, p);
    result.unimodal_final = count_modes(p) == 1;
    double wrong = 0.0;
    for (std::size_t k = 0; k <= params.n_spins; ++k)
        if (grid.value(k) * s < 0.0) wrong += p[k];
    result.wrong_well_mass = wrong;
    result.heat_to_bath = integ.audit().heat;
    result.max_trace_error = integ.audit().max_trace_error;
    result.min_probability = integ.audit().min_probability;
    result.final_block.probabilities = std::move(p);
    result.final_block.weight = 1.0;
    return result;
}

ParamagnetProbeResult paramagnet_lifetime_probe(const ModelParams& params, double t_max,
                                                std::size_t sample_count) {
    params.validate();
    if (params.coupling_g != 0.0)
        throw std::invalid_argument("paramagnet_lifetime_probe requires g = 0");
    if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be > 0");

    const MagnetizationGrid grid(params.n_spins);
    std::vector<double> p = initial_magnet_distribution(grid);
    const FlipRates rates = build_flip_rates(params, +1); // sector irrelevant at g = 0

    SectorIntegrator integ(grid, p);
    integ.set_rates(&rates, 0.1);

    ParamagnetProbeResult result;
    result.series.push_back({0.0, grid_mean(grid, p), grid_variance(grid, p), count_modes(p)});
    for (std::size_t i = 1; i <= sample_count; ++i) {
        const double te = t_max * static_cast<double>(i) / static_cast<double>(sample_count);
        integ.advance_to(te, [](double, double, double, double) {});
        ParamagnetProbePoint pt;
        pt.t = te;
        pt.mean = integ.mean();
        pt.var = grid_variance(grid, p);
        pt.modes = count_modes(p);
        result.series.push_back(pt);
        result.max_abs_mean = std::max(result.max_abs_mean, std::abs(pt.mean));
        if (std::isnan(result.bimodality_onset) && pt.modes >= 2) result.bimodality_onset = te;
    }
    return result;
}

Timescales compute_timescales(const ModelParams& params) {
    Timescales ts;
    ts.tau_red = tau_reduction(params);
    ts.tau_irrev = tau_irreversibility(params);
    ts.tau_recur_estimate = tau_recurrence_estimate(params);
    ts.tau_reg = std::numeric_limits<double>::quiet_NaN();
    if (params.temperature < params.coupling_j) {
        const FixedPoints bare = solve_fixed_points(params, 0);
        if (bare.has_ferromagnetic_pair()) {
            const double arg = 3.0 * bare.ferro_plus() *
                               (params.coupling_j - params.temperature) / params.coupling_g;
            if (arg > 1.0) ts.tau_reg = tau_registration(params, bare.ferro_plus());
        }
    }
    return ts;
}

} // namespace spindot
