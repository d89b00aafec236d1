#include "spindot/dephasing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spindot {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

/// 2gt reduced to (-pi, pi].  Exact up to the representation of 2*pi because
/// the shell phases (2k-N)*theta only ever multiply theta by integers.
double reduced_phase(double g, double t) { return std::remainder(2.0 * g * t, kTwoPi); }

double signed_pow(double base, std::size_t n) {
    const double mag = std::pow(std::abs(base), static_cast<double>(n));
    return (base < 0.0 && (n % 2 == 1)) ? -mag : mag;
}

} // namespace

std::vector<double> initial_magnet_distribution(const MagnetizationGrid& grid,
                                                double coupling_j, double prep_temperature) {
    if (!(prep_temperature > 0.0))
        throw std::invalid_argument("prep_temperature must be > 0 (or infinite)");
    const std::size_t n = grid.n_spins();
    std::vector<double> logw(n + 1);
    const bool tilt = std::isfinite(prep_temperature);
    for (std::size_t k = 0; k <= n; ++k) {
        logw[k] = grid.log_binomial_pmf(k);
        if (tilt) {
            const double m = grid.value(k);
            logw[k] += static_cast<double>(n) * coupling_j * m * m / (2.0 * prep_temperature);
        }
    }
    const double lmax = *std::max_element(logw.begin(), logw.end());
    std::vector<double> p(n + 1);
    for (std::size_t k = 0; k <= n; ++k) p[k] = std::exp(logw[k] - lmax);
    const double z = compensated_sum(p);
    for (double& x : p) x /= z;
    return p;
}

std::vector<double> initial_magnet_distribution(const ModelParams& params, double prep_temperature) {
    return initial_magnet_distribution(MagnetizationGrid(params.n_spins),
                                       params.coupling_j, prep_temperature);
}

DephasingAmplitude dephasing_amplitude(const ModelParams& p, double t) {
    p.validate();
    const std::size_t n = p.n_spins;
    const double theta = reduced_phase(p.coupling_g, t);
    const double c = std::cos(theta);

    DephasingAmplitude out;
    out.closed_form = signed_pow(c, n);
    out.log_abs = (c == 0.0) ? -std::numeric_limits<double>::infinity()
                             : static_cast<double>(n) * std::log(std::abs(c));

    // spectral route: sum_k C(N,k) 2^-N e^{i (2k-N) theta}, Kahan-compensated
    const MagnetizationGrid grid(n);
    double re = 0.0, re_c = 0.0, im = 0.0, im_c = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double w = std::exp(grid.log_binomial_pmf(k));
        const double phase = (2.0 * static_cast<double>(k) - static_cast<double>(n)) * theta;
        const double xr = w * std::cos(phase);
        const double xi = w * std::sin(phase);
        double y = xr - re_c, s = re + y;
        re_c = (s - re) - y;
        re = s;
        y = xi - im_c;
        s = im + y;
        im_c = (s - im) - y;
        im = s;
    }
    out.spectral_sum = {re, im};
    return out;
}

double bath_suppression_envelope(const ModelParams& p, double t) {
    if (p.gamma == 0.0) return 1.0; // no bath, recurrences survive
    const double x = t / tau_irreversibility(p);
    const double x2 = x * x;
    return std::exp(-x2 * x2);
}

double reduction_crossing_time(const ModelParams& p) {
    const std::size_t n = p.n_spins;
    if (p.coupling_g == 0.0) throw std::domain_error("reduction_crossing_time: g = 0");
    // |A| = |cos(2gt)|^N crosses 1/e where cos(2gt) = e^{-1/N}; first branch
    const double target = std::exp(-1.0 / static_cast<double>(n));
    return std::acos(target) / (2.0 * p.coupling_g);
}

OffDiagonalTrajectory offdiagonal_trajectory(const ModelParams& p,
                                             std::span<const double> times,
                                             double survival_threshold) {
    if (!std::is_sorted(times.begin(), times.end()))
        throw std::invalid_argument("offdiagonal_trajectory: times must be sorted ascending");

    OffDiagonalTrajectory traj;
    traj.points.reserve(times.size());
    for (double t : times) {
        const DephasingAmplitude a = dephasing_amplitude(p, t);
        TrajectoryPoint pt;
        pt.t = t;
        pt.abs_amplitude = std::abs(a.closed_form);
        pt.envelope = bath_suppression_envelope(p, t);
        pt.product = pt.abs_amplitude * pt.envelope;
        traj.points.push_back(pt);
    }

    traj.first_recurrence_time = tau_recurrence_estimate(p);
    const DephasingAmplitude rec = dephasing_amplitude(p, traj.first_recurrence_time);
    traj.recurrence_product =
        std::abs(rec.closed_form) * bath_suppression_envelope(p, traj.first_recurrence_time);
    traj.recurrence_survives = traj.recurrence_product > survival_threshold;
    return traj;
}

OffDiagonalBlock offdiagonal_block(const ModelParams& p, double t) {
    const std::size_t n = p.n_spins;
    const MagnetizationGrid grid(n);
    const double theta = reduced_phase(p.coupling_g, t);
    const double env = bath_suppression_envelope(p, t);

    OffDiagonalBlock block;
    block.amplitudes.resize(n + 1);
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t k = 0; k <= n; ++k) {
        const double w = std::exp(grid.log_binomial_pmf(k)) * env;
        const double phase = (2.0 * static_cast<double>(k) - static_cast<double>(n)) * theta;
        block.amplitudes[k] = {w * std::cos(phase), w * std::sin(phase)};
        sum += block.amplitudes[k];
    }
    block.scalar_amplitude = sum;
    return block;
}

} // namespace spindot
