#include "spindot/bath.hpp"

#include <cmath>
#include <stdexcept>

namespace spindot {

double BathKernel::spectrum(double omega) const {
    if (omega == 0.0) return 0.25 * temperature;
    // expm1 keeps the removable singularity accurate down to |omega| ~ 1e-300
    return 0.25 * omega * std::exp(-std::abs(omega) / cutoff) / std::expm1(omega / temperature);
}

double BathKernel::log_spectrum(double omega) const {
    if (omega == 0.0) return std::log(0.25 * temperature);
    const double x = omega / temperature;
    const double aw = std::abs(omega);
    // ln |e^x - 1|, stable on both branches
    double log_denom;
    if (x > 1.0) {
        log_denom = x + std::log1p(-std::exp(-x));
    } else if (x > 0.0) {
        log_denom = std::log(std::expm1(x));
    } else {
        log_denom = std::log(-std::expm1(x)); // |e^x - 1| = 1 - e^x for x < 0
    }
    return std::log(0.25 * aw) - aw / cutoff - log_denom;
}

namespace {

int checked_sector(int sector_spin) {
    if (sector_spin != +1 && sector_spin != -1)
        throw std::invalid_argument("sector_spin must be +1 or -1");
    return sector_spin;
}

} // namespace

FlipRates build_flip_rates(const ModelParams& p, int sector_spin) {
    p.validate();
    checked_sector(sector_spin);
    const std::size_t n = p.n_spins;
    const double nd = static_cast<double>(n);
    const BathKernel kernel{p.temperature, p.cutoff};
    const double scale = 2.0 * p.gamma;

    FlipRates rates;
    rates.sector_spin = sector_spin;
    rates.up_rates.assign(n + 1, 0.0);
    rates.down_rates.assign(n + 1, 0.0);
    rates.bond_frequency.assign(n, 0.0);

    for (std::size_t k = 0; k < n; ++k) {
        const double m_mid = (2.0 * static_cast<double>(k) + 1.0 - nd) / nd;
        const double omega = 2.0 * (p.coupling_g * sector_spin + p.coupling_j * m_mid);
        rates.bond_frequency[k] = omega;
        rates.up_rates[k] = (nd - static_cast<double>(k)) * scale * kernel.spectrum(-omega);
        rates.down_rates[k + 1] = static_cast<double>(k + 1) * scale * kernel.spectrum(omega);
    }
    for (std::size_t k = 0; k <= n; ++k)
        rates.max_total_rate = std::max(rates.max_total_rate, rates.up_rates[k] + rates.down_rates[k]);
    return rates;
}

double flip_up_rate(const ModelParams& p, int sector_spin, double m) {
    const double h = p.coupling_g * checked_sector(sector_spin) + p.coupling_j * m;
    return 2.0 * p.gamma * BathKernel{p.temperature, p.cutoff}.spectrum(-2.0 * h);
}

double flip_down_rate(const ModelParams& p, int sector_spin, double m) {
    const double h = p.coupling_g * checked_sector(sector_spin) + p.coupling_j * m;
    return 2.0 * p.gamma * BathKernel{p.temperature, p.cutoff}.spectrum(2.0 * h);
}

double mean_field_drift(const ModelParams& p, int sector_spin, double m) {
    return (1.0 - m) * flip_up_rate(p, sector_spin, m) - (1.0 + m) * flip_down_rate(p, sector_spin, m);
}

} // namespace spindot
