#include "spindot/oracle.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace spindot {

namespace {

void check_size(std::size_t n) {
    if (n < 1 || n > kMaxOracleSpins)
        throw std::invalid_argument("oracle: n_spins must be in [1, 14]");
}

} // namespace

std::complex<double> exact_dephasing(std::size_t n_spins, double g, double t) {
    check_size(n_spins);
    const std::uint64_t count = std::uint64_t{1} << n_spins;
    const double norm = 1.0 / static_cast<double>(count);
    const double nd = static_cast<double>(n_spins);
    double re = 0.0, im = 0.0;
    for (std::uint64_t c = 0; c < count; ++c) {
        const double mu = (2.0 * static_cast<double>(std::popcount(c)) - nd) / nd;
        const double phase = 2.0 * nd * g * mu * t;
        re += std::cos(phase);
        im += std::sin(phase);
    }
    return {re * norm, im * norm};
}

std::vector<double> exact_gibbs(const ModelParams& params, int sector_spin) {
    params.validate();
    check_size(params.n_spins);
    if (sector_spin != -1 && sector_spin != 0 && sector_spin != +1)
        throw std::invalid_argument("sector_spin must be -1, 0 or +1");
    const std::size_t n = params.n_spins;
    const double nd = static_cast<double>(n);
    const double gs = (sector_spin == 0) ? 0.0 : params.coupling_g * sector_spin;
    const std::uint64_t count = std::uint64_t{1} << n;

    std::vector<double> weights(n + 1, 0.0);
    for (std::uint64_t c = 0; c < count; ++c) {
        const int k = std::popcount(c);
        const double mu = (2.0 * k - nd) / nd;
        const double energy = -nd * params.coupling_j * mu * mu / 2.0 - nd * gs * mu;
        weights[static_cast<std::size_t>(k)] += std::exp(-energy / params.temperature);
    }
    double total = 0.0;
    for (double w : weights) total += w;
    for (double& w : weights) w /= total;
    return weights;
}

std::vector<std::uint64_t> shell_counts(std::size_t n_spins) {
    check_size(n_spins);
    const std::uint64_t count = std::uint64_t{1} << n_spins;
    std::vector<std::uint64_t> shells(n_spins + 1, 0);
    for (std::uint64_t c = 0; c < count; ++c)
        ++shells[static_cast<std::size_t>(std::popcount(c))];
    return shells;
}

} // namespace spindot
