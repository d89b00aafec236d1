#include "spindot/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spindot {

MagnetizationGrid::MagnetizationGrid(std::size_t n_spins) : n_(n_spins) {
    if (n_ < 1) throw std::invalid_argument("MagnetizationGrid: n_spins must be >= 1");
    values_.resize(n_ + 1);
    log_degeneracy_.resize(n_ + 1);
    const double n = static_cast<double>(n_);
    const double log_n1 = std::lgamma(n + 1.0);
    for (std::size_t k = 0; k <= n_; ++k) {
        values_[k] = (2.0 * static_cast<double>(k) - n) / n;
        log_degeneracy_[k] = log_n1 - std::lgamma(static_cast<double>(k) + 1.0)
                                    - std::lgamma(n - static_cast<double>(k) + 1.0);
    }
}

double MagnetizationGrid::log_binomial_pmf(std::size_t k) const {
    return log_degeneracy_[k] - static_cast<double>(n_) * std::numbers::ln2_v<double>;
}

double MagnetizationGrid::log_total_degeneracy() const {
    // log-sum-exp against the largest shell
    double lmax = log_degeneracy_[n_ / 2];
    double acc = 0.0, comp = 0.0;
    for (double ld : log_degeneracy_) {
        const double term = std::exp(ld - lmax);
        const double y = term - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    return lmax + std::log(acc);
}

double compensated_sum(const std::vector<double>& xs) {
    double acc = 0.0, comp = 0.0;
    for (double x : xs) {
        const double y = x - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    return acc;
}

double grid_mean(const MagnetizationGrid& grid, const std::vector<double>& p) {
    double acc = 0.0, comp = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double y = p[k] * grid.value(k) - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
    }
    return acc;
}

double grid_variance(const MagnetizationGrid& grid, const std::vector<double>& p) {
    const double mu = grid_mean(grid, p);
    double acc = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double d = grid.value(k) - mu;
        acc += p[k] * d * d;
    }
    return acc;
}

std::size_t count_modes(const std::vector<double>& p, double floor) {
    if (p.empty()) return 0;
    double pmax = 0.0;
    for (double x : p) pmax = std::max(pmax, x);
    const double cut = floor * pmax;
    std::size_t modes = 0;
    const std::size_t n = p.size();
    for (std::size_t k = 0; k < n; ++k) {
        if (p[k] <= cut) continue;
        const double left = (k == 0) ? -1.0 : p[k - 1];
        const double right = (k + 1 == n) ? -1.0 : p[k + 1];
        if (p[k] >= left && p[k] > right) ++modes;
    }
    return modes;
}

} // namespace spindot
