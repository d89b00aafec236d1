#pragma once

#include <cstddef>
#include <vector>

namespace spindot {

/**
 * Collective magnetization grid of an N-spin magnet.
 *
 * Holds the N+1 shell values m_k = (2k - N)/N, k = 0..N, together with the
 * log-degeneracy ln C(N,k) of each shell.  Degeneracies are kept in log space
 * throughout; C(N,k) itself overflows double near N ~ 1030.
 *
 * The values are built as (2k-N)/N so that the grid is exactly antisymmetric
 * in floating point: value(N-k) == -value(k).
 */
class MagnetizationGrid {
public:
    explicit MagnetizationGrid(std::size_t n_spins);

    std::size_t n_spins() const { return n_; }
    std::size_t size() const { return n_ + 1; }

    double value(std::size_t k) const { return values_[k]; }
    double log_degeneracy(std::size_t k) const { return log_degeneracy_[k]; }

    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& log_degeneracies() const { return log_degeneracy_; }

    /// Grid spacing 2/N.
    double spacing() const { return 2.0 / static_cast<double>(n_); }

    /// ln of the symmetric binomial pmf C(N,k) / 2^N.
    double log_binomial_pmf(std::size_t k) const;

    /// ln of sum_k C(N,k), accumulated stably (equals N ln 2 analytically).
    double log_total_degeneracy() const;

private:
    std::size_t n_;
    std::vector<double> values_;
    std::vector<double> log_degeneracy_;
};

/// Kahan-compensated sum (used wherever probability vectors are reduced).
double compensated_sum(const std::vector<double>& xs);

/// Mean of m under a probability vector over the grid.
double grid_mean(const MagnetizationGrid& grid, const std::vector<double>& p);

/// Variance of m under a probability vector over the grid.
double grid_variance(const MagnetizationGrid& grid, const std::vector<double>& p);

/// Number of strict local maxima of p, ignoring entries below floor*max(p).
std::size_t count_modes(const std::vector<double>& p, double floor = 1e-12);

} // namespace spindot
