#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "spindot/model.hpp"

namespace spindot {

/// Hard cap on brute-force system sizes (2^14 = 16384 configurations).
inline constexpr std::size_t kMaxOracleSpins = 14;

/// Dephasing amplitude by explicit enumeration of all 2^n z-basis
/// configurations: sum_c 2^-n exp(2 i n g mu(c) t), mu(c) = (2 popcount - n)/n.
/// Independent of the collective-sector code path.  Throws for n > 14.
std::complex<double> exact_dephasing(std::size_t n_spins, double g, double t);

/// Sector Gibbs weights by enumeration under E(c) = -N J mu^2/2 - N g s mu,
/// aggregated into the N+1 magnetization shells.  Throws for N > 14.
std::vector<double> exact_gibbs(const ModelParams& params, int sector_spin);

/// Number of configurations per shell, counted by enumeration (equals C(n,k)).
std::vector<std::uint64_t> shell_counts(std::size_t n_spins);

} // namespace spindot
