#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace spindot {

/**
 * All physical constants of the model, in reduced units.
 *
 * Conventions: hbar = k_B = 1 everywhere; J is the natural energy scale, so
 * every field is a dimensionless number.  N spins of the magnet couple to the
 * tested spin with strength g and to the phonon bath with dimensionless
 * strength gamma; the bath is quasi-Ohmic with Debye cutoff Gamma at
 * temperature T.
 */
struct ModelParams {
    std::size_t n_spins = 1000; ///< N
    double coupling_j = 1.0;    ///< J, ferromagnetic Ising strength (> 0)
    double coupling_g = 0.05;   ///< g, spin-apparatus coupling (>= 0)
    double gamma = 1e-3;        ///< dimensionless bath coupling (> 0)
    double temperature = 0.8;   ///< T, bath temperature (> 0)
    double cutoff = 50.0;       ///< Gamma, Debye cutoff frequency (> 0)

    /// Throws std::invalid_argument on any field outside its domain.
    void validate() const;
};

/// One inequality of the validated-regime chain.
struct RegimeCheck {
    std::string name;
    double left = 0.0;
    double right = 0.0;
    bool strict = false;    ///< plain '>' instead of a margin-scaled '>>'
    bool satisfied = false;
};

struct RegimeReport {
    std::vector<RegimeCheck> checks;
    double margin = 10.0;
    bool overall = false;
};

/**
 * Evaluates the weak-coupling regime chain
 *
 *   N >> 1,   Gamma >> T >> gamma J >> (J/N)(g/Gamma)^2,   Gamma >> J > g
 *
 * plus the two-sided gamma window
 *
 *   N >> gamma Gamma^2 / (8 pi g^2) >> 4 / (N pi^4),
 *
 * with every ">>" read as "left >= margin * right".  A failing regime is a
 * report, not an error.
 */
RegimeReport validate_regime(const ModelParams& params, double margin = 10.0);

/// The four characteristic times of a run, in reduced units.
struct Timescales {
    double tau_red = 0.0;             ///< truncation of the off-diagonal blocks
    double tau_irrev = 0.0;           ///< bath makes the truncation definitive
    double tau_reg = 0.0;             ///< registration estimate (NaN above T_C)
    double tau_recur_estimate = 0.0;  ///< first recurrence of the bare dephasing
};

/// tau_red = 1/(sqrt(2N) g).  Throws std::domain_error when g = 0.
double tau_reduction(const ModelParams& params);

/// tau_irrev = [2 pi / (N gamma g^2 Gamma^2)]^{1/4}.  Throws on any zero parameter.
double tau_irreversibility(const ModelParams& params);

/**
 * tau_reg = ln(3 m_ferro (J-T)/g) / (gamma (J-T)) for the supplied positive
 * ferromagnetic fixed point m_ferro.  Throws std::domain_error when T >= J
 * (no broken-symmetry phase) or when the log argument is <= 1 (coupling too
 * strong for the asymptotic formula).
 */
double tau_registration(const ModelParams& params, double m_ferro);

/// First time |cos(2gt)|^N returns to 1: pi/(2g).
double tau_recurrence_estimate(const ModelParams& params);

} // namespace spindot
