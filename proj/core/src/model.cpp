#include "spindot/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spindot {

void ModelParams::validate() const {
    if (n_spins < 1) throw std::invalid_argument("n_spins must be >= 1");
    if (!(coupling_j > 0.0)) throw std::invalid_argument("coupling_j must be > 0");
    if (!(coupling_g >= 0.0)) throw std::invalid_argument("coupling_g must be >= 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be > 0");
    if (!(cutoff > 0.0)) throw std::invalid_argument("cutoff must be > 0");
}

RegimeReport validate_regime(const ModelParams& p, double margin) {
    if (!(margin >= 1.0)) throw std::invalid_argument("regime margin must be >= 1");
    p.validate();

    const double n = static_cast<double>(p.n_spins);
    const double pi = std::numbers::pi_v<double>;
    const double gamma_window = p.gamma * p.cutoff * p.cutoff / (8.0 * pi * p.coupling_g * p.coupling_g);

    RegimeReport report;
    report.margin = margin;
    auto add = [&](std::string name, double left, double right, bool strict = false) {
        RegimeCheck c;
        c.name = std::move(name);
        c.left = left;
        c.right = right;
        c.strict = strict;
        c.satisfied = strict ? (left > right) : (left >= margin * right);
        report.checks.push_back(std::move(c));
    };

    add("N>>1", n, 1.0);
    add("Gamma>>T", p.cutoff, p.temperature);
    add("T>>gamma*J", p.temperature, p.gamma * p.coupling_j);
    add("gamma*J>>(J/N)*(g/Gamma)^2", p.gamma * p.coupling_j,
        (p.coupling_j / n) * (p.coupling_g / p.cutoff) * (p.coupling_g / p.cutoff));
    add("Gamma>>J", p.cutoff, p.coupling_j);
    add("J>g", p.coupling_j, p.coupling_g, /*strict=*/true);
    // two-sided gamma window for tau_red << tau_irrev << tau_recur
    add("N>>gamma*Gamma^2/(8*pi*g^2)", n, gamma_window);
    add("gamma*Gamma^2/(8*pi*g^2)>>4/(N*pi^4)", gamma_window, 4.0 / (n * pi * pi * pi * pi));

    report.overall = true;
    for (const auto& c : report.checks) report.overall = report.overall && c.satisfied;
    return report;
}

double tau_reduction(const ModelParams& p) {
    p.validate();
    if (p.coupling_g == 0.0)
        throw std::domain_error("tau_reduction: g = 0 gives an infinite reduction time");
    return 1.0 / (std::sqrt(2.0 * static_cast<double>(p.n_spins)) * p.coupling_g);
}

double tau_irreversibility(const ModelParams& p) {
    p.validate();
    if (p.coupling_g == 0.0)
        throw std::domain_error("tau_irreversibility: g = 0 (no spin-apparatus coupling)");
    const double n = static_cast<double>(p.n_spins);
    const double denom = n * p.gamma * p.coupling_g * p.coupling_g * p.cutoff * p.cutoff;
    return std::pow(2.0 * std::numbers::pi_v<double> / denom, 0.25);
}

double tau_registration(const ModelParams& p, double m_ferro) {
    p.validate();
    if (!(m_ferro > 0.0))
        throw std::domain_error("tau_registration: m_ferro must be the positive stable root");
    if (p.temperature >= p.coupling_j)
        throw std::domain_error("tau_registration: T >= J, no broken-symmetry phase");
    if (p.coupling_g == 0.0)
        throw std::domain_error("tau_registration: g = 0 never registers");
    const double gap = p.coupling_j - p.temperature;
    const double arg = 3.0 * m_ferro * gap / p.coupling_g;
    if (!(arg > 1.0))
        throw std::domain_error("tau_registration: ln argument <= 1, outside formula validity");
    return std::log(arg) / (p.gamma * gap);
}

double tau_recurrence_estimate(const ModelParams& p) {
    p.validate();
    if (p.coupling_g == 0.0)
        throw std::domain_error("tau_recurrence_estimate: g = 0 has no recurrences");
    return std::numbers::pi_v<double> / (2.0 * p.coupling_g);
}

} // namespace spindot
