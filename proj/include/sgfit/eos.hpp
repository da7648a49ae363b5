#ifndef SGFIT_EOS_HPP
#define SGFIT_EOS_HPP

#include <cmath>
#include <string>

#include "sgfit/errors.hpp"

namespace sgfit {

/// The four stiffened-gas constants, all in SI base units.
///
/// gamma is dimensionless and must exceed 1 so that the Grueneisen
/// coefficient gamma - 1 stays positive.  c_v here is a fit coefficient of
/// the temperature model, not the physical specific heat.
struct SgParams {
    double gamma; ///< adiabatic-like exponent, > 1
    double q;     ///< specific energy offset, J/kg
    double p_inf; ///< stiffening pressure, Pa, >= 0
    double c_v;   ///< temperature-model coefficient, J/(kg K), > 0

    bool valid() const {
        return std::isfinite(gamma) && gamma > 1.0 &&
               std::isfinite(q) &&
               std::isfinite(p_inf) && p_inf >= 0.0 &&
               std::isfinite(c_v) && c_v > 0.0;
    }

    void validate() const {
        if (!(std::isfinite(gamma) && gamma > 1.0))
            throw DomainError("SgParams: gamma must be finite and > 1, got " + std::to_string(gamma));
        if (!std::isfinite(q))
            throw DomainError("SgParams: q must be finite");
        if (!(std::isfinite(p_inf) && p_inf >= 0.0))
            throw DomainError("SgParams: p_inf must be finite and >= 0, got " + std::to_string(p_inf));
        if (!(std::isfinite(c_v) && c_v > 0.0))
            throw DomainError("SgParams: c_v must be finite and > 0, got " + std::to_string(c_v));
    }
};

/// One thermodynamic sample in SI units.
struct StatePoint {
    double T; ///< temperature, K
    double p; ///< pressure, Pa
    double v; ///< specific volume, m^3/kg
    double e; ///< specific internal energy, J/kg

    double rho() const { return 1.0 / v; }
};

namespace detail {
inline void require_positive(double x, const char* name) {
    if (!(std::isfinite(x) && x > 0.0))
        throw DomainError(std::string(name) + " must be finite and positive, got " + std::to_string(x));
}
} // namespace detail

/// p = (gamma - 1) rho (e - q) - gamma p_inf.
/// May return a negative value; physicality is checked by the fit validator.
inline double pressure(const SgParams& sg, double rho, double e) {
    detail::require_positive(rho, "rho");
    return (sg.gamma - 1.0) * rho * (e - sg.q) - sg.gamma * sg.p_inf;
}

/// T = (e - q - p_inf / rho) / c_v.
inline double temperature(const SgParams& sg, double rho, double e) {
    detail::require_positive(rho, "rho");
    detail::require_positive(sg.c_v, "c_v");
    return (e - sg.q - sg.p_inf / rho) / sg.c_v;
}

/// e = A p v + B v + C with A = 1/(gamma-1), B = gamma p_inf/(gamma-1), C = q.
/// Exact inverse of pressure() at fixed v.
inline double internal_energy(const SgParams& sg, double p, double v) {
    detail::require_positive(v, "v");
    const double a = 1.0 / (sg.gamma - 1.0);
    const double b = sg.gamma * sg.p_inf / (sg.gamma - 1.0);
    return a * p * v + b * v + sg.q;
}

/// c^2 = (p + p_inf) / rho.
inline double sound_speed_sq(const SgParams& sg, double rho, double p) {
    detail::require_positive(rho, "rho");
    if (!(p + sg.p_inf > 0.0))
        throw NonPhysicalStateError("sound_speed_sq: p + p_inf must be positive, got " +
                                    std::to_string(p + sg.p_inf));
    return (p + sg.p_inf) / rho;
}

/// Generalized adiabatic coefficient gamma (p + p_inf) / p.
inline double adiabatic_gamma(const SgParams& sg, double p) {
    if (p == 0.0 || !std::isfinite(p))
        throw DomainError("adiabatic_gamma: p must be finite and nonzero");
    return sg.gamma * (p + sg.p_inf) / p;
}

/// Grueneisen coefficient gamma - 1.
inline double gruneisen(const SgParams& sg) {
    return sg.gamma - 1.0;
}

/// Fundamental derivative (gamma + 1) / 2.
inline double fundamental_derivative(const SgParams& sg) {
    return 0.5 * (sg.gamma + 1.0);
}

/// Density consistent with both the pressure and temperature models:
/// rho = (p + p_inf) / ((gamma - 1) c_v T), with e = q + c_v T + p_inf / rho.
inline double density_from_pT(const SgParams& sg, double p, double T) {
    detail::require_positive(T, "T");
    detail::require_positive(sg.c_v, "c_v");
    if (!(p + sg.p_inf > 0.0))
        throw NonPhysicalStateError("density_from_pT: p + p_inf must be positive");
    return (p + sg.p_inf) / ((sg.gamma - 1.0) * sg.c_v * T);
}

/// Internal energy at a (rho, T) state: e = q + c_v T + p_inf / rho.
inline double internal_energy_from_rhoT(const SgParams& sg, double rho, double T) {
    detail::require_positive(rho, "rho");
    return sg.q + sg.c_v * T + sg.p_inf / rho;
}

/// Full state at (p, T); convenience composition used by synthesis and the CLI.
inline StatePoint state_from_pT(const SgParams& sg, double p, double T) {
    const double rho = density_from_pT(sg, p, T);
    const double e = internal_energy_from_rhoT(sg, rho, T);
    return StatePoint{T, p, 1.0 / rho, e};
}

} // namespace sgfit

#endif // SGFIT_EOS_HPP
