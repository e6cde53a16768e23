#ifndef HYBRIDQ_MODEL_HPP
#define HYBRIDQ_MODEL_HPP

#include <cmath>

#include "hybridq/error.hpp"

namespace hybridq {

namespace constants {
// CODATA 2018, SI.
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double electron_charge = 1.602176634e-19; // C
inline constexpr double electron_mass = 9.1093837015e-31;  // kg

/// hbar^2 / m_e in meV nm^2 (~76.20).
inline constexpr double hbar2_over_me_meV_nm2 =
    hbar * hbar / electron_mass / electron_charge * 1e3 * 1e18;

/// hbar e / m_e in meV / T, i.e. twice the Bohr magneton (~0.11577).
inline constexpr double hbar_e_over_me_meV_per_T = hbar / electron_mass * 1e3;
} // namespace constants

/// Laboratory-unit description of the dot and the applied fields.
struct PhysicalParams {
    double hw0 = 30.0;     ///< confinement energy hbar*omega_0 [meV]
    double a = 30.0;       ///< half distance between the well minima [nm]
    double b = 30.0;       ///< barrier-height length [nm]
    double gamma = -1e-3;  ///< linear tilt, in units of hbar*omega_0 / a
    double B0 = 0.5;       ///< uniform Zeeman field along z [T]
    double bSLa = 2.0;     ///< slanting-field gradient times a [T]
    double m_ratio = 0.041;///< effective mass m*/m_e

    friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;
};

/// Dimensionless coefficients of the scaled two-dimensional Hamiltonian.
/// Energies are in units of hbar*omega_0 and lengths in units of a.
struct ScaledParams {
    double r_a = 0.0;        ///< hbar*omega_a / hbar*omega_0, omega_a = hbar/(m* a^2)
    double r_c = 0.0;        ///< hbar*omega_c* / hbar*omega_0, omega_c* = e B0 / m*
    double beta = 0.0;       ///< bSL a / (2 B0)
    double ab_ratio = 1.0;   ///< (a/b)^2
    double gamma = 0.0;
    double ell0_over_a = 0.0;///< sqrt(r_a)

    friend bool operator==(const ScaledParams&, const ScaledParams&) = default;
};

inline void validate(const PhysicalParams& p) {
    if (!(p.hw0 > 0) || !(p.a > 0) || !(p.b > 0) || !(p.m_ratio > 0))
        throw ParameterError("hw0, a, b and m_ratio must be positive");
    if (!(p.B0 >= 0) || !(p.bSLa >= 0))
        throw ParameterError("B0 and bSLa must be non-negative");
    if (!(std::abs(p.gamma) < 1))
        throw ParameterError("|gamma| must be below 1");
    if (p.B0 == 0 && p.bSLa > 0)
        throw ParameterError("bSLa > 0 requires a finite Zeeman field B0");
}

/// hbar*omega_a = hbar^2 / (m* a^2) in meV.
inline double hbar_omega_a(const PhysicalParams& p) {
    return constants::hbar2_over_me_meV_nm2 / (p.m_ratio * p.a * p.a);
}

/// hbar*omega_c* = hbar e B0 / m* in meV.
inline double hbar_omega_c(const PhysicalParams& p) {
    return constants::hbar_e_over_me_meV_per_T * p.B0 / p.m_ratio;
}

inline ScaledParams scale(const PhysicalParams& p) {
    validate(p);
    ScaledParams s;
    s.r_a = hbar_omega_a(p) / p.hw0;
    s.r_c = hbar_omega_c(p) / p.hw0;
    s.beta = p.B0 > 0 ? p.bSLa / (2.0 * p.B0) : 0.0;
    s.ab_ratio = (p.a / p.b) * (p.a / p.b);
    s.gamma = p.gamma;
    s.ell0_over_a = std::sqrt(s.r_a);
    return s;
}

/// Scaled double-well potential in units of hbar*omega_0 at z' = z/a.
inline double potential(double zp, const ScaledParams& s) {
    const double q = zp * zp - 1.0;
    return s.ab_ratio * q * q / (8.0 * s.r_a) - s.gamma * zp;
}

} // namespace hybridq

#endif // HYBRIDQ_MODEL_HPP
