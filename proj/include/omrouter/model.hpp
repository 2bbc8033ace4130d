#pragma once

#include <cmath>
#include <string>

#include "omrouter/constants.hpp"
#include "omrouter/errors.hpp"

namespace omrouter {

/// Physical parameters of the hybrid opto-electromechanical router.
///
/// Strict SI with angular frequencies: every rate, detuning and carrier is in
/// rad/s, couplings g1/g2 in rad/(s*m). Detunings are the bare cavity-pump
/// detunings; the displacement-shifted ones come from effective_detunings().
template <typename Scalar>
struct BasicSystemParams
{
    Scalar omega_m{};     ///< mechanical angular frequency
    Scalar mass{};        ///< effective mass (kg)
    Scalar gamma_m{};     ///< mechanical damping rate
    Scalar kappa1{};      ///< optical amplitude decay (total leak rate 2*kappa1)
    Scalar kappa2{};      ///< microwave amplitude decay
    Scalar g1{};          ///< optomechanical coupling per displacement
    Scalar g2{};          ///< electromechanical coupling per displacement
    Scalar delta_a{};     ///< optical cavity-pump detuning
    Scalar delta_c{};     ///< microwave cavity-pump detuning
    Scalar omega_l{};     ///< optical pump carrier
    Scalar omega_p{};     ///< microwave pump carrier
    Scalar power_l{};     ///< optical pump power (W)
    Scalar power_p{};     ///< microwave pump power (W)
    Scalar temperature{}; ///< bath temperature (K)
    /// Photon-flux drive convention sqrt(2 kappa P / (hbar omega)). When false the
    /// drive is sqrt(2 kappa P / omega) with no hbar.
    bool hbar_in_drive = true;

    /// Throws InvalidParameter naming the first offending field.
    void validate() const;

    bool resolved_sideband() const { return omega_m > Scalar(10) * kappa1; }

    template <typename Other>
    BasicSystemParams<Other> cast() const
    {
        BasicSystemParams<Other> out;
        out.omega_m = Other(omega_m);
        out.mass = Other(mass);
        out.gamma_m = Other(gamma_m);
        out.kappa1 = Other(kappa1);
        out.kappa2 = Other(kappa2);
        out.g1 = Other(g1);
        out.g2 = Other(g2);
        out.delta_a = Other(delta_a);
        out.delta_c = Other(delta_c);
        out.omega_l = Other(omega_l);
        out.omega_p = Other(omega_p);
        out.power_l = Other(power_l);
        out.power_p = Other(power_p);
        out.temperature = Other(temperature);
        out.hbar_in_drive = hbar_in_drive;
        return out;
    }

    bool operator==(const BasicSystemParams &) const = default;
};

using SystemParams = BasicSystemParams<double>;

template <typename Scalar>
struct Detunings
{
    Scalar delta1{};
    Scalar delta2{};
};

/// Classical drive amplitude of a pump of the given power (photon-amplitude
/// convention, units s^-1).
template <typename Scalar>
Scalar pump_amplitude(Scalar power, Scalar omega_carrier, Scalar kappa, bool include_hbar = true)
{
    if (!(omega_carrier > Scalar(0)))
        throw InvalidParameter("pump_amplitude: carrier frequency must be positive");
    if (!(kappa > Scalar(0)))
        throw InvalidParameter("pump_amplitude: decay rate must be positive");
    if (power < Scalar(0))
        throw InvalidParameter("pump_amplitude: power must be nonnegative");
    Scalar denom = include_hbar ? PhysicalConstants<Scalar>::hbar * omega_carrier : omega_carrier;
    using std::sqrt;
    return sqrt(Scalar(2) * kappa * power / denom);
}

template <typename Scalar>
Scalar optical_drive(const BasicSystemParams<Scalar> &p)
{
    return pump_amplitude(p.power_l, p.omega_l, p.kappa1, p.hbar_in_drive);
}

template <typename Scalar>
Scalar microwave_drive(const BasicSystemParams<Scalar> &p)
{
    return pump_amplitude(p.power_p, p.omega_p, p.kappa2, p.hbar_in_drive);
}

/// Displacement-shifted detunings: delta1 = delta_a + g1 q, delta2 = delta_c - g2 q.
template <typename Scalar>
Detunings<Scalar> effective_detunings(const BasicSystemParams<Scalar> &p, Scalar q_s)
{
    return {p.delta_a + p.g1 * q_s, p.delta_c - p.g2 * q_s};
}

/// Bose occupation 1/(exp(hbar omega / k_B T) - 1); zero at T = 0.
template <typename Scalar>
Scalar thermal_occupation(Scalar omega, Scalar temperature)
{
    if (!(omega > Scalar(0)))
        throw InvalidParameter("thermal_occupation: frequency must be positive");
    if (temperature < Scalar(0))
        throw InvalidParameter("thermal_occupation: temperature must be nonnegative");
    if (temperature == Scalar(0))
        return Scalar(0);
    using std::expm1;
    using C = PhysicalConstants<Scalar>;
    return Scalar(1) / expm1(C::hbar * omega / (C::k_B * temperature));
}

/// Bare detunings (delta_a, delta_c) that put the effective detunings at the
/// requested values. At fixed effective detunings the steady displacement is
/// explicit, so no root finding is involved. The fixed point produced this way
/// need not lie on the branch solve_steady_state() tracks from zero power.
template <typename Scalar>
Detunings<Scalar> bare_detunings_for(const BasicSystemParams<Scalar> &p, Scalar delta1, Scalar delta2)
{
    using C = PhysicalConstants<Scalar>;
    const Scalar el = optical_drive(p);
    const Scalar ep = microwave_drive(p);
    const Scalar k1 = Scalar(2) * p.kappa1;
    const Scalar k2 = Scalar(2) * p.kappa2;
    const Scalar na = el * el / (k1 * k1 + delta1 * delta1);
    const Scalar nc = ep * ep / (k2 * k2 + delta2 * delta2);
    const Scalar q = C::hbar * (p.g2 * nc - p.g1 * na) / (p.mass * p.omega_m * p.omega_m);
    return {delta1 - p.g1 * q, delta2 + p.g2 * q};
}

/// Copy of `p` with bare detunings replaced so that the effective ones equal
/// (delta1, delta2).
template <typename Scalar>
BasicSystemParams<Scalar> with_effective_detunings(BasicSystemParams<Scalar> p, Scalar delta1, Scalar delta2)
{
    const auto bare = bare_detunings_for(p, delta1, delta2);
    p.delta_a = bare.delta1;
    p.delta_c = bare.delta2;
    return p;
}

template <typename Scalar>
void BasicSystemParams<Scalar>::validate() const
{
    auto positive = [](Scalar v, const char *name) {
        if (!(v > Scalar(0)) || !std::isfinite(static_cast<double>(v)))
            throw InvalidParameter(std::string(name) + " must be positive and finite");
    };
    auto nonneg = [](Scalar v, const char *name) {
        if (!(v >= Scalar(0)) || !std::isfinite(static_cast<double>(v)))
            throw InvalidParameter(std::string(name) + " must be nonnegative and finite");
    };
    auto finite = [](Scalar v, const char *name) {
        if (!std::isfinite(static_cast<double>(v)))
            throw InvalidParameter(std::string(name) + " must be finite");
    };
    positive(omega_m, "omega_m");
    positive(mass, "mass");
    positive(gamma_m, "gamma_m");
    positive(kappa1, "kappa1");
    positive(kappa2, "kappa2");
    positive(omega_l, "omega_l");
    positive(omega_p, "omega_p");
    nonneg(g1, "g1");
    nonneg(g2, "g2");
    nonneg(power_l, "power_l");
    nonneg(power_p, "power_p");
    nonneg(temperature, "temperature");
    finite(delta_a, "delta_a");
    finite(delta_c, "delta_c");
}

/// The bundled parameter set (configs/fig2.cfg). g1 and g2 are calibration
/// results, not measured values; see calibrate_couplings().
SystemParams default_params();

} // namespace omrouter
