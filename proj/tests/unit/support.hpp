#pragma once

#include <random>

#include "omrouter/analysis.hpp"

namespace testing_support {

// Bundled parameters at the given microwave power, with both effective
// detunings pinned to omega_m the way the command line resolves them.
inline omrouter::SystemParams pinned(double power_p)
{
    auto p = omrouter::default_params();
    p.power_p = power_p;
    return omrouter::with_effective_detunings(p, p.omega_m, p.omega_m);
}

inline omrouter::SystemParams pump_on() { return pinned(6 * 50e-9); }
inline omrouter::SystemParams pump_off() { return pinned(0.0); }

// Dimensionless toy system: hbar-free drive, O(1) rates relative to omega_m.
inline omrouter::SystemParams toy(std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    omrouter::SystemParams p;
    p.omega_m = 1.0;
    p.mass = 1.0;
    p.gamma_m = 0.01 + 0.05 * u(rng);
    p.kappa1 = 0.05 + 0.1 * u(rng);
    p.kappa2 = 0.05 + 0.1 * u(rng);
    p.g1 = 0.1 * u(rng);
    p.g2 = 0.1 * u(rng);
    p.delta_a = 0.5 + u(rng);
    p.delta_c = 0.5 + u(rng);
    p.omega_l = 1.0;
    p.omega_p = 1.0;
    p.power_l = u(rng);
    p.power_p = u(rng);
    p.temperature = 0.0;
    p.hbar_in_drive = false;
    return p;
}

} // namespace testing_support

namespace testing_support {

// Device-scale parameters scattered around the bundled set, wide enough to
// reach the multistable regime.
inline omrouter::SystemParams random_device(std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(rng)); };
    auto p = omrouter::default_params();
    p.kappa1 *= log_uniform(0.5, 2.0);
    p.kappa2 *= log_uniform(0.5, 2.0);
    p.g1 = log_uniform(1e18, 2e20);
    p.g2 = log_uniform(1e18, 2e20);
    p.delta_a = p.omega_m * (4 * u(rng) - 2);
    p.delta_c = p.omega_m * (4 * u(rng) - 2);
    p.power_l = log_uniform(1e-7, 5e-4);
    p.power_p = u(rng) < 0.2 ? 0.0 : log_uniform(1e-9, 3e-6);
    return p;
}

} // namespace testing_support
