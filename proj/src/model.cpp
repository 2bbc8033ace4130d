#include "omrouter/model.hpp"

namespace omrouter {

SystemParams default_params()
{
    constexpr double tau = two_pi<double>;
    SystemParams p;
    p.omega_m = tau * 10.56e6;
    p.mass = 48e-12;
    p.gamma_m = tau * 32.0;
    p.kappa1 = tau * 100e3;
    p.kappa2 = tau * 1e3;
    // Calibrated with calibrate_couplings() against the default targets.
    p.g1 = 4.1e19;
    p.g2 = 4.6e19;
    p.delta_a = p.omega_m;
    p.delta_c = p.omega_m;
    p.omega_l = tau * 195e12;
    p.omega_p = tau * 7.1e9;
    p.power_l = 2 * 65e-6;
    p.power_p = 6 * 50e-9;
    p.temperature = 20e-3;
    return p;
}

} // namespace omrouter
