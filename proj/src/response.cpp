#include "omrouter/response.hpp"

#include <algorithm>
#include <limits>

namespace omrouter {

SpectrumPoint spectrum_point(const SystemParams &params, const SteadyState &state, double omega,
                             EvaluationPath path)
{
    if (omega == 0)
        throw InvalidParameter("spectrum_point: omega = 0 is singular for the thermal spectrum");
    const auto rc = response_coefficients(params, state, omega, path);
    SpectrumPoint pt;
    pt.omega = omega;
    pt.r_refl = reflection_from(params, rc);
    pt.t_trans = transmission_from(params, rc);
    pt.s_thermal = thermal_noise_from(params, rc);
    pt.s_vacuum = vacuum_noise_from(params, rc);
    return pt;
}

SpectrumScan scan_spectrum(const SystemParams &params, const SteadyState &state, std::span<const double> grid,
                           EvaluationPath path)
{
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1]))
            throw InvalidParameter("scan_spectrum: frequency grid must be strictly increasing");

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    SpectrumScan scan;
    scan.state = state;
    scan.points.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        try {
            scan.points.push_back(spectrum_point(params, state, grid[k], path));
        } catch (const Error &e) {
            scan.points.push_back({grid[k], nan, nan, nan, nan});
            scan.errors.push_back({k, grid[k], e.what()});
        }
    }
    return scan;
}

SpectrumScan scan_spectrum(const SystemParams &params, std::span<const double> grid, EvaluationPath path,
                           const SteadyOptions &steady)
{
    return scan_spectrum(params, solve_steady_state(params, steady), grid, path);
}

Eigen::ArrayXd frequency_grid(double lo, double hi, Eigen::Index n)
{
    if (n < 0)
        throw InvalidParameter("frequency_grid: negative node count");
    if (n == 1)
        return Eigen::ArrayXd::Constant(1, lo);
    return Eigen::ArrayXd::LinSpaced(n, lo, hi);
}

Eigen::Matrix<std::complex<double>, 5, 1> normalized_coefficients(const SystemParams &params,
                                                                  const ResponseCoefficients<double> &rc)
{
    const double root1 = std::sqrt(2 * params.kappa1);
    const double force = std::sqrt(2 * params.kappa1 * Constants::hbar * params.gamma_m * params.mass *
                                   params.omega_m);
    Eigen::Matrix<std::complex<double>, 5, 1> out;
    out << root1 * rc.e1, root1 * rc.f1, root1 * rc.e2, root1 * rc.f2, force * rc.v;
    return out;
}

double coefficient_deviation(const SystemParams &params, const ResponseCoefficients<double> &lhs,
                             const ResponseCoefficients<double> &rhs, double rtol, double atol)
{
    const auto x = normalized_coefficients(params, lhs);
    const auto y = normalized_coefficients(params, rhs);
    double worst = 0;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double scale = std::max({std::abs(x(k)), std::abs(y(k)), atol / rtol});
        worst = std::max(worst, std::abs(x(k) - y(k)) / scale);
    }
    return worst;
}

} // namespace omrouter
