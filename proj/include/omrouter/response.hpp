#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "omrouter/model.hpp"
#include "omrouter/steady.hpp"

namespace omrouter {

/// Linear response of the optical fluctuation at one Fourier frequency.
///
/// e1/f1 multiply a_in(w)/a_in^+(-w) (and b_in alike), e2/f2 the microwave
/// inputs c_in/d_in, v the thermal force. The remaining members are the
/// intermediates A1, B1, A2, B2, N and the determinant d(w).
template <typename Scalar>
struct ResponseCoefficients
{
    using Complex = std::complex<Scalar>;
    Scalar omega{};
    Complex e1, f1, e2, f2, v;
    Complex a1, b1, a2, b2, n_mech, d_det;
};

/// (w, R, T, S_thermal, S_vacuum); w is measured from the optical pump.
struct SpectrumPoint
{
    double omega = 0;
    double r_refl = 0;
    double t_trans = 0;
    double s_thermal = 0;
    double s_vacuum = 0;
};

enum class EvaluationPath
{
    ClosedForm,
    LinearSolve
};

namespace detail {

template <typename Scalar>
void fill_intermediates(ResponseCoefficients<Scalar> &rc, const BasicSystemParams<Scalar> &p,
                        const BasicSteadyState<Scalar> &s, Scalar w)
{
    using Complex = std::complex<Scalar>;
    const Scalar two = Scalar(2);
    rc.omega = w;
    rc.a1 = Complex(s.delta1 + w, two * p.kappa1);
    rc.b1 = Complex(s.delta1 - w, -two * p.kappa1);
    rc.a2 = Complex(s.delta2 + w, two * p.kappa2);
    rc.b2 = Complex(s.delta2 - w, -two * p.kappa2);
    rc.n_mech = Complex(w * w - p.omega_m * p.omega_m, w * p.gamma_m);
}

} // namespace detail

/// Closed-form coefficients from eliminating the mechanics and the cavity
/// conjugate partners analytically.
template <typename Scalar>
ResponseCoefficients<Scalar> closed_form_coefficients(const BasicSystemParams<Scalar> &p,
                                                      const BasicSteadyState<Scalar> &s, Scalar omega)
{
    using Complex = std::complex<Scalar>;
    using std::sqrt;
    const Scalar hbar = PhysicalConstants<Scalar>::hbar;
    const Complex i(Scalar(0), Scalar(1));
    const Scalar two = Scalar(2);

    ResponseCoefficients<Scalar> rc;
    detail::fill_intermediates(rc, p, s, omega);
    const Complex &A1 = rc.a1, &B1 = rc.b1, &A2 = rc.a2, &B2 = rc.b2, &N = rc.n_mech;

    const Scalar na = std::norm(s.a_s);
    const Scalar nc = std::norm(s.c_s);
    const Scalar opt = hbar * na * p.g1 * p.g1;     // hbar |a_s|^2 g1^2
    const Scalar mw = hbar * nc * p.g2 * p.g2;      // hbar |c_s|^2 g2^2
    const Complex mech = p.mass * N;

    rc.d_det = two * opt * s.delta1 * A2 * B2 + two * mw * s.delta2 * A1 * B1 + mech * A1 * B1 * A2 * B2;
    if (!(std::abs(rc.d_det) >= Scalar(1e-300)))
        throw SingularPoint("closed_form_coefficients: d(omega) vanishes at omega = " +
                            std::to_string(static_cast<double>(omega)));

    const Scalar root1 = sqrt(two * p.kappa1);
    const Scalar root2 = sqrt(two * p.kappa2);
    const Scalar g12 = p.g1 * p.g2;
    const Complex &d = rc.d_det;

    rc.e1 = -i * root1 * (opt * A2 * B2 + two * mw * s.delta2 * A1 + mech * A1 * A2 * B2) / d;
    rc.f1 = -i * hbar * root1 * (s.a_s * s.a_s) * (p.g1 * p.g1) * A2 * B2 / d;
    rc.e2 = -i * hbar * root2 * (s.a_s * std::conj(s.c_s)) * g12 * A1 * A2 / d;
    rc.f2 = i * hbar * root2 * (s.a_s * s.c_s) * g12 * A1 * B2 / d;
    rc.v = s.a_s * p.g1 * A1 * A2 * B2 / d;
    return rc;
}

/// Response of the whole fluctuation vector (da(w), da^+(-w), dc(w), dc^+(-w),
/// dq(w), dp(w)) to unit inputs (a_in, a_in^+, c_in, c_in^+, xi), in SI units,
/// obtained by solving the linearized Langevin system directly.
///
/// The system is assembled in oscillator units (frequencies over w_m,
/// displacement over sqrt(hbar/(m w_m)), momentum over hbar/that) and
/// mapped back. `determinant` receives d(w) recovered from det of the scaled
/// matrix and `rcond` its reciprocal condition estimate.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 6, 5> linear_response_matrix(const BasicSystemParams<Scalar> &p,
                                                                 const BasicSteadyState<Scalar> &s, Scalar omega,
                                                                 std::complex<Scalar> *determinant = nullptr,
                                                                 Scalar *rcond = nullptr)
{
    using Complex = std::complex<Scalar>;
    using Matrix6 = Eigen::Matrix<Complex, 6, 6>;
    using std::sqrt;
    const Scalar hbar = PhysicalConstants<Scalar>::hbar;
    const Complex i(Scalar(0), Scalar(1));
    const Scalar one = Scalar(1), two = Scalar(2);

    const Scalar wm = p.omega_m;
    const Scalar x_scale = sqrt(hbar / (p.mass * wm));
    const Scalar p_scale = hbar / x_scale;
    const Scalar w = omega / wm;
    const Scalar k1 = p.kappa1 / wm, k2 = p.kappa2 / wm;
    const Scalar d1 = s.delta1 / wm, d2 = s.delta2 / wm;
    const Scalar G1 = p.g1 * x_scale / wm, G2 = p.g2 * x_scale / wm;
    const Scalar gamma = p.gamma_m / wm;
    const Complex a = s.a_s, c = s.c_s;

    Matrix6 M = Matrix6::Zero();
    M(0, 0) = Complex(two * k1, d1 - w);
    M(0, 4) = i * G1 * a;
    M(1, 1) = Complex(two * k1, -(d1 + w));
    M(1, 4) = -i * G1 * std::conj(a);
    M(2, 2) = Complex(two * k2, d2 - w);
    M(2, 4) = -i * G2 * c;
    M(3, 3) = Complex(two * k2, -(d2 + w));
    M(3, 4) = i * G2 * std::conj(c);
    M(4, 4) = Complex(Scalar(0), -w);
    M(4, 5) = Complex(-one);
    M(5, 0) = G1 * std::conj(a);
    M(5, 1) = G1 * a;
    M(5, 2) = -G2 * std::conj(c);
    M(5, 3) = -G2 * c;
    M(5, 4) = Complex(one);
    M(5, 5) = Complex(gamma, -w);

    Eigen::Matrix<Complex, 6, 5> rhs = Eigen::Matrix<Complex, 6, 5>::Zero();
    const Scalar in1 = sqrt(two * p.kappa1) / wm;
    const Scalar in2 = sqrt(two * p.kappa2) / wm;
    rhs(0, 0) = in1;
    rhs(1, 1) = in1;
    rhs(2, 2) = in2;
    rhs(3, 3) = in2;
    rhs(5, 4) = one / (wm * p_scale);

    const Eigen::PartialPivLU<Matrix6> lu(M);
    const Scalar rc = lu.rcond();
    if (rcond)
        *rcond = rc;
    if (!(rc > std::numeric_limits<Scalar>::epsilon()))
        throw SingularPoint("linear_response_matrix: singular Langevin system at omega = " +
                                std::to_string(static_cast<double>(omega)) +
                                " (rcond " + std::to_string(static_cast<double>(rc)) + ")",
                            static_cast<double>(rc));
    if (determinant) {
        const Scalar wm2 = wm * wm;
        *determinant = -lu.determinant() * p.mass * wm2 * wm2 * wm2;
    }

    Eigen::Matrix<Complex, 6, 5> x = lu.solve(rhs);
    x.row(4) *= x_scale;
    x.row(5) *= p_scale;
    return x;
}

/// Coefficients read off the optical row of linear_response_matrix(); the
/// independent check on closed_form_coefficients().
template <typename Scalar>
ResponseCoefficients<Scalar> linear_solve_coefficients(const BasicSystemParams<Scalar> &p,
                                                       const BasicSteadyState<Scalar> &s, Scalar omega)
{
    ResponseCoefficients<Scalar> rc;
    detail::fill_intermediates(rc, p, s, omega);
    const auto x = linear_response_matrix(p, s, omega, &rc.d_det);
    rc.e1 = x(0, 0);
    rc.f1 = x(0, 1);
    rc.e2 = x(0, 2);
    rc.f2 = x(0, 3);
    rc.v = x(0, 4);
    return rc;
}

template <typename Scalar>
ResponseCoefficients<Scalar> response_coefficients(const BasicSystemParams<Scalar> &p,
                                                   const BasicSteadyState<Scalar> &s, Scalar omega,
                                                   EvaluationPath path = EvaluationPath::ClosedForm)
{
    return path == EvaluationPath::ClosedForm ? closed_form_coefficients(p, s, omega)
                                              : linear_solve_coefficients(p, s, omega);
}

// Spectra built from a coefficient set. sqrt(2 kappa1) e1 is the probe's
// transmitted amplitude.

template <typename Scalar>
Scalar reflection_from(const BasicSystemParams<Scalar> &p, const ResponseCoefficients<Scalar> &rc)
{
    using std::sqrt;
    return std::norm(sqrt(Scalar(2) * p.kappa1) * rc.e1 - Scalar(1));
}

template <typename Scalar>
Scalar transmission_from(const BasicSystemParams<Scalar> &p, const ResponseCoefficients<Scalar> &rc)
{
    using std::sqrt;
    return std::norm(sqrt(Scalar(2) * p.kappa1) * rc.e1);
}

template <typename Scalar>
Scalar vacuum_noise_from(const BasicSystemParams<Scalar> &p, const ResponseCoefficients<Scalar> &rc)
{
    return Scalar(4) * p.kappa1 * std::norm(rc.f1);
}

/// Thermal force correlator bracket -w[1 + coth(-hbar w / 2 k_B T)] in the
/// overflow-free Bose form: 2 w nbar(w) for w > 0, 2|w|(nbar(|w|) + 1) for w < 0.
template <typename Scalar>
Scalar thermal_bracket(Scalar omega, Scalar temperature)
{
    if (omega == Scalar(0))
        throw InvalidParameter("thermal noise spectrum is singular at omega = 0");
    if (omega > Scalar(0))
        return Scalar(2) * omega * thermal_occupation(omega, temperature);
    const Scalar w = -omega;
    return Scalar(2) * w * (thermal_occupation(w, temperature) + Scalar(1));
}

template <typename Scalar>
Scalar thermal_noise_from(const BasicSystemParams<Scalar> &p, const ResponseCoefficients<Scalar> &rc)
{
    const Scalar hbar = PhysicalConstants<Scalar>::hbar;
    return Scalar(2) * p.kappa1 * std::norm(rc.v) * hbar * p.gamma_m * p.mass *
           thermal_bracket(rc.omega, p.temperature);
}

template <typename Scalar>
Scalar reflection(const BasicSystemParams<Scalar> &p, const BasicSteadyState<Scalar> &s, Scalar omega,
                  EvaluationPath path = EvaluationPath::ClosedForm)
{
    return reflection_from(p, response_coefficients(p, s, omega, path));
}

template <typename Scalar>
Scalar transmission(const BasicSystemParams<Scalar> &p, const BasicSteadyState<Scalar> &s, Scalar omega,
                    EvaluationPath path = EvaluationPath::ClosedForm)
{
    return transmission_from(p, response_coefficients(p, s, omega, path));
}

template <typename Scalar>
Scalar thermal_noise_spectrum(const BasicSystemParams<Scalar> &p, const BasicSteadyState<Scalar> &s,
                              Scalar omega, EvaluationPath path = EvaluationPath::ClosedForm)
{
    if (omega == Scalar(0))
        throw InvalidParameter("thermal noise spectrum is singular at omega = 0");
    return thermal_noise_from(p, response_coefficients(p, s, omega, path));
}

template <typename Scalar>
Scalar vacuum_noise_spectrum(const BasicSystemParams<Scalar> &p, const BasicSteadyState<Scalar> &s,
                             Scalar omega, EvaluationPath path = EvaluationPath::ClosedForm)
{
    return vacuum_noise_from(p, response_coefficients(p, s, omega, path));
}

SpectrumPoint spectrum_point(const SystemParams &params, const SteadyState &state, double omega,
                             EvaluationPath path = EvaluationPath::ClosedForm);

struct NodeError
{
    std::size_t index = 0;
    double omega = 0;
    std::string message;
};

struct SpectrumScan
{
    SteadyState state;
    std::vector<SpectrumPoint> points; ///< one per grid node; NaN entries where the node failed
    std::vector<NodeError> errors;

    bool ok() const { return errors.empty(); }
};

/// Evaluates every grid node against one steady state. Node failures are
/// collected rather than thrown. Throws InvalidParameter if the grid is not
/// strictly increasing.
SpectrumScan scan_spectrum(const SystemParams &params, const SteadyState &state, std::span<const double> grid,
                           EvaluationPath path = EvaluationPath::ClosedForm);

/// Solves the steady state once, then scans.
SpectrumScan scan_spectrum(const SystemParams &params, std::span<const double> grid,
                           EvaluationPath path = EvaluationPath::ClosedForm, const SteadyOptions &steady = {});

/// n uniformly spaced angular frequencies over [lo, hi].
Eigen::ArrayXd frequency_grid(double lo, double hi, Eigen::Index n);

/// Dimensionless scattering amplitudes used to compare coefficient sets:
/// sqrt(2 kappa1) times e1, f1, e2, f2 and sqrt(2 kappa1 hbar gamma_m m omega_m) times v.
Eigen::Matrix<std::complex<double>, 5, 1> normalized_coefficients(const SystemParams &params,
                                                                  const ResponseCoefficients<double> &rc);

/// Largest relative deviation between two coefficient sets, measured on
/// normalized_coefficients(): max |x - y| / max(|x|, |y|, atol / rtol). A
/// value <= rtol means every entry agrees to rtol relative or atol absolute.
double coefficient_deviation(const SystemParams &params, const ResponseCoefficients<double> &lhs,
                             const ResponseCoefficients<double> &rhs, double rtol = 1e-9, double atol = 1e-12);

} // namespace omrouter
