#include <gtest/gtest.h>

#include "omrouter/response.hpp"
#include "support.hpp"

using namespace omrouter;
using cd = std::complex<double>;

namespace {

SystemParams bare_cavity()
{
    auto p = default_params();
    p.g1 = p.g2 = 0;
    return p;
}

double rel(cd x, cd y) { return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300}); }

} // namespace

TEST(Response, BareCavityLorentzian)
{
    const auto p = bare_cavity();
    const auto s = solve_steady_state(p);
    const double root = std::sqrt(2 * p.kappa1);
    for (double ratio = 0.5; ratio <= 1.5; ratio += 0.01) {
        const double w = ratio * p.omega_m;
        const auto rc = closed_form_coefficients(p, s, w);
        const cd expected = 2 * p.kappa1 / cd(2 * p.kappa1, s.delta1 - w);
        EXPECT_LT(rel(root * rc.e1, expected), 1e-12);
        EXPECT_EQ(rc.f1, cd(0));
        EXPECT_EQ(rc.e2, cd(0));
        EXPECT_EQ(rc.f2, cd(0));
        EXPECT_EQ(rc.v, cd(0));
        EXPECT_NEAR(reflection_from(p, rc) + transmission_from(p, rc), 1.0, 1e-12);

        const auto solved = linear_solve_coefficients(p, s, w);
        EXPECT_LT(rel(solved.e1, rc.e1), 1e-12);
        EXPECT_LT(std::abs(solved.f1) + std::abs(solved.e2) + std::abs(solved.f2) + std::abs(solved.v), 1e-12);
    }
}

TEST(Response, BareCavityResonanceAndFarDetuning)
{
    const auto p = bare_cavity();
    const auto s = solve_steady_state(p);
    EXPECT_NEAR(reflection(p, s, s.delta1), 0.0, 1e-15);
    EXPECT_NEAR(transmission(p, s, s.delta1), 1.0, 1e-15);
    EXPECT_NEAR(reflection(p, s, s.delta1 + 1e6 * p.kappa1), 1.0, 1e-5);
}

TEST(Response, IntermediatesReproduceInputs)
{
    const auto p = testing_support::pump_on();
    const auto s = solve_steady_state(p);
    const double w = 1.01 * p.omega_m;
    const auto rc = closed_form_coefficients(p, s, w);
    EXPECT_EQ(rc.a1, cd(s.delta1 + w, 2 * p.kappa1));
    EXPECT_EQ(rc.b1, cd(s.delta1 - w, -2 * p.kappa1));
    EXPECT_EQ(rc.a2, cd(s.delta2 + w, 2 * p.kappa2));
    EXPECT_EQ(rc.b2, cd(s.delta2 - w, -2 * p.kappa2));
    EXPECT_EQ(rc.n_mech, cd(w * w - p.omega_m * p.omega_m, w * p.gamma_m));
}

TEST(Response, OracleAgreementAtOperatingPoints)
{
    for (const auto &p : {testing_support::pump_off(), testing_support::pump_on(), testing_support::pinned(1.5e-6)}) {
        const auto s = solve_steady_state(p);
        for (double ratio = 0.5; ratio <= 1.5; ratio += 0.001) {
            const double w = ratio * p.omega_m;
            const auto closed = closed_form_coefficients(p, s, w);
            const auto solved = linear_solve_coefficients(p, s, w);
            ASSERT_LE(coefficient_deviation(p, closed, solved), 1e-9) << "omega/omega_m = " << ratio;
            EXPECT_LT(rel(closed.d_det, solved.d_det), 1e-9);
        }
    }
}

TEST(Response, OracleAgreementOnRandomToySystems)
{
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        const auto p = testing_support::toy(rng);
        // Toy forces are hbar-small, so give the state O(1) amplitudes directly.
        SteadyState s;
        s.a_s = cd(std::uniform_real_distribution<double>(-1, 1)(rng), std::uniform_real_distribution<double>(-1, 1)(rng)) * 1e17;
        s.c_s = cd(std::uniform_real_distribution<double>(-1, 1)(rng), std::uniform_real_distribution<double>(-1, 1)(rng)) * 1e17;
        s.delta1 = p.delta_a;
        s.delta2 = p.delta_c;
        const double w = std::uniform_real_distribution<double>(0.3, 2.0)(rng);
        const auto closed = closed_form_coefficients(p, s, w);
        const auto solved = linear_solve_coefficients(p, s, w);
        EXPECT_LE(coefficient_deviation(p, closed, solved), 1e-9) << "set " << i;
    }
}

TEST(Response, UnconjugatedVariantsDisagreeWithOracle)
{
    const auto p = testing_support::pump_on();
    const auto s = solve_steady_state(p);
    ASSERT_GT(std::abs(std::arg(s.a_s)), 0.1);
    const double w = 1.02 * p.omega_m;
    const auto closed = closed_form_coefficients(p, s, w);
    const auto solved = linear_solve_coefficients(p, s, w);

    // |a_s|^2 in place of a_s^2, and a_s c_s in place of a_s conj(c_s).
    const cd f1_modulus = closed.f1 * std::norm(s.a_s) / (s.a_s * s.a_s);
    const cd e2_unconjugated = closed.e2 * s.c_s / std::conj(s.c_s);
    EXPECT_LT(rel(closed.f1, solved.f1), 1e-9);
    EXPECT_LT(rel(closed.e2, solved.e2), 1e-9);
    EXPECT_GT(rel(f1_modulus, solved.f1), 1e-3);
    EXPECT_GT(rel(e2_unconjugated, solved.e2), 1e-3);
}

TEST(Response, ConjugateMirrorOfFullResponse)
{
    std::mt19937_64 rng(23);
    for (int i = 0; i < 20; ++i) {
        const auto p = testing_support::toy(rng);
        SteadyState s;
        s.a_s = cd(0.3, -0.7) * 1e17;
        s.c_s = cd(-0.4, 0.2) * 1e17;
        s.delta1 = p.delta_a;
        s.delta2 = p.delta_c;
        const double w = std::uniform_real_distribution<double>(0.3, 2.0)(rng);
        const auto X = linear_response_matrix(p, s, w);
        const auto Y = linear_response_matrix(p, s, -w);
        // Partner rows and columns swap under w -> -w with complex conjugation.
        const int row_map[6] = {1, 0, 3, 2, 4, 5};
        const int col_map[5] = {1, 0, 3, 2, 4};
        for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 5; ++c)
                EXPECT_LT(std::abs(X(r, c) - std::conj(Y(row_map[r], col_map[c]))),
                          1e-12 * X.cwiseAbs().maxCoeff())
                    << r << "," << c;
    }
}

TEST(Response, VanishingStructure)
{
    auto p = testing_support::pump_on();
    auto s = solve_steady_state(p);
    const double w = 0.97 * p.omega_m;

    auto q = p;
    q.g1 = 0;
    auto rc = closed_form_coefficients(q, s, w);
    EXPECT_EQ(rc.f1, cd(0));
    EXPECT_EQ(rc.e2, cd(0));
    EXPECT_EQ(rc.f2, cd(0));
    EXPECT_EQ(rc.v, cd(0));

    q = p;
    q.g2 = 0;
    rc = closed_form_coefficients(q, s, w);
    EXPECT_EQ(rc.e2, cd(0));
    EXPECT_EQ(rc.f2, cd(0));

    auto t = s;
    t.c_s = 0;
    rc = closed_form_coefficients(p, t, w);
    EXPECT_EQ(rc.e2, cd(0));
    EXPECT_EQ(rc.f2, cd(0));

    t = s;
    t.a_s = 0;
    rc = closed_form_coefficients(p, t, w);
    EXPECT_EQ(rc.f1, cd(0));
    EXPECT_EQ(rc.e2, cd(0));
    EXPECT_EQ(rc.f2, cd(0));
    EXPECT_EQ(rc.v, cd(0));
    EXPECT_EQ(vacuum_noise_from(p, rc), 0.0);
}

TEST(Response, SpectraNonnegativeOnRandomDevices)
{
    std::mt19937_64 rng(31);
    for (int i = 0; i < 30; ++i) {
        const auto p = testing_support::random_device(rng);
        const auto s = solve_steady_state(p);
        for (double ratio = 0.6; ratio <= 1.4; ratio += 0.05) {
            const auto pt = spectrum_point(p, s, ratio * p.omega_m);
            EXPECT_GE(pt.r_refl, 0.0);
            EXPECT_GE(pt.t_trans, 0.0);
            EXPECT_GE(pt.s_thermal, 0.0);
            EXPECT_GE(pt.s_vacuum, 0.0);
        }
    }
}

TEST(Response, ThermalNoiseVanishesWithoutQuantaOrCoupling)
{
    auto p = testing_support::pump_on();
    p.temperature = 0;
    auto s = solve_steady_state(p);
    for (double ratio : {0.8, 0.96, 1.0, 1.04, 1.2})
        EXPECT_EQ(thermal_noise_spectrum(p, s, ratio * p.omega_m), 0.0);

    p = testing_support::pump_on();
    p.g1 = 0;
    s = solve_steady_state(p);
    for (double ratio : {0.8, 0.96, 1.0, 1.04, 1.2}) {
        EXPECT_EQ(thermal_noise_spectrum(p, s, ratio * p.omega_m), 0.0);
        EXPECT_EQ(vacuum_noise_spectrum(p, s, ratio * p.omega_m), 0.0);
    }
}

TEST(Response, ThermalNoiseScalesWithBracket)
{
    const auto p = testing_support::pump_on();
    const auto s = solve_steady_state(p);
    const double w = 1.03 * p.omega_m;
    const auto rc = closed_form_coefficients(p, s, w);
    const double bracket = thermal_bracket(w, p.temperature);
    const double unit = 2 * p.kappa1 * std::norm(rc.v) * Constants::hbar * p.gamma_m * p.mass;
    EXPECT_NEAR(thermal_noise_from(p, rc), unit * bracket, 1e-14 * unit * bracket);
    EXPECT_NEAR(bracket, 2 * w * thermal_occupation(w, p.temperature), 1e-14 * bracket);
    // Negative frequencies carry the extra vacuum quantum.
    EXPECT_NEAR(thermal_bracket(-w, p.temperature), bracket + 2 * w, 1e-12 * bracket);
    EXPECT_THROW(thermal_bracket(0.0, p.temperature), InvalidParameter);
}

TEST(Response, ThermalPeakStableInExtendedPrecision)
{
    const auto p = testing_support::pump_on();
    const auto s = solve_steady_state(p);
    const Eigen::ArrayXd grid = frequency_grid(0.8 * p.omega_m, 1.2 * p.omega_m, 4001);
    const auto scan = scan_spectrum(p, s, {grid.data(), static_cast<std::size_t>(grid.size())});
    ASSERT_TRUE(scan.ok());
    const auto peak = std::max_element(scan.points.begin(), scan.points.end(),
                                       [](const auto &a, const auto &b) { return a.s_thermal < b.s_thermal; });
    const auto pl = p.cast<long double>();
    const auto sl = s.cast<long double>();
    const long double extended = thermal_noise_spectrum(pl, sl, static_cast<long double>(peak->omega));
    EXPECT_GT(peak->s_thermal, 0.0);
    EXPECT_LT(peak->s_thermal, 0.05);
    EXPECT_NEAR(peak->s_thermal, static_cast<double>(extended), 1e-9 * peak->s_thermal);
}

TEST(Scan, EdgeCases)
{
    const auto p = testing_support::pump_on();
    const auto s = solve_steady_state(p);
    EXPECT_TRUE(scan_spectrum(p, s, std::span<const double>{}).points.empty());

    const double w[1] = {1.01 * p.omega_m};
    const auto single = scan_spectrum(p, s, w);
    const auto direct = spectrum_point(p, s, w[0]);
    ASSERT_EQ(single.points.size(), 1u);
    EXPECT_EQ(single.points[0].r_refl, direct.r_refl);
    EXPECT_EQ(single.points[0].t_trans, direct.t_trans);
    EXPECT_EQ(single.points[0].s_thermal, direct.s_thermal);
    EXPECT_EQ(single.points[0].s_vacuum, direct.s_vacuum);

    const double bad[3] = {1.0, 2.0, 2.0};
    EXPECT_THROW(scan_spectrum(p, s, bad), InvalidParameter);
}

TEST(Scan, NodeFailuresAreCollected)
{
    const auto p = testing_support::pump_on();
    const auto s = solve_steady_state(p);
    const double grid[3] = {-1e6, 0.0, 1e6};
    const auto scan = scan_spectrum(p, s, grid);
    ASSERT_EQ(scan.errors.size(), 1u);
    EXPECT_EQ(scan.errors[0].index, 1u);
    EXPECT_TRUE(std::isnan(scan.points[1].r_refl));
    EXPECT_FALSE(std::isnan(scan.points[0].r_refl));
    EXPECT_FALSE(std::isnan(scan.points[2].r_refl));
}

TEST(Scan, FiniteAcrossOperatingWindow)
{
    const auto p = testing_support::pump_on();
    const Eigen::ArrayXd grid = frequency_grid(0.9 * p.omega_m, 1.1 * p.omega_m, 2001);
    const auto scan = scan_spectrum(p, {grid.data(), static_cast<std::size_t>(grid.size())});
    ASSERT_TRUE(scan.ok());
    for (std::size_t k = 0; k < scan.points.size(); ++k) {
        const auto &pt = scan.points[k];
        EXPECT_TRUE(std::isfinite(pt.r_refl) && std::isfinite(pt.s_thermal) && std::isfinite(pt.s_vacuum));
        if (k)
            EXPECT_GT(pt.omega, scan.points[k - 1].omega);
    }
}
