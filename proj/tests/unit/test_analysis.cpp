#include <gtest/gtest.h>

#include "omrouter/analysis.hpp"
#include "support.hpp"

using namespace omrouter;
using testing_support::pinned;

namespace {

std::vector<SpectrumPoint> synthetic(const std::vector<double> &x, const std::function<double(double)> &t)
{
    std::vector<SpectrumPoint> pts;
    for (double w : x)
        pts.push_back({w, 1 - t(w), t(w), 0, 0});
    return pts;
}

std::function<SystemParams(const SystemParams &)> pin_detunings()
{
    return [](const SystemParams &p) { return with_effective_detunings(p, p.omega_m, p.omega_m); };
}

double window_step(const SystemParams &p, const AnalysisOptions &o = {})
{
    return 2 * o.window_half_width * p.omega_m / (o.window_nodes - 1);
}

} // namespace

TEST(Extrema, MonotoneColumnHasNone)
{
    std::vector<double> x;
    for (int k = 0; k < 50; ++k)
        x.push_back(k);
    const auto ex = find_extrema(synthetic(x, [](double w) { return w * w; }), SpectrumColumn::Transmission);
    EXPECT_TRUE(ex.minima.empty());
    EXPECT_TRUE(ex.maxima.empty());
}

TEST(Extrema, SyntheticDoubleDip)
{
    const double delta = 1.0, width = 0.05;
    auto lorentz = [&](double w, double c) { return width * width / (width * width + (w - c) * (w - c)); };
    auto t = [&](double w) { return 1 - 0.9 * lorentz(w, -delta) - 0.9 * lorentz(w, delta); };
    std::vector<double> x;
    const double step = delta / 37;
    for (double w = -2.013; w < 2; w += step)
        x.push_back(w);
    const auto ex = find_extrema(synthetic(x, t), SpectrumColumn::Transmission);
    ASSERT_EQ(ex.minima.size(), 2u);
    EXPECT_NEAR(ex.minima[0].omega, -delta, step / 10);
    EXPECT_NEAR(ex.minima[1].omega, delta, step / 10);
    EXPECT_TRUE(ex.minima[0].refined);
    ASSERT_EQ(ex.maxima.size(), 1u);
    EXPECT_NEAR(ex.maxima[0].omega, 0.0, step / 10);
}

TEST(Extrema, RejectsShortOrUnsortedInput)
{
    EXPECT_THROW(find_extrema(synthetic({0, 1}, [](double) { return 0.0; }), SpectrumColumn::Reflection),
                 InvalidParameter);
    EXPECT_THROW(find_extrema(synthetic({0, 2, 1}, [](double) { return 0.0; }), SpectrumColumn::Reflection),
                 InvalidParameter);
}

TEST(Extrema, PumpOnTransmissionHasDipsAroundCentralPeak)
{
    const auto p = testing_support::pump_on();
    const auto s = solve_steady_state(p);
    const AnalysisOptions o;
    const Eigen::ArrayXd grid = frequency_grid(0.8 * p.omega_m, 1.2 * p.omega_m, o.window_nodes);
    const auto scan = scan_spectrum(p, s, {grid.data(), static_cast<std::size_t>(grid.size())});
    const auto ex = find_extrema(scan.points, SpectrumColumn::Transmission);
    const auto split = measure_splitting(p, s, o);
    EXPECT_LT(split.lower, p.omega_m);
    EXPECT_GT(split.upper, p.omega_m);
    const double step = window_step(p, o);
    const bool central_peak = std::any_of(ex.maxima.begin(), ex.maxima.end(),
                                          [&](const Extremum &e) { return std::abs(e.omega - p.omega_m) < step; });
    EXPECT_TRUE(central_peak);
    // The features themselves are pulled below omega_m by the optical and
    // microwave springs, a small fraction of the splitting.
    EXPECT_LT((split.lower + split.upper) / 2, p.omega_m);
    EXPECT_NEAR((split.lower + split.upper) / 2, p.omega_m, 0.05 * (split.upper - split.lower) / 2);
    // Ports are placed symmetrically about the transmit port.
    const auto r = routing_report(p, s, o);
    ASSERT_EQ(r.ports.size(), 3u);
    EXPECT_EQ(r.ports[0].omega - r.ports[1].omega, r.ports[2].omega - r.ports[0].omega);
}

TEST(Splitting, OrderedByPumpPower)
{
    const double off = window_splitting(testing_support::pump_off());
    const double low = window_splitting(pinned(300e-9));
    const double high = window_splitting(pinned(1500e-9));
    EXPECT_EQ(off, 0.0);
    EXPECT_GT(low, 0.0);
    EXPECT_GT(high, low);
}

TEST(Splitting, ModesAgree)
{
    for (double power : {300e-9, 1500e-9}) {
        const auto p = pinned(power);
        AnalysisOptions by_r;
        by_r.mode = SplittingMode::ReflectionMaxima;
        const double t_mode = window_splitting(p);
        const double r_mode = window_splitting(p, by_r);
        // R + T < 1 near the dips, so peak and dip need not coincide exactly.
        EXPECT_NEAR(t_mode, r_mode, 0.02 * t_mode) << power;
    }
}

TEST(Splitting, ContinuousInPower)
{
    const auto p = pinned(300e-9);
    auto nudged = p;
    nudged.power_p *= 1.01;
    EXPECT_LT(std::abs(window_splitting(nudged) - window_splitting(p)), 10 * window_step(p));
}

TEST(Routing, PumpOffSinglePort)
{
    const auto r = routing_report(testing_support::pump_off());
    EXPECT_FALSE(r.pump_on);
    EXPECT_EQ(r.omega0, 0.0);
    ASSERT_EQ(r.ports.size(), 1u);
    EXPECT_EQ(r.ports[0].label, PortLabel::Reflect);
    EXPECT_EQ(r.ports[0].omega, r.center);
    EXPECT_GT(r.ports[0].r_value, 0.99);
    EXPECT_LT(r.ports[0].t_value, 0.01);
    EXPECT_TRUE(r.thresholds_met());
}

TEST(Routing, PumpOnThreePorts)
{
    const auto p = testing_support::pump_on();
    const auto r = routing_report(p);
    EXPECT_TRUE(r.pump_on);
    EXPECT_EQ(r.center, p.omega_m);
    ASSERT_EQ(r.ports.size(), 3u);
    EXPECT_EQ(r.ports[0].label, PortLabel::Transmit);
    EXPECT_EQ(r.ports[1].label, PortLabel::ReflectLower);
    EXPECT_EQ(r.ports[2].label, PortLabel::ReflectUpper);
    EXPECT_EQ(r.ports[1].omega, r.center - r.omega0);
    EXPECT_EQ(r.ports[2].omega, r.center + r.omega0);
    EXPECT_GT(r.ports[0].t_value, 0.95);
    EXPECT_LT(r.ports[0].r_value, 0.05);
    EXPECT_GT(r.ports[1].r_value, 0.99);
    EXPECT_GT(r.ports[2].r_value, 0.99);
    EXPECT_TRUE(r.thresholds_met());
}

TEST(Routing, DecoupledMechanicsIsDegenerate)
{
    auto p = testing_support::pump_on();
    p.g1 = 0;
    const auto r = routing_report(p);
    EXPECT_TRUE(r.degenerate);
    EXPECT_FALSE(r.thresholds_met());
    ASSERT_EQ(r.ports.size(), 1u);
    EXPECT_EQ(r.ports[0].label, PortLabel::Transmit);
}

TEST(Routing, Deterministic)
{
    const auto a = routing_report(testing_support::pump_on());
    const auto b = routing_report(testing_support::pump_on());
    EXPECT_EQ(a.omega0, b.omega0);
    for (std::size_t k = 0; k < a.ports.size(); ++k) {
        EXPECT_EQ(a.ports[k].r_value, b.ports[k].r_value);
        EXPECT_EQ(a.ports[k].t_value, b.ports[k].t_value);
    }
}

TEST(Sweep, ZeroThenIncreasingSplitting)
{
    const auto p = testing_support::pump_on();
    const std::vector<double> powers{0.0, 300e-9, 1500e-9};
    const auto rows = power_sweep(p, powers);
    ASSERT_EQ(rows.size(), 3u);
    for (const auto &row : rows)
        ASSERT_TRUE(row.ok) << row.error;
    EXPECT_EQ(rows[0].report.omega0, 0.0);
    EXPECT_GT(rows[1].report.omega0, 0.0);
    EXPECT_GT(rows[2].report.omega0, rows[1].report.omega0);
}

TEST(Sweep, SinglePowerMatchesReport)
{
    const auto p = testing_support::pump_on();
    const double power[1] = {p.power_p};
    const auto rows = power_sweep(p, power);
    const auto direct = routing_report(p);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].report.omega0, direct.omega0);
    EXPECT_EQ(rows[0].report.ports.size(), direct.ports.size());
}

TEST(Sweep, DenseSweepIsMonotone)
{
    const auto p = testing_support::pump_on();
    std::vector<double> powers;
    for (int k = 0; k < 50; ++k)
        powers.push_back(1500e-9 * k / 49.0);
    const auto rows = power_sweep(p, powers);
    double prev = 0;
    for (const auto &row : rows) {
        ASSERT_TRUE(row.ok) << row.error;
        EXPECT_GE(row.report.omega0, prev) << row.power_p;
        prev = row.report.omega0;
    }
}

TEST(Sweep, RejectsBadPowerLists)
{
    const auto p = testing_support::pump_on();
    const std::vector<double> negative{-1.0};
    const std::vector<double> decreasing{2e-7, 1e-7};
    EXPECT_THROW(power_sweep(p, negative), InvalidParameter);
    EXPECT_THROW(power_sweep(p, decreasing), InvalidParameter);
}

TEST(Calibration, AlreadyCalibratedPairReturnedUnchanged)
{
    const auto p = testing_support::pump_on();
    const auto r = calibrate_couplings(p, {}, {}, pin_detunings());
    EXPECT_EQ(r.g1, p.g1);
    EXPECT_EQ(r.g2, p.g2);
    EXPECT_TRUE(r.pump_on.thresholds_met());
    EXPECT_TRUE(r.pump_off.thresholds_met());
}

TEST(Calibration, UnreachableBracketFails)
{
    auto p = testing_support::pump_on();
    p.g1 = 1e10;
    CalibrationTargets t;
    t.g1_lo = 0;
    t.g1_hi = 1e12;
    EXPECT_THROW(calibrate_couplings(p, t, {}, pin_detunings()), CalibrationError);
}

TEST(Calibration, BundledCouplingsSitJustAboveCalibratedMinimum)
{
    auto p = default_params();
    p.g1 = 1e18;
    p.g2 = 1e18;
    const auto r = calibrate_couplings(p, {}, {}, pin_detunings());
    const auto bundled = default_params();
    EXPECT_LE(r.g1, bundled.g1);
    EXPECT_LE(r.g2, bundled.g2);
    EXPECT_GT(r.g1, 0.97 * bundled.g1);
    EXPECT_GT(r.g2, 0.97 * bundled.g2);
    EXPECT_TRUE(r.pump_on.thresholds_met());
}
