#include "omrouter/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace omrouter {

namespace {

double column_value(const SpectrumPoint &pt, SpectrumColumn column)
{
    return column == SpectrumColumn::Reflection ? pt.r_refl : pt.t_trans;
}

// Vertex of the parabola through (x0,y0), (x1,y1), (x2,y2), expressed around x1.
Extremum refine(double x0, double y0, double x1, double y1, double x2, double y2, bool minimum)
{
    const double h0 = x0 - x1;
    const double h2 = x2 - x1;
    const double s0 = (y0 - y1) / h0;
    const double s2 = (y2 - y1) / h2;
    const double a = (s2 - s0) / (h2 - h0);
    const double b = s0 - a * h0;
    if (a == 0 || (minimum ? a < 0 : a > 0) || !std::isfinite(a) || !std::isfinite(b))
        return {x1, y1, false};
    const double t = -b / (2 * a);
    if (t < h0 || t > h2)
        return {x1, y1, false};
    return {x1 + t, y1 - b * b / (4 * a), true};
}

std::optional<Extremum> pick(const std::vector<Extremum> &candidates, bool deepest_is_min,
                             const std::function<bool(double)> &side)
{
    std::optional<Extremum> best;
    for (const auto &e : candidates) {
        if (!side(e.omega))
            continue;
        if (!best || (deepest_is_min ? e.value < best->value : e.value > best->value))
            best = e;
    }
    return best;
}

} // namespace

ExtremaList find_extrema(std::span<const SpectrumPoint> points, SpectrumColumn column)
{
    if (points.size() < 3)
        throw InvalidParameter("find_extrema: need at least 3 points");
    for (std::size_t k = 1; k < points.size(); ++k)
        if (!(points[k].omega > points[k - 1].omega))
            throw InvalidParameter("find_extrema: omega must be strictly increasing");

    ExtremaList out;
    for (std::size_t k = 1; k + 1 < points.size(); ++k) {
        const double y0 = column_value(points[k - 1], column);
        const double y1 = column_value(points[k], column);
        const double y2 = column_value(points[k + 1], column);
        const bool is_min = y1 < y0 && y1 < y2;
        const bool is_max = y1 > y0 && y1 > y2;
        if (!is_min && !is_max)
            continue;
        const Extremum e =
            refine(points[k - 1].omega, y0, points[k].omega, y1, points[k + 1].omega, y2, is_min);
        (is_min ? out.minima : out.maxima).push_back(e);
    }
    return out;
}

Splitting measure_splitting(const SystemParams &params, const SteadyState &state, const AnalysisOptions &options)
{
    if (options.window_nodes < 3 || !(options.window_half_width > 0) || options.window_half_width >= 1)
        throw InvalidParameter("measure_splitting: bad scan window");
    const double wm = params.omega_m;
    const Eigen::ArrayXd grid = frequency_grid(wm * (1 - options.window_half_width),
                                               wm * (1 + options.window_half_width), options.window_nodes);
    const double step = grid(1) - grid(0);
    const SpectrumScan scan = scan_spectrum(params, state, {grid.data(), static_cast<std::size_t>(grid.size())},
                                            options.path);
    if (!scan.ok())
        throw AnalysisError("measure_splitting: spectrum scan failed: " + scan.errors.front().message);

    const bool by_minima = options.mode == SplittingMode::TransmissionMinima;
    const ExtremaList ex =
        find_extrema(scan.points, by_minima ? SpectrumColumn::Transmission : SpectrumColumn::Reflection);
    const auto &candidates = by_minima ? ex.minima : ex.maxima;
    if (candidates.empty())
        throw AnalysisError(by_minima ? "measure_splitting: no transmission dip in the scan window"
                                      : "measure_splitting: no reflection peak in the scan window");

    // A feature within one grid step of omega_m is central and belongs to neither side.
    const auto lower = pick(candidates, by_minima, [&](double w) { return w < wm - step; });
    const auto upper = pick(candidates, by_minima, [&](double w) { return w > wm + step; });
    Splitting out;
    if (lower && upper) {
        out.lower = lower->omega;
        out.upper = upper->omega;
        out.omega0 = (upper->omega - lower->omega) / 2;
    }
    return out;
}

double window_splitting(const SystemParams &params, const AnalysisOptions &options)
{
    return measure_splitting(params, solve_steady_state(params, options.steady), options).omega0;
}

std::string to_string(PortLabel label)
{
    switch (label) {
    case PortLabel::Reflect:
        return "reflect";
    case PortLabel::Transmit:
        return "transmit";
    case PortLabel::ReflectLower:
        return "reflect-lower";
    case PortLabel::ReflectUpper:
        return "reflect-upper";
    }
    return "unknown";
}

bool RoutingReport::thresholds_met() const
{
    if (degenerate || ports.size() != (pump_on ? 3u : 1u))
        return false;
    return std::all_of(ports.begin(), ports.end(), [](const Port &p) { return p.threshold_met; });
}

RoutingReport routing_report(const SystemParams &params, const SteadyState &state, const AnalysisOptions &options)
{
    RoutingReport report;
    report.pump_on = params.power_p > 0;
    report.center = params.omega_m;
    report.state = state;

    auto port = [&](PortLabel label, double omega) {
        const SpectrumPoint pt = spectrum_point(params, state, omega, options.path);
        Port p{label, omega, pt.r_refl, pt.t_trans, false};
        p.threshold_met = label == PortLabel::Transmit ? pt.t_trans > options.transmit_threshold
                                                       : pt.r_refl > options.reflect_threshold;
        return p;
    };

    double omega0 = 0;
    try {
        omega0 = measure_splitting(params, state, options).omega0;
    } catch (const AnalysisError &) {
        report.degenerate = true;
        report.ports.push_back(port(report.pump_on ? PortLabel::Transmit : PortLabel::Reflect, report.center));
        return report;
    }

    if (!report.pump_on || omega0 == 0) {
        report.ports.push_back(port(PortLabel::Reflect, report.center));
        return report;
    }
    report.omega0 = omega0;
    report.ports.push_back(port(PortLabel::Transmit, report.center));
    report.ports.push_back(port(PortLabel::ReflectLower, report.center - omega0));
    report.ports.push_back(port(PortLabel::ReflectUpper, report.center + omega0));
    return report;
}

RoutingReport routing_report(const SystemParams &params, const AnalysisOptions &options)
{
    return routing_report(params, solve_steady_state(params, options.steady), options);
}

std::vector<SweepRow> power_sweep(const SystemParams &params, std::span<const double> powers,
                                  const AnalysisOptions &options)
{
    for (std::size_t k = 0; k < powers.size(); ++k) {
        if (!(powers[k] >= 0))
            throw InvalidParameter("power_sweep: powers must be nonnegative");
        if (k > 0 && powers[k] < powers[k - 1])
            throw InvalidParameter("power_sweep: powers must be increasing");
    }

    std::vector<SweepRow> rows;
    std::optional<double> previous_q;
    for (double power : powers) {
        SweepRow row;
        row.power_p = power;
        SystemParams p = params;
        p.power_p = power;
        try {
            const SteadyState state = previous_q ? solve_steady_state_near(p, *previous_q, options.steady)
                                                 : solve_steady_state(p, options.steady);
            previous_q = state.q_s;
            row.report = routing_report(p, state, options);
            row.ok = true;
        } catch (const Error &e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

class Calibrator
{
public:
    Calibrator(const SystemParams &params, const CalibrationTargets &targets, const AnalysisOptions &options,
               const std::function<SystemParams(const SystemParams &)> &prepare)
        : base_(params), targets_(targets), options_(options), prepare_(prepare)
    {
        if (!(params.power_p > 0))
            throw CalibrationError("calibrate_couplings: the pump-on power must be positive");
        min_split_ = targets.splitting_linewidths * 2 * params.kappa1;
    }

    SystemParams make(double g1, double g2, double power) const
    {
        SystemParams p = base_;
        p.g1 = g1;
        p.g2 = g2;
        p.power_p = power;
        return prepare_ ? prepare_(p) : p;
    }

    std::optional<RoutingReport> report(double g1, double g2, bool pump_on)
    {
        ++evaluations;
        try {
            return routing_report(make(g1, g2, pump_on ? base_.power_p : 0.0), options_);
        } catch (const Error &) {
            return std::nullopt;
        }
    }

    // Pump-off transmission at omega_m; +inf when the evaluation fails.
    double pump_off_transmission(double g1)
    {
        ++evaluations;
        try {
            const SystemParams p = make(g1, base_.g2, 0.0);
            return transmission(p, solve_steady_state(p, options_.steady), p.omega_m, options_.path);
        } catch (const Error &) {
            return std::numeric_limits<double>::infinity();
        }
    }

    bool pump_off_ok(double g1) { return pump_off_transmission(g1) < targets_.pump_off_transmission_max; }

    bool split_ok(const RoutingReport &r) const
    {
        return r.ports.size() == 3 && r.omega0 >= min_split_ && r.ports[0].t_value >= targets_.transmit_min;
    }

    bool reflect_ok(const RoutingReport &r) const
    {
        return r.ports.size() == 3 && r.ports[1].r_value >= targets_.reflect_min &&
               r.ports[2].r_value >= targets_.reflect_min;
    }

    bool all_ok(double g1, double g2)
    {
        if (!pump_off_ok(g1))
            return false;
        const auto r = report(g1, g2, true);
        return r && split_ok(*r) && reflect_ok(*r);
    }

    // Smallest x in [lo, hi] with pred(x), assuming pred is monotone and pred(hi) holds.
    template <typename Pred>
    double bisect_min(double lo, double hi, Pred pred) const
    {
        if (pred(lo))
            return lo;
        for (int it = 0; it < 200; ++it) {
            if (lo > 0 ? hi / lo <= 1 + targets_.relative_precision : hi <= 0)
                break;
            const double mid = lo > 0 ? std::sqrt(lo * hi) : hi / 16;
            if (pred(mid))
                hi = mid;
            else
                lo = mid;
        }
        return hi;
    }

    // Smallest g2 giving the splitting and pump-on transparency at this g1.
    // Searched upward by doubling: far above the target the splitting leaves
    // the scan window, so the predicate only holds on a band of g2.
    std::optional<double> fit_g2(double g1)
    {
        auto ok = [&](double g2) {
            const auto r = report(g1, g2, true);
            return r && split_ok(*r);
        };
        double lo = targets_.g2_lo;
        if (ok(lo))
            return lo;
        for (double hi = 2 * lo; hi <= targets_.g2_hi * 2; lo = hi, hi *= 2) {
            hi = std::min(hi, targets_.g2_hi);
            if (ok(hi))
                return bisect_min(lo, hi, ok);
            if (hi == targets_.g2_hi)
                break;
        }
        return std::nullopt;
    }

    std::string describe(double g1, double g2)
    {
        std::ostringstream os;
        os.precision(6);
        os << "g1 = " << g1 << ", g2 = " << g2 << ": pump-off T(omega_m) = " << pump_off_transmission(g1);
        if (const auto r = report(g1, g2, true)) {
            os << "; pump-on omega0 = " << r->omega0 << " rad/s (target " << min_split_ << ")";
            for (const auto &p : r->ports)
                os << "; " << to_string(p.label) << " R = " << p.r_value << ", T = " << p.t_value;
        } else {
            os << "; pump-on evaluation failed";
        }
        return os.str();
    }

    int evaluations = 0;

private:
    SystemParams base_;
    CalibrationTargets targets_;
    AnalysisOptions options_;
    std::function<SystemParams(const SystemParams &)> prepare_;
    double min_split_ = 0;
};

} // namespace

CalibrationResult calibrate_couplings(const SystemParams &params, const CalibrationTargets &targets,
                                      const AnalysisOptions &options,
                                      const std::function<SystemParams(const SystemParams &)> &prepare)
{
    Calibrator cal(params, targets, options, prepare);
    auto finish = [&](double g1, double g2) {
        CalibrationResult out;
        out.g1 = g1;
        out.g2 = g2;
        out.pump_on = routing_report(cal.make(g1, g2, params.power_p), options);
        out.pump_off = routing_report(cal.make(g1, g2, 0.0), options);
        out.evaluations = cal.evaluations;
        return out;
    };

    if (cal.all_ok(params.g1, params.g2))
        return finish(params.g1, params.g2);

    if (!cal.pump_off_ok(targets.g1_hi))
        throw CalibrationError("calibrate_couplings: pump-off dip unreachable within the g1 bracket; closest: " +
                               cal.describe(targets.g1_hi, targets.g2_hi));
    double g1 = cal.bisect_min(targets.g1_lo, targets.g1_hi, [&](double g) { return cal.pump_off_ok(g); });

    // The reflect ports need deeper dips than the pump-off target alone
    // guarantees; double g1 until they are met, then bisect back down.
    auto passes = [&](double g) -> std::optional<double> {
        const auto g2 = cal.fit_g2(g);
        if (!g2)
            return std::nullopt;
        const auto r = cal.report(g, *g2, true);
        if (r && cal.reflect_ok(*r))
            return g2;
        return std::nullopt;
    };

    double g1_fail = 0;
    std::optional<double> g2 = passes(g1);
    while (!g2) {
        if (!cal.fit_g2(g1))
            throw CalibrationError("calibrate_couplings: splitting or pump-on transparency unreachable within the "
                                   "g2 bracket; closest: " +
                                   cal.describe(g1, targets.g2_hi));
        g1_fail = g1;
        g1 *= 2;
        if (g1 > targets.g1_hi)
            throw CalibrationError("calibrate_couplings: reflect ports unreachable within the g1 bracket; closest: " +
                                   cal.describe(g1_fail, cal.fit_g2(g1_fail).value_or(targets.g2_hi)));
        g2 = passes(g1);
    }
    if (g1_fail > 0) {
        g1 = cal.bisect_min(g1_fail, g1, [&](double g) { return passes(g).has_value(); });
        g2 = passes(g1);
    }
    if (!g2 || !cal.all_ok(g1, *g2))
        throw CalibrationError("calibrate_couplings: final validation failed; " + cal.describe(g1, g2.value_or(0)));
    return finish(g1, *g2);
}

} // namespace omrouter
