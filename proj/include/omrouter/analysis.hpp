#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "omrouter/response.hpp"

namespace omrouter {

enum class SpectrumColumn
{
    Reflection,
    Transmission
};

struct Extremum
{
    double omega = 0;
    double value = 0;
    bool refined = false; ///< parabolic vertex used (false: raw sample kept)
};

struct ExtremaList
{
    std::vector<Extremum> minima; ///< ascending omega
    std::vector<Extremum> maxima; ///< ascending omega
};

/// Strict interior local extrema of one spectrum column, each refined by a
/// parabola through the sample and its two neighbours. Endpoints are never
/// reported. Throws InvalidParameter for fewer than 3 points or a
/// non-increasing frequency axis.
ExtremaList find_extrema(std::span<const SpectrumPoint> points, SpectrumColumn column);

enum class SplittingMode
{
    TransmissionMinima, ///< half the separation of the two T dips
    ReflectionMaxima    ///< half the separation of the two R peaks
};

struct AnalysisOptions
{
    double window_half_width = 0.2; ///< scan window half-width in units of omega_m
    int window_nodes = 4001;
    SplittingMode mode = SplittingMode::TransmissionMinima;
    double reflect_threshold = 0.99;  ///< R above this at reflect ports
    double transmit_threshold = 0.95; ///< T above this at the transmit port
    EvaluationPath path = EvaluationPath::ClosedForm;
    SteadyOptions steady;

    bool operator==(const AnalysisOptions &) const = default;
};

struct Splitting
{
    double omega0 = 0; ///< half separation; 0 if only one side has a feature
    double lower = 0;  ///< frequency of the lower feature (0 when absent)
    double upper = 0;  ///< frequency of the upper feature (0 when absent)
};

/// Locates the deepest dip (or highest peak) on each side of omega_m inside
/// omega_m * (1 +- window_half_width). Throws AnalysisError if the window has
/// no feature at all.
Splitting measure_splitting(const SystemParams &params, const SteadyState &state,
                            const AnalysisOptions &options = {});

/// Splitting omega0 of the transparency window (rad/s).
double window_splitting(const SystemParams &params, const AnalysisOptions &options = {});

enum class PortLabel
{
    Reflect,      ///< pump off: the whole line is reflected at omega_m
    Transmit,
    ReflectLower,
    ReflectUpper
};

std::string to_string(PortLabel label);

struct Port
{
    PortLabel label = PortLabel::Reflect;
    double omega = 0;
    double r_value = 0;
    double t_value = 0;
    bool threshold_met = false;
};

struct RoutingReport
{
    bool pump_on = false;
    double center = 0; ///< omega_m
    double omega0 = 0;
    std::vector<Port> ports;
    bool degenerate = false; ///< no mechanical feature in the window (e.g. g1 = 0)
    SteadyState state;

    /// True when the port layout matches the pump state and every port meets its threshold.
    bool thresholds_met() const;
};

RoutingReport routing_report(const SystemParams &params, const AnalysisOptions &options = {});
RoutingReport routing_report(const SystemParams &params, const SteadyState &state,
                             const AnalysisOptions &options = {});

struct SweepRow
{
    double power_p = 0;
    bool ok = false;
    std::string error; ///< set when ok is false
    RoutingReport report;
};

/// One routing report per microwave power. The steady state of each row is
/// continued from the previous row's displacement. Row failures are recorded
/// and the sweep continues.
std::vector<SweepRow> power_sweep(const SystemParams &params, std::span<const double> powers,
                                  const AnalysisOptions &options = {});

struct CalibrationTargets
{
    double pump_off_transmission_max = 0.005; ///< T(omega_m) with the microwave pump off
    double reflect_min = 0.995;               ///< R at both reflect ports, pump on
    double transmit_min = 0.97;               ///< T(omega_m), pump on
    double splitting_linewidths = 2.0;        ///< omega0 >= this * 2 kappa1
    double g1_lo = 1e17, g1_hi = 1e21;        ///< rad/(s m)
    double g2_lo = 1e17, g2_hi = 1e21;
    double relative_precision = 1e-3;         ///< bisection stops at hi/lo <= 1 + this

    bool operator==(const CalibrationTargets &) const = default;
};

struct CalibrationResult
{
    double g1 = 0;
    double g2 = 0;
    RoutingReport pump_on;
    RoutingReport pump_off;
    int evaluations = 0;
};

/// Chooses couplings (g1, g2) that make the router work: first the smallest g1
/// giving a pump-off dip, then the smallest g2 giving a resolved splitting and
/// pump-on transparency, raising g1 until the reflect ports are deep enough.
///
/// `prepare` is applied to every candidate parameter set before evaluation
/// (e.g. to re-pin effective detunings); identity when empty. Returns the
/// initial pair unchanged if it already meets every target. Throws
/// CalibrationError naming the closest achieved values otherwise.
CalibrationResult calibrate_couplings(const SystemParams &params, const CalibrationTargets &targets = {},
                                      const AnalysisOptions &options = {},
                                      const std::function<SystemParams(const SystemParams &)> &prepare = {});

} // namespace omrouter
