#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "omrouter/analysis.hpp"

namespace omrouter::cli {

/// Bad configuration input; maps to exit code 2.
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class DetuningReference
{
    Bare,     ///< delta_a / delta_c are the bare cavity-pump detunings
    Effective ///< delta_a / delta_c are the displacement-shifted detunings to hold fixed
};

enum class OutputFormat
{
    Csv,
    Json
};

/// Physical dimension of a configuration value, used for unit validation.
enum class Dimension
{
    AngularFrequency, ///< rad/s; Hz accepted only with an explicit pi factor
    Mass,             ///< kg
    Power,            ///< W
    Temperature,      ///< K
    Coupling,         ///< rad/(s m)
    Length,           ///< m
    Dimensionless
};

/// Parses a literal such as `2pi*10.56MHz`, `48ng`, `6*50nW` or `1.5e-3` into
/// the SI value of the requested dimension. Throws ConfigError.
double parse_quantity(std::string_view text, Dimension dim);

struct RunConfig
{
    SystemParams params = default_params();
    DetuningReference detuning_reference = DetuningReference::Effective;

    SteadyOptions steady;
    AnalysisOptions analysis;
    CalibrationTargets calibration;

    // Frequency grids, in units of omega_m.
    double spectrum_min = 0.8, spectrum_max = 1.2;
    int spectrum_points = 4001;
    double figure_min = 0.8, figure_max = 1.2;
    int figure_points = 4001;
    double validate_min = 0.5, validate_max = 1.5;
    int validate_points = 2001;
    double validate_rtol = 1e-9;
    double validate_atol = 1e-12;

    std::vector<double> fig3_powers{6 * 50e-9, 30 * 50e-9};
    std::vector<double> sweep_powers{0.0, 6 * 50e-9, 30 * 50e-9};

    std::string output_dir = "out";
    OutputFormat format = OutputFormat::Csv;

    bool operator==(const RunConfig &) const = default;
};

/// Source text of one configuration layer.
struct ConfigSource
{
    std::string name; ///< file path, "environment" or "command line"
    std::string text;
};

/// Applies `key = value` lines (with `#` comments) on top of `config`.
/// Throws ConfigError naming the key and line.
void apply_config_text(RunConfig &config, const ConfigSource &source);

/// Applies a single `key=value` override.
void apply_override(RunConfig &config, std::string_view assignment);

/// Applies OMROUTER_<KEY> variables from `env` (name -> value).
void apply_environment(RunConfig &config, const std::map<std::string, std::string> &env);

/// OMROUTER_* variables of the current process.
std::map<std::string, std::string> process_environment();

/// defaults < environment < file < overrides. An empty path skips the file layer.
RunConfig parse_config(const std::filesystem::path &path, const std::vector<std::string> &overrides = {},
                       const std::map<std::string, std::string> &env = {});

/// Cross-key checks (grid sizes, ordering, physics parameter validity).
void validate_config(const RunConfig &config);

/// Every key with its resolved value in SI units, 17 significant digits.
/// Parsing the text reproduces the configuration exactly.
std::string resolved_config_text(const RunConfig &config);

/// Names of all recognised keys, in echo order.
std::vector<std::string> config_keys();

/// System parameters for the given microwave power with the detuning
/// reference applied. In effective mode the steady state is solved and the
/// effective detunings are checked against their targets (ConvergenceError
/// when the tracked branch misses them).
SystemParams resolve_params(const RunConfig &config, double power_p);
SystemParams resolve_params(const RunConfig &config);

} // namespace omrouter::cli
