#include "omrouter/cli/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <fstream>
#include <numbers>
#include <sstream>

extern char **environ;

namespace omrouter::cli {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Scales are decimal exponents so they can be folded into the literal itself:
// "10.56MHz" then reads exactly like the literal 10.56e6.
struct Prefix
{
    std::string_view symbol;
    int exponent;
};

constexpr std::array<Prefix, 12> prefixes{{{"", 0},
                                           {"T", 12},
                                           {"G", 9},
                                           {"M", 6},
                                           {"k", 3},
                                           {"m", -3},
                                           {"u", -6},
                                           {"\xC2\xB5", -6},
                                           {"\xCE\xBC", -6},
                                           {"n", -9},
                                           {"p", -12},
                                           {"f", -15}}};

struct Unit
{
    std::string_view symbol;
    Dimension dim;
    int exponent;
    bool cycles; ///< Hz-based: needs an explicit pi factor
};

// Longest symbols first so that suffix matching is unambiguous.
constexpr std::array<Unit, 8> units{{{"rad/s/m", Dimension::Coupling, 0, false},
                                     {"rad/s", Dimension::AngularFrequency, 0, false},
                                     {"Hz/m", Dimension::Coupling, 0, true},
                                     {"Hz", Dimension::AngularFrequency, 0, true},
                                     {"g", Dimension::Mass, -3, false},
                                     {"W", Dimension::Power, 0, false},
                                     {"K", Dimension::Temperature, 0, false},
                                     {"m", Dimension::Length, 0, false}}};

const char *dimension_name(Dimension dim)
{
    switch (dim) {
    case Dimension::AngularFrequency: return "angular frequency";
    case Dimension::Mass: return "mass";
    case Dimension::Power: return "power";
    case Dimension::Temperature: return "temperature";
    case Dimension::Coupling: return "coupling";
    case Dimension::Length: return "length";
    case Dimension::Dimensionless: return "dimensionless";
    }
    return "?";
}

const char *si_unit(Dimension dim)
{
    switch (dim) {
    case Dimension::AngularFrequency: return " rad/s";
    case Dimension::Mass: return " kg";
    case Dimension::Power: return " W";
    case Dimension::Temperature: return " K";
    case Dimension::Coupling: return " rad/s/m";
    case Dimension::Length: return " m";
    case Dimension::Dimensionless: return "";
    }
    return "";
}

struct UnitMatch
{
    const Unit *unit = nullptr;
    int prefix = 0;
};

UnitMatch match_unit(std::string_view tail)
{
    for (const auto &u : units) {
        if (tail.size() < u.symbol.size() || !tail.ends_with(u.symbol))
            continue;
        const auto head = tail.substr(0, tail.size() - u.symbol.size());
        for (const auto &p : prefixes)
            if (head == p.symbol)
                return {&u, p.exponent};
    }
    return {};
}

// Decimal literal times 10^shift, rounded once.
double parse_scaled(std::string_view literal, int shift)
{
    std::string_view mantissa = literal;
    int exponent = 0;
    if (const auto e = literal.find_first_of("eE"); e != std::string_view::npos) {
        mantissa = literal.substr(0, e);
        auto digits = literal.substr(e + 1);
        if (digits.starts_with('+'))
            digits.remove_prefix(1);
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), exponent);
        if (ec != std::errc{} || ptr != digits.data() + digits.size())
            throw ConfigError("malformed exponent in '" + std::string(literal) + "'");
    }
    const std::string text = std::string(mantissa) + "e" + std::to_string(exponent + shift);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError("malformed number '" + std::string(literal) + "'");
    return v;
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

long parse_integer(std::string_view text)
{
    text = trim(text);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError("expected an integer, got '" + std::string(text) + "'");
    return v;
}

bool parse_bool(std::string_view text)
{
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes" || text == "on")
        return true;
    if (text == "false" || text == "0" || text == "no" || text == "off")
        return false;
    throw ConfigError("expected a boolean, got '" + std::string(text) + "'");
}

template <typename Enum, std::size_t N>
Enum parse_choice(std::string_view text, const std::array<std::pair<std::string_view, Enum>, N> &table)
{
    text = trim(text);
    for (const auto &[name, value] : table)
        if (name == text)
            return value;
    std::string allowed;
    for (const auto &[name, value] : table)
        allowed += (allowed.empty() ? "" : ", ") + std::string(name);
    throw ConfigError("unknown choice '" + std::string(text) + "' (allowed: " + allowed + ")");
}

template <typename Enum, std::size_t N>
std::string choice_name(Enum value, const std::array<std::pair<std::string_view, Enum>, N> &table)
{
    for (const auto &[name, v] : table)
        if (v == value)
            return std::string(name);
    return "?";
}

constexpr std::array<std::pair<std::string_view, DetuningReference>, 2> detuning_names{
    {{"bare", DetuningReference::Bare}, {"effective", DetuningReference::Effective}}};
constexpr std::array<std::pair<std::string_view, OutputFormat>, 2> format_names{
    {{"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}}};
constexpr std::array<std::pair<std::string_view, EvaluationPath>, 2> path_names{
    {{"closed-form", EvaluationPath::ClosedForm}, {"linear-solve", EvaluationPath::LinearSolve}}};
constexpr std::array<std::pair<std::string_view, BranchPolicy>, 3> policy_names{
    {{"zero-power", BranchPolicy::ZeroPowerConnected},
     {"lowest", BranchPolicy::Lowest},
     {"highest", BranchPolicy::Highest}}};
constexpr std::array<std::pair<std::string_view, SplittingMode>, 2> mode_names{
    {{"transmission-minima", SplittingMode::TransmissionMinima},
     {"reflection-maxima", SplittingMode::ReflectionMaxima}}};

struct Key
{
    std::string name;
    std::function<void(RunConfig &, std::string_view)> set;
    std::function<std::string(const RunConfig &)> get;
};

using DoubleRef = std::function<double &(RunConfig &)>;
using IntRef = std::function<int &(RunConfig &)>;

Key quantity(std::string name, Dimension dim, DoubleRef ref)
{
    return {std::move(name),
            [dim, ref](RunConfig &c, std::string_view v) { ref(c) = parse_quantity(v, dim); },
            [dim, ref](const RunConfig &c) {
                return format_double(ref(const_cast<RunConfig &>(c))) + si_unit(dim);
            }};
}

Key integer(std::string name, IntRef ref)
{
    return {std::move(name),
            [ref](RunConfig &c, std::string_view v) {
                const long n = parse_integer(v);
                if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max())
                    throw ConfigError("integer out of range");
                ref(c) = static_cast<int>(n);
            },
            [ref](const RunConfig &c) { return std::to_string(ref(const_cast<RunConfig &>(c))); }};
}

template <typename Enum, std::size_t N>
Key choice(std::string name, std::function<Enum &(RunConfig &)> ref,
           const std::array<std::pair<std::string_view, Enum>, N> &table)
{
    return {std::move(name),
            [ref, &table](RunConfig &c, std::string_view v) { ref(c) = parse_choice(v, table); },
            [ref, &table](const RunConfig &c) { return choice_name(ref(const_cast<RunConfig &>(c)), table); }};
}

Key power_list(std::string name, std::function<std::vector<double> &(RunConfig &)> ref)
{
    return {std::move(name),
            [ref](RunConfig &c, std::string_view v) {
                std::vector<double> out;
                v = trim(v);
                while (!v.empty()) {
                    const auto comma = v.find(',');
                    const auto item = trim(v.substr(0, comma));
                    if (item.empty())
                        throw ConfigError("empty list entry");
                    out.push_back(parse_quantity(item, Dimension::Power));
                    if (comma == std::string_view::npos)
                        break;
                    v = v.substr(comma + 1);
                    if (trim(v).empty())
                        throw ConfigError("trailing comma in list");
                }
                ref(c) = std::move(out);
            },
            [ref](const RunConfig &c) {
                std::string s;
                for (double p : ref(const_cast<RunConfig &>(c)))
                    s += (s.empty() ? "" : ", ") + format_double(p) + " W";
                return s;
            }};
}

#define FIELD(expr) [](RunConfig &c) -> auto & { return c.expr; }

const std::vector<Key> &registry()
{
    static const std::vector<Key> keys = [] {
        using D = Dimension;
        std::vector<Key> k;
        k.push_back(quantity("omega_m", D::AngularFrequency, FIELD(params.omega_m)));
        k.push_back(quantity("mass", D::Mass, FIELD(params.mass)));
        k.push_back(quantity("gamma_m", D::AngularFrequency, FIELD(params.gamma_m)));
        k.push_back(quantity("kappa1", D::AngularFrequency, FIELD(params.kappa1)));
        k.push_back(quantity("kappa2", D::AngularFrequency, FIELD(params.kappa2)));
        k.push_back(quantity("g1", D::Coupling, FIELD(params.g1)));
        k.push_back(quantity("g2", D::Coupling, FIELD(params.g2)));
        k.push_back(quantity("delta_a", D::AngularFrequency, FIELD(params.delta_a)));
        k.push_back(quantity("delta_c", D::AngularFrequency, FIELD(params.delta_c)));
        k.push_back(quantity("omega_l", D::AngularFrequency, FIELD(params.omega_l)));
        k.push_back(quantity("omega_p", D::AngularFrequency, FIELD(params.omega_p)));
        k.push_back(quantity("power_l", D::Power, FIELD(params.power_l)));
        k.push_back(quantity("power_p", D::Power, FIELD(params.power_p)));
        k.push_back(quantity("temperature", D::Temperature, FIELD(params.temperature)));
        k.push_back({"hbar_in_drive",
                     [](RunConfig &c, std::string_view v) { c.params.hbar_in_drive = parse_bool(v); },
                     [](const RunConfig &c) { return std::string(c.params.hbar_in_drive ? "true" : "false"); }});
        k.push_back(choice<DetuningReference>("detuning_reference", FIELD(detuning_reference), detuning_names));

        k.push_back(integer("steady_scan_samples", FIELD(steady.scan_samples)));
        k.push_back(integer("steady_samples_per_decade", FIELD(steady.samples_per_decade)));
        k.push_back(integer("steady_ramp_steps", FIELD(steady.ramp_steps)));
        k.push_back(quantity("steady_bisection_tolerance", D::Length, FIELD(steady.bisection_tolerance)));
        k.push_back(quantity("steady_residual_tolerance", D::Dimensionless, FIELD(steady.residual_tolerance)));
        k.push_back(quantity("steady_ambiguity_tolerance", D::Length, FIELD(steady.ambiguity_tolerance)));
        k.push_back(choice<BranchPolicy>("branch_policy", FIELD(steady.policy), policy_names));

        k.push_back(choice<EvaluationPath>("evaluation_path", FIELD(analysis.path), path_names));
        k.push_back(quantity("window_half_width", D::Dimensionless, FIELD(analysis.window_half_width)));
        k.push_back(integer("window_nodes", FIELD(analysis.window_nodes)));
        k.push_back(choice<SplittingMode>("splitting_mode", FIELD(analysis.mode), mode_names));
        k.push_back(quantity("reflect_threshold", D::Dimensionless, FIELD(analysis.reflect_threshold)));
        k.push_back(quantity("transmit_threshold", D::Dimensionless, FIELD(analysis.transmit_threshold)));

        k.push_back(quantity("calib_pump_off_transmission_max", D::Dimensionless,
                             FIELD(calibration.pump_off_transmission_max)));
        k.push_back(quantity("calib_reflect_min", D::Dimensionless, FIELD(calibration.reflect_min)));
        k.push_back(quantity("calib_transmit_min", D::Dimensionless, FIELD(calibration.transmit_min)));
        k.push_back(quantity("calib_splitting_linewidths", D::Dimensionless, FIELD(calibration.splitting_linewidths)));
        k.push_back(quantity("calib_g1_lo", D::Coupling, FIELD(calibration.g1_lo)));
        k.push_back(quantity("calib_g1_hi", D::Coupling, FIELD(calibration.g1_hi)));
        k.push_back(quantity("calib_g2_lo", D::Coupling, FIELD(calibration.g2_lo)));
        k.push_back(quantity("calib_g2_hi", D::Coupling, FIELD(calibration.g2_hi)));
        k.push_back(quantity("calib_relative_precision", D::Dimensionless, FIELD(calibration.relative_precision)));

        k.push_back(quantity("spectrum_min", D::Dimensionless, FIELD(spectrum_min)));
        k.push_back(quantity("spectrum_max", D::Dimensionless, FIELD(spectrum_max)));
        k.push_back(integer("spectrum_points", FIELD(spectrum_points)));
        k.push_back(quantity("figure_min", D::Dimensionless, FIELD(figure_min)));
        k.push_back(quantity("figure_max", D::Dimensionless, FIELD(figure_max)));
        k.push_back(integer("figure_points", FIELD(figure_points)));
        k.push_back(quantity("validate_min", D::Dimensionless, FIELD(validate_min)));
        k.push_back(quantity("validate_max", D::Dimensionless, FIELD(validate_max)));
        k.push_back(integer("validate_points", FIELD(validate_points)));
        k.push_back(quantity("validate_rtol", D::Dimensionless, FIELD(validate_rtol)));
        k.push_back(quantity("validate_atol", D::Dimensionless, FIELD(validate_atol)));
        k.push_back(power_list("fig3_powers", FIELD(fig3_powers)));
        k.push_back(power_list("sweep_powers", FIELD(sweep_powers)));

        k.push_back({"output_dir",
                     [](RunConfig &c, std::string_view v) {
                         v = trim(v);
                         if (v.empty())
                             throw ConfigError("output_dir must not be empty");
                         c.output_dir = std::string(v);
                     },
                     [](const RunConfig &c) { return c.output_dir; }});
        k.push_back(choice<OutputFormat>("format", FIELD(format), format_names));
        return k;
    }();
    return keys;
}

#undef FIELD

const Key &find_key(std::string_view name)
{
    for (const auto &k : registry())
        if (k.name == name)
            return k;
    throw ConfigError("unknown key '" + std::string(name) + "'");
}

void assign(RunConfig &config, std::string_view key, std::string_view value, const std::string &where)
{
    const Key *k = nullptr;
    try {
        k = &find_key(key);
    } catch (const ConfigError &e) {
        throw ConfigError(where + ": " + e.what());
    }
    try {
        k->set(config, value);
    } catch (const ConfigError &e) {
        throw ConfigError(where + ": key '" + std::string(key) + "': " + e.what());
    }
}

} // namespace

double parse_quantity(std::string_view text, Dimension dim)
{
    const std::string original(trim(text));
    std::string_view rest = trim(text);
    if (rest.empty())
        throw ConfigError("empty value");

    struct Factor
    {
        std::string_view literal; ///< empty for a bare "pi"
        bool pi = false;
    };
    std::vector<Factor> factors;
    std::string_view unit_text;

    while (true) {
        const auto star = rest.find('*');
        std::string_view factor = trim(rest.substr(0, star));
        const bool last = star == std::string_view::npos;
        if (factor.empty())
            throw ConfigError("malformed quantity '" + original + "'");

        Factor f;
        if (!factor.starts_with("pi")) {
            double probe = 0;
            const auto [ptr, ec] = std::from_chars(factor.data(), factor.data() + factor.size(), probe);
            if (ec != std::errc{})
                throw ConfigError("malformed number in '" + original + "'");
            const auto length = static_cast<std::size_t>(ptr - factor.data());
            f.literal = factor.substr(0, length);
            factor = trim(factor.substr(length));
        }
        if (factor.starts_with("pi")) {
            f.pi = true;
            factor = trim(factor.substr(2));
        }
        factors.push_back(f);
        if (!factor.empty()) {
            if (!last)
                throw ConfigError("unit must come last in '" + original + "'");
            unit_text = factor;
        }
        if (last)
            break;
        rest = rest.substr(star + 1);
    }

    int exponent = 0;
    bool has_pi = false;
    for (const auto &f : factors)
        has_pi = has_pi || f.pi;
    if (!unit_text.empty()) {
        const UnitMatch m = match_unit(unit_text);
        if (!m.unit)
            throw ConfigError("unknown unit '" + std::string(unit_text) + "'");
        if (m.unit->dim != dim)
            throw ConfigError("unit '" + std::string(unit_text) + "' is not a " + dimension_name(dim) + " unit");
        if (m.unit->cycles && !has_pi)
            throw ConfigError("'" + std::string(unit_text) +
                              "' is a cyclic frequency; write an explicit factor such as 2pi*");
        exponent = m.prefix + m.unit->exponent;
    }

    double value = 1.0;
    for (std::size_t k = 0; k < factors.size(); ++k) {
        const auto &f = factors[k];
        if (!f.literal.empty()) {
            const bool scaled = k + 1 == factors.size() && exponent != 0;
            value *= scaled ? parse_scaled(f.literal, exponent) : parse_scaled(f.literal, 0);
            if (scaled)
                exponent = 0;
        }
        if (f.pi)
            value *= std::numbers::pi;
    }
    if (exponent != 0)
        value *= std::pow(10.0, exponent);
    if (!std::isfinite(value))
        throw ConfigError("non-finite value '" + original + "'");
    return value;
}

void apply_config_text(RunConfig &config, const ConfigSource &source)
{
    std::istringstream in(source.text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string_view view(line);
        if (const auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty())
            continue;
        const std::string where = source.name + ":" + std::to_string(number);
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(where + ": expected 'key = value'");
        const auto key = trim(view.substr(0, eq));
        if (key.empty())
            throw ConfigError(where + ": missing key");
        assign(config, key, view.substr(eq + 1), where);
    }
}

void apply_override(RunConfig &config, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError("command line: expected key=value, got '" + std::string(assignment) + "'");
    assign(config, trim(assignment.substr(0, eq)), assignment.substr(eq + 1), "command line");
}

void apply_environment(RunConfig &config, const std::map<std::string, std::string> &env)
{
    constexpr std::string_view prefix = "OMROUTER_";
    for (const auto &[name, value] : env) {
        if (!std::string_view(name).starts_with(prefix))
            continue;
        std::string key = name.substr(prefix.size());
        std::transform(key.begin(), key.end(), key.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        assign(config, key, value, "environment " + name);
    }
}

std::map<std::string, std::string> process_environment()
{
    std::map<std::string, std::string> env;
    for (char **e = environ; e && *e; ++e) {
        std::string_view entry(*e);
        if (!entry.starts_with("OMROUTER_"))
            continue;
        const auto eq = entry.find('=');
        if (eq == std::string_view::npos)
            continue;
        env.emplace(std::string(entry.substr(0, eq)), std::string(entry.substr(eq + 1)));
    }
    return env;
}

RunConfig parse_config(const std::filesystem::path &path, const std::vector<std::string> &overrides,
                       const std::map<std::string, std::string> &env)
{
    RunConfig config;
    apply_environment(config, env);
    if (!path.empty()) {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError("cannot read config file '" + path.string() + "'");
        std::ostringstream text;
        text << in.rdbuf();
        apply_config_text(config, {path.string(), text.str()});
    }
    for (const auto &o : overrides)
        apply_override(config, o);
    validate_config(config);
    return config;
}

void validate_config(const RunConfig &c)
{
    try {
        c.params.validate();
    } catch (const InvalidParameter &e) {
        throw ConfigError(e.what());
    }
    auto grid = [](double lo, double hi, int n, const char *name) {
        if (n < 1)
            throw ConfigError(std::string(name) + ": empty frequency grid");
        if (!(lo > 0) || !std::isfinite(hi))
            throw ConfigError(std::string(name) + ": grid must lie at positive frequencies");
        if (n > 1 && !(hi > lo))
            throw ConfigError(std::string(name) + ": grid maximum must exceed its minimum");
    };
    grid(c.spectrum_min, c.spectrum_max, c.spectrum_points, "spectrum");
    grid(c.figure_min, c.figure_max, c.figure_points, "figure");
    grid(c.validate_min, c.validate_max, c.validate_points, "validate");
    if (c.figure_points < 3)
        throw ConfigError("figure_points must be at least 3");
    if (c.analysis.window_nodes < 3)
        throw ConfigError("window_nodes must be at least 3");
    if (!(c.analysis.window_half_width > 0 && c.analysis.window_half_width < 1))
        throw ConfigError("window_half_width must lie in (0, 1)");
    if (c.steady.scan_samples < 3)
        throw ConfigError("steady_scan_samples must be at least 3");
    if (c.steady.samples_per_decade < 0)
        throw ConfigError("steady_samples_per_decade must be nonnegative");
    if (c.steady.ramp_steps < 1)
        throw ConfigError("steady_ramp_steps must be at least 1");
    if (c.steady.bisection_tolerance < 0 || !(c.steady.residual_tolerance > 0) || c.steady.ambiguity_tolerance < 0)
        throw ConfigError("steady tolerances must be nonnegative (residual tolerance positive)");
    if (!(c.validate_rtol > 0) || c.validate_atol < 0)
        throw ConfigError("validate_rtol must be positive and validate_atol nonnegative");
    auto unit_interval = [](double v, const char *name) {
        if (!(v > 0 && v <= 1))
            throw ConfigError(std::string(name) + " must lie in (0, 1]");
    };
    unit_interval(c.analysis.reflect_threshold, "reflect_threshold");
    unit_interval(c.analysis.transmit_threshold, "transmit_threshold");
    unit_interval(c.calibration.pump_off_transmission_max, "calib_pump_off_transmission_max");
    unit_interval(c.calibration.reflect_min, "calib_reflect_min");
    unit_interval(c.calibration.transmit_min, "calib_transmit_min");
    if (!(c.calibration.g1_lo >= 0 && c.calibration.g1_hi > c.calibration.g1_lo) ||
        !(c.calibration.g2_lo >= 0 && c.calibration.g2_hi > c.calibration.g2_lo))
        throw ConfigError("calibration coupling brackets must satisfy 0 <= lo < hi");
    if (!(c.calibration.relative_precision > 0) || !(c.calibration.splitting_linewidths >= 0))
        throw ConfigError("calib_relative_precision must be positive");
    auto powers = [](const std::vector<double> &list, const char *name) {
        if (list.empty())
            throw ConfigError(std::string(name) + " must not be empty");
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (!(list[i] >= 0))
                throw ConfigError(std::string(name) + ": powers must be nonnegative");
            if (i > 0 && list[i] < list[i - 1])
                throw ConfigError(std::string(name) + ": powers must be nondecreasing");
        }
    };
    powers(c.fig3_powers, "fig3_powers");
    powers(c.sweep_powers, "sweep_powers");
}

std::string resolved_config_text(const RunConfig &config)
{
    std::string out;
    for (const auto &k : registry())
        out += k.name + " = " + k.get(config) + "\n";
    return out;
}

std::vector<std::string> config_keys()
{
    std::vector<std::string> names;
    for (const auto &k : registry())
        names.push_back(k.name);
    return names;
}

SystemParams resolve_params(const RunConfig &config, double power_p)
{
    SystemParams p = config.params;
    p.power_p = power_p;
    if (config.detuning_reference == DetuningReference::Bare)
        return p;

    const double target1 = p.delta_a;
    const double target2 = p.delta_c;
    p = with_effective_detunings(p, target1, target2);
    const SteadyState s = solve_steady_state(p, config.steady);
    const double scale = std::max({std::abs(target1), std::abs(target2), p.omega_m});
    const double tol = 1e-9 * scale;
    if (std::abs(s.delta1 - target1) > tol || std::abs(s.delta2 - target2) > tol) {
        throw ConvergenceError("effective detunings (" + format_double(target1) + ", " + format_double(target2) +
                               ") rad/s are not reached on the tracked branch (got " + format_double(s.delta1) +
                               ", " + format_double(s.delta2) + ")");
    }
    return p;
}

SystemParams resolve_params(const RunConfig &config) { return resolve_params(config, config.params.power_p); }

} // namespace omrouter::cli
