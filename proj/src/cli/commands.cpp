#include "omrouter/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "omrouter/cli/config.hpp"
#include "omrouter/cli/figures.hpp"

namespace omrouter::cli {

namespace {

using nlohmann::ordered_json;

std::string complex_text(std::complex<double> z)
{
    return format_float(z.real()) + " " + (std::signbit(z.imag()) ? "-" : "+") + " " +
           format_float(std::abs(z.imag())) + "i";
}

ordered_json state_json(const SteadyState &s)
{
    return {{"q_s", s.q_s},
            {"p_s", s.p_s},
            {"a_s", {s.a_s.real(), s.a_s.imag()}},
            {"c_s", {s.c_s.real(), s.c_s.imag()}},
            {"delta1", s.delta1},
            {"delta2", s.delta2},
            {"residual", s.residual},
            {"branch_index", s.branch_index},
            {"root_count", s.root_count},
            {"tracking_ambiguous", s.tracking_ambiguous}};
}

ordered_json report_json(const RoutingReport &r)
{
    ordered_json ports = ordered_json::array();
    for (const auto &p : r.ports)
        ports.push_back({{"label", to_string(p.label)},
                         {"omega", p.omega},
                         {"omega_over_omega_m", p.omega / r.center},
                         {"R", p.r_value},
                         {"T", p.t_value},
                         {"threshold_met", p.threshold_met}});
    return {{"pump_on", r.pump_on},
            {"center", r.center},
            {"omega0", r.omega0},
            {"omega0_over_omega_m", r.center > 0 ? r.omega0 / r.center : 0.0},
            {"degenerate", r.degenerate},
            {"thresholds_met", r.thresholds_met()},
            {"ports", ports},
            {"steady_state", state_json(r.state)}};
}

void print_report(std::ostream &out, const RoutingReport &r)
{
    out << "pump: " << (r.pump_on ? "on" : "off") << "\n"
        << "omega_m: " << format_float(r.center) << " rad/s\n"
        << "omega0: " << format_float(r.omega0) << " rad/s (" << format_float(r.center > 0 ? r.omega0 / r.center : 0)
        << " omega_m)\n"
        << "degenerate: " << (r.degenerate ? "yes" : "no") << "\n"
        << "ports: " << r.ports.size() << "\n";
    for (const auto &p : r.ports)
        out << "  " << to_string(p.label) << " at " << format_float(p.omega / r.center) << " omega_m: R = "
            << format_float(p.r_value) << ", T = " << format_float(p.t_value)
            << (p.threshold_met ? "" : "  (below threshold)") << "\n";
    out << "thresholds met: " << (r.thresholds_met() ? "yes" : "no") << "\n";
}

AnalysisOptions analysis_options(const RunConfig &c)
{
    AnalysisOptions o = c.analysis;
    o.steady = c.steady;
    return o;
}

int cmd_steady(const RunConfig &c, std::ostream &out)
{
    const SystemParams p = resolve_params(c);
    const SteadyState s = solve_steady_state(p, c.steady);
    const auto branches = enumerate_branches(p, c.steady);
    if (c.format == OutputFormat::Json) {
        ordered_json j = state_json(s);
        ordered_json all = ordered_json::array();
        for (double q : branches)
            all.push_back(state_json(steady_state_at(p, q)));
        j["delta_a_bare"] = p.delta_a;
        j["delta_c_bare"] = p.delta_c;
        j["branches"] = all;
        out << j.dump(2) << "\n";
        return Success;
    }
    out << "q_s: " << format_float(s.q_s) << " m\n"
        << "p_s: " << format_float(s.p_s) << " kg m/s\n"
        << "a_s: " << complex_text(s.a_s) << "\n"
        << "c_s: " << complex_text(s.c_s) << "\n"
        << "delta1: " << format_float(s.delta1) << " rad/s\n"
        << "delta2: " << format_float(s.delta2) << " rad/s\n"
        << "delta_a (bare): " << format_float(p.delta_a) << " rad/s\n"
        << "delta_c (bare): " << format_float(p.delta_c) << " rad/s\n"
        << "residual: " << format_float(s.residual) << "\n"
        << "branch: " << s.branch_index << " of " << s.root_count
        << (s.tracking_ambiguous ? " (tracking ambiguous)" : "") << "\n"
        << "branches:\n";
    for (std::size_t k = 0; k < branches.size(); ++k) {
        const SteadyState b = steady_state_at(p, branches[k]);
        out << "  [" << k << "] q = " << format_float(b.q_s) << " m, |a| = " << format_float(std::abs(b.a_s))
            << ", |c| = " << format_float(std::abs(b.c_s)) << ", residual = " << format_float(b.residual) << "\n";
    }
    return Success;
}

int cmd_spectrum(const RunConfig &c, std::ostream &out, std::ostream &err)
{
    const SystemParams p = resolve_params(c);
    const Eigen::ArrayXd x = frequency_grid(c.spectrum_min, c.spectrum_max, c.spectrum_points);
    const Eigen::ArrayXd omega = x * p.omega_m;
    const SpectrumScan scan = scan_spectrum(p, {omega.data(), static_cast<std::size_t>(omega.size())},
                                            c.analysis.path, c.steady);
    Table t{{"omega_over_omega_m[1]", "omega[rad/s]", "R[1]", "T[1]", "S_thermal[quanta]", "S_vacuum[quanta]"},
            std::vector<std::vector<double>>(6)};
    for (std::size_t k = 0; k < scan.points.size(); ++k) {
        const auto &pt = scan.points[k];
        t.columns[0].push_back(x[static_cast<Eigen::Index>(k)]);
        t.columns[1].push_back(pt.omega);
        t.columns[2].push_back(pt.r_refl);
        t.columns[3].push_back(pt.t_trans);
        t.columns[4].push_back(pt.s_thermal);
        t.columns[5].push_back(pt.s_vacuum);
    }
    const std::filesystem::path dir = c.output_dir;
    write_file(dir / "spectrum.csv", to_csv(t));
    write_config_echo(dir, c);
    out << "wrote " << (dir / "spectrum.csv").string() << " (" << scan.points.size() << " points)\n";
    for (const auto &e : scan.errors)
        err << "node " << e.index << " (omega = " << format_float(e.omega) << " rad/s): " << e.message << "\n";
    return scan.ok() ? Success : PhysicsFailure;
}

int cmd_route(const RunConfig &c, std::ostream &out)
{
    const SystemParams p = resolve_params(c);
    const RoutingReport r = routing_report(p, analysis_options(c));
    const std::filesystem::path dir = c.output_dir;
    const ordered_json j = report_json(r);
    write_file(dir / "route.json", j.dump(2) + "\n");
    write_config_echo(dir, c);
    if (c.format == OutputFormat::Json)
        out << j.dump(2) << "\n";
    else
        print_report(out, r);
    return Success;
}

std::vector<SweepRow> sweep(const RunConfig &c)
{
    const AnalysisOptions options = analysis_options(c);
    if (c.detuning_reference == DetuningReference::Bare)
        return power_sweep(c.params, c.sweep_powers, options);

    // Effective detunings move the bare ones with power, so every row is resolved on its own.
    std::vector<SweepRow> rows;
    for (double power : c.sweep_powers) {
        SweepRow row;
        row.power_p = power;
        try {
            row.report = routing_report(resolve_params(c, power), options);
            row.ok = true;
        } catch (const Error &e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

double port_value(const RoutingReport &r, PortLabel label, bool reflection)
{
    for (const auto &p : r.ports)
        if (p.label == label)
            return reflection ? p.r_value : p.t_value;
    return std::numeric_limits<double>::quiet_NaN();
}

int cmd_sweep(const RunConfig &c, std::ostream &out, std::ostream &err)
{
    const auto rows = sweep(c);
    Table t{{"power_p[W]", "ok[1]", "omega0[rad/s]", "omega0_over_omega_m[1]", "T_transmit[1]", "R_reflect_lower[1]",
             "R_reflect_upper[1]", "R_reflect_pump_off[1]", "thresholds_met[1]"},
            std::vector<std::vector<double>>(9)};
    ordered_json j = ordered_json::array();
    bool all_ok = true;
    for (const auto &row : rows) {
        const auto &r = row.report;
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const bool ok = row.ok;
        all_ok = all_ok && ok;
        t.columns[0].push_back(row.power_p);
        t.columns[1].push_back(ok ? 1 : 0);
        t.columns[2].push_back(ok ? r.omega0 : nan);
        t.columns[3].push_back(ok ? r.omega0 / r.center : nan);
        t.columns[4].push_back(ok ? port_value(r, PortLabel::Transmit, false) : nan);
        t.columns[5].push_back(ok ? port_value(r, PortLabel::ReflectLower, true) : nan);
        t.columns[6].push_back(ok ? port_value(r, PortLabel::ReflectUpper, true) : nan);
        t.columns[7].push_back(ok ? port_value(r, PortLabel::Reflect, true) : nan);
        t.columns[8].push_back(ok && r.thresholds_met() ? 1 : 0);
        ordered_json entry{{"power_p", row.power_p}, {"ok", ok}};
        if (ok)
            entry["report"] = report_json(r);
        else
            entry["error"] = row.error;
        j.push_back(entry);
        if (!ok)
            err << "power " << format_float(row.power_p) << " W: " << row.error << "\n";
    }
    const std::filesystem::path dir = c.output_dir;
    const std::string csv = to_csv(t);
    write_file(dir / "sweep.csv", csv);
    write_config_echo(dir, c);
    if (c.format == OutputFormat::Json)
        out << j.dump(2) << "\n";
    else
        out << csv;
    return all_ok ? Success : PhysicsFailure;
}

int cmd_figure(const RunConfig &c, const std::string &id, std::ostream &out)
{
    for (const auto &path : run_figure(id, c))
        out << "wrote " << path.string() << "\n";
    return Success;
}

int cmd_validate(const RunConfig &c, std::ostream &out)
{
    struct Case
    {
        std::string name;
        double power;
    };
    const std::vector<Case> cases{
        {"pump off", 0.0}, {"pump on", c.params.power_p}, {"pump on x5", 5 * c.params.power_p}};
    const Eigen::ArrayXd x = frequency_grid(c.validate_min, c.validate_max, c.validate_points);
    double worst = 0;
    for (const auto &cs : cases) {
        const SystemParams p = resolve_params(c, cs.power);
        const SteadyState s = solve_steady_state(p, c.steady);
        double dev = 0;
        for (double ratio : x) {
            const double w = ratio * p.omega_m;
            const auto closed = closed_form_coefficients(p, s, w);
            const auto solved = linear_solve_coefficients(p, s, w);
            dev = std::max(dev, coefficient_deviation(p, closed, solved, c.validate_rtol, c.validate_atol));
        }
        worst = std::max(worst, dev);
        out << cs.name << " (power_p = " << format_float(cs.power) << " W): max deviation " << format_float(dev)
            << "\n";
    }
    const bool pass = worst <= c.validate_rtol;
    out << "max deviation: " << format_float(worst) << " (tolerance " << format_float(c.validate_rtol) << ") "
        << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? Success : PhysicsFailure;
}

int cmd_calibrate(const RunConfig &c, std::ostream &out)
{
    std::function<SystemParams(const SystemParams &)> prepare;
    if (c.detuning_reference == DetuningReference::Effective) {
        const double d1 = c.params.delta_a;
        const double d2 = c.params.delta_c;
        prepare = [d1, d2](const SystemParams &p) { return with_effective_detunings(p, d1, d2); };
    }
    const CalibrationResult r = calibrate_couplings(c.params, c.calibration, analysis_options(c), prepare);
    out << "g1 = " << format_float(r.g1) << " rad/s/m\n"
        << "g2 = " << format_float(r.g2) << " rad/s/m\n"
        << "evaluations: " << r.evaluations << "\n"
        << "-- pump off --\n";
    print_report(out, r.pump_off);
    out << "-- pump on --\n";
    print_report(out, r.pump_on);
    return Success;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err,
            const std::map<std::string, std::string> &env)
{
    CLI::App app{"Steady state, spectra and routing analysis of a hybrid opto-electromechanical router"};
    app.name("omrouter");
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;
    bool oracle = false;
    app.add_option("-c,--config", config_path, "config file (key = value lines)");
    app.add_option("-s,--set", overrides, "override one key, e.g. -s power_p=0")->allow_extra_args(false);
    app.add_option("-o,--output-dir", output_dir, "output directory");
    app.add_flag("--oracle", oracle, "evaluate spectra through the linear-solve path");

    auto *steady = app.add_subcommand("steady", "steady state and all coexisting branches");
    auto *spectrum = app.add_subcommand("spectrum", "R, T and noise spectra to spectrum.csv");
    auto *route = app.add_subcommand("route", "routing report (text and route.json)");
    auto *sweep_cmd = app.add_subcommand("sweep-power", "routing report per microwave power to sweep.csv");
    auto *figure = app.add_subcommand("figure", "regenerate figure data");
    std::string figure_id;
    figure->add_option("id", figure_id, "fig2, fig3, fig4 or all")->required();
    auto *validate = app.add_subcommand("validate", "closed form against the linear-solve oracle");
    auto *calibrate = app.add_subcommand("calibrate", "search couplings g1, g2 that meet the routing targets");
    for (auto *sub : {steady, spectrum, route, sweep_cmd, figure, validate, calibrate})
        sub->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Success : ConfigFailure;
    }

    try {
        if (oracle)
            overrides.push_back("evaluation_path=linear-solve");
        if (!output_dir.empty())
            overrides.push_back("output_dir=" + output_dir);
        const RunConfig config = parse_config(config_path, overrides, env);

        if (steady->parsed())
            return cmd_steady(config, out);
        if (spectrum->parsed())
            return cmd_spectrum(config, out, err);
        if (route->parsed())
            return cmd_route(config, out);
        if (sweep_cmd->parsed())
            return cmd_sweep(config, out, err);
        if (figure->parsed())
            return cmd_figure(config, figure_id, out);
        if (validate->parsed())
            return cmd_validate(config, out);
        return cmd_calibrate(config, out);
    } catch (const ConfigError &e) {
        err << "configuration error: " << e.what() << "\n";
        return ConfigFailure;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return PhysicsFailure;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return PhysicsFailure;
    }
}

} // namespace omrouter::cli
