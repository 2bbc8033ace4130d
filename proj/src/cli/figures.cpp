#include "omrouter/cli/figures.hpp"

#include <cstdio>
#include <fstream>

namespace omrouter::cli {

namespace {

struct Trace
{
    std::vector<double> r, t, s_thermal, s_vacuum;
};

std::vector<double> ratio_grid(const RunConfig &c)
{
    const Eigen::ArrayXd x = frequency_grid(c.figure_min, c.figure_max, c.figure_points);
    return {x.data(), x.data() + x.size()};
}

// Spectrum of the resolved parameter set at one microwave power. Any failed
// node aborts the figure.
Trace trace_at(const RunConfig &c, double power_p, const std::vector<double> &ratios)
{
    const SystemParams p = resolve_params(c, power_p);
    std::vector<double> omega(ratios.size());
    for (std::size_t k = 0; k < ratios.size(); ++k)
        omega[k] = ratios[k] * p.omega_m;
    const SpectrumScan scan = scan_spectrum(p, omega, c.analysis.path, c.steady);
    if (!scan.ok()) {
        const auto &e = scan.errors.front();
        throw SingularPoint("spectrum failed at omega/omega_m = " + format_float(ratios[e.index]) + ": " +
                            e.message);
    }
    Trace tr;
    for (const auto &pt : scan.points) {
        tr.r.push_back(pt.r_refl);
        tr.t.push_back(pt.t_trans);
        tr.s_thermal.push_back(pt.s_thermal);
        tr.s_vacuum.push_back(pt.s_vacuum);
    }
    return tr;
}

std::string power_tag(double watts)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6gnW", watts * 1e9);
    return buf;
}

std::vector<std::filesystem::path> fig2(const RunConfig &c, const std::filesystem::path &dir)
{
    const auto x = ratio_grid(c);
    const Trace off = trace_at(c, 0.0, x);
    const Trace on = trace_at(c, c.params.power_p, x);
    const auto t_path = dir / "fig2_transmission.csv";
    const auto r_path = dir / "fig2_reflection.csv";
    write_file(t_path, to_csv({{"omega_over_omega_m[1]", "T_pump_off[1]", "T_pump_on[1]"}, {x, off.t, on.t}}));
    write_file(r_path, to_csv({{"omega_over_omega_m[1]", "R_pump_off[1]", "R_pump_on[1]"}, {x, off.r, on.r}}));
    return {t_path, r_path};
}

std::vector<std::filesystem::path> fig3(const RunConfig &c, const std::filesystem::path &dir)
{
    const auto x = ratio_grid(c);
    Table table{{"omega_over_omega_m[1]"}, {x}};
    for (double power : c.fig3_powers) {
        table.header.push_back("T_at_" + power_tag(power) + "[1]");
        table.columns.push_back(trace_at(c, power, x).t);
    }
    const auto path = dir / "fig3_transmission.csv";
    write_file(path, to_csv(table));
    return {path};
}

std::vector<std::filesystem::path> fig4(const RunConfig &c, const std::filesystem::path &dir)
{
    const auto x = ratio_grid(c);
    const Trace off = trace_at(c, 0.0, x);
    const Trace on = trace_at(c, c.params.power_p, x);
    const auto path = dir / "fig4_noise.csv";
    write_file(path, to_csv({{"omega_over_omega_m[1]", "S_vacuum_pump_off[quanta]", "S_thermal_pump_off[quanta]",
                              "S_vacuum_pump_on[quanta]", "S_thermal_pump_on[quanta]"},
                             {x, off.s_vacuum, off.s_thermal, on.s_vacuum, on.s_thermal}}));
    return {path};
}

} // namespace

std::string format_float(double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", value);
    return buf;
}

std::string to_csv(const Table &table)
{
    if (table.header.size() != table.columns.size())
        throw InternalError("to_csv: header and column counts differ");
    std::string out;
    for (std::size_t j = 0; j < table.header.size(); ++j)
        out += (j ? "," : "") + table.header[j];
    out += '\n';
    const std::size_t rows = table.columns.empty() ? 0 : table.columns.front().size();
    for (const auto &col : table.columns)
        if (col.size() != rows)
            throw InternalError("to_csv: ragged columns");
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < table.columns.size(); ++j) {
            if (j)
                out += ',';
            out += format_float(table.columns[j][i]);
        }
        out += '\n';
    }
    return out;
}

void write_file(const std::filesystem::path &path, const std::string &content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
}

std::filesystem::path write_config_echo(const std::filesystem::path &dir, const RunConfig &config)
{
    const auto path = dir / "config.resolved";
    write_file(path, resolved_config_text(config));
    return path;
}

const std::vector<std::string> &figure_ids()
{
    static const std::vector<std::string> ids{"fig2", "fig3", "fig4"};
    return ids;
}

std::vector<std::filesystem::path> run_figure(std::string_view figure_id, const RunConfig &config)
{
    const std::filesystem::path dir = config.output_dir;
    std::vector<std::filesystem::path> written;
    auto run = [&](std::string_view id) {
        std::vector<std::filesystem::path> files;
        if (id == "fig2")
            files = fig2(config, dir);
        else if (id == "fig3")
            files = fig3(config, dir);
        else
            files = fig4(config, dir);
        written.insert(written.end(), files.begin(), files.end());
    };

    if (figure_id == "all") {
        for (const auto &id : figure_ids())
            run(id);
    } else if (std::find(figure_ids().begin(), figure_ids().end(), figure_id) != figure_ids().end()) {
        run(figure_id);
    } else {
        throw ConfigError("unknown figure '" + std::string(figure_id) + "' (expected fig2, fig3, fig4 or all)");
    }
    written.push_back(write_config_echo(dir, config));
    return written;
}

} // namespace omrouter::cli
