#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "omrouter/cli/config.hpp"

namespace omrouter::cli {

/// Column-major numeric table written as CSV: one header row, then one row
/// per sample, `%.16e` floats, LF line endings.
struct Table
{
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};

std::string to_csv(const Table &table);

/// Writes `content` to `path`, creating parent directories. Throws
/// std::runtime_error on I/O failure.
void write_file(const std::filesystem::path &path, const std::string &content);

/// Writes the resolved configuration to `<dir>/config.resolved`.
std::filesystem::path write_config_echo(const std::filesystem::path &dir, const RunConfig &config);

std::string format_float(double value);

/// Known figure identifiers, in run order.
const std::vector<std::string> &figure_ids();

/// Regenerates one figure (or "all") into config.output_dir and returns the
/// files written, config echo included. Throws ConfigError for an unknown id.
std::vector<std::filesystem::path> run_figure(std::string_view figure_id, const RunConfig &config);

} // namespace omrouter::cli
