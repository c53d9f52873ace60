#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace chf::cli {

enum class Format { json, csv };

struct Range {
    double a = 0.0;
    double b = 0.0;
    int steps = 0;
    std::vector<double> points() const;  // steps points from a to b inclusive
};

struct RunConfig {
    std::string command;  // det | asymp | painleve | verify | moments | sweep
    double alpha = 0.0;
    double beta_im = 0.0;
    std::vector<double> r;
    std::vector<double> gamma;
    std::optional<double> t;
    std::optional<Range> t_range;
    int order = 48;
    double tol = 1e-9;
    std::optional<double> t0;
    double r1 = 1.0;
    double r2 = 2.0;
    double fd_step = 1e-3;
    std::string out;  // empty: stdout
    Format format = Format::json;
    // sweep
    std::string sweep_command;
    std::string sweep_over;  // alpha | beta-im | t | r1 | r2 | gamma.K
    std::optional<Range> sweep_range;

    std::vector<double> times() const;
};

// Key/value view used by config files, JSON inputs and re-runs.
using KeyValues = std::map<std::string, std::string>;

const std::vector<std::string>& known_keys();

// Thrown by parse_config for --help.
struct HelpRequested {};

// Throws ConfigError. Flags override config-file values.
RunConfig parse_config(int argc, const char* const* argv);
// Builds and validates a RunConfig from key/value pairs.
RunConfig config_from_keys(const KeyValues& kv);
// Reads a flat key=value file, or the "inputs" object of a JSON report.
KeyValues read_config_file(const std::string& path);
void validate(const RunConfig& rc);
// The sweep's subcommand configuration at one sweep value.
RunConfig sweep_point(const RunConfig& rc, double value);
std::string usage();

nlohmann::ordered_json inputs_json(const RunConfig& rc);

struct Report {
    std::string command;
    nlohmann::ordered_json inputs;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();  // merged into results
    nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
    bool passed = true;
    std::string failure;  // set when passed is false
};

Report run(const RunConfig& rc);

std::string render(const Report& rep, Format fmt);
void emit(const Report& rep, const RunConfig& rc);
std::string error_json(const std::string& command, const std::string& kind, const std::string& message);
// Full driver: parse, run, emit. Returns the process exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string format_double(double v);

}  // namespace chf::cli
