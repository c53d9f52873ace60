#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "chf/cli.hpp"
#include "chf/errors.hpp"
#include "chf/kernel.hpp"
#include "chf/painleve.hpp"

namespace chf::cli {

namespace {

const std::set<std::string> kCommands = {"det", "asymp", "painleve", "verify", "moments", "sweep"};
const std::set<std::string> kSweepable = {"det", "asymp", "painleve", "verify", "moments"};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

[[noreturn]] void bad(const std::string& key, const std::string& msg) {
    throw ConfigError("key '" + key + "': " + msg);
}

double to_double(const std::string& key, const std::string& s) {
    const std::string v = trim(s);
    if (v.empty()) bad(key, "empty value");
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size()) bad(key, "not a number: '" + v + "'");
    if (!std::isfinite(d)) bad(key, "value must be finite: '" + v + "'");
    return d;
}

int to_int(const std::string& key, const std::string& s) {
    const std::string v = trim(s);
    char* end = nullptr;
    const long d = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || end != v.c_str() + v.size()) bad(key, "not an integer: '" + v + "'");
    if (d < -1000000000L || d > 1000000000L) bad(key, "integer out of range");
    return static_cast<int>(d);
}

// "0=-1,1=0,2=1" or "-1,0,1".
std::vector<double> to_list(const std::string& key, const std::string& s) {
    const std::vector<std::string> items = split(trim(s), ',');
    if (items.empty()) bad(key, "empty list");
    const bool indexed = items.front().find('=') != std::string::npos;
    std::vector<double> out(items.size());
    std::vector<bool> seen(items.size(), false);
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto eq = items[i].find('=');
        if ((eq != std::string::npos) != indexed) bad(key, "mixes indexed and plain entries");
        if (!indexed) {
            out[i] = to_double(key, items[i]);
            continue;
        }
        const int idx = to_int(key, items[i].substr(0, eq));
        if (idx < 0 || static_cast<std::size_t>(idx) >= items.size()) {
            bad(key, "index " + std::to_string(idx) + " outside 0.." + std::to_string(items.size() - 1));
        }
        if (seen[idx]) bad(key, "index " + std::to_string(idx) + " given twice");
        seen[idx] = true;
        out[idx] = to_double(key, items[i].substr(eq + 1));
    }
    return out;
}

Range to_range(const std::string& key, const std::string& s) {
    const std::vector<std::string> p = split(trim(s), ':');
    if (p.size() != 3) bad(key, "expected a:b:steps, got '" + s + "'");
    Range r{to_double(key, p[0]), to_double(key, p[1]), to_int(key, p[2])};
    if (r.steps < 0) bad(key, "steps must be >= 0");
    if (r.steps > 100000) bad(key, "steps must be <= 100000");
    if (r.steps > 1 && !(r.b > r.a)) bad(key, "need a < b when steps > 1");
    return r;
}

std::string join_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(i) + "=" + format_double(v[i]);
    }
    return s;
}

std::string range_string(const Range& r) {
    return format_double(r.a) + ":" + format_double(r.b) + ":" + std::to_string(r.steps);
}

bool needs_configuration(const std::string& cmd) {
    return cmd == "det" || cmd == "asymp" || cmd == "painleve" || cmd == "verify";
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> Range::points() const {
    std::vector<double> out;
    for (int i = 0; i < steps; ++i) {
        out.push_back(steps == 1 ? a : (i == steps - 1 ? b : a + (b - a) * i / (steps - 1)));
    }
    return out;
}

std::vector<double> RunConfig::times() const {
    if (t_range) return t_range->points();
    if (t) return {*t};
    return {};
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "command", "alpha", "beta-im", "r",      "gamma",  "t",
        "t-range", "order", "tol",     "t0",     "r1",     "r2",
        "fd-step", "out",   "format",  "sweep-command", "sweep-over", "sweep-range"};
    return keys;
}

KeyValues read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    const std::set<std::string> known(known_keys().begin(), known_keys().end());
    KeyValues kv;

    if (trim(text).rfind('{', 0) == 0) {
        // A previous JSON report: take its inputs block.
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const std::exception& e) {
            throw ConfigError("config file '" + path + "': invalid JSON: " + e.what());
        }
        const nlohmann::json& in_obj = j.contains("inputs") ? j["inputs"] : j;
        if (!in_obj.is_object()) throw ConfigError("config file '" + path + "': inputs is not an object");
        for (const auto& [k, v] : in_obj.items()) {
            if (!known.count(k)) throw ConfigError("config file '" + path + "': unknown key '" + k + "'");
            if (v.is_string()) {
                kv[k] = v.get<std::string>();
            } else if (v.is_number_integer()) {
                kv[k] = std::to_string(v.get<long long>());
            } else if (v.is_number()) {
                kv[k] = format_double(v.get<double>());
            } else if (v.is_array()) {
                std::vector<double> xs;
                for (const auto& x : v) {
                    if (!x.is_number()) throw ConfigError("config file '" + path + "': key '" + k + "' must hold numbers");
                    xs.push_back(x.get<double>());
                }
                kv[k] = join_list(xs);
            } else {
                throw ConfigError("config file '" + path + "': unsupported value for key '" + k + "'");
            }
        }
        return kv;
    }

    std::istringstream lines(text);
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = "config file '" + path + "' line " + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(where + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        if (!known.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
        if (kv.count(key)) throw ConfigError(where + ": key '" + key + "' repeated");
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

RunConfig config_from_keys(const KeyValues& kv) {
    const std::set<std::string> known(known_keys().begin(), known_keys().end());
    RunConfig rc;
    for (const auto& [k, v] : kv) {
        if (!known.count(k)) throw ConfigError("unknown key '" + k + "'");
        if (k == "command") rc.command = trim(v);
        else if (k == "alpha") rc.alpha = to_double(k, v);
        else if (k == "beta-im") rc.beta_im = to_double(k, v);
        else if (k == "r") rc.r = to_list(k, v);
        else if (k == "gamma") rc.gamma = to_list(k, v);
        else if (k == "t") rc.t = to_double(k, v);
        else if (k == "t-range") rc.t_range = to_range(k, v);
        else if (k == "order") rc.order = to_int(k, v);
        else if (k == "tol") rc.tol = to_double(k, v);
        else if (k == "t0") rc.t0 = to_double(k, v);
        else if (k == "r1") rc.r1 = to_double(k, v);
        else if (k == "r2") rc.r2 = to_double(k, v);
        else if (k == "fd-step") rc.fd_step = to_double(k, v);
        else if (k == "out") rc.out = trim(v);
        else if (k == "format") {
            const std::string f = trim(v);
            if (f == "json") rc.format = Format::json;
            else if (f == "csv") rc.format = Format::csv;
            else bad(k, "format must be json or csv, got '" + f + "'");
        } else if (k == "sweep-command") rc.sweep_command = trim(v);
        else if (k == "sweep-over") rc.sweep_over = trim(v);
        else if (k == "sweep-range") rc.sweep_range = to_range(k, v);
    }
    validate(rc);
    return rc;
}

RunConfig sweep_point(const RunConfig& rc, double value) {
    RunConfig s = rc;
    s.command = rc.sweep_command;
    s.sweep_command.clear();
    s.sweep_over.clear();
    s.sweep_range.reset();
    const std::string& over = rc.sweep_over;
    if (over == "alpha") s.alpha = value;
    else if (over == "beta-im") s.beta_im = value;
    else if (over == "t") {
        s.t = value;
        s.t_range.reset();
    } else if (over == "r1") s.r1 = value;
    else if (over == "r2") s.r2 = value;
    else if (over.rfind("gamma.", 0) == 0) {
        const int k = to_int("sweep-over", over.substr(6));
        if (k < 0 || static_cast<std::size_t>(k) >= s.gamma.size()) {
            bad("sweep-over", "gamma index " + std::to_string(k) + " outside the configured gamma list");
        }
        s.gamma[k] = value;
    } else {
        bad("sweep-over", "must be alpha, beta-im, t, r1, r2 or gamma.K, got '" + over + "'");
    }
    return s;
}

void validate(const RunConfig& rc) {
    const std::string& cmd = rc.command;
    if (cmd.empty()) throw ConfigError("missing command (one of det, asymp, painleve, verify, moments, sweep)");
    if (!kCommands.count(cmd)) throw ConfigError("unknown command '" + cmd + "'");

    if (cmd == "sweep") {
        if (!kSweepable.count(rc.sweep_command)) {
            bad("sweep-command", "must be one of det, asymp, painleve, verify, moments");
        }
        if (!rc.sweep_range) bad("sweep-range", "required for sweep");
        if (rc.sweep_over.empty()) bad("sweep-over", "required for sweep");
        const std::vector<double> pts = rc.sweep_range->points();
        // Check the shape even when the sweep is empty.
        validate(sweep_point(rc, pts.empty() ? rc.sweep_range->a : pts.front()));
        for (double v : pts) validate(sweep_point(rc, v));
        return;
    }
    if (!rc.sweep_command.empty() || !rc.sweep_over.empty() || rc.sweep_range) {
        throw ConfigError("sweep-* keys only apply to the sweep command");
    }

    try {
        (void)KernelParams(rc.alpha, rc.beta_im);
    } catch (const Error& e) {
        throw ConfigError(std::string("kernel parameters: ") + e.what());
    }
    if (rc.t && rc.t_range) throw ConfigError("give either t or t-range, not both");
    if (!rc.t && !rc.t_range) throw ConfigError("one of t or t-range is required");
    const std::vector<double> ts = rc.times();
    for (double t : ts) {
        if (!(t >= 0.0)) bad(rc.t ? "t" : "t-range", "t must be >= 0");
    }
    if (rc.order < 4 || rc.order > 512) bad("order", "must lie in [4, 512]");
    if (!(rc.tol >= 1e-12 && rc.tol <= 1e-4)) bad("tol", "must lie in [1e-12, 1e-4]");
    if (!(rc.fd_step > 0.0 && rc.fd_step <= 0.1)) bad("fd-step", "must lie in (0, 0.1]");
    if (rc.t0 && !(*rc.t0 > 0.0 && *rc.t0 <= t_init_max)) {
        bad("t0", "must lie in (0, " + format_double(t_init_max) + "]");
    }

    if (cmd == "moments") {
        if (!(rc.r1 > 0.0)) bad("r1", "must be > 0");
        if (!(rc.r2 > rc.r1)) bad("r2", "must exceed r1");
        for (double t : ts) {
            if (!(t > 0.0)) bad(rc.t ? "t" : "t-range", "t must be > 0 for moments");
        }
        return;
    }

    if (needs_configuration(cmd)) {
        if (rc.r.empty()) bad("r", "required for " + cmd);
        try {
            (void)Configuration(rc.r, rc.gamma, 0.0);
        } catch (const Error& e) {
            throw ConfigError(std::string("configuration: ") + e.what());
        }
        const bool strict = cmd != "det";
        for (std::size_t k = 0; k < rc.gamma.size(); ++k) {
            const double g = rc.gamma[k];
            if (g < 0.0 || g > 1.0 || (strict && g == 1.0)) {
                bad("gamma", "gamma_" + std::to_string(k) + " = " + format_double(g) + " must lie in " +
                                 (strict ? "[0, 1)" : "[0, 1]") + " for " + cmd);
            }
        }
        if (cmd != "det") {
            for (double t : ts) {
                if (!(t > 0.0)) bad(rc.t ? "t" : "t-range", "t must be > 0 for " + cmd);
            }
        }
        if (cmd == "painleve" || cmd == "verify") {
            const double t0 = rc.t0 ? *rc.t0 : default_t0(rc.alpha);
            for (double t : ts) {
                if (!(t > t0)) bad(rc.t ? "t" : "t-range", "t must exceed the start time " + format_double(t0));
            }
        }
    }
}

nlohmann::ordered_json inputs_json(const RunConfig& rc) {
    nlohmann::ordered_json j;
    j["command"] = rc.command;
    j["alpha"] = rc.alpha;
    j["beta-im"] = rc.beta_im;
    if (!rc.r.empty()) j["r"] = rc.r;
    if (!rc.gamma.empty()) j["gamma"] = rc.gamma;
    if (rc.t) j["t"] = *rc.t;
    if (rc.t_range) j["t-range"] = range_string(*rc.t_range);
    j["order"] = rc.order;
    j["tol"] = rc.tol;
    if (rc.t0) j["t0"] = *rc.t0;
    j["r1"] = rc.r1;
    j["r2"] = rc.r2;
    j["fd-step"] = rc.fd_step;
    j["format"] = rc.format == Format::json ? "json" : "csv";
    if (rc.command == "sweep") {
        j["sweep-command"] = rc.sweep_command;
        j["sweep-over"] = rc.sweep_over;
        j["sweep-range"] = range_string(*rc.sweep_range);
    }
    return j;
}

namespace {

void add_options(CLI::App& app, KeyValues& raw, std::string& config_path) {
    app.add_option("command", raw["command"], "det | asymp | painleve | verify | moments | sweep");
    app.add_option("--config", config_path, "key=value file (or a JSON report to re-run)");
    app.add_option("--alpha", raw["alpha"], "alpha > -1/2");
    app.add_option("--beta-im", raw["beta-im"], "Im beta");
    app.add_option("--r", raw["r"], "endpoints, e.g. 0=-1,1=0,2=1");
    app.add_option("--gamma", raw["gamma"], "weights, e.g. 0=0.3,1=0.6");
    app.add_option("--t", raw["t"], "scale t");
    app.add_option("--t-range", raw["t-range"], "a:b:steps");
    app.add_option("--order", raw["order"], "Gauss-Legendre points per panel (default 48)");
    app.add_option("--tol", raw["tol"], "integrator tolerance (default 1e-9)");
    app.add_option("--t0", raw["t0"], "Painleve start time");
    app.add_option("--r1", raw["r1"], "moments: first endpoint (default 1)");
    app.add_option("--r2", raw["r2"], "moments: second endpoint (default 2)");
    app.add_option("--fd-step", raw["fd-step"], "moments: finite-difference step (default 1e-3)");
    app.add_option("--out", raw["out"], "output path (default stdout)");
    app.add_option("--format", raw["format"], "json | csv");
    app.add_option("--sweep-command", raw["sweep-command"], "sweep: command run at each point");
    app.add_option("--sweep-over", raw["sweep-over"], "sweep: alpha | beta-im | t | r1 | r2 | gamma.K");
    app.add_option("--sweep-range", raw["sweep-range"], "sweep: a:b:steps");
}

}  // namespace

std::string usage() {
    CLI::App app{"Fredholm determinants of the confluent hypergeometric kernel", "chfdet"};
    KeyValues raw;
    std::string path;
    add_options(app, raw, path);
    return app.help();
}

RunConfig parse_config(int argc, const char* const* argv) {
    CLI::App app{"Fredholm determinants of the confluent hypergeometric kernel", "chfdet"};
    KeyValues raw;
    std::string config_path;
    add_options(app, raw, config_path);
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success&) {
        throw HelpRequested{};
    } catch (const CLI::ParseError& e) {
        throw ConfigError(e.what());
    }
    KeyValues kv;
    if (!config_path.empty()) kv = read_config_file(config_path);
    for (const auto& key : known_keys()) {
        const std::string name = key == "command" ? "command" : "--" + key;
        if (app.count(name) > 0) kv[key] = raw[key];
    }
    return config_from_keys(kv);
}

}  // namespace chf::cli
