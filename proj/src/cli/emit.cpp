#include <fstream>
#include <iostream>
#include <sstream>

#include "chf/cli.hpp"
#include "chf/errors.hpp"

namespace chf::cli {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

}  // namespace

std::string render(const Report& rep, Format fmt) {
    if (fmt == Format::csv) {
        std::ostringstream os;
        for (std::size_t i = 0; i < rep.columns.size(); ++i) os << (i ? "," : "") << csv_field(rep.columns[i]);
        os << "\n";
        for (const auto& row : rep.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
            os << "\n";
        }
        return os.str();
    }
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["command"] = rep.command;
    j["inputs"] = rep.inputs;
    nlohmann::ordered_json results;
    results["columns"] = rep.columns;
    results["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rep.rows) results["rows"].push_back(row);
    for (const auto& [k, v] : rep.extra.items()) results[k] = v;
    j["results"] = results;
    j["diagnostics"] = rep.diagnostics;
    return j.dump(2) + "\n";
}

void emit(const Report& rep, const RunConfig& rc) {
    const std::string text = render(rep, rc.format);
    if (rc.out.empty()) {
        std::cout << text << std::flush;
        if (!std::cout) throw IoError("failed writing to stdout");
        return;
    }
    std::ofstream f(rc.out, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + rc.out + "' for writing");
    f << text;
    f.close();
    if (!f) throw IoError("failed writing '" + rc.out + "'");
}

std::string error_json(const std::string& command, const std::string& kind, const std::string& message) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["command"] = command;
    j["error"] = {{"kind", kind}, {"message", message}};
    return j.dump();
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig rc;
    try {
        rc = parse_config(argc, argv);
    } catch (const HelpRequested&) {
        out << usage();
        return 0;
    } catch (const ConfigError& e) {
        err << "chfdet: config error: " << e.what() << "\n";
        return 2;
    }
    try {
        const Report rep = run(rc);
        if (rc.out.empty()) {
            out << render(rep, rc.format) << std::flush;
        } else {
            emit(rep, rc);
        }
        if (!rep.passed) {
            err << error_json(rc.command, "verification", rep.failure) << "\n";
            return 1;
        }
    } catch (const ConfigError& e) {
        err << "chfdet: config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << error_json(rc.command, e.kind(), e.what()) << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << error_json(rc.command, "internal", e.what()) << "\n";
        return 1;
    }
    return 0;
}

}  // namespace chf::cli
