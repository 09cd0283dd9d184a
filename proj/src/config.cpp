#include "ddestab/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace ddestab {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool parse_number(std::string_view s, double& out) {
    const std::string buf(s);
    char* end = nullptr;
    out = std::strtod(buf.c_str(), &end);
    return end == buf.c_str() + buf.size() && !buf.empty();
}

}  // namespace

ConfigResult parse_parameters_text(std::string_view text) {
    ConfigResult result;
    std::map<std::string, double> seen;

    int lineno = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            result.errors.push_back({lineno, "expected key=value"});
            continue;
        }
        const std::string key{trim(line.substr(0, eq))};
        const std::string_view value = trim(line.substr(eq + 1));

        if (key != "beta0" && key != "n" && key != "delta" && key != "gamma" && key != "r") {
            result.errors.push_back({lineno, "unknown key '" + key + "'"});
            continue;
        }
        if (seen.count(key)) {
            result.errors.push_back({lineno, "duplicate key '" + key + "'"});
            continue;
        }
        double v = 0.0;
        if (!parse_number(value, v)) {
            result.errors.push_back({lineno, "malformed number '" + std::string(value) + "'"});
            continue;
        }
        seen[key] = v;
    }

    for (const char* key : {"beta0", "n", "delta", "gamma", "r"})
        if (!seen.count(key))
            result.errors.push_back({0, std::string("missing key '") + key + "'"});

    if (!result.errors.empty()) return result;

    try {
        result.params = Parameters::make(seen["beta0"], seen["n"], seen["delta"],
                                         seen["gamma"], seen["r"]);
    } catch (const std::domain_error& e) {
        result.errors.push_back({0, e.what()});
    }
    return result;
}

ConfigResult load_parameters_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ConfigResult r;
        r.errors.push_back({0, "cannot open '" + path + "'"});
        return r;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_parameters_text(buf.str());
}

}  // namespace ddestab
