#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ddestab/model.hpp"

namespace ddestab {

// Plain-text scenario config: one `key=value` pair per line, keys
// beta0, n, delta, gamma, r; blank lines and '#' comments allowed.

struct ConfigError {
    int line;  // 1-based; 0 when not tied to a line (e.g. missing key)
    std::string message;
};

struct ConfigResult {
    std::optional<Parameters> params;
    std::vector<ConfigError> errors;

    bool ok() const { return params.has_value(); }
};

ConfigResult parse_parameters_text(std::string_view text);
ConfigResult load_parameters_file(const std::string& path);

}  // namespace ddestab
