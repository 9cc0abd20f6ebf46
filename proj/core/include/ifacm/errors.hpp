#pragma once

#include <stdexcept>
#include <string>

namespace ifacm {

// Invalid experiment setup: bad split sizes, degenerate calibration,
// malformed configuration values. CLI exit code 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Problems with the data itself: unreadable files, malformed cells,
// schema mismatches, fits that cannot proceed. CLI exit code 2.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ifacm
