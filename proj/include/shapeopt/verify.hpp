#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace shapeopt::verify {

struct Options {
    std::uint64_t seed = 1;
    int instances = 50;  ///< random instances per property check
};

struct CheckInfo {
    std::string id;       ///< stable identifier, "<group>.<name>"
    std::string summary;  ///< the property being checked
};

struct CheckResult {
    std::string id;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

/// Suites: "geometry", "spectral", "newton", "all". Unknown names throw InvalidArgument.
std::vector<CheckInfo> list_checks(std::string_view suite);

/// Runs the suite's checks; results sorted by id.
std::vector<CheckResult> run_suite(std::string_view suite, const Options& options = {});

/// Runs one check by id; throws InvalidArgument for an unknown id.
CheckResult run_check(std::string_view id, const Options& options = {});

} // namespace shapeopt::verify
