#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "disclose/json_io.hpp"

namespace disclose::cli {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 1,
    kInvariantFailure = 2,
    kUnsupportedBoundary = 3,
    kCertificateFailure = 4,
    kStatisticalFailure = 5,
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SweepSpec {
    SweepAxis axis = SweepAxis::S;
    std::vector<double> values;
};

// Validated run configuration. The raw JSON is kept for hashing.
struct RunConfig {
    json raw;
    Prior prior;
    int n = 2;
    double alpha = 0.5;
    std::optional<double> s;
    std::optional<CostDistribution> cost;
    std::optional<SweepSpec> sweep;
    std::uint64_t consumers = 1000000;
    int bins = 20;
    int doublings = 6;
};

// Throws ConfigError on any schema or domain violation.
RunConfig parse_config(const json& j);

// Entry point; argv[0] is the program name. Output goes to `out` unless --out is given.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace disclose::cli
