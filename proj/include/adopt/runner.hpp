#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace adopt {

// Command-line overrides for scenario values.
struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<long> samples;
    std::optional<double> tolerance;  // lambda tolerance, default 1e-10
};

// Executes a scenario: verbs are solve, sweep, cone, multi. Writes the
// requested CSV artifacts plus manifest.json into out_dir. Returns 0 on
// success, 2 on validation errors (with a field-level diagnostic on stderr),
// 3 on solver failure.
int run(const std::string& verb, const std::string& scenario_path,
        const std::string& out_dir, const RunOverrides& overrides = {});

}  // namespace adopt
