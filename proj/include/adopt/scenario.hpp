#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adopt/types.hpp"

namespace adopt {

struct GridRange {
    double min = 0.0;
    double max = 0.0;
    long steps = 0;
};

struct MonteCarloParams {
    long samples = 100000;
    std::uint64_t seed = 42;
};

// Declarative run description loaded from JSON. Artifact names accepted in
// `outputs`: autarky, adoption, sweep, intensity, half_angle, measure,
// curvature, multi.
struct Scenario {
    WorkerJob worker;
    std::vector<Technology> technologies;
    std::optional<GridRange> chi_grid;        // sweeps.chi
    std::optional<GridRange> curvature_grid;  // sweeps.curvature (gamma+sigma)
    std::optional<MonteCarloParams> monte_carlo;
    std::vector<std::string> outputs;
};

// Parses and validates; throws ValidationError with a field-level path on any
// schema or invariant violation. Technology directions are normalized to unit
// length, with a warning on stderr when the input deviated by more than 1e-6.
Scenario load_scenario(const std::string& path);

// Grid points of a chi sweep (linear) and a curvature sweep (geometric).
std::vector<double> linear_grid(const GridRange& g);
std::vector<double> geometric_grid(const GridRange& g);

}  // namespace adopt
