#pragma once

#include <functional>

#include "adopt/types.hpp"
#include "adopt/vec.hpp"

namespace adopt::oracle {

// Brute-force verification tools. These deliberately re-derive everything
// from the primitive definitions (own CET evaluation, own frontier
// parametrization) and share only the type definitions with the main
// library, so a transcription error in a closed form cannot hide here.

using ScalarField = std::function<double(const TaskVector&)>;
using ScalarFn = std::function<double(double)>;

struct GridSpec {
    int resolution = 1000;  // points per angular dimension; >= 100 for acceptance runs
};

struct GridResult {
    TaskVector x;
    double value = 0.0;
    int resolution = 0;
    double err_bound = 0.0;  // O(1/resolution), from the scanned Lipschitz estimate
};

// Maximize `objective` over the PPF { x : g(x) = budget } by scanning
// positive-orthant sphere directions (angle grid, N <= 3) and mapping each
// direction u to the frontier point (budget/g(u)) u.
GridResult grid_maximize(const ScalarField& objective, const WorkerJob& w,
                         double budget, const GridSpec& grid);

// Golden-section maximizer on [lo, hi]; unique argmax for strictly concave f.
double golden_section(const ScalarFn& f, double lo, double hi, double tol);

// Central finite differences, one coordinate at a time. Requires strictly
// positive x and h in [1e-8, 1e-4].
TaskVector finite_diff_gradient(const ScalarField& f, const TaskVector& x,
                                double h);

}  // namespace adopt::oracle
