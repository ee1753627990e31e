#pragma once

#include <cstdint>
#include <functional>
#include <limits>

#include "adopt/types.hpp"
#include "adopt/vec.hpp"

namespace adopt {

// Value and gradient of F or g at a point. `unbounded_gradient` is set when a
// CES marginal product diverges at a zero component (the gradient entry is
// +inf then, or meaningless when the value itself degenerates to 0).
struct Eval {
    double value = 0.0;
    TaskVector grad;
    bool unbounded_gradient = false;
};

// CES production function
//   F(x) = (sum_i theta_i^{1/sigma} x_i^{(sigma-1)/sigma})^{sigma/(sigma-1)},
// homogeneous of degree one. For sigma < 1 any zero component forces F = 0.
double ces_output(const TaskVector& x, const WorkerJob& w);
Eval ces_eval(const TaskVector& x, const WorkerJob& w);

// CET resource-use function
//   g(x) = (sum_i s_i^{-1/gamma} x_i^{(gamma+1)/gamma})^{gamma/(gamma+1)},
// convex, increasing, homogeneous of degree one, g(0) = 0.
double cet_cost(const TaskVector& x, const WorkerJob& w);
Eval cet_eval(const TaskVector& x, const WorkerJob& w);

// Unit revenue rho(p) = (sum_i s_i p_i^{gamma+1})^{1/(gamma+1)}: the support
// function of the unit-budget PPS. Homogeneous of degree one in p; accepts
// any nonnegative nonzero p.
double unit_revenue(const TaskVector& p, const WorkerJob& w);
double unit_revenue(const PriceVector& p, const WorkerJob& w);

// Exact maximizer of p.x over { g(x) <= B }:
//   x_i = B s_i p_i^gamma / (sum_j s_j p_j^{gamma+1})^{gamma/(gamma+1)}.
// Satisfies g(x) = B and p.x = B rho(p); degree-0 homogeneous in p, so raw
// gradients can be passed directly. This is the linear-maximization oracle
// over the autarky PPS.
TaskVector revenue_maximizer(const TaskVector& p, const WorkerJob& w);

// Smooth concave objective: returns the value at z and, when grad != nullptr,
// fills the gradient.
using Objective = std::function<double(const TaskVector& z, TaskVector* grad)>;

struct SolverOptions {
    double rel_tol = 1e-10;    // relative objective improvement stop
    double kkt_tol = 1e-8;     // relative KKT residual contract
    long max_iters = 100000;   // total across restarts
    int restarts = 8;
    std::uint64_t seed = 0x5EEDD1CEULL;
    const TaskVector* hint = nullptr;  // warm start (task space)
};

struct SolveDiagnostics {
    long iterations = 0;
    double kkt_residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    int restarts_used = 0;
};

struct MaximizeResult {
    TaskVector x;
    double value = 0.0;
    SolveDiagnostics diag;
};

// Maximize objective(x + shift) over { x >= 0 : g(x) <= effective_budget }.
// Multiplicative-weights ascent on the direction simplex: homogeneity of g
// puts the optimum on the frontier whenever the objective is increasing, so
// x = (effective_budget / g(u)) u with u in the simplex. Runs
// `opts.restarts` starts (first from the hint or uniform, the rest random)
// and keeps the best; convergence requires the relative KKT residual below
// opts.kkt_tol. Throws SolverError when the iteration cap is exhausted
// without meeting the contract.
MaximizeResult concave_maximize(const Objective& objective, const WorkerJob& w,
                                double effective_budget, const TaskVector& shift,
                                const SolverOptions& opts = {});

}  // namespace adopt
