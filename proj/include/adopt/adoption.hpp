#pragma once

#include <cstdint>

#include "adopt/autarky.hpp"
#include "adopt/model_core.hpp"
#include "adopt/types.hpp"

namespace adopt {

enum class Regime { NoAdoption, Partial, AllIn };

const char* regime_name(Regime r);

struct AdoptionSolution {
    double lambda_star = 0.0;  // supervision share of the budget
    TaskVector x_H;            // human bundle, g(x_H) <= (1-lambda) B
    TaskVector z_star;         // combined bundle x_H + lambda B chi t
    double output = 0.0;
    PriceVector p_star;        // normalized grad F(z_star)
    Regime regime = Regime::NoAdoption;
    double chi0 = 0.0;         // entry threshold for this direction
    double chi100 = 0.0;       // all-in threshold (may be +inf)
    SolveDiagnostics diag;     // worst inner-solve diagnostics (partial regime)
};

struct ThresholdPair {
    double chi0 = 0.0;
    double chi100 = 0.0;
    double c = 0.0;        // isoquant scaling F(x_A)/F(t)
    bool collinear = false;  // t collinear with x_A: all three coincide
};

struct AdoptionOptions {
    double lambda_tol = 1e-10;  // golden-section bracket width on lambda
    SolverOptions inner;        // inner concave_maximize options
};

// chi g(t) > 1, strict: the technology point lies outside the worker's PPS.
// Independent of the budget.
bool absolute_advantage(const Technology& tech, const WorkerJob& w);

// Point on the PPF in direction t: (B / g(t)) t.
TaskVector direction_bundle(const TaskVector& t, const WorkerJob& w);

// General adoption threshold rho(p) / (p.t); +inf when p.t = 0.
double adoption_threshold(const TaskVector& t, const PriceVector& p,
                          const WorkerJob& w);

// Entry threshold chi_0(t) = Phi^{1/(gamma+1)} / sum_i t_i (theta_i/s_i)^{1/(gamma+sigma)}.
// Equals rho(p_A)/(p_A.t). Adoption requires chi strictly above it.
double entry_threshold(const TaskVector& t, const WorkerJob& w);

// All-in threshold
//   chi_100(t) = (sum_i s_i theta_i^{(gamma+1)/sigma} t_i^{-(gamma+1)/sigma})^{1/(gamma+1)}
//                / sum_i theta_i^{1/sigma} t_i^{1-1/sigma},
// i.e. rho(p_100)/(p_100.t) with p_100 = normalized grad F(t). Returns +inf
// when any t_i = 0: the CES marginal product diverges there, so the corner
// condition never binds.
double corner_threshold(const TaskVector& t, const WorkerJob& w);

// (chi_0, c, chi_100) with chi_0 < c < chi_100 strictly unless t is collinear
// with x_A (then all three coincide and `collinear` is set). Requires
// F(t) > 0 and p_A.t > 0.
ThresholdPair threshold_pair(const TaskVector& t, const WorkerJob& w);

// Full single-technology adoption problem
//   max_{lambda, x_H} F(x_H + lambda B chi t)  s.t.  g(x_H) <= (1-lambda) B.
// Regimes: chi <= chi_0 -> no adoption (ties resolve to no-adoption);
// chi >= chi_100 (finite) -> all-in; otherwise partial, with lambda* found by
// golden-section on the strictly concave value function f(lambda), inner
// maximization via concave_maximize.
AdoptionSolution optimal_intensity(const Technology& tech, const WorkerJob& w,
                                   const AdoptionOptions& opts = {});

}  // namespace adopt
