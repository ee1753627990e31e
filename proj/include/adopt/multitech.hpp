#pragma once

#include <vector>

#include "adopt/model_core.hpp"
#include "adopt/types.hpp"

namespace adopt {

struct MultiTechSolution {
    std::vector<double> lambdas;  // per-technology supervision shares, sum <= 1
    TaskVector x_H;               // human bundle, g(x_H) <= (1 - sum lambda) B
    TaskVector z_star;            // x_H + sum_k lambda_k B chi_k t_k
    double output = 0.0;
    PriceVector p_star;           // normalized grad F(z_star)
    double rho_K_at_p_star = 0.0;
    long iterations = 0;          // conditional-gradient outer iterations
    double gap = 0.0;             // final Frank-Wolfe duality gap
    bool converged = false;
};

struct MultiTechOptions {
    double gap_tol = 1e-8;  // relative to F(z)
    long max_iters = 100000;
};

// Support function of the K-technology PPS per unit budget:
//   rho_K(p) = max( rho(p), max_k chi_k p.t_k ).
// Weakly increasing in the technology set; homogeneous of degree one in p.
double k_unit_revenue(const TaskVector& p, const WorkerJob& w,
                      const std::vector<Technology>& techs);
double k_unit_revenue(const PriceVector& p, const WorkerJob& w,
                      const std::vector<Technology>& techs);

// Maximize F over conv(X_A u {B chi_k t_k}) by conditional gradient
// (Frank-Wolfe) with the exact linear oracle: the better of the closed-form
// CET revenue maximizer and the best technology point. Atom weights are kept
// explicitly and re-optimized over their simplex each round (fully corrective
// step), which is what makes the recovered (lambda_k, x_H) decomposition
// accurate. Ties among equal-value technology points break to the lowest
// index. Converges when the duality gap drops below gap_tol * F(z); throws
// SolverError past max_iters.
MultiTechSolution solve_multi(const WorkerJob& w,
                              const std::vector<Technology>& techs,
                              const MultiTechOptions& opts = {});

struct EntryDecision {
    bool adopted = false;
    double threshold = 0.0;       // rho_K(p*_K) / (p*_K . t_cand), may be +inf
    double threshold_prev = 0.0;  // same prices, last adopted tech dropped
    PriceVector p_star;           // shadow prices of the adopted-set optimum
};

// Entry test for the candidate against the K-technology optimum: adopted iff
// chi strictly exceeds rho_K(p*_K)/(p*_K . t). With an empty adopted set this
// is exactly the single-technology entry threshold at autarky prices.
// `threshold_prev` re-evaluates the bar at the same prices with the last
// adopted technology removed; rho_K(p) >= rho_{K-1}(p) pointwise, so
// threshold >= threshold_prev always.
EntryDecision entry_next(const WorkerJob& w,
                         const std::vector<Technology>& adopted,
                         const Technology& candidate);

// All-in test for the candidate: at p_100 = normalized grad F(t_cand), the
// candidate point must beat every human bundle and every adopted technology
// point. Zero-component candidate directions always return false.
bool all_in_next(const WorkerJob& w, const std::vector<Technology>& adopted,
                 const Technology& candidate);

}  // namespace adopt
