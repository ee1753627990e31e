#pragma once

#include "adopt/types.hpp"
#include "adopt/vec.hpp"

namespace adopt {

// Pre-technology optimum of the worker-job match.
struct AutarkySolution {
    TaskVector x_A;      // optimal task bundle, g(x_A) = B
    PriceVector p_A;     // supporting prices, parallel to grad F(x_A)
    double phi = 0.0;    // productivity index
    double output = 0.0; // Y_A = F(x_A)
    double rho_A = 0.0;  // unit revenue at p_A
    TaskVector shares;   // resource shares omega_i, sum to 1
};

// Phi = sum_j s_j^{(sigma-1)/(gamma+sigma)} theta_j^{(gamma+1)/(gamma+sigma)}.
double productivity_index(const WorkerJob& w);

// Closed-form autarky solution:
//   x_A,i = B s_i^{sigma/(gamma+sigma)} theta_i^{gamma/(gamma+sigma)} / Phi^{gamma/(gamma+1)}
//   p_A,i proportional to (theta_i / s_i)^{1/(gamma+sigma)}  (unit norm)
//   omega_i = s_i^{(sigma-1)/(gamma+sigma)} theta_i^{(gamma+1)/(gamma+sigma)} / Phi.
// Near-zero theta_i/s_i ratios are clipped to 1e-12 before exponentiation:
// the exponent 1/(gamma+sigma) can reach 500.
AutarkySolution solve_autarky(const WorkerJob& w);

// Y_A / B = Phi^{(gamma+sigma)/((sigma-1)(gamma+1))}, computed as
// F(x_A)/B from the closed-form allocation.
double autarky_output_per_budget(const WorkerJob& w);

// d omega_i / d s_i = [(sigma-1) / ((gamma+sigma) s_i)] omega_i (1 - omega_i).
// Positive iff sigma > 1 (Jevons: substitutable tasks reward skill with time).
double jevons_share_derivative(const WorkerJob& w, std::size_t i);

}  // namespace adopt
