#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "adopt/types.hpp"

namespace adopt {

// Cone of technology adoption: directions t with p_A.t > rho/chi, a spherical
// cap centered on the autarky prices.
struct ConeSpec {
    PriceVector p_A;
    double rho = 1.0;  // unit revenue at p_A
    double chi = 0.0;  // capability under consideration
};

// arccos(rho/chi) for chi > rho; 0 at chi == rho (only t = p_A adopted);
// nullopt when chi < rho (empty cone).
std::optional<double> half_angle(const ConeSpec& cone);

// Strict membership p_A.t > rho/chi. Boundary directions are not adopted,
// matching the no-adoption tie-break at chi_0.
bool in_cone(const TaskVector& t, const ConeSpec& cone);

struct SqrtApprox {
    double exact = 0.0;   // arccos(rho/chi)
    double approx = 0.0;  // sqrt(2 (chi/rho - 1))
    double rel_error = 0.0;
    bool in_regime = false;  // series is trustworthy (error <= 5%)
};

// Near-threshold square-root law for the half-angle. Requires chi > rho.
SqrtApprox sqrt_approximation_error(double rho, double chi);

struct MeasureResult {
    double measure = 0.0;    // fraction of sampled directions inside the cone
    double std_error = 0.0;  // sqrt(m (1-m) / samples)
    long samples = 0;
};

// Monte Carlo mass of the cone under the uniform distribution on the
// positive-orthant unit sphere. Deterministic given the seed (counter-based
// draws keyed by sample index); parallel evaluation merges integer counts,
// so the partitioning cannot change the result.
MeasureResult adoption_measure(const ConeSpec& cone, long samples,
                               std::uint64_t seed);

struct CurvatureRow {
    double gamma = 0.0;
    double sigma = 0.0;
    double phi0 = 0.0;       // NaN when the cone is empty at this point
    double chi_ratio = 0.0;  // chi_100 / chi_0 for the reference direction
};

// Comparative statics along a gamma+sigma grid: each target sum scales the
// worker's gamma and sigma proportionally. phi0 is evaluated at capability
// `chi`; chi_ratio at reference direction t (strictly positive).
std::vector<CurvatureRow> curvature_sweep(const WorkerJob& w,
                                          const std::vector<double>& gamma_plus_sigma,
                                          double chi, const TaskVector& t);

}  // namespace adopt
