#pragma once

#include <cstddef>
#include <string>

#include "adopt/vec.hpp"

namespace adopt {

// Worker-job match primitives: CES value weights theta, CET skills s,
// elasticity of substitution sigma, elasticity of transformation gamma, and
// the time/attention budget.
struct WorkerJob {
    TaskVector theta;
    TaskVector s;
    double sigma = 2.0;
    double gamma = 1.0;
    double budget = 1.0;

    std::size_t size() const { return theta.size(); }

    // Throws ValidationError naming `prefix`.<field> on the first violation.
    // sigma = 1 (Cobb-Douglas limit) is rejected: the closed forms are
    // singular there and nothing in this library develops that limit.
    void validate(const std::string& prefix = "worker") const;
};

// Unit-Euclidean-norm nonnegative price vector.
struct PriceVector {
    TaskVector p;

    // Normalizes v to unit length; rejects zero, negative or non-finite input.
    static PriceVector unit(TaskVector v, const std::string& field = "price");

    std::size_t size() const { return p.size(); }
    double operator[](std::size_t i) const { return p[i]; }

    void validate(const std::string& field = "price") const;
};

// Directional technology: unit direction t (which tasks, in what proportion)
// and capability chi (task units per unit of supervision resource).
struct Technology {
    TaskVector t;
    double chi = 0.0;

    // Normalizes the direction; rejects zero/negative/non-finite directions
    // and negative or non-finite chi.
    static Technology unit(TaskVector direction, double chi,
                           const std::string& field = "technology");

    void validate(const std::string& field = "technology") const;
};

inline constexpr double kSigmaMin = 1e-3;
inline constexpr double kSigmaMax = 1e3;
inline constexpr double kSigmaForbiddenBand = 1e-6;  // around sigma = 1
inline constexpr double kGammaMin = 1e-3;
inline constexpr double kGammaMax = 1e3;
inline constexpr double kUnitNormTol = 1e-12;

}  // namespace adopt
