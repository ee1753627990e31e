#include "adopt/types.hpp"

#include <cmath>

#include "adopt/errors.hpp"

namespace adopt {

void WorkerJob::validate(const std::string& prefix) const {
    if (theta.empty())
        throw ValidationError(prefix + ".theta", "must have at least one task");
    if (s.size() != theta.size())
        throw ValidationError(prefix + ".s", "length must match theta");
    for (std::size_t i = 0; i < theta.size(); ++i) {
        if (!(theta[i] > 0.0) || !std::isfinite(theta[i]))
            throw ValidationError(prefix + ".theta", "component " + std::to_string(i) +
                                                         " must be positive and finite");
        if (!(s[i] > 0.0) || !std::isfinite(s[i]))
            throw ValidationError(prefix + ".s", "component " + std::to_string(i) +
                                                     " must be positive and finite");
    }
    if (!std::isfinite(sigma) || sigma < kSigmaMin || sigma > kSigmaMax)
        throw ValidationError(prefix + ".sigma", "must lie in [1e-3, 1e3]");
    if (std::abs(sigma - 1.0) < kSigmaForbiddenBand)
        throw ValidationError(prefix + ".sigma",
                              "sigma = 1 (Cobb-Douglas limit) is not supported; "
                              "the CES exponent sigma/(sigma-1) is singular there");
    if (!std::isfinite(gamma) || gamma < kGammaMin || gamma > kGammaMax)
        throw ValidationError(prefix + ".gamma", "must lie in [1e-3, 1e3]");
    if (!(budget > 0.0) || !std::isfinite(budget))
        throw ValidationError(prefix + ".budget", "must be positive and finite");
}

PriceVector PriceVector::unit(TaskVector v, const std::string& field) {
    if (v.empty()) throw ValidationError(field, "must be non-empty");
    if (!all_finite(v) || !all_nonneg(v))
        throw ValidationError(field, "components must be finite and nonnegative");
    double n = norm2(v);
    if (!(n > 0.0)) throw ValidationError(field, "must be nonzero");
    for (double& x : v) x /= n;
    return PriceVector{std::move(v)};
}

void PriceVector::validate(const std::string& field) const {
    if (p.empty()) throw ValidationError(field, "must be non-empty");
    if (!all_finite(p) || !all_nonneg(p))
        throw ValidationError(field, "components must be finite and nonnegative");
    if (std::abs(norm2(p) - 1.0) > kUnitNormTol)
        throw ValidationError(field, "must have unit Euclidean norm");
}

Technology Technology::unit(TaskVector direction, double chi, const std::string& field) {
    if (direction.empty()) throw ValidationError(field + ".t", "must be non-empty");
    if (!all_finite(direction) || !all_nonneg(direction))
        throw ValidationError(field + ".t", "components must be finite and nonnegative");
    double n = norm2(direction);
    if (!(n > 0.0)) throw ValidationError(field + ".t", "must be nonzero");
    for (double& x : direction) x /= n;
    Technology tech{std::move(direction), chi};
    tech.validate(field);
    return tech;
}

void Technology::validate(const std::string& field) const {
    if (t.empty()) throw ValidationError(field + ".t", "must be non-empty");
    if (!all_finite(t) || !all_nonneg(t))
        throw ValidationError(field + ".t", "components must be finite and nonnegative");
    if (std::abs(norm2(t) - 1.0) > kUnitNormTol)
        throw ValidationError(field + ".t", "must have unit Euclidean norm");
    if (!(chi >= 0.0) || !std::isfinite(chi))
        throw ValidationError(field + ".chi", "must be nonnegative and finite");
}

}  // namespace adopt
