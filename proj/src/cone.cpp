#include "adopt/cone.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include "adopt/adoption.hpp"
#include "adopt/autarky.hpp"
#include "adopt/errors.hpp"
#include "adopt/parallel.hpp"
#include "adopt/rng.hpp"

namespace adopt {

std::optional<double> half_angle(const ConeSpec& cone) {
    cone.p_A.validate("cone.p_A");
    if (!(cone.rho > 0.0))
        throw ValidationError("cone.rho", "must be positive");
    if (!(cone.chi > 0.0))
        throw ValidationError("cone.chi", "must be positive");
    if (cone.chi < cone.rho) return std::nullopt;  // empty cone
    double ratio = std::min(cone.rho / cone.chi, 1.0);
    return std::acos(ratio);
}

bool in_cone(const TaskVector& t, const ConeSpec& cone) {
    cone.p_A.validate("cone.p_A");
    if (t.size() != cone.p_A.size())
        throw ValidationError("in_cone.t", "dimension mismatch with cone prices");
    if (!(cone.chi > 0.0)) return false;
    return dot(cone.p_A.p, t) > cone.rho / cone.chi;
}

SqrtApprox sqrt_approximation_error(double rho, double chi) {
    if (!(rho > 0.0))
        throw ValidationError("sqrt_approximation_error.rho", "must be positive");
    if (!(chi > rho))
        throw ValidationError("sqrt_approximation_error.chi", "requires chi > rho");
    SqrtApprox out;
    out.exact = std::acos(std::min(rho / chi, 1.0));
    out.approx = std::sqrt(2.0 * (chi / rho - 1.0));
    out.rel_error = std::abs(out.approx - out.exact) / out.exact;
    out.in_regime = out.rel_error <= 0.05;
    return out;
}

MeasureResult adoption_measure(const ConeSpec& cone, long samples,
                               std::uint64_t seed) {
    cone.p_A.validate("cone.p_A");
    if (samples < 1)
        throw ValidationError("adoption_measure.samples", "must be at least 1");

    const std::size_t n = cone.p_A.size();
    const double cutoff = (cone.chi > 0.0)
                              ? cone.rho / cone.chi
                              : std::numeric_limits<double>::infinity();

    // Integer hit counts merge associatively, so the chunking cannot change
    // the result.
    std::atomic<long> total{0};
    detail::parallel_for(samples, [&](long lo, long hi) {
        long count = 0;
        for (long i = lo; i < hi; ++i) {
            TaskVector t = positive_direction(n, seed, static_cast<std::uint64_t>(i));
            if (dot(cone.p_A.p, t) > cutoff) ++count;
        }
        total.fetch_add(count, std::memory_order_relaxed);
    });

    MeasureResult out;
    out.samples = samples;
    out.measure = static_cast<double>(total.load()) / static_cast<double>(samples);
    out.std_error = std::sqrt(out.measure * (1.0 - out.measure) /
                              static_cast<double>(samples));
    return out;
}

std::vector<CurvatureRow> curvature_sweep(const WorkerJob& w,
                                          const std::vector<double>& gamma_plus_sigma,
                                          double chi, const TaskVector& t) {
    w.validate();
    if (!(chi > 0.0)) throw ValidationError("curvature_sweep.chi", "must be positive");

    std::vector<CurvatureRow> rows;
    rows.reserve(gamma_plus_sigma.size());
    const double base = w.gamma + w.sigma;
    for (double target : gamma_plus_sigma) {
        WorkerJob scaled_w = w;
        scaled_w.gamma = w.gamma * target / base;
        scaled_w.sigma = w.sigma * target / base;
        scaled_w.validate("curvature_sweep.worker");

        AutarkySolution aut = solve_autarky(scaled_w);
        CurvatureRow row;
        row.gamma = scaled_w.gamma;
        row.sigma = scaled_w.sigma;
        auto phi0 = half_angle(ConeSpec{aut.p_A, aut.rho_A, chi});
        row.phi0 = phi0 ? *phi0 : std::numeric_limits<double>::quiet_NaN();
        row.chi_ratio = corner_threshold(t, scaled_w) / entry_threshold(t, scaled_w);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace adopt
