#include "adopt/autarky.hpp"

#include <algorithm>
#include <cmath>

#include "adopt/errors.hpp"
#include "adopt/model_core.hpp"

namespace adopt {

namespace {

// theta_i/s_i clipped from below: the exponent 1/(gamma+sigma) can reach 500,
// and an underflowing ratio would zero the whole price component.
double clipped_ratio(double theta, double s) {
    return std::max(theta / s, 1e-12);
}

}  // namespace

double productivity_index(const WorkerJob& w) {
    w.validate();
    const double a = (w.sigma - 1.0) / (w.gamma + w.sigma);
    const double b = (w.gamma + 1.0) / (w.gamma + w.sigma);
    double phi = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j)
        phi += std::pow(w.s[j], a) * std::pow(w.theta[j], b);
    return phi;
}

AutarkySolution solve_autarky(const WorkerJob& w) {
    w.validate();
    const std::size_t n = w.size();
    const double sig = w.sigma;
    const double gam = w.gamma;

    AutarkySolution sol;
    sol.phi = productivity_index(w);

    const double phi_pow = std::pow(sol.phi, gam / (gam + 1.0));
    sol.x_A.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        sol.x_A[i] = w.budget * std::pow(w.s[i], sig / (gam + sig)) *
                     std::pow(w.theta[i], gam / (gam + sig)) / phi_pow;

    // Power-law prices, normalized in the log domain so the 1/(gamma+sigma)
    // exponent cannot overflow the unnormalized components.
    TaskVector logxi(n);
    double logmax = -1e300;
    for (std::size_t i = 0; i < n; ++i) {
        logxi[i] = std::log(clipped_ratio(w.theta[i], w.s[i])) / (gam + sig);
        logmax = std::max(logmax, logxi[i]);
    }
    TaskVector xi(n);
    for (std::size_t i = 0; i < n; ++i) xi[i] = std::exp(logxi[i] - logmax);
    sol.p_A = PriceVector::unit(std::move(xi), "autarky.p_A");

    sol.output = ces_output(sol.x_A, w);
    sol.rho_A = unit_revenue(sol.p_A, w);

    const double a = (sig - 1.0) / (gam + sig);
    const double b = (gam + 1.0) / (gam + sig);
    sol.shares.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        sol.shares[i] = std::pow(w.s[i], a) * std::pow(w.theta[i], b) / sol.phi;
    return sol;
}

double autarky_output_per_budget(const WorkerJob& w) {
    // Equals Phi^{(gamma+sigma)/((sigma-1)(gamma+1))}; computed from the
    // allocation itself so the two routes stay independently checkable.
    AutarkySolution sol = solve_autarky(w);
    return sol.output / w.budget;
}

double jevons_share_derivative(const WorkerJob& w, std::size_t i) {
    w.validate();
    if (i >= w.size())
        throw ValidationError("jevons_share_derivative.i", "task index out of range");
    AutarkySolution sol = solve_autarky(w);
    double omega = sol.shares[i];
    return (w.sigma - 1.0) / ((w.gamma + w.sigma) * w.s[i]) * omega * (1.0 - omega);
}

}  // namespace adopt
