#include "adopt/oracle.hpp"

#include <cmath>

#include "adopt/errors.hpp"

namespace adopt::oracle {

namespace {

// Local CET evaluation: the oracle must not share the main library's code
// path for the constraint it is checking.
double cet(const TaskVector& x, const WorkerJob& w) {
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0)
            acc += std::pow(w.s[i], -1.0 / w.gamma) *
                   std::pow(x[i], (w.gamma + 1.0) / w.gamma);
    }
    return (acc > 0.0) ? std::pow(acc, w.gamma / (w.gamma + 1.0)) : 0.0;
}

constexpr double kHalfPi = 1.5707963267948966192313216916398;

}  // namespace

GridResult grid_maximize(const ScalarField& objective, const WorkerJob& w,
                         double budget, const GridSpec& grid) {
    w.validate();
    if (w.size() > 3)
        throw ValidationError("grid_maximize", "only N <= 3 is supported");
    if (grid.resolution < 2)
        throw ValidationError("grid_maximize.resolution", "must be at least 2");
    if (!(budget >= 0.0))
        throw ValidationError("grid_maximize.budget", "must be nonnegative");

    const std::size_t n = w.size();
    GridResult out;
    out.resolution = grid.resolution;

    auto frontier = [&](const TaskVector& u) {
        double g = cet(u, w);
        TaskVector x(u);
        for (double& v : x) v *= budget / g;
        return x;
    };

    if (budget == 0.0) {
        out.x.assign(n, 0.0);
        out.value = objective(out.x);
        out.err_bound = 0.0;
        return out;
    }

    if (n == 1) {
        out.x = frontier(TaskVector{1.0});
        out.value = objective(out.x);
        out.err_bound = 0.0;
        return out;
    }

    const int res = grid.resolution;
    double best = -1e300;
    TaskVector best_x;
    double max_jump = 0.0;
    double prev = 0.0;
    bool have_prev = false;

    if (n == 2) {
        for (int j = 0; j <= res; ++j) {
            double a = kHalfPi * j / res;
            TaskVector x = frontier(TaskVector{std::cos(a), std::sin(a)});
            double v = objective(x);
            if (v > best) {
                best = v;
                best_x = x;
            }
            if (have_prev) max_jump = std::max(max_jump, std::abs(v - prev));
            prev = v;
            have_prev = true;
        }
    } else {
        for (int j = 0; j <= res; ++j) {
            double polar = kHalfPi * j / res;
            have_prev = false;
            for (int k = 0; k <= res; ++k) {
                double azim = kHalfPi * k / res;
                TaskVector x = frontier(TaskVector{std::sin(polar) * std::cos(azim),
                                                   std::sin(polar) * std::sin(azim),
                                                   std::cos(polar)});
                double v = objective(x);
                if (v > best) {
                    best = v;
                    best_x = x;
                }
                if (have_prev) max_jump = std::max(max_jump, std::abs(v - prev));
                prev = v;
                have_prev = true;
            }
        }
    }

    out.x = best_x;
    out.value = best;
    out.err_bound = max_jump;  // Lipschitz step bound, O(1/resolution)
    return out;
}

double golden_section(const ScalarFn& f, double lo, double hi, double tol) {
    if (!(tol > 0.0)) throw ValidationError("golden_section.tol", "must be positive");
    if (!(hi > lo)) throw ValidationError("golden_section", "requires hi > lo");
    const double invphi = 0.6180339887498948482;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

TaskVector finite_diff_gradient(const ScalarField& f, const TaskVector& x,
                                double h) {
    if (h < 1e-8 || h > 1e-4)
        throw ValidationError("finite_diff_gradient.h", "must lie in [1e-8, 1e-4]");
    for (double xi : x)
        if (!(xi > h))
            throw ValidationError("finite_diff_gradient.x",
                                  "components must exceed the step size");
    TaskVector grad(x.size());
    TaskVector probe = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        double fp = f(probe);
        probe[i] = x[i] - h;
        double fm = f(probe);
        probe[i] = x[i];
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

}  // namespace adopt::oracle
