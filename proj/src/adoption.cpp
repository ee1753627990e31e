#include "adopt/adoption.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adopt/errors.hpp"

namespace adopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_direction(const TaskVector& t, const WorkerJob& w, const char* op) {
    if (t.size() != w.size())
        throw ValidationError(std::string(op) + ".t", "dimension mismatch with worker");
    if (!all_finite(t) || !all_nonneg(t))
        throw ValidationError(std::string(op) + ".t",
                              "components must be finite and nonnegative");
    if (std::abs(norm2(t) - 1.0) > 1e-9)
        throw ValidationError(std::string(op) + ".t", "must be a unit vector");
}

// Internal golden-section maximizer, kept separate from oracle::golden_section
// so the oracle stays an independent code path.
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
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

}  // namespace

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::NoAdoption: return "no-adoption";
        case Regime::Partial: return "partial";
        case Regime::AllIn: return "all-in";
    }
    return "?";
}

bool absolute_advantage(const Technology& tech, const WorkerJob& w) {
    w.validate();
    tech.validate();
    check_direction(tech.t, w, "absolute_advantage");
    return tech.chi * cet_cost(tech.t, w) > 1.0;
}

TaskVector direction_bundle(const TaskVector& t, const WorkerJob& w) {
    w.validate();
    check_direction(t, w, "direction_bundle");
    double g = cet_cost(t, w);
    return scaled(t, w.budget / g);
}

double adoption_threshold(const TaskVector& t, const PriceVector& p,
                          const WorkerJob& w) {
    w.validate();
    p.validate();
    check_direction(t, w, "adoption_threshold");
    double pt = dot(p.p, t);
    if (!(pt > 0.0)) return kInf;
    return unit_revenue(p, w) / pt;
}

double entry_threshold(const TaskVector& t, const WorkerJob& w) {
    w.validate();
    check_direction(t, w, "entry_threshold");
    const double gam = w.gamma, sig = w.sigma;
    double phi = productivity_index(w);
    double denom = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        denom += t[i] * std::pow(std::max(w.theta[i] / w.s[i], 1e-12), 1.0 / (gam + sig));
    if (!(denom > 0.0)) return kInf;
    return std::pow(phi, 1.0 / (gam + 1.0)) / denom;
}

double corner_threshold(const TaskVector& t, const WorkerJob& w) {
    w.validate();
    check_direction(t, w, "corner_threshold");
    const double gam = w.gamma, sig = w.sigma;
    for (double ti : t)
        if (ti == 0.0) return kInf;  // CES marginal product diverges at zero
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        num += w.s[i] * std::pow(w.theta[i], (gam + 1.0) / sig) *
               std::pow(t[i], -(gam + 1.0) / sig);
        den += std::pow(w.theta[i], 1.0 / sig) * std::pow(t[i], 1.0 - 1.0 / sig);
    }
    return std::pow(num, 1.0 / (gam + 1.0)) / den;
}

ThresholdPair threshold_pair(const TaskVector& t, const WorkerJob& w) {
    w.validate();
    check_direction(t, w, "threshold_pair");
    AutarkySolution aut = solve_autarky(w);
    double ft = ces_output(t, w);
    if (!(ft > 0.0))
        throw ValidationError("threshold_pair.t", "requires F(t) > 0");
    if (!(dot(aut.p_A.p, t) > 0.0))
        throw ValidationError("threshold_pair.t", "requires p_A . t > 0");

    ThresholdPair pair;
    pair.chi0 = entry_threshold(t, w);
    pair.chi100 = corner_threshold(t, w);
    // Output per unit budget over F(t): the thresholds are budget-free, so
    // the isoquant scaling must be too (it equals F(x_A)/F(t) at B = 1).
    pair.c = aut.output / (w.budget * ft);
    if (std::isfinite(pair.chi100)) {
        double spread = std::abs(pair.chi100 - pair.chi0);
        pair.collinear = spread <= 1e-9 * std::max(1.0, std::abs(pair.chi0));
    }
    return pair;
}

AdoptionSolution optimal_intensity(const Technology& tech, const WorkerJob& w,
                                   const AdoptionOptions& opts) {
    w.validate();
    tech.validate();
    check_direction(tech.t, w, "optimal_intensity");

    AutarkySolution aut = solve_autarky(w);
    AdoptionSolution sol;
    sol.chi0 = entry_threshold(tech.t, w);
    sol.chi100 = corner_threshold(tech.t, w);

    const double chi = tech.chi;
    const double B = w.budget;

    // Ties at chi_0 resolve to no-adoption: strict improvement is the content.
    if (!(chi > sol.chi0) || !(dot(aut.p_A.p, tech.t) > 0.0)) {
        sol.lambda_star = 0.0;
        sol.x_H = aut.x_A;
        sol.z_star = aut.x_A;
        sol.output = aut.output;
        sol.p_star = aut.p_A;
        sol.regime = Regime::NoAdoption;
        sol.diag.converged = true;
        sol.diag.kkt_residual = 0.0;
        return sol;
    }

    if (std::isfinite(sol.chi100) && chi >= sol.chi100) {
        sol.lambda_star = 1.0;
        sol.x_H.assign(w.size(), 0.0);
        sol.z_star = scaled(tech.t, B * chi);
        sol.output = ces_output(sol.z_star, w);
        Eval fe = ces_eval(tech.t, w);  // grad F is degree-0 homogeneous
        sol.p_star = PriceVector::unit(fe.grad, "optimal_intensity.p_star");
        sol.regime = Regime::AllIn;
        sol.diag.converged = true;
        sol.diag.kkt_residual = 0.0;
        return sol;
    }

    // Partial regime: golden-section on the strictly concave
    //   f(lambda) = max { F(x + lambda B chi t) : g(x) <= (1-lambda) B }.
    Objective obj = [&](const TaskVector& z, TaskVector* grad) {
        Eval e = ces_eval(z, w);
        if (grad) *grad = e.grad;
        return e.value;
    };

    TaskVector warm = aut.x_A;
    SolveDiagnostics worst;
    worst.converged = true;
    worst.kkt_residual = 0.0;
    auto solve_at = [&](double lam) {
        SolverOptions so = opts.inner;
        so.hint = &warm;
        MaximizeResult r =
            concave_maximize(obj, w, (1.0 - lam) * B, scaled(tech.t, lam * B * chi), so);
        warm = r.x;
        worst.iterations += r.diag.iterations;
        worst.kkt_residual = std::max(worst.kkt_residual, r.diag.kkt_residual);
        return r;
    };
    auto value_at = [&](double lam) { return solve_at(lam).value; };
    // Envelope derivative f'(lam) = grad F(z) . (y - x_tilde) at the inner
    // optimum; gradient-based, so it stays informative where value
    // comparisons are blind.
    auto slope_at = [&](double lam) {
        MaximizeResult r = solve_at(lam);
        TaskVector z = axpy(r.x, lam * B * chi, tech.t);
        Eval fe = ces_eval(z, w);
        double d = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            d += fe.grad[i] * (B * chi * tech.t[i] - r.x[i] / (1.0 - lam));
        return d;
    };

    // Golden-section to a coarse bracket, then bisection on the slope sign.
    // Where f is nearly flat the golden step can land outside the coarse
    // window, so the bracket expands until it straddles the root.
    double coarse = std::max(opts.lambda_tol, 1e-6);
    double lam = golden_max(value_at, 0.0, 1.0, coarse);
    if (coarse > opts.lambda_tol) {
        const double hi_cap = 1.0 - 1e-12;
        double step = coarse;
        double lo = std::max(0.0, lam - step);
        while (lo > 0.0 && slope_at(lo) <= 0.0) {
            step *= 4.0;
            lo = std::max(0.0, lam - step);
        }
        step = coarse;
        double hi = std::min(hi_cap, lam + step);
        while (hi < hi_cap && slope_at(hi) >= 0.0) {
            step *= 4.0;
            hi = std::min(hi_cap, lam + step);
        }
        if (slope_at(lo) > 0.0 && slope_at(hi) < 0.0) {
            while (hi - lo > opts.lambda_tol) {
                double mid = 0.5 * (lo + hi);
                (slope_at(mid) > 0.0 ? lo : hi) = mid;
            }
            lam = 0.5 * (lo + hi);
        }
    }

    MaximizeResult inner = solve_at(lam);

    sol.lambda_star = lam;
    sol.x_H = inner.x;
    sol.z_star = axpy(inner.x, lam * B * chi, tech.t);
    sol.output = inner.value;
    Eval fe = ces_eval(sol.z_star, w);
    sol.p_star = PriceVector::unit(fe.grad, "optimal_intensity.p_star");
    sol.regime = Regime::Partial;
    sol.diag = worst;
    return sol;
}

}  // namespace adopt
