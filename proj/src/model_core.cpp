#include "adopt/model_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "adopt/errors.hpp"
#include "adopt/rng.hpp"

namespace adopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_input(const TaskVector& x, const WorkerJob& w, const char* op) {
    if (x.size() != w.size())
        throw ValidationError(std::string(op) + ".x", "dimension mismatch with worker");
    if (!all_finite(x))
        throw ValidationError(std::string(op) + ".x", "components must be finite");
    if (!all_nonneg(x))
        throw ValidationError(std::string(op) + ".x", "components must be nonnegative");
}

}  // namespace

namespace {

// log(sum exp(v_i)) with max-subtraction; assumes v non-empty.
double log_sum_exp(const TaskVector& v) {
    double m = v[0];
    for (double vi : v) m = std::max(m, vi);
    if (!std::isfinite(m)) return m;
    double acc = 0.0;
    for (double vi : v) acc += std::exp(vi - m);
    return m + std::log(acc);
}

// Power means with exponent 1/q are evaluated in the log domain when q is
// small or x spans many decades: x^q under/overflows there while
// exp(q log x) stays representable after max-subtraction.
bool needs_log_domain(const TaskVector& x, double q) {
    if (std::abs(q) < 0.05 || std::abs(q) > 20.0) return true;
    for (double xi : x)
        if (xi > 0.0 && std::abs(q * std::log(xi)) > 600.0) return true;
    return false;
}

}  // namespace

Eval ces_eval(const TaskVector& x, const WorkerJob& w) {
    check_input(x, w, "ces_output");
    const std::size_t n = x.size();
    const double sig = w.sigma;
    const double q = (sig - 1.0) / sig;

    Eval out;
    out.grad.assign(n, 0.0);

    if (sig < 1.0) {
        for (double xi : x) {
            if (xi == 0.0) {
                // Leontief-leaning CES: any idle task kills output; the
                // gradient there is the divergent one.
                out.value = 0.0;
                out.unbounded_gradient = true;
                return out;
            }
        }
    }

    if (needs_log_domain(x, q)) {
        TaskVector terms;
        terms.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            if (x[i] > 0.0)
                terms.push_back(std::log(w.theta[i]) / sig + q * std::log(x[i]));
        double logF = terms.empty() ? -kInf : log_sum_exp(terms) / q;
        out.value = std::exp(logF);
        for (std::size_t i = 0; i < n; ++i) {
            if (x[i] > 0.0) {
                out.grad[i] =
                    std::exp((std::log(w.theta[i]) + logF - std::log(x[i])) / sig);
            } else {
                out.grad[i] = kInf;
                out.unbounded_gradient = true;
            }
        }
        return out;
    }

    double S = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] > 0.0) S += std::pow(w.theta[i], 1.0 / sig) * std::pow(x[i], q);
    }
    out.value = (S > 0.0) ? std::pow(S, 1.0 / q) : 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        double a = std::pow(w.theta[i], 1.0 / sig);
        if (x[i] > 0.0) {
            out.grad[i] = a * std::pow(out.value / x[i], 1.0 / sig);
        } else {
            // sigma > 1 here: marginal product diverges at zero.
            out.grad[i] = kInf;
            out.unbounded_gradient = true;
        }
    }
    return out;
}

double ces_output(const TaskVector& x, const WorkerJob& w) {
    check_input(x, w, "ces_output");
    const double sig = w.sigma;
    const double q = (sig - 1.0) / sig;
    if (sig < 1.0) {
        for (double xi : x)
            if (xi == 0.0) return 0.0;
    }
    if (needs_log_domain(x, q)) {
        TaskVector terms;
        terms.reserve(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] > 0.0)
                terms.push_back(std::log(w.theta[i]) / sig + q * std::log(x[i]));
        return terms.empty() ? 0.0 : std::exp(log_sum_exp(terms) / q);
    }
    double S = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0) S += std::pow(w.theta[i], 1.0 / sig) * std::pow(x[i], q);
    }
    return (S > 0.0) ? std::pow(S, 1.0 / q) : 0.0;
}

Eval cet_eval(const TaskVector& x, const WorkerJob& w) {
    check_input(x, w, "cet_cost");
    const std::size_t n = x.size();
    const double gam = w.gamma;
    const double r = (gam + 1.0) / gam;

    Eval out;
    out.grad.assign(n, 0.0);

    if (needs_log_domain(x, r)) {
        TaskVector terms;
        terms.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            if (x[i] > 0.0)
                terms.push_back(-std::log(w.s[i]) / gam + r * std::log(x[i]));
        if (terms.empty()) return out;
        double logg = log_sum_exp(terms) / r;
        out.value = std::exp(logg);
        for (std::size_t i = 0; i < n; ++i)
            if (x[i] > 0.0)
                out.grad[i] = std::exp((-std::log(w.s[i]) + std::log(x[i]) - logg) / gam);
        return out;
    }

    double T = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] > 0.0) T += std::pow(w.s[i], -1.0 / gam) * std::pow(x[i], r);
    }
    out.value = (T > 0.0) ? std::pow(T, 1.0 / r) : 0.0;
    if (out.value > 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            if (x[i] > 0.0)
                out.grad[i] = std::pow(w.s[i], -1.0 / gam) *
                              std::pow(x[i] / out.value, 1.0 / gam);
        }
    }
    return out;
}

double cet_cost(const TaskVector& x, const WorkerJob& w) {
    check_input(x, w, "cet_cost");
    const double gam = w.gamma;
    const double r = (gam + 1.0) / gam;
    if (needs_log_domain(x, r)) {
        TaskVector terms;
        terms.reserve(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] > 0.0)
                terms.push_back(-std::log(w.s[i]) / gam + r * std::log(x[i]));
        return terms.empty() ? 0.0 : std::exp(log_sum_exp(terms) / r);
    }
    double T = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0) T += std::pow(w.s[i], -1.0 / gam) * std::pow(x[i], r);
    }
    return (T > 0.0) ? std::pow(T, 1.0 / r) : 0.0;
}

double unit_revenue(const TaskVector& p, const WorkerJob& w) {
    if (p.size() != w.size())
        throw ValidationError("unit_revenue.p", "dimension mismatch with worker");
    if (!all_finite(p) || !all_nonneg(p))
        throw ValidationError("unit_revenue.p", "components must be finite and nonnegative");
    const double e = w.gamma + 1.0;
    if (needs_log_domain(p, e)) {
        TaskVector terms;
        terms.reserve(p.size());
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] > 0.0) terms.push_back(std::log(w.s[i]) + e * std::log(p[i]));
        if (terms.empty()) throw ValidationError("unit_revenue.p", "must be nonzero");
        return std::exp(log_sum_exp(terms) / e);
    }
    double D = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) D += w.s[i] * std::pow(p[i], e);
    }
    if (!(D > 0.0)) throw ValidationError("unit_revenue.p", "must be nonzero");
    return std::pow(D, 1.0 / e);
}

double unit_revenue(const PriceVector& p, const WorkerJob& w) {
    return unit_revenue(p.p, w);
}

TaskVector revenue_maximizer(const TaskVector& p, const WorkerJob& w) {
    if (p.size() != w.size())
        throw ValidationError("revenue_maximizer.p", "dimension mismatch with worker");
    if (!all_finite(p) || !all_nonneg(p))
        throw ValidationError("revenue_maximizer.p",
                              "components must be finite and nonnegative");
    const double gam = w.gamma;
    // log(rho(p)) via the stable path; x_i = B s_i p_i^gamma / rho^gamma.
    double log_rho;
    {
        const double e = gam + 1.0;
        TaskVector terms;
        terms.reserve(p.size());
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] > 0.0) terms.push_back(std::log(w.s[i]) + e * std::log(p[i]));
        if (terms.empty())
            throw ValidationError("revenue_maximizer.p", "must be nonzero");
        log_rho = log_sum_exp(terms) / e;
    }
    TaskVector x(p.size(), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0)
            x[i] = w.budget * w.s[i] *
                   std::exp(gam * (std::log(p[i]) - log_rho));
    }
    return x;
}

namespace {

// One ascent state on the direction simplex.
struct SimplexRun {
    TaskVector u;      // simplex point
    TaskVector x;      // frontier point (budget/g(u)) u
    TaskVector sgrad;  // gradient of the reduced objective in u
    double value = -kInf;
    double kkt = kInf;
    bool grads_ok = false;
};

// Relative KKT residual of max f(shift + x) s.t. g(x) <= budget at a frontier
// point: grad f proportional to grad g. CET optima are interior in x >= 0
// (the marginal resource cost of the first unit of any task is zero), so no
// boundary projection is needed.
double kkt_residual(const TaskVector& fgrad, const TaskVector& ggrad,
                    const TaskVector& x, double budget) {
    double nu = dot(fgrad, x) / budget;  // Euler: grad g . x = g(x) = budget
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        worst = std::max(worst, std::abs(fgrad[i] - nu * ggrad[i]));
    double scale = std::max(norm2(fgrad), 1e-300);
    return worst / scale;
}

// Solve the (n+1) x (n+1) system by Gaussian elimination with partial
// pivoting; returns false on a singular pivot.
bool solve_dense(std::vector<std::vector<double>>& a, std::vector<double>& b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-300) return false;
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            double m = a[r][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[r][k] -= m * a[col][k];
            b[r] -= m * b[col];
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        for (std::size_t k = col + 1; k < n; ++k) b[col] -= a[col][k] * b[k];
        b[col] /= a[col][col];
    }
    return true;
}

// Damped Newton on the equality-constrained stationarity system
//   grad f(shift + x) - nu grad g(x) = 0,   g(x) = budget,
// started from the ascent iterate. The multiplicative-weights phase has a
// first-order rate that collapses under strong curvature anisotropy
// (complements with a lopsided shift); Newton finishes those instances off.
// Returns true and updates x when it reaches a lower residual.
bool newton_polish(const Objective& objective, const WorkerJob& w, double budget,
                   const TaskVector& shift, TaskVector& x, double& value,
                   double& kkt, double target) {
    const std::size_t n = w.size();
    TaskVector best_x = x;
    double best_kkt = kkt;

    TaskVector cur = x;
    for (int iter = 0; iter < 40; ++iter) {
        TaskVector z = axpy(shift, 1.0, cur);
        TaskVector fgrad(n);
        double val = objective(z, &fgrad);
        Eval ge = cet_eval(cur, w);
        if (!std::isfinite(val) || !all_finite(fgrad) || !all_finite(ge.grad)) break;

        double nu = dot(fgrad, cur) / std::max(ge.value, 1e-300);
        double fscale = std::max(norm2(fgrad), 1e-300);
        double resid = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            resid = std::max(resid, std::abs(fgrad[i] - nu * ge.grad[i]));
        double cur_kkt = resid / fscale + std::abs(ge.value - budget) / budget;
        if (cur_kkt < best_kkt) {
            best_kkt = cur_kkt;
            best_x = cur;
        }
        if (cur_kkt < target) break;

        // Hessian of the objective by central differences of its gradient.
        std::vector<std::vector<double>> J(n + 1, std::vector<double>(n + 1, 0.0));
        TaskVector gp(n), gm(n), probe = z;
        bool ok = true;
        for (std::size_t j = 0; j < n && ok; ++j) {
            double h = 1e-6 * std::max(1.0, std::abs(z[j]));
            if (z[j] - h <= 0.0) h = 0.5 * z[j];
            probe[j] = z[j] + h;
            objective(probe, &gp);
            probe[j] = z[j] - h;
            objective(probe, &gm);
            probe[j] = z[j];
            if (!all_finite(gp) || !all_finite(gm)) {
                ok = false;
                break;
            }
            for (std::size_t i = 0; i < n; ++i)
                J[i][j] = (gp[i] - gm[i]) / (2.0 * h);
        }
        if (!ok) break;

        // Analytic CET Hessian: g_ij = (1/gamma)(g_i/x_i delta_ij - g_i g_j / g).
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double gij = -ge.grad[i] * ge.grad[j] / std::max(ge.value, 1e-300);
                if (i == j) gij += ge.grad[i] / std::max(cur[i], 1e-300);
                J[i][j] -= nu * gij / w.gamma;
            }
            J[i][n] = -ge.grad[i];
            J[n][i] = ge.grad[i];
        }
        J[n][n] = 0.0;

        std::vector<double> rhs(n + 1);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = -(fgrad[i] - nu * ge.grad[i]);
        rhs[n] = budget - ge.value;
        if (!solve_dense(J, rhs)) break;

        // Keep the iterate strictly positive; backtrack on the residual norm.
        double alpha = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            if (rhs[i] < 0.0) alpha = std::min(alpha, -0.9 * cur[i] / rhs[i]);
        bool accepted = false;
        for (int bt = 0; bt < 30 && !accepted; ++bt) {
            TaskVector trial = cur;
            for (std::size_t i = 0; i < n; ++i)
                trial[i] = std::max(cur[i] + alpha * rhs[i], 1e-300);
            TaskVector tz = axpy(shift, 1.0, trial);
            TaskVector tg(n);
            double tval = objective(tz, &tg);
            Eval tge = cet_eval(trial, w);
            if (std::isfinite(tval) && all_finite(tg) && all_finite(tge.grad)) {
                double tnu = dot(tg, trial) / std::max(tge.value, 1e-300);
                double tres = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    tres = std::max(tres, std::abs(tg[i] - tnu * tge.grad[i]));
                double tkkt = tres / std::max(norm2(tg), 1e-300) +
                              std::abs(tge.value - budget) / budget;
                if (tkkt < cur_kkt) {
                    cur = trial;
                    accepted = true;
                }
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
    }

    if (best_kkt < kkt) {
        // Snap back to the frontier and restate the residual there.
        double g = cet_cost(best_x, w);
        if (g > 0.0) {
            TaskVector snapped = scaled(best_x, budget / g);
            TaskVector z = axpy(shift, 1.0, snapped);
            TaskVector fgrad(n);
            double val = objective(z, &fgrad);
            Eval ge = cet_eval(snapped, w);
            if (std::isfinite(val) && all_finite(fgrad)) {
                double snapped_kkt =
                    kkt_residual(fgrad, ge.grad, snapped, budget);
                if (snapped_kkt < kkt) {
                    x = snapped;
                    value = val;
                    kkt = snapped_kkt;
                    return true;
                }
            }
        }
    }
    return false;
}

}  // namespace

MaximizeResult concave_maximize(const Objective& objective, const WorkerJob& w,
                                double effective_budget, const TaskVector& shift,
                                const SolverOptions& opts) {
    w.validate();
    if (!(effective_budget >= 0.0) || !std::isfinite(effective_budget))
        throw ValidationError("concave_maximize.effective_budget",
                              "must be nonnegative and finite");
    if (shift.size() != w.size())
        throw ValidationError("concave_maximize.shift", "dimension mismatch with worker");
    if (!all_finite(shift) || !all_nonneg(shift))
        throw ValidationError("concave_maximize.shift",
                              "components must be finite and nonnegative");

    const std::size_t n = w.size();
    MaximizeResult best;
    best.x.assign(n, 0.0);

    if (effective_budget == 0.0) {
        best.value = objective(shift, nullptr);
        best.diag = {0, 0.0, true, 0};
        return best;
    }

    if (n == 1) {
        // One task: the frontier is the single point B s^{1/(gamma+1)}.
        best.x[0] = effective_budget * std::pow(w.s[0], 1.0 / (w.gamma + 1.0));
        TaskVector z{shift[0] + best.x[0]};
        best.value = objective(z, nullptr);
        best.diag = {0, 0.0, true, 1};
        return best;
    }

    RandomStream rs(opts.seed);
    const int restarts = std::max(1, opts.restarts);
    const long per_restart = std::max(64L, opts.max_iters / restarts);
    long total_iters = 0;
    TaskVector fgrad(n);

    auto evaluate = [&](SimplexRun& run) {
        Eval gu = cet_eval(run.u, w);
        double c = effective_budget / gu.value;  // g(u) > 0 on the simplex
        run.x = scaled(run.u, c);
        TaskVector z = axpy(shift, 1.0, run.x);
        run.value = objective(z, &fgrad);
        // grad_u of objective(shift + (B/g(u)) u): c (f_i - (f.u / g) g_i)
        double fu = dot(fgrad, run.u) / gu.value;
        run.sgrad.resize(n);
        run.grads_ok = std::isfinite(run.value);
        for (std::size_t i = 0; i < n; ++i) {
            run.sgrad[i] = c * (fgrad[i] - fu * gu.grad[i]);
            if (!std::isfinite(run.sgrad[i])) run.grads_ok = false;
        }
        run.kkt = run.grads_ok ? kkt_residual(fgrad, gu.grad, run.x, effective_budget)
                               : kInf;
    };

    for (int restart = 0; restart < restarts; ++restart) {
        SimplexRun run;
        run.u.assign(n, 1.0 / static_cast<double>(n));
        if (restart == 0 && opts.hint && opts.hint->size() == n) {
            double tot = sum(*opts.hint);
            if (tot > 0.0 && all_finite(*opts.hint) && all_nonneg(*opts.hint)) {
                for (std::size_t i = 0; i < n; ++i)
                    run.u[i] = std::max((*opts.hint)[i] / tot, 1e-12);
                double tu = sum(run.u);
                for (double& ui : run.u) ui /= tu;
            }
        } else if (restart > 0) {
            // Exponential draws give a uniform point on the simplex.
            double tot = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                run.u[i] = -std::log(rs.uniform());
                tot += run.u[i];
            }
            for (double& ui : run.u) ui /= tot;
        }

        evaluate(run);
        double eta = 0.25;
        SimplexRun cand;

        for (long it = 0; it < per_restart && total_iters < opts.max_iters;
             ++it, ++total_iters) {
            // Stop early only when comfortably inside the contract; otherwise
            // keep polishing until the step size underflows, which typically
            // lands orders of magnitude below kkt_tol.
            if (run.grads_ok && run.kkt < 0.01 * opts.kkt_tol) break;
            // Hand anisotropic instances to the Newton finisher early.
            if (run.grads_ok && run.kkt < 1e-4 && it > 300) break;

            double scale = max_abs(run.sgrad);
            if (!(scale > 0.0) || !std::isfinite(scale)) break;
            double shift_exp = *std::max_element(run.sgrad.begin(), run.sgrad.end());

            // Backtracking multiplicative-weights step. Value comparisons go
            // blind below one ulp, so ties resolve by the KKT residual, which
            // is computed from gradients and stays informative; that is what
            // carries the iterate from ~1e-8 accuracy down to the contract.
            bool accepted = false;
            while (!accepted && eta >= 1e-18) {
                cand.u.resize(n);
                double tot = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    cand.u[i] = run.u[i] * std::exp(eta * (run.sgrad[i] - shift_exp) / scale);
                    tot += cand.u[i];
                }
                for (double& ui : cand.u) ui = std::max(ui / tot, 1e-250);
                evaluate(cand);

                // The band covers evaluation noise: CES conditioning amplifies
                // rounding by |sigma/(sigma-1)|, so near-ties are decided by
                // the KKT residual, which is immune to that common factor.
                double ties = 1e-10 * std::max(1.0, std::abs(run.value));
                if (cand.value > run.value ||
                    (cand.grads_ok && std::abs(cand.value - run.value) <= ties &&
                     cand.kkt < 0.999 * run.kkt)) {
                    std::swap(run, cand);
                    accepted = true;
                    eta = std::min(eta * 1.6, 64.0);
                } else {
                    eta *= 0.5;
                }
            }
            if (!accepted) break;  // step size underflow: converged to float limits
        }

        if (run.grads_ok && !(run.kkt < 0.01 * opts.kkt_tol)) {
            newton_polish(objective, w, effective_budget, shift, run.x, run.value,
                          run.kkt, 0.01 * opts.kkt_tol);
        }

        if (run.value > best.value ||
            (run.value == best.value && run.kkt < best.diag.kkt_residual)) {
            best.x = run.x;
            best.value = run.value;
            best.diag.kkt_residual = run.kkt;
        }
        best.diag.restarts_used = restart + 1;
        best.diag.iterations = total_iters;
        if (total_iters >= opts.max_iters) break;
    }

    best.diag.converged = best.diag.kkt_residual < opts.kkt_tol;
    if (!best.diag.converged) {
        std::ostringstream msg;
        msg << "concave_maximize failed to converge: iterations=" << best.diag.iterations
            << " restarts=" << best.diag.restarts_used
            << " kkt_residual=" << best.diag.kkt_residual << " (tol=" << opts.kkt_tol
            << ") value=" << best.value;
        throw SolverError(msg.str());
    }
    return best;
}

}  // namespace adopt
