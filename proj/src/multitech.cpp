#include "adopt/multitech.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "adopt/adoption.hpp"
#include "adopt/autarky.hpp"
#include "adopt/errors.hpp"

namespace adopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Atom {
    TaskVector v;
    double weight = 0.0;
    int tech_index = -1;  // -1 = human frontier point
};

// Gradient of F with zero components replaced by a large finite slope so the
// linear oracle still points the right way (sigma > 1 diverges at zero).
TaskVector safe_gradient(const TaskVector& z, const WorkerJob& w) {
    Eval e = ces_eval(z, w);
    double cap = 0.0;
    for (double gi : e.grad)
        if (std::isfinite(gi)) cap = std::max(cap, gi);
    cap = std::max(cap, 1.0) * 1e8;
    for (double& gi : e.grad)
        if (!std::isfinite(gi)) gi = cap;
    return e.grad;
}

// Maximize F(sum_a w_a v_a) over the weight simplex by multiplicative-weights
// ascent, warm-started from the current weights. This fully corrective step
// is what makes the recovered convex-combination weights accurate. Near the
// optimum, value comparisons go blind below evaluation noise, so ties are
// decided by the simplex duality gap, which is computed from gradients.
void polish_weights(std::vector<Atom>& atoms, const WorkerJob& w, long iters) {
    const std::size_t m = atoms.size();
    const std::size_t n = w.size();
    if (m <= 1) {
        if (m == 1) atoms[0].weight = 1.0;
        return;
    }
    std::vector<double> wt(m);
    for (std::size_t a = 0; a < m; ++a) wt[a] = std::max(atoms[a].weight, 1e-15);
    double tot = 0.0;
    for (double v : wt) tot += v;
    for (double& v : wt) v /= tot;

    TaskVector z(n);
    std::vector<double> grad_w(m), trial_grad(m), trial(m);
    double eta = 0.5;

    auto value_of = [&](const std::vector<double>& weights, TaskVector& out_z) {
        out_z.assign(n, 0.0);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t i = 0; i < n; ++i) out_z[i] += weights[a] * atoms[a].v[i];
        return ces_output(out_z, w);
    };
    // Simplex duality gap max_a grad_w[a] - w.grad_w; fills grad_w.
    auto gap_of = [&](const std::vector<double>& weights, const TaskVector& at,
                      std::vector<double>& gw) {
        TaskVector g = safe_gradient(at, w);
        double gmax = -kInf, avg = 0.0;
        for (std::size_t a = 0; a < m; ++a) {
            gw[a] = dot(g, atoms[a].v);
            gmax = std::max(gmax, gw[a]);
            avg += weights[a] * gw[a];
        }
        return gmax - avg;
    };

    double value = value_of(wt, z);
    double sgap = gap_of(wt, z, grad_w);

    for (long it = 0; it < iters; ++it) {
        if (sgap <= 1e-13 * std::max(std::abs(value), 1e-300)) break;
        double scale = 0.0, gmax = -kInf;
        for (double v : grad_w) {
            scale = std::max(scale, std::abs(v));
            gmax = std::max(gmax, v);
        }
        if (!(scale > 0.0)) break;

        bool accepted = false;
        while (!accepted && eta >= 1e-16) {
            double tsum = 0.0;
            for (std::size_t a = 0; a < m; ++a) {
                trial[a] = wt[a] * std::exp(eta * (grad_w[a] - gmax) / scale);
                tsum += trial[a];
            }
            for (double& v : trial) v = std::max(v / tsum, 1e-250);
            TaskVector tz;
            double tval = value_of(trial, tz);
            double band = 1e-10 * std::max(std::abs(value), 1e-300);
            double tgap = -1.0;
            bool tie_ok = false;
            if (tval <= value && value - tval <= band) {
                tgap = gap_of(trial, tz, trial_grad);
                tie_ok = tgap < 0.999 * sgap;
            }
            if (tval > value || tie_ok) {
                wt = trial;
                z = tz;
                if (tval > value) value = tval;  // high-water mark, no drift
                if (tgap >= 0.0) {
                    sgap = tgap;
                    grad_w = trial_grad;
                } else {
                    sgap = gap_of(wt, z, grad_w);
                }
                accepted = true;
                eta = std::min(eta * 1.5, 32.0);
            } else {
                eta *= 0.5;
            }
        }
        if (!accepted) break;
    }
    for (std::size_t a = 0; a < m; ++a) atoms[a].weight = wt[a];
}

// Equalize marginal values across atoms by pairwise mass transfers: at the
// weight optimum, grad F(z).v_a is equal across positive-weight atoms. Each
// transfer solves its 1-D root by bisection on the gradient difference, so
// the precision is set by gradient noise, not by value flatness.
void equalize_pairs(std::vector<Atom>& atoms, const WorkerJob& w) {
    const std::size_t m = atoms.size();
    const std::size_t n = w.size();
    if (m <= 1) return;

    auto marginal_gap = [&](const Atom& a, const Atom& b, double delta) {
        TaskVector z(n, 0.0);
        for (const Atom& at : atoms)
            for (std::size_t i = 0; i < n; ++i) z[i] += at.weight * at.v[i];
        for (std::size_t i = 0; i < n; ++i) z[i] += delta * (a.v[i] - b.v[i]);
        TaskVector g = safe_gradient(z, w);
        return dot(g, a.v) - dot(g, b.v);
    };

    for (int sweep = 0; sweep < 4; ++sweep) {
        bool moved = false;
        for (std::size_t ia = 0; ia < m; ++ia) {
            for (std::size_t ib = ia + 1; ib < m; ++ib) {
                Atom& a = atoms[ia];
                Atom& b = atoms[ib];
                double phi0 = marginal_gap(a, b, 0.0);
                // phi is strictly decreasing in the transfer toward a.
                double lo, hi;
                if (phi0 > 0.0) {
                    lo = 0.0;
                    hi = b.weight;
                    if (hi <= 0.0 || marginal_gap(a, b, hi) > 0.0) {
                        if (hi > 0.0) { a.weight += hi; b.weight = 0.0; moved = true; }
                        continue;
                    }
                } else if (phi0 < 0.0) {
                    lo = -a.weight;
                    hi = 0.0;
                    if (lo >= 0.0 || marginal_gap(a, b, lo) < 0.0) {
                        if (lo < 0.0) { b.weight += a.weight; a.weight = 0.0; moved = true; }
                        continue;
                    }
                } else {
                    continue;
                }
                for (int it = 0; it < 60 && hi - lo > 1e-17; ++it) {
                    double mid = 0.5 * (lo + hi);
                    (marginal_gap(a, b, mid) > 0.0 ? lo : hi) = mid;
                }
                double delta = 0.5 * (lo + hi);
                if (delta != 0.0) {
                    a.weight += delta;
                    b.weight -= delta;
                    moved = true;
                }
            }
        }
        if (!moved) break;
    }
}

// Internal exact line search on the strictly concave 1-D restriction.
double line_search(const TaskVector& z, const TaskVector& v, const WorkerJob& w) {
    const double invphi = 0.6180339887498948482;
    auto f = [&](double xi) {
        TaskVector p(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) p[i] = (1.0 - xi) * z[i] + xi * v[i];
        return ces_output(p, w);
    };
    double a = 0.0, b = 1.0;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-12) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a); fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a); fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double k_unit_revenue(const TaskVector& p, const WorkerJob& w,
                      const std::vector<Technology>& techs) {
    double best = unit_revenue(p, w);
    for (const Technology& tech : techs)
        best = std::max(best, tech.chi * dot(p, tech.t));
    return best;
}

double k_unit_revenue(const PriceVector& p, const WorkerJob& w,
                      const std::vector<Technology>& techs) {
    return k_unit_revenue(p.p, w, techs);
}

MultiTechSolution solve_multi(const WorkerJob& w,
                              const std::vector<Technology>& techs,
                              const MultiTechOptions& opts) {
    w.validate();
    if (techs.empty())
        throw ValidationError("solve_multi.techs", "requires at least one technology");
    for (std::size_t k = 0; k < techs.size(); ++k) {
        techs[k].validate("technologies[" + std::to_string(k) + "]");
        if (techs[k].t.size() != w.size())
            throw ValidationError("technologies[" + std::to_string(k) + "].t",
                                  "dimension mismatch with worker");
    }

    const std::size_t n = w.size();
    const std::size_t K = techs.size();
    const double B = w.budget;

    std::vector<TaskVector> tech_points(K);
    for (std::size_t k = 0; k < K; ++k)
        tech_points[k] = scaled(techs[k].t, B * techs[k].chi);

    Objective obj = [&](const TaskVector& zz, TaskVector* g) {
        Eval e = ces_eval(zz, w);
        if (g) *g = e.grad;
        return e.value;
    };

    // Convex-combination state: per-technology weights plus a single human
    // atom x_tilde in X_A (kept exact by the corrective block below).
    AutarkySolution aut = solve_autarky(w);
    std::vector<double> lambda(K, 0.0);
    TaskVector x_tilde = aut.x_A;
    double human_w = 1.0;
    TaskVector hint = aut.x_A;

    auto combine_state = [&]() {
        TaskVector z = scaled(x_tilde, human_w);
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t i = 0; i < n; ++i) z[i] += lambda[k] * tech_points[k][i];
        return z;
    };

    // Block-coordinate correction: re-solve the human bundle exactly for the
    // current technology weights, then re-balance the K+1 atom weights.
    auto corrective_sweep = [&](int rounds) {
        for (int sweep = 0; sweep < rounds; ++sweep) {
            double tech_total = 0.0;
            for (double lk : lambda) tech_total += lk;
            if (1.0 - tech_total > 1e-12) {
                TaskVector shift(n, 0.0);
                for (std::size_t k = 0; k < K; ++k)
                    for (std::size_t i = 0; i < n; ++i)
                        shift[i] += lambda[k] * tech_points[k][i];
                SolverOptions so;
                so.hint = &hint;
                MaximizeResult inner =
                    concave_maximize(obj, w, (1.0 - tech_total) * B, shift, so);
                hint = inner.x;
                human_w = 1.0 - tech_total;
                x_tilde = scaled(inner.x, 1.0 / human_w);
            }
            std::vector<Atom> atoms;
            atoms.reserve(K + 1);
            for (std::size_t k = 0; k < K; ++k)
                atoms.push_back({tech_points[k], lambda[k], static_cast<int>(k)});
            atoms.push_back({x_tilde, human_w, -1});
            polish_weights(atoms, w, 800);
            equalize_pairs(atoms, w);
            for (const Atom& a : atoms) {
                if (a.tech_index >= 0)
                    lambda[static_cast<std::size_t>(a.tech_index)] = a.weight;
                else
                    human_w = a.weight;
            }
        }
    };

    TaskVector z = combine_state();
    double value = ces_output(z, w);

    MultiTechSolution sol;
    sol.gap = kInf;

    long outer = 0;
    const long max_outer = std::min<long>(opts.max_iters, 2000);
    for (; outer < max_outer; ++outer) {
        TaskVector grad = safe_gradient(z, w);

        // Exact linear oracle over conv(X_A u {y_k}): the better of the
        // closed-form CET revenue maximizer and the best technology point.
        TaskVector human = revenue_maximizer(grad, w);
        double human_val = dot(grad, human);
        int best_tech = -1;
        double tech_val = -kInf;
        for (std::size_t k = 0; k < K; ++k) {
            double v = dot(grad, tech_points[k]);
            if (v > tech_val) {  // ties break to the lowest index
                tech_val = v;
                best_tech = static_cast<int>(k);
            }
        }
        bool take_tech = tech_val > human_val;  // exact tie goes to the human atom
        const TaskVector& vertex = take_tech ? tech_points[best_tech] : human;
        double vertex_val = take_tech ? tech_val : human_val;

        sol.gap = vertex_val - dot(grad, z);
        if (sol.gap <= opts.gap_tol * std::max(value, 1e-300)) {
            sol.converged = true;
            break;
        }

        double xi = line_search(z, vertex, w);
        if (take_tech && xi >= 1.0 - 1e-12) {
            bool has_zero = false;
            for (double ti : techs[best_tech].t)
                if (ti == 0.0) has_zero = true;
            // Keep a sliver of human weight when a zero-component technology
            // point would make the gradient diverge (sigma > 1).
            if (has_zero && w.sigma > 1.0) xi = 1.0 - 1e-12;
        }
        human_w *= (1.0 - xi);
        for (double& lk : lambda) lk *= (1.0 - xi);
        if (take_tech) {
            lambda[static_cast<std::size_t>(best_tech)] += xi;
        } else {
            // Fold the new support point into the human atom; the mix lies in
            // X_A, and the corrective sweep snaps it back to the frontier.
            double total = human_w + xi;
            if (total > 0.0) {
                for (std::size_t i = 0; i < n; ++i)
                    x_tilde[i] = (human_w * x_tilde[i] + xi * human[i]) / total;
                human_w = total;
            }
        }

        corrective_sweep(1);
        z = combine_state();
        value = ces_output(z, w);
    }

    if (!sol.converged) {
        std::ostringstream msg;
        msg << "solve_multi failed to converge: outer=" << outer
            << " gap=" << sol.gap << " value=" << value;
        throw SolverError(msg.str());
    }

    // Final weight-recovery sweeps: the gap certificate bounds the value, not
    // the position, so iterate the corrective block to the (lambda, x_H)
    // fixed point.
    TaskVector z_prev = z;
    for (int pass = 0; pass < 8; ++pass) {
        corrective_sweep(1);
        z = combine_state();
        double drift = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            drift = std::max(drift, std::abs(z[i] - z_prev[i]));
        z_prev = z;
        if (drift < 1e-12 * std::max(1.0, max_abs(z))) break;
    }
    value = ces_output(z, w);

    sol.iterations = outer;
    sol.lambdas = lambda;
    for (double& lk : sol.lambdas)
        if (lk < 1e-250) lk = 0.0;  // multiplicative floor artifacts
    sol.x_H = scaled(x_tilde, human_w);
    sol.z_star = z;
    sol.output = value;
    sol.p_star = PriceVector::unit(safe_gradient(z, w), "solve_multi.p_star");
    sol.rho_K_at_p_star = k_unit_revenue(sol.p_star, w, techs);
    return sol;
}

EntryDecision entry_next(const WorkerJob& w,
                         const std::vector<Technology>& adopted,
                         const Technology& candidate) {
    w.validate();
    candidate.validate("candidate");
    if (candidate.t.size() != w.size())
        throw ValidationError("candidate.t", "dimension mismatch with worker");

    EntryDecision out;
    if (adopted.empty()) {
        AutarkySolution aut = solve_autarky(w);
        out.p_star = aut.p_A;
    } else {
        MultiTechSolution sol = solve_multi(w, adopted);
        out.p_star = sol.p_star;
    }

    double pt = dot(out.p_star.p, candidate.t);
    double rho_K = k_unit_revenue(out.p_star, w, adopted);
    out.threshold = (pt > 0.0) ? rho_K / pt : kInf;

    std::vector<Technology> prev(adopted);
    if (!prev.empty()) prev.pop_back();
    double rho_prev = k_unit_revenue(out.p_star, w, prev);
    out.threshold_prev = (pt > 0.0) ? rho_prev / pt : kInf;

    out.adopted = candidate.chi > out.threshold;
    return out;
}

bool all_in_next(const WorkerJob& w, const std::vector<Technology>& adopted,
                 const Technology& candidate) {
    w.validate();
    candidate.validate("candidate");
    if (candidate.t.size() != w.size())
        throw ValidationError("candidate.t", "dimension mismatch with worker");

    for (double ti : candidate.t)
        if (ti == 0.0) return false;  // gradient unbounded / F(t) = 0 cases

    if (!(ces_output(candidate.t, w) > 0.0)) return false;

    Eval fe = ces_eval(candidate.t, w);
    PriceVector p100 = PriceVector::unit(fe.grad, "all_in_next.p100");

    double pt = dot(p100.p, candidate.t);
    if (!(pt > 0.0)) return false;
    if (!(candidate.chi > unit_revenue(p100, w) / pt)) return false;

    for (const Technology& k : adopted) {
        double ratio_bar = dot(p100.p, k.t) / pt;
        if (!(candidate.chi > k.chi * ratio_bar)) return false;
    }
    return true;
}

}  // namespace adopt
