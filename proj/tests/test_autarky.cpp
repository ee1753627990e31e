#include <doctest.h>

#include <cmath>

#include "adopt/autarky.hpp"
#include "adopt/errors.hpp"
#include "adopt/model_core.hpp"
#include "adopt/oracle.hpp"
#include "test_helpers.hpp"

using namespace adopt;
using namespace testutil;

TEST_CASE("productivity index closed values") {
    CHECK(productivity_index(kCanonical) == doctest::Approx(2.0).epsilon(1e-12));

    WorkerJob w{{1.0, 1.0}, {1.2, 1.0}, 2.0, 1.0, 1.0};
    CHECK(productivity_index(w) ==
          doctest::Approx(std::pow(1.2, 1.0 / 3.0) + 1.0).epsilon(1e-12));

    // Phi increasing in s_j for sigma > 1
    WorkerJob bumped = w;
    bumped.s[0] += 1e-3;
    CHECK(productivity_index(bumped) > productivity_index(w));
}

TEST_CASE("canonical autarky solution") {
    AutarkySolution a = solve_autarky(kCanonical);
    double r2 = 1.0 / std::sqrt(2.0);
    CHECK(rel_err(a.x_A[0], r2) < 1e-12);
    CHECK(rel_err(a.x_A[1], r2) < 1e-12);
    CHECK(rel_err(a.p_A[0], r2) < 1e-12);
    CHECK(rel_err(a.output, 2.0 * std::sqrt(2.0)) < 1e-12);
    CHECK(rel_err(a.rho_A, 1.0) < 1e-12);
    CHECK(rel_err(a.shares[0] + a.shares[1], 1.0) < 1e-12);
}

TEST_CASE("asymmetric skills: power-law prices match the gradient route") {
    WorkerJob w{{1.0, 1.0}, {1.2, 1.0}, 2.0, 1.0, 1.0};
    AutarkySolution a = solve_autarky(w);
    // (theta_i/s_i)^{1/3} normalized; cross-checked against normalized grad F.
    CHECK(a.p_A[0] == doctest::Approx(0.68531046).epsilon(1e-6));
    CHECK(a.p_A[1] == doctest::Approx(0.72825104).epsilon(1e-6));
    Eval f = ces_eval(a.x_A, w);
    CHECK(cosine_distance(a.p_A.p, f.grad) < 1e-12);
}

TEST_CASE("single task reduces to the frontier point") {
    WorkerJob w{{1.0}, {1.7}, 2.0, 0.8, 1.3};
    AutarkySolution a = solve_autarky(w);
    CHECK(rel_err(a.x_A[0], w.budget * std::pow(w.s[0], 1.0 / (w.gamma + 1.0))) < 1e-12);
    CHECK(a.p_A[0] == 1.0);
    CHECK(a.shares[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("output per budget: exponent identity and scale invariance") {
    CHECK(rel_err(autarky_output_per_budget(kCanonical), 2.0 * std::sqrt(2.0)) < 1e-12);

    WorkerJob unit{{1.0}, {1.0}, 2.0, 1.0, 1.0};
    CHECK(rel_err(autarky_output_per_budget(unit), 1.0) < 1e-12);

    WorkerJob w{{0.9, 2.3, 0.4}, {1.1, 0.7, 2.8}, 1.7, 2.2, 1.0};
    double base = autarky_output_per_budget(w);
    for (double b : {0.5, 1.0, 7.0}) {
        WorkerJob wb = w;
        wb.budget = b;
        CHECK(rel_err(autarky_output_per_budget(wb), base) < 1e-12);
    }

    RandomStream rs(81);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(rs.uniform_int(0, 4));
        WorkerJob wr = random_worker(rs, n);
        double phi = productivity_index(wr);
        double expo = (wr.gamma + wr.sigma) / ((wr.sigma - 1.0) * (wr.gamma + 1.0));
        CHECK(rel_err(autarky_output_per_budget(wr), std::pow(phi, expo)) < 1e-9);
    }
}

TEST_CASE("autarky invariants on random instances") {
    RandomStream rs(82);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(rs.uniform_int(0, 4));
        WorkerJob w = random_worker(rs, n);
        AutarkySolution a = solve_autarky(w);

        CHECK(rel_err(cet_cost(a.x_A, w), w.budget) < 1e-9);
        CHECK(rel_err(sum(a.shares), 1.0) < 1e-12);
        Eval f = ces_eval(a.x_A, w);
        CHECK(cosine_distance(a.p_A.p, f.grad) < 1e-8);
        CHECK(rel_err(dot(a.p_A.p, a.x_A), w.budget * a.rho_A) < 1e-9);
        CHECK(rel_err(a.output, ces_output(a.x_A, w)) < 1e-12);
    }
}

TEST_CASE("closed form matches the numerical solver componentwise") {
    RandomStream rs(83);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(rs.uniform_int(0, 4));
        WorkerJob w = random_worker(rs, n);
        AutarkySolution a = solve_autarky(w);
        MaximizeResult r =
            concave_maximize(ces_objective(w), w, w.budget, TaskVector(n, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            CHECK(rel_err(r.x[i], a.x_A[i]) < 1e-6);
    }
}

TEST_CASE("jevons share derivative: values and signs") {
    WorkerJob w{{1.0, 1.0}, {1.2, 1.0}, 2.0, 1.0, 1.0};
    AutarkySolution a = solve_autarky(w);
    CHECK(a.shares[0] == doctest::Approx(0.51518879).epsilon(1e-6));
    CHECK(jevons_share_derivative(w, 0) > 0.0);

    WorkerJob comp = w;
    comp.sigma = 0.5;
    CHECK(jevons_share_derivative(comp, 0) < 0.0);

    AutarkySolution sym = solve_autarky(kCanonical);
    CHECK(rel_err(sym.shares[0], 0.5) < 1e-12);
    CHECK(rel_err(sym.shares[1], 0.5) < 1e-12);

    CHECK_THROWS_AS(jevons_share_derivative(w, 5), ValidationError);

    // analytic derivative vs central finite difference of the share
    RandomStream rs(84);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(rs.uniform_int(0, 2));
        WorkerJob wr = random_worker(rs, n);
        std::size_t i = static_cast<std::size_t>(rs.uniform_int(0, static_cast<long>(n) - 1));
        double h = 1e-6 * wr.s[i];
        WorkerJob up = wr, dn = wr;
        up.s[i] += h;
        dn.s[i] -= h;
        double fd = (solve_autarky(up).shares[i] - solve_autarky(dn).shares[i]) / (2.0 * h);
        double an = jevons_share_derivative(wr, i);
        CHECK(rel_err(an, fd) < 1e-4);
        if (std::abs(fd) > 1e-12)
            CHECK((an > 0) == (fd > 0));
    }
}
