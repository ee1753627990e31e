#include <doctest.h>

#include <cmath>

#include "adopt/adoption.hpp"
#include "adopt/errors.hpp"
#include "adopt/multitech.hpp"
#include "test_helpers.hpp"

using namespace adopt;
using namespace testutil;

TEST_CASE("k_unit_revenue reductions") {
    WorkerJob w = kCanonical;
    AutarkySolution a = solve_autarky(w);

    CHECK(k_unit_revenue(a.p_A, w, {}) == unit_revenue(a.p_A, w));

    // a technology inside the PPS adds nothing at any price
    Technology weak = Technology::unit({0.8, 0.6}, 0.7);
    REQUIRE(weak.chi * cet_cost(weak.t, w) < 1.0);
    RandomStream rs(111);
    for (int k = 0; k < 20; ++k) {
        TaskVector p = random_direction(rs, 2, 0.01);
        CHECK(k_unit_revenue(p, w, {weak}) == doctest::Approx(unit_revenue(p, w)).epsilon(1e-12));
    }

    // aligned strong technology doubles the support value at p_A
    Technology aligned{a.p_A.p, 2.0};
    CHECK(k_unit_revenue(a.p_A, w, {aligned}) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("single-technology solves agree between Frank-Wolfe and golden-section") {
    Technology tech = Technology::unit({0.8, 0.6}, 1.0167);
    AdoptionSolution golden = optimal_intensity(tech, kCanonical);
    MultiTechSolution fw = solve_multi(kCanonical, {tech});
    CHECK(std::abs(fw.lambdas[0] - golden.lambda_star) < 1e-5);
    CHECK(rel_err(fw.output, golden.output) < 1e-7);
    CHECK(fw.converged);
    CHECK(rel_err(cet_cost(fw.x_H, kCanonical),
                  (1.0 - fw.lambdas[0]) * kCanonical.budget) < 1e-6);
}

TEST_CASE("duplicate technologies leave the value unchanged") {
    Technology tech = Technology::unit({0.8, 0.6}, 1.0167);
    MultiTechSolution one = solve_multi(kCanonical, {tech});
    MultiTechSolution two = solve_multi(kCanonical, {tech, tech});
    CHECK(rel_err(two.output, one.output) < 1e-8);
    CHECK(std::abs(two.lambdas[0] + two.lambdas[1] -
                   (one.lambdas[0])) < 1e-5);
}

TEST_CASE("below-threshold technology receives no weight") {
    WorkerJob w = kCanonical;
    Technology below = Technology::unit({0.6, 0.8}, 0.9);   // under chi_0
    Technology above = Technology::unit({0.8, 0.6}, 1.0167);
    REQUIRE(below.chi < entry_threshold(below.t, w));
    MultiTechSolution sol = solve_multi(w, {below, above});
    CHECK(sol.lambdas[0] < 1e-6);
    CHECK(sol.lambdas[1] > 0.0);
    CHECK(sol.output >= solve_multi(w, {above}).output - 1e-8);
}

TEST_CASE("entry_next reduces to the single-technology threshold at K=0") {
    RandomStream rs(112);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(rs.uniform_int(0, 2));
        WorkerJob w = random_worker(rs, n);
        TaskVector t = random_direction(rs, n);
        Technology cand = Technology::unit(t, rs.log_uniform(0.5, 3.0));
        EntryDecision d = entry_next(w, {}, cand);
        CHECK(rel_err(d.threshold, entry_threshold(cand.t, w)) < 1e-9);
        CHECK(d.adopted == (cand.chi > entry_threshold(cand.t, w)));
        CHECK(d.threshold_prev == doctest::Approx(d.threshold).epsilon(1e-12));
    }
}

TEST_CASE("adopting an aligned technology raises the bar for others") {
    // all-in on a p_A-aligned technology doubles rho without rotating prices
    WorkerJob w = kCanonical;
    AutarkySolution a = solve_autarky(w);
    Technology aligned{a.p_A.p, 2.0};
    Technology cand = Technology::unit({0.1, 0.995}, 1.0);

    EntryDecision before = entry_next(w, {}, cand);
    EntryDecision after = entry_next(w, {aligned}, cand);
    CHECK(after.threshold > before.threshold * 1.5);
    // same-price comparison: dropping the adopted tech lowers the bar
    CHECK(after.threshold_prev <= after.threshold);
}

TEST_CASE("candidate identical to an adopted technology is not re-adopted") {
    Technology tech = Technology::unit({0.8, 0.6}, 1.0167);
    EntryDecision d = entry_next(kCanonical, {tech}, tech);
    CHECK_FALSE(d.adopted);
}

TEST_CASE("all_in_next base case matches the corner threshold") {
    RandomStream rs(113);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(rs.uniform_int(0, 1));
        WorkerJob w = random_worker(rs, n);
        TaskVector t = random_direction(rs, n);
        double chi100 = corner_threshold(t, w);
        Technology lo = Technology::unit(t, chi100 * 0.99);
        Technology hi = Technology::unit(t, chi100 * 1.01);
        CHECK_FALSE(all_in_next(w, {}, lo));
        CHECK(all_in_next(w, {}, hi));
    }
}

TEST_CASE("all_in_next against a weak incumbent") {
    WorkerJob w = kCanonical;
    Technology weak = Technology::unit({0.6, 0.8}, 1.011);
    Technology strong = Technology::unit({0.8, 0.6}, 10.0);
    CHECK(all_in_next(w, {weak}, strong));
    MultiTechSolution sol = solve_multi(w, {weak, strong});
    CHECK(sol.lambdas[1] > 1.0 - 1e-6);

    // equal-chi identical candidate: the strict ratio condition fails
    CHECK_FALSE(all_in_next(w, {strong}, strong));

    // zero-component direction never goes all-in
    Technology corner = Technology::unit({1.0, 0.0}, 100.0);
    CHECK_FALSE(all_in_next(w, {}, corner));
}

TEST_CASE("hull consistency: the solve dominates random feasible samples") {
    RandomStream rs(114);
    WorkerJob w = random_worker(rs, 3);
    std::vector<Technology> techs = {
        Technology::unit(random_direction(rs, 3), 1.4),
        Technology::unit(random_direction(rs, 3), 1.1)};
    MultiTechSolution sol = solve_multi(w, techs);

    for (int k = 0; k < 10000; ++k) {
        // random convex combination of a frontier point and technology points
        TaskVector dir = positive_direction(3, 999, static_cast<std::uint64_t>(k));
        TaskVector x = direction_bundle(dir, w);
        double a = counter_uniform(999, 10, static_cast<std::uint64_t>(k));
        double b = counter_uniform(999, 11, static_cast<std::uint64_t>(k)) * (1.0 - a);
        TaskVector z(3, 0.0);
        for (std::size_t i = 0; i < 3; ++i)
            z[i] = (1.0 - a - b) * x[i] + a * w.budget * techs[0].chi * techs[0].t[i] +
                   b * w.budget * techs[1].chi * techs[1].t[i];
        CHECK(ces_output(z, w) <= sol.output * (1.0 + 1e-6));
    }
}

TEST_CASE("rising bar at fixed prices and monotone value") {
    RandomStream rs(115);
    for (int trial = 0; trial < 10; ++trial) {
        WorkerJob w = random_worker(rs, 2);
        AutarkySolution a = solve_autarky(w);
        Technology first =
            Technology::unit(random_direction(rs, 2),
                             entry_threshold(random_direction(rs, 2), w) * 1.2);
        std::vector<Technology> small = {};
        std::vector<Technology> large = {first};

        TaskVector cand_t = random_direction(rs, 2);
        // rho_K(p) is pointwise monotone in the set, so the bar at any common
        // price vector can only rise
        for (const PriceVector& p : {a.p_A, PriceVector::unit(random_direction(rs, 2))}) {
            double pt = dot(p.p, cand_t);
            if (pt <= 0.0) continue;
            CHECK(k_unit_revenue(p, w, large) / pt >=
                  k_unit_revenue(p, w, small) / pt - 1e-12);
        }

        MultiTechSolution one = solve_multi(w, large);
        std::vector<Technology> both = {first, Technology::unit(cand_t, 1.3)};
        MultiTechSolution two = solve_multi(w, both);
        CHECK(two.output >= one.output - 1e-8 * one.output);

        double lam_total = 0.0;
        for (double lk : two.lambdas) lam_total += lk;
        CHECK(lam_total <= 1.0 + 1e-9);
        CHECK(cet_cost(two.x_H, w) <= (1.0 - lam_total) * w.budget + 1e-9);
    }
}
