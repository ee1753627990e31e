#include <doctest.h>

#include <cmath>
#include <limits>

#include "adopt/adoption.hpp"
#include "adopt/errors.hpp"
#include "adopt/oracle.hpp"
#include "test_helpers.hpp"

using namespace adopt;
using namespace testutil;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("absolute advantage") {
    WorkerJob w{{1.0, 1.0}, {1.2, 1.0}, 2.0, 1.0, 1.0};
    Technology tech = Technology::unit({0.8, 0.6}, 1.1);
    CHECK(cet_cost(tech.t, w) == doctest::Approx(0.94516).epsilon(1e-4));
    CHECK(absolute_advantage(tech, w));

    // exact boundary: g(e1) = 1 with unit skill, chi = 1
    WorkerJob unit = kCanonical;
    Technology edge = Technology::unit({1.0, 0.0}, 1.0);
    CHECK_FALSE(absolute_advantage(edge, unit));

    // independent of the budget
    for (double b : {0.1, 1.0, 10.0}) {
        WorkerJob wb = w;
        wb.budget = b;
        CHECK(absolute_advantage(tech, wb));
    }

    // direction bundle sits on the frontier in direction t
    TaskVector xt = direction_bundle(tech.t, w);
    CHECK(rel_err(cet_cost(xt, w), w.budget) < 1e-12);
    CHECK(cosine_distance(xt, tech.t) < 1e-12);
}

TEST_CASE("entry threshold closed form and price route agree") {
    double chi0 = entry_threshold(kCanonicalDir, kCanonical);
    CHECK(chi0 == doctest::Approx(std::sqrt(2.0) / 1.4).epsilon(1e-9));

    AutarkySolution a = solve_autarky(kCanonical);
    CHECK(rel_err(chi0, adoption_threshold(kCanonicalDir, a.p_A, kCanonical)) < 1e-12);

    // perfect alignment: threshold equals unit revenue
    CHECK(entry_threshold(a.p_A.p, kCanonical) == doctest::Approx(1.0).epsilon(1e-12));

    // orthogonal direction: infinite threshold
    PriceVector e1 = PriceVector::unit({1.0, 0.0});
    CHECK(adoption_threshold({0.0, 1.0}, e1, kCanonical) == kInf);
}

TEST_CASE("corner threshold closed form") {
    double chi100 = corner_threshold(kCanonicalDir, kCanonical);
    double expect = std::sqrt(1.0 / 0.8 + 1.0 / 0.6) / (std::sqrt(0.8) + std::sqrt(0.6));
    CHECK(chi100 == doctest::Approx(expect).epsilon(1e-9));
    CHECK(chi100 == doctest::Approx(1.02325).epsilon(1e-4));

    // collinear with x_A: both thresholds collapse to 1
    double r2 = 1.0 / std::sqrt(2.0);
    CHECK(corner_threshold({r2, r2}, kCanonical) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(entry_threshold({r2, r2}, kCanonical) == doctest::Approx(1.0).epsilon(1e-9));

    // zero component with finite sigma
    CHECK(corner_threshold({1.0, 0.0}, kCanonical) == kInf);
}

TEST_CASE("threshold pair ordering") {
    ThresholdPair tp = threshold_pair(kCanonicalDir, kCanonical);
    CHECK(tp.chi0 == doctest::Approx(1.01015).epsilon(1e-4));
    CHECK(tp.c == doctest::Approx(1.01535).epsilon(1e-4));
    CHECK(tp.chi100 == doctest::Approx(1.02325).epsilon(1e-4));
    CHECK(tp.chi0 < tp.c);
    CHECK(tp.c < tp.chi100);
    CHECK_FALSE(tp.collinear);

    double r2 = 1.0 / std::sqrt(2.0);
    ThresholdPair col = threshold_pair({r2, r2}, kCanonical);
    CHECK(col.collinear);
    CHECK(col.chi0 == doctest::Approx(col.chi100).epsilon(1e-9));
    CHECK(col.chi0 == doctest::Approx(col.c).epsilon(1e-9));

    RandomStream rs(91);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(rs.uniform_int(0, 2));
        WorkerJob w = random_worker(rs, n);
        TaskVector t = random_direction(rs, n);
        ThresholdPair p = threshold_pair(t, w);
        if (p.collinear) continue;
        CHECK(p.chi0 < p.c);
        CHECK(p.c < p.chi100);
    }
}

TEST_CASE("optimal intensity regimes on the canonical instance") {
    AutarkySolution aut = solve_autarky(kCanonical);

    AdoptionSolution none =
        optimal_intensity(Technology::unit({0.8, 0.6}, 1.005), kCanonical);
    CHECK(none.regime == Regime::NoAdoption);
    CHECK(none.lambda_star == 0.0);
    CHECK(none.output == aut.output);  // bit-identical: same closed-form path

    AdoptionSolution allin =
        optimal_intensity(Technology::unit({0.8, 0.6}, 1.05), kCanonical);
    CHECK(allin.regime == Regime::AllIn);
    CHECK(allin.lambda_star == 1.0);
    CHECK(rel_err(allin.output, 1.05 * ces_output(Technology::unit({0.8, 0.6}, 0).t,
                                                  kCanonical)) < 1e-12);

    AdoptionSolution part =
        optimal_intensity(Technology::unit({0.8, 0.6}, 1.0167), kCanonical);
    CHECK(part.regime == Regime::Partial);
    CHECK(part.lambda_star > 0.0);
    CHECK(part.lambda_star < 1.0);
    CHECK(part.lambda_star == doctest::Approx(0.649068).epsilon(2e-4));
    CHECK(part.output > aut.output);
    CHECK(rel_err(cet_cost(part.x_H, kCanonical),
                  (1.0 - part.lambda_star) * kCanonical.budget) < 1e-9);

    // |f'(lambda*)| via central differences of the inner value function
    auto f_of = [&](double lam) {
        MaximizeResult r = concave_maximize(
            ces_objective(kCanonical), kCanonical, (1.0 - lam) * kCanonical.budget,
            scaled(kCanonicalDir, lam * 1.0167));
        return r.value;
    };
    double h = 1e-5;
    double slope = (f_of(part.lambda_star + h) - f_of(part.lambda_star - h)) / (2 * h);
    CHECK(std::abs(slope) < 1e-6);
}

TEST_CASE("partial intensity matches the brute-force oracle") {
    // oracle: golden-section over lambda with a grid-maximized inner problem
    double chi = 1.0167;
    auto f_grid = [&](double lam) {
        auto obj = [&](const TaskVector& x) {
            TaskVector z = axpy(x, lam * chi, kCanonicalDir);
            return ces_output(z, kCanonical);
        };
        return oracle::grid_maximize(obj, kCanonical, 1.0 - lam, {40000}).value;
    };
    double lam_oracle = oracle::golden_section(f_grid, 0.0, 1.0, 1e-7);
    AdoptionSolution sol =
        optimal_intensity(Technology::unit({0.8, 0.6}, chi), kCanonical);
    CHECK(std::abs(sol.lambda_star - lam_oracle) < 1e-4);
}

TEST_CASE("never all-in when the direction has an idle task (complements)") {
    WorkerJob comp = kCanonical;
    comp.sigma = 0.5;
    Technology tech = Technology::unit({1.0, 0.0}, 50.0);
    AdoptionSolution sol = optimal_intensity(tech, comp);
    CHECK(sol.lambda_star < 1.0);
    CHECK(sol.output >= solve_autarky(comp).output);
}

TEST_CASE("adoption is scale free in the budget") {
    RandomStream rs(92);
    for (int trial = 0; trial < 10; ++trial) {
        WorkerJob w = random_worker(rs, 2);
        w.budget = 1.0;
        TaskVector t = random_direction(rs, 2);
        double chi0 = entry_threshold(t, w);
        double chi100 = corner_threshold(t, w);
        double chi = chi0 + (chi100 - chi0) * rs.uniform(0.2, 0.8);
        Technology tech = Technology::unit(t, chi);

        AdoptionSolution base = optimal_intensity(tech, w);
        for (double b : {0.5, 2.0}) {
            WorkerJob wb = w;
            wb.budget = b;
            AdoptionSolution scaled_sol = optimal_intensity(tech, wb);
            CHECK(scaled_sol.regime == base.regime);
            CHECK(std::abs(scaled_sol.lambda_star - base.lambda_star) < 1e-6);
        }
    }
}

TEST_CASE("alignment-angle form of the adoption condition") {
    RandomStream rs(93);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(rs.uniform_int(0, 2));
        WorkerJob w = random_worker(rs, n);
        TaskVector t = random_direction(rs, n);
        AutarkySolution a = solve_autarky(w);
        double chi = rs.log_uniform(0.5, 3.0);

        double cosphi = dot(a.p_A.p, t);
        bool angle_form = chi * cosphi > a.rho_A;
        bool threshold_form = chi > entry_threshold(t, w);
        CHECK(angle_form == threshold_form);
    }
}

TEST_CASE("regime transitions happen at the closed-form thresholds") {
    ThresholdPair tp = threshold_pair(kCanonicalDir, kCanonical);
    auto regime_at = [&](double chi) {
        return optimal_intensity(Technology::unit({0.8, 0.6}, chi), kCanonical).regime;
    };
    // locate the no-adoption -> partial transition by bisection on the regime
    double lo = 0.9, hi = 1.02;
    for (int it = 0; it < 40; ++it) {
        double mid = 0.5 * (lo + hi);
        (regime_at(mid) == Regime::NoAdoption ? lo : hi) = mid;
    }
    CHECK(std::abs(hi - tp.chi0) < 1e-4);

    lo = 1.02, hi = 1.1;
    for (int it = 0; it < 40; ++it) {
        double mid = 0.5 * (lo + hi);
        (regime_at(mid) == Regime::Partial ? lo : hi) = mid;
    }
    CHECK(std::abs(hi - tp.chi100) < 1e-4);
}
