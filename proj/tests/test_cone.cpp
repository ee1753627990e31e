#include <doctest.h>

#include <cmath>

#include "adopt/adoption.hpp"
#include "adopt/cone.hpp"
#include "adopt/errors.hpp"
#include "adopt/rng.hpp"
#include "test_helpers.hpp"

using namespace adopt;
using namespace testutil;

namespace {
constexpr double kPi = 3.14159265358979323846;

ConeSpec symmetric_cone(double chi) {
    AutarkySolution a = solve_autarky(kCanonical);
    return ConeSpec{a.p_A, a.rho_A, chi};
}
}  // namespace

TEST_CASE("half angle across the capability range") {
    AutarkySolution a = solve_autarky(kCanonical);

    auto degenerate = half_angle(ConeSpec{a.p_A, 1.0, 1.0});
    REQUIRE(degenerate.has_value());
    CHECK(*degenerate == 0.0);

    auto quarter = half_angle(ConeSpec{a.p_A, 1.0, std::sqrt(2.0)});
    REQUIRE(quarter.has_value());
    CHECK(*quarter == doctest::Approx(kPi / 4.0).epsilon(1e-12));

    auto wide = half_angle(ConeSpec{a.p_A, 1.0, 1e9});
    REQUIRE(wide.has_value());
    CHECK(*wide > kPi / 2.0 - 1e-8);

    CHECK_FALSE(half_angle(ConeSpec{a.p_A, 1.0, 0.5}).has_value());
}

TEST_CASE("strict cone membership") {
    PriceVector p = PriceVector::unit({1.0, 1.0});
    ConeSpec cone{p, 1.0, std::sqrt(2.0)};
    CHECK(in_cone(p.p, cone));
    // p.t equals rho/chi bit-for-bit: both are 1/sqrt(2); boundary excluded
    CHECK_FALSE(in_cone({1.0, 0.0}, cone));
    CHECK_FALSE(in_cone({1.0, 0.0}, ConeSpec{p, 1.0, 1.2}));
    CHECK(in_cone({1.0, 0.0}, ConeSpec{p, 1.0, 1.5}));
}

TEST_CASE("square-root law near the threshold") {
    SqrtApprox near = sqrt_approximation_error(1.0, 1.001);
    CHECK(near.exact == doctest::Approx(0.0446990).epsilon(1e-4));
    CHECK(near.approx == doctest::Approx(std::sqrt(0.002)).epsilon(1e-12));
    CHECK(near.rel_error < 1e-3);
    CHECK(near.in_regime);

    SqrtApprox tiny = sqrt_approximation_error(1.0, 1.0 + 1e-6);
    CHECK(tiny.rel_error < 1e-4);

    SqrtApprox far = sqrt_approximation_error(1.0, 2.0);
    CHECK(far.rel_error > 0.05);
    CHECK_FALSE(far.in_regime);

    CHECK_THROWS_AS(sqrt_approximation_error(1.0, 0.9), ValidationError);
}

TEST_CASE("monte carlo measure hits exact geometric cases") {
    // cone half-angle pi/4 covers the whole quadrant
    MeasureResult full = adoption_measure(symmetric_cone(std::sqrt(2.0)), 20000, 7);
    CHECK(full.measure == 1.0);

    // empty cone
    MeasureResult empty = adoption_measure(symmetric_cone(0.5), 20000, 7);
    CHECK(empty.measure == 0.0);

    // half-angle pi/8 centred in the quadrant covers exactly half the arc
    double chi = 1.0 / std::cos(kPi / 8.0);
    MeasureResult half = adoption_measure(symmetric_cone(chi), 100000, 42);
    double se = std::sqrt(0.25 / 100000.0);
    CHECK(std::abs(half.measure - 0.5) < 3.0 * se);

    // deterministic under a fixed seed
    MeasureResult again = adoption_measure(symmetric_cone(chi), 100000, 42);
    CHECK(again.measure == half.measure);
}

TEST_CASE("measure standard error shrinks with the sample budget") {
    ConeSpec cone = symmetric_cone(1.0 / std::cos(kPi / 8.0));
    MeasureResult a = adoption_measure(cone, 10000, 5);
    MeasureResult b = adoption_measure(cone, 20000, 5);
    MeasureResult c = adoption_measure(cone, 40000, 5);
    // variance bound m(1-m)/n halves per doubling (m is stable here)
    CHECK(b.std_error * b.std_error < 0.6 * a.std_error * a.std_error);
    CHECK(c.std_error * c.std_error < 0.6 * b.std_error * b.std_error);
    double se = std::sqrt(0.25 / 10000.0);
    CHECK(std::abs(a.measure - 0.5) < 4.0 * se);
}

TEST_CASE("cone nesting and agreement with the entry threshold") {
    RandomStream rs(101);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(rs.uniform_int(0, 1));
        WorkerJob w = random_worker(rs, n);
        AutarkySolution a = solve_autarky(w);
        double chi_small = a.rho_A * rs.uniform(1.01, 1.5);
        double chi_large = chi_small * rs.uniform(1.1, 2.0);
        ConeSpec small{a.p_A, a.rho_A, chi_small};
        ConeSpec large{a.p_A, a.rho_A, chi_large};
        for (int k = 0; k < 100; ++k) {
            TaskVector t = positive_direction(n, 555, static_cast<std::uint64_t>(k));
            if (in_cone(t, small)) CHECK(in_cone(t, large));
            CHECK(in_cone(t, small) == (chi_small > entry_threshold(t, w)));
        }
    }
}

TEST_CASE("half angle grows monotonically in capability") {
    AutarkySolution a = solve_autarky(kCanonical);
    double prev = 0.0;
    for (int i = 0; i < 100; ++i) {
        double chi = a.rho_A * (1.0 + 0.05 * (i + 1));
        auto phi = half_angle(ConeSpec{a.p_A, a.rho_A, chi});
        REQUIRE(phi.has_value());
        CHECK(*phi > prev);
        prev = *phi;
    }
}

TEST_CASE("curvature sweep: wider cones and vanishing partial region") {
    WorkerJob base{{1.0, 2.0}, {1.5, 1.0}, 1.2, 0.8, 1.0};
    TaskVector t{0.8, 0.6};
    double nrm = norm2(t);
    for (double& v : t) v /= nrm;

    auto rows = curvature_sweep(base, {2.0, 4.0, 8.0, 16.0}, 1.6, t);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].phi0 >= rows[i - 1].phi0 - 1e-12);
        CHECK(rows[i].chi_ratio <= rows[i - 1].chi_ratio + 1e-12);
        CHECK(rows[i].chi_ratio >= 1.0);
    }

    // gamma+sigma -> large: prices flatten to the uniform direction
    WorkerJob flat = base;
    double scale = 1000.0 / (base.gamma + base.sigma);
    flat.gamma = base.gamma * scale;
    flat.sigma = base.sigma * scale;
    AutarkySolution a = solve_autarky(flat);
    TaskVector uniform(2, 1.0 / std::sqrt(2.0));
    CHECK(cosine_distance(a.p_A.p, uniform) < 1e-3);
}
