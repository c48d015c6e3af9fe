#include <doctest.h>

#include <cmath>
#include <random>

#include "gibbs_tree/errors.hpp"
#include "gibbs_tree/root_solver.hpp"
#include "support/generators.hpp"

using namespace gibbs_tree;

TEST_CASE("SolverConfig validation") {
    CHECK_NOTHROW(SolverConfig{}.validate());
    CHECK_THROWS_AS((SolverConfig{99}.validate()), DomainError);
    CHECK_THROWS_AS((SolverConfig{1000, 0.0}.validate()), DomainError);
    CHECK_THROWS_AS((SolverConfig{1000, 1e-12, 0.5}.validate()), DomainError);
}

TEST_CASE("scan_sign_changes") {
    SolverConfig cfg;
    cfg.grid_points = 100;
    SUBCASE("single crossing") {
        const auto br = scan_sign_changes([](double x) { return x - 1.0; }, 0.5, 2.0, cfg);
        REQUIRE(br.size() == 1);
        CHECK(br[0].lo <= 1.0);
        CHECK(br[0].hi >= 1.0);
        CHECK(br[0].f_lo * br[0].f_hi <= 0.0);
    }
    SUBCASE("geometric grid") {
        const auto br = scan_sign_changes([](double x) { return std::log(x) - 3.0; }, 1e-3, 1e3, cfg,
                                          GridKind::Geometric);
        REQUIRE(br.size() == 1);
        CHECK(br[0].lo < std::exp(3.0));
        CHECK(br[0].hi > std::exp(3.0));
    }
    SUBCASE("g(x) - x in the uniqueness regime has one crossing") {
        const auto p = ModelParams::make(3, 3, 0.5);
        const auto [lo, hi] = scan_interval_for_im(p, 1);
        const auto br = scan_sign_changes([&](double x) { return g_map(x, p, 1) - x; }, lo, hi, SolverConfig{},
                                          GridKind::Geometric);
        REQUIRE(br.size() == 1);
        CHECK(br[0].lo <= 1.0);
        CHECK(br[0].hi >= 1.0);
    }
    SUBCASE("g(x) - x below the threshold has at least three crossings") {
        const auto p = ModelParams::make(3, 3, 0.1);
        const auto [lo, hi] = scan_interval_for_im(p, 1);
        const auto br = scan_sign_changes([&](double x) { return g_map(x, p, 1) - x; }, lo, hi, SolverConfig{},
                                          GridKind::Geometric);
        CHECK(br.size() >= 3);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(scan_sign_changes([](double x) { return x; }, 1.0, 0.0, cfg), DomainError);
        CHECK_THROWS_AS(scan_sign_changes([](double x) { return x; }, 0.0, 1.0, cfg, GridKind::Geometric),
                        DomainError);
        try {
            scan_sign_changes([](double x) { return x > 0.5 ? NAN : x; }, 0.0, 1.0, cfg);
            FAIL("expected EvaluationError");
        } catch (const EvaluationError& e) {
            CHECK(e.abscissa() > 0.5);
        }
    }
}

TEST_CASE("refine") {
    SolverConfig cfg;
    const ScalarFn sq = [](double x) { return x * x - 2.0; };
    CHECK(refine(sq, {1.0, 2.0, -1.0, 2.0}, cfg) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
    CHECK(std::abs(refine(sq, {1.0, 2.0, -1.0, 2.0}, cfg) - 1.41421356237) < 1e-11);

    const auto p = ModelParams::make(3, 3, 0.5);
    const ScalarFn gap = [&](double x) { return g_map(x, p, 1) - x; };
    CHECK(std::abs(refine(gap, {0.9, 1.2, gap(0.9), gap(1.2)}, cfg) - 1.0) <= 1e-12);

    CHECK(refine(sq, {std::sqrt(2.0), 2.0, 0.0, 2.0}, cfg) == std::sqrt(2.0));
    CHECK_THROWS_AS(refine(sq, {1.5, 2.0, sq(1.5), 2.0}, cfg), DomainError);

    SolverConfig tight = cfg;
    tight.max_refine_iters = 2;
    CHECK_THROWS_AS(refine([](double x) { return std::atan(x - 0.123456); }, {-100.0, 100.0, -1.5, 1.5}, tight),
                    ConvergenceError);
}

TEST_CASE("refine on the I'_m polynomial") {
    const auto p = ModelParams::make(3, 3, 0.05);
    const ScalarFn poly = [&](double z) { return poly11(z, p, 1); };
    SolverConfig cfg;
    const auto brackets = scan_sign_changes(poly, 1.01, 4.0, cfg);
    REQUIRE(!brackets.empty());
    const double r = refine(poly, brackets.front(), cfg);
    const Poly11Terms at = poly11_terms(r, p, 1);
    CHECK(std::abs(at.value) < 1e-6L * at.scale);
}

TEST_CASE("scan_interval_for_im") {
    const auto p = ModelParams::make(3, 3, 0.1);
    const auto [lo, hi] = scan_interval_for_im(p, 1);
    CHECK(lo == doctest::Approx(0.001 * 0.99).epsilon(1e-13));
    CHECK(hi == doctest::Approx(std::pow(2.0 / 1.1, 3) * 1.01).epsilon(1e-13));

    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const ModelParams r = testing::random_solver_params(rng);
        const int m = testing::random_im_index(rng, r.q);
        const auto [a, b] = scan_interval_for_im(r, m);
        CHECK(a < 1.0);
        CHECK(b > 1.0);
        for (const auto& s : solve_im(r, m)) {
            CHECK(s.x >= a);
            CHECK(s.x <= b);
        }
    }
}

TEST_CASE("solve_im examples") {
    SUBCASE("uniqueness regime") {
        const auto sols = solve_im(ModelParams::make(3, 3, 0.5), 1);
        REQUIRE(sols.size() == 1);
        CHECK(sols[0].x == 1.0);
        CHECK(sols[0].y == 1.0);
    }
    SUBCASE("three solutions below the threshold") {
        const auto p = ModelParams::make(3, 3, 0.1);
        const auto sols = solve_im(p, 1);
        REQUIRE(sols.size() == 3);
        CHECK(sols[0].x < 1.0);
        CHECK(sols[1].x == 1.0);
        CHECK(sols[2].x > 1.0);
        CHECK(std::abs(sols[0].x - sols[2].y) <= 1e-9);
        CHECK(std::abs(sols[2].x - sols[0].y) <= 1e-9);
        for (const auto& s : sols) {
            CHECK(std::abs(g_map(s.x, p, 1) - s.x) <= 1e-10);
            CHECK(s.y == doctest::Approx(f_pow_k(s.x, p, 1)).epsilon(1e-15));
            CHECK(s.residual_full <= 1e-9);
        }
    }
    SUBCASE("at the threshold x = 1 is present") {
        const auto sols = solve_im(ModelParams::make(3, 3, 0.25), 1);
        CHECK(std::any_of(sols.begin(), sols.end(), [](const ReducedScalar& s) { return s.x == 1.0; }));
    }
    SUBCASE("hypothesis violations") {
        CHECK_THROWS_AS(solve_im(ModelParams::make(5, 3, 0.1), 1), HypothesisError);
        CHECK_THROWS_AS(solve_im(ModelParams::make(3, 3, 1.0), 1), HypothesisError);
        CHECK_THROWS_AS(solve_im(ModelParams::make(3, 3, 0.1), 3), DomainError);
    }
}

TEST_CASE("solve_im properties on random parameters") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 40; ++trial) {
        const ModelParams p = testing::random_solver_params(rng);
        const int m = testing::random_im_index(rng, p.q);
        const auto sols = solve_im(p, m);
        CAPTURE(p.q);
        CAPTURE(p.k);
        CAPTURE(p.theta);
        CAPTURE(m);
        CHECK(sols.size() % 2 == 1);
        CHECK(std::is_sorted(sols.begin(), sols.end(),
                             [](const ReducedScalar& a, const ReducedScalar& b) { return a.x < b.x; }));
        const double cr = theta_critical(p.q, p.k);
        if (p.theta < cr - 0.01) CHECK(sols.size() >= 3);
        if (p.theta > cr + 0.01) CHECK(sols.size() == 1);
        for (const auto& s : sols) {
            CHECK(s.residual_full <= 1e-9);
            // (y, x) is also returned.
            const bool paired = std::any_of(sols.begin(), sols.end(), [&](const ReducedScalar& o) {
                return std::abs(o.x - s.y) <= 1e-9 * std::max(1.0, s.y);
            });
            CHECK(paired);
        }
        CHECK(solve_im(p, m).size() == sols.size());
    }
}

TEST_CASE("solve_im bifurcation brackets theta_critical") {
    for (const auto [q, k] : {std::pair{3, 3}, std::pair{3, 4}, std::pair{4, 5}, std::pair{4, 7}}) {
        for (int m = 1; m < q; ++m) {
            double below = 0.01, above = 0.99;
            while (above - below > 1e-4) {
                const double mid = 0.5 * (below + above);
                (solve_im(ModelParams::make(q, k, mid), m).size() >= 3 ? below : above) = mid;
            }
            const double cr = theta_critical(q, k);
            CAPTURE(q);
            CAPTURE(k);
            CAPTURE(m);
            CHECK(below <= cr + 1e-12);
            CHECK(above >= cr - 1e-4);
        }
    }
}

TEST_CASE("solve_im_prime examples") {
    SUBCASE("always contains (1, 1)") {
        std::mt19937_64 rng(53);
        for (int trial = 0; trial < 20; ++trial) {
            const ModelParams p = testing::random_solver_params(rng);
            const auto res = solve_im_prime(p, testing::random_im_prime_index(rng, p.q));
            CHECK(std::any_of(res.solutions.begin(), res.solutions.end(),
                              [](const ReducedScalar& s) { return s.x == 1.0 && s.y == 1.0; }));
        }
    }
    SUBCASE("k = 7, q = 5, m = 2 below and above the threshold") {
        const double cr = theta_critical(5, 7);
        const auto below = solve_im_prime(ModelParams::make(5, 7, cr - 0.1), 2);
        CHECK(below.solutions.size() >= 3);
        const auto above = solve_im_prime(ModelParams::make(5, 7, cr + 0.1), 2);
        REQUIRE(above.solutions.size() == 1);
        CHECK(above.solutions[0].x == 1.0);
    }
    SUBCASE("q = 3, k = 3 solutions") {
        const auto p = ModelParams::make(3, 3, 0.1);
        const auto res = solve_im_prime(p, 1);
        REQUIRE(res.solutions.size() == 3);
        for (const auto& s : res.solutions) {
            REQUIRE(s.z.has_value());
            REQUIRE(s.t.has_value());
            CHECK(s.x == doctest::Approx(std::pow(*s.z, 3)).epsilon(1e-12));
            CHECK(s.y == doctest::Approx(std::pow(*s.t, 3)).epsilon(1e-12));
            CHECK(im_prime_residual(*s.z, *s.t, p, 1) <= 1e-9);
            CHECK(s.residual_full <= 1e-9);
            const Poly11Terms at = poly11_terms(*s.z, p, 1);
            CHECK(std::abs(at.value) <= 1e-6L * at.scale);
        }
        CHECK(std::abs(res.solutions[0].x - res.solutions[2].y) <= 1e-9);
    }
    SUBCASE("hypothesis violations") {
        CHECK_THROWS_AS(solve_im_prime(ModelParams::make(3, 3, 0.1), 2), DomainError);
        CHECK_THROWS_AS(solve_im_prime(ModelParams::make(7, 3, 0.1), 1), HypothesisError);
    }
}

TEST_CASE("solve_im_prime properties on random parameters") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 40; ++trial) {
        const ModelParams p = testing::random_solver_params(rng);
        const int m = testing::random_im_prime_index(rng, p.q);
        const auto res = solve_im_prime(p, m);
        CAPTURE(p.q);
        CAPTURE(p.k);
        CAPTURE(p.theta);
        CAPTURE(m);
        const double cr = theta_critical(p.q, p.k);
        if (p.theta < cr - 0.01) CHECK(res.solutions.size() >= 3);
        if (p.theta > cr + 0.01) CHECK(res.solutions.size() == 1);
        for (const auto& s : res.solutions) {
            CHECK(s.residual_full <= 1e-9);
            CHECK(im_prime_residual(*s.z, *s.t, p, m) <= 1e-9);
        }
    }
}
