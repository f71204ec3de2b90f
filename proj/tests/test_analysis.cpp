#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rrcover/analysis.hpp"
#include "rrcover/errors.hpp"
#include "test_graphs.hpp"

using namespace rrcover;
namespace tg = rrcover::testgraphs;

namespace {

// Test-side polynomial evaluation of the generating function, built directly
// from the child lists so it stays independent of OffspringLaw.
double pgf_reference(const BaseGraph& g, const RotorDistributionFamily& dists, int type,
                     const std::vector<double>& z) {
    double total = 0.0;
    for (int k = 0; k <= g.degree(type); ++k) {
        double term = dists.probability(type, k);
        for (int j = 1; j <= g.type_count(); ++j) {
            const int c = good_children_count(g, type, j, k);
            for (int e = 0; e < c; ++e) term *= z[static_cast<std::size_t>(j - 1)];
        }
        total += term;
    }
    return total;
}

const OffspringLaw::Atom* find_atom(const OffspringLaw& law, int type, std::vector<int> counts) {
    for (const auto& atom : law.atoms(type)) {
        if (atom.counts == counts) return &atom;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("good children counts on the embeddings") {
    const auto c = tg::embedding_c();
    CHECK(good_children_count(c, 2, 1, 0) == 2);
    CHECK(good_children_count(c, 2, 2, 1) == 1);
    const auto a = tg::embedding_a();
    CHECK(good_children_count(a, 2, 1, 1) == 2);
    for (const auto& g : {tg::fibonacci(), a, c}) {
        for (int i = 1; i <= g.type_count(); ++i) {
            // Past the last position nothing is good.
            for (int j = 1; j <= g.type_count(); ++j) {
                CHECK(good_children_count(g, i, j, g.degree(i)) == 0);
            }
            // Summing over types leaves exactly the positions past k.
            for (int k = 0; k <= g.degree(i); ++k) {
                int sum = 0;
                for (int j = 1; j <= g.type_count(); ++j) sum += good_children_count(g, i, j, k);
                CHECK(sum == g.degree(i) - k);
            }
        }
    }
    CHECK_THROWS_AS(good_children_count(c, 2, 1, 4), std::domain_error);
    CHECK_THROWS_AS(good_children_count(c, 2, 1, -1), std::domain_error);
}

TEST_CASE("offspring law atoms for embedding a, type 2, uniform") {
    const auto g = tg::embedding_a();
    const auto law = offspring_law(g, RotorDistributionFamily::uniform(g));
    REQUIRE(law.atoms(2).size() == 4);
    for (auto counts : {std::vector<int>{2, 1}, {2, 0}, {1, 0}, {0, 0}}) {
        const auto* atom = find_atom(law, 2, counts);
        REQUIRE(atom != nullptr);
        CHECK(atom->exact_probability == Rational(1, 4));
    }
}

TEST_CASE("offspring law merges coinciding count vectors") {
    // Single type, two children of its own type: states 0..2 give counts
    // 2,1,0; a lopsided law keeps three distinct atoms, but a point mass at
    // the last state collapses to the zero atom.
    const auto g = tg::single_type(3);
    const auto full = offspring_law(g, RotorDistributionFamily::uniform(g));
    CHECK(full.atoms(1).size() == 4);
    const auto point = offspring_law(g, RotorDistributionFamily::point_mass(g, {3}));
    REQUIRE(point.atoms(1).size() == 1);
    CHECK(point.atoms(1)[0].counts == std::vector<int>{0});
    CHECK(point.atoms(1)[0].exact_probability == Rational(1));
}

TEST_CASE("homogeneous tree atoms sit at b - k") {
    const int b = 3;
    const auto g = tg::single_type(b);
    const auto law = offspring_law(g, RotorDistributionFamily::uniform(g));
    REQUIRE(law.atoms(1).size() == static_cast<std::size_t>(b) + 1);
    for (int k = 0; k <= b; ++k) {
        const auto* atom = find_atom(law, 1, {b - k});
        REQUIRE(atom != nullptr);
        CHECK(atom->exact_probability == Rational(1, b + 1));
    }
}

TEST_CASE("pgf evaluation at boundary points") {
    const auto uniform_c = RotorDistributionFamily::uniform(tg::embedding_c());
    const auto law_c = offspring_law(tg::embedding_c(), uniform_c);
    const std::vector<double> z10{1.0, 0.0};
    CHECK(pgf_eval(law_c, 2, z10) == doctest::Approx(0.25));

    const auto law_b = offspring_law(tg::embedding_b(), RotorDistributionFamily::uniform(tg::embedding_b()));
    const std::vector<double> z01{0.0, 1.0};
    CHECK(pgf_eval(law_b, 2, z01) == doctest::Approx(0.25));

    for (const auto* law : {&law_c, &law_b}) {
        const std::vector<double> ones{1.0, 1.0};
        CHECK(pgf_eval(*law, 1, ones) == doctest::Approx(1.0));
        CHECK(pgf_eval(*law, 2, ones) == doctest::Approx(1.0));
    }
    const std::vector<double> bad{1.5, 0.0};
    CHECK_THROWS_AS(pgf_eval(law_c, 2, bad), std::domain_error);
}

TEST_CASE("pgf agrees with the direct polynomial on a grid") {
    const auto g = tg::embedding_b();
    const auto dists = RotorDistributionFamily::uniform(g);
    const auto law = offspring_law(g, dists);
    for (double z1 : {0.0, 0.3, 0.7, 1.0}) {
        for (double z2 : {0.0, 0.5, 1.0}) {
            const std::vector<double> z{z1, z2};
            for (int i = 1; i <= 2; ++i) {
                CHECK(pgf_eval(law, i, z) == doctest::Approx(pgf_reference(g, dists, i, z)));
            }
        }
    }
}

TEST_CASE("moment matrices of the three embeddings") {
    const auto check = [](const BaseGraph& g, const std::vector<Rational>& expected) {
        const auto m = moment_matrix(g, RotorDistributionFamily::uniform(g));
        REQUIRE(m.exact);
        CHECK(m.exact_at(1, 1) == expected[0]);
        CHECK(m.exact_at(1, 2) == expected[1]);
        CHECK(m.exact_at(2, 1) == expected[2]);
        CHECK(m.exact_at(2, 2) == expected[3]);
    };
    check(tg::embedding_a(), {Rational(0), Rational(1, 2), Rational(5, 4), Rational(1, 4)});
    check(tg::embedding_b(), {Rational(0), Rational(1, 2), Rational(1), Rational(1, 2)});
    check(tg::embedding_c(), {Rational(0), Rational(1, 2), Rational(3, 4), Rational(3, 4)});
    for (int alpha : {1, 2, 3, 6}) {
        check(tg::generalized_fibonacci(alpha),
              {Rational(0), Rational(alpha, 2), Rational(2, 3), Rational(1, 3)});
    }
}

TEST_CASE("moment matrix is the jacobian of the generating function at one") {
    const double h = 1e-6;
    for (const auto& g : {tg::fibonacci(), tg::embedding_a(), tg::embedding_c()}) {
        const auto dists = RotorDistributionFamily::uniform(g);
        const auto m = moment_matrix(g, dists);
        for (int i = 1; i <= g.type_count(); ++i) {
            for (int j = 1; j <= g.type_count(); ++j) {
                std::vector<double> up(static_cast<std::size_t>(g.type_count()), 1.0);
                std::vector<double> down = up;
                up[static_cast<std::size_t>(j - 1)] += h;
                down[static_cast<std::size_t>(j - 1)] -= h;
                const double fd =
                    (pgf_reference(g, dists, i, up) - pgf_reference(g, dists, i, down)) / (2 * h);
                CHECK(std::abs(m.at(i, j) - fd) < 1e-6);
            }
        }
    }
}

TEST_CASE("moments never exceed adjacency counts; point mass at zero attains them") {
    for (const auto& g : {tg::fibonacci(), tg::embedding_b(), tg::generalized_fibonacci(3)}) {
        const auto d = g.adjacency_matrix();
        const auto uniform_m = moment_matrix(g, RotorDistributionFamily::uniform(g));
        std::vector<int> zero_states(static_cast<std::size_t>(g.type_count()), 0);
        const auto zero_m = moment_matrix(g, RotorDistributionFamily::point_mass(g, zero_states));
        for (int i = 1; i <= g.type_count(); ++i) {
            for (int j = 1; j <= g.type_count(); ++j) {
                const auto dij = static_cast<double>(d[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]);
                CHECK(uniform_m.at(i, j) <= dij + 1e-15);
                // The bound is attained only by the point mass at state 0.
                if (dij > 0) CHECK(uniform_m.at(i, j) < dij);
                CHECK(zero_m.at(i, j) == doctest::Approx(dij));
            }
        }
        // With every rotor on the ancestor the process is the full cover, so
        // the Perron roots of M and D coincide.
        MomentMatrix d_as_m;
        d_as_m.size = g.type_count();
        for (const auto& row : d) {
            for (auto entry : row) d_as_m.values.push_back(static_cast<double>(entry));
        }
        CHECK(spectral_radius(zero_m) == doctest::Approx(spectral_radius(d_as_m)));
    }
}

TEST_CASE("spectral radius closed forms") {
    const auto radius = [](const BaseGraph& g) {
        return spectral_radius(moment_matrix(g, RotorDistributionFamily::uniform(g)));
    };
    CHECK(radius(tg::embedding_a()) == doctest::Approx((std::sqrt(41.0) + 1.0) / 8.0).epsilon(1e-12));
    CHECK(radius(tg::embedding_b()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(radius(tg::embedding_c()) == doctest::Approx((std::sqrt(33.0) + 3.0) / 8.0).epsilon(1e-12));
    CHECK(radius(tg::generalized_fibonacci(3)) ==
          doctest::Approx((1.0 + std::sqrt(37.0)) / 6.0).epsilon(1e-12));

    MomentMatrix zero;
    zero.size = 2;
    zero.values = {0.0, 0.0, 0.0, 0.0};
    CHECK(spectral_radius(zero) == 0.0);
}

TEST_CASE("power iteration handles matrices beyond the closed form") {
    MomentMatrix tri;
    tri.size = 3;
    tri.values = {2, 1, 0, 1, 2, 1, 0, 1, 2};
    CHECK(spectral_radius(tri, 1e-13) == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-10));

    MomentMatrix cyc;  // permutation matrix: all eigenvalues on the unit circle
    cyc.size = 3;
    cyc.values = {0, 1, 0, 0, 0, 1, 1, 0, 0};
    CHECK(spectral_radius(cyc, 1e-13) == doctest::Approx(1.0).epsilon(1e-10));

    MomentMatrix zero3;
    zero3.size = 3;
    zero3.values.assign(9, 0.0);
    CHECK(spectral_radius(zero3) == 0.0);
}

TEST_CASE("power iteration refuses to certify a defective dominant eigenvalue") {
    // Strictly upper-triangular (nilpotent) matrix: the true radius is 0, but
    // the shifted iteration converges only polynomially. A tight tolerance
    // must raise rather than return a wrong number; a loose tolerance may
    // return a residual-certified value near 0.
    MomentMatrix nil;
    nil.size = 3;
    nil.values = {0, 1, 0, 0, 0, 1, 0, 0, 0};
    CHECK_THROWS_AS(spectral_radius(nil, 1e-12), NumericError);
    CHECK(spectral_radius(nil, 1e-4) < 0.05);
}

TEST_CASE("positive regularity and singularity flags") {
    const auto fib = tg::fibonacci();
    CHECK(positive_regular(moment_matrix(fib, RotorDistributionFamily::uniform(fib))));

    // Rotor one short of the end leaves exactly one good child everywhere.
    const auto g = tg::embedding_a();
    const auto one_child = RotorDistributionFamily::point_mass(g, {0, 2});
    CHECK(singular(offspring_law(g, one_child)));
    CHECK_FALSE(singular(offspring_law(g, RotorDistributionFamily::uniform(g))));

    std::vector<int> all_d{1, 3};
    CHECK_FALSE(positive_regular(moment_matrix(g, RotorDistributionFamily::point_mass(g, all_d))));
}

TEST_CASE("classification of the reference graphs") {
    const auto classify_uniform = [](const BaseGraph& g) {
        return classify(g, RotorDistributionFamily::uniform(g));
    };
    const auto a = classify_uniform(tg::embedding_a());
    CHECK(a.verdict == Verdict::Recurrent);
    CHECK_FALSE(a.critical);
    CHECK(a.positive_regular);
    CHECK(a.spectral_radius == doctest::Approx(0.925390529679106).epsilon(1e-12));

    const auto b = classify_uniform(tg::embedding_b());
    CHECK(b.verdict == Verdict::Recurrent);
    CHECK(b.critical);

    const auto c = classify_uniform(tg::embedding_c());
    CHECK(c.verdict == Verdict::Transient);
    CHECK_FALSE(c.critical);
    CHECK(c.spectral_radius == doctest::Approx(1.0930703308172536).epsilon(1e-12));

    const auto fib2 = classify_uniform(tg::generalized_fibonacci(2));
    CHECK(fib2.verdict == Verdict::Recurrent);
    CHECK(fib2.critical);
    CHECK(fib2.spectral_radius == doctest::Approx(1.0).epsilon(1e-12));

    const auto fib3 = classify_uniform(tg::generalized_fibonacci(3));
    CHECK(fib3.verdict == Verdict::Transient);
}

TEST_CASE("classification is invariant under type relabeling") {
    // embedding c with types swapped: old 1 -> new 2, old 2 -> new 1.
    const BaseGraph swapped({{2, 2, 1}, {1}});
    const auto original = classify(tg::embedding_c(), RotorDistributionFamily::uniform(tg::embedding_c()));
    const auto relabeled = classify(swapped, RotorDistributionFamily::uniform(swapped));
    CHECK(original.verdict == relabeled.verdict);
    CHECK(original.spectral_radius == doctest::Approx(relabeled.spectral_radius).epsilon(1e-12));
}

TEST_CASE("escape probabilities solve the fixed point") {
    const auto binary = escape_probabilities(tg::single_type(2), 1e-12);
    CHECK(binary[0] == doctest::Approx(0.5).epsilon(1e-9));
    const auto triple = escape_probabilities(tg::single_type(3), 1e-12);
    CHECK(triple[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    // The degenerate half-line converges harmonically toward zero.
    const auto line = escape_probabilities(tg::half_line(), 1e-10);
    CHECK(line[0] >= 0.0);
    CHECK(line[0] < 2e-5);

    const auto fib = escape_probabilities(tg::fibonacci(), 1e-13);
    CHECK(fib[0] == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-10));
    CHECK(fib[1] == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-10));

    const auto ex2 = escape_probabilities(tg::embedding_c(), 1e-13);
    CHECK(ex2[0] == doctest::Approx((7.0 - std::sqrt(17.0)) / 8.0).epsilon(1e-10));
    CHECK(ex2[1] == doctest::Approx((std::sqrt(17.0) - 3.0) / 2.0).epsilon(1e-10));

    for (const auto& g : {tg::single_type(2), tg::fibonacci(), tg::embedding_c()}) {
        const double tol = 1e-12;
        const auto e = escape_probabilities(g, tol);
        CHECK(escape_fixed_point_residual(g, e) < 10 * tol);
        for (double v : e) {
            CHECK(v >= 0.0);
            CHECK(v < 1.0);
        }
    }
    try {
        escape_probabilities(tg::half_line(), 1e-10, 50);
        FAIL("expected NumericError");
    } catch (const NumericError& e) {
        REQUIRE(e.last_iterate().size() == 1);
        CHECK(e.last_iterate()[0] > 0.0);
        CHECK(e.last_iterate()[0] < 1.0);
    }
}

TEST_CASE("level counts follow the fibonacci pattern") {
    const auto fib = tg::fibonacci();
    const auto w3 = level_counts(fib, 3);
    CHECK(w3[0][0].to_string() == "1");
    CHECK(w3[0][1].to_string() == "2");
    CHECK(w3[1][0].to_string() == "2");
    CHECK(w3[1][1].to_string() == "3");

    const auto w0 = level_counts(fib, 0);
    CHECK(w0[0][0].to_string() == "1");
    CHECK(w0[0][1].to_string() == "0");

    const std::vector<std::uint64_t> totals{1, 2, 3, 5, 8, 13};
    for (int n = 0; n < 6; ++n) {
        CHECK(level_total(fib, 2, n).to_u64() == totals[static_cast<std::size_t>(n)]);
    }

    // Entrywise Fibonacci recurrence, well past 64-bit territory.
    std::vector<std::vector<std::vector<BigUint>>> w;
    for (int n = 0; n <= 120; ++n) w.push_back(level_counts(fib, n));
    for (int n = 2; n <= 120; ++n) {
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                CHECK(w[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                      w[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +
                          w[static_cast<std::size_t>(n - 2)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            }
        }
    }
    CHECK_FALSE(level_total(fib, 2, 120).fits_u64());
}

TEST_CASE("level counts form a matrix semigroup") {
    const auto g = tg::embedding_c();
    const int m = g.type_count();
    const auto multiply = [m](const std::vector<std::vector<BigUint>>& a,
                              const std::vector<std::vector<BigUint>>& b) {
        std::vector<std::vector<BigUint>> out(static_cast<std::size_t>(m),
                                              std::vector<BigUint>(static_cast<std::size_t>(m)));
        for (int i = 0; i < m; ++i) {
            for (int k = 0; k < m; ++k) {
                for (int j = 0; j < m; ++j) {
                    out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                        a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
                        b[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
                }
            }
        }
        return out;
    };
    for (int a = 0; a <= 10; a += 2) {
        for (int b = 1; b <= 10; b += 3) {
            CHECK(level_counts(g, a + b) == multiply(level_counts(g, a), level_counts(g, b)));
        }
    }
}

TEST_CASE("extinction iteration matches hand-computed rationals") {
    const auto g = tg::embedding_c();
    const auto law = offspring_law(g, RotorDistributionFamily::uniform(g));
    const auto q1 = extinction_by_depth_exact(law, 1);
    CHECK(q1[0] == Rational(1, 2));
    CHECK(q1[1] == Rational(1, 4));
    const auto q2 = extinction_by_depth_exact(law, 2);
    CHECK(q2[0] == Rational(5, 8));
    CHECK(q2[1] == Rational(23, 64));
    const auto q3 = extinction_by_depth_exact(law, 3);
    CHECK(q3[0] == Rational(87, 128));
    CHECK(q3[1] == Rational(7063, 16384));

    const auto qd = extinction_by_depth(law, 3);
    CHECK(qd[0] == doctest::Approx(q3[0].to_double()).epsilon(1e-14));
    CHECK(qd[1] == doctest::Approx(q3[1].to_double()).epsilon(1e-14));
}

TEST_CASE("mbp survival simulation") {
    const auto g = tg::embedding_a();
    const auto uniform = RotorDistributionFamily::uniform(g);

    SUBCASE("deterministic in the seed") {
        const auto r1 = mbp_survival_estimate(g, uniform, 10, 500, 99);
        const auto r2 = mbp_survival_estimate(g, uniform, 10, 500, 99);
        CHECK(r1.survival == r2.survival);
    }

    SUBCASE("every child good survives forever") {
        const auto all_good = RotorDistributionFamily::point_mass(g, {0, 0});
        const auto est = mbp_survival_estimate(g, all_good, 25, 200, 7);
        CHECK(est.survival[0] == 1.0);
        CHECK(est.survival[1] == 1.0);
    }

    SUBCASE("subcritical survival matches the generating-function iteration") {
        const auto law = offspring_law(g, uniform);
        const auto q = extinction_by_depth(law, 30);
        const auto est = mbp_survival_estimate(g, uniform, 30, 10000, 4242);
        for (int i = 0; i < 2; ++i) {
            const double exact = 1.0 - q[static_cast<std::size_t>(i)];
            const double se = std::sqrt(exact * (1.0 - exact) / 10000.0);
            CHECK(std::abs(est.survival[static_cast<std::size_t>(i)] - exact) < 3.0 * se);
        }
        CHECK(est.survival[0] <= 0.02);  // type-1 root dies out fast
    }

    SUBCASE("supercritical survival matches the generating-function iteration") {
        const auto c = tg::embedding_c();
        const auto law = offspring_law(c, RotorDistributionFamily::uniform(c));
        const auto q = extinction_by_depth(law, 30);
        const auto est = mbp_survival_estimate(c, RotorDistributionFamily::uniform(c), 30, 10000, 515);
        for (int i = 0; i < 2; ++i) {
            const double exact = 1.0 - q[static_cast<std::size_t>(i)];
            const double se = std::sqrt(exact * (1.0 - exact) / 10000.0);
            CHECK(std::abs(est.survival[static_cast<std::size_t>(i)] - exact) < 3.0 * se);
        }
    }
}
