#include <doctest.h>

#include <cmath>

#include "gcms/convergence.hpp"
#include "gcms/errors.hpp"

using namespace gcms;

namespace {
const double kLog2 = std::log(2.0);
}

TEST_CASE("closed forms on cylinders") {
    CHECK(mu_beta_on_cylinder(std::log(4.0), {2, 1}) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    CHECK(mu_beta_on_cylinder(40.0, {1}) == doctest::Approx(0.0));
    CHECK(mu_beta_on_cylinder(kLog2 + 1e-6, {3, 2, 1}) == doctest::Approx(0.125).epsilon(1e-5));
    CHECK_THROWS_AS(mu_beta_on_cylinder(kLog2, {1}), PreconditionError);

    CHECK(limit_measure_on_cylinder({3, 2, 1}) == doctest::Approx(0.125));
    CHECK(limit_measure_on_cylinder({}) == doctest::Approx(1.0));
    CHECK(limit_measure_on_cylinder({1}) == doctest::Approx(0.5));
}

TEST_CASE("words not ending in 1 reduce to their completion") {
    // C_alpha = C_alpha^ for the renewal: words ending in k > 1 are forced to
    // continue (k-1)(k-2)...1
    CHECK(complete_renewal_word({2}) == Word{2, 1});
    CHECK(complete_renewal_word({1, 3}) == Word{1, 3, 2, 1});
    CHECK(mu_beta_on_cylinder(1.0, {2}) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(limit_measure_on_cylinder({2}) == doctest::Approx(0.25));
}

TEST_CASE("atomic sums agree with the closed form within the tail") {
    const double betas[] = {kLog2 + 0.05, 0.8, 1.0, 1.4, 2.0};
    const auto lengths = renewal_basis_words({1, 2, 3, 4, 5, 6});
    const auto a = TransitionMatrix::renewal();
    const auto one = Potential::constant(1.0);
    for (double beta : betas) {
        const auto mu = std::get<AtomicMeasure>(normalize(a, one, beta, Root::of({1}), 1e-9));
        for (const Word& alpha : lengths) {
            const auto iv = measure_of_cylinder(mu, alpha);
            CAPTURE(beta);
            CAPTURE(format_word(alpha));
            REQUIRE(iv.brackets(mu_beta_on_cylinder(beta, alpha)));
        }
    }
}

TEST_CASE("atom masses vanish toward the critical temperature") {
    const auto table = atom_mass_vanishes({1}, {1.0, 0.8, 0.72, kLog2 + 1e-4});
    CHECK(table.decreasing_to_zero);
    CHECK(table.rows.back().mass < 0.001);
    const auto at_ln4 = atom_mass_vanishes({1}, {std::log(4.0)});
    CHECK(at_ln4.rows[0].mass == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("convergence report") {
    const auto cylinders = renewal_basis_words({1, 2, 3, 4});
    SUBCASE("gaps decrease along decreasing betas") {
        const auto rep = converge_report(cylinders, {1.0, 0.8, 0.72, 0.70});
        CHECK(rep.gaps_monotone);
        for (std::size_t b = 0; b + 1 < rep.max_gap.size(); ++b) {
            CHECK(rep.max_gap[b + 1] <= rep.max_gap[b]);
        }
        // first-order consistency: gap <= sum over cylinders of
        // |alpha| (beta - log 2) 2^{-|alpha|} C with C = 1
        for (std::size_t b = 0; b < rep.betas.size(); ++b) {
            double bound = 0.0;
            for (const Word& alpha : cylinders) {
                bound += static_cast<double>(alpha.size()) * (rep.betas[b] - kLog2) *
                         std::pow(2.0, -static_cast<double>(alpha.size()));
            }
            CHECK(rep.max_gap[b] <= bound + 1e-12);
        }
    }
    SUBCASE("the empty cylinder shows zero gap") {
        const auto rep = converge_report({Word{}}, {1.0, 0.9});
        CHECK(rep.max_gap[0] == doctest::Approx(0.0));
    }
    SUBCASE("fixed beta gap is the exact difference") {
        const auto rep = converge_report({Word{2, 1}}, {2.0});
        CHECK(rep.max_gap[0] == doctest::Approx(std::abs(std::exp(-4.0) - 0.25)).epsilon(1e-14));
    }
    SUBCASE("betas must decrease strictly") {
        CHECK_THROWS_AS(converge_report(cylinders, {0.8, 0.9}), PreconditionError);
    }
}
