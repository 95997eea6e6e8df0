#include <doctest.h>

#include <cmath>

#include "gcms/conformal.hpp"
#include "gcms/dynamics.hpp"
#include "gcms/errors.hpp"

using namespace gcms;

namespace {

const double kLog2 = std::log(2.0);

AtomicMeasure renewal_measure(double beta, double tol = 1e-9) {
    auto r = normalize(TransitionMatrix::renewal(), Potential::constant(1.0), beta, Root::of({1}), tol);
    REQUIRE(std::holds_alternative<AtomicMeasure>(r));
    return std::get<AtomicMeasure>(std::move(r));
}

AtomicMeasure perturb(const AtomicMeasure& mu, double eps) {
    AtomicMeasure out = mu;
    for (auto& [xi, w] : out.atoms) {
        if (xi.has_finite_stem() && xi.finite_stem().size() == 2) {
            w += eps;
            break;
        }
    }
    return out;
}

}  // namespace

TEST_CASE("birkhoff sums") {
    const Root root = Root::of({1});
    CHECK(birkhoff_sum(Potential::constant(1.0), Configuration(Word{3, 2, 1}, root), 3) == doctest::Approx(3.0));
    const auto g = Potential::first_letter({{1, 0.25}, {2, 0.5}}, 1.0);
    CHECK(birkhoff_sum(g, Configuration(Word{2, 1}, root), 2) == doctest::Approx(0.75));
    const auto lr = Potential::log_ratio();
    CHECK(birkhoff_sum(lr, Configuration(Word{2, 1}, root), 2) ==
          doctest::Approx(std::log(2.0 / 3.0) + std::log(0.5)));
    CHECK_THROWS_AS(birkhoff_sum(g, Configuration(Word{1}, root), 2), PreconditionError);
}

TEST_CASE("pre-normalization coefficients") {
    const Root root = Root::of({1});
    const auto one = Potential::constant(1.0);
    CHECK(coefficient(one, 1.0, Configuration(Word{}, root)) == doctest::Approx(1.0));
    CHECK(coefficient(one, std::log(4.0), Configuration(Word{2, 1}, root)) == doctest::Approx(1.0 / 16.0));
    for (std::uint32_t n = 1; n <= 6; ++n) {
        Word stem;
        for (std::uint32_t i = n; i >= 1; --i) stem.push_back(i);
        CHECK(coefficient(one, 0.9, Configuration(stem, root)) == doctest::Approx(std::exp(-0.9 * n)));
    }
}

TEST_CASE("renewal closed form") {
    CHECK(renewal_closed_form(std::log(4.0), 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(renewal_closed_form(std::log(4.0), 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(renewal_closed_form(40.0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(renewal_closed_form(kLog2, 1), PreconditionError);
}

TEST_CASE("normalized renewal measures match the closed form") {
    for (double beta : {0.75, 1.0, std::log(4.0), 2.0}) {
        const AtomicMeasure mu = renewal_measure(beta);
        CAPTURE(beta);
        CHECK(mu.c_empty == doctest::Approx(renewal_closed_form(beta, 0)).epsilon(1e-13));
        double worst = 0.0;
        for (const auto& [xi, w] : mu.atoms) {
            const auto n = static_cast<std::uint32_t>(xi.finite_stem().size());
            worst = std::max(worst, std::abs(w - renewal_closed_form(beta, n)));
        }
        CHECK(worst <= 1e-12);
        // total mass including the certified tail
        CHECK(mu.atom_sum() + mu.tail_bound == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("c_empty at beta = ln 4 is 2/3") {
    CHECK(renewal_measure(std::log(4.0)).c_empty == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("series tail certification against direct summation") {
    // for F >= M > 0 the truncation tail is dominated by the closed geometric
    // sum; compare against summing the series L+10 lengths further
    const double beta = 1.1;
    const AtomicMeasure mu = renewal_measure(beta, 1e-6);
    const std::uint32_t l = mu.truncation_length;
    double direct = 0.0;
    for (std::uint32_t n = l + 1; n <= l + 10; ++n) {
        direct += std::pow(2.0, n - 1.0) * std::exp(-beta * n) * mu.c_empty;
    }
    CHECK(mu.tail_bound >= direct);
    const double q = 2.0 * std::exp(-beta);
    const double geometric = mu.c_empty * std::pow(q, l) * std::exp(-beta) / (1.0 - q);
    CHECK(mu.tail_bound <= geometric * (1.0 + 1e-12));
}

TEST_CASE("normalize divergence and thresholds") {
    const auto a = TransitionMatrix::renewal();
    const Root root = Root::of({1});
    SUBCASE("beta = log 2 diverges") {
        const auto r = normalize(a, Potential::constant(1.0), kLog2, root, 1e-9);
        CHECK(std::holds_alternative<Divergent>(r));
    }
    SUBCASE("the prime renewal converges family-wise at beta = 2") {
        const auto prime = TransitionMatrix::prime_renewal();
        const auto r = normalize(prime, Potential::constant(1.0), 2.0, Root::of({1, 2}), 1e-9);
        REQUIRE(std::holds_alternative<AtomicMeasure>(r));
        const auto& mu = std::get<AtomicMeasure>(r);
        CHECK(mu.atom_sum() + mu.tail_bound == doctest::Approx(1.0).epsilon(1e-10));
        for (const auto& [xi, w] : mu.atoms) REQUIRE(xi.root() == Root::of({1, 2}));
    }
    SUBCASE("the gap region is undetermined") {
        const auto prime = TransitionMatrix::prime_renewal();
        const auto r = normalize(prime, Potential::constant(1.0), 0.9, Root::of({1}), 1e-9);
        CHECK(std::holds_alternative<UndeterminedSeries>(r));
    }
}

TEST_CASE("measure of cylinders brackets the closed form") {
    const double beta = std::log(4.0);
    const AtomicMeasure mu = renewal_measure(beta);
    SUBCASE("C_{21} brackets 1/16") {
        CHECK(measure_of_cylinder(mu, {2, 1}).brackets(1.0 / 16.0));
    }
    SUBCASE("the empty cylinder is the whole space") {
        CHECK(measure_of_cylinder(mu, {}).brackets(1.0));
    }
    SUBCASE("inadmissible prefixes carry no atoms") {
        const auto iv = measure_of_cylinder(mu, {2, 4});
        CHECK(iv.lo == 0.0);
        CHECK(iv.hi == doctest::Approx(mu.tail_bound));
    }
}

TEST_CASE("the four conformality checks pass together and fail together") {
    const auto a = TransitionMatrix::renewal();
    const auto one = Potential::constant(1.0);
    const std::vector<Word> cylinders{{}, {1}, {2, 1}, {1, 1}, {3, 2}};
    for (double beta : {0.75, 1.0, 1.5, 2.0}) {
        const AtomicMeasure mu = renewal_measure(beta);
        CAPTURE(beta);
        CHECK(du_check(a, mu, one, beta, 1e-12).pass);
        CHECK(eigenmeasure_check(a, mu, one, beta, cylinders, 1e-12).pass);
        CHECK(sarig_check(a, mu, one, beta, 1e-12).pass);
        CHECK(quasi_invariance_arrow_check(a, mu, one, beta, 3, 1e-12).pass);

        const AtomicMeasure bad = perturb(mu, 1e-3);
        CHECK_FALSE(du_check(a, bad, one, beta, 1e-10).pass);
        CHECK_FALSE(eigenmeasure_check(a, bad, one, beta, cylinders, 1e-10).pass);
        CHECK_FALSE(sarig_check(a, bad, one, beta, 1e-10).pass);
        CHECK_FALSE(quasi_invariance_arrow_check(a, bad, one, beta, 3, 1e-10).pass);
    }
}

TEST_CASE("du_check locates a perturbed atom") {
    const auto a = TransitionMatrix::renewal();
    const auto one = Potential::constant(1.0);
    const AtomicMeasure mu = renewal_measure(1.0);
    const auto rep = du_check(a, perturb(mu, 1e-3), one, 1.0, 1e-10);
    CHECK_FALSE(rep.pass);
    CHECK(rep.worst >= 1e-4);
    CHECK_FALSE(rep.worst_at.empty());
}

TEST_CASE("checks are vacuous on the zero measure") {
    const auto a = TransitionMatrix::renewal();
    const auto one = Potential::constant(1.0);
    AtomicMeasure zero;
    CHECK(du_check(a, zero, one, 1.0, 1e-12).pass);
    CHECK(sarig_check(a, zero, one, 1.0, 1e-12).pass);
    CHECK(quasi_invariance_arrow_check(a, zero, one, 1.0, 3, 1e-12).pass);
}

TEST_CASE("extremal decomposition of prime renewal mixtures") {
    const auto a = TransitionMatrix::prime_renewal();
    const auto one = Potential::constant(1.0);
    const double beta = 2.0;
    const auto mu2 = std::get<AtomicMeasure>(normalize(a, one, beta, Root::of({1, 2}), 1e-9));
    const auto mu3 = std::get<AtomicMeasure>(normalize(a, one, beta, Root::of({1, 3}), 1e-9));

    SUBCASE("an extremal input decomposes onto itself") {
        const auto d = extremal_decomposition(a, mu2);
        REQUIRE(d.weights.size() == 1);
        CHECK(d.weights[0].first == Root::of({1, 2}));
        CHECK(d.weights[0].second == doctest::Approx(mu2.atom_sum()));
    }
    SUBCASE("a half-half mixture decomposes with weights 1/2") {
        const auto mixed = mix({{0.5, &mu2}, {0.5, &mu3}});
        const auto d = extremal_decomposition(a, mixed);
        REQUIRE(d.weights.size() == 2);
        for (const auto& [root, lambda] : d.weights) {
            CHECK(lambda == doctest::Approx(0.5).epsilon(1e-6));
        }
        CHECK(d.weight_sum >= 1.0 - mixed.tail_bound - 1e-12);
        CHECK(d.weight_sum <= 1.0 + 1e-12);
        // conditionals re-pass du_check, and re-decomposing is idempotent
        for (const auto& [root, cond] : d.conditionals) {
            CHECK(du_check(a, cond, one, beta, 1e-9).pass);
        }
        const auto rebuilt = mix({{d.weights[0].second, &d.conditionals[0].second},
                                  {d.weights[1].second, &d.conditionals[1].second}});
        const auto again = extremal_decomposition(a, rebuilt);
        REQUIRE(again.weights.size() == 2);
        for (std::size_t i = 0; i < 2; ++i) {
            CHECK(again.weights[i].second == doctest::Approx(d.weights[i].second).epsilon(1e-12));
        }
    }
}

TEST_CASE("critical beta scan") {
    const auto renewal = TransitionMatrix::renewal();
    SUBCASE("F = 1 has the exact boundary log 2") {
        const auto rows = critical_beta_scan(renewal, Potential::constant(1.0), {0.5, kLog2, 0.8});
        REQUIRE(rows.size() == 3);
        CHECK(rows[0].kind == ScanRow::Kind::Diverges);
        CHECK(rows[1].kind == ScanRow::Kind::Diverges);
        CHECK(rows[2].kind == ScanRow::Kind::Converges);
        const auto above = critical_beta_scan(renewal, Potential::constant(1.0),
                                              {std::nextafter(kLog2, 1.0)});
        CHECK(above[0].kind == ScanRow::Kind::Converges);
    }
    SUBCASE("F = 2 moves the boundary to (log 2)/2") {
        const auto rows = critical_beta_scan(renewal, Potential::constant(2.0), {0.3, 0.35});
        CHECK(rows[0].kind == ScanRow::Kind::Diverges);
        CHECK(rows[1].kind == ScanRow::Kind::Converges);
    }
    SUBCASE("prime renewal below log 2 diverges") {
        const auto rows = critical_beta_scan(TransitionMatrix::prime_renewal(), Potential::constant(1.0),
                                             {0.6});
        CHECK(rows[0].kind == ScanRow::Kind::Diverges);
    }
}
