#include <doctest.h>

#include <cmath>
#include <random>

#include "gcms/errors.hpp"
#include "gcms/spectral.hpp"

using namespace gcms;

namespace {

GAElement cylinder_sum(std::vector<std::pair<Coef, Word>> parts, Coef lambda0 = {0.0, 0.0}) {
    GAElement el;
    el.lambda0 = lambda0;
    for (auto& [c, w] : parts) el.terms.push_back({c, ProjectionTerm{std::move(w), {}}});
    return el;
}

// exhaustive simple-cycle maximum mean, the oracle for the solver
struct CycleOracle {
    const MeanCycleGraph& g;
    std::vector<std::vector<std::pair<int, double>>> adj;
    double best = -std::numeric_limits<double>::infinity();
    bool found = false;

    explicit CycleOracle(const MeanCycleGraph& graph) : g(graph), adj(graph.vertex_count) {
        for (const auto& [u, v, w] : g.edges) adj[u].emplace_back(v, w);
    }
    void dfs(int start, int v, double total, int len, std::vector<char>& used) {
        for (const auto& [to, w] : adj[v]) {
            if (to == start) {
                found = true;
                best = std::max(best, (total + w) / (len + 1));
            } else if (to > start && !used[to]) {
                used[to] = 1;
                dfs(start, to, total + w, len + 1, used);
                used[to] = 0;
            }
        }
    }
    void run() {
        std::vector<char> used(g.vertex_count, 0);
        for (int s = 0; s < static_cast<int>(g.vertex_count); ++s) {
            used.assign(g.vertex_count, 0);
            used[s] = 1;
            dfs(s, s, 0.0, 0, used);
        }
    }
};

}  // namespace

TEST_CASE("nonzero_term rewrites on the renewal") {
    const auto a = TransitionMatrix::renewal();
    SUBCASE("F = {1} drops") {
        const auto t = nonzero_term(a, {2}, {1});
        REQUIRE(t.kind == TermNormalization::Kind::Cylinders);
        CHECK(t.cylinders == std::vector<Word>{{2}});
    }
    SUBCASE("F = {4} appends the predecessor letter") {
        const auto t = nonzero_term(a, {1}, {4});
        REQUIRE(t.kind == TermNormalization::Kind::Cylinders);
        CHECK(t.cylinders == std::vector<Word>{{1, 3}});
    }
    SUBCASE("two symbols above 1 annihilate") {
        CHECK(nonzero_term(a, {}, {3, 5}).kind == TermNormalization::Kind::Zero);
    }
    SUBCASE("identity term") {
        CHECK(nonzero_term(a, {}, {1}).kind == TermNormalization::Kind::Identity);
    }
    SUBCASE("inadmissible extension is zero") {
        // gamma ends in 2, F = {4} needs A(2,3) = 1 which fails
        CHECK(nonzero_term(a, {2}, {4}).kind == TermNormalization::Kind::Zero);
    }
    SUBCASE("empty pair is rejected") {
        CHECK_THROWS_AS(nonzero_term(a, {}, {}), PreconditionError);
    }
}

TEST_CASE("gelfand tables") {
    const auto a = TransitionMatrix::renewal();
    SUBCASE("two disjoint letter cylinders") {
        const auto cf = gelfand(cylinder_sum({{{2.0, 0.0}, {1}}, {{3.0, 0.0}, {2}}}), a, {1, 2});
        CHECK(cf.depth == 1);
        CHECK(cf.table.at({1}) == Coef{2.0, 0.0});
        CHECK(cf.table.at({2}) == Coef{3.0, 0.0});
    }
    SUBCASE("identity is constant one") {
        const auto cf = gelfand(GAElement{{1.0, 0.0}, {}}, a, {1, 2, 3});
        for (const auto& [w, v] : cf.table) CHECK(v == Coef{1.0, 0.0});
        for (const auto& [e, v] : cf.empty_word_values) CHECK(v == Coef{1.0, 0.0});
    }
    SUBCASE("1 + e_{1,0} doubles on [1] and vanishes nowhere") {
        const auto cf = gelfand(cylinder_sum({{{1.0, 0.0}, {1}}}, {1.0, 0.0}), a, {1, 2});
        CHECK(cf.table.at({1}) == Coef{2.0, 0.0});
        CHECK(cf.table.at({2}) == Coef{1.0, 0.0});
        REQUIRE(cf.empty_word_values.size() == 1);
        CHECK(cf.empty_word_values[0].second == Coef{1.0, 0.0});
    }
    SUBCASE("missing symbols raise AlphabetTooSmall") {
        CHECK_THROWS_AS(gelfand(cylinder_sum({{{1.0, 0.0}, {3}}}), a, {1, 2}), PreconditionError);
    }
}

TEST_CASE("choose_finite_alphabet") {
    const auto a = TransitionMatrix::renewal();
    CHECK(choose_finite_alphabet(cylinder_sum({{{1.0, 0.0}, {2}}}), a) == std::vector<Symbol>{1, 2});
    CHECK(choose_finite_alphabet(cylinder_sum({{{1.0, 0.0}, {1, 3}}}), a) == std::vector<Symbol>{1, 2, 3});
    CHECK(choose_finite_alphabet(GAElement{{1.0, 0.0}, {}}, a) == std::vector<Symbol>{1});
}

TEST_CASE("max mean cycle on hand graphs") {
    SUBCASE("single self-loop") {
        MeanCycleGraph g;
        g.vertex_count = 1;
        g.edges = {{0, 0, std::log(2.0)}};
        const auto r = max_mean_cycle(g);
        REQUIRE(r.has_cycle);
        CHECK(r.max_mean == doctest::Approx(std::log(2.0)).epsilon(1e-14));
        CHECK(r.cycle == std::vector<int>{0});
    }
    SUBCASE("2-cycle averages its weights") {
        MeanCycleGraph g;
        g.vertex_count = 2;
        g.edges = {{0, 1, std::log(2.0)}, {1, 0, std::log(3.0)}};
        const auto r = max_mean_cycle(g);
        REQUIRE(r.has_cycle);
        CHECK(r.max_mean == doctest::Approx(0.5 * std::log(6.0)).epsilon(1e-14));
    }
    SUBCASE("a DAG has no cycle") {
        MeanCycleGraph g;
        g.vertex_count = 3;
        g.edges = {{0, 1, 1.0}, {1, 2, 5.0}};
        CHECK_FALSE(max_mean_cycle(g).has_cycle);
    }
}

TEST_CASE("solver matches exhaustive cycle enumeration on random digraphs") {
    std::mt19937 rng(987654);
    std::uniform_int_distribution<int> nv(2, 8);
    std::uniform_real_distribution<double> prob(0.0, 1.0);
    std::uniform_int_distribution<int> numer(-12, 12);
    int with_cycles = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        MeanCycleGraph g;
        g.vertex_count = static_cast<std::size_t>(nv(rng));
        for (int u = 0; u < static_cast<int>(g.vertex_count); ++u) {
            for (int v = 0; v < static_cast<int>(g.vertex_count); ++v) {
                if (prob(rng) < 0.3) g.edges.emplace_back(u, v, numer(rng) / 4.0);
            }
        }
        CycleOracle oracle(g);
        oracle.run();
        const auto r = max_mean_cycle(g);
        CAPTURE(trial);
        REQUIRE(r.has_cycle == oracle.found);
        if (oracle.found) {
            ++with_cycles;
            REQUIRE(r.max_mean == doctest::Approx(oracle.best).epsilon(1e-10));
            REQUIRE_FALSE(r.cycle.empty());
            // witness realizes the reported mean
            double total = 0.0;
            for (std::size_t i = 0; i < r.cycle.size(); ++i) {
                double best_w = -std::numeric_limits<double>::infinity();
                for (const auto& [u, v, w] : g.edges) {
                    if (u == r.cycle[i] && v == r.cycle[(i + 1) % r.cycle.size()])
                        best_w = std::max(best_w, w);
                }
                total += best_w;
            }
            REQUIRE(total / static_cast<double>(r.cycle.size()) ==
                    doctest::Approx(r.max_mean).epsilon(1e-10));
        }
    }
    CHECK(with_cycles > 500);
}

TEST_CASE("spectral radius hand examples") {
    const auto a = TransitionMatrix::renewal();
    SUBCASE("e_{1,0} has radius 1 via the self-loop at [1]") {
        const auto r = spectral_radius(cylinder_sum({{{1.0, 0.0}, {1}}}), a);
        CHECK(r.radius == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(r.branch == "sigma");
    }
    SUBCASE("e_{2,0} has radius 0: every orbit leaves [2]") {
        const auto r = spectral_radius(cylinder_sum({{{1.0, 0.0}, {2}}}), a);
        CHECK(r.radius == 0.0);
    }
    SUBCASE("2 e_{1,0} + 3 e_{2,0} attains sqrt 6 on the (1,2)-cycle") {
        const auto r = spectral_radius(cylinder_sum({{{2.0, 0.0}, {1}}, {{3.0, 0.0}, {2}}}), a);
        CHECK(r.radius == doctest::Approx(std::sqrt(6.0)).epsilon(1e-13));
        CHECK(r.branch == "sigma");
    }
    SUBCASE("identity and scaling") {
        CHECK(spectral_radius(GAElement{{1.0, 0.0}, {}}, a).radius == doctest::Approx(1.0));
        CHECK(spectral_radius(GAElement{{5.0, 0.0}, {}}, a).radius == doctest::Approx(5.0));
        CHECK(brute_force_radius(GAElement{{1.0, 0.0}, {}}, a, 4) == doctest::Approx(1.0));
        CHECK(brute_force_radius(GAElement{{5.0, 0.0}, {}}, a, 4) == doctest::Approx(5.0));
    }
    SUBCASE("brute force reproduces sqrt 6") {
        CHECK(brute_force_radius(cylinder_sum({{{2.0, 0.0}, {1}}, {{3.0, 0.0}, {2}}}), a, 8) ==
              doctest::Approx(std::sqrt(6.0)).epsilon(1e-13));
    }
    SUBCASE("non-extendable matrices are rejected") {
        CHECK_THROWS_AS(spectral_radius(GAElement{{1.0, 0.0}, {}}, TransitionMatrix::full_shift()),
                        PreconditionError);
    }
}

namespace {

GAElement random_renewal_element(std::mt19937& rng) {
    const auto a = TransitionMatrix::renewal();
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> nterms(1, 4);
    std::uniform_int_distribution<int> wlen(1, 2);
    std::uniform_int_distribution<int> letter(1, 5);
    std::uniform_int_distribution<int> fkind(0, 3);
    GAElement el;
    el.lambda0 = {static_cast<double>(coef(rng)), 0.0};
    const int k = nterms(rng);
    for (int t = 0; t < k; ++t) {
        ProjectionTerm term;
        const int len = wlen(rng);
        for (int i = 0; i < len; ++i) {
            Symbol next = static_cast<Symbol>(letter(rng));
            if (!term.gamma.empty() && !a.entry(term.gamma.back(), next)) {
                next = term.gamma.back() - 1;  // force admissibility down the chain
            }
            term.gamma.push_back(next);
        }
        switch (fkind(rng)) {
            case 0: break;                       // F empty
            case 1: term.f = {1}; break;         // drops
            case 2: {
                // F = {n} with an admissible continuation
                const Symbol tail = term.gamma.back();
                term.f = {tail == 1 ? static_cast<Symbol>(letter(rng) + 1) : tail};
                break;
            }
            default: term.f = {1, 2}; break;
        }
        el.terms.push_back({{static_cast<double>(coef(rng)), 0.0}, std::move(term)});
    }
    return el;
}

}  // namespace

TEST_CASE("spectral radius equals the brute-force oracle on a random corpus") {
    std::mt19937 rng(424242);
    const auto a = TransitionMatrix::renewal();
    int cancellations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const GAElement el = random_renewal_element(rng);
        std::uint32_t depth = 1;
        for (const auto& [c, t] : el.terms)
            depth = std::max<std::uint32_t>(depth, static_cast<std::uint32_t>(t.gamma.size()) + 1);
        const std::uint32_t max_len = std::min(2 * depth + 4, 10u);
        const double direct = spectral_radius(el, a).radius;
        const double oracle = brute_force_radius(el, a, max_len);
        CAPTURE(trial);
        REQUIRE(direct == doctest::Approx(oracle).epsilon(1e-12));
        const auto cf = gelfand(el, a, choose_finite_alphabet(el, a));
        for (const auto& [w, v] : cf.table) {
            if (std::abs(v) == 0.0) ++cancellations;
        }
    }
    CHECK(cancellations > 0);  // the corpus exercises Lambda_x = 0 regions
}

TEST_CASE("homogeneity under scalar multiples") {
    std::mt19937 rng(777);
    const auto a = TransitionMatrix::renewal();
    const GAElement base = cylinder_sum({{{2.0, 0.0}, {1}}, {{3.0, 0.0}, {2}}, {{-1.0, 0.0}, {1, 1}}});
    const double r0 = spectral_radius(base, a).radius;
    std::uniform_real_distribution<double> mag(0.1, 4.0);
    std::uniform_real_distribution<double> arg(0.0, 6.28);
    for (int i = 0; i < 20; ++i) {
        const Coef c = std::polar(mag(rng), arg(rng));
        GAElement scaled = base;
        scaled.lambda0 *= c;
        for (auto& [coef, term] : scaled.terms) coef *= c;
        CHECK(spectral_radius(scaled, a).radius == doctest::Approx(std::abs(c) * r0).epsilon(1e-12));
    }
}

TEST_CASE("normal-form independence") {
    const auto a = TransitionMatrix::renewal();
    // e_{2,{1}} and e_{2,0} denote the same projection
    GAElement viaF;
    viaF.terms.push_back({{1.0, 0.0}, ProjectionTerm{{2}, {1}}});
    GAElement plain;
    plain.terms.push_back({{1.0, 0.0}, ProjectionTerm{{2}, {}}});
    // e_{1,{1,4}} = e_{1,{4}} = e_{13,0}
    GAElement viaF2;
    viaF2.terms.push_back({{1.0, 0.0}, ProjectionTerm{{1}, {1, 4}}});
    GAElement plain2;
    plain2.terms.push_back({{1.0, 0.0}, ProjectionTerm{{1, 3}, {}}});
    for (const auto& [lhs, rhs] : {std::make_pair(viaF, plain), std::make_pair(viaF2, plain2)}) {
        const auto al = choose_finite_alphabet(lhs, a);
        const auto ar = choose_finite_alphabet(rhs, a);
        CHECK(al == ar);
        const auto cl = gelfand(lhs, a, al);
        const auto cr = gelfand(rhs, a, ar);
        CHECK(cl.table == cr.table);
        CHECK(spectral_radius(lhs, a).radius == doctest::Approx(spectral_radius(rhs, a).radius));
    }
}

TEST_CASE("enlarging the alphabet never changes the radius") {
    std::mt19937 rng(31337);
    const auto a = TransitionMatrix::renewal();
    for (int trial = 0; trial < 30; ++trial) {
        const GAElement el = random_renewal_element(rng);
        const auto alphabet = choose_finite_alphabet(el, a);
        std::vector<Symbol> larger = alphabet;
        larger.push_back(alphabet.back() + 1);
        larger.push_back(alphabet.back() + 2);
        const double r0 = spectral_radius(el, a).radius;
        const double r1 = spectral_radius(el, a, 64, larger).radius;
        CAPTURE(trial);
        CHECK(r0 == doctest::Approx(r1).epsilon(1e-12));
    }
}
