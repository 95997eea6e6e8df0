#include "gcms/convergence.hpp"

#include <algorithm>
#include <cmath>

#include "gcms/dynamics.hpp"
#include "gcms/errors.hpp"

namespace gcms {

Word complete_renewal_word(const Word& alpha) {
    Word w = alpha;
    if (w.empty()) return w;
    for (Symbol k = w.back(); k > 1; --k) w.push_back(k - 1);
    return w;
}

double mu_beta_on_cylinder(double beta, const Word& alpha) {
    if (!(beta > std::log(2.0)))
        throw PreconditionError("BetaBelowCritical", "mu_beta needs beta > log 2");
    const TransitionMatrix a = TransitionMatrix::renewal();
    if (!is_admissible(a, alpha)) return 0.0;
    const Word hat = complete_renewal_word(alpha);
    return std::exp(-beta * static_cast<double>(hat.size()));
}

double limit_measure_on_cylinder(const Word& alpha) {
    const TransitionMatrix a = TransitionMatrix::renewal();
    if (!is_admissible(a, alpha)) return 0.0;
    const Word hat = complete_renewal_word(alpha);
    return std::pow(2.0, -static_cast<double>(hat.size()));
}

AtomMassTable atom_mass_vanishes(const Word& alpha, const std::vector<double>& betas) {
    AtomMassTable out;
    const double log2 = std::log(2.0);
    double prev = std::numeric_limits<double>::infinity();
    for (double beta : betas) {
        if (!(beta > log2)) throw PreconditionError("BetaBelowCritical", "betas must exceed log 2");
        const double mass = renewal_closed_form(beta, static_cast<std::uint32_t>(alpha.size()));
        out.rows.push_back({beta, mass});
        if (mass > prev) out.decreasing_to_zero = false;
        prev = mass;
    }
    for (std::size_t i = 0; i + 1 < betas.size(); ++i) {
        if (betas[i + 1] >= betas[i]) out.decreasing_to_zero = false;
    }
    return out;
}

std::vector<Word> renewal_basis_words(const std::vector<std::uint32_t>& lengths) {
    const TransitionMatrix a = TransitionMatrix::renewal();
    const Root root = Root::of({1});
    std::vector<Word> out;
    for (std::uint32_t n : lengths) {
        if (n == 0) {
            out.push_back({});
            continue;
        }
        for (const Configuration& xi : enumerate_finite_words(a, root, n)) {
            out.push_back(xi.finite_stem());
        }
    }
    return out;
}

ConvergenceReport converge_report(const std::vector<Word>& cylinders, const std::vector<double>& betas) {
    const double log2 = std::log(2.0);
    for (std::size_t i = 0; i + 1 < betas.size(); ++i) {
        if (betas[i + 1] >= betas[i])
            throw PreconditionError("BadBetas", "betas must be strictly decreasing");
    }
    for (double b : betas) {
        if (!(b > log2)) throw PreconditionError("BetaBelowCritical", "betas must exceed log 2");
    }

    ConvergenceReport rep;
    rep.cylinders = cylinders;
    rep.betas = betas;
    for (const Word& alpha : cylinders) rep.limit_values.push_back(limit_measure_on_cylinder(alpha));

    const TransitionMatrix a = TransitionMatrix::renewal();
    const Potential one = Potential::constant(1.0);
    const Root root = Root::of({1});
    for (double beta : betas) {
        NormalizeResult r = normalize(a, one, beta, root, 1e-9);
        const AtomicMeasure& mu = std::get<AtomicMeasure>(r);
        std::vector<CylinderInterval> row;
        std::vector<double> closed;
        double gap = 0.0;
        for (std::size_t c = 0; c < cylinders.size(); ++c) {
            row.push_back(measure_of_cylinder(mu, cylinders[c]));
            closed.push_back(mu_beta_on_cylinder(beta, cylinders[c]));
            gap = std::max(gap, std::abs(closed.back() - rep.limit_values[c]));
        }
        rep.values.push_back(std::move(row));
        rep.closed_form.push_back(std::move(closed));
        rep.max_gap.push_back(gap);
    }
    for (std::size_t i = 0; i + 1 < rep.max_gap.size(); ++i) {
        if (rep.max_gap[i + 1] > rep.max_gap[i] + 1e-15) rep.gaps_monotone = false;
    }
    return rep;
}

}  // namespace gcms
