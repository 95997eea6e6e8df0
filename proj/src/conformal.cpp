#include "gcms/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gcms/dynamics.hpp"
#include "gcms/errors.hpp"

namespace gcms {

double AtomicMeasure::atom_sum() const {
    double s = 0.0;
    for (const auto& [xi, w] : atoms) s += w;
    return s;
}

double coefficient(const Potential& f, double beta, const Configuration& xi) {
    const Word& stem = xi.finite_stem();
    return std::exp(-beta * birkhoff_sum(f, xi, static_cast<std::uint32_t>(stem.size())));
}

double renewal_closed_form(double beta, std::uint32_t n) {
    if (!(beta > std::log(2.0)))
        throw PreconditionError("BetaBelowCritical", "closed form needs beta > log 2");
    const double eb = std::exp(beta);
    return std::exp(-beta * static_cast<double>(n)) * (eb - 2.0) / (eb - 1.0);
}

namespace {

// Per-length weight sums T(n) = sum over stems of length n (ending in a
// terminal letter of the family) of e^{-beta S_n F}. Computed by a layered
// backward DP over predecessor sets.
struct FamilySeries {
    std::vector<double> per_length;  // per_length[n-1] = T(n), n = 1..L
    double total = 0.0;              // 1 + sum of per_length
    double beyond = 0.0;             // certified bound on the omitted lengths
    bool closed_form = false;
};

FamilySeries renewal_constant_series(double beta, double c, std::uint32_t length_cap) {
    // T(n) = 2^{n-1} e^{-beta c n}; total in closed form
    FamilySeries s;
    s.closed_form = true;
    const double x = std::exp(-beta * c);
    double t = x;  // T(1)
    for (std::uint32_t n = 1; n <= length_cap; ++n) {
        s.per_length.push_back(t);
        t *= 2.0 * x;
    }
    s.total = 1.0 + x / (1.0 - 2.0 * x);
    s.beyond = std::pow(2.0 * x, static_cast<double>(length_cap)) * x / (1.0 - 2.0 * x);
    return s;
}

FamilySeries dp_series(const TransitionMatrix& a, const Potential& f, double beta,
                       const std::vector<Symbol>& terminals, double branching_upper,
                       std::uint32_t length_cap) {
    FamilySeries s;
    const double q = branching_upper * std::exp(-beta * f.inf());
    auto geo_beyond = [&](std::uint32_t l) {
        // sum_{n > l} b^{n-1} e^{-beta inf(F) n} for q = b e^{-beta inf(F)} < 1
        if (q >= 1.0) return std::numeric_limits<double>::infinity();
        return std::pow(q, static_cast<double>(l) + 1.0) / (branching_upper * (1.0 - q));
    };
    std::map<Symbol, double> g;  // G_k keyed by first letter
    for (Symbol t : terminals) g[t] += std::exp(-beta * f.eval_letter(t));
    double running = 1.0;
    for (std::uint32_t n = 1; n <= length_cap; ++n) {
        double tn = 0.0;
        for (const auto& [j, v] : g) tn += v;
        s.per_length.push_back(tn);
        running += tn;
        if (geo_beyond(n) <= 1e-17 * running) break;
        std::map<Symbol, double> next;
        for (const auto& [sym, v] : g) {
            for (Symbol i : a.predecessors(sym).symbols) next[i] += v;
        }
        for (auto& [i, v] : next) v *= std::exp(-beta * f.eval_letter(i));
        g = std::move(next);
    }
    s.total = running;
    s.beyond = geo_beyond(static_cast<std::uint32_t>(s.per_length.size()));
    return s;
}

std::uint64_t stems_of_length(const TransitionMatrix& a, const Root& root, std::uint32_t n,
                              std::uint32_t horizon) {
    return n > 24 ? ~0ull : count_stems(a, root, n, horizon);
}

}  // namespace

NormalizeResult normalize(const TransitionMatrix& a, const Potential& f, double beta, const Root& root,
                          double tol, std::size_t max_atoms, std::uint32_t horizon) {
    if (beta <= 0) throw PreconditionError("BadBeta", "beta must be positive");
    if (tol <= 0) throw PreconditionError("BadTol", "tol must be positive");
    const auto terminals = terminal_letters(a, root, horizon);
    if (terminals.empty()) throw PreconditionError("UnsupportedRoot", "root has no terminal letters");

    const auto branching = a.branching_bounds();
    if (!branching) {
        return UndeterminedSeries{{}, "no per-step branching bound declared for this family"};
    }
    const double b_lower = branching->first;
    const double b_upper = branching->second;

    if (beta * f.sup() <= std::log(b_lower)) {
        return Divergent{"beta * sup F <= log " + std::to_string(static_cast<int>(b_lower)) +
                         ": the normalization series diverges (per-step preimage count >= " +
                         std::to_string(static_cast<int>(b_lower)) + ")"};
    }
    if (!(beta * f.inf() > std::log(b_upper))) {
        FamilySeries probe = dp_series(a, f, beta, terminals, b_upper, 12);
        std::vector<double> partials;
        double run = 1.0;
        for (double t : probe.per_length) partials.push_back(run += t);
        return UndeterminedSeries{partials,
                                  "beta between the divergence and convergence thresholds; series undetermined"};
    }

    const bool renewal_const = a.family() == Family::Renewal && f.is_constant();
    const FamilySeries series = renewal_const
                                    ? renewal_constant_series(beta, f.constant_value(), 600)
                                    : dp_series(a, f, beta, terminals, b_upper, 600);

    AtomicMeasure mu;
    mu.root_tag = root;
    mu.c_empty = 1.0 / series.total;

    // Truncation: smallest length with certified tail <= tol, within the atom
    // budget. The remainder is the exact series remainder plus the geometric
    // bound beyond the computed lengths.
    auto tail_after = [&](std::uint32_t l) {
        double rest = series.beyond;
        for (std::size_t n = l; n < series.per_length.size(); ++n) rest += series.per_length[n];
        return mu.c_empty * rest;
    };
    std::uint32_t l_enum = 0;
    std::uint64_t atom_budget = max_atoms;
    std::uint64_t atoms_so_far = 1;
    while (tail_after(l_enum) > tol && l_enum < series.per_length.size()) {
        const std::uint64_t next = stems_of_length(a, root, l_enum + 1, horizon);
        if (l_enum + 1 > 20 || atoms_so_far + next > atom_budget) break;
        atoms_so_far += next;
        ++l_enum;
    }
    mu.truncation_length = l_enum;
    mu.tail_bound = tail_after(l_enum);
    mu.tail_certificate =
        "remainder beyond length " + std::to_string(l_enum) + " summed " +
        (series.closed_form ? "in closed form" : "by transfer recursion") +
        ", dominated beyond length " + std::to_string(series.per_length.size()) + " by sum b^(n-1) e^(-beta inf(F) n) with b = " +
        std::to_string(static_cast<int>(b_upper));

    mu.atoms.emplace(Configuration(Word{}, root), mu.c_empty);
    for (std::uint32_t n = 1; n <= l_enum; ++n) {
        for (const Configuration& xi : enumerate_finite_words(a, root, n, horizon)) {
            mu.atoms.emplace(xi, mu.c_empty * coefficient(f, beta, xi));
        }
    }
    return mu;
}

CylinderInterval measure_of_cylinder(const AtomicMeasure& mu, const Word& alpha) {
    CylinderInterval out;
    for (const auto& [xi, w] : mu.atoms) {
        if (xi.has_finite_stem() && is_prefix(alpha, xi.finite_stem())) out.lo += w;
    }
    out.hi = out.lo + mu.tail_bound;
    return out;
}

namespace {

void record(CheckReport& rep, double diff, double scale, double tol, const std::string& where) {
    ++rep.checked;
    const double bound = tol * std::max(1.0, scale);
    if (diff > rep.worst) {
        rep.worst = diff;
        rep.worst_at = where;
    }
    if (diff > bound) rep.pass = false;
}

}  // namespace

CheckReport du_check(const TransitionMatrix& a, const AtomicMeasure& mu, const Potential& f, double beta,
                     double tol) {
    (void)a;
    CheckReport rep;
    for (const auto& [xi, w] : mu.atoms) {
        if (!xi.has_finite_stem() || xi.finite_stem().empty()) continue;
        const Configuration img = shift(xi);
        const auto it = mu.atoms.find(img);
        if (it == mu.atoms.end()) continue;
        const double lhs = w * std::exp(beta * f.eval(xi));
        record(rep, std::abs(lhs - it->second), it->second, tol, xi.str());
    }
    return rep;
}

CheckReport eigenmeasure_check(const TransitionMatrix& a, const AtomicMeasure& mu, const Potential& f,
                               double beta, const std::vector<Word>& test_cylinders, double tol,
                               std::uint32_t horizon) {
    CheckReport rep;
    const auto branching = a.branching_bounds();
    const double slack =
        mu.tail_bound * (1.0 + (branching ? branching->second : 3.0) * std::exp(-beta * f.inf()));
    for (const Word& alpha : test_cylinders) {
        double lhs = 0.0;
        for (const auto& [xi, w] : mu.atoms) {
            if (!xi.has_finite_stem()) continue;
            const Word& stem = xi.finite_stem();
            // atomic preimages: one prepended letter, root unchanged
            std::vector<Symbol> heads;
            if (stem.empty()) {
                heads = terminal_letters(a, xi.root(), horizon);
            } else {
                heads = a.predecessors(stem.front()).symbols;
            }
            for (Symbol j : heads) {
                Word pre{j};
                pre.insert(pre.end(), stem.begin(), stem.end());
                if (!is_prefix(alpha, pre)) continue;
                lhs += w * std::exp(-beta * f.eval_letter(j));
            }
        }
        double rhs = 0.0;
        for (const auto& [xi, w] : mu.atoms) {
            if (xi.has_finite_stem() && !xi.finite_stem().empty() && is_prefix(alpha, xi.finite_stem()))
                rhs += w;
        }
        record(rep, std::max(0.0, std::abs(lhs - rhs) - slack), std::max(lhs, rhs), tol,
               "C_" + format_word(alpha));
    }
    return rep;
}

CheckReport sarig_check(const TransitionMatrix& a, const AtomicMeasure& mu, const Potential& f, double beta,
                        double tol) {
    (void)a;
    CheckReport rep;
    for (const auto& [xi, w] : mu.atoms) {
        if (!xi.has_finite_stem() || xi.finite_stem().empty() || w <= 0.0) continue;
        const auto it = mu.atoms.find(shift(xi));
        if (it == mu.atoms.end()) continue;
        const double expected = std::exp(beta * f.eval(xi));
        record(rep, std::abs(it->second / w - expected), expected, tol, xi.str());
    }
    return rep;
}

CheckReport quasi_invariance_arrow_check(const TransitionMatrix& a, const AtomicMeasure& mu,
                                         const Potential& f, double beta, std::uint32_t max_n, double tol) {
    (void)a;
    CheckReport rep;
    for (const auto& [xi, w] : mu.atoms) {
        if (!xi.has_finite_stem()) continue;
        const std::uint32_t len = static_cast<std::uint32_t>(xi.finite_stem().size());
        Configuration cur = xi;
        for (std::uint32_t n = 1; n <= std::min(max_n, len); ++n) {
            cur = shift(cur);
            const auto it = mu.atoms.find(cur);
            if (it == mu.atoms.end()) break;
            const double lhs = std::exp(beta * birkhoff_sum(f, xi, n)) * w;
            record(rep, std::abs(lhs - it->second), it->second, tol,
                   xi.str() + " --" + std::to_string(n) + "--> " + cur.str());
        }
    }
    return rep;
}

ExtremalDecomposition extremal_decomposition(const TransitionMatrix& a, const AtomicMeasure& mu) {
    (void)a;
    ExtremalDecomposition out;
    std::map<Root, AtomicMeasure> parts;
    for (const auto& [xi, w] : mu.atoms) {
        AtomicMeasure& part = parts[xi.root()];
        part.atoms.emplace(xi, w);
    }
    for (auto& [root, part] : parts) {
        double lambda = part.atom_sum();
        out.weights.emplace_back(root, lambda);
        out.weight_sum += lambda;
        if (lambda > 0.0) {
            for (auto& [xi, w] : part.atoms) w /= lambda;
            part.tail_bound = mu.tail_bound / lambda;
            part.c_empty = 0.0;
            if (auto it = part.atoms.find(Configuration(Word{}, root)); it != part.atoms.end())
                part.c_empty = it->second;
            part.root_tag = root;
            part.truncation_length = mu.truncation_length;
            part.tail_certificate = mu.tail_certificate;
        }
        out.conditionals.emplace_back(root, std::move(part));
    }
    return out;
}

AtomicMeasure mix(const std::vector<std::pair<double, const AtomicMeasure*>>& parts) {
    AtomicMeasure out;
    for (const auto& [lambda, mu] : parts) {
        for (const auto& [xi, w] : mu->atoms) out.atoms[xi] += lambda * w;
        out.tail_bound += lambda * mu->tail_bound;
        out.truncation_length = std::max(out.truncation_length, mu->truncation_length);
    }
    out.root_tag = std::nullopt;  // mixed
    out.tail_certificate = "convex mixture";
    return out;
}

std::vector<ScanRow> critical_beta_scan(const TransitionMatrix& a, const Potential& f,
                                        const std::vector<double>& betas, std::uint32_t horizon) {
    std::vector<ScanRow> rows;
    const auto empties = empty_words(a, horizon);
    if (empties.empty()) throw PreconditionError("NoEmptyWords", "no empty-word families to scan");
    const Root root = empties.front().root();
    for (double beta : betas) {
        ScanRow row;
        row.beta = beta;
        NormalizeResult r = normalize(a, f, beta, root, 1e-9, 1, horizon);
        if (std::holds_alternative<AtomicMeasure>(r)) {
            row.kind = ScanRow::Kind::Converges;
            row.c_empty = std::get<AtomicMeasure>(r).c_empty;
        } else if (std::holds_alternative<Divergent>(r)) {
            row.kind = ScanRow::Kind::Diverges;
            row.threshold = std::get<Divergent>(r).threshold;
        } else {
            row.kind = ScanRow::Kind::Undetermined;
            row.partials = std::get<UndeterminedSeries>(r).partial_sums;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace gcms
