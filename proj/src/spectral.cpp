#include "gcms/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "gcms/dynamics.hpp"
#include "gcms/errors.hpp"

namespace gcms {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool has_full_first_row(const TransitionMatrix& a) {
    switch (a.family()) {
        case Family::Renewal:
        case Family::LazyRenewal:
        case Family::PairRenewal:
        case Family::PrimeRenewal:
        case Family::NRenewal:
        case Family::FullShift:
        case Family::CE1:
        case Family::CE3:
            return true;
        default:
            for (Symbol j = 1; j <= 64; ++j) {
                if (!a.entry(1, j)) return false;
            }
            return true;  // finite evidence only; used for RuleList clones
    }
}

std::vector<Symbol> sorted_unique(std::vector<Symbol> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

TermNormalization nonzero_term(const TransitionMatrix& a, const Word& gamma, const std::vector<Symbol>& f_in,
                               std::uint32_t horizon) {
    if (gamma.empty() && f_in.empty())
        throw PreconditionError("BadTerm", "(e, {}) is not an admissible pair");
    if (!is_admissible(a, gamma))
        throw PreconditionError("NonNormalForm", "gamma must be admissible");
    const std::vector<Symbol> f = sorted_unique(f_in);

    TermNormalization out;
    if (a.family() == Family::Renewal) {
        std::vector<Symbol> big;  // members of F larger than 1
        for (Symbol j : f) {
            if (j > 1) big.push_back(j);
        }
        if (big.size() >= 2) return out;  // Q_j Q_k = 0 for distinct j,k > 1
        if (big.empty()) {
            // F is empty or {1}
            if (gamma.empty()) {
                out.kind = TermNormalization::Kind::Identity;
                return out;
            }
            out.kind = TermNormalization::Kind::Cylinders;
            out.cylinders = {gamma};
            return out;
        }
        const Symbol n = big.front();
        if (!gamma.empty() && !a.entry(gamma.back(), n - 1)) return out;  // zero
        Word w = gamma;
        w.push_back(n - 1);
        out.kind = TermNormalization::Kind::Cylinders;
        out.cylinders = {w};
        return out;
    }

    // Column-finite matrices: expand into the child cylinders of the common
    // range of F, following the inverse-cylinder decomposition.
    if (a.declared_column_finite() == std::optional<bool>(false))
        throw PreconditionError("UnsupportedTerm", "normal form needs a column-finite matrix");
    if (f.empty()) {
        out.kind = TermNormalization::Kind::Cylinders;
        out.cylinders = {gamma};
        return out;
    }
    if (gamma.empty() && f == std::vector<Symbol>{1} && has_full_first_row(a)) {
        out.kind = TermNormalization::Kind::Identity;
        return out;
    }
    const Symbol scan = static_cast<Symbol>(2 * std::max<std::uint32_t>(horizon, 32));
    std::vector<Symbol> common;
    for (Symbol k = 1; k <= scan; ++k) {
        bool all = true;
        for (Symbol j : f) {
            if (!a.entry(j, k)) {
                all = false;
                break;
            }
        }
        if (all) common.push_back(k);
    }
    std::vector<Word> children;
    for (Symbol k : common) {
        if (!gamma.empty() && !a.entry(gamma.back(), k)) continue;
        Word w = gamma;
        w.push_back(k);
        children.push_back(std::move(w));
    }
    if (children.size() > horizon)
        throw PreconditionError("UnsupportedTerm",
                                "F has infinite common range here; only the identity-like terms collapse");
    if (children.empty()) return out;  // zero
    out.kind = TermNormalization::Kind::Cylinders;
    out.cylinders = std::move(children);
    return out;
}

std::uint32_t NormalForm::depth() const {
    std::size_t d = 0;
    for (const auto& [w, c] : cylinders) d = std::max(d, w.size());
    return static_cast<std::uint32_t>(d);
}

NormalForm normal_form(const TransitionMatrix& a, const GAElement& el, std::uint32_t horizon) {
    NormalForm nf;
    nf.lambda0 = el.lambda0;
    for (const auto& [coef, term] : el.terms) {
        TermNormalization t = nonzero_term(a, term.gamma, term.f, horizon);
        switch (t.kind) {
            case TermNormalization::Kind::Identity:
                nf.lambda0 += coef;
                break;
            case TermNormalization::Kind::Cylinders:
                for (const Word& w : t.cylinders) nf.cylinders[w] += coef;
                break;
            case TermNormalization::Kind::Zero:
                break;
        }
    }
    for (auto it = nf.cylinders.begin(); it != nf.cylinders.end();) {
        if (std::abs(it->second) == 0.0) it = nf.cylinders.erase(it);
        else ++it;
    }
    return nf;
}

namespace {

void admissible_words(const TransitionMatrix& a, const std::vector<Symbol>& alphabet, std::uint32_t len,
                      Word& scratch, std::vector<Word>& out) {
    if (scratch.size() == len) {
        out.push_back(scratch);
        return;
    }
    for (Symbol s : alphabet) {
        if (!scratch.empty() && !a.entry(scratch.back(), s)) continue;
        scratch.push_back(s);
        admissible_words(a, alphabet, len, scratch, out);
        scratch.pop_back();
    }
}

Coef empty_word_value(const GAElement& el, const TransitionMatrix& a, const Root& root) {
    Coef v = el.lambda0 * (root.contains(1) && has_full_first_row(a) ? 1.0 : 0.0);
    for (const auto& [coef, term] : el.terms) {
        if (!term.gamma.empty()) continue;  // positive-cylinder terms vanish on E_A
        bool active = true;
        for (Symbol j : term.f) active = active && root.contains(j);
        if (active) v += coef;
    }
    return v;
}

}  // namespace

CylinderFunction gelfand(const GAElement& el, const TransitionMatrix& a, std::vector<Symbol> alphabet,
                         std::uint32_t horizon) {
    const NormalForm nf = normal_form(a, el, horizon);
    if (std::abs(nf.lambda0) != 0.0 && !has_full_first_row(a))
        throw PreconditionError("UnsupportedTerm", "identity-like term needs a full first row");
    alphabet = sorted_unique(std::move(alphabet));
    for (const auto& [w, c] : nf.cylinders) {
        for (Symbol s : w) {
            if (!std::binary_search(alphabet.begin(), alphabet.end(), s))
                throw PreconditionError("AlphabetTooSmall", "cylinder symbol " + std::to_string(s) +
                                                                " missing from the alphabet");
        }
    }
    CylinderFunction cf;
    cf.depth = std::max<std::uint32_t>(nf.depth(), 1);
    cf.alphabet = alphabet;
    std::vector<Word> words;
    Word scratch;
    admissible_words(a, alphabet, cf.depth, scratch, words);
    for (const Word& w : words) {
        Coef v = nf.lambda0;
        for (const auto& [cyl, coef] : nf.cylinders) {
            if (is_prefix(cyl, w)) v += coef;
        }
        cf.table.emplace(w, v);
    }
    for (const Configuration& e : empty_words(a, horizon)) {
        cf.empty_word_values.emplace_back(e, empty_word_value(el, a, e.root()));
    }
    return cf;
}

std::vector<Symbol> choose_finite_alphabet(const GAElement& el, const TransitionMatrix& a) {
    const NormalForm nf = normal_form(a, el);
    Symbol m = 1;
    for (const auto& [w, c] : nf.cylinders) {
        for (Symbol s : w) m = std::max(m, s);
    }
    for (; m <= 512; ++m) {
        std::vector<Symbol> alphabet(m);
        for (Symbol i = 1; i <= m; ++i) alphabet[i - 1] = i;
        if (a.is_irreducible_restricted(alphabet)) return alphabet;
    }
    throw PreconditionError("AlphabetTooSmall", "no irreducible restriction within 512 symbols");
}

// ---------------------------------------------------------------------------
// maximum cycle mean

namespace {

struct Scc {
    std::vector<int> comp;  // vertex -> component id
    int count = 0;
};

Scc tarjan(std::size_t n, const std::vector<std::vector<std::pair<int, double>>>& adj) {
    Scc scc;
    scc.comp.assign(n, -1);
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    int next = 0;
    // iterative Tarjan
    struct Frame {
        int v;
        std::size_t edge;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> frames{{static_cast<int>(root), 0}};
        while (!frames.empty()) {
            Frame& f = frames.back();
            const int v = f.v;
            if (f.edge == 0) {
                index[v] = low[v] = next++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            while (f.edge < adj[v].size()) {
                const int w = adj[v][f.edge].first;
                ++f.edge;
                if (index[w] == -1) {
                    frames.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                while (true) {
                    const int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    scc.comp[w] = scc.count;
                    if (w == v) break;
                }
                ++scc.count;
            }
            frames.pop_back();
            if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
        }
    }
    return scc;
}

}  // namespace

MeanCycleResult max_mean_cycle(const MeanCycleGraph& g) {
    MeanCycleResult res;
    const std::size_t n = g.vertex_count;
    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (const auto& [u, v, w] : g.edges) adj[u].emplace_back(v, w);

    const Scc scc = tarjan(n, adj);
    res.max_mean = kNegInf;

    for (int c = 0; c < scc.count; ++c) {
        std::vector<int> verts;
        for (std::size_t v = 0; v < n; ++v) {
            if (scc.comp[v] == c) verts.push_back(static_cast<int>(v));
        }
        std::vector<std::tuple<int, int, double>> edges;  // indices within the SCC
        std::vector<int> local(n, -1);
        for (std::size_t i = 0; i < verts.size(); ++i) local[verts[i]] = static_cast<int>(i);
        for (int u : verts) {
            for (const auto& [v, w] : adj[u]) {
                if (scc.comp[v] == c) edges.emplace_back(local[u], local[v], w);
            }
        }
        if (edges.empty()) continue;  // trivial component without a self-loop
        const std::size_t m = verts.size();

        // Karp: D[k][v] = best weight of a k-edge walk from the source.
        std::vector<std::vector<double>> d(m + 1, std::vector<double>(m, kNegInf));
        d[0][0] = 0.0;
        for (std::size_t k = 1; k <= m; ++k) {
            for (const auto& [u, v, w] : edges) {
                if (d[k - 1][u] > kNegInf) d[k][v] = std::max(d[k][v], d[k - 1][u] + w);
            }
        }
        double lambda = kNegInf;
        for (std::size_t v = 0; v < m; ++v) {
            if (d[m][v] <= kNegInf) continue;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < m; ++k) {
                if (d[k][v] <= kNegInf) continue;
                best = std::min(best, (d[m][v] - d[k][v]) / static_cast<double>(m - k));
            }
            lambda = std::max(lambda, best);
        }
        if (lambda <= kNegInf) continue;
        if (!res.has_cycle || lambda > res.max_mean) {
            res.has_cycle = true;
            res.max_mean = lambda;
            // Witness: potentials for w - lambda, then a cycle in the tight subgraph.
            double eps = 1e-9;
            for (int attempt = 0; attempt < 4; ++attempt, eps *= 100) {
                std::vector<double> pot(m, 0.0);
                for (std::size_t it = 0; it < 2 * m + 2; ++it) {
                    for (const auto& [u, v, w] : edges) {
                        pot[v] = std::max(pot[v], pot[u] + (w - lambda));
                    }
                }
                std::vector<std::vector<int>> tight(m);
                for (const auto& [u, v, w] : edges) {
                    if (pot[u] + (w - lambda) >= pot[v] - eps) tight[u].push_back(v);
                }
                // a cycle in the tight subgraph, found by path-tracking DFS
                std::vector<int> state(m, 0);  // 0 new, 1 on path, 2 done
                std::vector<int> path;
                std::vector<int> cyc;
                auto dfs = [&](auto&& self, int v) -> bool {
                    state[v] = 1;
                    path.push_back(v);
                    for (int w2 : tight[v]) {
                        if (state[w2] == 1) {
                            auto at = std::find(path.begin(), path.end(), w2);
                            cyc.assign(at, path.end());
                            return true;
                        }
                        if (state[w2] == 0 && self(self, w2)) return true;
                    }
                    state[v] = 2;
                    path.pop_back();
                    return false;
                };
                for (std::size_t v = 0; v < m && cyc.empty(); ++v) {
                    if (state[v] == 0) dfs(dfs, static_cast<int>(v));
                }
                if (cyc.empty()) continue;
                double total = 0.0;
                bool ok = true;
                for (std::size_t i = 0; i < cyc.size(); ++i) {
                    const int u = cyc[i];
                    const int v = cyc[(i + 1) % cyc.size()];
                    double wbest = kNegInf;
                    for (const auto& [eu, ev, w] : edges) {
                        if (eu == u && ev == v) wbest = std::max(wbest, w);
                    }
                    if (wbest <= kNegInf) ok = false;
                    total += wbest;
                }
                const double mean = total / static_cast<double>(cyc.size());
                if (ok && std::abs(mean - lambda) <= 1e-7 * std::max(1.0, std::abs(lambda))) {
                    res.cycle.clear();
                    for (int v : cyc) res.cycle.push_back(verts[v]);
                    res.max_mean = mean;
                    break;
                }
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// radius

namespace {

double empty_branch(const GAElement& el, const TransitionMatrix& a, const Extendable& ext,
                    std::string& orbit_desc) {
    // geometric mean of |a| along each sigma-cycle of E_A; E_A is a disjoint
    // union of cycles in the extendable classes
    std::map<Root, Root> next;
    for (const auto& [from, to] : ext.empty_word_dynamics) next[from.root()] = to.root();
    std::set<Root> seen;
    double best = 0.0;
    for (const auto& [start, unused] : next) {
        if (seen.count(start)) continue;
        Root cur = start;
        double log_sum = 0.0;
        std::size_t len = 0;
        bool zero = false;
        std::string desc;
        while (!seen.count(cur)) {
            seen.insert(cur);
            const double v = std::abs(empty_word_value(el, a, cur));
            desc += (desc.empty() ? "" : " -> ") + cur.str();
            if (v == 0.0) zero = true;
            else log_sum += std::log(v);
            ++len;
            auto it = next.find(cur);
            if (it == next.end()) break;
            cur = it->second;
        }
        const double value = zero ? 0.0 : std::exp(log_sum / static_cast<double>(len));
        if (value > best) {
            best = value;
            orbit_desc = "E_A orbit " + desc;
        }
    }
    return best;
}

}  // namespace

SpectralResult spectral_radius(const GAElement& el, const TransitionMatrix& a, std::uint32_t horizon,
                               const std::vector<Symbol>& alphabet_override) {
    const ExtensionVerdict verdict = extension_verdict(a, horizon);
    if (!std::holds_alternative<Extendable>(verdict))
        throw PreconditionError("NotExtendable",
                                "spectral radius needs a matrix with a continuous shift extension");
    const Extendable& ext = std::get<Extendable>(verdict);

    const auto alphabet = alphabet_override.empty() ? choose_finite_alphabet(el, a) : alphabet_override;
    const CylinderFunction cf = gelfand(el, a, alphabet, horizon);

    std::vector<Word> verts;
    std::map<Word, int> id;
    for (const auto& [w, v] : cf.table) {
        if (std::abs(v) > 0.0) {
            id.emplace(w, static_cast<int>(verts.size()));
            verts.push_back(w);
        }
    }
    MeanCycleGraph g;
    g.vertex_count = verts.size();
    for (const Word& w : verts) g.labels.push_back(format_word(w));
    for (std::size_t u = 0; u < verts.size(); ++u) {
        const Word& w = verts[u];
        const double weight = std::log(std::abs(cf.table.at(w)));
        for (Symbol s : alphabet) {
            Word nxt(w.begin() + 1, w.end());
            nxt.push_back(s);
            if (cf.depth == 1 && !a.entry(w.back(), s)) continue;
            auto it = id.find(nxt);
            if (it == id.end()) continue;
            g.edges.emplace_back(static_cast<int>(u), it->second, weight);
        }
    }
    const MeanCycleResult mc = max_mean_cycle(g);
    const double sigma_branch = mc.has_cycle ? std::exp(mc.max_mean) : 0.0;

    std::string orbit_desc;
    const double e_branch = empty_branch(el, a, ext, orbit_desc);

    SpectralResult out;
    if (sigma_branch >= e_branch) {
        out.radius = sigma_branch;
        out.branch = "sigma";
        if (mc.has_cycle) {
            std::string cyc;
            for (int v : mc.cycle) cyc += (cyc.empty() ? "" : " -> ") + std::string("[") + g.labels[v] + "]";
            out.certificate = "maximizing cycle " + cyc;
        } else {
            out.certificate = "no admissible cycle with nonzero weight; empty branch also " +
                              std::to_string(e_branch);
        }
    } else {
        out.radius = e_branch;
        out.branch = "empty";
        out.certificate = orbit_desc;
    }
    return out;
}

double brute_force_radius(const GAElement& el, const TransitionMatrix& a, std::uint32_t max_len,
                          std::uint32_t horizon) {
    if (max_len > 12) throw PreconditionError("BadLength", "brute force capped at max_len = 12");
    const auto alphabet = choose_finite_alphabet(el, a);

    // |a^| at the infinite word given by rotating `cycle`
    std::size_t needed = 1;
    for (const auto& [coef, term] : el.terms) needed = std::max(needed, term.gamma.size() + 1);
    auto value_at = [&](const std::vector<Symbol>& cycle, std::size_t rot) {
        Word x(needed + 1);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = cycle[(rot + i) % cycle.size()];
        Coef v = el.lambda0 * (a.entry(1, x[0]) ? 1.0 : 0.0);
        for (const auto& [coef, term] : el.terms) {
            if (!is_prefix(term.gamma, x)) continue;
            bool active = true;
            for (Symbol j : term.f) active = active && a.entry(j, x[term.gamma.size()]);
            if (active) v += coef;
        }
        return std::abs(v);
    };

    double best = 0.0;
    std::vector<Symbol> word;
    std::uint64_t visited = 0;
    auto dfs = [&](auto&& self) -> void {
        if (++visited > (1u << 22))
            throw PreconditionError("EnumerationTooLarge", "periodic-orbit scan too large");
        if (!word.empty() && a.entry(word.back(), word.front())) {
            double log_sum = 0.0;
            bool zero = false;
            for (std::size_t rot = 0; rot < word.size() && !zero; ++rot) {
                const double v = value_at(word, rot);
                if (v == 0.0) zero = true;
                else log_sum += std::log(v);
            }
            if (!zero) best = std::max(best, std::exp(log_sum / static_cast<double>(word.size())));
        }
        if (word.size() == max_len) return;
        for (Symbol s : alphabet) {
            if (!word.empty() && !a.entry(word.back(), s)) continue;
            word.push_back(s);
            self(self);
            word.pop_back();
        }
    };
    dfs(dfs);

    const ExtensionVerdict verdict = extension_verdict(a, horizon);
    if (std::holds_alternative<Extendable>(verdict)) {
        std::string unused;
        best = std::max(best, empty_branch(el, a, std::get<Extendable>(verdict), unused));
    }
    return best;
}

}  // namespace gcms
