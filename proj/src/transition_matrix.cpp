#include "gcms/transition_matrix.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "gcms/errors.hpp"

namespace gcms {

Root Root::of(std::vector<Symbol> symbols) {
    std::sort(symbols.begin(), symbols.end());
    symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
    for (Symbol s : symbols) {
        if (s < 1) throw PreconditionError("BadRoot", "root symbols are positive");
    }
    Root r;
    r.symbols_ = std::move(symbols);
    return r;
}

const std::vector<Symbol>& Root::symbols() const {
    if (all_) throw PreconditionError("UnsupportedRoot", "AllSymbols root has no finite symbol list");
    return symbols_;
}

bool Root::contains(Symbol s) const { return all_ || std::binary_search(symbols_.begin(), symbols_.end(), s); }

bool Root::operator<(const Root& o) const {
    if (all_ != o.all_) return !all_;
    return symbols_ < o.symbols_;
}

std::string Root::str() const {
    if (all_) return "all";
    std::string s = "{";
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(symbols_[i]);
    }
    return s + "}";
}

std::string to_string(Fact f) {
    switch (f) {
        case Fact::Yes: return "yes";
        case Fact::No: return "no";
        default: return "undecided";
    }
}

bool is_prime(Symbol n) {
    if (n < 2) return false;
    for (Symbol d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

std::optional<Symbol> prime_power_base(Symbol j) {
    if (j < 2) return std::nullopt;
    Symbol p = j;
    for (Symbol d = 2; d * d <= j; ++d) {
        if (j % d == 0) {
            p = d;
            break;
        }
    }
    Symbol m = j;
    while (m % p == 0) m /= p;
    if (m == 1) return p;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// construction

TransitionMatrix TransitionMatrix::renewal() {
    TransitionMatrix a;
    a.family_ = Family::Renewal;
    a.column_finite_ = true;
    a.compact_ = true;
    a.block_ = PeriodicBlock{{{1}}, 2, 1, 1};
    a.branching_ = {2, 2};
    return a;
}

TransitionMatrix TransitionMatrix::lazy_renewal() {
    TransitionMatrix a;
    a.family_ = Family::LazyRenewal;
    a.column_finite_ = true;
    a.compact_ = true;
    a.branching_ = {2, 3};
    return a;
}

TransitionMatrix TransitionMatrix::pair_renewal() {
    TransitionMatrix a;
    a.family_ = Family::PairRenewal;
    a.column_finite_ = true;
    a.compact_ = true;
    a.block_ = PeriodicBlock{{{1, 1}, {0, 1}}, 3, 2, 2};
    a.branching_ = {2, 3};
    return a;
}

TransitionMatrix TransitionMatrix::prime_renewal() {
    TransitionMatrix a;
    a.family_ = Family::PrimeRenewal;
    a.column_finite_ = true;
    a.compact_ = true;
    a.branching_ = {2, 3};
    return a;
}

TransitionMatrix TransitionMatrix::n_renewal(std::uint32_t n) {
    if (n < 2) throw PreconditionError("BadFamily", "n-renewal needs N >= 2");
    TransitionMatrix a;
    a.family_ = Family::NRenewal;
    a.n_param_ = n;
    a.column_finite_ = true;
    a.compact_ = true;
    PeriodicBlock b;
    b.block.assign(n, std::vector<int>(n, 0));
    for (std::uint32_t k = 0; k < n; ++k) b.block[0][k] = 1;
    for (std::uint32_t k = 1; k < n; ++k) b.block[k][k] = 1;
    b.start_column = n + 1;
    b.period = n;
    b.last_infinite_emitter = n;
    a.block_ = b;
    a.branching_ = {2, 3};
    return a;
}

TransitionMatrix TransitionMatrix::full_shift() {
    TransitionMatrix a;
    a.family_ = Family::FullShift;
    a.column_finite_ = false;
    a.compact_ = true;
    return a;
}

TransitionMatrix TransitionMatrix::ce1() {
    TransitionMatrix a;
    a.family_ = Family::CE1;
    a.column_finite_ = true;
    a.compact_ = true;
    return a;
}

TransitionMatrix TransitionMatrix::ce2() {
    TransitionMatrix a;
    a.family_ = Family::CE2;
    a.column_finite_ = true;
    a.compact_ = false;
    return a;
}

TransitionMatrix TransitionMatrix::ce3() {
    TransitionMatrix a;
    a.family_ = Family::CE3;
    a.column_finite_ = true;
    a.compact_ = true;
    return a;
}

TransitionMatrix TransitionMatrix::finite_explicit(std::vector<std::vector<int>> rows) {
    TransitionMatrix a;
    a.family_ = Family::FiniteExplicit;
    a.rows_ = std::move(rows);
    a.column_finite_ = true;
    a.compact_ = false;  // columns beyond the block are a zero column limit
    return a;
}

TransitionMatrix TransitionMatrix::rule_list(std::vector<EntryRule> rules) {
    TransitionMatrix a;
    a.family_ = Family::RuleList;
    a.rules_ = std::move(rules);
    bool cf = true;
    for (const auto& r : a.rules_) {
        if (r.col.coeff == 0 && r.row.coeff != 0) cf = false;
    }
    a.column_finite_ = cf;
    return a;
}

// ---------------------------------------------------------------------------
// entries

int TransitionMatrix::entry_rule(Symbol i, Symbol j) const {
    switch (family_) {
        case Family::Renewal:
            return (i == 1 || i == j + 1) ? 1 : 0;
        case Family::LazyRenewal:
            return (i == 1 || i == j || i == j + 1) ? 1 : 0;
        case Family::PairRenewal:
            return (i == 1 || i == j + 1 || (i == 2 && j % 2 == 0)) ? 1 : 0;
        case Family::PrimeRenewal: {
            if (i == 1 || i == j + 1) return 1;
            if (is_prime(i)) {
                auto base = prime_power_base(j);
                if (base && *base == i) return 1;
            }
            return 0;
        }
        case Family::NRenewal: {
            if (i == 1 || i == j + 1) return 1;
            if (i >= 2 && i <= n_param_ && j >= n_param_ + i && (j - i) % n_param_ == 0) return 1;
            return 0;
        }
        case Family::FullShift:
            return 1;
        case Family::CE1: {
            if (i == 1 || i == j + 1) return 1;
            if (i == 2 && ((j >= 4 && j % 3 == 1) || j % 3 == 2)) return 1;
            return 0;
        }
        case Family::CE2:
            return (i == j + 1 || (i == 1 && j % 2 == 0)) ? 1 : 0;
        case Family::CE3: {
            if (i == 1 || i == j + 1 || (i == 2 && j % 2 == 0)) return 1;
            if (j % 2 == 0 && i == 2 * j) return 1;
            return 0;
        }
        case Family::FiniteExplicit: {
            if (i < 1 || j < 1 || i > rows_.size()) return 0;
            const auto& row = rows_[i - 1];
            if (j > row.size()) return 0;
            return row[j - 1];
        }
        case Family::RuleList: {
            for (const auto& r : rules_) {
                const std::int64_t si = static_cast<std::int64_t>(i);
                const std::int64_t sj = static_cast<std::int64_t>(j);
                if (r.row.coeff == 0 && r.col.coeff == 0) {
                    if (r.row.offset == si && r.col.offset == sj) return 1;
                } else if (r.row.coeff != 0) {
                    const std::int64_t num = si - r.row.offset;
                    if (num % r.row.coeff != 0) continue;
                    const std::int64_t n = num / r.row.coeff;
                    if (n >= 1 && r.col.eval(n) == sj) return 1;
                } else {
                    const std::int64_t num = sj - r.col.offset;
                    if (num % r.col.coeff != 0) continue;
                    const std::int64_t n = num / r.col.coeff;
                    if (n >= 1 && r.row.eval(n) == si) return 1;
                }
            }
            return 0;
        }
    }
    return 0;
}

int TransitionMatrix::entry(Symbol i, Symbol j) const {
    if (i < 1 || j < 1) throw PreconditionError("BadSymbol", "symbols are >= 1");
    return entry_rule(i, j);
}

TransitionMatrix::SymbolSet TransitionMatrix::predecessors(Symbol j, Symbol cap) const {
    SymbolSet out;
    auto add = [&](std::uint64_t i) {
        if (i >= 1) out.symbols.push_back(static_cast<Symbol>(i));
    };
    switch (family_) {
        case Family::Renewal:
            add(1), add(j + 1);
            break;
        case Family::LazyRenewal:
            add(1), add(j), add(j + 1);
            break;
        case Family::PairRenewal:
            add(1), add(j + 1);
            if (j % 2 == 0) add(2);
            break;
        case Family::PrimeRenewal: {
            add(1), add(j + 1);
            if (auto base = prime_power_base(j)) add(*base);
            break;
        }
        case Family::NRenewal: {
            add(1), add(j + 1);
            Symbol k = j % n_param_ == 0 ? n_param_ : j % n_param_;
            if (k >= 2 && j >= n_param_ + k) add(k);
            break;
        }
        case Family::FullShift: {
            out.complete = false;
            for (Symbol i = 1; i <= cap; ++i) add(i);
            break;
        }
        case Family::CE1:
            add(1), add(j + 1);
            if ((j >= 4 && j % 3 == 1) || j % 3 == 2) add(2);
            break;
        case Family::CE2:
            add(j + 1);
            if (j % 2 == 0) add(1);
            break;
        case Family::CE3:
            add(1), add(j + 1);
            if (j % 2 == 0) add(2), add(2 * static_cast<std::uint64_t>(j));
            break;
        case Family::FiniteExplicit:
            for (Symbol i = 1; i <= rows_.size(); ++i) {
                if (entry_rule(i, j)) add(i);
            }
            break;
        case Family::RuleList: {
            for (const auto& r : rules_) {
                const std::int64_t sj = static_cast<std::int64_t>(j);
                if (r.col.coeff == 0) {
                    if (r.col.offset != sj) continue;
                    if (r.row.coeff == 0) {
                        if (r.row.offset >= 1) add(static_cast<std::uint64_t>(r.row.offset));
                    } else if (r.row.coeff > 0) {
                        out.complete = false;  // a whole arithmetic progression of rows
                        for (std::int64_t n = 1; cap; ++n) {
                            const std::int64_t i = r.row.eval(n);
                            if (i > static_cast<std::int64_t>(cap)) break;
                            if (i >= 1) add(static_cast<std::uint64_t>(i));
                        }
                    } else {
                        for (std::int64_t n = 1;; ++n) {
                            const std::int64_t i = r.row.eval(n);
                            if (i < 1) break;
                            add(static_cast<std::uint64_t>(i));
                        }
                    }
                } else {
                    const std::int64_t num = sj - r.col.offset;
                    if (num % r.col.coeff != 0) continue;
                    const std::int64_t n = num / r.col.coeff;
                    if (n < 1) continue;
                    const std::int64_t i = r.row.eval(n);
                    if (i >= 1) add(static_cast<std::uint64_t>(i));
                }
            }
            break;
        }
    }
    std::sort(out.symbols.begin(), out.symbols.end());
    out.symbols.erase(std::unique(out.symbols.begin(), out.symbols.end()), out.symbols.end());
    if (cap) {
        while (!out.symbols.empty() && out.symbols.back() > cap) out.symbols.pop_back();
    }
    return out;
}

TransitionMatrix::SymbolSet TransitionMatrix::successors(Symbol i, Symbol cap) const {
    SymbolSet out;
    for (Symbol j = 1; j <= cap; ++j) {
        if (entry_rule(i, j)) out.symbols.push_back(j);
    }
    // Completeness: is row i known to have no entries beyond the cap?
    const EmitterSet em = infinite_emitters(std::max<Symbol>(cap, 8));
    bool infinite_row = false;
    if (!em.finite) {
        // conservatively treat rows in the listed prefix (or any prime beyond,
        // for the prime renewal) as infinite
        infinite_row = std::binary_search(em.symbols.begin(), em.symbols.end(), i) ||
                       (family_ == Family::PrimeRenewal && is_prime(i)) ||
                       family_ == Family::FullShift;
    } else {
        infinite_row = std::binary_search(em.symbols.begin(), em.symbols.end(), i);
    }
    if (infinite_row) {
        out.complete = false;
    } else {
        // finite rows of the built-ins live within {i-1, i, 2i}; rule lists get a scan margin
        out.complete = cap >= 2 * i + 2;
    }
    return out;
}

// ---------------------------------------------------------------------------
// structural analysis

EmitterSet TransitionMatrix::infinite_emitters(std::uint32_t horizon) const {
    if (horizon < 2) throw PreconditionError("BadHorizon", "horizon must be >= 2");
    EmitterSet e;
    switch (family_) {
        case Family::Renewal:
        case Family::LazyRenewal:
        case Family::CE2:
            e.symbols = {1};
            e.description = "{1}";
            break;
        case Family::PairRenewal:
        case Family::CE1:
        case Family::CE3:
            e.symbols = {1, 2};
            e.description = "{1,2}";
            break;
        case Family::PrimeRenewal: {
            e.symbols = {1};
            for (Symbol p = 2; p <= horizon; ++p) {
                if (is_prime(p)) e.symbols.push_back(p);
            }
            e.finite = false;
            e.description = "{1} and every prime";
            break;
        }
        case Family::NRenewal: {
            for (Symbol k = 1; k <= n_param_; ++k) e.symbols.push_back(k);
            e.description = "{1,...," + std::to_string(n_param_) + "}";
            break;
        }
        case Family::FullShift: {
            for (Symbol i = 1; i <= horizon; ++i) e.symbols.push_back(i);
            e.finite = false;
            e.description = "every symbol";
            break;
        }
        case Family::FiniteExplicit:
            e.description = "none (finite block)";
            break;
        case Family::RuleList: {
            // a row is infinite exactly when a rule pins it with a moving column
            std::set<Symbol> rows;
            for (const auto& r : rules_) {
                if (r.row.coeff == 0 && r.col.coeff != 0 && r.row.offset >= 1) {
                    rows.insert(static_cast<Symbol>(r.row.offset));
                }
            }
            e.symbols.assign(rows.begin(), rows.end());
            e.probable = true;
            e.description = "rows pinned by a rule with unbounded column expression";
            break;
        }
    }
    std::sort(e.symbols.begin(), e.symbols.end());
    return e;
}

std::vector<Root> TransitionMatrix::column_limit_points(std::uint32_t horizon) const {
    if (horizon < 2) throw PreconditionError("BadHorizon", "horizon must be >= 2");
    std::vector<Root> out;
    switch (family_) {
        case Family::Renewal:
        case Family::LazyRenewal:
        case Family::CE2:
            out = {Root::of({1})};
            break;
        case Family::PairRenewal:
        case Family::CE1:
        case Family::CE3:
            out = {Root::of({1}), Root::of({1, 2})};
            break;
        case Family::PrimeRenewal: {
            out.push_back(Root::of({1}));
            for (Symbol p = 2; p <= horizon; ++p) {
                if (is_prime(p)) out.push_back(Root::of({1, p}));
            }
            break;
        }
        case Family::NRenewal: {
            out.push_back(Root::of({1}));
            for (Symbol k = 2; k <= n_param_; ++k) out.push_back(Root::of({1, k}));
            break;
        }
        case Family::FullShift:
            out = {Root::all()};
            break;
        case Family::FiniteExplicit:
            break;  // the only column limit is the zero vector
        case Family::RuleList: {
            // Evidence-based detection: a truncated column vector must recur
            // for at least ceil(horizon/4) distinct columns in the upper half
            // of the scan window before it is declared a limit point.
            const std::uint32_t window = std::max<std::uint32_t>(2, horizon / 4);
            std::map<std::vector<int>, std::uint32_t> counts;
            for (Symbol j = horizon / 2 + 1; j <= horizon; ++j) {
                std::vector<int> col(window);
                for (Symbol i = 1; i <= window; ++i) col[i - 1] = entry_rule(i, j);
                ++counts[col];
            }
            const std::uint32_t needed = (horizon + 3) / 4;
            bool any = false;
            for (const auto& [col, c] : counts) {
                if (c < needed) continue;
                any = true;
                std::vector<Symbol> syms;
                for (Symbol i = 1; i <= window; ++i) {
                    if (col[i - 1]) syms.push_back(i);
                }
                if (!syms.empty()) out.push_back(Root::of(syms));
            }
            if (!any) {
                throw PreconditionError("HorizonTooSmall",
                                        "no column pattern stabilizes within horizon " + std::to_string(horizon));
            }
            break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool TransitionMatrix::is_irreducible_restricted(const std::vector<Symbol>& alphabet) const {
    if (alphabet.empty()) throw PreconditionError("BadAlphabet", "alphabet must be nonempty");
    const std::size_t n = alphabet.size();
    std::vector<std::vector<int>> adj(n), radj(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            if (entry_rule(alphabet[u], alphabet[v])) {
                adj[u].push_back(static_cast<int>(v));
                radj[v].push_back(static_cast<int>(u));
            }
        }
    }
    if (n == 1) return !adj[0].empty();  // a lone vertex needs its self-loop
    auto reach = [n](const std::vector<std::vector<int>>& g) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : g[u]) {
                if (!seen[v]) seen[v] = 1, stack.push_back(v);
            }
        }
        return std::count(seen.begin(), seen.end(), 1) == static_cast<long>(n);
    };
    return reach(adj) && reach(radj);
}

ClassReport TransitionMatrix::classify(std::uint32_t horizon) const {
    if (horizon < 2) horizon = 2;
    ClassReport rep;
    rep.horizon = horizon;
    auto note = [&](const std::string& s) { rep.evidence.push_back(s); };

    // column-finiteness
    if (column_finite_) {
        rep.column_finite = *column_finite_ ? Fact::Yes : Fact::No;
        note(std::string("column_finite: declared ") + (*column_finite_ ? "yes" : "no"));
    }

    // compactness
    if (compact_) {
        rep.compact_x_a = *compact_ ? Fact::Yes : Fact::No;
        note(std::string("compact_x_a: declared ") + (*compact_ ? "yes" : "no") +
             (*compact_ ? "" : " (zero vector is a column limit)"));
    } else {
        // A fixed row meeting every column rules the zero vector out as a
        // column limit, which is exactly compactness of X_A.
        bool full_row = false;
        Symbol full_row_index = 0;
        for (const auto& r : rules_) {
            if (r.row.coeff == 0 && r.row.offset >= 1 && r.col.coeff == 1 && r.col.offset >= 0) {
                full_row = true;
                full_row_index = static_cast<Symbol>(r.row.offset);
            }
        }
        if (full_row) {
            rep.compact_x_a = Fact::Yes;
            note("compact_x_a: yes, row " + std::to_string(full_row_index) + " meets every column");
        } else {
            // zero-column-limit test on truncated columns
            const std::uint32_t window = std::max<std::uint32_t>(2, horizon / 4);
            std::uint32_t zeros = 0;
            for (Symbol j = horizon / 2 + 1; j <= horizon; ++j) {
                bool all_zero = true;
                for (Symbol i = 1; i <= window && all_zero; ++i) {
                    if (entry_rule(i, j)) all_zero = false;
                }
                if (all_zero) ++zeros;
            }
            if (zeros >= (horizon + 3) / 4) {
                rep.compact_x_a = Fact::No;
                note("compact_x_a: no, " + std::to_string(zeros) + " near-zero columns in window");
            } else {
                rep.compact_x_a = Fact::Undecided;
                note("compact_x_a: undecided at horizon " + std::to_string(horizon));
            }
        }
    }

    // single empty-word class
    if (rep.column_finite == Fact::No) {
        rep.single_empty_word = Fact::No;
        note("single_empty_word: no (column-finite fails)");
    } else if (rep.compact_x_a == Fact::No) {
        rep.single_empty_word = Fact::No;
        note("single_empty_word: no (X_A not compact)");
    } else if (rep.column_finite == Fact::Yes && rep.compact_x_a == Fact::Yes) {
        std::size_t limits = 0;
        bool counted = true;
        if (family_ == Family::PrimeRenewal) {
            counted = true;
            limits = 2;  // enough to rule the class out; E_A is infinite
            note("single_empty_word: E_A infinite (one empty word per prime)");
        } else {
            try {
                limits = column_limit_points(horizon).size();
            } catch (const PreconditionError&) {
                counted = false;
            }
        }
        if (!counted) {
            rep.single_empty_word = Fact::Undecided;
        } else {
            rep.single_empty_word = limits == 1 ? Fact::Yes : Fact::No;
            note("single_empty_word: " + std::to_string(limits) + " column limit point(s)");
        }
    }

    // periodic renewal class
    auto reject = [&](const std::string& why) {
        rep.periodic_renewal = Fact::No;
        note("periodic_renewal: no (" + why + ")");
    };
    if (rep.compact_x_a != Fact::Yes) {
        reject("compactness fails or undecided");
    } else {
        bool subdiag = true;
        for (Symbol i = 1; i < horizon && subdiag; ++i) {
            if (!entry_rule(i + 1, i)) subdiag = false;
        }
        if (!subdiag) {
            reject("A(i+1,i) = 1 fails within horizon");
        } else {
            EmitterSet em = infinite_emitters(horizon);
            if (!em.finite) {
                reject("infinite-emitter set is not finite");
            } else if (block_) {
                const PeriodicBlock& b = *block_;
                bool ok = true;
                std::string why;
                // columns of M pairwise distinct
                for (std::uint32_t c1 = 0; c1 < b.period && ok; ++c1) {
                    for (std::uint32_t c2 = c1 + 1; c2 < b.period && ok; ++c2) {
                        bool same = true;
                        for (std::uint32_t k = 0; k < b.block.size(); ++k) {
                            if (b.block[k][c1] != b.block[k][c2]) same = false;
                        }
                        if (same) ok = false, why = "M has equal columns";
                    }
                }
                // block repetition up to horizon
                for (Symbol g = b.start_column; g <= horizon && ok; ++g) {
                    const std::uint32_t p = (g - b.start_column) % b.period;
                    for (Symbol k = 1; k <= b.last_infinite_emitter && ok; ++k) {
                        if (entry_rule(k, g) != b.block[k - 1][p]) {
                            ok = false;
                            why = "declared block mismatch at column " + std::to_string(g);
                        }
                    }
                }
                // rows beyond n_e carry only the subdiagonal
                for (Symbol i = b.last_infinite_emitter + 1; i <= horizon && ok; ++i) {
                    for (Symbol k = 1; k <= horizon && ok; ++k) {
                        if (k != i - 1 && entry_rule(i, k)) {
                            ok = false;
                            why = "extra entry A(" + std::to_string(i) + "," + std::to_string(k) + ")";
                        }
                    }
                }
                if (ok) {
                    rep.periodic_renewal = Fact::Yes;
                    note("periodic_renewal: declared block verified to horizon " + std::to_string(horizon));
                } else {
                    reject(why);
                }
            } else {
                // no declared block: check the defining conditions directly
                const Symbol ne = em.symbols.empty() ? 0 : em.symbols.back();
                bool clean_tail = true;
                for (Symbol i = ne + 1; i <= horizon && clean_tail; ++i) {
                    for (Symbol k = 1; k <= horizon && clean_tail; ++k) {
                        if (k != i - 1 && entry_rule(i, k)) clean_tail = false;
                    }
                }
                if (!clean_tail) {
                    reject("rows beyond the emitters have off-subdiagonal entries");
                } else if (ne == 0) {
                    reject("no infinite emitters detected");
                } else {
                    // detect (I, m, M) from the first ne rows
                    bool found = false;
                    for (std::uint32_t m = 1; m <= ne && !found; ++m) {
                        const Symbol start = ne + 1;
                        bool periodic = true;
                        for (Symbol g = start; g + m <= horizon && periodic; ++g) {
                            for (Symbol k = 1; k <= ne && periodic; ++k) {
                                if (entry_rule(k, g) != entry_rule(k, g + m)) periodic = false;
                            }
                        }
                        if (!periodic) continue;
                        bool distinct = true;
                        for (std::uint32_t c1 = 0; c1 < m && distinct; ++c1) {
                            for (std::uint32_t c2 = c1 + 1; c2 < m && distinct; ++c2) {
                                bool same = true;
                                for (Symbol k = 1; k <= ne; ++k) {
                                    if (entry_rule(k, start + c1) != entry_rule(k, start + c2)) same = false;
                                }
                                if (same) distinct = false;
                            }
                        }
                        if (distinct) found = true;
                    }
                    if (found) {
                        rep.periodic_renewal = Fact::Yes;
                        note("periodic_renewal: block detected and verified to horizon " + std::to_string(horizon));
                    } else {
                        reject("no periodic block with distinct columns found");
                    }
                }
            }
        }
    }
    return rep;
}

bool is_admissible(const TransitionMatrix& a, const Word& w) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (!a.entry(w[i], w[i + 1])) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// DSL

namespace {

LinearExpr parse_affine(const std::string& text, int line, int col0) {
    LinearExpr e{0, 0};
    std::size_t i = 0;
    auto fail = [&](const std::string& why) {
        throw ParseError(why, line, col0 + static_cast<int>(i));
    };
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    int sign = 1;
    bool first = true;
    skip();
    while (i < text.size()) {
        if (!first) {
            if (text[i] == '+') sign = 1, ++i;
            else if (text[i] == '-') sign = -1, ++i;
            else fail("expected '+' or '-'");
            skip();
        } else if (text[i] == '-') {
            sign = -1, ++i;
            skip();
        }
        first = false;
        std::int64_t value = 1;
        bool have_number = false;
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            value = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                value = value * 10 + (text[i] - '0');
                ++i;
            }
            have_number = true;
        }
        skip();
        if (i < text.size() && text[i] == '*') {
            ++i;
            skip();
        }
        if (i < text.size() && text[i] == 'n') {
            ++i;
            e.coeff += sign * value;
        } else if (have_number) {
            e.offset += sign * value;
        } else {
            fail("expected a number or 'n'");
        }
        sign = 1;
        skip();
    }
    return e;
}

std::string affine_str(const LinearExpr& e) {
    std::string s;
    if (e.coeff != 0) {
        if (e.coeff == 1) s = "n";
        else if (e.coeff == -1) s = "-n";
        else s = std::to_string(e.coeff) + "n";
    }
    if (e.offset != 0 || e.coeff == 0) {
        if (!s.empty() && e.offset > 0) s += "+";
        s += std::to_string(e.offset);
    }
    return s;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

TransitionMatrix TransitionMatrix::parse(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    std::string head;
    while (std::getline(is, line)) {
        ++lineno;
        head = trim(line);
        if (!head.empty()) break;
    }
    if (head.empty()) throw ParseError("empty matrix spec", lineno, 1);

    if (head.rfind("builtin:", 0) == 0) {
        std::string name = trim(head.substr(8));
        if (name == "renewal") return renewal();
        if (name == "lazy-renewal") return lazy_renewal();
        if (name == "pair-renewal") return pair_renewal();
        if (name == "prime-renewal") return prime_renewal();
        if (name == "full") return full_shift();
        if (name == "ce1") return ce1();
        if (name == "ce2") return ce2();
        if (name == "ce3") return ce3();
        if (name.rfind("n-renewal(", 0) == 0 && name.back() == ')') {
            const std::string num = name.substr(10, name.size() - 11);
            try {
                return n_renewal(static_cast<std::uint32_t>(std::stoul(num)));
            } catch (const std::exception&) {
                throw ParseError("bad n-renewal parameter '" + num + "'", lineno, 9);
            }
        }
        throw ParseError("unknown builtin '" + name + "'", lineno, 9);
    }

    if (head.rfind("finite:", 0) == 0) {
        std::vector<std::vector<int>> rows;
        std::string rest = trim(head.substr(7));
        auto add_row = [&](const std::string& digits, int ln) {
            std::vector<int> row;
            for (std::size_t c = 0; c < digits.size(); ++c) {
                if (digits[c] == '0') row.push_back(0);
                else if (digits[c] == '1') row.push_back(1);
                else if (!std::isspace(static_cast<unsigned char>(digits[c])))
                    throw ParseError("expected 0/1 digits", ln, static_cast<int>(c) + 1);
            }
            if (!row.empty()) rows.push_back(std::move(row));
        };
        if (!rest.empty()) add_row(rest, lineno);
        while (std::getline(is, line)) {
            ++lineno;
            add_row(trim(line), lineno);
        }
        if (rows.empty()) throw ParseError("finite matrix with no rows", lineno, 1);
        return finite_explicit(std::move(rows));
    }

    if (head.rfind("rules:", 0) == 0) {
        std::vector<EntryRule> rules;
        auto add_rule = [&](const std::string& spec, int ln) {
            std::string s = trim(spec);
            if (s.empty()) return;
            if (s.rfind("A(", 0) != 0) throw ParseError("rule must start with 'A('", ln, 1);
            const std::size_t comma = s.find(',');
            const std::size_t close = s.find(')', comma == std::string::npos ? 0 : comma);
            if (comma == std::string::npos || close == std::string::npos)
                throw ParseError("rule must look like A(expr, expr) = 1", ln, 1);
            const std::string tail = trim(s.substr(close + 1));
            if (tail != "= 1" && tail != "=1")
                throw ParseError("rules can only set entries to 1", ln, static_cast<int>(close) + 2);
            EntryRule r;
            r.row = parse_affine(s.substr(2, comma - 2), ln, 3);
            r.col = parse_affine(s.substr(comma + 1, close - comma - 1), ln, static_cast<int>(comma) + 2);
            rules.push_back(r);
        };
        add_rule(head.substr(6), lineno);
        while (std::getline(is, line)) {
            ++lineno;
            add_rule(line, lineno);
        }
        if (rules.empty()) throw ParseError("rule list with no rules", lineno, 1);
        return rule_list(std::move(rules));
    }

    throw ParseError("expected 'builtin:', 'finite:' or 'rules:'", lineno, 1);
}

std::string TransitionMatrix::print() const {
    switch (family_) {
        case Family::Renewal: return "builtin: renewal";
        case Family::LazyRenewal: return "builtin: lazy-renewal";
        case Family::PairRenewal: return "builtin: pair-renewal";
        case Family::PrimeRenewal: return "builtin: prime-renewal";
        case Family::NRenewal: return "builtin: n-renewal(" + std::to_string(n_param_) + ")";
        case Family::FullShift: return "builtin: full";
        case Family::CE1: return "builtin: ce1";
        case Family::CE2: return "builtin: ce2";
        case Family::CE3: return "builtin: ce3";
        case Family::FiniteExplicit: {
            std::string s = "finite:";
            for (const auto& row : rows_) {
                s += "\n";
                for (int v : row) s += v ? '1' : '0';
            }
            return s;
        }
        case Family::RuleList: {
            std::string s = "rules:";
            for (const auto& r : rules_) {
                s += "\nA(" + affine_str(r.row) + ", " + affine_str(r.col) + ") = 1";
            }
            return s;
        }
    }
    return "";
}

}  // namespace gcms
