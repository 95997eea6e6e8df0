#include "gcms/dynamics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "gcms/errors.hpp"

namespace gcms {

std::vector<Configuration> empty_words(const TransitionMatrix& a, std::uint32_t horizon) {
    std::vector<Configuration> out;
    for (const Root& r : a.column_limit_points(horizon)) {
        out.emplace_back(Word{}, r);
    }
    return out;
}

std::vector<Symbol> terminal_letters(const TransitionMatrix& a, const Root& root, std::uint32_t horizon) {
    if (root.is_all()) throw PreconditionError("UnsupportedRoot", "AllSymbols root is not enumerable");
    const EmitterSet em = a.infinite_emitters(horizon);
    std::vector<Symbol> out;
    for (Symbol t : root.symbols()) {
        if (std::binary_search(em.symbols.begin(), em.symbols.end(), t)) out.push_back(t);
    }
    return out;
}

namespace {

void check_root(const TransitionMatrix& a, const Root& root, std::uint32_t horizon) {
    const auto limits = a.column_limit_points(horizon);
    if (std::find(limits.begin(), limits.end(), root) == limits.end())
        throw PreconditionError("UnsupportedRoot", "root " + root.str() + " is not a column limit point");
}

// words of length n ending at `last`, extended backwards
void extend_backwards(const TransitionMatrix& a, Word& suffix, std::uint32_t remaining,
                      std::vector<Word>& out, std::size_t limit) {
    if (remaining == 0) {
        out.emplace_back(suffix.rbegin(), suffix.rend());
        if (out.size() > limit)
            throw PreconditionError("EnumerationTooLarge", "more than " + std::to_string(limit) + " stems");
        return;
    }
    for (Symbol i : a.predecessors(suffix.back()).symbols) {
        suffix.push_back(i);
        extend_backwards(a, suffix, remaining - 1, out, limit);
        suffix.pop_back();
    }
}

}  // namespace

std::vector<Configuration> enumerate_finite_words(const TransitionMatrix& a, const Root& root, std::uint32_t n,
                                                  std::uint32_t horizon) {
    check_root(a, root, horizon);
    if (n > 20) throw PreconditionError("EnumerationTooLarge", "stem length capped at 20");
    std::vector<Configuration> out;
    if (n == 0) {
        out.emplace_back(Word{}, root);
        return out;
    }
    std::vector<Word> stems;
    for (Symbol t : terminal_letters(a, root, horizon)) {
        Word suffix{t};
        extend_backwards(a, suffix, n - 1, stems, 1u << 22);
    }
    std::sort(stems.begin(), stems.end());
    out.reserve(stems.size());
    for (Word& w : stems) out.emplace_back(std::move(w), root);
    return out;
}

std::uint64_t count_stems(const TransitionMatrix& a, const Root& root, std::uint32_t n, std::uint32_t horizon) {
    check_root(a, root, horizon);
    if (n == 0) return 1;
    if (n > 24) throw PreconditionError("EnumerationTooLarge", "exact counting capped at n = 24");
    // paths(k, j): admissible words of length k ending in letter j
    std::map<std::pair<std::uint32_t, Symbol>, std::uint64_t> memo;
    auto paths = [&](auto&& self, std::uint32_t k, Symbol j) -> std::uint64_t {
        if (k == 1) return 1;
        const auto key = std::make_pair(k, j);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        std::uint64_t total = 0;
        for (Symbol i : a.predecessors(j).symbols) total += self(self, k - 1, i);
        memo[key] = total;
        return total;
    };
    std::uint64_t total = 0;
    for (Symbol t : terminal_letters(a, root, horizon)) total += paths(paths, n, t);
    return total;
}

Configuration shift(const Configuration& xi) {
    if (xi.has_finite_stem()) {
        const Word& stem = xi.finite_stem();
        if (stem.empty())
            throw PreconditionError("EmptyStem", "sigma is undefined on E_A; use extension_verdict");
        return Configuration(Word(stem.begin() + 1, stem.end()), xi.root());
    }
    InfiniteStem s = xi.infinite_stem();
    if (!s.head.empty()) {
        s.head.erase(s.head.begin());
    } else if (s.kind == InfiniteStem::Kind::HeadThenDescending && s.param > 1) {
        --s.param;
    }
    return Configuration(s);
}

// ---------------------------------------------------------------------------
// extension machinery

std::int64_t IndexExpr::eval(std::int64_t n) const {
    if (kind == Kind::Linear) return a * n + b;
    std::int64_t v = 1;
    for (std::int64_t i = 0; i < n; ++i) v *= a;
    return v + b;
}

std::string IndexExpr::str() const {
    if (kind == Kind::Geometric) {
        std::string s = std::to_string(a) + "^n";
        if (b > 0) s += "+" + std::to_string(b);
        if (b < 0) s += std::to_string(b);
        return s;
    }
    std::string s;
    if (a == 1) s = "n";
    else if (a != 0) s = std::to_string(a) + "n";
    if (b > 0 && !s.empty()) s += "+" + std::to_string(b);
    else if (b != 0 || s.empty()) s += std::to_string(b);
    return s;
}

Configuration SequenceFamily::at(std::int64_t n) const {
    InfiniteStem s;
    if (head) {
        const std::int64_t h = head->eval(n);
        if (h < 1) throw PreconditionError("BadWitness", "head letter below 1");
        s.head.push_back(static_cast<Symbol>(h));
    }
    const std::int64_t f = first.eval(n);
    if (f < 1) throw PreconditionError("BadWitness", "first letter below 1");
    if (tail == Tail::DescendingToOne) {
        s.kind = InfiniteStem::Kind::HeadThenDescending;
        s.param = static_cast<Symbol>(f);
    } else {
        s.kind = InfiniteStem::Kind::HeadThenConstant;
        s.head.push_back(static_cast<Symbol>(f));
        s.param = tail_letter;
    }
    return Configuration(s);
}

std::string SequenceFamily::str() const {
    std::string s;
    if (head) s += "(" + head->str() + ") ";
    s += "(" + first.str() + ")";
    if (tail == Tail::DescendingToOne) s += " (" + first.str() + "-1) ... 1 1^inf";
    else s += " " + std::to_string(tail_letter) + "^inf";
    return s;
}

std::string ShiftLimit::str() const {
    switch (kind) {
        case Kind::EmptyWord: return "(e, " + root.str() + ")";
        case Kind::SigmaTail: return std::to_string(tail) + "^inf in Sigma_A";
        default: return "escape (columns vanish)";
    }
}

namespace {

std::vector<Symbol> truncated_column(const TransitionMatrix& a, std::uint64_t column, Symbol window) {
    std::vector<Symbol> rows;
    if (column > 0xffffffffull) throw PreconditionError("Overflow", "column index too large");
    for (Symbol i = 1; i <= window; ++i) {
        if (a.entry(i, static_cast<Symbol>(column))) rows.push_back(i);
    }
    return rows;
}

struct FamilyProbe {
    bool admissible = false;
    bool diverges = false;                  // first letters strictly increase
    std::optional<std::vector<Symbol>> limit_rows;  // stable truncated column of first letters
    ShiftLimit shift_limit;
    std::optional<int> alpha0_value;        // stable value of prod_F A(j, second letter)
};

// Evaluates one family at the sample points: stability of the truncated
// column of the first letters decides the E_A limit; the second letters
// decide where the shifted family goes.
FamilyProbe probe_family(const TransitionMatrix& a, const SequenceFamily& fam,
                         const std::vector<std::int64_t>& samples, Symbol window,
                         const std::vector<Symbol>* alpha0_f = nullptr) {
    FamilyProbe p;
    std::vector<std::vector<Symbol>> first_cols, second_cols;
    std::vector<std::int64_t> firsts;
    std::vector<int> alpha0_vals;
    std::optional<Symbol> constant_second;
    for (std::int64_t n : samples) {
        Configuration xi = fam.at(n);
        const Word prefix = xi.stem_prefix(4);
        if (!is_admissible(a, prefix)) return p;  // not admissible: family unusable
        firsts.push_back(prefix[0]);
        first_cols.push_back(truncated_column(a, prefix[0], window));
        second_cols.push_back(truncated_column(a, prefix[1], window));
        if (fam.tail == SequenceFamily::Tail::Constant && !fam.head) constant_second = prefix[1];
        if (alpha0_f) {
            int v = 1;
            for (Symbol j : *alpha0_f) v &= a.entry(j, prefix[1]);
            alpha0_vals.push_back(v);
        }
    }
    p.admissible = true;
    p.diverges = true;
    for (std::size_t i = 0; i + 1 < firsts.size(); ++i) {
        if (firsts[i + 1] <= firsts[i]) p.diverges = false;
    }
    const bool first_stable = std::all_of(first_cols.begin(), first_cols.end(),
                                          [&](const auto& c) { return c == first_cols[0]; });
    if (p.diverges && first_stable && !first_cols[0].empty()) p.limit_rows = first_cols[0];

    const bool second_stable = std::all_of(second_cols.begin(), second_cols.end(),
                                           [&](const auto& c) { return c == second_cols[0]; });
    if (constant_second) {
        p.shift_limit = ShiftLimit{ShiftLimit::Kind::SigmaTail, Root{}, *constant_second};
    } else if (second_stable && second_cols[0].empty()) {
        p.shift_limit = ShiftLimit{ShiftLimit::Kind::Escape, Root{}, 0};
    } else if (second_stable) {
        p.shift_limit = ShiftLimit{ShiftLimit::Kind::EmptyWord, Root::of(second_cols[0]), 0};
    } else {
        p.admissible = false;  // second letters unresolved at this horizon
    }
    if (alpha0_f && !alpha0_vals.empty() &&
        std::all_of(alpha0_vals.begin(), alpha0_vals.end(), [&](int v) { return v == alpha0_vals[0]; })) {
        p.alpha0_value = alpha0_vals[0];
    }
    return p;
}

std::vector<SequenceFamily> witness_templates(const TransitionMatrix& a, std::uint32_t horizon) {
    std::vector<SequenceFamily> fams;
    auto linear = [](std::int64_t s, std::int64_t off) {
        return IndexExpr{IndexExpr::Kind::Linear, s, off};
    };
    // Preset pairs first so the built-ins report the canonical witnesses.
    switch (a.family()) {
        case Family::FullShift:
            fams.push_back({std::nullopt, linear(1, 0), SequenceFamily::Tail::Constant, 1});
            fams.push_back({std::nullopt, linear(1, 0), SequenceFamily::Tail::Constant, 2});
            break;
        case Family::CE1:
            fams.push_back({std::nullopt, linear(3, -1), SequenceFamily::Tail::DescendingToOne, 1});
            fams.push_back({std::nullopt, linear(3, 1), SequenceFamily::Tail::DescendingToOne, 1});
            break;
        case Family::CE2:
            fams.push_back({std::nullopt, linear(2, 0), SequenceFamily::Tail::DescendingToOne, 1});
            fams.push_back({std::nullopt, linear(2, 2), SequenceFamily::Tail::DescendingToOne, 1});
            break;
        case Family::CE3:
            fams.push_back({IndexExpr{IndexExpr::Kind::Linear, 4, 0}, linear(2, 0),
                            SequenceFamily::Tail::DescendingToOne, 1});
            fams.push_back({std::nullopt, linear(2, 0), SequenceFamily::Tail::DescendingToOne, 1});
            break;
        case Family::PrimeRenewal:
            // The geometric families mirror the A(p, p^n) rule structure.
            fams.push_back({std::nullopt, IndexExpr{IndexExpr::Kind::Geometric, 2, 1},
                            SequenceFamily::Tail::DescendingToOne, 1});
            fams.push_back({std::nullopt, IndexExpr{IndexExpr::Kind::Geometric, 2, 3},
                            SequenceFamily::Tail::DescendingToOne, 1});
            break;
        default:
            break;
    }
    // Generic arithmetic templates.
    for (std::int64_t s = 1; s <= 4; ++s) {
        for (std::int64_t off : {0, 1, -1, 2, 3}) {
            if (s + off < 1) continue;
            fams.push_back({std::nullopt, linear(s, off), SequenceFamily::Tail::DescendingToOne, 1});
        }
    }
    for (Symbol c : {Symbol{1}, Symbol{2}}) {
        fams.push_back({std::nullopt, linear(1, 0), SequenceFamily::Tail::Constant, c});
        fams.push_back({std::nullopt, linear(2, 0), SequenceFamily::Tail::Constant, c});
    }
    (void)horizon;
    return fams;
}

std::vector<std::int64_t> sample_points(const SequenceFamily& fam, std::uint32_t horizon) {
    if (fam.first.kind == IndexExpr::Kind::Geometric ||
        (fam.head && fam.head->kind == IndexExpr::Kind::Geometric)) {
        return {20, 22, 25};  // keeps base^n within the symbol range
    }
    const std::int64_t h = std::max<std::int64_t>(horizon, 16);
    return {h, h + 3, 2 * h + 1};
}

}  // namespace

ExtensionVerdict extension_verdict(const TransitionMatrix& a, std::uint32_t horizon) {
    if (horizon < 2) horizon = 2;
    const ClassReport rep = a.classify(horizon);

    if (rep.single_empty_word == Fact::Yes) {
        const auto e = empty_words(a, horizon);
        Extendable ext;
        ext.empty_word_dynamics.emplace_back(e.front(), e.front());
        ext.certificate = "single empty-word class: sigma fixes " + e.front().str();
        return ext;
    }

    if (rep.periodic_renewal == Fact::Yes && a.declared_block()) {
        const PeriodicBlock& b = *a.declared_block();
        std::vector<Root> cycle;  // R_1, ..., R_m = columns of M
        for (std::uint32_t c = 0; c < b.period; ++c) {
            std::vector<Symbol> syms;
            for (Symbol k = 1; k <= b.last_infinite_emitter; ++k) {
                if (b.block[k - 1][c]) syms.push_back(k);
            }
            cycle.push_back(Root::of(syms));
        }
        Extendable ext;
        for (std::uint32_t p = 0; p < b.period; ++p) {
            // sigma((e, R_{p+1})) = (e, R_p); sigma((e, R_1)) = (e, R_m)
            const Root& from = cycle[p];
            const Root& to = cycle[(p + b.period - 1) % b.period];
            ext.empty_word_dynamics.emplace_back(Configuration(Word{}, from), Configuration(Word{}, to));
        }
        std::sort(ext.empty_word_dynamics.begin(), ext.empty_word_dynamics.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        ext.certificate = "periodic renewal class: sigma cycles E_A with period " + std::to_string(b.period);
        return ext;
    }

    // witness search
    const Symbol window = static_cast<Symbol>(std::max<std::uint32_t>(horizon, 8));
    const auto fams = witness_templates(a, horizon);
    std::vector<std::pair<SequenceFamily, FamilyProbe>> usable;
    for (const auto& fam : fams) {
        try {
            FamilyProbe p = probe_family(a, fam, sample_points(fam, horizon), window);
            if (p.admissible && p.limit_rows) usable.emplace_back(fam, p);
        } catch (const PreconditionError&) {
            continue;
        }
    }
    for (std::size_t i = 0; i < usable.size(); ++i) {
        for (std::size_t j = i; j < usable.size(); ++j) {
            const auto& [fa, pa] = usable[i];
            const auto& [fb, pb] = usable[j];
            if (*pa.limit_rows != *pb.limit_rows) continue;
            const bool distinct = !(pa.shift_limit == pb.shift_limit);
            const bool escapes = pa.shift_limit.kind == ShiftLimit::Kind::Escape ||
                                 pb.shift_limit.kind == ShiftLimit::Kind::Escape;
            if (i == j && !escapes) continue;
            if (!distinct && !escapes) continue;
            NotExtendable w;
            w.witness_a = fa;
            w.witness_b = fb;
            // a truncated column filling the whole window is the AllSymbols root
            w.common_limit = pa.limit_rows->size() == window ? Root::all() : Root::of(*pa.limit_rows);
            w.limit_a = pa.shift_limit;
            w.limit_b = pb.shift_limit;
            w.note = escapes && !distinct ? "shift images escape along the common-limit sequences"
                                          : "distinct shift limits over a common source limit";
            return w;
        }
    }
    return Undecided{horizon};
}

PassOrWitness alpha0_continuity_check(const TransitionMatrix& a, const std::vector<Symbol>& f,
                                      std::uint32_t horizon) {
    if (f.empty()) throw PreconditionError("EmptyF", "F must be nonempty");
    if (a.declared_column_finite() == std::optional<bool>(false))
        throw PreconditionError("NotColumnFinite", "alpha0 check requires a column-finite matrix");
    if (horizon < 2) horizon = 2;
    const Symbol window = static_cast<Symbol>(horizon);
    const auto fams = witness_templates(a, horizon);
    std::vector<std::pair<SequenceFamily, FamilyProbe>> usable;
    for (const auto& fam : fams) {
        try {
            FamilyProbe p = probe_family(a, fam, sample_points(fam, horizon), window, &f);
            if (p.admissible && p.limit_rows && p.alpha0_value) usable.emplace_back(fam, p);
        } catch (const PreconditionError&) {
            continue;
        }
    }
    for (std::size_t i = 0; i < usable.size(); ++i) {
        for (std::size_t j = i + 1; j < usable.size(); ++j) {
            const auto& [fa, pa] = usable[i];
            const auto& [fb, pb] = usable[j];
            if (*pa.limit_rows != *pb.limit_rows) continue;
            if (*pa.alpha0_value == *pb.alpha0_value) continue;
            ContinuityWitness w;
            w.family_a = fa;
            w.family_b = fb;
            w.common_limit = Root::of(*pa.limit_rows);
            w.value_a = *pa.alpha0_value;
            w.value_b = *pb.alpha0_value;
            return w;
        }
    }
    return std::monostate{};
}

}  // namespace gcms
