#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gcms/word.hpp"

namespace gcms {

// Root of a finite-stem configuration: a finite symbol set, or the marker for
// the full shift whose unique empty word is rooted at every symbol.
class Root {
public:
    Root() = default;

    static Root all() {
        Root r;
        r.all_ = true;
        return r;
    }
    static Root of(std::vector<Symbol> symbols);

    bool is_all() const { return all_; }
    const std::vector<Symbol>& symbols() const;
    bool contains(Symbol s) const;
    bool operator==(const Root&) const = default;
    bool operator<(const Root& o) const;
    std::string str() const;

private:
    bool all_ = false;
    std::vector<Symbol> symbols_;  // sorted, unique
};

enum class Family {
    Renewal,        // A(1,n) = A(n+1,n) = 1
    LazyRenewal,    // A(1,n) = A(n,n) = A(n+1,n) = 1
    PairRenewal,    // A(1,n) = A(2,2n) = A(n+1,n) = 1
    PrimeRenewal,   // A(1,n) = A(n+1,n) = A(p,p^n) = 1, p prime
    NRenewal,       // A(1,n) = A(n+1,n) = A(k,nN+k) = 1, 1 <= k <= N
    FullShift,      // A = 1
    CE1,            // renewal rows plus A(2,3n+1) = A(2,3n-1) = 1
    CE2,            // A(1,2n) = A(n+1,n) = 1 (non-compact)
    CE3,            // pair renewal plus A(4n,2n) = 1
    FiniteExplicit,
    RuleList,
};

// c*n + d evaluated over n >= 1; the rule DSL only needs affine expressions.
struct LinearExpr {
    std::int64_t coeff = 0;
    std::int64_t offset = 0;

    std::int64_t eval(std::int64_t n) const { return coeff * n + offset; }
    bool operator==(const LinearExpr&) const = default;
};

// One DSL line `A(expr_i, expr_j) = 1`, both expressions over the same n.
struct EntryRule {
    LinearExpr row;
    LinearExpr col;
    bool operator==(const EntryRule&) const = default;
};

// Declared eventually-periodic structure of the first n_e rows: for every
// column g = I + p + s*m, A(k,g) = M(k, (p mod m)+1) for 1 <= k <= n_e.
struct PeriodicBlock {
    std::vector<std::vector<int>> block;  // n_e rows, m columns, entries 0/1
    Symbol start_column = 1;              // I
    std::uint32_t period = 1;             // m
    Symbol last_infinite_emitter = 1;     // n_e
};

// Triple-valued answer for structure questions decided at a finite horizon.
enum class Fact { Yes, No, Undecided };
std::string to_string(Fact f);

struct ClassReport {
    std::uint32_t horizon = 0;
    Fact single_empty_word = Fact::Undecided;
    Fact periodic_renewal = Fact::Undecided;
    Fact column_finite = Fact::Undecided;
    Fact compact_x_a = Fact::Undecided;
    std::vector<std::string> evidence;
};

struct EmitterSet {
    std::vector<Symbol> symbols;  // emitters detected or declared, <= horizon
    bool finite = true;           // false: `symbols` lists members <= horizon only
    bool probable = false;        // true when inferred from a finite horizon
    std::string description;
};

// A countable 0/1 transition matrix given by finite rules. Values are
// immutable after construction and cheap to copy.
class TransitionMatrix {
public:
    static TransitionMatrix renewal();
    static TransitionMatrix lazy_renewal();
    static TransitionMatrix pair_renewal();
    static TransitionMatrix prime_renewal();
    static TransitionMatrix n_renewal(std::uint32_t n);
    static TransitionMatrix full_shift();
    static TransitionMatrix ce1();
    static TransitionMatrix ce2();
    static TransitionMatrix ce3();
    static TransitionMatrix finite_explicit(std::vector<std::vector<int>> rows);
    static TransitionMatrix rule_list(std::vector<EntryRule> rules);

    // Matrix DSL: `builtin: <name>`, `finite:` + digit rows, or `rules:` +
    // `A(expr_i, expr_j) = 1` lines. parse(print()) is the identity.
    static TransitionMatrix parse(const std::string& text);
    std::string print() const;

    Family family() const { return family_; }
    std::uint32_t n_param() const { return n_param_; }

    int entry(Symbol i, Symbol j) const;

    // Rows i with entry(i,j) = 1. `complete` is false when the set was cut at
    // `cap` (a rule pins the column, so the whole column is ones).
    struct SymbolSet {
        std::vector<Symbol> symbols;
        bool complete = true;
    };
    SymbolSet predecessors(Symbol j, Symbol cap = 0) const;
    SymbolSet successors(Symbol i, Symbol cap) const;

    std::optional<bool> declared_column_finite() const { return column_finite_; }
    std::optional<bool> declared_compact() const { return compact_; }
    const std::optional<PeriodicBlock>& declared_block() const { return block_; }

    // Per-step preimage multiplicity inside one empty-word family:
    // {lower, upper}. Declared for the built-in renewal-type families.
    std::optional<std::pair<int, int>> branching_bounds() const { return branching_; }

    EmitterSet infinite_emitters(std::uint32_t horizon) const;
    std::vector<Root> column_limit_points(std::uint32_t horizon) const;
    bool is_irreducible_restricted(const std::vector<Symbol>& alphabet) const;
    ClassReport classify(std::uint32_t horizon) const;

private:
    TransitionMatrix() = default;

    int entry_rule(Symbol i, Symbol j) const;

    Family family_ = Family::RuleList;
    std::uint32_t n_param_ = 0;
    std::vector<std::vector<int>> rows_;
    std::vector<EntryRule> rules_;
    std::optional<bool> column_finite_;
    std::optional<bool> compact_;
    std::optional<PeriodicBlock> block_;
    std::optional<std::pair<int, int>> branching_;
};

bool is_admissible(const TransitionMatrix& a, const Word& w);

// Largest prime p with p^k = j for some k >= 1, if j is a prime power.
std::optional<Symbol> prime_power_base(Symbol j);
bool is_prime(Symbol n);

}  // namespace gcms
