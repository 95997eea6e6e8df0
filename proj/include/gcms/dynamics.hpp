#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gcms/configuration.hpp"
#include "gcms/transition_matrix.hpp"

namespace gcms {

// One configuration (e, R) per nonzero column limit point.
std::vector<Configuration> empty_words(const TransitionMatrix& a, std::uint32_t horizon);

// Stem letters that may end a finite stem carrying `root`.
std::vector<Symbol> terminal_letters(const TransitionMatrix& a, const Root& root, std::uint32_t horizon);

// All configurations with stem length n in the family of `root`, i.e. the
// n-fold shift preimages of (e, root). Lexicographic by stem.
std::vector<Configuration> enumerate_finite_words(const TransitionMatrix& a, const Root& root, std::uint32_t n,
                                                  std::uint32_t horizon = 64);

// Exact stem count by dynamic programming over predecessor sets.
std::uint64_t count_stems(const TransitionMatrix& a, const Root& root, std::uint32_t n,
                          std::uint32_t horizon = 64);

// Drops the first stem letter; the root is unchanged. Errors on empty stems.
Configuration shift(const Configuration& xi);

// ---------------------------------------------------------------------------
// continuous extension of the shift to X_A

// First stem letter of the n-th member of a witness family, as a function of
// n: a*n + b, or base^n + b for the geometric families.
struct IndexExpr {
    enum class Kind { Linear, Geometric };
    Kind kind = Kind::Linear;
    std::int64_t a = 1;  // slope or base
    std::int64_t b = 0;  // offset

    std::int64_t eval(std::int64_t n) const;
    std::string str() const;
};

// A one-parameter family of infinite-stem configurations used as extension
// witnesses: optional head letter, first letter, then a descending chain to 1
// or a constant tail.
struct SequenceFamily {
    std::optional<IndexExpr> head;
    IndexExpr first;
    enum class Tail { DescendingToOne, Constant } tail = Tail::DescendingToOne;
    Symbol tail_letter = 1;

    Configuration at(std::int64_t n) const;
    std::string str() const;
};

// Where the shifted family ends up: an empty word, a point of Sigma_A with
// the given constant tail, or escape (truncated columns vanish; the images
// leave every compact set).
struct ShiftLimit {
    enum class Kind { EmptyWord, SigmaTail, Escape } kind = Kind::Escape;
    Root root;           // EmptyWord
    Symbol tail = 0;     // SigmaTail
    std::string str() const;
    bool operator==(const ShiftLimit&) const = default;
};

struct Extendable {
    // sigma restricted to E_A, one pair (source, image) per empty word.
    std::vector<std::pair<Configuration, Configuration>> empty_word_dynamics;
    std::string certificate;
};

struct NotExtendable {
    SequenceFamily witness_a;
    SequenceFamily witness_b;
    Root common_limit;
    ShiftLimit limit_a;
    ShiftLimit limit_b;
    std::string note;
};

struct Undecided {
    std::uint32_t horizon = 0;
};

using ExtensionVerdict = std::variant<Extendable, NotExtendable, Undecided>;

ExtensionVerdict extension_verdict(const TransitionMatrix& a, std::uint32_t horizon);

// ---------------------------------------------------------------------------
// continuity of alpha_0(e_{e,F}) along witness sequences

struct ContinuityWitness {
    SequenceFamily family_a;
    SequenceFamily family_b;
    Root common_limit;
    int value_a = 0;
    int value_b = 0;
};

// Pass, or a witness pair with distinct limit values of alpha0_hat(e_{e,F}).
using PassOrWitness = std::variant<std::monostate, ContinuityWitness>;

PassOrWitness alpha0_continuity_check(const TransitionMatrix& a, const std::vector<Symbol>& f,
                                      std::uint32_t horizon);

}  // namespace gcms
