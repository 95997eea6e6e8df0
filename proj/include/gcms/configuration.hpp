#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gcms/transition_matrix.hpp"
#include "gcms/word.hpp"

namespace gcms {

// Infinite stem given by a prefix generator. The presets cover the witness
// sequences used by the extension counterexamples.
struct InfiniteStem {
    enum class Kind {
        HeadThenDescending,  // head, then start, start-1, ..., 1, 1, 1, ...
        HeadThenConstant,    // head, then tail, tail, tail, ...
    };

    Kind kind = Kind::HeadThenDescending;
    Word head;
    Symbol param = 1;  // `start` or `tail` depending on kind

    Symbol at(std::size_t i) const;
    Word prefix(std::size_t len) const;
    std::string preset_name() const;
    static InfiniteStem parse_preset(const std::string& name);

    bool operator==(const InfiniteStem&) const = default;
};

InfiniteStem descending_stem(Symbol start);                 // start (start-1) ... 1 1 ...
InfiniteStem constant_tail_stem(Symbol first, Symbol tail); // first tail tail ...

// A computable point of X_A: a finite stem with its root, or an infinite stem
// (a point of Sigma_A). Immutable value type.
class Configuration {
public:
    Configuration(Word stem, Root root) : stem_(std::move(stem)), root_(std::move(root)) {}
    explicit Configuration(InfiniteStem stem) : stem_(std::move(stem)) {}

    bool has_finite_stem() const { return std::holds_alternative<Word>(stem_); }
    const Word& finite_stem() const;
    const InfiniteStem& infinite_stem() const;
    const Root& root() const;

    // First `len` stem letters (all of them for a shorter finite stem).
    Word stem_prefix(std::size_t len) const;
    std::optional<std::size_t> stem_length() const;  // nullopt for infinite

    std::string str() const;

    bool operator==(const Configuration&) const = default;
    bool operator<(const Configuration& o) const;

private:
    std::variant<Word, InfiniteStem> stem_;
    std::optional<Root> root_;
};

// Validates the stem/root pair against the matrix: stem admissibility, last
// letter an infinite emitter contained in the root, root a column limit point.
bool is_valid_configuration(const TransitionMatrix& a, const Configuration& xi, std::uint32_t horizon);

// The R1-R4 filled predicate: is the reduced element g filled in xi?
// `depth` bounds how far an infinite stem is materialized.
int filled(const TransitionMatrix& a, const Configuration& xi, const GroupElement& g, std::uint32_t depth = 64);

// C_{alpha j^{-1}} = G(alpha, j) disjoint-union of the children C_{alpha k}.
struct InverseCylinderDecomposition {
    std::vector<Configuration> boundary;  // G(alpha, j): finite-stem points with stem alpha, j in root
    std::vector<Word> children;           // alpha k, for A(j,k) = 1, k <= horizon
    bool children_complete = true;        // false when row j is infinite beyond horizon
};

InverseCylinderDecomposition decompose_inverse_cylinder(const TransitionMatrix& a, const Word& alpha, Symbol j,
                                                        std::uint32_t horizon);

}  // namespace gcms
