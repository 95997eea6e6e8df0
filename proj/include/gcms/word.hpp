#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gcms {

// Letters of the countable alphabet, 1-based. 0 is never a valid symbol.
using Symbol = std::uint32_t;

// A finite positive word. The empty vector is the empty word e.
using Word = std::vector<Symbol>;

// All prefixes of w including e, in increasing length order (|w|+1 entries).
std::vector<Word> subwords(const Word& w);

bool is_prefix(const Word& prefix, const Word& w);

// Space-separated positive integers; "e" for the empty word.
std::string format_word(const Word& w);
Word parse_word(const std::string& text);

// A reduced group element alpha * gamma^{-1}. Reduced means the last letters
// of alpha and gamma differ unless one of them is empty.
struct GroupElement {
    Word alpha;
    Word gamma;

    bool is_reduced() const {
        return alpha.empty() || gamma.empty() || alpha.back() != gamma.back();
    }
    bool is_identity() const { return alpha.empty() && gamma.empty(); }
    bool operator==(const GroupElement&) const = default;
};

// Cancels the common tail so the result indexes the same group element.
GroupElement reduce(const GroupElement& g);

// Canonical cylinder index: C_{alpha gamma^{-1}} = C_{alpha gamma_last^{-1}}.
// Identity on |gamma| <= 1.
GroupElement reduce_cylinder(const Word& alpha, const Word& gamma);

// "alpha / gamma" with "e" for empty parts; bare "alpha" when gamma is empty.
std::string format_group_element(const GroupElement& g);
GroupElement parse_group_element(const std::string& text);

}  // namespace gcms
