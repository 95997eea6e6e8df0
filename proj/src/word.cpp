#include "gcms/word.hpp"

#include <sstream>

#include "gcms/errors.hpp"

namespace gcms {

std::vector<Word> subwords(const Word& w) {
    std::vector<Word> out;
    out.reserve(w.size() + 1);
    for (std::size_t len = 0; len <= w.size(); ++len) {
        out.emplace_back(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(len));
    }
    return out;
}

bool is_prefix(const Word& prefix, const Word& w) {
    if (prefix.size() > w.size()) return false;
    return std::equal(prefix.begin(), prefix.end(), w.begin());
}

std::string format_word(const Word& w) {
    if (w.empty()) return "e";
    std::ostringstream os;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) os << ' ';
        os << w[i];
    }
    return os.str();
}

Word parse_word(const std::string& text) {
    Word w;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        if (tok == "e") continue;
        long v = 0;
        try {
            v = std::stol(tok);
        } catch (const std::exception&) {
            throw PreconditionError("BadWord", "not a symbol: '" + tok + "'");
        }
        if (v < 1) throw PreconditionError("BadWord", "symbols are positive: " + tok);
        w.push_back(static_cast<Symbol>(v));
    }
    return w;
}

GroupElement reduce(const GroupElement& g) {
    GroupElement r = g;
    while (!r.alpha.empty() && !r.gamma.empty() && r.alpha.back() == r.gamma.back()) {
        r.alpha.pop_back();
        r.gamma.pop_back();
    }
    return r;
}

GroupElement reduce_cylinder(const Word& alpha, const Word& gamma) {
    if (gamma.size() <= 1) return GroupElement{alpha, gamma};
    return GroupElement{alpha, Word{gamma.back()}};
}

std::string format_group_element(const GroupElement& g) {
    if (g.gamma.empty()) return format_word(g.alpha);
    return format_word(g.alpha) + " / " + format_word(g.gamma);
}

GroupElement parse_group_element(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return GroupElement{parse_word(text), {}};
    return GroupElement{parse_word(text.substr(0, slash)), parse_word(text.substr(slash + 1))};
}

}  // namespace gcms
