#include "gcms/configuration.hpp"

#include <algorithm>

#include "gcms/errors.hpp"

namespace gcms {

Symbol InfiniteStem::at(std::size_t i) const {
    if (i < head.size()) return head[i];
    const std::size_t k = i - head.size();
    if (kind == Kind::HeadThenConstant) return param;
    return param > k ? static_cast<Symbol>(param - k) : 1;
}

Word InfiniteStem::prefix(std::size_t len) const {
    Word w(len);
    for (std::size_t i = 0; i < len; ++i) w[i] = at(i);
    return w;
}

std::string InfiniteStem::preset_name() const {
    std::string h;
    for (Symbol s : head) h += std::to_string(s) + ".";
    if (kind == Kind::HeadThenDescending) return "desc(" + h + std::to_string(param) + ")";
    return "const(" + h + std::to_string(param) + ")";
}

InfiniteStem InfiniteStem::parse_preset(const std::string& name) {
    auto open = name.find('(');
    if (open == std::string::npos || name.back() != ')')
        throw PreconditionError("BadPreset", "unknown stem preset '" + name + "'");
    const std::string kind = name.substr(0, open);
    const std::string body = name.substr(open + 1, name.size() - open - 2);
    InfiniteStem s;
    if (kind == "desc") s.kind = Kind::HeadThenDescending;
    else if (kind == "const") s.kind = Kind::HeadThenConstant;
    else throw PreconditionError("BadPreset", "unknown stem preset '" + name + "'");
    std::vector<Symbol> parts;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        auto dot = body.find('.', pos);
        const std::string tok = body.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
        if (!tok.empty()) parts.push_back(static_cast<Symbol>(std::stoul(tok)));
        if (dot == std::string::npos) break;
        pos = dot + 1;
    }
    if (parts.empty()) throw PreconditionError("BadPreset", "empty stem preset");
    s.param = parts.back();
    parts.pop_back();
    s.head = parts;
    return s;
}

InfiniteStem descending_stem(Symbol start) { return InfiniteStem{InfiniteStem::Kind::HeadThenDescending, {}, start}; }

InfiniteStem constant_tail_stem(Symbol first, Symbol tail) {
    return InfiniteStem{InfiniteStem::Kind::HeadThenConstant, {first}, tail};
}

const Word& Configuration::finite_stem() const {
    if (!has_finite_stem()) throw PreconditionError("InfiniteStem", "configuration has an infinite stem");
    return std::get<Word>(stem_);
}

const InfiniteStem& Configuration::infinite_stem() const {
    if (has_finite_stem()) throw PreconditionError("FiniteStem", "configuration has a finite stem");
    return std::get<InfiniteStem>(stem_);
}

const Root& Configuration::root() const {
    if (!root_) throw PreconditionError("NoRoot", "infinite-stem configurations carry no root");
    return *root_;
}

Word Configuration::stem_prefix(std::size_t len) const {
    if (has_finite_stem()) {
        const Word& w = std::get<Word>(stem_);
        Word out(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(std::min(len, w.size())));
        return out;
    }
    return std::get<InfiniteStem>(stem_).prefix(len);
}

std::optional<std::size_t> Configuration::stem_length() const {
    if (has_finite_stem()) return std::get<Word>(stem_).size();
    return std::nullopt;
}

std::string Configuration::str() const {
    if (has_finite_stem()) return "(" + format_word(finite_stem()) + ", " + root().str() + ")";
    return "(" + infinite_stem().preset_name() + ")";
}

bool Configuration::operator<(const Configuration& o) const {
    if (has_finite_stem() != o.has_finite_stem()) return has_finite_stem();
    if (has_finite_stem()) {
        if (finite_stem() != o.finite_stem()) return finite_stem() < o.finite_stem();
        return root() < o.root();
    }
    return infinite_stem().preset_name() < o.infinite_stem().preset_name();
}

bool is_valid_configuration(const TransitionMatrix& a, const Configuration& xi, std::uint32_t horizon) {
    if (!xi.has_finite_stem()) {
        return is_admissible(a, xi.stem_prefix(horizon));
    }
    const Word& stem = xi.finite_stem();
    if (!is_admissible(a, stem)) return false;
    const auto limits = a.column_limit_points(horizon);
    if (std::find(limits.begin(), limits.end(), xi.root()) == limits.end()) return false;
    if (stem.empty()) return true;
    const Symbol last = stem.back();
    if (!xi.root().contains(last)) return false;
    const EmitterSet em = a.infinite_emitters(horizon);
    if (std::binary_search(em.symbols.begin(), em.symbols.end(), last)) return true;
    return !em.finite && em.symbols.empty();  // unknown emitter description: do not reject
}

int filled(const TransitionMatrix& a, const Configuration& xi, const GroupElement& g_in, std::uint32_t depth) {
    if (!g_in.is_reduced()) return 0;  // non-reduced elements index the empty cylinder
    const GroupElement g = g_in;
    if (g.alpha.size() + g.gamma.size() > depth)
        throw PreconditionError("DepthExceeded", "|alpha|+|gamma| exceeds depth " + std::to_string(depth));

    const bool finite = xi.has_finite_stem();
    if (!finite && g.alpha.size() >= depth)
        throw PreconditionError("DepthExceeded", "need more than depth stem letters");

    const Word stem = xi.stem_prefix(finite ? xi.finite_stem().size() : depth);
    if (!is_prefix(g.alpha, stem)) return 0;

    if (g.gamma.empty()) return 1;
    if (!is_admissible(a, g.gamma)) return 0;

    // Only the last letter of gamma survives reduction; R4 walks it against
    // the next stem letter, or against the root when the stem is exhausted.
    const Symbol j = g.gamma.back();
    if (g.alpha.size() < stem.size()) {
        return a.entry(j, stem[g.alpha.size()]);
    }
    if (!finite) throw PreconditionError("DepthExceeded", "stem prefix exhausted at depth");
    return xi.root().contains(j) ? 1 : 0;
}

InverseCylinderDecomposition decompose_inverse_cylinder(const TransitionMatrix& a, const Word& alpha, Symbol j,
                                                        std::uint32_t horizon) {
    if (!is_admissible(a, alpha)) throw PreconditionError("Inadmissible", "alpha must be admissible");
    if (!alpha.empty() && alpha.back() == j)
        throw PreconditionError("NotReduced", "j must differ from the last letter of alpha");

    InverseCylinderDecomposition out;
    // G(alpha, j): finite-stem configurations with stem alpha whose root holds j.
    const auto limits = a.column_limit_points(horizon);
    const EmitterSet em = a.infinite_emitters(horizon);
    const bool stem_ok = alpha.empty() ||
                         std::binary_search(em.symbols.begin(), em.symbols.end(), alpha.back());
    if (stem_ok) {
        for (const Root& r : limits) {
            if (!r.contains(j)) continue;
            if (!alpha.empty() && !r.contains(alpha.back())) continue;
            out.boundary.emplace_back(alpha, r);
        }
    }
    auto row = a.successors(j, horizon);
    out.children_complete = row.complete;
    for (Symbol k : row.symbols) {
        if (alpha.empty() || a.entry(alpha.back(), k)) {
            Word child = alpha;
            child.push_back(k);
            out.children.push_back(std::move(child));
        }
    }
    return out;
}

}  // namespace gcms
