#include "gcms/potential.hpp"

#include <algorithm>
#include <cmath>

#include "gcms/errors.hpp"

namespace gcms {

Potential Potential::constant(double c) {
    Potential p;
    p.kind_ = Kind::Constant;
    p.constant_ = c;
    p.inf_ = p.sup_ = c;
    return p;
}

Potential Potential::first_letter(std::map<Symbol, double> table, double fallback) {
    Potential p;
    p.kind_ = Kind::FirstLetter;
    p.table_ = std::move(table);
    p.fallback_ = fallback;
    p.inf_ = fallback;
    p.sup_ = fallback;
    for (const auto& [s, v] : p.table_) {
        p.inf_ = std::min(p.inf_, v);
        p.sup_ = std::max(p.sup_, v);
    }
    return p;
}

Potential Potential::log_ratio() {
    Potential p;
    p.kind_ = Kind::LogRatio;
    p.inf_ = std::log(0.5);  // attained at the letter 1
    p.sup_ = 0.0;            // supremum as the letter grows
    return p;
}

double Potential::eval_letter(Symbol first) const {
    switch (kind_) {
        case Kind::Constant:
            return constant_;
        case Kind::FirstLetter: {
            auto it = table_.find(first);
            return it == table_.end() ? fallback_ : it->second;
        }
        case Kind::LogRatio:
            return std::log(static_cast<double>(first)) - std::log(static_cast<double>(first) + 1.0);
    }
    return 0.0;
}

double Potential::eval(const Configuration& xi) const {
    const Word prefix = xi.stem_prefix(1);
    if (prefix.empty()) throw PreconditionError("EmptyStem", "potential needs a nonempty stem");
    return eval_letter(prefix[0]);
}

std::string Potential::str() const {
    switch (kind_) {
        case Kind::Constant: return "const:" + std::to_string(constant_);
        case Kind::FirstLetter: return "first(" + std::to_string(table_.size()) + " letters)";
        case Kind::LogRatio: return "logratio";
    }
    return "";
}

double birkhoff_sum(const Potential& f, const Configuration& xi, std::uint32_t n) {
    const Word prefix = xi.stem_prefix(n);
    if (prefix.size() < n)
        throw PreconditionError("StemTooShort", "Birkhoff sum of length " + std::to_string(n) +
                                                    " needs that many stem letters");
    double s = 0.0;
    for (std::uint32_t i = 0; i < n; ++i) s += f.eval_letter(prefix[i]);
    return s;
}

}  // namespace gcms
