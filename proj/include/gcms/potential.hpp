#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "gcms/configuration.hpp"
#include "gcms/word.hpp"

namespace gcms {

// A potential evaluated on configurations with nonempty stem. The built-in
// variants depend on the first stem letter only, which matches how the
// renewal-type measures use them.
class Potential {
public:
    static Potential constant(double c);
    // g given by a finite table plus a default for all other letters.
    static Potential first_letter(std::map<Symbol, double> table, double fallback);
    // F(x) = log(x_0) - log(x_0 + 1)
    static Potential log_ratio();

    double eval_letter(Symbol first) const;
    double eval(const Configuration& xi) const;

    double inf() const { return inf_; }
    double sup() const { return sup_; }
    bool is_constant() const { return kind_ == Kind::Constant; }
    double constant_value() const { return constant_; }
    std::string str() const;

private:
    enum class Kind { Constant, FirstLetter, LogRatio };
    Kind kind_ = Kind::Constant;
    double constant_ = 0.0;
    std::map<Symbol, double> table_;
    double fallback_ = 0.0;
    double inf_ = 0.0;
    double sup_ = 0.0;
};

// Birkhoff sum of F along the first n shifts of xi; needs stem length >= n.
double birkhoff_sum(const Potential& f, const Configuration& xi, std::uint32_t n);

}  // namespace gcms
