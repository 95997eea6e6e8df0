#pragma once

#include <cstdint>
#include <vector>

#include "gcms/conformal.hpp"
#include "gcms/word.hpp"

namespace gcms {

// mu_beta(C_alpha) for the renewal shift with F = 1: the closed form
// e^{-|alpha^|beta} on the completed word alpha^ (alpha extended by the forced
// descending chain so it ends in 1).
double mu_beta_on_cylinder(double beta, const Word& alpha);

// nu(C_alpha) = 2^{-|alpha^|}, the Sarig eigenmeasure values on cylinders.
double limit_measure_on_cylinder(const Word& alpha);

// Completion alpha -> alpha (k-1) (k-2) ... 1 when alpha ends in k > 1.
Word complete_renewal_word(const Word& alpha);

struct AtomMassRow {
    double beta = 0.0;
    double mass = 0.0;  // mu_beta({alpha xi^0})
};

// The single-atom masses along a beta sequence decreasing to log 2; the table
// reports whether the masses decrease to zero as the theory requires.
struct AtomMassTable {
    std::vector<AtomMassRow> rows;
    bool decreasing_to_zero = true;
};

AtomMassTable atom_mass_vanishes(const Word& alpha, const std::vector<double>& betas);

struct ConvergenceReport {
    std::vector<Word> cylinders;
    std::vector<double> betas;                          // strictly decreasing toward log 2
    std::vector<std::vector<CylinderInterval>> values;  // values[b][c] = mu_beta interval
    std::vector<std::vector<double>> closed_form;       // closed_form[b][c]
    std::vector<double> limit_values;                   // nu(C_alpha)
    std::vector<double> max_gap;                        // per beta
    bool gaps_monotone = true;
};

// Full weak-* convergence table on the positive-cylinder basis; the intervals
// come from the atomic measures of the conformal module.
ConvergenceReport converge_report(const std::vector<Word>& cylinders, const std::vector<double>& betas);

// All admissible renewal basis words (ending in 1) of the given lengths.
std::vector<Word> renewal_basis_words(const std::vector<std::uint32_t>& lengths);

}  // namespace gcms
