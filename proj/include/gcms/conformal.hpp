#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gcms/configuration.hpp"
#include "gcms/potential.hpp"
#include "gcms/transition_matrix.hpp"

namespace gcms {

// Atomic measure supported on finite-stem configurations, truncated at a stem
// length with a certified bound on the mass beyond the truncation.
struct AtomicMeasure {
    std::map<Configuration, double> atoms;
    double tail_bound = 0.0;
    std::optional<Root> root_tag;  // empty-word family; nullopt means mixed
    double c_empty = 0.0;
    std::uint32_t truncation_length = 0;
    std::string tail_certificate;

    double atom_sum() const;
};

// Pre-normalization coefficient e^{-beta S_{|stem|}F(xi)}, so c at the empty
// word is 1.
double coefficient(const Potential& f, double beta, const Configuration& xi);

// Closed-form renewal coefficient e^{-n beta} (e^beta - 2) / (e^beta - 1).
double renewal_closed_form(double beta, std::uint32_t n);

struct Divergent {
    std::string threshold;
};
struct UndeterminedSeries {
    std::vector<double> partial_sums;
    std::string note;
};
using NormalizeResult = std::variant<AtomicMeasure, Divergent, UndeterminedSeries>;

// Builds the conformal probability measure of the family of `root`, truncated
// so the certified tail is <= tol where the atom budget allows.
NormalizeResult normalize(const TransitionMatrix& a, const Potential& f, double beta, const Root& root,
                          double tol, std::size_t max_atoms = (1u << 18), std::uint32_t horizon = 64);

struct CylinderInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool brackets(double v) const { return lo <= v && v <= hi; }
};

// [atom mass of C_alpha, same + tail_bound].
CylinderInterval measure_of_cylinder(const AtomicMeasure& mu, const Word& alpha);

struct CheckReport {
    bool pass = true;
    double worst = 0.0;
    std::string worst_at;
    std::size_t checked = 0;
};

// |c_omega e^{beta F(omega)} - c_{sigma omega}| <= tol * max(1, c_{sigma omega})
CheckReport du_check(const TransitionMatrix& a, const AtomicMeasure& mu, const Potential& f, double beta,
                     double tol);

// Ruelle eigenmeasure identity tested against indicators of positive cylinders.
CheckReport eigenmeasure_check(const TransitionMatrix& a, const AtomicMeasure& mu, const Potential& f,
                               double beta, const std::vector<Word>& test_cylinders, double tol,
                               std::uint32_t horizon = 64);

// mu({sigma omega}) / mu({omega}) = e^{beta F(omega)}
CheckReport sarig_check(const TransitionMatrix& a, const AtomicMeasure& mu, const Potential& f, double beta,
                        double tol);

// e^{beta S_n F(omega)} mu({omega}) = mu({sigma^n omega}) for arrows with 1 <= n <= max_n
CheckReport quasi_invariance_arrow_check(const TransitionMatrix& a, const AtomicMeasure& mu, const Potential& f,
                                         double beta, std::uint32_t max_n, double tol);

struct ExtremalDecomposition {
    std::vector<std::pair<Root, double>> weights;  // lambda per root family
    std::vector<std::pair<Root, AtomicMeasure>> conditionals;
    double weight_sum = 0.0;
};

ExtremalDecomposition extremal_decomposition(const TransitionMatrix& a, const AtomicMeasure& mu);

// Mixes measures with the given convex weights (atoms merge; tails add).
AtomicMeasure mix(const std::vector<std::pair<double, const AtomicMeasure*>>& parts);

struct ScanRow {
    double beta = 0.0;
    enum class Kind { Converges, Diverges, Undetermined } kind = Kind::Undetermined;
    double c_empty = 0.0;            // Converges
    std::string threshold;           // Diverges: the theorem bound used
    std::vector<double> partials;    // Undetermined evidence
};

std::vector<ScanRow> critical_beta_scan(const TransitionMatrix& a, const Potential& f,
                                        const std::vector<double>& betas, std::uint32_t horizon = 64);

}  // namespace gcms
