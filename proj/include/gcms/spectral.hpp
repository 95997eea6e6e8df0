#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gcms/configuration.hpp"
#include "gcms/transition_matrix.hpp"

namespace gcms {

using Coef = std::complex<double>;

// Index (gamma, F) of a projection e_{gamma,F}; modeled through its Gelfand
// transform, the indicator of V_{gamma,F}.
struct ProjectionTerm {
    Word gamma;
    std::vector<Symbol> f;
};

// lambda0 * e_{e,{1}} + sum_k lambda_k * e_{gamma_k, F_k}
struct GAElement {
    Coef lambda0{0.0, 0.0};
    std::vector<std::pair<Coef, ProjectionTerm>> terms;
};

// Rewriting of one projection term into positive-cylinder form.
struct TermNormalization {
    enum class Kind { Identity, Cylinders, Zero } kind = Kind::Zero;
    std::vector<Word> cylinders;  // e_{gamma,F} = sum of these positive cylinders
};

TermNormalization nonzero_term(const TransitionMatrix& a, const Word& gamma, const std::vector<Symbol>& f,
                               std::uint32_t horizon = 64);

// Identity coefficient plus merged positive-cylinder coefficients.
struct NormalForm {
    Coef lambda0{0.0, 0.0};
    std::map<Word, Coef> cylinders;
    std::uint32_t depth() const;  // longest cylinder word, 0 when empty
};

NormalForm normal_form(const TransitionMatrix& a, const GAElement& el, std::uint32_t horizon = 64);

// Locally constant representation of the Gelfand transform on words of fixed
// length over a finite alphabet, plus the values on the empty words.
struct CylinderFunction {
    std::uint32_t depth = 0;
    std::vector<Symbol> alphabet;
    std::map<Word, Coef> table;
    std::vector<std::pair<Configuration, Coef>> empty_word_values;
};

CylinderFunction gelfand(const GAElement& el, const TransitionMatrix& a, std::vector<Symbol> alphabet,
                         std::uint32_t horizon = 64);

// {1..M} for the largest cylinder symbol M, grown until the restriction is
// irreducible.
std::vector<Symbol> choose_finite_alphabet(const GAElement& el, const TransitionMatrix& a);

struct MeanCycleGraph {
    std::size_t vertex_count = 0;
    std::vector<std::string> labels;                      // optional, per vertex
    std::vector<std::tuple<int, int, double>> edges;      // (from, to, weight), weights finite
};

struct MeanCycleResult {
    bool has_cycle = false;
    double max_mean = 0.0;
    std::vector<int> cycle;  // vertices of a witness cycle realizing max_mean
};

// Maximum over directed cycles of the mean edge weight (Karp per SCC).
MeanCycleResult max_mean_cycle(const MeanCycleGraph& g);

struct SpectralResult {
    double radius = 0.0;
    std::string branch;  // "sigma" or "empty"
    std::string certificate;
};

// Variational spectral radius of the weighted endomorphism with weight `el`:
// max of the Sigma_A branch (cycle-mean problem on a finite subshift) and the
// E_A branch (geometric mean along the empty-word cycle). A nonempty
// `alphabet_override` replaces the chosen alphabet; enlarging it must not
// change the result.
SpectralResult spectral_radius(const GAElement& el, const TransitionMatrix& a, std::uint32_t horizon = 64,
                               const std::vector<Symbol>& alphabet_override = {});

// Independent oracle: exhaustive scan of periodic orbits up to max_len,
// evaluating the Gelfand transform directly from the original terms.
double brute_force_radius(const GAElement& el, const TransitionMatrix& a, std::uint32_t max_len,
                          std::uint32_t horizon = 64);

}  // namespace gcms
