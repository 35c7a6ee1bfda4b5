#pragma once

#include "chopf/structure.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace chopf {

// Dense exact-rational matrix, row-major.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static QMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Rational trace() const;

    friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
    friend bool operator==(const QMatrix&, const QMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

// Exact row-stochastic chain over an explicit list of word states.
class MarkovChain {
public:
    // Throws Error unless P is square over the states, nonnegative, and every
    // row sums to exactly 1.
    MarkovChain(Alphabet alphabet, std::vector<Word> states, QMatrix transition,
                std::optional<unsigned> arity = std::nullopt);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const std::vector<Word>& states() const noexcept { return states_; }
    const QMatrix& matrix() const noexcept { return P_; }
    // Shuffle arity for chains built from Hopf powers; seeds the eigenvalue search.
    std::optional<unsigned> arity() const noexcept { return arity_; }
    std::size_t size() const noexcept { return states_.size(); }

    bool doubly_stochastic() const;

    friend bool operator==(const MarkovChain&, const MarkovChain&) = default;

private:
    Alphabet alphabet_;
    std::vector<Word> states_;
    QMatrix P_;
    std::optional<unsigned> arity_;
};

// Psi^a = m^(a-1) o Delta^(a-1); Psi^1 is the identity. Requires a >= 1.
Elem hopf_power(std::size_t a, const HopfStructure& h, const Word& w);
Elem hopf_power(std::size_t a, const HopfStructure& h, const Elem& x);

inline constexpr std::size_t kMaxDeck = 6;

// GSR a-shuffle on n distinct cards: row w is Psi^a(w) / a^n under
// shuffle/deconcatenation. States are the n! orderings in lexicographic order.
MarkovChain riffle_chain(std::size_t cards, unsigned arity);

// Ascending coefficients; the characteristic polynomial is monic.
using Polynomial = std::vector<Rational>;

// det(x I - M) by exact reduction to Hessenberg form.
Polynomial characteristic_polynomial(const QMatrix& m);

Rational evaluate(const Polynomial& p, const Rational& x);

struct Spectrum {
    // Descending eigenvalue order.
    std::map<Rational, std::size_t, std::greater<>> eigenvalues;
    Polynomial characteristic_polynomial;
    // What is left of the characteristic polynomial after every candidate root
    // has been divided out; constant 1 when the spectrum is fully resolved.
    Polynomial residual_factor;
    // Unique stationary distribution, when one exists.
    std::optional<std::vector<Rational>> stationary;

    bool complete() const noexcept { return residual_factor.size() == 1; }
};

// Roots are searched among {0, 1, -1} and the powers b^-i, where b is the
// chain's arity or else the smallest base whose powers cover every
// denominator of P.
Spectrum spectrum_exact(const MarkovChain& chain);

// Exact unique solution of pi P = pi with sum(pi) = 1, if unique.
std::optional<std::vector<Rational>> stationary_exact(const MarkovChain& chain);

// Matrix P^(2^k) by k exact squarings.
MarkovChain repeated_square(const MarkovChain& chain, std::size_t squarings);

struct SquaringResult {
    std::vector<double> distribution;
    std::size_t squarings = 0;
    double spread = 0; // largest column spread of the final iterate
};

inline constexpr std::size_t kDefaultSquaringBudget = 64;

// Squares a double copy of P until every column agrees across rows to within
// `tolerance`; returns the common row. Throws NoConvergence when the budget
// runs out, which is what periodic or reducible chains do.
SquaringResult stationary_by_squaring(const MarkovChain& chain, double tolerance,
                                      std::size_t budget = kDefaultSquaringBudget);

} // namespace chopf
