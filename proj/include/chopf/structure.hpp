#pragma once

#include "chopf/elem.hpp"

#include <cstddef>
#include <string_view>

namespace chopf {

inline constexpr std::size_t kDefaultMaxDegree = 8;

enum class HopfKind {
    ShuffleDeconcat, // shuffle product, deconcatenation coproduct
    ConcatDeshuffle, // concatenation product, deshuffle coproduct
};

std::string_view to_string(HopfKind kind);

// Bialgebra structure on the words over an alphabet. The two kinds are graded
// duals of each other under the pairing <u, v> = [u == v]; everything
// downstream (convolution, antipode solve, Hopf powers) is written against
// this one type and dispatches on kind.
class HopfStructure {
public:
    HopfStructure(HopfKind kind, Alphabet alphabet, std::size_t max_degree = kDefaultMaxDegree);

    HopfKind kind() const noexcept { return kind_; }
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t max_degree() const noexcept { return max_degree_; }

    Elem product(const Word& u, const Word& v) const;
    Elem product(const Elem& a, const Elem& b) const;
    // m applied to a tensor.
    Elem multiply(const TensorElem& t) const;
    // Iterated product of every factor of every term.
    Elem multiply(const MultiTensor& t) const;
    // Factorwise product on A (x) A: (a (x) b)(c (x) d) = ac (x) bd.
    TensorElem product(const TensorElem& s, const TensorElem& t) const;

    TensorElem coproduct(const Word& w) const;
    TensorElem coproduct(const Elem& a) const;
    // (a-1)-fold coproduct into `arity` tensor factors; arity 1 is the identity.
    MultiTensor iterated_coproduct(const Word& w, std::size_t arity) const;

    Rational counit(const Elem& a) const;
    Elem unit(const Rational& c) const;
    Elem basis(const Word& w) const { return Elem(alphabet_, w); }

    // (-1)^|w| reverse(w); the antipode of both kinds.
    Elem antipode_closed(const Word& w) const;
    Elem antipode_closed(const Elem& a) const;

    void require_degree(std::size_t degree) const;

    friend bool operator==(const HopfStructure&, const HopfStructure&) = default;

private:
    HopfKind kind_;
    Alphabet alphabet_;
    std::size_t max_degree_;
};

// Shuffle of two words, aggregated per output word.
Elem shuffle(const Word& u, const Word& v, const Alphabet& alphabet);
Word concat(const Word& u, const Word& v);
TensorElem deconcat(const Word& w, const Alphabet& alphabet);
TensorElem deshuffle(const Word& w, const Alphabet& alphabet);

// Capped entry points matching the structure's degree limit.
Elem shuffle(const HopfStructure& h, const Word& u, const Word& v);
Elem shuffle(const HopfStructure& h, const Elem& a, const Elem& b);
Word concat(const HopfStructure& h, const Word& u, const Word& v);
TensorElem deshuffle(const HopfStructure& h, const Word& w);

// Linear maps applied to one tensor factor.
template <class F>
TensorElem apply_left(const TensorElem& t, F&& f) {
    TensorElem out(t.alphabet());
    for (const auto& [key, c] : t.terms()) {
        const Elem image = f(key.first);
        for (const auto& [w, d] : image.terms()) {
            out.add({w, key.second}, Rational(c * d));
        }
    }
    return out;
}

template <class F>
TensorElem apply_right(const TensorElem& t, F&& f) {
    TensorElem out(t.alphabet());
    for (const auto& [key, c] : t.terms()) {
        const Elem image = f(key.second);
        for (const auto& [w, d] : image.terms()) {
            out.add({key.first, w}, Rational(c * d));
        }
    }
    return out;
}

// (Delta (x) id) Delta and (id (x) Delta) Delta as three-factor tensors.
MultiTensor coassoc_left(const HopfStructure& h, const Word& w);
MultiTensor coassoc_right(const HopfStructure& h, const Word& w);

} // namespace chopf
