#pragma once

#include "chopf/errors.hpp"
#include "chopf/rational.hpp"
#include "chopf/word.hpp"

#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace chopf {

// Sparse exact linear combination of basis keys over a fixed alphabet.
// Zero coefficients are never stored, so two equal combinations always have
// identical term maps.
template <class Key>
class LinComb {
public:
    using key_type = Key;
    using term_map = std::map<Key, Rational>;

    explicit LinComb(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}
    LinComb(Alphabet alphabet, const Key& key, const Rational& c = 1) : alphabet_(std::move(alphabet)) {
        add(key, c);
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const term_map& terms() const& noexcept { return terms_; }
    // By value on temporaries, so `for (auto& t : f().terms())` stays valid.
    term_map terms() && { return std::move(terms_); }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    Rational coeff(const Key& key) const {
        auto it = terms_.find(key);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    LinComb& add(const Key& key, const Rational& c) {
        if (c == 0) {
            return *this;
        }
        Rational v = c;
        v.canonicalize();
        auto [it, inserted] = terms_.try_emplace(key, v);
        if (!inserted) {
            it->second += v;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
        return *this;
    }

    LinComb& add_scaled(const LinComb& other, const Rational& c) {
        require_same_alphabet(other);
        if (c == 0) {
            return *this;
        }
        for (const auto& [key, value] : other.terms_) {
            add(key, Rational(value * c));
        }
        return *this;
    }

    LinComb& operator+=(const LinComb& other) { return add_scaled(other, 1); }
    LinComb& operator-=(const LinComb& other) { return add_scaled(other, -1); }
    LinComb& operator*=(const Rational& c) {
        if (c == 0) {
            terms_.clear();
        } else {
            for (auto& [key, value] : terms_) {
                value *= c;
            }
        }
        return *this;
    }

    friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }
    friend LinComb operator-(LinComb a, const LinComb& b) { return a -= b; }
    friend LinComb operator*(const Rational& c, LinComb a) { return a *= c; }
    friend LinComb operator-(LinComb a) { return a *= Rational(-1); }

    friend bool operator==(const LinComb& a, const LinComb& b) {
        return a.alphabet_ == b.alphabet_ && a.terms_ == b.terms_;
    }

    // Sum of absolute values of the coefficients.
    Rational l1_norm() const {
        Rational total = 0;
        for (const auto& [key, value] : terms_) {
            total += abs(value);
        }
        return total;
    }

    // Sum of the coefficients.
    Rational mass() const {
        Rational total = 0;
        for (const auto& [key, value] : terms_) {
            total += value;
        }
        return total;
    }

    void require_same_alphabet(const LinComb& other) const {
        if (!(alphabet_ == other.alphabet_)) {
            throw AlphabetMismatch();
        }
    }

private:
    Alphabet alphabet_;
    term_map terms_;
};

using Elem = LinComb<Word>;
using TensorElem = LinComb<std::pair<Word, Word>>;
// Runtime-arity tensors, used for iterated coproducts.
using MultiTensor = LinComb<std::vector<Word>>;

// Sum of c_i * a_i; throws AlphabetMismatch when the operands disagree.
Elem elem_combine(std::span<const std::pair<Rational, Elem>> pairs);
Elem elem_combine(std::initializer_list<std::pair<Rational, Elem>> pairs);

TensorElem tensor_of(const Elem& a, const Elem& b);

Rational coeff_of(const Elem& a, const Word& w);

Elem grade_project(const Elem& a, std::size_t degree);

// Largest degree present; zero for the zero element.
std::size_t max_degree(const Elem& a);

// Parses "c*word + c*word - ..." where the empty word is written "e".
// Convenient for tests and the CLI; the inverse of format().
Elem parse_elem(std::string_view text, const Alphabet& alphabet);

// "4*aabb + 2*abab"; "0" for the zero element; coefficient 1 is omitted.
std::string format(const Elem& a);

// "(a, b) + 2*(b, a)".
std::string format(const TensorElem& t);

std::string format(const MultiTensor& t);

} // namespace chopf
