#include "chopf/structure.hpp"

namespace chopf {

std::string_view to_string(HopfKind kind) {
    switch (kind) {
    case HopfKind::ShuffleDeconcat:
        return "shuffle-deconcat";
    case HopfKind::ConcatDeshuffle:
        return "concat-deshuffle";
    }
    return "?";
}

Elem shuffle(const Word& u, const Word& v, const Alphabet& alphabet) {
    // row[j] holds the interleavings of u[0, i) and v[0, j), aggregated per word
    using Partial = std::map<Word, mpz_class>;
    std::vector<Partial> row(v.degree() + 1);
    row[0].emplace(Word(), 1);
    for (std::size_t j = 1; j <= v.degree(); ++j) {
        row[j].emplace(v.prefix(j), 1);
    }
    for (std::size_t i = 1; i <= u.degree(); ++i) {
        std::vector<Partial> next(v.degree() + 1);
        next[0].emplace(u.prefix(i), 1);
        const Word ui({u[i - 1]});
        for (std::size_t j = 1; j <= v.degree(); ++j) {
            const Word vj({v[j - 1]});
            Partial& cell = next[j];
            for (const auto& [w, n] : row[j]) {
                cell[w + ui] += n;
            }
            for (const auto& [w, n] : next[j - 1]) {
                cell[w + vj] += n;
            }
        }
        row = std::move(next);
    }
    Elem out(alphabet);
    for (const auto& [w, n] : row[v.degree()]) {
        out.add(w, Rational(n));
    }
    return out;
}

Word concat(const Word& u, const Word& v) { return u + v; }

TensorElem deconcat(const Word& w, const Alphabet& alphabet) {
    TensorElem out(alphabet);
    for (std::size_t i = 0; i <= w.degree(); ++i) {
        out.add({w.prefix(i), w.suffix_from(i)}, 1);
    }
    return out;
}

TensorElem deshuffle(const Word& w, const Alphabet& alphabet) {
    TensorElem out(alphabet);
    const std::size_t n = w.degree();
    std::vector<std::uint8_t> left;
    std::vector<std::uint8_t> right;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        left.clear();
        right.clear();
        for (std::size_t i = 0; i < n; ++i) {
            ((mask >> i) & 1U ? left : right).push_back(w[i]);
        }
        out.add({Word(left), Word(right)}, 1);
    }
    return out;
}

HopfStructure::HopfStructure(HopfKind kind, Alphabet alphabet, std::size_t max_degree)
    : kind_(kind), alphabet_(std::move(alphabet)), max_degree_(max_degree) {}

void HopfStructure::require_degree(std::size_t degree) const {
    if (degree > max_degree_) {
        throw DegreeCapExceeded(degree, max_degree_);
    }
}

Elem shuffle(const HopfStructure& h, const Word& u, const Word& v) {
    h.require_degree(u.degree() + v.degree());
    return shuffle(u, v, h.alphabet());
}

Elem shuffle(const HopfStructure& h, const Elem& a, const Elem& b) {
    a.require_same_alphabet(b);
    if (!(a.alphabet() == h.alphabet())) {
        throw AlphabetMismatch();
    }
    Elem out(h.alphabet());
    for (const auto& [u, c] : a.terms()) {
        for (const auto& [v, d] : b.terms()) {
            out.add_scaled(shuffle(h, u, v), Rational(c * d));
        }
    }
    return out;
}

Word concat(const HopfStructure& h, const Word& u, const Word& v) {
    h.require_degree(u.degree() + v.degree());
    return u + v;
}

TensorElem deshuffle(const HopfStructure& h, const Word& w) {
    h.require_degree(w.degree());
    return deshuffle(w, h.alphabet());
}

Elem HopfStructure::product(const Word& u, const Word& v) const {
    if (kind_ == HopfKind::ShuffleDeconcat) {
        return shuffle(*this, u, v);
    }
    return Elem(alphabet_, concat(*this, u, v));
}

Elem HopfStructure::product(const Elem& a, const Elem& b) const {
    a.require_same_alphabet(b);
    if (!(a.alphabet() == alphabet_)) {
        throw AlphabetMismatch();
    }
    Elem out(alphabet_);
    for (const auto& [u, c] : a.terms()) {
        for (const auto& [v, d] : b.terms()) {
            out.add_scaled(product(u, v), Rational(c * d));
        }
    }
    return out;
}

Elem HopfStructure::multiply(const TensorElem& t) const {
    Elem out(alphabet_);
    for (const auto& [key, c] : t.terms()) {
        out.add_scaled(product(key.first, key.second), c);
    }
    return out;
}

Elem HopfStructure::multiply(const MultiTensor& t) const {
    Elem out(alphabet_);
    for (const auto& [factors, c] : t.terms()) {
        Elem acc = unit(1);
        for (const auto& w : factors) {
            acc = product(acc, basis(w));
        }
        out.add_scaled(acc, c);
    }
    return out;
}

TensorElem HopfStructure::product(const TensorElem& s, const TensorElem& t) const {
    s.require_same_alphabet(t);
    TensorElem out(alphabet_);
    for (const auto& [a, c] : s.terms()) {
        for (const auto& [b, d] : t.terms()) {
            const Rational cd = c * d;
            out.add_scaled(tensor_of(product(a.first, b.first), product(a.second, b.second)), cd);
        }
    }
    return out;
}

TensorElem HopfStructure::coproduct(const Word& w) const {
    require_degree(w.degree());
    return kind_ == HopfKind::ShuffleDeconcat ? deconcat(w, alphabet_) : deshuffle(w, alphabet_);
}

TensorElem HopfStructure::coproduct(const Elem& a) const {
    TensorElem out(alphabet_);
    for (const auto& [w, c] : a.terms()) {
        out.add_scaled(coproduct(w), c);
    }
    return out;
}

MultiTensor HopfStructure::iterated_coproduct(const Word& w, std::size_t arity) const {
    require_degree(w.degree());
    MultiTensor out(alphabet_);
    if (arity <= 1) {
        out.add({w}, 1);
        return out;
    }
    // (id (x) Delta^(arity-2)) Delta
    for (const auto& [split, c] : coproduct(w).terms()) {
        for (const auto& [tail, d] : iterated_coproduct(split.second, arity - 1).terms()) {
            std::vector<Word> key;
            key.reserve(arity);
            key.push_back(split.first);
            key.insert(key.end(), tail.begin(), tail.end());
            out.add(key, Rational(c * d));
        }
    }
    return out;
}

Rational HopfStructure::counit(const Elem& a) const { return a.coeff(Word()); }

Elem HopfStructure::unit(const Rational& c) const { return Elem(alphabet_, Word(), c); }

Elem HopfStructure::antipode_closed(const Word& w) const {
    return Elem(alphabet_, w.reversed(), w.degree() % 2 == 0 ? Rational(1) : Rational(-1));
}

Elem HopfStructure::antipode_closed(const Elem& a) const {
    Elem out(alphabet_);
    for (const auto& [w, c] : a.terms()) {
        out.add_scaled(antipode_closed(w), c);
    }
    return out;
}

namespace {

MultiTensor three_factor(const HopfStructure& h, const Word& w, bool split_left) {
    MultiTensor out(h.alphabet());
    for (const auto& [outer, c] : h.coproduct(w).terms()) {
        const Word& again = split_left ? outer.first : outer.second;
        for (const auto& [inner, d] : h.coproduct(again).terms()) {
            std::vector<Word> key = split_left ? std::vector<Word>{inner.first, inner.second, outer.second}
                                               : std::vector<Word>{outer.first, inner.first, inner.second};
            out.add(key, Rational(c * d));
        }
    }
    return out;
}

} // namespace

MultiTensor coassoc_left(const HopfStructure& h, const Word& w) { return three_factor(h, w, true); }
MultiTensor coassoc_right(const HopfStructure& h, const Word& w) { return three_factor(h, w, false); }

} // namespace chopf
