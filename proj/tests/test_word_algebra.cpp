#include "chopf/elem.hpp"
#include "chopf/errors.hpp"

#include <doctest.h>

#include <random>

using namespace chopf;

namespace {

const Alphabet ab("ab");

Elem E(std::string_view text) { return parse_elem(text, ab); }
Word W(std::string_view text) { return word_parse(text, ab); }

} // namespace

TEST_CASE("alphabet validation") {
    CHECK_THROWS_AS(Alphabet(""), InvalidAlphabet);
    CHECK_THROWS_AS(Alphabet("aba"), InvalidAlphabet);
    CHECK_THROWS_AS(Alphabet("abcdefghijk"), InvalidAlphabet);
    CHECK(Alphabet("abcdefghij").size() == 10);
}

TEST_CASE("word_parse") {
    CHECK(W("ab").degree() == 2);
    CHECK(W("").degree() == 0);
    CHECK(W("").empty());
    try {
        W("ac");
        FAIL("expected UnknownSymbol");
    } catch (const UnknownSymbol& e) {
        CHECK(e.position() == 1);
    }
}

TEST_CASE("canonical word order is length-lexicographic") {
    CHECK(W("") < W("b"));
    CHECK(W("b") < W("aa"));
    CHECK(W("ab") < W("ba"));
    CHECK(Word(W("ba")) < W("aaa"));
    const Alphabet ba("ba");
    CHECK(word_parse("b", ba) < word_parse("a", ba));
    const auto basis = words_up_to(ab, 3);
    CHECK(basis.size() == 15);
    CHECK(std::is_sorted(basis.begin(), basis.end()));
    CHECK(words_up_to(ab, 6).size() == 127);
}

TEST_CASE("elem_combine") {
    const Elem w = E("ab");
    CHECK(elem_combine({{1, w}, {1, w}}) == E("2*ab"));
    CHECK(elem_combine({{1, w}, {-1, w}}).is_zero());
    CHECK(elem_combine({{1, w}, {-1, w}}).terms().empty());
    CHECK(elem_combine({{2, E("aabb")}, {Rational(1, 2), E("4*aabb")}}) == E("4*aabb"));
    CHECK_THROWS_AS(elem_combine({{1, w}, {1, parse_elem("ab", Alphabet("abc"))}}), AlphabetMismatch);
}

TEST_CASE("tensor_of") {
    const TensorElem t = tensor_of(E("a"), E("b"));
    CHECK(t.size() == 1);
    CHECK(t.coeff({W("a"), W("b")}) == 1);

    const TensorElem s = tensor_of(E("a + b"), E("e"));
    CHECK(s.size() == 2);
    CHECK(s.coeff({W("a"), W("")}) == 1);
    CHECK(s.coeff({W("b"), W("")}) == 1);

    CHECK(tensor_of(E("2*a"), E("3*b")).coeff({W("a"), W("b")}) == 6);
    CHECK_THROWS_AS(tensor_of(E("a"), parse_elem("a", Alphabet("abc"))), AlphabetMismatch);
}

TEST_CASE("coeff_of") {
    const Elem x = E("4*aabb + 2*abab");
    CHECK(coeff_of(x, W("aabb")) == 4);
    CHECK(coeff_of(x, W("bbaa")) == 0);
    CHECK(coeff_of(Elem(ab), W("")) == 0);
}

TEST_CASE("grade_project") {
    CHECK(grade_project(E("e + a + ab"), 1) == E("a"));
    const Elem x = E("4*aabb + 2*abab");
    CHECK(grade_project(x, 4) == x);
    CHECK(grade_project(E("a"), 3).is_zero());
}

TEST_CASE("format and parse agree") {
    CHECK(format(E("4*aabb + 2*abab")) == "4*aabb + 2*abab");
    CHECK(format(Elem(ab)) == "0");
    CHECK(format(E("-a + 1/2*e")) == "1/2*e - a");
    CHECK(format(parse_elem("()", Alphabet("de"))) == "()");
    CHECK(E("3*e - 2*ab").coeff(W("")) == 3);
    CHECK_THROWS_AS(E("2*ac"), UnknownSymbol);
    CHECK_THROWS_AS(E("x/2*a"), ParseError);
}

TEST_CASE("parse_rational") {
    CHECK(parse_rational("4") == 4);
    CHECK(parse_rational("-6/4") == Rational(-3, 2));
    CHECK(to_string(parse_rational("6/4")) == "3/2");
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational(""), ParseError);
    CHECK_THROWS_AS(parse_rational("1.5"), ParseError);
}

// Canonical form under random rewrites: adding the same terms in any order
// with any split into partial sums gives identical term maps.
TEST_CASE("canonical form survives random rewrites") {
    std::mt19937 rng(7);
    const auto basis = words_up_to(ab, 4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::pair<Word, Rational>> terms;
        for (int k = 0; k < 8; ++k) {
            Rational c(static_cast<long>(rng() % 11) - 5, static_cast<unsigned long>(rng() % 4 + 1));
            c.canonicalize();
            terms.emplace_back(basis[rng() % basis.size()], c);
        }
        Elem direct(ab);
        for (const auto& [w, c] : terms) {
            direct.add(w, c);
        }
        std::shuffle(terms.begin(), terms.end(), rng);
        Elem left(ab);
        Elem right(ab);
        for (std::size_t i = 0; i < terms.size(); ++i) {
            // split each coefficient into two halves across two partial sums
            (i % 2 ? left : right).add(terms[i].first, Rational(terms[i].second / 3));
            (i % 2 ? right : left).add(terms[i].first, Rational(terms[i].second * 2 / 3));
        }
        const Elem rebuilt = elem_combine({{1, left}, {1, right}, {1, Elem(ab, basis[0])}, {-1, Elem(ab, basis[0])}});
        CHECK(rebuilt == direct);
        CHECK(rebuilt.terms() == direct.terms());
        for (const auto& [w, c] : rebuilt.terms()) {
            CHECK(c != 0);
        }

        // grading decomposition
        Elem sum(ab);
        for (std::size_t n = 0; n <= max_degree(direct); ++n) {
            sum += grade_project(direct, n);
        }
        CHECK(sum == direct);
    }
}
