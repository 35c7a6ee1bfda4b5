#include "chopf/convolution.hpp"
#include "chopf/markov.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace chopf;

namespace {

Rational Q(long n, unsigned long d = 1) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

MarkovChain two_state(const Rational& p, const Rational& q) {
    const Alphabet ab("ab");
    QMatrix m(2, 2);
    m(0, 0) = 1 - p;
    m(0, 1) = p;
    m(1, 0) = q;
    m(1, 1) = 1 - q;
    return MarkovChain(ab, {word_parse("a", ab), word_parse("b", ab)}, m);
}

long factorial(std::size_t n) { return n <= 1 ? 1 : static_cast<long>(n) * factorial(n - 1); }

} // namespace

TEST_CASE("hopf_power basics") {
    const Alphabet ab("ab");
    const HopfStructure h(HopfKind::ShuffleDeconcat, ab);
    for (const auto& w : words_up_to(ab, 4)) {
        CHECK(hopf_power(1, h, w) == h.basis(w));
    }
    CHECK(hopf_power(2, h, word_parse("ab", ab)) == parse_elem("3*ab + ba", ab));
    CHECK_THROWS_AS(hopf_power(0, h, Word()), Error);

    const Alphabet x("x");
    const HopfStructure hx(HopfKind::ShuffleDeconcat, x, 10);
    for (std::size_t n = 0; n <= 10; ++n) {
        const Word xn(std::vector<std::uint8_t>(n, 0));
        // sum_i C(n, i) = 2^n, since x^i shuffle x^(n-i) = C(n, i) x^n
        Rational expected = 0;
        for (unsigned i = 0; i <= n; ++i) {
            expected += oracle::binomial(static_cast<unsigned>(n), i);
        }
        CHECK(expected == Rational(1L << n));
        CHECK(hopf_power(2, hx, xn) == Elem(x, xn, expected));
    }
}

TEST_CASE("hopf_power equals the convolution power of the identity") {
    const Alphabet ab("ab");
    for (auto kind : {HopfKind::ShuffleDeconcat, HopfKind::ConcatDeshuffle}) {
        const HopfStructure h(kind, ab);
        const LinMap id = identity_map(h, 4);
        LinMap power = id;
        for (std::size_t a = 2; a <= 4; ++a) {
            power = convolve(power, id);
            for (const auto& w : words_up_to(ab, 4)) {
                CHECK(hopf_power(a, h, w) == power.image(w));
            }
        }
    }
}

TEST_CASE("power rule and mass conservation") {
    const Alphabet ab("ab");
    const HopfStructure h(HopfKind::ShuffleDeconcat, ab);
    for (const auto& w : words_up_to(ab, 5)) {
        CHECK(hopf_power(2, h, hopf_power(2, h, w)) == hopf_power(4, h, w));
        for (std::size_t a : {2U, 3U}) {
            for (std::size_t b : {2U, 3U}) {
                CHECK(hopf_power(a, h, hopf_power(b, h, w)) == hopf_power(a * b, h, w));
            }
        }
    }
    const Alphabet abcde("abcde");
    const HopfStructure h5(HopfKind::ShuffleDeconcat, abcde);
    for (const char* deck : {"a", "ba", "cab", "dacb", "ebdac"}) {
        const Word w = word_parse(deck, abcde);
        for (long a = 2; a <= 4; ++a) {
            Rational expected = 1;
            for (std::size_t i = 0; i < w.degree(); ++i) {
                expected *= a;
            }
            CHECK(hopf_power(static_cast<std::size_t>(a), h5, w).mass() == expected);
        }
    }
}

TEST_CASE("riffle_chain small cases") {
    const MarkovChain c2 = riffle_chain(2, 2);
    CHECK(c2.matrix()(0, 0) == Q(3, 4));
    CHECK(c2.matrix()(0, 1) == Q(1, 4));
    CHECK(c2.matrix()(1, 0) == Q(1, 4));
    CHECK(c2.matrix()(1, 1) == Q(3, 4));

    const MarkovChain c3 = riffle_chain(3, 2);
    CHECK(spell(c3.states()[0], c3.alphabet()) == "abc");
    CHECK(c3.matrix()(0, 0) == Q(1, 2));
    CHECK(c3.doubly_stochastic());

    const MarkovChain c4 = riffle_chain(4, 2);
    for (std::size_t i = 0; i < c4.size(); ++i) {
        Rational sum = 0;
        for (std::size_t j = 0; j < c4.size(); ++j) {
            sum += c4.matrix()(i, j);
        }
        CHECK(sum == 1);
    }

    CHECK_THROWS_AS(riffle_chain(7, 2), DeckTooLarge);
    CHECK_THROWS_AS(riffle_chain(1, 2), DeckTooLarge);
    CHECK_THROWS_AS(riffle_chain(3, 1), Error);
}

TEST_CASE("riffle_chain matches the simulated GSR shuffle") {
    for (std::size_t n = 2; n <= 5; ++n) {
        for (unsigned a : {2U, 3U}) {
            const MarkovChain c = riffle_chain(n, a);
            CHECK(c.size() == static_cast<std::size_t>(factorial(n)));
            for (std::size_t i = 0; i < c.size(); ++i) {
                const auto row = oracle::gsr_row(spell(c.states()[i], c.alphabet()), a);
                for (std::size_t j = 0; j < c.size(); ++j) {
                    const auto it = row.find(spell(c.states()[j], c.alphabet()));
                    CHECK(c.matrix()(i, j) == (it == row.end() ? Rational(0) : it->second));
                }
            }
        }
    }
}

TEST_CASE("chain validation") {
    const Alphabet ab("ab");
    QMatrix bad(2, 2);
    bad(0, 0) = Q(1, 2);
    bad(0, 1) = Q(1, 3);
    bad(1, 1) = 1;
    CHECK_THROWS_AS(MarkovChain(ab, {word_parse("a", ab), word_parse("b", ab)}, bad), Error);
    bad(0, 0) = Q(3, 2);
    bad(0, 1) = Q(-1, 2);
    CHECK_THROWS_AS(MarkovChain(ab, {word_parse("a", ab), word_parse("b", ab)}, bad), Error);
}

TEST_CASE("characteristic polynomial agrees with determinant evaluations") {
    for (std::size_t n = 2; n <= 4; ++n) {
        const MarkovChain c = riffle_chain(n, 2);
        const Polynomial p = characteristic_polynomial(c.matrix());
        CHECK(p.size() == c.size() + 1);
        CHECK(p.back() == 1);
        for (long x : {-2L, -1L, 0L, 1L, 3L}) {
            CHECK(evaluate(p, Q(x)) == oracle::char_poly_at(c.matrix(), Q(x)));
        }
        CHECK(evaluate(p, Q(1, 3)) == oracle::char_poly_at(c.matrix(), Q(1, 3)));
    }
    // a matrix that needs row swaps during the Hessenberg reduction
    QMatrix m(4, 4);
    const long entries[4][4] = {{1, 0, 2, 0}, {0, 0, 1, 3}, {4, 0, 0, 1}, {0, 5, 1, 2}};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            m(i, j) = entries[i][j];
        }
    }
    const Polynomial p = characteristic_polynomial(m);
    for (long x = -3; x <= 3; ++x) {
        CHECK(evaluate(p, Q(x)) == oracle::char_poly_at(m, Q(x)));
    }
}

TEST_CASE("spectrum_exact") {
    const Spectrum s2 = spectrum_exact(riffle_chain(2, 2));
    CHECK(s2.complete());
    CHECK(s2.eigenvalues == decltype(s2.eigenvalues){{Q(1), 1}, {Q(1, 2), 1}});

    const Spectrum s3 = spectrum_exact(riffle_chain(3, 2));
    CHECK(s3.eigenvalues == decltype(s3.eigenvalues){{Q(1), 1}, {Q(1, 2), 3}, {Q(1, 4), 2}});
    REQUIRE(s3.stationary);
    for (const auto& p : *s3.stationary) {
        CHECK(p == Q(1, 6));
    }

    // the 2-state chain with p = 1/2, q = 1 has eigenvalues 1 and -1/2: not a power of 1/2
    const Spectrum odd = spectrum_exact(two_state(Q(1, 2), Q(1)));
    CHECK(!odd.complete());
    CHECK(odd.eigenvalues.size() == 1);
    CHECK(odd.residual_factor == Polynomial{Q(1, 2), Q(1)});
}

TEST_CASE("riffle spectra follow the cycle counts") {
    for (std::size_t n = 2; n <= 4; ++n) {
        for (unsigned a : {2U, 3U}) {
            const MarkovChain c = riffle_chain(n, a);
            const Spectrum s = spectrum_exact(c);
            CHECK(s.complete());
            const auto cycles = oracle::cycle_counts(n);
            std::size_t total = 0;
            Rational weighted = 0;
            Rational eig = 1;
            for (std::size_t i = 0; i < n; ++i) {
                REQUIRE(s.eigenvalues.contains(eig));
                CHECK(static_cast<long>(s.eigenvalues.at(eig)) == cycles[n - i]);
                eig /= a;
            }
            for (const auto& [v, m] : s.eigenvalues) {
                total += m;
                weighted += v * static_cast<unsigned long>(m);
            }
            CHECK(total == static_cast<std::size_t>(factorial(n)));
            CHECK(weighted == c.matrix().trace());
        }
    }
}

TEST_CASE("stationary_exact handles reducible chains") {
    const Alphabet ab("ab");
    const MarkovChain identity(ab, {word_parse("a", ab), word_parse("b", ab)}, QMatrix::identity(2));
    CHECK(!stationary_exact(identity));
    const auto pi = stationary_exact(two_state(Q(1, 3), Q(1, 6)));
    REQUIRE(pi);
    CHECK((*pi)[0] == Q(1, 3));
    CHECK((*pi)[1] == Q(2, 3));
}

TEST_CASE("repeated_square") {
    const MarkovChain c2 = riffle_chain(2, 2);
    CHECK(repeated_square(c2, 0) == c2);

    // P^m = Pi + 2^-m (I - Pi) for the 2-card chain, with m = 2^10
    const MarkovChain sq = repeated_square(c2, 10);
    mpz_class m = 1;
    m <<= 1024;
    Rational decay(1, m);
    decay.canonicalize();
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            const Rational expected = Q(1, 2) + decay * ((i == j ? Q(1) : Q(0)) - Q(1, 2));
            CHECK(sq.matrix()(i, j) == expected);
            CHECK(abs(sq.matrix()(i, j) - Q(1, 2)) <= Q(1, 1024));
        }
    }

    // squaring agrees with naive repeated multiplication
    const MarkovChain c3 = riffle_chain(3, 2);
    QMatrix naive = c3.matrix();
    for (int k = 1; k < 8; ++k) {
        naive = naive * c3.matrix();
    }
    CHECK(repeated_square(c3, 3).matrix() == naive);

    const MarkovChain deep = repeated_square(c3, 12);
    Rational worst = 0;
    for (std::size_t i = 0; i < deep.size(); ++i) {
        for (std::size_t j = 0; j < deep.size(); ++j) {
            const Rational dev = abs(deep.matrix()(i, j) - Q(1, 6));
            if (dev > worst) {
                worst = dev;
            }
        }
    }
    mpz_class two40 = 1;
    two40 <<= 40;
    CHECK(worst <= Rational(1, two40));
}

TEST_CASE("stationary_by_squaring") {
    const SquaringResult r3 = stationary_by_squaring(riffle_chain(3, 2), 1e-12);
    CHECK(r3.squarings <= 12);
    for (double p : r3.distribution) {
        CHECK(std::abs(p - 1.0 / 6.0) <= 1e-12);
    }

    const SquaringResult r4 = stationary_by_squaring(riffle_chain(4, 2), 1e-10);
    CHECK(r4.distribution.size() == 24);
    for (double p : r4.distribution) {
        CHECK(std::abs(p - 1.0 / 24.0) <= 1e-10);
    }

    const Alphabet ab("ab");
    const MarkovChain identity(ab, {word_parse("a", ab), word_parse("b", ab)}, QMatrix::identity(2));
    CHECK_THROWS_AS(stationary_by_squaring(identity, 1e-12), NoConvergence);

    // periodic chain: P^(2^k) = I forever
    QMatrix flip(2, 2);
    flip(0, 1) = 1;
    flip(1, 0) = 1;
    const MarkovChain periodic(ab, {word_parse("a", ab), word_parse("b", ab)}, flip);
    CHECK_THROWS_AS(stationary_by_squaring(periodic, 1e-12, 20), NoConvergence);

    const auto exact = stationary_exact(two_state(Q(1, 3), Q(1, 6)));
    const SquaringResult r = stationary_by_squaring(two_state(Q(1, 3), Q(1, 6)), 1e-13);
    CHECK(std::abs(r.distribution[0] - to_double((*exact)[0])) <= 1e-13);
}
