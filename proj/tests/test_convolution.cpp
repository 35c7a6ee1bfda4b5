#include "chopf/convolution.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace chopf;

namespace {

const Alphabet ab("ab");
const HopfStructure shuffle_alg(HopfKind::ShuffleDeconcat, ab);
const HopfStructure concat_alg(HopfKind::ConcatDeshuffle, ab);

Elem E(std::string_view text) { return parse_elem(text, ab); }
Word W(std::string_view text) { return word_parse(text, ab); }

// Random degree-preserving map: each basis word goes to a random combination
// of words of its own degree.
LinMap random_graded(const HopfStructure& h, std::size_t degree, std::mt19937& rng, const std::string& name) {
    return LinMap(h, degree, name, [&](const Word& w) {
        Elem img(h.alphabet());
        const auto layer = words_of_degree(h.alphabet(), w.degree());
        for (int k = 0; k < 2; ++k) {
            img.add(layer[rng() % layer.size()], Rational(static_cast<long>(rng() % 7) - 3));
        }
        return img;
    });
}

} // namespace

TEST_CASE("linmap_apply") {
    const LinMap id = identity_map(shuffle_alg, 4);
    CHECK(linmap_apply(id, E("4*aabb + 2*abab")) == E("4*aabb + 2*abab"));
    CHECK(linmap_apply(conv_unit(shuffle_alg, 4), E("3*e + ab")) == E("3*e"));
    CHECK(linmap_apply(closed_antipode_map(shuffle_alg, 4), E("ab")) == E("ba"));
    CHECK_THROWS_AS(linmap_apply(id, E("aabba")), DegreeCapExceeded);
    CHECK_THROWS_AS(identity_map(HopfStructure(HopfKind::ShuffleDeconcat, ab, 3), 4), DegreeCapExceeded);
    CHECK(id.preserves_degree());
}

TEST_CASE("convolution identity") {
    const LinMap id = identity_map(shuffle_alg, 6);
    const LinMap unit = conv_unit(shuffle_alg, 6);
    CHECK(convolve(unit, id) == id);
    CHECK(convolve(id, unit) == id);
    const LinMap s = closed_antipode_map(shuffle_alg, 5);
    CHECK(convolve(s, conv_unit(shuffle_alg, 5)) == s);
    CHECK(conv_unit(shuffle_alg).image(W("")) == E("e"));
    CHECK(conv_unit(shuffle_alg).image(W("ab")).is_zero());
}

TEST_CASE("convolution values") {
    const LinMap id = identity_map(shuffle_alg, 4);
    const LinMap s = closed_antipode_map(shuffle_alg, 4);
    CHECK(convolve(id, s).image(W("a")).is_zero());

    // m (id (x) id) Delta(ab) expanded term by term with the brute-force shuffle
    std::map<std::string, long> expected;
    const std::string w = "ab";
    for (std::size_t i = 0; i <= w.size(); ++i) {
        for (const auto& [word, n] : oracle::shuffle(w.substr(0, i), w.substr(i))) {
            expected[word] += n;
        }
    }
    const Elem got = convolve(id, id).image(W("ab"));
    CHECK(oracle::to_counts(got) == expected);
    CHECK(got == E("3*ab + ba"));
}

TEST_CASE("convolve rejects mismatched maps") {
    CHECK_THROWS_AS(convolve(identity_map(shuffle_alg, 3), identity_map(concat_alg, 3)), StructureMismatch);
    CHECK_THROWS_AS(convolve(identity_map(shuffle_alg, 3), identity_map(shuffle_alg, 2)), StructureMismatch);
}

TEST_CASE("convolution is associative on random graded maps") {
    std::mt19937 rng(11);
    for (const auto* h : {&shuffle_alg, &concat_alg}) {
        for (int trial = 0; trial < 5; ++trial) {
            const LinMap f = random_graded(*h, 4, rng, "f");
            const LinMap g = random_graded(*h, 4, rng, "g");
            const LinMap k = random_graded(*h, 4, rng, "h");
            CHECK(convolve(convolve(f, g), k) == convolve(f, convolve(g, k)));
            const LinMap unit = conv_unit(*h, 4);
            CHECK(convolve(unit, f) == f);
            CHECK(convolve(f, unit) == f);
        }
    }
}

TEST_CASE("antipode_solve reproduces the closed form") {
    for (const auto* h : {&shuffle_alg, &concat_alg}) {
        const LinMap solved = antipode_solve(*h, 6);
        for (const auto& w : words_up_to(ab, 6)) {
            CHECK(solved.image(w) == h->antipode_closed(w));
        }
        CHECK(solved.image(W("")) == E("e"));
        CHECK(solved.image(W("a")) == E("-a"));
        const LinMap id = identity_map(*h, 6);
        CHECK(convolve(solved, id) == conv_unit(*h, 6));
        CHECK(convolve(id, solved) == conv_unit(*h, 6));
    }
}

TEST_CASE("antipode_solve on a three-letter alphabet") {
    const Alphabet abc("abc");
    const HopfStructure h(HopfKind::ConcatDeshuffle, abc, 5);
    const LinMap solved = antipode_solve(h);
    for (const auto& w : words_up_to(abc, 5)) {
        CHECK(solved.image(w) == h.antipode_closed(w));
    }
}

TEST_CASE("coherence_check") {
    const LinMap s = closed_antipode_map(shuffle_alg, 6);
    const CoherenceReport ok = coherence_check(shuffle_alg, s, 6);
    CHECK(ok.pass);
    CHECK(ok.words_checked == 127);
    CHECK(ok.defects.empty());
    CHECK(summary(ok) == "PASS (127 basis words, max defect 0)");

    const CoherenceReport bad = coherence_check(shuffle_alg, identity_map(shuffle_alg, 6), 2);
    CHECK(!bad.pass);
    REQUIRE(bad.lowest_defect_degree);
    CHECK(*bad.lowest_defect_degree == 1);
    CHECK(bad.defects.at(W("a")) == E("2*a"));
    CHECK(!bad.defects.contains(W("")));

    const CoherenceReport trivial = coherence_check(shuffle_alg, s, 0);
    CHECK(trivial.pass);
    CHECK(trivial.words_checked == 1);

    CHECK_THROWS_AS(coherence_check(concat_alg, s, 2), StructureMismatch);
    CHECK_THROWS_AS(coherence_check(HopfStructure(HopfKind::ShuffleDeconcat, ab, 2), s, 3), StructureMismatch);
}

TEST_CASE("three paths of the antipode diagram agree") {
    for (const auto* h : {&shuffle_alg, &concat_alg}) {
        const LinMap s = antipode_solve(*h, 5);
        for (const auto& w : words_up_to(ab, 5)) {
            CHECK(coherence_residual(*h, s, w, CoherenceSide::IdTensorS).is_zero());
            CHECK(coherence_residual(*h, s, w, CoherenceSide::STensorId).is_zero());
        }
    }
}

// Any map passing coherence through degree d agrees with the solved antipode
// through degree d: perturb the true antipode at one degree and watch the
// check fail exactly there.
TEST_CASE("antipode uniqueness") {
    std::mt19937 rng(3);
    const LinMap truth = antipode_solve(shuffle_alg, 4);
    for (std::size_t broken = 1; broken <= 4; ++broken) {
        for (int trial = 0; trial < 4; ++trial) {
            const Word victim = words_of_degree(ab, broken)[rng() % (1U << broken)];
            const LinMap perturbed(shuffle_alg, 4, "S'", [&](const Word& w) {
                Elem img = truth.image(w);
                if (w == victim) {
                    img.add(words_of_degree(ab, broken)[rng() % (1U << broken)], Rational(1 + trial));
                }
                return img;
            });
            const CoherenceReport r = coherence_check(shuffle_alg, perturbed, 4);
            CHECK(!r.pass);
            CHECK(*r.lowest_defect_degree == broken);
            CHECK(coherence_check(shuffle_alg, perturbed, broken - 1).pass);
        }
    }
}
