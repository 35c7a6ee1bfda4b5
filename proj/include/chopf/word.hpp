#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace chopf {

inline constexpr std::size_t kMaxAlphabetSize = 10;

// Ordered set of distinct single-character symbols. The order fixes the
// canonical term order of every element built over the alphabet.
class Alphabet {
public:
    explicit Alphabet(std::string_view letters);

    std::size_t size() const noexcept { return letters_.size(); }
    char symbol(std::size_t index) const { return letters_.at(index); }
    std::optional<std::uint8_t> index_of(char symbol) const noexcept;
    const std::string& letters() const noexcept { return letters_; }

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    std::string letters_;
};

// A word is a sequence of letter indices into some alphabet. Words compare
// length-lexicographically, which is the canonical basis order.
class Word {
public:
    Word() = default;
    explicit Word(std::vector<std::uint8_t> letters) : letters_(std::move(letters)) {}

    std::size_t degree() const noexcept { return letters_.size(); }
    bool empty() const noexcept { return letters_.empty(); }
    std::uint8_t operator[](std::size_t i) const { return letters_[i]; }
    const std::vector<std::uint8_t>& letters() const noexcept { return letters_; }

    Word prefix(std::size_t n) const;
    Word suffix_from(std::size_t n) const;
    Word reversed() const;
    Word operator+(const Word& rhs) const;

    friend bool operator==(const Word&, const Word&) = default;
    friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
        if (auto c = a.letters_.size() <=> b.letters_.size(); c != 0) {
            return c;
        }
        return a.letters_ <=> b.letters_;
    }

private:
    std::vector<std::uint8_t> letters_;
};

// Throws UnknownSymbol with the offending position.
Word word_parse(std::string_view text, const Alphabet& alphabet);

// Plain spelling; the empty word spells as "".
std::string spell(const Word& w, const Alphabet& alphabet);

// Display form; the empty word displays as "e".
std::string display(const Word& w, const Alphabet& alphabet);

// All words of degree <= max_degree in canonical order.
std::vector<Word> words_up_to(const Alphabet& alphabet, std::size_t max_degree);

// All words of exactly the given degree in canonical order.
std::vector<Word> words_of_degree(const Alphabet& alphabet, std::size_t degree);

} // namespace chopf
