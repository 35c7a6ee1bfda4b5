#include "chopf/word.hpp"

#include "chopf/errors.hpp"

#include <algorithm>

namespace chopf {

Alphabet::Alphabet(std::string_view letters) : letters_(letters) {
    if (letters_.empty() || letters_.size() > kMaxAlphabetSize) {
        throw InvalidAlphabet("alphabet must have 1 to " + std::to_string(kMaxAlphabetSize) + " symbols, got " +
                              std::to_string(letters_.size()));
    }
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (letters_.find(letters_[i], i + 1) != std::string::npos) {
            throw InvalidAlphabet("duplicate symbol '" + std::string(1, letters_[i]) + "' in alphabet");
        }
    }
}

std::optional<std::uint8_t> Alphabet::index_of(char symbol) const noexcept {
    const auto pos = letters_.find(symbol);
    if (pos == std::string::npos) {
        return std::nullopt;
    }
    return static_cast<std::uint8_t>(pos);
}

Word Word::prefix(std::size_t n) const {
    return Word({letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(n)});
}

Word Word::suffix_from(std::size_t n) const {
    return Word({letters_.begin() + static_cast<std::ptrdiff_t>(n), letters_.end()});
}

Word Word::reversed() const { return Word({letters_.rbegin(), letters_.rend()}); }

Word Word::operator+(const Word& rhs) const {
    std::vector<std::uint8_t> out;
    out.reserve(letters_.size() + rhs.letters_.size());
    out.insert(out.end(), letters_.begin(), letters_.end());
    out.insert(out.end(), rhs.letters_.begin(), rhs.letters_.end());
    return Word(std::move(out));
}

Word word_parse(std::string_view text, const Alphabet& alphabet) {
    std::vector<std::uint8_t> letters;
    letters.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto idx = alphabet.index_of(text[i]);
        if (!idx) {
            throw UnknownSymbol(i, text[i]);
        }
        letters.push_back(*idx);
    }
    return Word(std::move(letters));
}

std::string spell(const Word& w, const Alphabet& alphabet) {
    std::string out;
    out.reserve(w.degree());
    for (auto idx : w.letters()) {
        out.push_back(alphabet.symbol(idx));
    }
    return out;
}

std::string display(const Word& w, const Alphabet& alphabet) {
    if (w.empty()) {
        // "e" would be ambiguous over an alphabet that uses it as a letter.
        return alphabet.index_of('e') ? "()" : "e";
    }
    return spell(w, alphabet);
}

std::vector<Word> words_of_degree(const Alphabet& alphabet, std::size_t degree) {
    std::vector<Word> out;
    std::vector<std::uint8_t> cur(degree, 0);
    const auto k = static_cast<std::uint8_t>(alphabet.size());
    while (true) {
        out.emplace_back(cur);
        // odometer increment, last position fastest: lexicographic order
        std::size_t pos = degree;
        while (pos > 0) {
            --pos;
            if (++cur[pos] < k) {
                break;
            }
            cur[pos] = 0;
            if (pos == 0) {
                return out;
            }
        }
        if (degree == 0) {
            return out;
        }
    }
}

std::vector<Word> words_up_to(const Alphabet& alphabet, std::size_t max_degree) {
    std::vector<Word> out;
    for (std::size_t d = 0; d <= max_degree; ++d) {
        auto layer = words_of_degree(alphabet, d);
        out.insert(out.end(), std::make_move_iterator(layer.begin()), std::make_move_iterator(layer.end()));
    }
    return out;
}

} // namespace chopf
