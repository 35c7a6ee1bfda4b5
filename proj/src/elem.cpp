#include "chopf/elem.hpp"

#include <cctype>
#include <sstream>

namespace chopf {

Elem elem_combine(std::span<const std::pair<Rational, Elem>> pairs) {
    if (pairs.empty()) {
        throw Error("elem_combine needs at least one operand to fix the alphabet");
    }
    Elem out(pairs.front().second.alphabet());
    for (const auto& [c, a] : pairs) {
        out.add_scaled(a, c);
    }
    return out;
}

Elem elem_combine(std::initializer_list<std::pair<Rational, Elem>> pairs) {
    return elem_combine(std::span<const std::pair<Rational, Elem>>(pairs.begin(), pairs.size()));
}

TensorElem tensor_of(const Elem& a, const Elem& b) {
    a.require_same_alphabet(b);
    TensorElem out(a.alphabet());
    for (const auto& [u, c] : a.terms()) {
        for (const auto& [v, d] : b.terms()) {
            out.add({u, v}, Rational(c * d));
        }
    }
    return out;
}

Rational coeff_of(const Elem& a, const Word& w) { return a.coeff(w); }

Elem grade_project(const Elem& a, std::size_t degree) {
    Elem out(a.alphabet());
    for (const auto& [w, c] : a.terms()) {
        if (w.degree() == degree) {
            out.add(w, c);
        }
    }
    return out;
}

std::size_t max_degree(const Elem& a) {
    // terms are length-lexicographic, so the last one has the top degree
    return a.is_zero() ? 0 : a.terms().rbegin()->first.degree();
}

namespace {

void append_term(std::ostringstream& os, bool first, const Rational& c, const std::string& body) {
    const bool negative = c < 0;
    const Rational mag = abs(c);
    if (first) {
        if (negative) {
            os << '-';
        }
    } else {
        os << (negative ? " - " : " + ");
    }
    if (mag != 1) {
        os << mag.get_str() << '*';
    }
    os << body;
}

std::string word_list(const std::vector<Word>& ws, const Alphabet& alphabet) {
    std::string out = "(";
    for (std::size_t i = 0; i < ws.size(); ++i) {
        if (i) {
            out += ", ";
        }
        out += display(ws[i], alphabet);
    }
    return out + ")";
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

Word parse_display_word(std::string_view text, const Alphabet& alphabet) {
    if (text == "()" || (text == "e" && !alphabet.index_of('e'))) {
        return Word();
    }
    return word_parse(text, alphabet);
}

} // namespace

std::string format(const Elem& a) {
    if (a.is_zero()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : a.terms()) {
        append_term(os, first, c, display(w, a.alphabet()));
        first = false;
    }
    return os.str();
}

std::string format(const TensorElem& t) {
    if (t.is_zero()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : t.terms()) {
        append_term(os, first, c, word_list({key.first, key.second}, t.alphabet()));
        first = false;
    }
    return os.str();
}

std::string format(const MultiTensor& t) {
    if (t.is_zero()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : t.terms()) {
        append_term(os, first, c, word_list(key, t.alphabet()));
        first = false;
    }
    return os.str();
}

Elem parse_elem(std::string_view text, const Alphabet& alphabet) {
    Elem out(alphabet);
    std::string_view rest = trim(text);
    if (rest == "0") {
        return out;
    }
    bool negative = false;
    if (!rest.empty() && rest.front() == '-') {
        negative = true;
        rest = trim(rest.substr(1));
    }
    while (true) {
        // a term runs until the next " + " or " - " separator
        std::size_t cut = std::string_view::npos;
        for (std::size_t i = 0; i + 2 < rest.size(); ++i) {
            if (rest[i] == ' ' && (rest[i + 1] == '+' || rest[i + 1] == '-') && rest[i + 2] == ' ') {
                cut = i;
                break;
            }
        }
        std::string_view term = trim(rest.substr(0, cut));
        if (term.empty()) {
            throw ParseError("empty term in '" + std::string(text) + "'");
        }
        Rational c = 1;
        if (const auto star = term.find('*'); star != std::string_view::npos) {
            c = parse_rational(trim(term.substr(0, star)));
            term = trim(term.substr(star + 1));
        }
        out.add(parse_display_word(term, alphabet), negative ? Rational(-c) : c);
        if (cut == std::string_view::npos) {
            break;
        }
        negative = rest[cut + 1] == '-';
        rest = rest.substr(cut + 3);
    }
    return out;
}

} // namespace chopf
