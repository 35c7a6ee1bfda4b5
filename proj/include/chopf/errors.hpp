#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chopf {

// Base class for every domain error. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownSymbol : public Error {
public:
    UnknownSymbol(std::size_t position, char symbol)
        : Error("unknown symbol '" + std::string(1, symbol) + "' at position " + std::to_string(position)),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class InvalidAlphabet : public Error {
public:
    using Error::Error;
};

class AlphabetMismatch : public Error {
public:
    AlphabetMismatch() : Error("operands are over different alphabets") {}
};

class DegreeCapExceeded : public Error {
public:
    DegreeCapExceeded(std::size_t degree, std::size_t cap)
        : Error("degree " + std::to_string(degree) + " exceeds cap " + std::to_string(cap)) {}
};

class StructureMismatch : public Error {
public:
    StructureMismatch() : Error("linear maps are over different Hopf structures") {}
};

class DeckTooLarge : public Error {
public:
    explicit DeckTooLarge(std::size_t cards)
        : Error("deck of " + std::to_string(cards) + " cards is outside the supported range 2..6") {}
};

class NoConvergence : public Error {
public:
    explicit NoConvergence(std::size_t squarings)
        : Error("no convergence after " + std::to_string(squarings) + " squarings") {}
};

class BadDimension : public Error {
public:
    using Error::Error;
};

class EmptyContext : public Error {
public:
    EmptyContext() : Error("empty context") {}
};

class LengthMismatch : public Error {
public:
    LengthMismatch(std::size_t tokens, std::size_t targets)
        : Error("context has " + std::to_string(tokens) + " tokens but " + std::to_string(targets) + " targets") {}
};

class CorpusTooShort : public Error {
public:
    CorpusTooShort() : Error("corpus needs at least two tokens") {}
};

class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace chopf
