#pragma once

#include <stdexcept>
#include <string>

namespace shifteq {

// Error taxonomy shared by library and CLI. Each class carries a stable code
// string so the CLI can report failures uniformly.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define SHIFTEQ_ERROR(NAME)                                              \
    class NAME : public Error {                                          \
    public:                                                              \
        explicit NAME(const std::string& what) : Error(#NAME, what) {}   \
    }

SHIFTEQ_ERROR(IncompatibleIndexSets);
SHIFTEQ_ERROR(NotSquare);
SHIFTEQ_ERROR(NotAFactorization);
SHIFTEQ_ERROR(BadLevel);
SHIFTEQ_ERROR(NotAnSEWitness);
SHIFTEQ_ERROR(VerificationFailure);
SHIFTEQ_ERROR(TrimFailure);
SHIFTEQ_ERROR(TheoremViolation);
SHIFTEQ_ERROR(ParseError);
SHIFTEQ_ERROR(InvariantViolation);

#undef SHIFTEQ_ERROR

}  // namespace shifteq
