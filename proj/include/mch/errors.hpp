#pragma once

#include <stdexcept>
#include <string>

namespace mch {

// Malformed or inconsistent input data (dimension mismatch, bad family, ...).
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A truncation (weight cutoff, arity cap, word length) would silently lose
// nonzero terms. Always raised, never swallowed.
struct CutoffError : std::runtime_error {
    explicit CutoffError(const std::string& what) : std::runtime_error(what) {}
};

// An identity that must hold exactly (contraction axiom, MC residual,
// restriction compatibility) failed.
struct VerificationError : std::runtime_error {
    explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mch
