// Exact rational scalars for the whole library.
//
// Everything downstream assumes exact arithmetic: equality of forms,
// brackets and residuals is syntactic equality of normalized terms.
// GMP's mpq_class keeps values canonical (lowest terms, positive
// denominator) through arithmetic.

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mch {

using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Parses "p", "-p/q" style strings (the JSON wire format).
inline Rational rat_parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
}

inline std::string rat_str(const Rational& r) { return r.get_str(); }

inline bool is_zero(const Rational& r) { return sgn(r) == 0; }

inline Rational rat_factorial(int n) {
    Rational r = 1;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

inline Rational rat_binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    Rational r = 1;
    for (int j = 0; j < k; ++j) {
        r *= (n - j);
        r /= (j + 1);
    }
    return r;
}

}  // namespace mch
