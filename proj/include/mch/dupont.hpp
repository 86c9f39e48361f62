// Whitney elementary forms and the Dupont contraction of Omega_n onto them.
//
// The projection p_n and homotopy s_n are evaluated by expanding their
// operator sums (no precomputed matrices); h^i applications are memoized
// per monomial. Sign conventions are frozen by the exactness tests:
// with the du-leftmost convention of PolyForm::poincare_h, the consistent
// choice is
//     p_n = sum_k        sum_{i_0<..<i_k} w_{i_0..i_k} eps^{i_k} h^{i_{k-1}}..h^{i_0}
//     s_n = sum_k (-1)^k sum_{i_0<..<i_k} w_{i_0..i_k} h^{i_k}..h^{i_0}
// and they satisfy ds_n + s_n d = 1 - p_n together with the side
// conditions s^2 = p s = s i = 0, all verified at construction.

#pragma once

#include <map>
#include <vector>

#include "mch/polyform.hpp"

namespace mch {

// element of W_n: rational coefficients on the nondegenerate faces of the
// n-simplex (faces as strictly increasing vertex sequences)
class WhitneyElement {
public:
    WhitneyElement() : n_(0) {}
    explicit WhitneyElement(int n) : n_(n) {}

    int simplex_dim() const { return n_; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::map<std::vector<int>, Rational>& coeffs() const { return coeffs_; }
    void add(const std::vector<int>& face, const Rational& c);

    WhitneyElement& operator+=(const WhitneyElement& o);
    WhitneyElement& operator*=(const Rational& c);
    friend WhitneyElement operator+(WhitneyElement a, const WhitneyElement& b) { return a += b; }
    friend WhitneyElement operator*(const Rational& c, WhitneyElement a) { return a *= c; }
    bool operator==(const WhitneyElement&) const = default;

private:
    int n_;
    std::map<std::vector<int>, Rational> coeffs_;
};

// w_{i_0...i_k} = k! sum_j (-1)^j t_{i_j} dt_{i_0} .. ^dt_{i_j} .. dt_{i_k}
PolyForm whitney_form(int n, const std::vector<int>& face);

// all nondegenerate faces of the n-simplex, 2^{n+1}-1 of them
std::vector<std::vector<int>> simplex_faces(int n);

// number of operator summands in the expansion of s_n: 2^{n+1} - 2
long dupont_s_term_count(int n);

// Evaluator for p_n, s_n and the memoized h^i on a fixed simplex.
class DupontOps {
public:
    explicit DupontOps(int n);

    int simplex_dim() const { return n_; }

    PolyForm h(int i, const PolyForm& a) const;
    PolyForm s(const PolyForm& a) const;
    PolyForm p(const PolyForm& a) const;
    WhitneyElement p_coeffs(const PolyForm& a) const;
    PolyForm include(const WhitneyElement& w) const;        // i_n
    WhitneyElement small_d(const WhitneyElement& w) const;  // d restricted to W_n

private:
    int n_;
    std::vector<std::vector<int>> faces_;
    std::vector<PolyForm> face_forms_;
    mutable std::map<std::pair<int, FormKey>, PolyForm> hcache_;
};

// Builds the DupontOps for the n-simplex and verifies the contraction
// identities and side conditions exactly on a spanning battery of monomials
// (polynomial degree <= check_degree). Throws VerificationError on failure.
DupontOps dupont_contraction(int n, int check_degree = 2);

}  // namespace mch
