// The curved L-infinity algebra Omega_n (x) L: form-valued elements,
// induced brackets with their Koszul signs, Maurer-Cartan residuals on
// simplices and simplicial restriction.

#pragma once

#include <map>

#include "mch/linf.hpp"
#include "mch/polyform.hpp"

namespace mch {

// finite map from L-basis indices to polynomial forms on the n-simplex
class FormValuedElement {
public:
    FormValuedElement() : n_(0) {}
    explicit FormValuedElement(int n) : n_(n) {}

    int simplex_dim() const { return n_; }
    bool is_zero() const { return c_.empty(); }
    const std::map<int, PolyForm>& coeffs() const { return c_; }
    const PolyForm* coeff(int idx) const;

    void add(int idx, const PolyForm& f);
    FormValuedElement& operator+=(const FormValuedElement& o);
    FormValuedElement& operator-=(const FormValuedElement& o);
    FormValuedElement& operator*=(const Rational& c);
    friend FormValuedElement operator+(FormValuedElement a, const FormValuedElement& b) {
        return a += b;
    }
    friend FormValuedElement operator-(FormValuedElement a, const FormValuedElement& b) {
        return a -= b;
    }
    friend FormValuedElement operator*(const Rational& c, FormValuedElement a) { return a *= c; }
    FormValuedElement operator-() const;
    bool operator==(const FormValuedElement&) const = default;

    // algebra coefficients carried by constant forms
    static FormValuedElement constant(int n, const AlgElement& x);
    // the constant part at a vertex
    AlgElement vertex_value(int i) const;

    // apply a linear operator to every form coefficient (an A (x) 1 action;
    // no Koszul signs are involved on the left factor)
    template <class Fn>
    FormValuedElement map_forms(Fn&& fn) const {
        FormValuedElement out(n_);
        for (const auto& [idx, f] : c_) out.add(idx, fn(f));
        return out;
    }

    // component of total degree d (form degree + L degree)
    FormValuedElement total_degree_component(const CurvedLinfPresentation& l, int d) const;
    // the form-degree-k part
    FormValuedElement form_degree_component(int k) const;
    bool has_total_degree(const CurvedLinfPresentation& l, int d) const;
    int min_weight(const CurvedLinfPresentation& l) const;

private:
    int n_;
    std::map<int, PolyForm> c_;
};

// induced k-ary bracket on Omega_n (x) L; arity 0 is 1 (x) {}, arity 1 is
// d alpha (x) x + (-1)^{|alpha|} alpha (x) {x}, arity >= 2 multiplies the
// forms with the sign (-1)^{sum_{i<j} |x_i||alpha_j|}
FormValuedElement bracket_tensor(const CurvedLinfPresentation& l, int n,
                                 const std::vector<FormValuedElement>& args);

// the unary bracket without the de Rham term (the 1 (x) {.} part)
FormValuedElement unary_l_part(const CurvedLinfPresentation& l, const FormValuedElement& x);

// the de Rham part d (x) 1
FormValuedElement de_rham(const FormValuedElement& x);

// sum_{k <= W} 1/k! {x,...,x}; zero iff x is a simplex of the nerve
FormValuedElement mc_residual_on_simplex(const CurvedLinfPresentation& l, int n,
                                         const FormValuedElement& x);

// coefficient-wise pullback
FormValuedElement restrict_element(const FormValuedElement& x, const AffineSimplexMap& m);

}  // namespace mch
