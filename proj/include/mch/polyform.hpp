// Polynomial differential forms on the n-simplex, over exact rationals.
//
// A form lives in F[t_0..t_n, dt_0..dt_n] / (t_0+...+t_n - 1, dt_0+...+dt_n).
// Normal form eliminates index 0: t_0 = 1 - sum_{i>=1} t_i and
// dt_0 = -sum_{i>=1} dt_i, so equality is equality of the stored term maps.
// A term is c * t^a * dt_S with a an exponent vector over t_1..t_n and S a
// strictly increasing subset of {1..n}.

#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "mch/errors.hpp"
#include "mch/rational.hpp"

namespace mch {

struct FormKey {
    std::vector<int> exps;  // length n, exponent of t_j at exps[j-1]
    std::vector<int> ds;    // strictly increasing indices in 1..n

    auto operator<=>(const FormKey&) const = default;
    int form_degree() const { return static_cast<int>(ds.size()); }
};

class PolyForm {
public:
    PolyForm() : n_(0) {}
    explicit PolyForm(int n);

    static PolyForm zero(int n) { return PolyForm(n); }
    static PolyForm constant(int n, const Rational& c);
    // t_j resp. dt_j for j in 0..n; j = 0 expands to the normal form.
    static PolyForm coordinate(int n, int j);
    static PolyForm coordinate_diff(int n, int j);
    static PolyForm monomial(int n, std::vector<int> exps, std::vector<int> ds, const Rational& c);

    int simplex_dim() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<FormKey, Rational>& terms() const { return terms_; }

    PolyForm& operator+=(const PolyForm& o);
    PolyForm& operator-=(const PolyForm& o);
    PolyForm& operator*=(const Rational& c);
    friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
    friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
    friend PolyForm operator*(PolyForm a, const Rational& c) { return a *= c; }
    friend PolyForm operator*(const Rational& c, PolyForm a) { return a *= c; }
    PolyForm operator-() const;
    bool operator==(const PolyForm& o) const = default;

    // graded-commutative product; throws InputError on dimension mismatch
    friend PolyForm wedge(const PolyForm& a, const PolyForm& b);
    friend PolyForm operator*(const PolyForm& a, const PolyForm& b) { return wedge(a, b); }

    PolyForm d() const;

    // evaluation of the 0-form component at vertex e_i
    Rational eval_vertex(int i) const;

    // Poincare homotopy h^i: substitute the dilation flow centered at e_i,
    // extract du (moved leftmost), integrate over u in [0,1].
    PolyForm poincare_h(int i) const;

    PolyForm form_degree_component(int k) const;
    int max_form_degree() const;
    int max_poly_degree() const;
    // -1 for the zero form
    int homogeneous_degree() const;

    void add_term(const FormKey& k, const Rational& c);

private:
    int n_;
    std::map<FormKey, Rational> terms_;
};

// Affine map between simplices, as the assignment of every target
// barycentric coordinate to an affine-rational expression in the source
// coordinates. Covers faces, degeneracies and the vertex collapses.
class AffineSimplexMap {
public:
    struct Expr {
        Rational constant;
        std::vector<Rational> coeff;  // length src, coefficient of t_i at coeff[i-1]
    };

    AffineSimplexMap(int src_dim, int tgt_dim, std::vector<Expr> rows);

    // vertex r of the source goes to vertex img[r] of the target
    static AffineSimplexMap from_vertex_map(int src_dim, int tgt_dim, const std::vector<int>& img);
    static AffineSimplexMap identity(int n);
    // delta_j : face opposite vertex j
    static AffineSimplexMap face(int n, int j);
    // s_j : collapses vertices j, j+1
    static AffineSimplexMap degeneracy(int n, int j);
    static AffineSimplexMap vertex(int n, int i);
    // sigma_{i,J} : sends the vertices in J to vertex i, fixes the rest
    static AffineSimplexMap collapse(int n, int i, const std::vector<int>& J);

    int source_dim() const { return src_; }
    int target_dim() const { return tgt_; }

    // outer(*this(x)) as a single map
    AffineSimplexMap then(const AffineSimplexMap& outer) const;

    // pullback of t_j as a 0-form on the source
    PolyForm coordinate_pullback(int j) const;

    bool operator==(const AffineSimplexMap&) const = default;

private:
    int src_, tgt_;
    std::vector<Expr> rows_;  // size tgt_+1, index j = target coordinate t_j
};

PolyForm pullback(const AffineSimplexMap& m, const PolyForm& a);

std::string to_string(const PolyForm& a);

}  // namespace mch
