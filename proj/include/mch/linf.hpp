// Finitely presented nilpotent curved L-infinity algebras.
//
// Conventions: all brackets have degree +1 and are graded symmetric; the
// 0-ary bracket is the curvature. Basis vectors carry a filtration weight
// >= 1; a k-bracket output has weight >= the sum of the input weights, and
// everything of weight > the cutoff W is truncated to zero. Those two
// facts make every series in this library a finite sum.
//
// Structure constants are stored on sorted index tuples; evaluation on
// arbitrary tuples sorts with the shared Koszul sign routine.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mch/errors.hpp"
#include "mch/graded.hpp"
#include "mch/rational.hpp"

namespace mch {

struct BasisVector {
    std::string name;
    int degree = 0;
    int weight = 1;
    bool operator==(const BasisVector&) const = default;
};

// sparse linear combination of basis vectors (indices into a presentation)
class AlgElement {
public:
    AlgElement() = default;

    bool is_zero() const { return c_.empty(); }
    const std::map<int, Rational>& coeffs() const { return c_; }
    void add(int idx, const Rational& c);
    Rational coeff(int idx) const;

    AlgElement& operator+=(const AlgElement& o);
    AlgElement& operator-=(const AlgElement& o);
    AlgElement& operator*=(const Rational& c);
    friend AlgElement operator+(AlgElement a, const AlgElement& b) { return a += b; }
    friend AlgElement operator-(AlgElement a, const AlgElement& b) { return a -= b; }
    friend AlgElement operator*(const Rational& c, AlgElement a) { return a *= c; }
    AlgElement operator-() const;
    bool operator==(const AlgElement&) const = default;

    static AlgElement unit(int idx, const Rational& c = 1);

private:
    std::map<int, Rational> c_;
};

// symmetric multilinear structure constants of one arity
class SymMap {
public:
    SymMap() : arity_(0) {}
    explicit SymMap(int arity) : arity_(arity) {}

    int arity() const { return arity_; }
    bool empty() const { return rows_.empty(); }
    const std::map<std::vector<int>, AlgElement>& rows() const { return rows_; }

    void set(std::vector<int> sorted_tuple, AlgElement value);
    const AlgElement* find(const std::vector<int>& sorted_tuple) const;
    bool operator==(const SymMap&) const = default;

private:
    int arity_;
    std::map<std::vector<int>, AlgElement> rows_;
};

struct Violation {
    std::string kind;    // "symmetry", "jacobi", "degree", "weight", "morphism", ...
    int n = 0;           // identity level or arity
    std::vector<std::string> tuple;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> items;
    bool ok() const { return items.empty(); }
};

class CurvedLinfPresentation {
public:
    CurvedLinfPresentation() = default;
    CurvedLinfPresentation(std::vector<BasisVector> basis, int cutoff_w, int arity_cap);

    int dim() const { return static_cast<int>(basis_.size()); }
    int cutoff() const { return cutoff_w_; }
    int arity_cap() const { return arity_cap_; }
    const std::vector<BasisVector>& basis() const { return basis_; }
    const BasisVector& basis_vector(int i) const { return basis_.at(i); }
    int index_of(const std::string& name) const;

    void set_bracket(const std::vector<std::string>& in, const AlgElement& out);
    void set_bracket_indices(std::vector<int> tuple, AlgElement out);
    const SymMap* bracket_map(int arity) const;

    // k-ary bracket, multilinear expansion over the supports
    AlgElement bracket(const std::vector<AlgElement>& args) const;
    AlgElement bracket_basis(std::vector<int> tuple) const;
    AlgElement curvature() const;

    // sum_{n <= W} 1/n! {x,...,x}; zero iff x is Maurer-Cartan
    AlgElement curvature_residual(const AlgElement& x) const;

    // the weight-graded part of the unary bracket: a differential D with
    // {x} - Dx raising the filtration
    AlgElement graded_unary(const AlgElement& x) const;

    int degree_of(const AlgElement& x) const;     // throws if mixed
    int min_weight(const AlgElement& x) const;    // W+1 for zero
    AlgElement degree_component(const AlgElement& x, int d) const;
    // drop all components of weight > w
    AlgElement truncate_weight(AlgElement x, int w) const;

    ValidationReport validate(int max_n = -1) const;

    std::string tuple_names(const std::vector<int>& tuple) const;

    bool operator==(const CurvedLinfPresentation&) const = default;

private:
    std::vector<BasisVector> basis_;
    std::map<std::string, int> index_;
    std::vector<SymMap> brackets_;  // by arity, 0..arity_cap
    int cutoff_w_ = 1;
    int arity_cap_ = 2;
};

class LinfMorphism {
public:
    LinfMorphism() = default;
    LinfMorphism(CurvedLinfPresentation source, CurvedLinfPresentation target, int arity_cap);

    static LinfMorphism identity(const CurvedLinfPresentation& l);
    static LinfMorphism strict(CurvedLinfPresentation source, CurvedLinfPresentation target,
                               const std::map<std::string, AlgElement>& linear);

    const CurvedLinfPresentation& source() const { return source_; }
    const CurvedLinfPresentation& target() const { return target_; }
    int arity_cap() const { return arity_cap_; }
    bool is_strict() const;

    void set_component(const std::vector<std::string>& in, const AlgElement& out);
    void set_component_indices(int arity, std::vector<int> tuple, AlgElement out);
    const SymMap* component_map(int arity) const;

    AlgElement component(const std::vector<AlgElement>& args) const;
    AlgElement component_basis(int arity, std::vector<int> tuple) const;
    AlgElement linear(const AlgElement& x) const;  // f_(1)

    // action on Maurer-Cartan elements: sum_k 1/k! f_(k)(x..x)
    AlgElement act(const AlgElement& x) const;

    bool operator==(const LinfMorphism&) const = default;

private:
    CurvedLinfPresentation source_, target_;
    std::vector<SymMap> comps_;
    int arity_cap_ = 2;
};

// the morphism identity, checked on basis tuples up to level max_n
ValidationReport validate_morphism(const LinfMorphism& f, int max_n = -1);

// composition g . f with the symmetrized partition formula; throws
// CutoffError if arities above the result cap still carry nonzero
// components of weight <= W
LinfMorphism compose_morphisms(const LinfMorphism& g, const LinfMorphism& f,
                               std::optional<int> result_cap = std::nullopt);

// filtered linear map between presentations, by basis columns
class LinearMap {
public:
    LinearMap() = default;
    LinearMap(const CurvedLinfPresentation* src, const CurvedLinfPresentation* tgt)
        : src_(src), tgt_(tgt) {}

    void set_column(int src_idx, AlgElement img);
    const std::map<int, AlgElement>& columns() const { return cols_; }
    AlgElement apply(const AlgElement& x) const;

private:
    const CurvedLinfPresentation* src_ = nullptr;
    const CurvedLinfPresentation* tgt_ = nullptr;
    std::map<int, AlgElement> cols_;
};

struct FiberedProduct {
    CurvedLinfPresentation total;        // on pL x N
    LinfMorphism to_base_strict;         // F : P -> N
    LinfMorphism to_fiber;               // G : P -> L
    // names of the P-basis split: indices of the pL part and the N part
    std::vector<int> pl_indices, n_indices;
};

// Pullback of g : N -> M along the fibration f : L -> M, certified by a
// section s of f_(1). The bracket on P = pL x N is produced by projecting
// the compatibility equation; G is gauge-fixed by p G_(1) = p, p G_(n) = 0.
FiberedProduct fibered_product(const LinfMorphism& f, const LinearMap& section,
                               const LinfMorphism& g);

// --- shared partition machinery (used by compose, fibered products, the
// --- coalgebra differential and the validators) ---

// Visits every assignment of n positions to k ordered blocks (empty blocks
// allowed) together with the Koszul sign of regrouping symbols of the given
// degrees by block. cb(blocks, sign).
void for_each_ordered_partition(
    int n, int k, const std::vector<int>& degrees,
    const std::function<void(const std::vector<std::vector<int>>&, int)>& cb);

// Visits every subset of {0..n-1} of size k with its unshuffle sign.
void for_each_subset(int n, int k, const std::vector<int>& degrees,
                     const std::function<void(const std::vector<int>&, int)>& cb);

}  // namespace mch
