// The gauge locus gamma, the holonomy retraction rho, horn and thin
// fillers, thinness checks, and the classical-Lie adapters with the BCH
// oracle that ties the simplicial machinery to group theory.
//
// The grading shift between Lie algebras and the bracket-degree-+1
// convention is confined to the two adapters below: a nilpotent Lie
// algebra sits in degree -1 with {x,y} = -[x,y]; its cone adds a degree -2
// copy with the identity differential as the unary bracket.

#pragma once

#include "mch/dupont.hpp"
#include "mch/form_family.hpp"
#include "mch/tensor.hpp"

namespace mch {

// nilpotent Lie algebra data: weighted basis and antisymmetric brackets
class LieAlgebra {
public:
    LieAlgebra() = default;
    LieAlgebra(std::vector<std::pair<std::string, int>> basis, int nilpotency_class);

    int dim() const { return static_cast<int>(basis_.size()); }
    int weight(int i) const { return basis_[i].second; }
    const std::string& name(int i) const { return basis_[i].first; }
    int nilpotency_class() const { return class_; }
    int index_of(const std::string& name) const;

    void set_bracket(const std::string& x, const std::string& y, const AlgElement& out);
    AlgElement bracket(const AlgElement& x, const AlgElement& y) const;

    // antisymmetry is structural; reports Jacobi and weight violations
    ValidationReport validate() const;

    static LieAlgebra heisenberg();
    // free 3-step nilpotent on two generators: x, y, [x,y], [x,[x,y]], [y,[x,y]]
    static LieAlgebra free_nilpotent3();

private:
    std::vector<std::pair<std::string, int>> basis_;
    std::map<std::string, int> index_;
    std::map<std::pair<int, int>, AlgElement> brackets_;  // keys i < j
    int class_ = 1;
};

// truncated Baker-Campbell-Hausdorff series through the stated depth (<= 4)
AlgElement bch_oracle(const LieAlgebra& g, const AlgElement& x, const AlgElement& y, int depth);

// the shift adapters
CurvedLinfPresentation lie_to_linf(const LieAlgebra& g);
// cone: two copies per generator, L-degrees -1 and -2, unary = identity
CurvedLinfPresentation cone_linf(const LieAlgebra& g);
// names of the two copies used by cone_linf
std::string cone_name_deg1(const std::string& base);
std::string cone_name_deg2(const std::string& base);

struct SimplexInNerve {
    int n = 0;
    FormValuedElement x;
};

// builds a simplex after checking the residual vanishes exactly
SimplexInNerve make_simplex(const CurvedLinfPresentation& l, int n, FormValuedElement x);

// s_n applied coefficient-wise vanishes
bool gamma_check(const CurvedLinfPresentation& l, const SimplexInNerve& s);

// the top form-degree component vanishes
bool is_thin(const CurvedLinfPresentation& l, const SimplexInNerve& s);

// Maurer-Cartan element of the transferred structure on W_n (x) L:
// rational coefficients on (face, basis vector) pairs
using WhitneySection = std::map<std::pair<std::vector<int>, int>, Rational>;

// MC(p_mu) for the Dupont contraction tensored with L
WhitneySection nerve_pushforward(const CurvedLinfPresentation& l, const SimplexInNerve& s);
// MC(i_mu): the gauge-locus representative of a transferred element
SimplexInNerve nerve_pullback(const CurvedLinfPresentation& l, int n, const WhitneySection& y);

// holonomy: pushforward along the Dupont contraction of Omega_n (x) L and
// re-embedding on the gauge locus; a retraction onto gamma
SimplexInNerve rho(const CurvedLinfPresentation& l, const SimplexInNerve& s);

// horn of Maurer-Cartan data: faces j != missing, each on the (n-1)-simplex
struct MCHorn {
    int n = 0;
    int missing = 1;
    std::map<int, FormValuedElement> faces;
};

// thin filler by the gauge iteration x_{k+1} = x_0 - sum P{x_k...}/l!;
// restricts to the horn exactly and is Maurer-Cartan
SimplexInNerve fill_horn(const CurvedLinfPresentation& l, const MCHorn& horn,
                         const FormValuedElement* seed = nullptr);

// restriction of a simplex to a face
SimplexInNerve face_of(const CurvedLinfPresentation& l, const SimplexInNerve& s, int j);

}  // namespace mch
