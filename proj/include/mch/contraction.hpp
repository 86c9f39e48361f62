// Contractions of a based filtered complex, the side-condition repair, and
// the standard perturbation formulas at the level of the carrier.

#pragma once

#include "mch/coalgebra.hpp"
#include "mch/linf.hpp"

namespace mch {

struct BasisLetter {
    int idx;
    int degree;
    int weight;
    auto operator<=>(const BasisLetter&) const = default;
};

// contraction data (V, D) -> (W, d) with maps p, i, h over named bases;
// the big space V is the underlying space of a presentation
struct BasedContraction {
    std::vector<BasisVector> small_basis;
    LinearMap D, h;        // on the big space
    LinearMap p;           // big -> small
    LinearMap i;           // small -> big
    LinearMap d_small;     // on the small space

    bool small_is_zero() const { return small_basis.empty(); }

    // exact verification of every axiom on the bases:
    // ip + Dh + hD = 1, pi = 1, h^2 = ph = hi = 0, chain maps, filtration
    void verify(const CurvedLinfPresentation& big) const;

    // curved compatibility: {x} - Dx raises the filtration
    void verify_compatible(const CurvedLinfPresentation& big) const;

    // side-condition repair: h -> (1-ip) h (1-ip), then h -> h D h
    BasedContraction normalized(const CurvedLinfPresentation& big) const;
};

// D_mu = D + mu, h_mu = (1+h mu)^{-1} h, p_mu = p (1+mu h)^{-1},
// i_mu = (1+h mu)^{-1} i, d_mu = d + p (1+mu h)^{-1} mu i, with every
// series a finite sum because mu raises the filtration weight.
struct PerturbedContraction {
    BasedContraction contraction;  // the new (p, i, h, d)
    LinearMap D_mu;                // the perturbed differential on V
};
PerturbedContraction perturb_contraction(const CurvedLinfPresentation& big,
                                         const BasedContraction& c, const LinearMap& mu);

// conversions between sparse elements and letter maps
Elem<BasisLetter> to_letters(const CurvedLinfPresentation& l, const AlgElement& x);
Elem<BasisLetter> to_letters(const std::vector<BasisVector>& basis, const AlgElement& x);
AlgElement from_letters(const Elem<BasisLetter>& e);

// coalgebra ops over a based contraction of a presentation
struct BasedOps {
    using VLetter = BasisLetter;
    using WLetter = BasisLetter;

    const CurvedLinfPresentation* big = nullptr;
    const BasedContraction* c = nullptr;

    Elem<VLetter> bracket(const std::vector<Elem<VLetter>>& args) const {
        std::vector<AlgElement> xs;
        xs.reserve(args.size());
        for (const auto& a : args) xs.push_back(from_letters(a));
        return to_letters(*big, big->bracket(xs));
    }
    Elem<VLetter> applyD(const Elem<VLetter>& x) const {
        return to_letters(*big, c->D.apply(from_letters(x)));
    }
    Elem<VLetter> applyH(const Elem<VLetter>& x) const {
        return to_letters(*big, c->h.apply(from_letters(x)));
    }
    Elem<WLetter> applyP(const Elem<VLetter>& x) const {
        return to_letters(c->small_basis, c->p.apply(from_letters(x)));
    }
    Elem<VLetter> applyI(const Elem<WLetter>& x) const {
        return to_letters(*big, c->i.apply(from_letters(x)));
    }
    Elem<WLetter> applyDSmall(const Elem<WLetter>& x) const {
        return to_letters(c->small_basis, c->d_small.apply(from_letters(x)));
    }
};

}  // namespace mch
