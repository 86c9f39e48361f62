// Homotopy transfer through a contraction: the transferred curved
// L-infinity structure read off the perturbed codifferential d_mu, the
// comparison morphisms p_mu / i_mu, the induced maps on Maurer-Cartan
// loci, and the gauge-fixed Kuranishi solver.

#pragma once

#include "mch/contraction.hpp"

namespace mch {

struct TransferResult {
    CurvedLinfPresentation transferred;  // on the small basis
    LinfMorphism p_mu;                   // L -> transferred
    LinfMorphism i_mu;                   // transferred -> L
};

// Reads the brackets of the transferred algebra off the length-1 component
// of d_mu on small-basis words, and the morphism components off bold
// p_mu / i_mu likewise. word_len defaults to the cutoff; choosing it
// smaller raises CutoffError when weight-visible words are lost.
TransferResult transfer_structure(const CurvedLinfPresentation& big, const BasedContraction& c,
                                  int word_len = -1, int arity_cap = -1);

// MC(p_mu): the small-side element with exp(y) = bold p_mu exp(x).
// Requires x to have zero residual; when h x = 0 this is just p(x).
AlgElement pushforward_mc(const CurvedLinfPresentation& big, const BasedContraction& c,
                          const AlgElement& x, int word_len = -1);

// MC(i_mu): exp(x) = bold i_mu exp(y)
AlgElement pullback_mc(const CurvedLinfPresentation& big, const BasedContraction& c,
                       const AlgElement& y, int word_len = -1);

// Fixed-point iteration for the gauge-fixed Maurer-Cartan element of a
// contractible algebra: x = Phi(x) = x - h(residual(x)), iterated exactly
// W times from the seed. Verifies h x = 0 and residual = 0 on the result.
AlgElement kuranishi_solve(const CurvedLinfPresentation& big, const BasedContraction& c,
                           const AlgElement& seed = AlgElement());

}  // namespace mch
