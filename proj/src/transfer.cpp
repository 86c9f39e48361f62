#include "mch/transfer.hpp"

#include <algorithm>
namespace mch {

namespace {

void for_each_multiset(int dim, int size, const std::function<void(const std::vector<int>&)>& cb) {
    std::vector<int> tuple(size);
    auto rec = [&](auto&& self, int pos, int lo) -> void {
        if (pos == size) {
            cb(tuple);
            return;
        }
        for (int i = lo; i < dim; ++i) {
            tuple[pos] = i;
            self(self, pos + 1, i);
        }
    };
    rec(rec, 0, 0);
}

Word<BasisLetter> basis_word(const std::vector<BasisVector>& basis,
                             const std::vector<int>& tuple) {
    std::vector<BasisLetter> ls;
    ls.reserve(tuple.size());
    for (int i : tuple) ls.push_back(BasisLetter{i, basis[i].degree, basis[i].weight});
    return Word<BasisLetter>{std::move(ls)};
}

bool has_repeated_odd(const std::vector<BasisVector>& basis, const std::vector<int>& tuple) {
    for (std::size_t i = 0; i + 1 < tuple.size(); ++i)
        if (tuple[i] == tuple[i + 1] && (basis[tuple[i]].degree & 1)) return true;
    return false;
}

int word_weight_bound(const std::vector<BasisVector>& basis, const std::vector<int>& tuple) {
    int w = 0;
    for (int i : tuple) w += basis[i].weight;
    return w;
}

}  // namespace

TransferResult transfer_structure(const CurvedLinfPresentation& big, const BasedContraction& c,
                                  int word_len, int arity_cap) {
    c.verify(big);
    c.verify_compatible(big);
    const int w = big.cutoff();
    const int n = word_len < 0 ? w : word_len;
    // arity-k components carry weight >= k, so everything above the cutoff
    // vanishes; clamp the read-off there
    const int cap = std::min(arity_cap < 0 ? big.arity_cap() : arity_cap, w);

    BasedOps ops{&big, &c};
    Coalgebra<BasedOps> co(ops, n, w);

    CurvedLinfPresentation small(c.small_basis, w, cap);
    // brackets: length-1 part of d_mu on small-basis words
    for (int k = 0; k <= cap; ++k) {
        for_each_multiset(static_cast<int>(c.small_basis.size()), k,
                          [&](const std::vector<int>& tuple) {
                              if (has_repeated_odd(c.small_basis, tuple)) return;
                              if (word_weight_bound(c.small_basis, tuple) > w) return;
                              WordSum<BasisLetter> ws;
                              ws.emplace(basis_word(c.small_basis, tuple), Rational(1));
                              AlgElement value = from_letters(co.proj1(co.d_mu(ws)));
                              if (!value.is_zero()) small.set_bracket_indices(tuple, value);
                          });
    }

    TransferResult out;
    out.p_mu = LinfMorphism(big, small, cap);
    for (int k = 0; k <= cap; ++k) {
        for_each_multiset(big.dim(), k, [&](const std::vector<int>& tuple) {
            if (has_repeated_odd(big.basis(), tuple)) return;
            if (word_weight_bound(big.basis(), tuple) > w) return;
            WordSum<BasisLetter> ws;
            ws.emplace(basis_word(big.basis(), tuple), Rational(1));
            AlgElement value = from_letters(co.proj1(co.p_mu(ws)));
            if (!value.is_zero()) out.p_mu.set_component_indices(k, tuple, value);
        });
    }
    out.i_mu = LinfMorphism(small, big, cap);
    for (int k = 0; k <= cap; ++k) {
        for_each_multiset(static_cast<int>(c.small_basis.size()), k,
                          [&](const std::vector<int>& tuple) {
                              if (has_repeated_odd(c.small_basis, tuple)) return;
                              if (word_weight_bound(c.small_basis, tuple) > w) return;
                              WordSum<BasisLetter> ws;
                              ws.emplace(basis_word(c.small_basis, tuple), Rational(1));
                              AlgElement value = from_letters(co.proj1(co.i_mu(ws)));
                              if (!value.is_zero()) out.i_mu.set_component_indices(k, tuple, value);
                          });
    }
    out.transferred = std::move(small);
    return out;
}

AlgElement pushforward_mc(const CurvedLinfPresentation& big, const BasedContraction& c,
                          const AlgElement& x, int word_len) {
    if (!big.curvature_residual(x).is_zero())
        throw InputError("pushforward: the element is not Maurer-Cartan");
    const int n = word_len < 0 ? big.cutoff() : word_len;
    BasedOps ops{&big, &c};
    Coalgebra<BasedOps> co(ops, n, big.cutoff());
    auto ws = co.exp_trunc(to_letters(big, x));
    return from_letters(co.proj1(co.bold_p(co.inv_one_plus_mu_h(ws))));
}

AlgElement pullback_mc(const CurvedLinfPresentation& big, const BasedContraction& c,
                       const AlgElement& y, int word_len) {
    const int n = word_len < 0 ? big.cutoff() : word_len;
    BasedOps ops{&big, &c};
    Coalgebra<BasedOps> co(ops, n, big.cutoff());
    // bold i exp(y) = exp(i y)
    auto ws = co.exp_trunc(to_letters(big, c.i.apply(y)));
    return from_letters(co.proj1(co.inv_one_plus_h_mu(ws)));
}

AlgElement kuranishi_solve(const CurvedLinfPresentation& big, const BasedContraction& c,
                           const AlgElement& seed) {
    if (!c.small_is_zero())
        throw InputError("kuranishi: the contraction must land on the zero algebra");
    BasedContraction cc = c;
    bool h_square_zero = true;
    for (int b = 0; b < big.dim() && h_square_zero; ++b)
        if (!c.h.apply(c.h.apply(AlgElement::unit(b))).is_zero()) h_square_zero = false;
    if (!h_square_zero) cc = c.normalized(big);
    cc.verify(big);
    cc.verify_compatible(big);
    if (!cc.h.apply(seed).is_zero())
        throw InputError("kuranishi: seeds must satisfy the gauge condition h(seed) = 0");

    AlgElement x = seed;
    for (int k = 0; k < big.cutoff(); ++k) x = x - cc.h.apply(big.curvature_residual(x));
    if (!big.curvature_residual(x).is_zero())
        throw VerificationError("kuranishi: the residual did not vanish after W iterations");
    if (!cc.h.apply(x).is_zero())
        throw VerificationError("kuranishi: the gauge condition h x = 0 failed");
    return x;
}

}  // namespace mch
