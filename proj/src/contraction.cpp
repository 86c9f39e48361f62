#include "mch/contraction.hpp"

#include <string>

namespace mch {

Elem<BasisLetter> to_letters(const CurvedLinfPresentation& l, const AlgElement& x) {
    Elem<BasisLetter> out;
    for (const auto& [i, c] : x.coeffs()) {
        const auto& b = l.basis_vector(i);
        elem_add(out, BasisLetter{i, b.degree, b.weight}, c);
    }
    return out;
}

Elem<BasisLetter> to_letters(const std::vector<BasisVector>& basis, const AlgElement& x) {
    Elem<BasisLetter> out;
    for (const auto& [i, c] : x.coeffs()) {
        const auto& b = basis.at(i);
        elem_add(out, BasisLetter{i, b.degree, b.weight}, c);
    }
    return out;
}

AlgElement from_letters(const Elem<BasisLetter>& e) {
    AlgElement out;
    for (const auto& [l, c] : e) out.add(l.idx, c);
    return out;
}

namespace {

void check_map_shape(const std::vector<BasisVector>& src, const std::vector<BasisVector>& tgt,
                     const LinearMap& f, int degree_shift, const std::string& name) {
    for (const auto& [i, img] : f.columns()) {
        const auto& b = src.at(i);
        for (const auto& [j, c] : img.coeffs()) {
            const auto& t = tgt.at(j);
            if (t.degree != b.degree + degree_shift)
                throw VerificationError(name + " is not of degree " + std::to_string(degree_shift));
            if (t.weight < b.weight)
                throw VerificationError(name + " does not respect the filtration");
        }
    }
}

}  // namespace

void BasedContraction::verify(const CurvedLinfPresentation& big) const {
    check_map_shape(big.basis(), big.basis(), D, 1, "D");
    check_map_shape(big.basis(), big.basis(), h, -1, "h");
    check_map_shape(big.basis(), small_basis, p, 0, "p");
    check_map_shape(small_basis, big.basis(), i, 0, "i");
    check_map_shape(small_basis, small_basis, d_small, 1, "d");

    for (int b = 0; b < big.dim(); ++b) {
        AlgElement v = AlgElement::unit(b);
        AlgElement lhs = i.apply(p.apply(v)) + D.apply(h.apply(v)) + h.apply(D.apply(v));
        if (!(lhs == v)) throw VerificationError("ip + Dh + hD != 1 at " + big.basis_vector(b).name);
        if (!h.apply(h.apply(v)).is_zero())
            throw VerificationError("h^2 != 0 at " + big.basis_vector(b).name);
        if (!p.apply(h.apply(v)).is_zero())
            throw VerificationError("p h != 0 at " + big.basis_vector(b).name);
        if (!D.apply(D.apply(v)).is_zero())
            throw VerificationError("D^2 != 0 at " + big.basis_vector(b).name);
        if (!(p.apply(D.apply(v)) == d_small.apply(p.apply(v))))
            throw VerificationError("p is not a chain map at " + big.basis_vector(b).name);
    }
    for (std::size_t w = 0; w < small_basis.size(); ++w) {
        AlgElement v = AlgElement::unit(static_cast<int>(w));
        if (!(p.apply(i.apply(v)) == v))
            throw VerificationError("pi != 1 at " + small_basis[w].name);
        if (!h.apply(i.apply(v)).is_zero())
            throw VerificationError("h i != 0 at " + small_basis[w].name);
        if (!(D.apply(i.apply(v)) == i.apply(d_small.apply(v))))
            throw VerificationError("i is not a chain map at " + small_basis[w].name);
    }
}

void BasedContraction::verify_compatible(const CurvedLinfPresentation& big) const {
    for (int b = 0; b < big.dim(); ++b) {
        AlgElement diff = big.bracket_basis({b}) - D.apply(AlgElement::unit(b));
        if (!diff.is_zero() && big.min_weight(diff) <= big.basis_vector(b).weight)
            throw VerificationError("{x} - Dx does not raise the filtration at " +
                                    big.basis_vector(b).name);
    }
}

BasedContraction BasedContraction::normalized(const CurvedLinfPresentation& big) const {
    auto ip = [&](const AlgElement& x) { return i.apply(p.apply(x)); };
    BasedContraction out = *this;
    LinearMap h1;
    for (int b = 0; b < big.dim(); ++b) {
        AlgElement v = AlgElement::unit(b);
        // h -> (1 - ip) h (1 - ip)
        AlgElement y = v - ip(v);
        y = h.apply(y);
        y -= ip(y);
        h1.set_column(b, y);
    }
    LinearMap h2;
    for (int b = 0; b < big.dim(); ++b) {
        AlgElement v = AlgElement::unit(b);
        h2.set_column(b, h1.apply(D.apply(h1.apply(v))));
    }
    out.h = std::move(h2);
    return out;
}

PerturbedContraction perturb_contraction(const CurvedLinfPresentation& big,
                                         const BasedContraction& c, const LinearMap& mu) {
    // mu must raise the filtration weight so the geometric series end
    for (const auto& [i, img] : mu.columns()) {
        if (img.is_zero()) continue;
        if (big.min_weight(img) <= big.basis_vector(i).weight)
            throw InputError("mu does not raise the filtration weight at " +
                             big.basis_vector(i).name);
        if (big.degree_of(img) != big.basis_vector(i).degree + 1)
            throw InputError("mu is not of degree +1 at " + big.basis_vector(i).name);
    }
    const int w = big.cutoff();

    auto series = [&](const AlgElement& x0, auto&& step) {
        AlgElement total = x0, cur = x0;
        for (int j = 0; j < w && !cur.is_zero(); ++j) {
            cur = step(cur);
            cur *= Rational(-1);
            total += cur;
        }
        return total;
    };
    auto inv_mu_h = [&](const AlgElement& x) {  // (1 + mu h)^{-1}
        return series(x, [&](const AlgElement& y) { return mu.apply(c.h.apply(y)); });
    };
    auto inv_h_mu = [&](const AlgElement& x) {  // (1 + h mu)^{-1}
        return series(x, [&](const AlgElement& y) { return c.h.apply(mu.apply(y)); });
    };

    PerturbedContraction out;
    out.contraction.small_basis = c.small_basis;
    for (int b = 0; b < big.dim(); ++b) {
        AlgElement v = AlgElement::unit(b);
        out.D_mu.set_column(b, c.D.apply(v) + mu.apply(v));
        out.contraction.h.set_column(b, inv_h_mu(c.h.apply(v)));
        out.contraction.p.set_column(b, c.p.apply(inv_mu_h(v)));
    }
    out.contraction.D = out.D_mu;
    for (std::size_t wdx = 0; wdx < c.small_basis.size(); ++wdx) {
        AlgElement v = AlgElement::unit(static_cast<int>(wdx));
        out.contraction.i.set_column(static_cast<int>(wdx), inv_h_mu(c.i.apply(v)));
        out.contraction.d_small.set_column(
            static_cast<int>(wdx),
            c.d_small.apply(v) + c.p.apply(inv_mu_h(mu.apply(c.i.apply(v)))));
    }
    return out;
}

}  // namespace mch
