// Test-only generators: deterministic pseudo-random rationals, random
// filtered automorphisms, valid-by-construction contractions and curved
// structures (via conjugation of a trivial codifferential by a coalgebra
// automorphism, which preserves the square-zero property exactly).

#pragma once

#include "mch/contraction.hpp"
#include "mch/coalgebra.hpp"
#include "mch/linf.hpp"

namespace mch::testgen {

struct Rng {
    unsigned long state;
    explicit Rng(unsigned long seed = 0x243f6a8885a308d3ull) : state(seed) {}
    unsigned long next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    long pick(long lo, long hi) { return lo + static_cast<long>(next() % (hi - lo + 1)); }
    Rational coef() { return rat(pick(-4, 4), pick(1, 3)); }
    Rational coef_nonzero() {
        Rational c = coef();
        return mch::is_zero(c) ? rat(1) : c;
    }
};

// a pair-plus-harmonics contraction: for every small-basis vector a
// harmonic copy, for every pair (a, b = Da) a homotopy h b = a
struct ContractionSpec {
    std::vector<BasisVector> pairs;      // the degree/weight of each 'a'; 'b' gets degree+1
    std::vector<BasisVector> harmonics;  // copied into the small basis
};

struct BuiltContraction {
    CurvedLinfPresentation big;  // abelian placeholder carrying the basis
    BasedContraction c;
};

inline BuiltContraction build_contraction(const ContractionSpec& spec, int cutoff, int arity_cap) {
    std::vector<BasisVector> basis;
    for (std::size_t k = 0; k < spec.pairs.size(); ++k) {
        const auto& a = spec.pairs[k];
        basis.push_back({a.name + "_a", a.degree, a.weight});
        basis.push_back({a.name + "_b", a.degree + 1, a.weight});
    }
    for (const auto& hvec : spec.harmonics) basis.push_back(hvec);

    BuiltContraction out{CurvedLinfPresentation(basis, cutoff, arity_cap), {}};
    out.c.small_basis = spec.harmonics;
    const int npairs = static_cast<int>(spec.pairs.size());
    for (int k = 0; k < npairs; ++k) {
        out.c.D.set_column(2 * k, AlgElement::unit(2 * k + 1));
        out.c.h.set_column(2 * k + 1, AlgElement::unit(2 * k));
    }
    for (std::size_t j = 0; j < spec.harmonics.size(); ++j) {
        out.c.i.set_column(static_cast<int>(j), AlgElement::unit(2 * npairs + static_cast<int>(j)));
        out.c.p.set_column(2 * npairs + static_cast<int>(j), AlgElement::unit(static_cast<int>(j)));
    }
    return out;
}

// random filtered degree-0 automorphism g = 1 + (strictly weight-raising)
inline LinearMap random_automorphism(Rng& rng, const CurvedLinfPresentation& l) {
    LinearMap g;
    for (int i = 0; i < l.dim(); ++i) {
        AlgElement col = AlgElement::unit(i);
        for (int j = 0; j < l.dim(); ++j) {
            if (l.basis_vector(j).weight > l.basis_vector(i).weight &&
                l.basis_vector(j).degree == l.basis_vector(i).degree && rng.pick(0, 1))
                col.add(j, rng.coef());
        }
        g.set_column(i, col);
    }
    return g;
}

inline LinearMap invert_unipotent(const CurvedLinfPresentation& l, const LinearMap& g) {
    // g = 1 + nu with nu weight-raising: g^{-1} = sum (-nu)^k
    LinearMap inv;
    for (int i = 0; i < l.dim(); ++i) {
        AlgElement v = AlgElement::unit(i);
        AlgElement total = v, cur = v;
        for (int k = 0; k < l.cutoff(); ++k) {
            cur = g.apply(cur) - cur;  // nu applied
            cur *= Rational(-1);
            if (cur.is_zero()) break;
            total += cur;
        }
        inv.set_column(i, total);
    }
    return inv;
}

// conjugate a contraction by a filtered automorphism; all axioms survive
inline BasedContraction conjugate(const CurvedLinfPresentation& l, const BasedContraction& c,
                                  const LinearMap& g) {
    LinearMap ginv = invert_unipotent(l, g);
    BasedContraction out;
    out.small_basis = c.small_basis;
    for (int i = 0; i < l.dim(); ++i) {
        AlgElement v = AlgElement::unit(i);
        out.D.set_column(i, g.apply(c.D.apply(ginv.apply(v))));
        out.h.set_column(i, g.apply(c.h.apply(ginv.apply(v))));
        out.p.set_column(i, c.p.apply(ginv.apply(v)));
    }
    for (std::size_t j = 0; j < c.small_basis.size(); ++j) {
        AlgElement w = AlgElement::unit(static_cast<int>(j));
        out.i.set_column(static_cast<int>(j), g.apply(c.i.apply(w)));
        out.d_small.set_column(static_cast<int>(j), c.d_small.apply(w));
    }
    return out;
}

// random bracket data on the carrier of `big` whose unary part is D plus a
// weight-raising perturbation and whose higher arities respect degree and
// weight but satisfy no Jacobi identity (enough for the coalgebra laws)
inline CurvedLinfPresentation random_coderivation_brackets(Rng& rng,
                                                           const CurvedLinfPresentation& big,
                                                           const BasedContraction& c,
                                                           int max_arity) {
    CurvedLinfPresentation out(big.basis(), big.cutoff(), std::max(max_arity, 1));
    // curvature: a random degree 1 element (any weight >= 1)
    AlgElement curv;
    for (int j = 0; j < big.dim(); ++j)
        if (big.basis_vector(j).degree == 1 && rng.pick(0, 1)) curv.add(j, rng.coef());
    if (!curv.is_zero()) out.set_bracket_indices({}, curv);
    // unary: D + strictly weight-raising
    for (int i = 0; i < big.dim(); ++i) {
        AlgElement u = c.D.apply(AlgElement::unit(i));
        for (int j = 0; j < big.dim(); ++j) {
            if (big.basis_vector(j).degree == big.basis_vector(i).degree + 1 &&
                big.basis_vector(j).weight > big.basis_vector(i).weight && rng.pick(0, 1))
                u.add(j, rng.coef());
        }
        if (!u.is_zero()) out.set_bracket_indices({i}, u);
    }
    // higher arities: random, degree Sigma+1, weight >= Sigma
    for (int k = 2; k <= max_arity; ++k) {
        std::vector<int> tuple(k);
        auto rec = [&](auto&& self, int pos, int lo) -> void {
            if (pos == k) {
                int dsum = 1, wsum = 0;
                for (int i : tuple) {
                    dsum += big.basis_vector(i).degree;
                    wsum += big.basis_vector(i).weight;
                }
                bool repodd = false;
                for (int i = 0; i + 1 < k; ++i)
                    if (tuple[i] == tuple[i + 1] && (big.basis_vector(tuple[i]).degree & 1))
                        repodd = true;
                if (repodd || wsum > big.cutoff()) return;
                AlgElement v;
                for (int j = 0; j < big.dim(); ++j)
                    if (big.basis_vector(j).degree == dsum && big.basis_vector(j).weight >= wsum &&
                        rng.pick(0, 2) == 0)
                        v.add(j, rng.coef());
                if (!v.is_zero()) out.set_bracket_indices(tuple, v);
                return;
            }
            for (int i = lo; i < big.dim(); ++i) {
                tuple[pos] = i;
                self(self, pos + 1, i);
            }
        };
        rec(rec, 0, 0);
    }
    return out;
}

// random degree-0 coderivation components theta with theta_(1) = 0:
// theta_(0) of weight >= 1, theta_(k>=2) weight-additive; packaged in a
// presentation container (no identities imposed or needed)
inline CurvedLinfPresentation random_theta(Rng& rng, const CurvedLinfPresentation& big,
                                           int max_arity) {
    CurvedLinfPresentation theta(big.basis(), big.cutoff(), std::max(max_arity, 1));
    AlgElement t0;
    for (int j = 0; j < big.dim(); ++j)
        if (big.basis_vector(j).degree == 0 && rng.pick(0, 1)) t0.add(j, rng.coef());
    if (!t0.is_zero()) theta.set_bracket_indices({}, t0);
    for (int k = 2; k <= max_arity; ++k) {
        std::vector<int> tuple(k);
        auto rec = [&](auto&& self, int pos, int lo) -> void {
            if (pos == k) {
                int dsum = 0, wsum = 0;
                for (int i : tuple) {
                    dsum += big.basis_vector(i).degree;
                    wsum += big.basis_vector(i).weight;
                }
                bool repodd = false;
                for (int i = 0; i + 1 < k; ++i)
                    if (tuple[i] == tuple[i + 1] && (big.basis_vector(tuple[i]).degree & 1))
                        repodd = true;
                if (repodd || wsum > big.cutoff()) return;
                AlgElement v;
                for (int j = 0; j < big.dim(); ++j)
                    if (big.basis_vector(j).degree == dsum && big.basis_vector(j).weight >= wsum &&
                        rng.pick(0, 2) == 0)
                        v.add(j, rng.coef());
                if (!v.is_zero()) theta.set_bracket_indices(tuple, v);
                return;
            }
            for (int i = lo; i < big.dim(); ++i) {
                tuple[pos] = i;
                self(self, pos + 1, i);
            }
        };
        rec(rec, 0, 0);
    }
    return theta;
}

// word-level coderivation built from component data (any operator parity:
// the unshuffle sign moves the block to the front first)
inline WordSum<BasisLetter> coderivation_apply(const CurvedLinfPresentation& comps,
                                               const Coalgebra<BasedOps>& co,
                                               const Word<BasisLetter>& w) {
    WordSum<BasisLetter> out;
    const int k = w.length();
    std::vector<int> degs(k);
    for (int i = 0; i < k; ++i) degs[i] = w.letters[i].degree;
    for (int j = 0; j <= k; ++j) {
        for_each_subset(k, j, degs, [&](const std::vector<int>& sel, int sign) {
            std::vector<AlgElement> args;
            std::vector<bool> used(k, false);
            for (int p : sel) {
                args.push_back(AlgElement::unit(w.letters[p].idx));
                used[p] = true;
            }
            AlgElement b = comps.bracket(args);
            if (b.is_zero()) return;
            std::vector<BasisLetter> rest;
            for (int p = 0; p < k; ++p)
                if (!used[p]) rest.push_back(w.letters[p]);
            for (const auto& [lidx, c] : b.coeffs()) {
                const auto& bv = comps.basis_vector(lidx);
                std::vector<BasisLetter> ls;
                ls.push_back(BasisLetter{lidx, bv.degree, bv.weight});
                ls.insert(ls.end(), rest.begin(), rest.end());
                co.add_word(out, std::move(ls), sign < 0 ? Rational(-c) : c);
            }
        });
    }
    return out;
}

inline WordSum<BasisLetter> exp_coderivation(const CurvedLinfPresentation& comps,
                                             const Coalgebra<BasedOps>& co,
                                             WordSum<BasisLetter> ws, int parity) {
    // exp(parity * theta): cur_j = parity * theta(cur_{j-1}) / j
    WordSum<BasisLetter> total = ws, cur = std::move(ws);
    for (int j = 1; j <= co.series_cap(); ++j) {
        WordSum<BasisLetter> next;
        for (const auto& [w, c] : cur)
            for (const auto& [w2, c2] : coderivation_apply(comps, co, w)) {
                Rational v = c * c2 / j;
                if (parity < 0) v = -v;
                auto it = next.find(w2);
                if (it == next.end()) next.emplace(w2, v);
                else {
                    it->second += v;
                    if (mch::is_zero(it->second)) next.erase(it);
                }
            }
        if (next.empty()) break;
        for (const auto& [w2, c2] : next) {
            auto it = total.find(w2);
            if (it == total.end()) total.emplace(w2, c2);
            else {
                it->second += c2;
                if (mch::is_zero(it->second)) total.erase(it);
            }
        }
        cur = std::move(next);
    }
    return total;
}

struct ValidStructure {
    CurvedLinfPresentation algebra;    // the conjugated curved structure
    LinfMorphism to_trivial;           // exp(-theta) read off: algebra -> trivial
};

// conjugation of the coderivation of D by exp(theta): a valid, generally
// curved structure on the same carrier, contractible whenever (D, h) is
inline ValidStructure random_valid_structure(Rng& rng, const CurvedLinfPresentation& big,
                                             const BasedContraction& c, int max_arity) {
    const int w = big.cutoff();
    const int cap = std::min(max_arity, w);
    CurvedLinfPresentation theta = random_theta(rng, big, cap);
    BasedOps ops{&big, &c};
    Coalgebra<BasedOps> co(ops, w + 1, w);

    auto delta_prime = [&](const Word<BasisLetter>& word) {
        // exp(theta) o codD o exp(-theta)
        WordSum<BasisLetter> ws;
        ws.emplace(word, Rational(1));
        ws = exp_coderivation(theta, co, std::move(ws), -1);
        ws = co.lift(ws, [&](const Word<BasisLetter>& ww) { return co.codD_word(ww); });
        return exp_coderivation(theta, co, std::move(ws), +1);
    };

    ValidStructure out{CurvedLinfPresentation(big.basis(), w, std::max(w, 1)), {}};
    for (int k = 0; k <= w; ++k) {
        std::vector<int> tuple(k);
        auto rec = [&](auto&& self, int pos, int lo) -> void {
            if (pos == k) {
                bool repodd = false;
                int wsum = 0;
                for (int i : tuple) wsum += big.basis_vector(i).weight;
                for (int i = 0; i + 1 < k; ++i)
                    if (tuple[i] == tuple[i + 1] && (big.basis_vector(tuple[i]).degree & 1))
                        repodd = true;
                if (repodd || wsum > w) return;
                std::vector<BasisLetter> ls;
                for (int i : tuple) {
                    const auto& bv = big.basis_vector(i);
                    ls.push_back(BasisLetter{i, bv.degree, bv.weight});
                }
                AlgElement v = from_letters(co.proj1(delta_prime(Word<BasisLetter>{ls})));
                if (!v.is_zero()) out.algebra.set_bracket_indices(tuple, v);
                return;
            }
            for (int i = lo; i < big.dim(); ++i) {
                tuple[pos] = i;
                self(self, pos + 1, i);
            }
        };
        rec(rec, 0, 0);
    }

    // exp(-theta) intertwines the conjugated structure with the trivial one
    CurvedLinfPresentation trivial(big.basis(), w, std::max(w, 1));
    for (int i = 0; i < big.dim(); ++i) {
        AlgElement db = c.D.apply(AlgElement::unit(i));
        if (!db.is_zero()) trivial.set_bracket_indices({i}, db);
    }
    out.to_trivial = LinfMorphism(out.algebra, trivial, std::max(w, 1));
    for (int k = 0; k <= w; ++k) {
        std::vector<int> tuple(k);
        auto rec = [&](auto&& self, int pos, int lo) -> void {
            if (pos == k) {
                bool repodd = false;
                int wsum = 0;
                for (int i : tuple) wsum += big.basis_vector(i).weight;
                for (int i = 0; i + 1 < k; ++i)
                    if (tuple[i] == tuple[i + 1] && (big.basis_vector(tuple[i]).degree & 1))
                        repodd = true;
                if (repodd || wsum > w) return;
                std::vector<BasisLetter> ls;
                for (int i : tuple) {
                    const auto& bv = big.basis_vector(i);
                    ls.push_back(BasisLetter{i, bv.degree, bv.weight});
                }
                WordSum<BasisLetter> ws;
                ws.emplace(Word<BasisLetter>{ls}, Rational(1));
                AlgElement v = from_letters(co.proj1(exp_coderivation(theta, co, ws, -1)));
                if (!v.is_zero()) out.to_trivial.set_component_indices(k, tuple, v);
                return;
            }
            for (int i = lo; i < big.dim(); ++i) {
                tuple[pos] = i;
                self(self, pos + 1, i);
            }
        };
        rec(rec, 0, 0);
    }
    return out;
}

}  // namespace mch::testgen
