#include "mch/holonomy.hpp"

#include <algorithm>

#include "mch/coalgebra.hpp"

namespace mch {

LieAlgebra::LieAlgebra(std::vector<std::pair<std::string, int>> basis, int nilpotency_class)
    : basis_(std::move(basis)), class_(nilpotency_class) {
    for (int i = 0; i < dim(); ++i) {
        if (basis_[i].second < 1) throw InputError("Lie weights must be >= 1");
        if (!index_.emplace(basis_[i].first, i).second)
            throw InputError("duplicate Lie basis name: " + basis_[i].first);
    }
}

int LieAlgebra::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw InputError("unknown Lie basis name: " + name);
    return it->second;
}

void LieAlgebra::set_bracket(const std::string& x, const std::string& y, const AlgElement& out) {
    int i = index_of(x), j = index_of(y);
    if (i == j) {
        if (!out.is_zero()) throw InputError("[x,x] must vanish");
        return;
    }
    if (i < j) {
        brackets_[{i, j}] = out;
    } else {
        AlgElement neg = out;
        neg *= Rational(-1);
        brackets_[{j, i}] = neg;
    }
}

AlgElement LieAlgebra::bracket(const AlgElement& x, const AlgElement& y) const {
    AlgElement out;
    for (const auto& [i, ci] : x.coeffs()) {
        for (const auto& [j, cj] : y.coeffs()) {
            if (i == j) continue;
            auto it = brackets_.find({std::min(i, j), std::max(i, j)});
            if (it == brackets_.end()) continue;
            Rational c = ci * cj;
            if (i > j) c = -c;
            AlgElement v = it->second;
            v *= c;
            out += v;
        }
    }
    // weight truncation: the class bounds the filtration
    AlgElement pruned;
    for (const auto& [k, c] : out.coeffs())
        if (weight(k) <= class_) pruned.add(k, c);
    return pruned;
}

ValidationReport LieAlgebra::validate() const {
    ValidationReport rep;
    for (const auto& [key, out] : brackets_) {
        int wsum = weight(key.first) + weight(key.second);
        for (const auto& [k, c] : out.coeffs())
            if (weight(k) < wsum)
                rep.items.push_back({"weight", 2, {name(key.first), name(key.second)},
                                     "bracket output below the weight sum"});
    }
    for (int i = 0; i < dim(); ++i)
        for (int j = i + 1; j < dim(); ++j)
            for (int k = j + 1; k < dim(); ++k) {
                AlgElement jac =
                    bracket(AlgElement::unit(i), bracket(AlgElement::unit(j), AlgElement::unit(k))) +
                    bracket(AlgElement::unit(j), bracket(AlgElement::unit(k), AlgElement::unit(i))) +
                    bracket(AlgElement::unit(k), bracket(AlgElement::unit(i), AlgElement::unit(j)));
                if (!jac.is_zero())
                    rep.items.push_back({"jacobi", 3, {name(i), name(j), name(k)}, "Jacobi fails"});
            }
    return rep;
}

LieAlgebra LieAlgebra::heisenberg() {
    LieAlgebra g({{"X", 1}, {"Y", 1}, {"Z", 2}}, 2);
    g.set_bracket("X", "Y", AlgElement::unit(2));
    return g;
}

LieAlgebra LieAlgebra::free_nilpotent3() {
    LieAlgebra g({{"x", 1}, {"y", 1}, {"xy", 2}, {"xxy", 3}, {"yxy", 3}}, 3);
    g.set_bracket("x", "y", AlgElement::unit(2));
    g.set_bracket("x", "xy", AlgElement::unit(3));
    g.set_bracket("y", "xy", AlgElement::unit(4));
    return g;
}

AlgElement bch_oracle(const LieAlgebra& g, const AlgElement& x, const AlgElement& y, int depth) {
    if (depth < 1 || depth > 4) throw InputError("bch_oracle implements depths 1..4");
    AlgElement z = x + y;
    if (depth >= 2) {
        AlgElement xy = g.bracket(x, y);
        z += Rational(1, 2) * xy;
        if (depth >= 3) {
            z += Rational(1, 12) * g.bracket(x, xy);
            z += Rational(1, 12) * g.bracket(y, g.bracket(y, x));
            if (depth >= 4) z += Rational(-1, 24) * g.bracket(y, g.bracket(x, xy));
        }
    }
    return z;
}

CurvedLinfPresentation lie_to_linf(const LieAlgebra& g) {
    std::vector<BasisVector> basis;
    for (int i = 0; i < g.dim(); ++i) basis.push_back({g.name(i), -1, g.weight(i)});
    CurvedLinfPresentation l(basis, g.nilpotency_class(), 2);
    for (int i = 0; i < g.dim(); ++i)
        for (int j = i + 1; j < g.dim(); ++j) {
            AlgElement lb = g.bracket(AlgElement::unit(i), AlgElement::unit(j));
            if (lb.is_zero()) continue;
            lb *= Rational(-1);  // {x,y} = -[x,y] in the shifted convention
            l.set_bracket_indices({i, j}, lb);
        }
    return l;
}

std::string cone_name_deg1(const std::string& base) { return base + "0"; }
std::string cone_name_deg2(const std::string& base) { return base + "1"; }

CurvedLinfPresentation cone_linf(const LieAlgebra& g) {
    const int n = g.dim();
    std::vector<BasisVector> basis;
    for (int i = 0; i < n; ++i) basis.push_back({cone_name_deg1(g.name(i)), -1, g.weight(i)});
    for (int i = 0; i < n; ++i) basis.push_back({cone_name_deg2(g.name(i)), -2, g.weight(i)});
    CurvedLinfPresentation l(basis, g.nilpotency_class(), 2);
    // unary: the identity differential on the degree -2 copy
    for (int i = 0; i < n; ++i) l.set_bracket_indices({n + i}, AlgElement::unit(i));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            AlgElement lb = g.bracket(AlgElement::unit(i), AlgElement::unit(j));
            if (lb.is_zero()) continue;
            if (j > i) {
                // {x0, y0} = -[x,y]0
                AlgElement v;
                for (const auto& [k, c] : lb.coeffs()) v.add(k, -c);
                l.set_bracket_indices({i, j}, v);
            }
            // {x0, y1} = -[x,y]1 for every ordered pair (i, j)
            AlgElement w;
            for (const auto& [k, c] : lb.coeffs()) w.add(n + k, -c);
            l.set_bracket_indices({i, n + j}, w);
        }
    return l;
}

SimplexInNerve make_simplex(const CurvedLinfPresentation& l, int n, FormValuedElement x) {
    if (!mc_residual_on_simplex(l, n, x).is_zero())
        throw VerificationError("the element is not Maurer-Cartan");
    return SimplexInNerve{n, std::move(x)};
}

bool gamma_check(const CurvedLinfPresentation& l, const SimplexInNerve& s) {
    DupontOps dup(s.n);
    for (const auto& [idx, f] : s.x.coeffs())
        if (!dup.s(f).is_zero()) return false;
    (void)l;
    return true;
}

bool is_thin(const CurvedLinfPresentation& l, const SimplexInNerve& s) {
    (void)l;
    return s.x.form_degree_component(s.n).is_zero();
}

SimplexInNerve face_of(const CurvedLinfPresentation& l, const SimplexInNerve& s, int j) {
    (void)l;
    return SimplexInNerve{s.n - 1, restrict_element(s.x, AffineSimplexMap::face(s.n, j))};
}

// --- the Dupont contraction tensored with L, as coalgebra ops ---

namespace {

struct TLetter {
    FormKey mono;
    int idx;
    int degree;
    int weight;
    auto operator<=>(const TLetter&) const = default;
};

struct WhLetter {
    std::vector<int> face;
    int idx;
    int degree;
    int weight;
    auto operator<=>(const WhLetter&) const = default;
};

struct DupontTensorOps {
    using VLetter = TLetter;
    using WLetter = WhLetter;

    const CurvedLinfPresentation* l;
    const DupontOps* dup;
    int n;

    FormValuedElement to_element(const Elem<TLetter>& e) const {
        FormValuedElement out(n);
        for (const auto& [letter, c] : e) {
            PolyForm f(n);
            f.add_term(letter.mono, c);
            out.add(letter.idx, f);
        }
        return out;
    }
    Elem<TLetter> to_letters(const FormValuedElement& x) const {
        Elem<TLetter> out;
        for (const auto& [idx, f] : x.coeffs()) {
            const auto& b = l->basis_vector(idx);
            for (const auto& [key, c] : f.terms())
                elem_add(out, TLetter{key, idx, key.form_degree() + b.degree, b.weight}, c);
        }
        return out;
    }

    Elem<VLetter> bracket(const std::vector<Elem<VLetter>>& args) const {
        std::vector<FormValuedElement> xs;
        xs.reserve(args.size());
        for (const auto& a : args) xs.push_back(to_element(a));
        return to_letters(bracket_tensor(*l, n, xs));
    }
    Elem<VLetter> applyD(const Elem<VLetter>& x) const {
        // d (x) 1 + 1 (x) D_L with the Koszul sign of the form factor
        FormValuedElement v = to_element(x);
        FormValuedElement out = de_rham(v);
        for (const auto& [idx, f] : v.coeffs()) {
            AlgElement db = l->graded_unary(AlgElement::unit(idx));
            if (db.is_zero()) continue;
            for (int k = 0; k <= f.max_form_degree(); ++k) {
                PolyForm comp = f.form_degree_component(k);
                if (comp.is_zero()) continue;
                if (k % 2 == 1) comp = -comp;
                for (const auto& [j, c] : db.coeffs()) out.add(j, c * comp);
            }
        }
        return to_letters(out);
    }
    Elem<VLetter> applyH(const Elem<VLetter>& x) const {
        return to_letters(to_element(x).map_forms([&](const PolyForm& f) { return dup->s(f); }));
    }
    Elem<WLetter> applyP(const Elem<VLetter>& x) const {
        Elem<WLetter> out;
        for (const auto& [letter, c] : x) {
            PolyForm f(n);
            f.add_term(letter.mono, 1);
            WhitneyElement w = dup->p_coeffs(f);
            const auto& b = l->basis_vector(letter.idx);
            for (const auto& [face, cf] : w.coeffs()) {
                int fd = static_cast<int>(face.size()) - 1;
                elem_add(out, WhLetter{face, letter.idx, fd + b.degree, b.weight},
                         Rational(c * cf));
            }
        }
        return out;
    }
    Elem<VLetter> applyI(const Elem<WLetter>& x) const {
        FormValuedElement out(n);
        for (const auto& [letter, c] : x) {
            PolyForm f = whitney_form(n, letter.face);
            f *= c;
            out.add(letter.idx, f);
        }
        return to_letters(out);
    }
    Elem<WLetter> applyDSmall(const Elem<WLetter>& x) const {
        Elem<WLetter> out;
        for (const auto& [letter, c] : x) {
            const auto& b = l->basis_vector(letter.idx);
            // simplicial coboundary on the Whitney factor
            WhitneyElement w(n);
            w.add(letter.face, 1);
            for (const auto& [face, cf] : dup->small_d(w).coeffs()) {
                int fd = static_cast<int>(face.size()) - 1;
                elem_add(out, WhLetter{face, letter.idx, fd + b.degree, b.weight},
                         Rational(c * cf));
            }
            // (-1)^{form degree} times the graded unary part of L
            AlgElement db = l->graded_unary(AlgElement::unit(letter.idx));
            if (!db.is_zero()) {
                int fd = static_cast<int>(letter.face.size()) - 1;
                Rational sign = (fd % 2 == 1) ? Rational(-1) : Rational(1);
                for (const auto& [j, cj] : db.coeffs()) {
                    const auto& bj = l->basis_vector(j);
                    elem_add(out, WhLetter{letter.face, j, fd + bj.degree, bj.weight},
                             Rational(c * cj * sign));
                }
            }
        }
        return out;
    }
};

}  // namespace

WhitneySection nerve_pushforward(const CurvedLinfPresentation& l, const SimplexInNerve& s) {
    if (!mc_residual_on_simplex(l, s.n, s.x).is_zero())
        throw InputError("pushforward: the input is not Maurer-Cartan");
    DupontOps dup(s.n);
    DupontTensorOps ops{&l, &dup, s.n};
    Coalgebra<DupontTensorOps> co(ops, l.cutoff(), l.cutoff());
    auto pushed = co.bold_p(co.inv_one_plus_mu_h(co.exp_trunc(ops.to_letters(s.x))));
    WhitneySection out;
    for (const auto& [letter, c] : co.proj1(pushed)) out[{letter.face, letter.idx}] = c;
    return out;
}

SimplexInNerve nerve_pullback(const CurvedLinfPresentation& l, int n, const WhitneySection& y) {
    DupontOps dup(n);
    DupontTensorOps ops{&l, &dup, n};
    Coalgebra<DupontTensorOps> co(ops, l.cutoff(), l.cutoff());
    Elem<WhLetter> xi;
    for (const auto& [key, c] : y) {
        const auto& b = l.basis_vector(key.second);
        int fd = static_cast<int>(key.first.size()) - 1;
        elem_add(xi, WhLetter{key.first, key.second, fd + b.degree, b.weight}, c);
    }
    auto back = co.inv_one_plus_h_mu(co.exp_trunc(ops.applyI(xi)));
    return SimplexInNerve{n, ops.to_element(co.proj1(back))};
}

SimplexInNerve rho(const CurvedLinfPresentation& l, const SimplexInNerve& s) {
    SimplexInNerve result = nerve_pullback(l, s.n, nerve_pushforward(l, s));
    if (!mc_residual_on_simplex(l, s.n, result.x).is_zero())
        throw VerificationError("rho: the result lost the Maurer-Cartan property");
    if (!gamma_check(l, result))
        throw VerificationError("rho: the result is not in the gauge locus");
    return result;
}

namespace {

// sigma applied coefficient-wise to a horn of form-valued elements
FormValuedElement extend_horn_elementwise(const CurvedLinfPresentation& l, const MCHorn& horn) {
    FormValuedElement out(horn.n);
    for (int idx = 0; idx < l.dim(); ++idx) {
        FormFamily fam = FormFamily::horn(horn.n, horn.missing);
        bool any = false;
        for (const auto& [j, face] : horn.faces) {
            const PolyForm* f = face.coeff(idx);
            if (f) any = true;
            fam.set_face(j, f ? *f : PolyForm::zero(horn.n - 1));
        }
        if (!any) continue;
        out.add(idx, extend_section(fam));
    }
    return out;
}

}  // namespace

SimplexInNerve fill_horn(const CurvedLinfPresentation& l, const MCHorn& horn,
                         const FormValuedElement* seed) {
    const int n = horn.n;
    const int i = horn.missing;
    if (i <= 0 || i > n) throw InputError("horn index must satisfy 0 < i <= n");
    if (static_cast<int>(horn.faces.size()) != n) throw InputError("horn is missing face data");
    for (const auto& [j, face] : horn.faces) {
        if (j == i || j < 0 || j > n) throw InputError("unexpected face index in horn");
        if (!mc_residual_on_simplex(l, n - 1, face).is_zero())
            throw InputError("horn face " + std::to_string(j) + " is not Maurer-Cartan");
    }

    // sigma y, with the compatibility check done by the forms layer
    FormValuedElement sigma = extend_horn_elementwise(l, horn);

    DupontOps dup(n);
    auto pop = [&](const FormValuedElement& v) {  // P = p h^i + s, coefficient-wise
        return v.map_forms([&](const PolyForm& f) { return dup.p(dup.h(i, f)) + dup.s(f); });
    };

    // vertex value at e_i from any horn face containing it
    const int jface = (i == 0) ? 1 : 0;
    const auto& witness = horn.faces.at(jface);
    int rel = i - (i > jface ? 1 : 0);
    AlgElement at_vertex = witness.vertex_value(rel);

    FormValuedElement psigma = pop(sigma);
    FormValuedElement x0 = FormValuedElement::constant(n, at_vertex) + de_rham(psigma) +
                           unary_l_part(l, psigma);

    FormValuedElement x = seed ? *seed : x0;
    const int lmax = std::min(l.arity_cap(), l.cutoff());
    for (int it = 0; it <= l.cutoff(); ++it) {
        FormValuedElement correction(n);
        std::vector<FormValuedElement> args{x, x};
        for (int ell = 2; ell <= lmax; ++ell) {
            FormValuedElement t = pop(bracket_tensor(l, n, args));
            t *= Rational(1) / rat_factorial(ell);
            correction += t;
            args.push_back(x);
        }
        x = x0 - correction;
    }

    SimplexInNerve out{n, std::move(x)};
    if (!mc_residual_on_simplex(l, n, out.x).is_zero())
        throw VerificationError("horn filler: the residual did not vanish after W iterations");
    for (const auto& [j, face] : horn.faces) {
        if (!(restrict_element(out.x, AffineSimplexMap::face(n, j)) == face))
            throw VerificationError("horn filler does not restrict to face " + std::to_string(j));
    }
    return out;
}

}  // namespace mch
