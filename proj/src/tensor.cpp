#include "mch/tensor.hpp"

namespace mch {

const PolyForm* FormValuedElement::coeff(int idx) const {
    auto it = c_.find(idx);
    return it == c_.end() ? nullptr : &it->second;
}

void FormValuedElement::add(int idx, const PolyForm& f) {
    if (f.is_zero()) return;
    if (f.simplex_dim() != n_) throw InputError("form lives on the wrong simplex");
    auto it = c_.find(idx);
    if (it == c_.end()) {
        c_.emplace(idx, f);
    } else {
        it->second += f;
        if (it->second.is_zero()) c_.erase(it);
    }
}

FormValuedElement& FormValuedElement::operator+=(const FormValuedElement& o) {
    if (n_ != o.n_) throw InputError("simplex dimension mismatch");
    for (const auto& [i, f] : o.c_) add(i, f);
    return *this;
}

FormValuedElement& FormValuedElement::operator-=(const FormValuedElement& o) {
    if (n_ != o.n_) throw InputError("simplex dimension mismatch");
    for (const auto& [i, f] : o.c_) add(i, -f);
    return *this;
}

FormValuedElement& FormValuedElement::operator*=(const Rational& c) {
    if (mch::is_zero(c)) {
        c_.clear();
        return *this;
    }
    for (auto& [i, f] : c_) f *= c;
    return *this;
}

FormValuedElement FormValuedElement::operator-() const {
    FormValuedElement out(n_);
    for (const auto& [i, f] : c_) out.c_.emplace(i, -f);
    return out;
}

FormValuedElement FormValuedElement::constant(int n, const AlgElement& x) {
    FormValuedElement out(n);
    for (const auto& [i, c] : x.coeffs()) out.add(i, PolyForm::constant(n, c));
    return out;
}

AlgElement FormValuedElement::vertex_value(int i) const {
    AlgElement out;
    for (const auto& [idx, f] : c_) out.add(idx, f.eval_vertex(i));
    return out;
}

FormValuedElement FormValuedElement::total_degree_component(const CurvedLinfPresentation& l,
                                                            int d) const {
    FormValuedElement out(n_);
    for (const auto& [idx, f] : c_)
        out.add(idx, f.form_degree_component(d - l.basis_vector(idx).degree));
    return out;
}

FormValuedElement FormValuedElement::form_degree_component(int k) const {
    FormValuedElement out(n_);
    for (const auto& [idx, f] : c_) out.add(idx, f.form_degree_component(k));
    return out;
}

bool FormValuedElement::has_total_degree(const CurvedLinfPresentation& l, int d) const {
    for (const auto& [idx, f] : c_) {
        int ld = l.basis_vector(idx).degree;
        for (const auto& [key, c] : f.terms())
            if (key.form_degree() + ld != d) return false;
    }
    return true;
}

int FormValuedElement::min_weight(const CurvedLinfPresentation& l) const {
    int w = l.cutoff() + 1;
    for (const auto& [idx, f] : c_) w = std::min(w, l.basis_vector(idx).weight);
    return w;
}

FormValuedElement de_rham(const FormValuedElement& x) {
    return x.map_forms([](const PolyForm& f) { return f.d(); });
}

FormValuedElement unary_l_part(const CurvedLinfPresentation& l, const FormValuedElement& x) {
    FormValuedElement out(x.simplex_dim());
    for (const auto& [idx, f] : x.coeffs()) {
        AlgElement ux = l.bracket_basis({idx});
        if (ux.is_zero()) continue;
        for (int k = 0; k <= f.max_form_degree(); ++k) {
            PolyForm comp = f.form_degree_component(k);
            if (comp.is_zero()) continue;
            if (k % 2 == 1) comp = -comp;  // (-1)^{|alpha|}
            for (const auto& [j, c] : ux.coeffs()) out.add(j, c * comp);
        }
    }
    return out;
}

FormValuedElement bracket_tensor(const CurvedLinfPresentation& l, int n,
                                 const std::vector<FormValuedElement>& args) {
    const int k = static_cast<int>(args.size());
    FormValuedElement out(n);
    if (k == 0) {
        return FormValuedElement::constant(n, l.curvature());
    }
    for (const auto& a : args)
        if (a.simplex_dim() != n) throw InputError("bracket arguments on different simplices");
    if (k == 1) return de_rham(args[0]) + unary_l_part(l, args[0]);
    if (k > l.arity_cap()) return out;

    // expand each argument into homogeneous (form part, basis vector) summands
    struct Piece {
        PolyForm form;
        int form_deg;
        int idx;
        int l_deg;
    };
    std::vector<std::vector<Piece>> pieces(k);
    for (int a = 0; a < k; ++a) {
        for (const auto& [idx, f] : args[a].coeffs()) {
            for (int fd = 0; fd <= f.max_form_degree(); ++fd) {
                PolyForm comp = f.form_degree_component(fd);
                if (comp.is_zero()) continue;
                pieces[a].push_back({comp, fd, idx, l.basis_vector(idx).degree});
            }
        }
    }

    std::vector<const Piece*> pick(k);
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == k) {
            // sign (-1)^{sum_{i<j} |x_i| |alpha_j|}
            int sign = 1;
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j)
                    if ((pick[i]->l_deg & 1) && (pick[j]->form_deg & 1)) sign = -sign;
            std::vector<int> tuple(k);
            for (int i = 0; i < k; ++i) tuple[i] = pick[i]->idx;
            AlgElement lb = l.bracket_basis(tuple);
            if (lb.is_zero()) return;
            PolyForm prod = pick[0]->form;
            for (int i = 1; i < k && !prod.is_zero(); ++i) prod = wedge(prod, pick[i]->form);
            if (prod.is_zero()) return;
            if (sign < 0) prod = -prod;
            for (const auto& [j, c] : lb.coeffs()) out.add(j, c * prod);
            return;
        }
        for (const auto& p : pieces[pos]) {
            pick[pos] = &p;
            self(self, pos + 1);
        }
    };
    rec(rec, 0);
    return out;
}

FormValuedElement mc_residual_on_simplex(const CurvedLinfPresentation& l, int n,
                                         const FormValuedElement& x) {
    FormValuedElement out(n);
    std::vector<FormValuedElement> args;
    for (int kk = 0; kk <= l.cutoff(); ++kk) {
        FormValuedElement term = bracket_tensor(l, n, args);
        term *= Rational(1) / rat_factorial(kk);
        out += term;
        args.push_back(x);
    }
    return out;
}

FormValuedElement restrict_element(const FormValuedElement& x, const AffineSimplexMap& m) {
    if (x.simplex_dim() != m.target_dim())
        throw InputError("restriction: element does not live on the target simplex");
    FormValuedElement out(m.source_dim());
    for (const auto& [idx, f] : x.coeffs()) out.add(idx, pullback(m, f));
    return out;
}

}  // namespace mch
