#include "mch/dupont.hpp"

#include <algorithm>
#include <string>

#include "mch/errors.hpp"

namespace mch {

void WhitneyElement::add(const std::vector<int>& face, const Rational& c) {
    if (mch::is_zero(c)) return;
    for (std::size_t i = 0; i + 1 < face.size(); ++i)
        if (face[i] >= face[i + 1]) throw InputError("face indices must be strictly increasing");
    if (face.empty() || face.front() < 0 || face.back() > n_)
        throw InputError("face vertex out of range");
    auto it = coeffs_.find(face);
    if (it == coeffs_.end()) {
        coeffs_.emplace(face, c);
    } else {
        it->second += c;
        if (mch::is_zero(it->second)) coeffs_.erase(it);
    }
}

WhitneyElement& WhitneyElement::operator+=(const WhitneyElement& o) {
    if (n_ != o.n_) throw InputError("simplex dimension mismatch");
    for (const auto& [f, c] : o.coeffs_) add(f, c);
    return *this;
}

WhitneyElement& WhitneyElement::operator*=(const Rational& c) {
    if (mch::is_zero(c)) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [f, v] : coeffs_) v *= c;
    return *this;
}

PolyForm whitney_form(int n, const std::vector<int>& face) {
    const int k = static_cast<int>(face.size()) - 1;
    if (k < 0) throw InputError("empty face");
    for (int i = 0; i < k; ++i)
        if (face[i] >= face[i + 1]) throw InputError("face indices must be strictly increasing");
    if (face.front() < 0 || face.back() > n) throw InputError("face vertex out of range");

    PolyForm out(n);
    for (int j = 0; j <= k; ++j) {
        PolyForm term = PolyForm::coordinate(n, face[j]);
        for (int m = 0; m <= k; ++m) {
            if (m == j) continue;
            term = wedge(term, PolyForm::coordinate_diff(n, face[m]));
        }
        if (j % 2 == 1) term = -term;
        out += term;
    }
    return rat_factorial(k) * out;
}

std::vector<std::vector<int>> simplex_faces(int n) {
    std::vector<std::vector<int>> faces;
    for (int mask = 1; mask < (1 << (n + 1)); ++mask) {
        std::vector<int> f;
        for (int v = 0; v <= n; ++v)
            if (mask & (1 << v)) f.push_back(v);
        faces.push_back(std::move(f));
    }
    // order by dimension, then lexicographically
    std::sort(faces.begin(), faces.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return faces;
}

long dupont_s_term_count(int n) {
    long count = 0;
    for (const auto& f : simplex_faces(n))
        if (static_cast<int>(f.size()) <= n) ++count;  // dim <= n-1
    return count;
}

DupontOps::DupontOps(int n) : n_(n), faces_(simplex_faces(n)) {
    if (n < 0) throw InputError("negative simplex dimension");
    face_forms_.reserve(faces_.size());
    for (const auto& f : faces_) face_forms_.push_back(whitney_form(n_, f));
}

PolyForm DupontOps::h(int i, const PolyForm& a) const {
    PolyForm out(n_);
    for (const auto& [key, c] : a.terms()) {
        auto it = hcache_.find({i, key});
        if (it == hcache_.end()) {
            PolyForm mono(n_);
            mono.add_term(key, 1);
            it = hcache_.emplace(std::make_pair(i, key), mono.poincare_h(i)).first;
        }
        out += c * it->second;
    }
    return out;
}

WhitneyElement DupontOps::p_coeffs(const PolyForm& a) const {
    if (a.simplex_dim() != n_) throw InputError("form lives on the wrong simplex");
    WhitneyElement out(n_);
    for (const auto& face : faces_) {
        const int k = static_cast<int>(face.size()) - 1;
        PolyForm cur = a;
        for (int m = 0; m < k; ++m) {
            cur = h(face[m], cur);
            if (cur.is_zero()) break;
        }
        Rational c = cur.is_zero() ? Rational(0) : cur.eval_vertex(face[k]);
        out.add(face, c);
    }
    return out;
}

PolyForm DupontOps::include(const WhitneyElement& w) const {
    if (w.simplex_dim() != n_) throw InputError("element lives on the wrong simplex");
    PolyForm out(n_);
    for (const auto& [face, c] : w.coeffs()) out += c * whitney_form(n_, face);
    return out;
}

PolyForm DupontOps::p(const PolyForm& a) const { return include(p_coeffs(a)); }

PolyForm DupontOps::s(const PolyForm& a) const {
    if (a.simplex_dim() != n_) throw InputError("form lives on the wrong simplex");
    PolyForm out(n_);
    for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
        const auto& face = faces_[fi];
        const int k = static_cast<int>(face.size()) - 1;
        if (k > n_ - 1) continue;
        PolyForm cur = a;
        for (int m = 0; m <= k; ++m) {
            cur = h(face[m], cur);
            if (cur.is_zero()) break;
        }
        if (cur.is_zero()) continue;
        if (k % 2 == 1) cur = -cur;
        out += wedge(face_forms_[fi], cur);
    }
    return out;
}

WhitneyElement DupontOps::small_d(const WhitneyElement& w) const {
    return p_coeffs(include(w).d());
}

DupontOps dupont_contraction(int n, int check_degree) {
    DupontOps ops(n);

    // spanning battery: all monomials of polynomial degree <= check_degree
    std::vector<PolyForm> battery;
    std::vector<int> exps(n, 0);
    auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == n) {
            for (int mask = 0; mask < (1 << n); ++mask) {
                std::vector<int> ds;
                for (int j = 1; j <= n; ++j)
                    if (mask & (1 << (j - 1))) ds.push_back(j);
                battery.push_back(PolyForm::monomial(n, exps, ds, 1));
            }
            return;
        }
        for (int e = 0; e <= left; ++e) {
            exps[pos] = e;
            self(self, pos + 1, left - e);
        }
        exps[pos] = 0;
    };
    rec(rec, 0, check_degree);

    auto fail = [&](const std::string& what) {
        throw VerificationError("dupont_contraction(n=" + std::to_string(n) + "): " + what);
    };

    for (const auto& a : battery) {
        PolyForm sa = ops.s(a);
        PolyForm pa = ops.p(a);
        // d s + s d = 1 - p
        if (sa.d() + ops.s(a.d()) != a - pa) fail("homotopy identity ds+sd = 1-p failed");
        if (!ops.s(sa).is_zero()) fail("side condition s^2 = 0 failed");
        if (!ops.p(sa).is_zero()) fail("side condition p s = 0 failed");
        if (ops.p(pa) != pa) fail("p is not idempotent");
    }
    // p i = 1 and s i = 0 on the Whitney basis
    for (const auto& face : simplex_faces(n)) {
        WhitneyElement e(n);
        e.add(face, 1);
        PolyForm w = ops.include(e);
        if (ops.p_coeffs(w) != e) fail("p i != 1 on the Whitney basis");
        if (!ops.s(w).is_zero()) fail("side condition s i = 0 failed");
    }
    return ops;
}

}  // namespace mch
