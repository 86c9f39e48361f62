#include "mch/form_family.hpp"

#include <algorithm>

#include "mch/errors.hpp"

namespace mch {

namespace {

// vertex set of face j of the n-simplex, in increasing order
std::vector<int> face_vertices(int n, int j) {
    std::vector<int> v;
    v.reserve(n);
    for (int m = 0; m <= n; ++m)
        if (m != j) v.push_back(m);
    return v;
}

int position_in_face(int vertex, int dropped) {
    return vertex < dropped ? vertex : vertex - 1;
}

}  // namespace

FormFamily::FormFamily(FamilyShape shape, int n, int horn_index)
    : shape_(shape), n_(n), horn_(horn_index), members_(n + 1) {
    if (n < 0) throw InputError("negative simplex dimension");
    if (shape == FamilyShape::Horn) {
        if (horn_index < 0 || horn_index > n) throw InputError("horn index out of range");
    } else {
        horn_ = -1;
    }
}

bool FormFamily::has_face(int j) const {
    if (j < 0 || j > n_) return false;
    return shape_ == FamilyShape::Boundary || j != horn_;
}

std::vector<int> FormFamily::face_indices() const {
    std::vector<int> idx;
    for (int j = 0; j <= n_; ++j)
        if (has_face(j)) idx.push_back(j);
    return idx;
}

void FormFamily::set_face(int j, PolyForm f) {
    if (!has_face(j)) throw InputError("face is not part of the shape");
    if (f.simplex_dim() != n_ - 1) throw InputError("family member has the wrong dimension");
    members_[j] = std::move(f);
}

const PolyForm& FormFamily::face(int j) const {
    if (!has_face(j) || !members_[j]) throw InputError("missing family member");
    return *members_[j];
}

FormFamily FormFamily::restrict_to_shape(FamilyShape shape, const PolyForm& a, int horn_index) {
    const int n = a.simplex_dim();
    FormFamily fam(shape, n, horn_index);
    for (int j : fam.face_indices()) fam.set_face(j, pullback(AffineSimplexMap::face(n, j), a));
    return fam;
}

bool FormFamily::is_compatible() const {
    for (int j : face_indices())
        if (!members_[j]) return false;
    if (n_ < 2) return true;
    for (int j : face_indices()) {
        for (int k : face_indices()) {
            if (j >= k) continue;
            auto sub_j = pullback(AffineSimplexMap::face(n_ - 1, position_in_face(k, j)), *members_[j]);
            auto sub_k = pullback(AffineSimplexMap::face(n_ - 1, position_in_face(j, k)), *members_[k]);
            if (!(sub_j == sub_k)) return false;
        }
    }
    return true;
}

namespace {

// pullback of the family along sigma_{i,J}: the collapse factors through
// any face opposite an element of J
PolyForm collapse_pullback(const FormFamily& y, int i, const std::vector<int>& J) {
    const int n = y.simplex_dim();
    const int j0 = J.front();
    std::vector<int> img(n + 1);
    for (int m = 0; m <= n; ++m) {
        int target = (std::find(J.begin(), J.end(), m) != J.end()) ? i : m;
        img[m] = position_in_face(target, j0);
    }
    return pullback(AffineSimplexMap::from_vertex_map(n, n - 1, img), y.face(j0));
}

PolyForm extend_boundary(const FormFamily& y) {
    const int n = y.simplex_dim();
    PolyForm out(n);
    if (n == 0) return out;
    for (int i = 0; i <= n; ++i) {
        std::vector<int> others;
        for (int m = 0; m <= n; ++m)
            if (m != i) others.push_back(m);
        PolyForm inner(n);
        for (int mask = 1; mask < (1 << n); ++mask) {
            std::vector<int> J;
            for (int b = 0; b < n; ++b)
                if (mask & (1 << b)) J.push_back(others[b]);
            PolyForm pulled = collapse_pullback(y, i, J);
            if (J.size() % 2 == 0) pulled = -pulled;  // (-1)^{|J|-1}
            inner += pulled;
        }
        out += wedge(PolyForm::coordinate(n, i), inner);
    }
    return out;
}

}  // namespace

PolyForm extend_section(const FormFamily& y) {
    if (!y.is_compatible()) throw InputError("family members disagree on a shared subface");
    const int n = y.simplex_dim();
    if (y.shape() == FamilyShape::Boundary) return extend_boundary(y);

    // horn: fill the missing face by extending its boundary, then extend
    const int i = y.horn_index();
    FormFamily full = FormFamily::boundary(n);
    for (int j : y.face_indices()) full.set_face(j, y.face(j));

    if (n == 1) {
        full.set_face(i, PolyForm::zero(0));
    } else {
        const auto vi = face_vertices(n, i);
        FormFamily missing_boundary = FormFamily::boundary(n - 1);
        for (int r = 0; r < n; ++r) {
            int v = vi[r];
            auto sub = pullback(AffineSimplexMap::face(n - 1, position_in_face(i, v)), y.face(v));
            missing_boundary.set_face(r, sub);
        }
        full.set_face(i, extend_section(missing_boundary));
    }
    return extend_boundary(full);
}

}  // namespace mch
