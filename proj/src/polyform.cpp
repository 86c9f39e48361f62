#include "mch/polyform.hpp"

#include <algorithm>
#include <sstream>

namespace mch {

PolyForm::PolyForm(int n) : n_(n) {
    if (n < 0) throw InputError("simplex dimension must be >= 0");
}

PolyForm PolyForm::constant(int n, const Rational& c) {
    PolyForm f(n);
    f.add_term(FormKey{std::vector<int>(n, 0), {}}, c);
    return f;
}

PolyForm PolyForm::coordinate(int n, int j) {
    if (j < 0 || j > n) throw InputError("coordinate index out of range");
    PolyForm f(n);
    if (j == 0) {
        // t_0 = 1 - t_1 - ... - t_n
        f.add_term(FormKey{std::vector<int>(n, 0), {}}, 1);
        for (int i = 1; i <= n; ++i) {
            std::vector<int> e(n, 0);
            e[i - 1] = 1;
            f.add_term(FormKey{e, {}}, -1);
        }
    } else {
        std::vector<int> e(n, 0);
        e[j - 1] = 1;
        f.add_term(FormKey{e, {}}, 1);
    }
    return f;
}

PolyForm PolyForm::coordinate_diff(int n, int j) {
    if (j < 0 || j > n) throw InputError("coordinate index out of range");
    PolyForm f(n);
    if (j == 0) {
        for (int i = 1; i <= n; ++i) f.add_term(FormKey{std::vector<int>(n, 0), {i}}, -1);
    } else {
        f.add_term(FormKey{std::vector<int>(n, 0), {j}}, 1);
    }
    return f;
}

PolyForm PolyForm::monomial(int n, std::vector<int> exps, std::vector<int> ds, const Rational& c) {
    if (static_cast<int>(exps.size()) != n) throw InputError("exponent vector has wrong length");
    for (int e : exps)
        if (e < 0) throw InputError("negative exponent");
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (ds[i] < 1 || ds[i] > n) throw InputError("dt index out of range");
        if (i > 0 && ds[i] <= ds[i - 1]) throw InputError("dt indices must be strictly increasing");
    }
    PolyForm f(n);
    f.add_term(FormKey{std::move(exps), std::move(ds)}, c);
    return f;
}

void PolyForm::add_term(const FormKey& k, const Rational& c) {
    if (mch::is_zero(c)) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(k, c);
    } else {
        it->second += c;
        if (mch::is_zero(it->second)) terms_.erase(it);
    }
}

PolyForm& PolyForm::operator+=(const PolyForm& o) {
    if (n_ != o.n_) throw InputError("simplex dimension mismatch in +");
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
}

PolyForm& PolyForm::operator-=(const PolyForm& o) {
    if (n_ != o.n_) throw InputError("simplex dimension mismatch in -");
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
}

PolyForm& PolyForm::operator*=(const Rational& c) {
    if (mch::is_zero(c)) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, v] : terms_) v *= c;
    return *this;
}

PolyForm PolyForm::operator-() const {
    PolyForm f(n_);
    for (const auto& [k, c] : terms_) f.terms_.emplace(k, -c);
    return f;
}

namespace {

// merge two strictly increasing dt-index sets; returns 0 on collision,
// else the sign of sorting the concatenation
int merge_ds(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& out) {
    out.clear();
    out.reserve(a.size() + b.size());
    int sign = 1;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return 0;
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            // b[j] jumps over the remaining entries of a
            if ((a.size() - i) % 2 == 1) sign = -sign;
            out.push_back(b[j++]);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return sign;
}

}  // namespace

PolyForm wedge(const PolyForm& a, const PolyForm& b) {
    if (a.n_ != b.n_) throw InputError("simplex dimension mismatch in wedge");
    PolyForm out(a.n_);
    std::vector<int> ds;
    for (const auto& [ka, ca] : a.terms_) {
        for (const auto& [kb, cb] : b.terms_) {
            int sign = merge_ds(ka.ds, kb.ds, ds);
            if (sign == 0) continue;
            FormKey k;
            k.exps.resize(a.n_);
            for (int i = 0; i < a.n_; ++i) k.exps[i] = ka.exps[i] + kb.exps[i];
            k.ds = ds;
            out.add_term(k, sign > 0 ? Rational(ca * cb) : Rational(-(ca * cb)));
        }
    }
    return out;
}

PolyForm PolyForm::d() const {
    PolyForm out(n_);
    for (const auto& [k, c] : terms_) {
        for (int j = 1; j <= n_; ++j) {
            int e = k.exps[j - 1];
            if (e == 0) continue;
            if (std::binary_search(k.ds.begin(), k.ds.end(), j)) continue;
            FormKey nk = k;
            nk.exps[j - 1] -= 1;
            // insert dt_j in front: it passes the entries of S smaller than j
            int below = static_cast<int>(std::lower_bound(k.ds.begin(), k.ds.end(), j) - k.ds.begin());
            nk.ds.insert(std::lower_bound(nk.ds.begin(), nk.ds.end(), j), j);
            Rational coef = c * e;
            out.add_term(nk, (below % 2 == 0) ? coef : Rational(-coef));
        }
    }
    return out;
}

Rational PolyForm::eval_vertex(int i) const {
    if (i < 0 || i > n_) throw InputError("vertex index out of range");
    Rational v = 0;
    for (const auto& [k, c] : terms_) {
        if (!k.ds.empty()) continue;
        bool nonzero = true;
        for (int j = 1; j <= n_; ++j) {
            if (k.exps[j - 1] > 0 && j != i) {
                nonzero = false;
                break;
            }
        }
        if (nonzero) v += c;  // t_i = 1 at e_i, so any power contributes 1
    }
    return v;
}

namespace {

// polynomials in u with PolyForm coefficients, index = power of u
using UPoly = std::vector<PolyForm>;

UPoly umul(const UPoly& a, const UPoly& b, int n) {
    UPoly out(a.size() + b.size() - 1, PolyForm::zero(n));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b[j].is_zero()) continue;
            out[i + j] += wedge(a[i], b[j]);
        }
    }
    return out;
}

}  // namespace

PolyForm PolyForm::poincare_h(int i) const {
    if (i < 0 || i > n_) throw InputError("vertex index out of range");
    PolyForm out(n_);
    for (const auto& [key, c] : terms_) {
        const int k = key.form_degree();
        if (k == 0) continue;

        // substitute t_j -> u t_j + (1-u) delta_{ij} into the monomial part
        UPoly base{PolyForm::constant(n_, 1)};
        for (int j = 1; j <= n_; ++j) {
            int e = key.exps[j - 1];
            if (e == 0) continue;
            UPoly fac(e + 1, PolyForm::zero(n_));
            if (j != i) {
                std::vector<int> ex(n_, 0);
                ex[j - 1] = e;
                fac[e] = PolyForm::monomial(n_, ex, {}, 1);
            } else {
                // (u t_i + (1-u))^e
                for (int b = 0; b <= e; ++b) {
                    std::vector<int> ex(n_, 0);
                    ex[i - 1] = b;
                    PolyForm tb = PolyForm::monomial(n_, ex, {}, rat_binomial(e, b));
                    for (int cc = 0; cc <= e - b; ++cc) {
                        Rational w = rat_binomial(e - b, cc);
                        if (cc % 2 == 1) w = -w;
                        fac[b + cc] += w * tb;
                    }
                }
            }
            base = umul(base, fac, n_);
        }

        // dt_{s_r} contributes (t_{s_r} - delta_{i,s_r}) du; the remaining
        // k-1 dt's each contribute a factor u; du moves left past r dt's.
        for (int r = 0; r < k; ++r) {
            int s = key.ds[r];
            PolyForm lin = PolyForm::coordinate(n_, s);
            if (s == i) lin -= PolyForm::constant(n_, 1);
            if (lin.is_zero()) continue;

            PolyForm integ(n_);
            for (std::size_t m = 0; m < base.size(); ++m) {
                if (base[m].is_zero()) continue;
                integ += base[m] * Rational(1, static_cast<long>(m) + k);  // int u^{m+k-1}
            }
            if (integ.is_zero()) continue;

            std::vector<int> rest;
            rest.reserve(k - 1);
            for (int q = 0; q < k; ++q)
                if (q != r) rest.push_back(key.ds[q]);
            PolyForm dts = PolyForm::monomial(n_, std::vector<int>(n_, 0), rest, 1);

            Rational coef = (r % 2 == 0) ? c : Rational(-c);
            out += coef * wedge(wedge(integ, lin), dts);
        }
    }
    return out;
}

PolyForm PolyForm::form_degree_component(int k) const {
    PolyForm out(n_);
    for (const auto& [key, c] : terms_)
        if (key.form_degree() == k) out.terms_.emplace(key, c);
    return out;
}

int PolyForm::max_form_degree() const {
    int m = 0;
    for (const auto& [key, c] : terms_) m = std::max(m, key.form_degree());
    return m;
}

int PolyForm::max_poly_degree() const {
    int m = 0;
    for (const auto& [key, c] : terms_) {
        int d = 0;
        for (int e : key.exps) d += e;
        m = std::max(m, d);
    }
    return m;
}

int PolyForm::homogeneous_degree() const {
    if (terms_.empty()) return -1;
    int d = terms_.begin()->first.form_degree();
    for (const auto& [key, c] : terms_)
        if (key.form_degree() != d) throw InputError("form is not homogeneous");
    return d;
}

AffineSimplexMap::AffineSimplexMap(int src_dim, int tgt_dim, std::vector<Expr> rows)
    : src_(src_dim), tgt_(tgt_dim), rows_(std::move(rows)) {
    if (src_ < 0 || tgt_ < 0) throw InputError("negative simplex dimension");
    if (static_cast<int>(rows_.size()) != tgt_ + 1)
        throw InputError("affine map needs one expression per target coordinate");
    Rational csum = 0;
    std::vector<Rational> lin(src_, 0);
    for (const auto& r : rows_) {
        if (static_cast<int>(r.coeff.size()) != src_)
            throw InputError("affine expression has wrong arity");
        csum += r.constant;
        for (int i = 0; i < src_; ++i) lin[i] += r.coeff[i];
    }
    if (csum != 1) throw InputError("target coordinates do not sum to 1");
    for (const auto& v : lin)
        if (!mch::is_zero(v)) throw InputError("target coordinates do not sum to 1");
}

AffineSimplexMap AffineSimplexMap::from_vertex_map(int src_dim, int tgt_dim,
                                                   const std::vector<int>& img) {
    if (static_cast<int>(img.size()) != src_dim + 1)
        throw InputError("vertex map has wrong length");
    std::vector<Expr> rows(tgt_dim + 1, Expr{0, std::vector<Rational>(src_dim, 0)});
    for (int r = 0; r <= src_dim; ++r) {
        int j = img[r];
        if (j < 0 || j > tgt_dim) throw InputError("vertex image out of range");
        if (r == 0) {
            // t^src_0 = 1 - sum of the others
            rows[j].constant += 1;
            for (int i = 1; i <= src_dim; ++i) rows[j].coeff[i - 1] -= 1;
        } else {
            rows[j].coeff[r - 1] += 1;
        }
    }
    return AffineSimplexMap(src_dim, tgt_dim, std::move(rows));
}

AffineSimplexMap AffineSimplexMap::identity(int n) {
    std::vector<int> img(n + 1);
    for (int i = 0; i <= n; ++i) img[i] = i;
    return from_vertex_map(n, n, img);
}

AffineSimplexMap AffineSimplexMap::face(int n, int j) {
    if (j < 0 || j > n) throw InputError("face index out of range");
    std::vector<int> img;
    for (int i = 0; i <= n; ++i)
        if (i != j) img.push_back(i);
    return from_vertex_map(n - 1, n, img);
}

AffineSimplexMap AffineSimplexMap::degeneracy(int n, int j) {
    if (j < 0 || j > n) throw InputError("degeneracy index out of range");
    std::vector<int> img(n + 2);
    for (int i = 0; i <= n + 1; ++i) img[i] = (i <= j) ? i : i - 1;
    return from_vertex_map(n + 1, n, img);
}

AffineSimplexMap AffineSimplexMap::vertex(int n, int i) {
    return from_vertex_map(0, n, {i});
}

AffineSimplexMap AffineSimplexMap::collapse(int n, int i, const std::vector<int>& J) {
    std::vector<int> img(n + 1);
    for (int r = 0; r <= n; ++r) {
        bool in_j = std::find(J.begin(), J.end(), r) != J.end();
        img[r] = in_j ? i : r;
    }
    if (std::find(J.begin(), J.end(), i) != J.end())
        throw InputError("collapse target belongs to the collapsed set");
    return from_vertex_map(n, n, img);
}

AffineSimplexMap AffineSimplexMap::then(const AffineSimplexMap& outer) const {
    if (tgt_ != outer.src_) throw InputError("affine maps not composable");
    std::vector<Expr> rows(outer.tgt_ + 1, Expr{0, std::vector<Rational>(src_, 0)});
    for (int j = 0; j <= outer.tgt_; ++j) {
        const Expr& oe = outer.rows_[j];
        rows[j].constant = oe.constant;
        for (int m = 1; m <= tgt_; ++m) {
            const Rational& a = oe.coeff[m - 1];
            if (mch::is_zero(a)) continue;
            rows[j].constant += a * rows_[m].constant;
            for (int i = 0; i < src_; ++i) rows[j].coeff[i] += a * rows_[m].coeff[i];
        }
    }
    return AffineSimplexMap(src_, outer.tgt_, std::move(rows));
}

PolyForm AffineSimplexMap::coordinate_pullback(int j) const {
    if (j < 0 || j > tgt_) throw InputError("coordinate index out of range");
    const Expr& e = rows_[j];
    PolyForm f = PolyForm::constant(src_, e.constant);
    for (int i = 1; i <= src_; ++i) {
        if (mch::is_zero(e.coeff[i - 1])) continue;
        f += e.coeff[i - 1] * PolyForm::coordinate(src_, i);
    }
    return f;
}

PolyForm pullback(const AffineSimplexMap& m, const PolyForm& a) {
    if (a.simplex_dim() != m.target_dim())
        throw InputError("pullback: form does not live on the target simplex");
    const int src = m.source_dim();
    std::vector<PolyForm> coord(m.target_dim() + 1, PolyForm::zero(src));
    std::vector<PolyForm> dcoord(m.target_dim() + 1, PolyForm::zero(src));
    for (int j = 1; j <= m.target_dim(); ++j) {
        coord[j] = m.coordinate_pullback(j);
        dcoord[j] = coord[j].d();
    }
    PolyForm out(src);
    for (const auto& [key, c] : a.terms()) {
        PolyForm prod = PolyForm::constant(src, c);
        for (int j = 1; j <= m.target_dim(); ++j) {
            for (int e = 0; e < key.exps[j - 1]; ++e) {
                prod = wedge(prod, coord[j]);
                if (prod.is_zero()) break;
            }
            if (prod.is_zero()) break;
        }
        if (prod.is_zero()) continue;
        for (int s : key.ds) {
            prod = wedge(prod, dcoord[s]);
            if (prod.is_zero()) break;
        }
        out += prod;
    }
    return out;
}

std::string to_string(const PolyForm& a) {
    if (a.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, c] : a.terms()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << rat_str(c) << ")";
        for (int j = 1; j <= a.simplex_dim(); ++j) {
            int e = key.exps[j - 1];
            if (e == 0) continue;
            os << " t" << j;
            if (e > 1) os << "^" << e;
        }
        for (int s : key.ds) os << " dt" << s;
    }
    return os.str();
}

}  // namespace mch
