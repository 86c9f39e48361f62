#include "mch/linf.hpp"

#include <algorithm>
#include <sstream>

namespace mch {

void AlgElement::add(int idx, const Rational& c) {
    if (mch::is_zero(c)) return;
    auto it = c_.find(idx);
    if (it == c_.end()) {
        c_.emplace(idx, c);
    } else {
        it->second += c;
        if (mch::is_zero(it->second)) c_.erase(it);
    }
}

Rational AlgElement::coeff(int idx) const {
    auto it = c_.find(idx);
    return it == c_.end() ? Rational(0) : it->second;
}

AlgElement& AlgElement::operator+=(const AlgElement& o) {
    for (const auto& [i, c] : o.c_) add(i, c);
    return *this;
}

AlgElement& AlgElement::operator-=(const AlgElement& o) {
    for (const auto& [i, c] : o.c_) add(i, -c);
    return *this;
}

AlgElement& AlgElement::operator*=(const Rational& c) {
    if (mch::is_zero(c)) {
        c_.clear();
        return *this;
    }
    for (auto& [i, v] : c_) v *= c;
    return *this;
}

AlgElement AlgElement::operator-() const {
    AlgElement r;
    for (const auto& [i, c] : c_) r.c_.emplace(i, -c);
    return r;
}

AlgElement AlgElement::unit(int idx, const Rational& c) {
    AlgElement r;
    r.add(idx, c);
    return r;
}

void SymMap::set(std::vector<int> sorted_tuple, AlgElement value) {
    if (static_cast<int>(sorted_tuple.size()) != arity_) throw InputError("tuple arity mismatch");
    if (!std::is_sorted(sorted_tuple.begin(), sorted_tuple.end()))
        throw InputError("structure constant tuples must be sorted");
    if (value.is_zero())
        rows_.erase(sorted_tuple);
    else
        rows_[std::move(sorted_tuple)] = std::move(value);
}

const AlgElement* SymMap::find(const std::vector<int>& t) const {
    auto it = rows_.find(t);
    return it == rows_.end() ? nullptr : &it->second;
}

CurvedLinfPresentation::CurvedLinfPresentation(std::vector<BasisVector> basis, int cutoff_w,
                                               int arity_cap)
    : basis_(std::move(basis)), cutoff_w_(cutoff_w), arity_cap_(arity_cap) {
    if (cutoff_w_ < 1) throw InputError("cutoff must be >= 1");
    if (arity_cap_ < 1) throw InputError("arity cap must be >= 1");
    for (int i = 0; i < dim(); ++i) {
        const auto& b = basis_[i];
        if (b.weight < 1) throw InputError("basis weight must be >= 1: " + b.name);
        if (b.weight > cutoff_w_)
            throw InputError("basis vector above the nilpotency cutoff: " + b.name);
        if (!index_.emplace(b.name, i).second) throw InputError("duplicate basis name: " + b.name);
    }
    brackets_.assign(arity_cap_ + 1, SymMap());
    for (int k = 0; k <= arity_cap_; ++k) brackets_[k] = SymMap(k);
}

int CurvedLinfPresentation::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw InputError("unknown basis name: " + name);
    return it->second;
}

void CurvedLinfPresentation::set_bracket(const std::vector<std::string>& in,
                                         const AlgElement& out) {
    std::vector<int> tuple;
    tuple.reserve(in.size());
    for (const auto& s : in) tuple.push_back(index_of(s));
    set_bracket_indices(std::move(tuple), out);
}

void CurvedLinfPresentation::set_bracket_indices(std::vector<int> tuple, AlgElement out) {
    const int k = static_cast<int>(tuple.size());
    if (k > arity_cap_) throw InputError("bracket arity above the cap");
    int sign = koszul_sort(
        tuple, [&](int i) { return basis_[i].degree; }, [](int i) { return i; });
    for (int i = 0; i + 1 < k; ++i)
        if (tuple[i] == tuple[i + 1] && (basis_[tuple[i]].degree & 1)) {
            if (!out.is_zero())
                throw InputError("bracket on a repeated odd generator must vanish");
            return;
        }
    if (sign < 0) out *= Rational(-1);
    brackets_[k].set(std::move(tuple), std::move(out));
}

const SymMap* CurvedLinfPresentation::bracket_map(int arity) const {
    if (arity < 0 || arity > arity_cap_) return nullptr;
    return &brackets_[arity];
}

AlgElement CurvedLinfPresentation::bracket_basis(std::vector<int> tuple) const {
    const int k = static_cast<int>(tuple.size());
    if (k > arity_cap_) return {};
    int wsum = 0;
    for (int i : tuple) wsum += basis_[i].weight;
    if (wsum > cutoff_w_) return {};
    int sign = koszul_sort(
        tuple, [&](int i) { return basis_[i].degree; }, [](int i) { return i; });
    for (int i = 0; i + 1 < k; ++i)
        if (tuple[i] == tuple[i + 1] && (basis_[tuple[i]].degree & 1)) return {};
    const AlgElement* v = brackets_[k].find(tuple);
    if (!v) return {};
    AlgElement out = *v;
    if (sign < 0) out *= Rational(-1);
    return out;
}

AlgElement CurvedLinfPresentation::bracket(const std::vector<AlgElement>& args) const {
    const int k = static_cast<int>(args.size());
    if (k > arity_cap_) return {};
    AlgElement out;
    std::vector<int> tuple(k);
    Rational coef = 1;
    auto rec = [&](auto&& self, int pos, const Rational& c) -> void {
        if (pos == k) {
            AlgElement v = bracket_basis(tuple);
            v *= c;
            out += v;
            return;
        }
        for (const auto& [i, ci] : args[pos].coeffs()) {
            tuple[pos] = i;
            self(self, pos + 1, Rational(c * ci));
        }
    };
    rec(rec, 0, coef);
    return out;
}

AlgElement CurvedLinfPresentation::curvature() const { return bracket_basis({}); }

AlgElement CurvedLinfPresentation::curvature_residual(const AlgElement& x) const {
    AlgElement out;
    std::vector<AlgElement> args;
    for (int n = 0; n <= cutoff_w_ && n <= arity_cap_; ++n) {
        AlgElement term = bracket(args);
        term *= Rational(1) / rat_factorial(n);
        out += term;
        args.push_back(x);
    }
    return out;
}

AlgElement CurvedLinfPresentation::graded_unary(const AlgElement& x) const {
    AlgElement out;
    for (const auto& [i, c] : x.coeffs()) {
        AlgElement db = bracket_basis({i});
        for (const auto& [j, cj] : db.coeffs())
            if (basis_[j].weight == basis_[i].weight) out.add(j, c * cj);
    }
    return out;
}

int CurvedLinfPresentation::degree_of(const AlgElement& x) const {
    if (x.is_zero()) return 0;
    int d = basis_[x.coeffs().begin()->first].degree;
    for (const auto& [i, c] : x.coeffs())
        if (basis_[i].degree != d) throw InputError("element has mixed degree");
    return d;
}

int CurvedLinfPresentation::min_weight(const AlgElement& x) const {
    int w = cutoff_w_ + 1;
    for (const auto& [i, c] : x.coeffs()) w = std::min(w, basis_[i].weight);
    return w;
}

AlgElement CurvedLinfPresentation::degree_component(const AlgElement& x, int d) const {
    AlgElement out;
    for (const auto& [i, c] : x.coeffs())
        if (basis_[i].degree == d) out.add(i, c);
    return out;
}

AlgElement CurvedLinfPresentation::truncate_weight(AlgElement x, int w) const {
    AlgElement out;
    for (const auto& [i, c] : x.coeffs())
        if (basis_[i].weight <= w) out.add(i, c);
    return out;
}

std::string CurvedLinfPresentation::tuple_names(const std::vector<int>& tuple) const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (i) os << ",";
        os << basis_[tuple[i]].name;
    }
    os << ")";
    return os.str();
}

namespace {

// all nondecreasing index tuples of the given size over 0..dim-1
void for_each_multiset(int dim, int size,
                       const std::function<void(const std::vector<int>&)>& cb) {
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

}  // namespace

void for_each_subset(int n, int k, const std::vector<int>& degrees,
                     const std::function<void(const std::vector<int>&, int)>& cb) {
    std::vector<int> sel;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(sel.size()) == k) {
            cb(sel, koszul_unshuffle_sign(degrees, sel));
            return;
        }
        for (int i = start; i <= n - (k - static_cast<int>(sel.size())); ++i) {
            sel.push_back(i);
            self(self, i + 1);
            sel.pop_back();
        }
    };
    rec(rec, 0);
}

void for_each_ordered_partition(
    int n, int k, const std::vector<int>& degrees,
    const std::function<void(const std::vector<std::vector<int>>&, int)>& cb) {
    if (k == 0) {
        if (n == 0) cb({}, 1);
        return;
    }
    std::vector<int> assign(n, 0);
    std::vector<std::vector<int>> blocks(k);
    auto emit = [&]() {
        for (auto& b : blocks) b.clear();
        std::vector<int> perm;
        perm.reserve(n);
        for (int pos = 0; pos < n; ++pos) blocks[assign[pos]].push_back(pos);
        for (const auto& b : blocks)
            for (int pos : b) perm.push_back(pos);
        cb(blocks, koszul_perm_sign(degrees, perm));
    };
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == n) {
            emit();
            return;
        }
        for (int b = 0; b < k; ++b) {
            assign[pos] = b;
            self(self, pos + 1);
        }
    };
    rec(rec, 0);
}

ValidationReport CurvedLinfPresentation::validate(int max_n) const {
    ValidationReport rep;

    // structural: degree and weight of every stored constant
    for (int k = 0; k <= arity_cap_; ++k) {
        for (const auto& [tuple, out] : brackets_[k].rows()) {
            int dsum = 1, wsum = 0;
            for (int i : tuple) {
                dsum += basis_[i].degree;
                wsum += basis_[i].weight;
            }
            for (const auto& [j, c] : out.coeffs()) {
                if (basis_[j].degree != dsum)
                    rep.items.push_back({"degree", k, {tuple_names(tuple)},
                                         "output " + basis_[j].name + " has wrong degree"});
                if (basis_[j].weight < wsum)
                    rep.items.push_back({"weight", k, {tuple_names(tuple)},
                                         "output " + basis_[j].name + " below the input weight sum"});
            }
        }
    }

    // generalized Jacobi up to the cutoffs
    if (max_n < 0) max_n = std::min(cutoff_w_, 2 * arity_cap_ - 1);
    for (int n = 0; n <= max_n; ++n) {
        for_each_multiset(dim(), n, [&](const std::vector<int>& tuple) {
            std::vector<int> degs(n);
            for (int i = 0; i < n; ++i) degs[i] = basis_[tuple[i]].degree;
            AlgElement total;
            for (int k = 0; k <= n; ++k) {
                for_each_subset(n, k, degs, [&](const std::vector<int>& sel, int sign) {
                    std::vector<int> inner;
                    inner.reserve(k);
                    std::vector<bool> used(n, false);
                    for (int p : sel) {
                        inner.push_back(tuple[p]);
                        used[p] = true;
                    }
                    AlgElement iv = bracket_basis(inner);
                    if (iv.is_zero()) return;
                    std::vector<AlgElement> outer;
                    outer.push_back(iv);
                    for (int p = 0; p < n; ++p)
                        if (!used[p]) outer.push_back(AlgElement::unit(tuple[p]));
                    AlgElement term = bracket(outer);
                    if (sign < 0) term *= Rational(-1);
                    total += term;
                });
            }
            if (!total.is_zero())
                rep.items.push_back({"jacobi", n, {tuple_names(tuple)}, "identity sum is nonzero"});
        });
    }
    return rep;
}

LinfMorphism::LinfMorphism(CurvedLinfPresentation source, CurvedLinfPresentation target,
                           int arity_cap)
    : source_(std::move(source)), target_(std::move(target)), arity_cap_(arity_cap) {
    if (arity_cap_ < 1) throw InputError("morphism arity cap must be >= 1");
    comps_.assign(arity_cap_ + 1, SymMap());
    for (int k = 0; k <= arity_cap_; ++k) comps_[k] = SymMap(k);
}

LinfMorphism LinfMorphism::identity(const CurvedLinfPresentation& l) {
    LinfMorphism f(l, l, 1);
    for (int i = 0; i < l.dim(); ++i) f.set_component_indices(1, {i}, AlgElement::unit(i));
    return f;
}

LinfMorphism LinfMorphism::strict(CurvedLinfPresentation source, CurvedLinfPresentation target,
                                  const std::map<std::string, AlgElement>& linear) {
    LinfMorphism f(std::move(source), std::move(target), 1);
    for (const auto& [name, img] : linear)
        f.set_component_indices(1, {f.source_.index_of(name)}, img);
    return f;
}

bool LinfMorphism::is_strict() const {
    for (int k = 0; k <= arity_cap_; ++k)
        if (k != 1 && !comps_[k].empty()) return false;
    return true;
}

void LinfMorphism::set_component(const std::vector<std::string>& in, const AlgElement& out) {
    std::vector<int> tuple;
    tuple.reserve(in.size());
    for (const auto& s : in) tuple.push_back(source_.index_of(s));
    set_component_indices(static_cast<int>(in.size()), std::move(tuple), out);
}

void LinfMorphism::set_component_indices(int arity, std::vector<int> tuple, AlgElement out) {
    if (arity > arity_cap_) throw InputError("component arity above the cap");
    if (static_cast<int>(tuple.size()) != arity) throw InputError("tuple arity mismatch");
    int sign = koszul_sort(
        tuple, [&](int i) { return source_.basis_vector(i).degree; }, [](int i) { return i; });
    for (std::size_t i = 0; i + 1 < tuple.size(); ++i)
        if (tuple[i] == tuple[i + 1] && (source_.basis_vector(tuple[i]).degree & 1)) {
            if (!out.is_zero())
                throw InputError("component on a repeated odd generator must vanish");
            return;
        }
    if (sign < 0) out *= Rational(-1);
    comps_[arity].set(std::move(tuple), std::move(out));
}

const SymMap* LinfMorphism::component_map(int arity) const {
    if (arity < 0 || arity > arity_cap_) return nullptr;
    return &comps_[arity];
}

AlgElement LinfMorphism::component_basis(int arity, std::vector<int> tuple) const {
    if (arity > arity_cap_) return {};
    int wsum = 0;
    for (int i : tuple) wsum += source_.basis_vector(i).weight;
    if (arity > 0 && wsum > target_.cutoff()) return {};
    int sign = koszul_sort(
        tuple, [&](int i) { return source_.basis_vector(i).degree; }, [](int i) { return i; });
    for (std::size_t i = 0; i + 1 < tuple.size(); ++i)
        if (tuple[i] == tuple[i + 1] && (source_.basis_vector(tuple[i]).degree & 1)) return {};
    const AlgElement* v = comps_[arity].find(tuple);
    if (!v) return {};
    AlgElement out = *v;
    if (sign < 0) out *= Rational(-1);
    return out;
}

AlgElement LinfMorphism::component(const std::vector<AlgElement>& args) const {
    const int k = static_cast<int>(args.size());
    if (k > arity_cap_) return {};
    AlgElement out;
    std::vector<int> tuple(k);
    auto rec = [&](auto&& self, int pos, const Rational& c) -> void {
        if (pos == k) {
            AlgElement v = component_basis(k, tuple);
            v *= c;
            out += v;
            return;
        }
        for (const auto& [i, ci] : args[pos].coeffs()) {
            tuple[pos] = i;
            self(self, pos + 1, Rational(c * ci));
        }
    };
    rec(rec, 0, Rational(1));
    return out;
}

AlgElement LinfMorphism::linear(const AlgElement& x) const {
    std::vector<AlgElement> args{x};
    return component(args);
}

AlgElement LinfMorphism::act(const AlgElement& x) const {
    AlgElement out;
    std::vector<AlgElement> args;
    const int kmax = std::min(arity_cap_, target_.cutoff());
    for (int k = 0; k <= kmax; ++k) {
        AlgElement term = component(args);
        term *= Rational(1) / rat_factorial(k);
        out += term;
        args.push_back(x);
    }
    return out;
}

namespace {

// sum over ordered partitions of the tuple positions into k blocks of
// outer(f(block_1), ..., f(block_k)) / k!, the shared shape of the
// composition formula, the morphism identity and C(f)
AlgElement partition_sum(
    const CurvedLinfPresentation& src, const std::vector<int>& tuple, int kmax,
    const std::function<AlgElement(int arity, const std::vector<int>&)>& inner,
    const std::function<AlgElement(const std::vector<AlgElement>&)>& outer,
    bool skip_full_block = false) {
    const int n = static_cast<int>(tuple.size());
    std::vector<int> degs(n);
    for (int i = 0; i < n; ++i) degs[i] = src.basis_vector(tuple[i]).degree;
    AlgElement total;
    for (int k = 0; k <= kmax; ++k) {
        AlgElement level;
        for_each_ordered_partition(n, k, degs, [&](const std::vector<std::vector<int>>& blocks,
                                                   int sign) {
            if (skip_full_block && n > 0)
                for (const auto& b : blocks)
                    if (static_cast<int>(b.size()) == n) return;
            std::vector<AlgElement> vals;
            vals.reserve(k);
            for (const auto& b : blocks) {
                std::vector<int> sub;
                sub.reserve(b.size());
                for (int p : b) sub.push_back(tuple[p]);
                AlgElement v = inner(static_cast<int>(sub.size()), sub);
                if (v.is_zero()) return;  // a zero block kills the term
                vals.push_back(std::move(v));
            }
            AlgElement term = outer(vals);
            if (term.is_zero()) return;
            if (sign < 0) term *= Rational(-1);
            level += term;
        });
        level *= Rational(1) / rat_factorial(k);
        total += level;
    }
    return total;
}

}  // namespace

ValidationReport validate_morphism(const LinfMorphism& f, int max_n) {
    ValidationReport rep;
    const auto& src = f.source();
    const auto& tgt = f.target();
    if (max_n < 0) max_n = std::min(src.cutoff(), 2 * std::max(src.arity_cap(), f.arity_cap()));
    const int kmax = std::min(tgt.arity_cap(), max_n + tgt.cutoff());

    for (int n = 0; n <= max_n; ++n) {
        for_each_multiset(src.dim(), n, [&](const std::vector<int>& tuple) {
            // lhs: sum over partitions of {f(B_1),...,f(B_k)}_M
            AlgElement lhs = partition_sum(
                src, tuple, kmax,
                [&](int arity, const std::vector<int>& sub) {
                    return f.component_basis(arity, sub);
                },
                [&](const std::vector<AlgElement>& vals) { return tgt.bracket(vals); });
            // rhs: sum over subsets of f({tuple_T}, tuple_rest)
            std::vector<int> degs(n);
            for (int i = 0; i < n; ++i) degs[i] = src.basis_vector(tuple[i]).degree;
            AlgElement rhs;
            for (int k = 0; k <= n; ++k) {
                for_each_subset(n, k, degs, [&](const std::vector<int>& sel, int sign) {
                    std::vector<int> inner;
                    std::vector<bool> used(n, false);
                    for (int p : sel) {
                        inner.push_back(tuple[p]);
                        used[p] = true;
                    }
                    AlgElement iv = src.bracket_basis(inner);
                    if (iv.is_zero()) return;
                    std::vector<AlgElement> args{iv};
                    for (int p = 0; p < n; ++p)
                        if (!used[p]) args.push_back(AlgElement::unit(tuple[p]));
                    AlgElement term = f.component(args);
                    if (sign < 0) term *= Rational(-1);
                    rhs += term;
                });
            }
            if (!(lhs == rhs))
                rep.items.push_back(
                    {"morphism", n, {src.tuple_names(tuple)}, "morphism identity fails"});
        });
    }
    return rep;
}

LinfMorphism compose_morphisms(const LinfMorphism& g, const LinfMorphism& f,
                               std::optional<int> result_cap) {
    if (!(f.target().basis() == g.source().basis()))
        throw InputError("compose: target of f is not the source of g");
    const auto& src = f.source();
    const int w = g.target().cutoff();
    int cap = result_cap ? *result_cap : std::max(f.arity_cap(), g.arity_cap());

    auto component_at = [&](int n, const std::vector<int>& tuple) {
        const int kmax = std::min(g.arity_cap(), n + w);
        return partition_sum(
            src, tuple, kmax,
            [&](int arity, const std::vector<int>& sub) { return f.component_basis(arity, sub); },
            [&](const std::vector<AlgElement>& vals) { return g.component(vals); });
    };

    LinfMorphism out(f.source(), g.target(), cap);
    for (int n = 0; n <= cap; ++n) {
        for_each_multiset(src.dim(), n, [&](const std::vector<int>& tuple) {
            AlgElement v = component_at(n, tuple);
            if (!v.is_zero()) out.set_component_indices(n, tuple, v);
        });
    }
    // arities above the cap but below the weight cutoff must not carry terms
    for (int n = cap + 1; n <= w; ++n) {
        bool lost = false;
        for_each_multiset(src.dim(), n, [&](const std::vector<int>& tuple) {
            if (lost) return;
            if (!component_at(n, tuple).is_zero()) lost = true;
        });
        if (lost)
            throw CutoffError("compose: nonzero component of arity " + std::to_string(n) +
                              " above the result cap");
    }
    return out;
}

void LinearMap::set_column(int src_idx, AlgElement img) {
    if (img.is_zero())
        cols_.erase(src_idx);
    else
        cols_[src_idx] = std::move(img);
}

AlgElement LinearMap::apply(const AlgElement& x) const {
    AlgElement out;
    for (const auto& [i, c] : x.coeffs()) {
        auto it = cols_.find(i);
        if (it == cols_.end()) continue;
        AlgElement v = it->second;
        v *= c;
        out += v;
    }
    return out;
}

namespace {

// dense exact solve of A c = v where A's columns are AlgElements over a
// dim-dimensional space; returns nullopt if v is outside the span
std::optional<std::vector<Rational>> solve_in_span(const std::vector<AlgElement>& columns, int dim,
                                                   const AlgElement& v) {
    const int m = static_cast<int>(columns.size());
    std::vector<std::vector<Rational>> a(dim, std::vector<Rational>(m + 1, Rational(0)));
    for (int j = 0; j < m; ++j)
        for (const auto& [i, c] : columns[j].coeffs()) a[i][j] = c;
    for (const auto& [i, c] : v.coeffs()) a[i][m] = c;

    std::vector<int> pivot_col_of_row;
    int row = 0;
    for (int col = 0; col < m && row < dim; ++col) {
        int pr = -1;
        for (int r = row; r < dim; ++r)
            if (!mch::is_zero(a[r][col])) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        std::swap(a[row], a[pr]);
        Rational inv = Rational(1) / a[row][col];
        for (int c2 = col; c2 <= m; ++c2) a[row][c2] *= inv;
        for (int r = 0; r < dim; ++r) {
            if (r == row || mch::is_zero(a[r][col])) continue;
            Rational factor = a[r][col];
            for (int c2 = col; c2 <= m; ++c2) a[r][c2] -= factor * a[row][c2];
        }
        pivot_col_of_row.push_back(col);
        ++row;
    }
    // consistency: rows without pivots must have zero rhs
    for (int r = row; r < dim; ++r)
        if (!mch::is_zero(a[r][m])) return std::nullopt;
    std::vector<Rational> sol(m, Rational(0));
    for (int r = 0; r < row; ++r) sol[pivot_col_of_row[r]] = a[r][m];
    return sol;
}

}  // namespace

FiberedProduct fibered_product(const LinfMorphism& f, const LinearMap& section,
                               const LinfMorphism& g) {
    const auto& l = f.source();
    const auto& m = f.target();
    const auto& nalg = g.source();
    if (!(g.target().basis() == m.basis()))
        throw InputError("fibered product: g does not land in the base of f");
    const int w = std::min(l.cutoff(), nalg.cutoff());
    const int cap = std::min(l.arity_cap(), nalg.arity_cap());

    // the section certifies the fibration: f_(1) o s = 1
    for (int i = 0; i < m.dim(); ++i) {
        AlgElement si = section.apply(AlgElement::unit(i));
        if (!(f.linear(si) == AlgElement::unit(i)))
            throw InputError("section check failed: f_(1) o s != id at " + m.basis_vector(i).name);
        if (!si.is_zero()) {
            if (l.degree_of(si) != m.basis_vector(i).degree)
                throw InputError("section is not degree 0");
            if (l.min_weight(si) < m.basis_vector(i).weight)
                throw InputError("section is not filtered");
        }
    }

    auto proj = [&](const AlgElement& x) {  // p = 1 - s f_(1)
        return x - section.apply(f.linear(x));
    };

    // adapted basis of pL: greedy from high weight down keeps exact weights
    std::vector<int> order(l.dim());
    for (int i = 0; i < l.dim(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return l.basis_vector(a).weight > l.basis_vector(b).weight;
    });
    std::vector<AlgElement> kept;       // p(b) representatives
    std::vector<int> kept_src;          // the original L index
    for (int i : order) {
        AlgElement pb = proj(AlgElement::unit(i));
        if (pb.is_zero()) continue;
        auto coords = solve_in_span(kept, l.dim(), pb);
        if (coords) continue;  // dependent on higher-weight picks
        kept.push_back(pb);
        kept_src.push_back(i);
    }

    // presentation basis: pL part then N part
    std::vector<BasisVector> pbasis;
    for (std::size_t j = 0; j < kept.size(); ++j) {
        const auto& b = l.basis_vector(kept_src[j]);
        pbasis.push_back({"L." + b.name, b.degree, b.weight});
    }
    for (int i = 0; i < nalg.dim(); ++i) {
        const auto& b = nalg.basis_vector(i);
        pbasis.push_back({"N." + b.name, b.degree, b.weight});
    }
    const int npl = static_cast<int>(kept.size());
    CurvedLinfPresentation total(pbasis, w, cap);

    auto pl_rep = [&](int p_idx) -> AlgElement {  // P basis -> its pL representative in L
        if (p_idx < npl) return kept[p_idx];
        return {};
    };
    auto n_part = [&](int p_idx) -> AlgElement {  // P basis -> its N component
        if (p_idx >= npl) return AlgElement::unit(p_idx - npl);
        return {};
    };
    auto to_pl_coords = [&](const AlgElement& v) -> AlgElement {
        // v must lie in im p; express in the kept basis
        auto coords = solve_in_span(kept, l.dim(), v);
        if (!coords) throw VerificationError("projection left the pL span");
        AlgElement out;
        for (int j = 0; j < npl; ++j) out.add(j, (*coords)[j]);
        return out;
    };

    // G_(0): z + sum_{k>=2} 1/k! s f_(k)(z,..,z) = s(g_(0) - f_(0));
    // the f_(0) term matters for curved morphisms
    AlgElement sg0 = section.apply(g.component_basis(0, {}) - f.component_basis(0, {}));
    AlgElement g0;
    for (int it = 0; it < w; ++it) {
        AlgElement corr;
        std::vector<AlgElement> args;
        args.push_back(g0);
        args.push_back(g0);
        for (int k = 2; k <= std::min(f.arity_cap(), w); ++k) {
            AlgElement t = section.apply(f.component(args));
            t *= Rational(1) / rat_factorial(k);
            corr += t;
            args.push_back(g0);
        }
        g0 = sg0 - corr;
    }

    // the linear correction z -> sum_k 1/k! s f_(k+1)(z, G_0,...,G_0)
    auto gauge_correction = [&](const AlgElement& z) {
        AlgElement corr;
        std::vector<AlgElement> args;
        args.push_back(z);
        args.push_back(g0);
        for (int k = 1; k + 1 <= std::min(f.arity_cap(), w + 1); ++k) {
            AlgElement t = section.apply(f.component(args));
            t *= Rational(1) / rat_factorial(k);
            corr += t;
            args.push_back(g0);
        }
        return corr;
    };
    auto solve_gauge = [&](const AlgElement& rhs) {
        AlgElement z;
        for (int it = 0; it <= w; ++it) z = rhs - gauge_correction(z);
        return z;
    };

    // G components per sorted P-basis tuple, kept outside the morphism until
    // the total presentation has its brackets
    std::vector<SymMap> grows(cap + 1, SymMap());
    for (int k = 0; k <= cap; ++k) grows[k] = SymMap(k);
    grows[0].set({}, g0);

    auto g_value = [&](int arity, const std::vector<int>& tuple) -> AlgElement {
        if (arity == 0) return g0;
        for (int i = 0; i + 1 < arity; ++i)
            if (tuple[i] == tuple[i + 1] && (total.basis_vector(tuple[i]).degree & 1)) return {};
        const AlgElement* v = grows[arity].find(tuple);
        return v ? *v : AlgElement{};
    };

    for (int n = 1; n <= cap; ++n) {
        for_each_multiset(total.dim(), n, [&](const std::vector<int>& tuple) {
            AlgElement rhs;
            if (n == 1) {
                std::vector<AlgElement> fz{n_part(tuple[0])};
                rhs = pl_rep(tuple[0]) + section.apply(g.component(fz));
            } else {
                std::vector<AlgElement> fz;
                fz.reserve(n);
                for (int p : tuple) fz.push_back(n_part(p));
                rhs = section.apply(g.component(fz));
                // minus the partitions of G-values with no full block
                AlgElement mixed = partition_sum(
                    total, tuple, std::min(f.arity_cap(), n + w),
                    [&](int arity, const std::vector<int>& sub) { return g_value(arity, sub); },
                    [&](const std::vector<AlgElement>& vals) {
                        return section.apply(f.component(vals));
                    },
                    /*skip_full_block=*/true);
                // the k=1 term of that sum is s f_(1) G_(n) which belongs to
                // the left side; partitions with one block are excluded by
                // skip_full_block, so nothing to remove here
                rhs -= mixed;
            }
            AlgElement z = solve_gauge(rhs);
            if (!z.is_zero()) grows[n].set(tuple, z);
        });
    }

    // brackets of P: N part is the N bracket, pL part is p of the
    // compatibility sum over all partitions of G-values
    for (int n = 0; n <= cap; ++n) {
        for_each_multiset(total.dim(), n, [&](const std::vector<int>& tuple) {
            std::vector<AlgElement> nparts;
            nparts.reserve(n);
            for (int p : tuple) nparts.push_back(n_part(p));
            AlgElement nb = nalg.bracket(nparts);

            AlgElement lsum = partition_sum(
                total, tuple, std::min(l.arity_cap(), n + w),
                [&](int arity, const std::vector<int>& sub) { return g_value(arity, sub); },
                [&](const std::vector<AlgElement>& vals) { return l.bracket(vals); });
            AlgElement plpart = to_pl_coords(proj(lsum));

            AlgElement out;
            for (const auto& [j, c] : plpart.coeffs()) out.add(j, c);
            for (const auto& [j, c] : nb.coeffs()) out.add(npl + j, c);
            if (!out.is_zero()) total.set_bracket_indices(tuple, out);
        });
    }

    // the morphisms are built from the completed presentation
    LinfMorphism gmor(total, l, cap);
    for (int k = 0; k <= cap; ++k)
        for (const auto& [tuple, v] : grows[k].rows()) gmor.set_component_indices(k, tuple, v);

    LinfMorphism fmor(total, nalg, 1);
    for (int j = 0; j < nalg.dim(); ++j)
        fmor.set_component_indices(1, {npl + j}, AlgElement::unit(j));

    FiberedProduct result;
    result.to_base_strict = std::move(fmor);
    result.to_fiber = std::move(gmor);
    for (int j = 0; j < npl; ++j) result.pl_indices.push_back(j);
    for (int j = 0; j < nalg.dim(); ++j) result.n_indices.push_back(npl + j);
    result.total = std::move(total);
    return result;
}

}  // namespace mch
