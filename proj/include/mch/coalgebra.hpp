// Words in the completed symmetric coalgebra C(V), the coderivations
// delta and mu = delta - D, the tensor-trick lift of a contraction
// (bold p, i, h) and the perturbed operators p_mu, i_mu, d_mu.
//
// Everything is templated on an Ops type describing the carrier:
//
//   struct Ops {
//     using VLetter = ...;   // ordered, members .degree and .weight
//     using WLetter = ...;
//     Elem<VLetter> bracket(const std::vector<Elem<VLetter>>&) const;
//     Elem<VLetter> applyD(const Elem<VLetter>&) const;
//     Elem<VLetter> applyH(const Elem<VLetter>&) const;
//     Elem<WLetter> applyP(const Elem<VLetter>&) const;
//     Elem<VLetter> applyI(const Elem<WLetter>&) const;
//     Elem<WLetter> applyDSmall(const Elem<WLetter>&) const;
//   };
//
// Truncation: words longer than N or heavier than the cutoff W vanish.
// Dropping weight > W is sound because every operator here is filtered;
// dropping length > N while the weight is still <= W would lose visible
// terms, so it raises CutoffError instead.

#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mch/errors.hpp"
#include "mch/graded.hpp"
#include "mch/rational.hpp"

namespace mch {

template <class L>
using Elem = std::map<L, Rational>;

template <class L>
void elem_add(Elem<L>& e, const L& letter, const Rational& c) {
    if (mch::is_zero(c)) return;
    auto it = e.find(letter);
    if (it == e.end()) {
        e.emplace(letter, c);
    } else {
        it->second += c;
        if (mch::is_zero(it->second)) e.erase(it);
    }
}

template <class L>
void elem_add(Elem<L>& e, const Elem<L>& o, const Rational& scale = 1) {
    for (const auto& [l, c] : o) elem_add(e, l, Rational(c * scale));
}

template <class L>
struct Word {
    std::vector<L> letters;  // canonical: sorted
    auto operator<=>(const Word&) const = default;

    int length() const { return static_cast<int>(letters.size()); }
    int degree() const {
        int d = 0;
        for (const auto& l : letters) d += l.degree;
        return d;
    }
    int weight() const {
        int w = 0;
        for (const auto& l : letters) w += l.weight;
        return w;
    }
};

// sort the letters, returning the Koszul sign, or 0 if an odd letter repeats
template <class L>
int canonicalize_letters(std::vector<L>& ls) {
    int sign = koszul_sort(
        ls, [](const L& l) { return l.degree; }, [](const L& l) { return l; });
    for (std::size_t i = 0; i + 1 < ls.size(); ++i)
        if (ls[i] == ls[i + 1] && (ls[i].degree & 1)) return 0;
    return sign;
}

template <class L>
using WordSum = std::map<Word<L>, Rational>;

template <class L>
using PairSum = std::map<std::pair<Word<L>, Word<L>>, Rational>;

template <class Ops>
class Coalgebra {
public:
    using VL = typename Ops::VLetter;
    using WL = typename Ops::WLetter;

    Coalgebra(const Ops& ops, int max_len, int cutoff_w)
        : ops_(ops), n_(max_len), w_(cutoff_w) {}

    int max_len() const { return n_; }
    int cutoff() const { return w_; }

    // --- word sums ---

    template <class L>
    void add_word(WordSum<L>& ws, std::vector<L> letters, const Rational& c) const {
        if (mch::is_zero(c)) return;
        int sign = canonicalize_letters(letters);
        if (sign == 0) return;
        Word<L> w{std::move(letters)};
        if (w.weight() > w_) return;  // invisible beyond the cutoff
        if (w.length() > n_)
            throw CutoffError("word of length " + std::to_string(w.length()) +
                              " and weight <= cutoff lost at truncation length " +
                              std::to_string(n_));
        Rational v = sign < 0 ? Rational(-c) : c;
        auto it = ws.find(w);
        if (it == ws.end()) {
            ws.emplace(std::move(w), v);
        } else {
            it->second += v;
            if (mch::is_zero(it->second)) ws.erase(it);
        }
    }

    // exp-truncation of a degree-0 element
    WordSum<VL> exp_trunc(const Elem<VL>& x) const {
        WordSum<VL> total;
        add_word(total, std::vector<VL>{}, 1);
        WordSum<VL> layer = total;
        for (int k = 1; k <= n_; ++k) {
            WordSum<VL> next;
            for (const auto& [w, c] : layer) {
                if (w.length() != k - 1) continue;
                for (const auto& [l, cl] : x) {
                    std::vector<VL> ls = w.letters;
                    ls.push_back(l);
                    if (Word<VL>{ls}.weight() > w_) continue;
                    add_word(next, std::move(ls), Rational(c * cl / k));
                }
            }
            if (next.empty()) break;
            for (const auto& [w, c] : next) {
                auto it = total.find(w);
                if (it == total.end()) total.emplace(w, c);
                else it->second += c;
            }
            layer = std::move(next);
        }
        return total;
    }

    template <class L>
    Elem<L> proj1(const WordSum<L>& ws) const {
        Elem<L> out;
        for (const auto& [w, c] : ws)
            if (w.length() == 1) elem_add(out, w.letters[0], c);
        return out;
    }

    // --- coderivations ---

    // delta(word) = sum over subsets T of (unshuffle sign) [bracket(T), rest]
    WordSum<VL> delta_word(const Word<VL>& w) const {
        WordSum<VL> out;
        const int k = w.length();
        std::vector<int> degs(k);
        for (int i = 0; i < k; ++i) degs[i] = w.letters[i].degree;
        for (int j = 0; j <= k; ++j) {
            for_each_subset_(k, j, degs, [&](const std::vector<int>& sel, int sign) {
                std::vector<Elem<VL>> args;
                args.reserve(j);
                std::vector<bool> used(k, false);
                for (int p : sel) {
                    Elem<VL> e;
                    elem_add(e, w.letters[p], Rational(1));
                    args.push_back(std::move(e));
                    used[p] = true;
                }
                Elem<VL> b = ops_.bracket(args);
                if (b.empty()) return;
                std::vector<VL> rest;
                for (int p = 0; p < k; ++p)
                    if (!used[p]) rest.push_back(w.letters[p]);
                for (const auto& [l, c] : b) {
                    std::vector<VL> ls;
                    ls.reserve(rest.size() + 1);
                    ls.push_back(l);
                    ls.insert(ls.end(), rest.begin(), rest.end());
                    add_word(out, std::move(ls), sign < 0 ? Rational(-c) : c);
                }
            });
        }
        return out;
    }

    // coderivation extension of a linear slot operator
    template <class L, class Fn>
    WordSum<L> coderivation_word(const Word<L>& w, int op_degree, Fn&& slot) const {
        WordSum<L> out;
        const int k = w.length();
        int degsum = 0;
        for (int i = 0; i < k; ++i) {
            Elem<L> img = slot(w.letters[i]);
            int sign = ((op_degree & 1) && (degsum & 1)) ? -1 : 1;
            for (const auto& [l, c] : img) {
                std::vector<L> ls = w.letters;
                ls[i] = l;
                add_word(out, std::move(ls), sign < 0 ? Rational(-c) : c);
            }
            degsum += w.letters[i].degree;
        }
        return out;
    }

    WordSum<VL> codD_word(const Word<VL>& w) const {
        return coderivation_word(w, 1, [&](const VL& l) {
            Elem<VL> e;
            elem_add(e, l, Rational(1));
            return ops_.applyD(e);
        });
    }

    WordSum<WL> codDSmall_word(const Word<WL>& w) const {
        return coderivation_word(w, 1, [&](const WL& l) {
            Elem<WL> e;
            elem_add(e, l, Rational(1));
            return ops_.applyDSmall(e);
        });
    }

    // mu = delta - D as a coderivation
    WordSum<VL> mu_word(const Word<VL>& w) const {
        WordSum<VL> out = delta_word(w);
        for (const auto& [ww, c] : codD_word(w)) {
            auto it = out.find(ww);
            if (it == out.end()) {
                out.emplace(ww, -c);
            } else {
                it->second -= c;
                if (mch::is_zero(it->second)) out.erase(it);
            }
        }
        return out;
    }

    template <class L, class Fn>
    WordSum<L> lift(const WordSum<L>& ws, Fn&& per_word) const {
        WordSum<L> out;
        for (const auto& [w, c] : ws)
            for (const auto& [w2, c2] : per_word(w)) {
                auto it = out.find(w2);
                if (it == out.end()) out.emplace(w2, Rational(c * c2));
                else {
                    it->second += c * c2;
                    if (mch::is_zero(it->second)) out.erase(it);
                }
            }
        return out;
    }

    WordSum<VL> mu(const WordSum<VL>& ws) const {
        return lift(ws, [&](const Word<VL>& w) { return mu_word(w); });
    }

    // --- the tensor trick ---

    // bold h: (1/n) sum over the h-slot and over subsets of the remaining
    // slots receiving ip, weighted by 1/binom(n-1, |subset|)
    WordSum<VL> bold_h_word(const Word<VL>& w) const {
        WordSum<VL> out;
        const int n = w.length();
        if (n == 0) return out;
        for (int hslot = 0; hslot < n; ++hslot) {
            int degbefore = 0;
            for (int m = 0; m < hslot; ++m) degbefore += w.letters[m].degree;
            int hsign = (degbefore & 1) ? -1 : 1;
            Elem<VL> hval;
            {
                Elem<VL> e;
                elem_add(e, w.letters[hslot], Rational(1));
                hval = ops_.applyH(e);
            }
            if (hval.empty()) continue;

            std::vector<int> others;
            for (int m = 0; m < n; ++m)
                if (m != hslot) others.push_back(m);
            const int r = n - 1;
            for (int mask = 0; mask < (1 << r); ++mask) {
                int bits = 0;
                for (int b = 0; b < r; ++b)
                    if (mask & (1 << b)) ++bits;
                Rational weight = Rational(1) / (Rational(n) * rat_binomial(r, bits));
                // slots in `mask` get ip (degree 0, no signs), the rest stay
                std::vector<Elem<VL>> slotvals(n);
                bool dead = false;
                for (int b = 0; b < r && !dead; ++b) {
                    int m = others[b];
                    Elem<VL> e;
                    elem_add(e, w.letters[m], Rational(1));
                    if (mask & (1 << b)) {
                        slotvals[m] = ops_.applyI(ops_.applyP(e));
                        if (slotvals[m].empty()) dead = true;
                    } else {
                        slotvals[m] = std::move(e);
                    }
                }
                if (dead) continue;
                slotvals[hslot] = hval;
                // expand the product of slot values
                std::vector<VL> pickedl(n);
                auto rec = [&](auto&& self, int pos, const Rational& c) -> void {
                    if (pos == n) {
                        std::vector<VL> ls = pickedl;
                        add_word(out, std::move(ls), c);
                        return;
                    }
                    for (const auto& [l, cl] : slotvals[pos]) {
                        pickedl[pos] = l;
                        self(self, pos + 1, Rational(c * cl));
                    }
                };
                rec(rec, 0, hsign < 0 ? Rational(-weight) : weight);
            }
        }
        return out;
    }

    WordSum<VL> bold_h(const WordSum<VL>& ws) const {
        return lift(ws, [&](const Word<VL>& w) { return bold_h_word(w); });
    }

    WordSum<WL> bold_p(const WordSum<VL>& ws) const {
        WordSum<WL> out;
        for (const auto& [w, c] : ws) {
            const int n = w.length();
            std::vector<Elem<WL>> slotvals(n);
            bool dead = false;
            for (int m = 0; m < n && !dead; ++m) {
                Elem<VL> e;
                elem_add(e, w.letters[m], Rational(1));
                slotvals[m] = ops_.applyP(e);
                if (slotvals[m].empty()) dead = true;
            }
            if (dead) continue;
            std::vector<WL> picked(n);
            auto rec = [&](auto&& self, int pos, const Rational& cc) -> void {
                if (pos == n) {
                    std::vector<WL> ls = picked;
                    add_word(out, std::move(ls), cc);
                    return;
                }
                for (const auto& [l, cl] : slotvals[pos]) {
                    picked[pos] = l;
                    self(self, pos + 1, Rational(cc * cl));
                }
            };
            rec(rec, 0, c);
        }
        return out;
    }

    WordSum<VL> bold_i(const WordSum<WL>& ws) const {
        WordSum<VL> out;
        for (const auto& [w, c] : ws) {
            const int n = w.length();
            std::vector<Elem<VL>> slotvals(n);
            bool dead = false;
            for (int m = 0; m < n && !dead; ++m) {
                Elem<WL> e;
                elem_add(e, w.letters[m], Rational(1));
                slotvals[m] = ops_.applyI(e);
                if (slotvals[m].empty()) dead = true;
            }
            if (dead) continue;
            std::vector<VL> picked(n);
            auto rec = [&](auto&& self, int pos, const Rational& cc) -> void {
                if (pos == n) {
                    std::vector<VL> ls = picked;
                    add_word(out, std::move(ls), cc);
                    return;
                }
                for (const auto& [l, cl] : slotvals[pos]) {
                    picked[pos] = l;
                    self(self, pos + 1, Rational(cc * cl));
                }
            };
            rec(rec, 0, c);
        }
        return out;
    }

    // --- perturbed operators; the series end when a term vanishes exactly ---

    int series_cap() const { return n_ + 2 * w_ + 2; }

    WordSum<VL> inv_one_plus_mu_h(WordSum<VL> ws) const {
        WordSum<VL> total = ws;
        for (int j = 0; j <= series_cap(); ++j) {
            if (ws.empty()) return total;
            ws = mu(bold_h(ws));
            negate_(ws);
            accumulate_(total, ws);
        }
        throw CutoffError("the series (1 + mu h)^{-1} did not terminate");
    }

    WordSum<VL> inv_one_plus_h_mu(WordSum<VL> ws) const {
        WordSum<VL> total = ws;
        for (int j = 0; j <= series_cap(); ++j) {
            if (ws.empty()) return total;
            ws = bold_h(mu(ws));
            negate_(ws);
            accumulate_(total, ws);
        }
        throw CutoffError("the series (1 + h mu)^{-1} did not terminate");
    }

    WordSum<WL> p_mu(const WordSum<VL>& ws) const { return bold_p(inv_one_plus_mu_h(ws)); }

    WordSum<VL> i_mu(const WordSum<WL>& ws) const { return inv_one_plus_h_mu(bold_i(ws)); }

    WordSum<WL> d_mu(const WordSum<WL>& ws) const {
        WordSum<WL> out = lift(ws, [&](const Word<WL>& w) { return codDSmall_word(w); });
        accumulate_(out, bold_p(inv_one_plus_mu_h(mu(bold_i(ws)))));
        return out;
    }

    // --- coproduct, for the coalgebra-law tests ---

    template <class L>
    PairSum<L> nabla(const Word<L>& w) const {
        PairSum<L> out;
        const int k = w.length();
        std::vector<int> degs(k);
        for (int i = 0; i < k; ++i) degs[i] = w.letters[i].degree;
        for (int j = 0; j <= k; ++j) {
            for_each_subset_(k, j, degs, [&](const std::vector<int>& sel, int sign) {
                std::vector<L> left, right;
                std::vector<bool> used(k, false);
                for (int p : sel) {
                    left.push_back(w.letters[p]);
                    used[p] = true;
                }
                for (int p = 0; p < k; ++p)
                    if (!used[p]) right.push_back(w.letters[p]);
                auto key = std::make_pair(Word<L>{std::move(left)}, Word<L>{std::move(right)});
                auto it = out.find(key);
                Rational v = sign < 0 ? Rational(-1) : Rational(1);
                if (it == out.end()) out.emplace(std::move(key), v);
                else {
                    it->second += v;
                    if (mch::is_zero(it->second)) out.erase(it);
                }
            });
        }
        return out;
    }

    const Ops& ops() const { return ops_; }

private:
    template <class L>
    static void negate_(WordSum<L>& ws) {
        for (auto& [w, c] : ws) c = -c;
    }
    template <class L>
    static void accumulate_(WordSum<L>& total, const WordSum<L>& inc) {
        for (const auto& [w, c] : inc) {
            auto it = total.find(w);
            if (it == total.end()) total.emplace(w, c);
            else {
                it->second += c;
                if (mch::is_zero(it->second)) total.erase(it);
            }
        }
    }
    static void for_each_subset_(int n, int k, const std::vector<int>& degrees,
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

    const Ops& ops_;
    int n_;
    int w_;
};

}  // namespace mch
