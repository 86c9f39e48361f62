#include <doctest.h>

#include "generators.hpp"
#include "mch/transfer.hpp"

using namespace mch;
using namespace mch::testgen;

namespace {

using BL = BasisLetter;

WordSum<BL> single(const Word<BL>& w) {
    WordSum<BL> ws;
    ws.emplace(w, Rational(1));
    return ws;
}

Word<BL> word_of(const CurvedLinfPresentation& l, const std::vector<int>& tuple) {
    std::vector<BL> ls;
    for (int i : tuple) {
        const auto& b = l.basis_vector(i);
        ls.push_back(BL{i, b.degree, b.weight});
    }
    int sign = canonicalize_letters(ls);
    REQUIRE(sign == 1);  // test tuples are chosen canonical
    return Word<BL>{ls};
}

// (fa (x) fb) applied to a two-sided tensor; deg_fb odd picks up the sign
// of the left word
template <class LA, class LB, class FA, class FB>
std::map<std::pair<Word<LA>, Word<LB>>, Rational> map_pair(
    const std::map<std::pair<Word<BL>, Word<BL>>, Rational>& ps, FA&& fa, FB&& fb, int deg_fb) {
    std::map<std::pair<Word<LA>, Word<LB>>, Rational> out;
    for (const auto& [pr, c] : ps) {
        int sign = ((deg_fb & 1) && (pr.first.degree() & 1)) ? -1 : 1;
        WordSum<LA> a = fa(single(pr.first));
        WordSum<LB> b = fb(single(pr.second));
        for (const auto& [wa, ca] : a)
            for (const auto& [wb, cb] : b) {
                Rational v = c * ca * cb;
                if (sign < 0) v = -v;
                auto key = std::make_pair(wa, wb);
                auto it = out.find(key);
                if (it == out.end()) out.emplace(key, v);
                else {
                    it->second += v;
                    if (mch::is_zero(it->second)) out.erase(it);
                }
            }
    }
    return out;
}

// random 3-dimensional conjugated contraction with a weight budget and a
// random coderivation mu on top (no Jacobi needed for these laws)
struct LawFixture {
    CurvedLinfPresentation big;
    BasedContraction c;
    CurvedLinfPresentation mu_brackets;
};

LawFixture random_fixture(Rng& rng, int cutoff) {
    // the coalgebra identities are untruncated statements: pick the cutoff
    // beyond any weight reachable from length <= 4 words so nothing prunes
    ContractionSpec spec;
    spec.pairs = {{"p", static_cast<int>(rng.pick(-1, 1)), static_cast<int>(rng.pick(1, 2))}};
    spec.harmonics = {{"w", static_cast<int>(rng.pick(-1, 1)), static_cast<int>(rng.pick(1, 3))}};
    auto built = build_contraction(spec, cutoff, 3);
    auto g = random_automorphism(rng, built.big);
    LawFixture fx{built.big, conjugate(built.big, built.c, g), {}};
    fx.c.verify(fx.big);
    fx.mu_brackets = random_coderivation_brackets(rng, fx.big, fx.c, 3);
    return fx;
}

BuiltContraction two_pairs_fixture() {
    ContractionSpec spec;
    spec.pairs = {{"p", 0, 1}, {"q", 0, 2}};
    return build_contraction(spec, 4, 3);
}

std::vector<Word<BL>> words_up_to(const CurvedLinfPresentation& l, int maxlen) {
    std::vector<Word<BL>> out;
    for (int k = 0; k <= maxlen; ++k) {
        std::vector<int> tuple(k);
        auto rec = [&](auto&& self, int pos, int lo) -> void {
            if (pos == k) {
                std::vector<BL> ls;
                for (int i : tuple) {
                    const auto& b = l.basis_vector(i);
                    ls.push_back(BL{i, b.degree, b.weight});
                }
                if (canonicalize_letters(ls) == 0) return;
                Word<BL> w{ls};
                if (w.weight() <= l.cutoff()) out.push_back(std::move(w));
                return;
            }
            for (int i = lo; i < l.dim(); ++i) {
                tuple[pos] = i;
                self(self, pos + 1, i);
            }
        };
        rec(rec, 0, 0);
    }
    return out;
}

}  // namespace

TEST_CASE("tensor-trick lift: low length components of bold h") {
    auto bc = two_pairs_fixture();
    BasedOps ops{&bc.big, &bc.c};
    Coalgebra<BasedOps> co(ops, 4, 4);

    // length 1: bold h = h
    for (int i = 0; i < bc.big.dim(); ++i) {
        Word<BL> w = word_of(bc.big, {i});
        auto lhs = co.bold_h(single(w));
        auto rhs = co.exp_trunc(to_letters(bc.big, bc.c.h.apply(AlgElement::unit(i))));
        // compare the length-1 parts
        CHECK(from_letters(co.proj1(lhs)) == bc.c.h.apply(AlgElement::unit(i)));
        for (const auto& [ww, cc] : lhs) CHECK(ww.length() == 1);
        (void)rhs;
    }

    // length 2: bold h = (h(x)1 + 1(x)h + h(x)ip + ip(x)h)/2
    auto ip = [&](const AlgElement& x) { return bc.c.i.apply(bc.c.p.apply(x)); };
    auto hh = [&](const AlgElement& x) { return bc.c.h.apply(x); };
    for (int i = 0; i < bc.big.dim(); ++i) {
        for (int j = i; j < bc.big.dim(); ++j) {
            std::vector<BL> ls;
            for (int t : {i, j}) {
                const auto& b = bc.big.basis_vector(t);
                ls.push_back(BL{t, b.degree, b.weight});
            }
            if (canonicalize_letters(ls) == 0) continue;
            Word<BL> w{ls};
            auto lhs = co.bold_h(single(w));

            WordSum<BL> rhs;
            auto addpair = [&](const AlgElement& a, const AlgElement& b, int bsign) {
                for (const auto& [ia, ca] : a.coeffs())
                    for (const auto& [ib, cb] : b.coeffs()) {
                        const auto& va = bc.big.basis_vector(ia);
                        const auto& vb = bc.big.basis_vector(ib);
                        std::vector<BL> nl{BL{ia, va.degree, va.weight},
                                           BL{ib, vb.degree, vb.weight}};
                        co.add_word(rhs, std::move(nl),
                                    Rational(ca * cb * bsign) / 2);
                    }
            };
            AlgElement xi = AlgElement::unit(w.letters[0].idx);
            AlgElement xj = AlgElement::unit(w.letters[1].idx);
            int sgn = (w.letters[0].degree & 1) ? -1 : 1;  // 1 (x) h passes x_i
            addpair(hh(xi), xj, 1);
            addpair(xi, hh(xj), sgn);
            addpair(hh(xi), ip(xj), 1);
            addpair(ip(xi), hh(xj), sgn);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("bold p is the coalgebra morphism of p on exponentials") {
    auto bc = two_pairs_fixture();
    BasedOps ops{&bc.big, &bc.c};
    Coalgebra<BasedOps> co(ops, 3, 3);
    AlgElement x;
    x.add(0, rat(2));
    x.add(2, rat(-1, 2));
    auto lhs = co.bold_p(co.exp_trunc(to_letters(bc.big, x)));
    auto rhs_elem = bc.c.p.apply(x);
    Coalgebra<BasedOps> cosmall(ops, 3, 3);
    auto rhs = cosmall.exp_trunc(to_letters(bc.c.small_basis, rhs_elem));
    CHECK(lhs == rhs);
}

TEST_CASE("side conditions and Lemma fh at the coalgebra level") {
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        LawFixture fx = random_fixture(rng, 24);
        BasedOps ops{&fx.big, &fx.c};
        Coalgebra<BasedOps> co(ops, 4, 24);
        auto boldp = [&](const WordSum<BL>& ws) { return co.bold_p(ws); };
        auto boldh = [&](const WordSum<BL>& ws) { return co.bold_h(ws); };

        for (const auto& w : words_up_to(fx.big, 4)) {
            auto hw = co.bold_h(single(w));
            CHECK(co.bold_h(hw).empty());   // h^2 = 0
            CHECK(co.bold_p(hw).empty());   // p h = 0
            // fh identities: pair-laws after the coproduct
            std::map<std::pair<Word<BL>, Word<BL>>, Rational> nh;
            for (const auto& [w2, c2] : hw)
                for (const auto& [pr, c3] : co.nabla(w2)) {
                    auto it = nh.find(pr);
                    if (it == nh.end()) nh.emplace(pr, Rational(c2 * c3));
                    else {
                        it->second += c2 * c3;
                        if (mch::is_zero(it->second)) nh.erase(it);
                    }
                }
            CHECK(map_pair<BL, BL>(nh, boldp, boldp, 0).empty());  // (p(x)p) nabla h
            CHECK(map_pair<BL, BL>(nh, boldh, boldp, 0).empty());  // (h(x)p) nabla h
            CHECK(map_pair<BL, BL>(nh, boldp, boldh, -1).empty()); // (p(x)h) nabla h
            CHECK(map_pair<BL, BL>(nh, boldh, boldh, -1).empty()); // (h(x)h) nabla h
        }
        // h i = 0 on small words
        for (std::size_t j = 0; j < fx.c.small_basis.size(); ++j) {
            std::vector<BL> ls{BL{static_cast<int>(j), fx.c.small_basis[j].degree,
                                  fx.c.small_basis[j].weight}};
            CHECK(co.bold_h(co.bold_i(single(Word<BL>{ls}))).empty());
        }
    }
}

TEST_CASE("Berglund: p_mu, i_mu are coalgebra morphisms and d_mu a coderivation") {
    Rng rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        LawFixture fx = random_fixture(rng, 24);
        // mu comes from the random bracket data: swap it in for the ops
        CurvedLinfPresentation mubig = fx.mu_brackets;
        BasedOps ops{&mubig, &fx.c};
        Coalgebra<BasedOps> co(ops, 5, 24);
        auto pmu = [&](const WordSum<BL>& ws) { return co.p_mu(ws); };
        auto imu = [&](const WordSum<BL>& ws) { return co.i_mu(ws); };
        auto dmu = [&](const WordSum<BL>& ws) { return co.d_mu(ws); };

        for (const auto& w : words_up_to(mubig, 3)) {
            // (p_mu (x) p_mu) nabla = nabla p_mu
            auto lhs = map_pair<BL, BL>(co.nabla(w), pmu, pmu, 0);
            std::map<std::pair<Word<BL>, Word<BL>>, Rational> rhs;
            for (const auto& [w2, c2] : co.p_mu(single(w)))
                for (const auto& [pr, c3] : co.nabla(w2)) {
                    auto it = rhs.find(pr);
                    if (it == rhs.end()) rhs.emplace(pr, Rational(c2 * c3));
                    else {
                        it->second += c2 * c3;
                        if (mch::is_zero(it->second)) rhs.erase(it);
                    }
                }
            CHECK(lhs == rhs);
        }
        // i_mu and d_mu on small-side words
        std::vector<Word<BL>> smallwords;
        {
            CurvedLinfPresentation smallp(fx.c.small_basis, 24, 1);
            smallwords = words_up_to(smallp, 3);
        }
        for (const auto& w : smallwords) {
            auto lhs = map_pair<BL, BL>(co.nabla(w), imu, imu, 0);
            std::map<std::pair<Word<BL>, Word<BL>>, Rational> rhs;
            for (const auto& [w2, c2] : co.i_mu(single(w)))
                for (const auto& [pr, c3] : co.nabla(w2)) {
                    auto it = rhs.find(pr);
                    if (it == rhs.end()) rhs.emplace(pr, Rational(c2 * c3));
                    else {
                        it->second += c2 * c3;
                        if (mch::is_zero(it->second)) rhs.erase(it);
                    }
                }
            CHECK(lhs == rhs);

            // coderivation law: nabla d_mu = (d_mu (x) 1 + 1 (x) d_mu) nabla
            std::map<std::pair<Word<BL>, Word<BL>>, Rational> lhs2;
            for (const auto& [w2, c2] : co.d_mu(single(w)))
                for (const auto& [pr, c3] : co.nabla(w2)) {
                    auto it = lhs2.find(pr);
                    if (it == lhs2.end()) lhs2.emplace(pr, Rational(c2 * c3));
                    else {
                        it->second += c2 * c3;
                        if (mch::is_zero(it->second)) lhs2.erase(it);
                    }
                }
            auto idf = [&](const WordSum<BL>& ws) { return ws; };
            auto rhs2 = map_pair<BL, BL>(co.nabla(w), dmu, idf, 0);
            for (auto& [pr, c] : map_pair<BL, BL>(co.nabla(w), idf, dmu, -1)) {
                auto it = rhs2.find(pr);
                if (it == rhs2.end()) rhs2.emplace(pr, c);
                else {
                    it->second += c;
                    if (mch::is_zero(it->second)) rhs2.erase(it);
                }
            }
            CHECK(lhs2 == rhs2);
        }
    }
}

TEST_CASE("transfer of an abelian algebra is abelian with the small differential") {
    ContractionSpec spec;
    spec.pairs = {{"p", 0, 1}};
    spec.harmonics = {{"u", 0, 1}, {"v", 1, 2}};
    auto bc = build_contraction(spec, 2, 2);
    // L abelian apart from the unary bracket = D
    CurvedLinfPresentation l(bc.big.basis(), 2, 2);
    for (int i = 0; i < l.dim(); ++i) {
        AlgElement db = bc.c.D.apply(AlgElement::unit(i));
        if (!db.is_zero()) l.set_bracket_indices({i}, db);
    }
    auto tr = transfer_structure(l, bc.c);
    CHECK(tr.transferred.validate().ok());
    CHECK(tr.transferred.curvature().is_zero());
    for (int i = 0; i < tr.transferred.dim(); ++i)
        CHECK(tr.transferred.bracket_basis({i}) ==
              bc.c.d_small.apply(AlgElement::unit(i)));
    for (int i = 0; i < tr.transferred.dim(); ++i)
        for (int j = i; j < tr.transferred.dim(); ++j)
            CHECK(tr.transferred.bracket_basis({i, j}).is_zero());
}

TEST_CASE("transfer of the contractible curved example is trivial") {
    CurvedLinfPresentation l({{"b", 0, 1}, {"c", 1, 1}}, 1, 2);
    l.set_bracket({}, AlgElement::unit(1));
    l.set_bracket({"b"}, AlgElement::unit(1));
    BasedContraction c;
    c.D.set_column(0, AlgElement::unit(1));
    c.h.set_column(1, AlgElement::unit(0));
    auto tr = transfer_structure(l, c);
    CHECK(tr.transferred.dim() == 0);
    CHECK(tr.transferred.curvature().is_zero());
}

TEST_CASE("a Massey-type ternary bracket survives transfer") {
    CurvedLinfPresentation l({{"a1", 0, 1},
                              {"a2", 0, 1},
                              {"a3", 0, 1},
                              {"m", 0, 2},
                              {"n", 1, 2},
                              {"r", 1, 3}},
                             3, 3);
    l.set_bracket({"a1", "a2"}, AlgElement::unit(4));  // {a1,a2} = n
    l.set_bracket({"m", "a3"}, AlgElement::unit(5));   // {m,a3} = r
    l.set_bracket({"m"}, AlgElement::unit(4));         // {m} = n = D m
    REQUIRE(l.validate().ok());

    BasedContraction c;
    c.small_basis = {{"a1", 0, 1}, {"a2", 0, 1}, {"a3", 0, 1}, {"r", 1, 3}};
    c.D.set_column(3, AlgElement::unit(4));
    c.h.set_column(4, AlgElement::unit(3));
    c.p.set_column(0, AlgElement::unit(0));
    c.p.set_column(1, AlgElement::unit(1));
    c.p.set_column(2, AlgElement::unit(2));
    c.p.set_column(5, AlgElement::unit(3));
    c.i.set_column(0, AlgElement::unit(0));
    c.i.set_column(1, AlgElement::unit(1));
    c.i.set_column(2, AlgElement::unit(2));
    c.i.set_column(3, AlgElement::unit(5));

    auto tr = transfer_structure(l, c);
    CHECK(tr.transferred.validate().ok());
    // binary bracket dies, the ternary one survives: {a1,a2,a3} = -r
    CHECK(tr.transferred.bracket_basis({0, 1}).is_zero());
    CHECK(tr.transferred.bracket_basis({0, 1, 2}) == AlgElement::unit(3, -1));

    // p_mu . i_mu = identity, component-wise and operationally
    auto pi = compose_morphisms(tr.p_mu, tr.i_mu);
    for (int i = 0; i < tr.transferred.dim(); ++i)
        CHECK(pi.component_basis(1, {i}) == AlgElement::unit(i));
    AlgElement y;
    y.add(0, rat(3));
    y.add(1, rat(-2));
    CHECK(pi.act(y) == tr.p_mu.act(tr.i_mu.act(y)));
}

TEST_CASE("MC bijection through the transfer") {
    // use the Massey fixture; x = a a1 + b a2 is Maurer-Cartan in l-bar
    CurvedLinfPresentation l({{"a1", 0, 1},
                              {"a2", 0, 1},
                              {"a3", 0, 1},
                              {"m", 0, 2},
                              {"n", 1, 2},
                              {"r", 1, 3}},
                             3, 3);
    l.set_bracket({"a1", "a2"}, AlgElement::unit(4));
    l.set_bracket({"m", "a3"}, AlgElement::unit(5));
    l.set_bracket({"m"}, AlgElement::unit(4));
    BasedContraction c;
    c.small_basis = {{"a1", 0, 1}, {"a2", 0, 1}, {"a3", 0, 1}, {"r", 1, 3}};
    c.D.set_column(3, AlgElement::unit(4));
    c.h.set_column(4, AlgElement::unit(3));
    c.p.set_column(0, AlgElement::unit(0));
    c.p.set_column(1, AlgElement::unit(1));
    c.p.set_column(2, AlgElement::unit(2));
    c.p.set_column(5, AlgElement::unit(3));
    c.i.set_column(0, AlgElement::unit(0));
    c.i.set_column(1, AlgElement::unit(1));
    c.i.set_column(2, AlgElement::unit(2));
    c.i.set_column(3, AlgElement::unit(5));
    auto tr = transfer_structure(l, c);

    AlgElement y;
    y.add(0, rat(2));
    y.add(1, rat(-3, 2));
    REQUIRE(tr.transferred.curvature_residual(y).is_zero());
    AlgElement x = pullback_mc(l, c, y);
    CHECK(l.curvature_residual(x).is_zero());
    CHECK(c.h.apply(x).is_zero());          // lands on the gauge locus
    CHECK(pushforward_mc(l, c, x) == y);    // MC(p_mu) MC(i_mu) = 1

    // gauge-locus elements push forward by p alone
    CHECK(pushforward_mc(l, c, x) == c.p.apply(x));  // MC(p_mu)x = p(x), h x = 0
}
