#include <doctest.h>

#include "mch/linf.hpp"

using namespace mch;

namespace {

// Heisenberg in the shifted convention: generators in degree -1,
// {x,y} = -[x,y], class-2 nilpotent
CurvedLinfPresentation heisenberg() {
    CurvedLinfPresentation l({{"X", -1, 1}, {"Y", -1, 1}, {"Z", -1, 2}}, 2, 2);
    l.set_bracket({"X", "Y"}, AlgElement::unit(2, -1));
    return l;
}

CurvedLinfPresentation abelian3() {
    return CurvedLinfPresentation({{"a", 0, 1}, {"b", 1, 1}, {"c", -1, 2}}, 3, 3);
}

// the canonical curved two-term example: {} = c, {b} = c
CurvedLinfPresentation curved_bc() {
    CurvedLinfPresentation l({{"b", 0, 1}, {"c", 1, 1}}, 1, 2);
    l.set_bracket({}, AlgElement::unit(1));
    l.set_bracket({"b"}, AlgElement::unit(1));
    return l;
}

struct Rng {
    unsigned long state = 0x9e3779b97f4a7c15ull;
    unsigned long next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    Rational coef() { return rat(static_cast<long>(next() % 9) - 4, 1 + static_cast<long>(next() % 3)); }
};

}  // namespace

TEST_CASE("validate accepts the abelian and Heisenberg presentations") {
    CHECK(abelian3().validate().ok());
    CHECK(heisenberg().validate().ok());
    CHECK(curved_bc().validate().ok());
}

TEST_CASE("validate reports corrupted data") {
    // {c} = c makes the n = 0 identity {{}} fail
    CurvedLinfPresentation l({{"b", 0, 1}, {"c", 1, 1}}, 2, 2);
    l.set_bracket({}, AlgElement::unit(1));
    l.set_bracket({"c"}, AlgElement::unit(1));
    auto rep = l.validate();
    REQUIRE_FALSE(rep.ok());
    bool found = false;
    for (const auto& v : rep.items)
        if (v.kind == "jacobi" && v.n == 0) found = true;
    CHECK(found);

    // degree violation is reported structurally
    CurvedLinfPresentation m({{"b", 0, 1}, {"c", 1, 1}}, 2, 2);
    m.set_bracket({"b"}, AlgElement::unit(0));
    bool deg = false;
    for (const auto& v : m.validate().items)
        if (v.kind == "degree") deg = true;
    CHECK(deg);
}

TEST_CASE("graded symmetry is canonical in storage") {
    CurvedLinfPresentation l = heisenberg();
    // {Y,X} = -{X,Y} = Z
    CHECK(l.bracket_basis({1, 0}) == AlgElement::unit(2, 1));
    CHECK(l.bracket_basis({0, 1}) == AlgElement::unit(2, -1));
    // repeated odd generator vanishes
    CHECK(l.bracket_basis({0, 0}).is_zero());
}

TEST_CASE("curvature residual") {
    auto l = curved_bc();
    AlgElement x = AlgElement::unit(0, -1);  // -b
    CHECK(l.curvature_residual(x).is_zero());
    CHECK(l.curvature_residual(AlgElement()) == AlgElement::unit(1));
    // abelian: any element has zero residual
    auto a = abelian3();
    CHECK(a.curvature_residual(AlgElement::unit(0, 7)).is_zero());
}

TEST_CASE("weight truncation makes brackets nilpotent") {
    auto l = heisenberg();
    // {X, Z} would have weight 3 > W = 2, so it is zero even if set
    CHECK(l.bracket_basis({0, 2}).is_zero());
}

namespace {

// test algebra with room for quadratic morphism components:
// b, z in degree 0 (weights 1, 2), abelian
CurvedLinfPresentation bz() { return CurvedLinfPresentation({{"b", 0, 1}, {"z", 0, 2}}, 2, 3); }

LinfMorphism quadratic_endo(const Rational& alpha) {
    auto l = bz();
    LinfMorphism f(l, l, 2);
    f.set_component({"b"}, AlgElement::unit(0));
    f.set_component({"z"}, AlgElement::unit(1));
    f.set_component({"b", "b"}, AlgElement::unit(1, alpha));
    return f;
}

}  // namespace

TEST_CASE("morphism action expands as the exponential sum") {
    LinfMorphism f = quadratic_endo(rat(3));
    CHECK(validate_morphism(f).ok());
    AlgElement x;
    x.add(0, rat(5, 2));  // x = 5/2 b
    // f(x) = x + 1/2 f2(x,x) = 5/2 b + (1/2)(25/4)(3) z
    AlgElement expect = x;
    expect.add(1, rat(75, 8));
    CHECK(f.act(x) == expect);

    // constant morphism: only f_(0)
    auto l = bz();
    LinfMorphism c(l, l, 1);
    c.set_component_indices(0, {}, AlgElement::unit(1, 4));
    CHECK(c.act(x) == AlgElement::unit(1, 4));

    // strict morphism acts by its linear part
    LinfMorphism s = LinfMorphism::identity(l);
    CHECK(s.act(x) == x);
}

TEST_CASE("composition satisfies the operational contract") {
    LinfMorphism f = quadratic_endo(rat(3));
    LinfMorphism g = quadratic_endo(rat(-7, 2));
    LinfMorphism gf = compose_morphisms(g, f);
    Rng rng;
    for (int trial = 0; trial < 10; ++trial) {
        AlgElement x;
        x.add(0, rng.coef());
        x.add(1, rng.coef());
        CHECK(gf.act(x) == g.act(f.act(x)));
    }
    // identity laws
    auto l = bz();
    LinfMorphism id = LinfMorphism::identity(l);
    CHECK(compose_morphisms(id, f).component_map(2)->rows() == f.component_map(2)->rows());
    CHECK(compose_morphisms(f, id).component_map(2)->rows() == f.component_map(2)->rows());
    // strict o strict is the matrix product
    LinfMorphism s1 = LinfMorphism::identity(l), s2 = LinfMorphism::identity(l);
    auto ss = compose_morphisms(s1, s2);
    CHECK(ss.is_strict());
}

TEST_CASE("composition is associative operationally") {
    LinfMorphism f = quadratic_endo(rat(1));
    LinfMorphism g = quadratic_endo(rat(2));
    LinfMorphism h = quadratic_endo(rat(-1, 3));
    auto left = compose_morphisms(h, compose_morphisms(g, f));
    auto right = compose_morphisms(compose_morphisms(h, g), f);
    Rng rng;
    for (int trial = 0; trial < 10; ++trial) {
        AlgElement x;
        x.add(0, rng.coef());
        x.add(1, rng.coef());
        CHECK(left.act(x) == right.act(x));
    }
}

TEST_CASE("morphisms preserve the Maurer-Cartan locus") {
    // on the curved example, f = identity-like endomorphism
    auto l = curved_bc();
    LinfMorphism id = LinfMorphism::identity(l);
    AlgElement x = AlgElement::unit(0, -1);
    REQUIRE(l.curvature_residual(x).is_zero());
    CHECK(l.curvature_residual(id.act(x)).is_zero());
}

namespace {

struct StrictFibrationSetup {
    CurvedLinfPresentation l, m, n;
    LinfMorphism f, g;
    LinearMap s;
};

// f : L -> M strict fibration with section, g : N -> M strict
StrictFibrationSetup strict_setup() {
    StrictFibrationSetup su;
    su.l = CurvedLinfPresentation({{"a", 0, 1}, {"k", 0, 1}, {"w", 0, 2}, {"e", 1, 2}}, 3, 3);
    su.l.set_bracket({"a", "k"}, AlgElement::unit(3));
    su.m = CurvedLinfPresentation({{"m1", 0, 1}, {"m2", 0, 2}}, 3, 3);
    su.n = CurvedLinfPresentation({{"n1", 0, 1}, {"n2", 1, 2}}, 3, 3);
    su.n.set_bracket({"n1"}, AlgElement::unit(1));

    su.f = LinfMorphism::strict(su.l, su.m,
                                {{"a", AlgElement::unit(0)},
                                 {"k", AlgElement()},
                                 {"w", AlgElement::unit(1)},
                                 {"e", AlgElement()}});
    su.g = LinfMorphism::strict(su.n, su.m,
                                {{"n1", AlgElement::unit(0)}, {"n2", AlgElement()}});
    su.s.set_column(0, AlgElement::unit(0));  // m1 -> a
    su.s.set_column(1, AlgElement::unit(2));  // m2 -> w
    return su;
}

bool morphisms_equal(const LinfMorphism& a, const LinfMorphism& b) {
    int cap = std::max(a.arity_cap(), b.arity_cap());
    for (int k = 0; k <= cap; ++k) {
        const SymMap* ma = a.component_map(k);
        const SymMap* mb = b.component_map(k);
        auto empty = SymMap(k);
        if ((ma ? *ma : empty).rows() != (mb ? *mb : empty).rows()) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("fibered product with trivial base is the direct product") {
    auto su = strict_setup();
    CurvedLinfPresentation zero({}, 3, 3);
    LinfMorphism f0 = LinfMorphism::strict(su.l, zero, {{"a", AlgElement()},
                                                        {"k", AlgElement()},
                                                        {"w", AlgElement()},
                                                        {"e", AlgElement()}});
    LinfMorphism g0(zero, zero, 1);
    // g : N -> 0
    LinfMorphism gn = LinfMorphism::strict(su.n, zero,
                                           {{"n1", AlgElement()}, {"n2", AlgElement()}});
    LinearMap s;  // empty section of 0 -> L
    auto fp = fibered_product(f0, s, gn);
    CHECK(fp.total.dim() == su.l.dim() + su.n.dim());
    CHECK(fp.total.validate().ok());
    // componentwise brackets: {L.a, L.k} = L.e and {N.n1} = N.n2
    int ia = fp.total.index_of("L.a");
    int ik = fp.total.index_of("L.k");
    int ie = fp.total.index_of("L.e");
    CHECK(fp.total.bracket_basis({ia, ik}) == AlgElement::unit(ie));
    int in1 = fp.total.index_of("N.n1");
    int in2 = fp.total.index_of("N.n2");
    CHECK(fp.total.bracket_basis({in1}) == AlgElement::unit(in2));
    // G is the projection onto L
    CHECK(fp.to_fiber.component_basis(1, {ia}) == AlgElement::unit(0));
    CHECK(fp.to_fiber.component_basis(1, {in1}).is_zero());
}

TEST_CASE("fibered product of a strict diagram satisfies f.G = g.F") {
    auto su = strict_setup();
    auto fp = fibered_product(su.f, su.s, su.g);
    CHECK(fp.total.validate().ok());
    auto fg = compose_morphisms(su.f, fp.to_fiber);
    auto gf = compose_morphisms(su.g, fp.to_base_strict);
    CHECK(morphisms_equal(fg, gf));
    // gauge: G_(1) restricted to the pL part is the kept representative
    CHECK(fp.to_fiber.component_basis(1, {fp.total.index_of("L.k")}) == AlgElement::unit(1));
    CHECK(fp.to_fiber.component_basis(1, {fp.total.index_of("L.e")}) == AlgElement::unit(3));
}

TEST_CASE("strictification: pullback along the identity") {
    auto su = strict_setup();
    LinfMorphism idm = LinfMorphism::identity(su.m);
    auto fp = fibered_product(su.f, su.s, idm);
    CHECK(fp.total.validate().ok());
    auto fg = compose_morphisms(su.f, fp.to_fiber);
    auto gf = compose_morphisms(idm, fp.to_base_strict);
    CHECK(morphisms_equal(fg, gf));
    CHECK(fp.to_base_strict.is_strict());
}

TEST_CASE("fibered product with a nonstrict fibration") {
    auto su = strict_setup();
    // add a quadratic component to f: f2(a,k) = m2
    LinfMorphism f2(su.l, su.m, 2);
    f2.set_component({"a"}, AlgElement::unit(0));
    f2.set_component({"w"}, AlgElement::unit(1));
    f2.set_component({"a", "k"}, AlgElement::unit(1));
    REQUIRE(validate_morphism(f2).ok());
    auto fp = fibered_product(f2, su.s, su.g);
    CHECK(fp.total.validate().ok());
    auto fg = compose_morphisms(f2, fp.to_fiber);
    auto gf = compose_morphisms(su.g, fp.to_base_strict);
    CHECK(morphisms_equal(fg, gf));
}

TEST_CASE("section failures are detected") {
    auto su = strict_setup();
    LinearMap bad;
    bad.set_column(0, AlgElement::unit(1));  // m1 -> k, but f(k) = 0
    CHECK_THROWS_AS(fibered_product(su.f, bad, su.g), InputError);
}
