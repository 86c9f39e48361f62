// mc-holonomy: exact computations in the simplicial theory of curved
// L-infinity algebras. Every output is exact rational JSON; exit code 0
// means success, 1 an invariant or validation failure, 2 bad input.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "mch/json_io.hpp"
#include "mch/transfer.hpp"

using namespace mch;

namespace {

struct Output {
    std::optional<std::string> path;
    bool quiet = false;

    int emit(Json j, int code) const {
        j["schema"] = kSchemaTag;
        std::string text = dump_canonical(j);
        if (path) {
            std::ofstream out(*path, std::ios::binary);
            if (!out) {
                std::cerr << "cannot write " << *path << "\n";
                return 2;
            }
            out << text;
        } else if (!quiet) {
            std::cout << text;
        }
        return code;
    }
};

Json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    return j;
}

CurvedLinfPresentation load_algebra(const std::string& path, std::optional<int> cutoff,
                                    std::optional<int> arity_cap) {
    Json j = load_json(path);
    if (cutoff) j["cutoff"] = *cutoff;
    if (arity_cap) j["arity_cap"] = *arity_cap;
    return algebra_from_json(j);
}

// Lie algebra JSON: {"basis":[{"name":..,"weight":..}],"class":k,
//                    "brackets":[{"x":..,"y":..,"out":[{"name","coef"}]}]}
LieAlgebra load_lie(const Json& j) {
    std::vector<std::pair<std::string, int>> basis;
    for (const auto& v : j.at("basis"))
        basis.emplace_back(v.at("name").get<std::string>(), v.value("weight", 1));
    LieAlgebra g(basis, j.value("class", 1));
    for (const auto& row : j.value("brackets", Json::array())) {
        AlgElement out;
        for (const auto& o : row.value("out", Json::array()))
            out.add(g.index_of(o.at("name").get<std::string>()),
                    rat_parse(o.at("coef").is_string() ? o.at("coef").get<std::string>()
                                                       : o.at("coef").dump()));
        g.set_bracket(row.at("x").get<std::string>(), row.at("y").get<std::string>(), out);
    }
    auto rep = g.validate();
    if (!rep.ok()) throw InputError("Lie data fails antisymmetry/Jacobi validation");
    return g;
}

int run_validate(const Output& out, const std::string& algebra_path, std::optional<int> w,
                 std::optional<int> a) {
    CurvedLinfPresentation l = load_algebra(algebra_path, w, a);
    ValidationReport rep = l.validate();
    Json j;
    j["command"] = "validate";
    j["status"] = rep.ok() ? "ok" : "violation";
    j["report"] = report_to_json(rep);
    return out.emit(std::move(j), rep.ok() ? 0 : 1);
}

int run_mc_check(const Output& out, const std::string& algebra_path,
                 const std::string& simplex_path, std::optional<int> w, std::optional<int> a) {
    CurvedLinfPresentation l = load_algebra(algebra_path, w, a);
    Json sj = load_json(simplex_path);
    int n = sj.value("n", 0);
    FormValuedElement x = form_element_from_json(l, n, sj.at("element"), "simplex/element");
    FormValuedElement r = mc_residual_on_simplex(l, n, x);
    Json j;
    j["command"] = "mc-check";
    j["status"] = r.is_zero() ? "ok" : "violation";
    j["residual"] = form_element_to_json(l, r);
    return out.emit(std::move(j), r.is_zero() ? 0 : 1);
}

int run_dupont_verify(const Output& out, int n, int degree) {
    Json checks = Json::array();
    bool all_ok = true;
    auto record = [&](const std::string& name, bool ok) {
        Json c;
        c["check"] = name;
        c["status"] = ok ? "PASS" : "FAIL";
        checks.push_back(std::move(c));
        all_ok = all_ok && ok;
        if (ok)
            std::cerr << name << " PASS\n";
        else
            std::cerr << name << " FAIL\n";
    };

    bool contraction_ok = true;
    try {
        dupont_contraction(n, degree);
    } catch (const VerificationError&) {
        contraction_ok = false;
    }
    record("ds+sd=1-p and side conditions (degree <= " + std::to_string(degree) + ")",
           contraction_ok);

    long count = dupont_s_term_count(n);
    long expect = (1L << (n + 1)) - 2;
    record("s term count " + std::to_string(count) + " = 2^" + std::to_string(n + 1) + "-2",
           count == expect);

    long faces = static_cast<long>(simplex_faces(n).size());
    record("projection rank " + std::to_string(faces) + " = 2^" + std::to_string(n + 1) + "-1",
           faces == (1L << (n + 1)) - 1);

    Json j;
    j["command"] = "dupont-verify";
    j["n"] = n;
    j["status"] = all_ok ? "ok" : "violation";
    j["checks"] = std::move(checks);
    return out.emit(std::move(j), all_ok ? 0 : 1);
}

int run_holonomy(const Output& out, const std::string& algebra_path,
                 const std::string& simplex_path, std::optional<int> w, std::optional<int> a) {
    CurvedLinfPresentation l = load_algebra(algebra_path, w, a);
    Json sj = load_json(simplex_path);
    int n = sj.value("n", 0);
    FormValuedElement x = form_element_from_json(l, n, sj.at("element"), "simplex/element");
    SimplexInNerve s = make_simplex(l, n, std::move(x));
    SimplexInNerve r = rho(l, s);
    Json j;
    j["command"] = "holonomy";
    j["status"] = "ok";
    j["result"] = simplex_to_json(l, r);
    return out.emit(std::move(j), 0);
}

int run_fill_horn(const Output& out, const std::string& algebra_path,
                  const std::string& horn_path, std::optional<int> w, std::optional<int> a) {
    CurvedLinfPresentation l = load_algebra(algebra_path, w, a);
    MCHorn horn = horn_from_json(l, load_json(horn_path));
    SimplexInNerve filler = fill_horn(l, horn);
    Json j;
    j["command"] = "fill-horn";
    j["status"] = "ok";
    j["filler"] = simplex_to_json(l, filler);
    FormValuedElement missing =
        restrict_element(filler.x, AffineSimplexMap::face(horn.n, horn.missing));
    j["missing_face"] = form_element_to_json(l, missing);
    // when the missing face is Whitney-valued, also report its coefficients
    DupontOps dup(horn.n - 1);
    bool whitney = true;
    Json wcoef = Json::object();
    for (const auto& [idx, f] : missing.coeffs()) {
        WhitneyElement we = dup.p_coeffs(f);
        if (!(dup.include(we) == f)) {
            whitney = false;
            break;
        }
        for (const auto& [face, c] : we.coeffs()) {
            if (face.size() == static_cast<std::size_t>(horn.n))  // top face of the edge
                wcoef[l.basis_vector(idx).name] = rat_str(c);
        }
    }
    if (whitney) j["missing_face_whitney"] = std::move(wcoef);
    return out.emit(std::move(j), 0);
}

int run_transfer(const Output& out, const std::string& algebra_path,
                 const std::string& contraction_path, std::optional<int> w, std::optional<int> a,
                 std::optional<int> word_len) {
    CurvedLinfPresentation l = load_algebra(algebra_path, w, a);
    BasedContraction c = contraction_from_json(l, load_json(contraction_path));
    TransferResult tr = transfer_structure(l, c, word_len.value_or(-1), a.value_or(-1));
    ValidationReport rep = tr.transferred.validate();
    Json j;
    j["command"] = "transfer";
    j["status"] = rep.ok() ? "ok" : "violation";
    j["transferred"] = algebra_to_json(tr.transferred);
    j["p_mu"] = morphism_to_json(tr.p_mu);
    j["i_mu"] = morphism_to_json(tr.i_mu);
    j["report"] = report_to_json(rep);
    return out.emit(std::move(j), rep.ok() ? 0 : 1);
}

int run_kuranishi(const Output& out, const std::string& algebra_path,
                  const std::string& contraction_path, std::optional<int> w,
                  std::optional<int> a) {
    CurvedLinfPresentation l = load_algebra(algebra_path, w, a);
    BasedContraction c = contraction_from_json(l, load_json(contraction_path));
    AlgElement x = kuranishi_solve(l, c);
    Json j;
    j["command"] = "kuranishi";
    j["status"] = "ok";
    j["solution"] = alg_element_to_json(l, x);
    j["residual_zero"] = true;
    return out.emit(std::move(j), 0);
}

int run_bch(const Output& out, const std::string& lie_path, const std::string& elems_path,
            int depth) {
    LieAlgebra g = load_lie(load_json(lie_path));
    Json ej = load_json(elems_path);
    auto elem = [&](const Json& v, const std::string& where) {
        AlgElement x;
        for (const auto& [name, c] : v.items())
            x.add(g.index_of(name),
                  rat_parse(c.is_string() ? c.get<std::string>() : c.dump()));
        (void)where;
        return x;
    };
    AlgElement z = bch_oracle(g, elem(ej.at("x"), "x"), elem(ej.at("y"), "y"), depth);
    Json zj = Json::object();
    for (const auto& [i, c] : z.coeffs()) zj[g.name(i)] = rat_str(c);
    Json j;
    j["command"] = "bch";
    j["status"] = "ok";
    j["depth"] = depth;
    j["result"] = std::move(zj);
    return out.emit(std::move(j), 0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Maurer-Cartan / holonomy computations for curved L-infinity algebras"};
    app.require_subcommand(1);
    app.fallthrough();

    Output out;
    std::optional<int> cutoff_w, arity_cap, word_len;
    app.add_option("--output", out.path, "write the JSON report to a file");
    app.add_flag("--quiet", out.quiet, "suppress stdout (exit code only)");
    app.add_option("--cutoff-w", cutoff_w, "override the nilpotency cutoff");
    app.add_option("--arity-cap", arity_cap, "override the bracket arity cap");
    app.add_option("--word-len", word_len, "word truncation length for transfers");

    std::string algebra_path, second_path;
    int dupont_n = 2, dupont_degree = 3, bch_depth = 4;

    auto* validate = app.add_subcommand("validate", "check the curved L-infinity axioms");
    validate->add_option("algebra", algebra_path)->required();

    auto* mc = app.add_subcommand("mc-check", "Maurer-Cartan residual of a simplex");
    mc->add_option("algebra", algebra_path)->required();
    mc->add_option("simplex", second_path)->required();

    auto* dup = app.add_subcommand("dupont-verify", "Dupont contraction invariant suite");
    dup->add_option("--n", dupont_n, "simplex dimension")->required();
    dup->add_option("--degree", dupont_degree, "polynomial degree of the test battery");

    auto* hol = app.add_subcommand("holonomy", "the retraction rho onto the gauge locus");
    hol->add_option("algebra", algebra_path)->required();
    hol->add_option("simplex", second_path)->required();

    auto* fill = app.add_subcommand("fill-horn", "thin filler of a Maurer-Cartan horn");
    fill->add_option("algebra", algebra_path)->required();
    fill->add_option("horn", second_path)->required();

    auto* tr = app.add_subcommand("transfer", "homotopy transfer through a contraction");
    tr->add_option("algebra", algebra_path)->required();
    tr->add_option("contraction", second_path)->required();

    auto* kur = app.add_subcommand("kuranishi", "gauge-fixed Maurer-Cartan solver");
    kur->add_option("algebra", algebra_path)->required();
    kur->add_option("contraction", second_path)->required();

    auto* bch = app.add_subcommand("bch", "truncated Baker-Campbell-Hausdorff series");
    bch->add_option("lie", algebra_path)->required();
    bch->add_option("elements", second_path)->required();
    bch->add_option("--depth", bch_depth, "truncation depth (1..4)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return run_validate(out, algebra_path, cutoff_w, arity_cap);
        if (mc->parsed()) return run_mc_check(out, algebra_path, second_path, cutoff_w, arity_cap);
        if (dup->parsed()) return run_dupont_verify(out, dupont_n, dupont_degree);
        if (hol->parsed()) return run_holonomy(out, algebra_path, second_path, cutoff_w, arity_cap);
        if (fill->parsed())
            return run_fill_horn(out, algebra_path, second_path, cutoff_w, arity_cap);
        if (tr->parsed())
            return run_transfer(out, algebra_path, second_path, cutoff_w, arity_cap, word_len);
        if (kur->parsed())
            return run_kuranishi(out, algebra_path, second_path, cutoff_w, arity_cap);
        if (bch->parsed()) return run_bch(out, algebra_path, second_path, bch_depth);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const CutoffError& e) {
        std::cerr << "cutoff overflow: " << e.what() << "\n";
        return 2;
    } catch (const VerificationError& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
