#include "mch/json_io.hpp"

#include <nlohmann/json.hpp>

namespace mch {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw InputError((where.empty() ? std::string("input") : where) + ": " + what);
}

Rational rat_at(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (!j.is_string()) bad(where, "rationals must be \"p/q\" strings");
    try {
        return rat_parse(j.get<std::string>());
    } catch (const std::exception& e) {
        bad(where, e.what());
    }
}

void expect_object(const Json& j, const std::string& where) {
    if (!j.is_object()) bad(where, "expected an object");
}

}  // namespace

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

Json polyform_to_json(const PolyForm& f) {
    Json terms = Json::array();
    for (const auto& [key, c] : f.terms()) {
        Json t;
        t["exp"] = key.exps;
        t["ds"] = key.ds;
        t["coef"] = rat_str(c);
        terms.push_back(std::move(t));
    }
    Json out;
    out["n"] = f.simplex_dim();
    out["terms"] = std::move(terms);
    return out;
}

PolyForm polyform_from_json(const Json& j, const std::string& where) {
    expect_object(j, where);
    if (!j.contains("n") || !j["n"].is_number_integer()) bad(where + "/n", "missing dimension");
    PolyForm f(j["n"].get<int>());
    if (!j.contains("terms") || !j["terms"].is_array()) bad(where + "/terms", "missing terms");
    int k = 0;
    for (const auto& t : j["terms"]) {
        std::string here = where + "/terms/" + std::to_string(k++);
        expect_object(t, here);
        std::vector<int> exps = t.value("exp", std::vector<int>{});
        std::vector<int> ds = t.value("ds", std::vector<int>{});
        try {
            f += PolyForm::monomial(f.simplex_dim(), exps, ds, rat_at(t.at("coef"), here));
        } catch (const InputError&) {
            throw;
        } catch (const std::exception& e) {
            bad(here, e.what());
        }
    }
    return f;
}

Json whitney_to_json(const WhitneyElement& w) {
    Json coeffs = Json::array();
    for (const auto& [face, c] : w.coeffs()) {
        Json t;
        t["face"] = face;
        t["coef"] = rat_str(c);
        coeffs.push_back(std::move(t));
    }
    Json out;
    out["n"] = w.simplex_dim();
    out["coeffs"] = std::move(coeffs);
    return out;
}

WhitneyElement whitney_from_json(const Json& j, const std::string& where) {
    expect_object(j, where);
    WhitneyElement w(j.value("n", 0));
    int k = 0;
    for (const auto& t : j.value("coeffs", Json::array())) {
        std::string here = where + "/coeffs/" + std::to_string(k++);
        w.add(t.value("face", std::vector<int>{}), rat_at(t.at("coef"), here));
    }
    return w;
}

Json alg_element_to_json(const CurvedLinfPresentation& l, const AlgElement& x) {
    Json out = Json::object();
    for (const auto& [i, c] : x.coeffs()) out[l.basis_vector(i).name] = rat_str(c);
    return out;
}

AlgElement alg_element_from_json(const CurvedLinfPresentation& l, const Json& j,
                                 const std::string& where) {
    expect_object(j, where);
    AlgElement x;
    for (const auto& [name, v] : j.items()) {
        try {
            x.add(l.index_of(name), rat_at(v, where + "/" + name));
        } catch (const InputError& e) {
            bad(where + "/" + name, e.what());
        }
    }
    return x;
}

Json algebra_to_json(const CurvedLinfPresentation& l) {
    Json basis = Json::array();
    for (const auto& b : l.basis()) {
        Json v;
        v["name"] = b.name;
        v["deg"] = b.degree;
        v["weight"] = b.weight;
        basis.push_back(std::move(v));
    }
    Json brackets = Json::array();
    for (int k = 0; k <= l.arity_cap(); ++k) {
        const SymMap* m = l.bracket_map(k);
        if (!m) continue;
        for (const auto& [tuple, out] : m->rows()) {
            Json row;
            row["arity"] = k;
            Json in = Json::array();
            for (int i : tuple) in.push_back(l.basis_vector(i).name);
            row["in"] = std::move(in);
            Json outs = Json::array();
            for (const auto& [i, c] : out.coeffs()) {
                Json o;
                o["name"] = l.basis_vector(i).name;
                o["coef"] = rat_str(c);
                outs.push_back(std::move(o));
            }
            row["out"] = std::move(outs);
            brackets.push_back(std::move(row));
        }
    }
    Json out;
    out["schema"] = kSchemaTag;
    out["basis"] = std::move(basis);
    out["brackets"] = std::move(brackets);
    out["cutoff"] = l.cutoff();
    out["arity_cap"] = l.arity_cap();
    return out;
}

CurvedLinfPresentation algebra_from_json(const Json& j) {
    expect_object(j, "algebra");
    if (j.contains("schema") && j["schema"] != kSchemaTag)
        bad("algebra/schema", "unsupported schema tag");
    std::vector<BasisVector> basis;
    int k = 0;
    if (!j.contains("basis") || !j["basis"].is_array()) bad("algebra/basis", "missing basis");
    for (const auto& v : j["basis"]) {
        std::string here = "algebra/basis/" + std::to_string(k++);
        expect_object(v, here);
        if (!v.contains("name")) bad(here, "basis vectors need a name");
        basis.push_back({v["name"].get<std::string>(), v.value("deg", 0), v.value("weight", 1)});
    }
    CurvedLinfPresentation l(basis, j.value("cutoff", 1), j.value("arity_cap", 2));
    k = 0;
    for (const auto& row : j.value("brackets", Json::array())) {
        std::string here = "algebra/brackets/" + std::to_string(k++);
        expect_object(row, here);
        std::vector<std::string> in = row.value("in", std::vector<std::string>{});
        if (row.contains("arity") && row["arity"].get<int>() != static_cast<int>(in.size()))
            bad(here, "arity does not match the input tuple");
        AlgElement out;
        for (const auto& o : row.value("out", Json::array()))
            out.add(l.index_of(o.at("name").get<std::string>()), rat_at(o.at("coef"), here));
        try {
            l.set_bracket(in, out);
        } catch (const std::exception& e) {
            bad(here, e.what());
        }
    }
    return l;
}

Json morphism_to_json(const LinfMorphism& f) {
    Json comps = Json::array();
    for (int k = 0; k <= f.arity_cap(); ++k) {
        const SymMap* m = f.component_map(k);
        if (!m) continue;
        for (const auto& [tuple, out] : m->rows()) {
            Json row;
            row["arity"] = k;
            Json in = Json::array();
            for (int i : tuple) in.push_back(f.source().basis_vector(i).name);
            row["in"] = std::move(in);
            Json outs = Json::array();
            for (const auto& [i, c] : out.coeffs()) {
                Json o;
                o["name"] = f.target().basis_vector(i).name;
                o["coef"] = rat_str(c);
                outs.push_back(std::move(o));
            }
            row["out"] = std::move(outs);
            comps.push_back(std::move(row));
        }
    }
    Json out;
    out["schema"] = kSchemaTag;
    out["source"] = algebra_to_json(f.source());
    out["target"] = algebra_to_json(f.target());
    out["arity_cap"] = f.arity_cap();
    out["strict"] = f.is_strict();
    out["components"] = std::move(comps);
    return out;
}

LinfMorphism morphism_from_json(const Json& j) {
    expect_object(j, "morphism");
    CurvedLinfPresentation src = algebra_from_json(j.at("source"));
    CurvedLinfPresentation tgt = algebra_from_json(j.at("target"));
    LinfMorphism f(src, tgt, j.value("arity_cap", 1));
    int k = 0;
    for (const auto& row : j.value("components", Json::array())) {
        std::string here = "morphism/components/" + std::to_string(k++);
        std::vector<std::string> in = row.value("in", std::vector<std::string>{});
        AlgElement out;
        for (const auto& o : row.value("out", Json::array()))
            out.add(tgt.index_of(o.at("name").get<std::string>()), rat_at(o.at("coef"), here));
        try {
            f.set_component(in, out);
        } catch (const std::exception& e) {
            bad(here, e.what());
        }
    }
    if (j.value("strict", false) && !f.is_strict()) bad("morphism", "flagged strict but is not");
    return f;
}

Json form_element_to_json(const CurvedLinfPresentation& l, const FormValuedElement& x) {
    Json out = Json::object();
    for (const auto& [i, form] : x.coeffs()) out[l.basis_vector(i).name] = polyform_to_json(form);
    return out;
}

FormValuedElement form_element_from_json(const CurvedLinfPresentation& l, int n, const Json& j,
                                         const std::string& where) {
    expect_object(j, where);
    FormValuedElement x(n);
    for (const auto& [name, v] : j.items()) {
        PolyForm f = polyform_from_json(v, where + "/" + name);
        if (f.simplex_dim() != n) bad(where + "/" + name, "form has the wrong dimension");
        x.add(l.index_of(name), f);
    }
    return x;
}

namespace {

Json linear_map_to_json(const std::vector<BasisVector>& src, const std::vector<BasisVector>& tgt,
                        const LinearMap& m) {
    Json rows = Json::array();
    for (const auto& [i, img] : m.columns()) {
        Json row;
        row["in"] = src.at(i).name;
        Json outs = Json::array();
        for (const auto& [jdx, c] : img.coeffs()) {
            Json o;
            o["name"] = tgt.at(jdx).name;
            o["coef"] = rat_str(c);
            outs.push_back(std::move(o));
        }
        row["out"] = std::move(outs);
        rows.push_back(std::move(row));
    }
    return rows;
}

LinearMap linear_map_from_json(const std::vector<BasisVector>& src,
                               const std::vector<BasisVector>& tgt, const Json& j,
                               const std::string& where) {
    auto index = [&](const std::vector<BasisVector>& basis, const std::string& name,
                     const std::string& here) {
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (basis[i].name == name) return static_cast<int>(i);
        bad(here, "unknown basis name: " + name);
    };
    LinearMap m;
    int k = 0;
    for (const auto& row : j) {
        std::string here = where + "/" + std::to_string(k++);
        AlgElement img;
        for (const auto& o : row.value("out", Json::array()))
            img.add(index(tgt, o.at("name").get<std::string>(), here), rat_at(o.at("coef"), here));
        m.set_column(index(src, row.at("in").get<std::string>(), here), img);
    }
    return m;
}

}  // namespace

Json contraction_to_json(const CurvedLinfPresentation& big, const BasedContraction& c) {
    Json small = Json::array();
    for (const auto& b : c.small_basis) {
        Json v;
        v["name"] = b.name;
        v["deg"] = b.degree;
        v["weight"] = b.weight;
        small.push_back(std::move(v));
    }
    Json out;
    out["schema"] = kSchemaTag;
    out["small_basis"] = std::move(small);
    out["D"] = linear_map_to_json(big.basis(), big.basis(), c.D);
    out["h"] = linear_map_to_json(big.basis(), big.basis(), c.h);
    out["p"] = linear_map_to_json(big.basis(), c.small_basis, c.p);
    out["i"] = linear_map_to_json(c.small_basis, big.basis(), c.i);
    out["d"] = linear_map_to_json(c.small_basis, c.small_basis, c.d_small);
    return out;
}

BasedContraction contraction_from_json(const CurvedLinfPresentation& big, const Json& j) {
    expect_object(j, "contraction");
    BasedContraction c;
    for (const auto& v : j.value("small_basis", Json::array()))
        c.small_basis.push_back(
            {v.at("name").get<std::string>(), v.value("deg", 0), v.value("weight", 1)});
    c.D = linear_map_from_json(big.basis(), big.basis(), j.value("D", Json::array()),
                               "contraction/D");
    c.h = linear_map_from_json(big.basis(), big.basis(), j.value("h", Json::array()),
                               "contraction/h");
    c.p = linear_map_from_json(big.basis(), c.small_basis, j.value("p", Json::array()),
                               "contraction/p");
    c.i = linear_map_from_json(c.small_basis, big.basis(), j.value("i", Json::array()),
                               "contraction/i");
    c.d_small = linear_map_from_json(c.small_basis, c.small_basis, j.value("d", Json::array()),
                                     "contraction/d");
    return c;
}

Json simplex_to_json(const CurvedLinfPresentation& l, const SimplexInNerve& s) {
    Json out;
    out["schema"] = kSchemaTag;
    out["n"] = s.n;
    out["element"] = form_element_to_json(l, s.x);
    return out;
}

SimplexInNerve simplex_from_json(const CurvedLinfPresentation& l, const Json& j) {
    expect_object(j, "simplex");
    int n = j.value("n", 0);
    return SimplexInNerve{n, form_element_from_json(l, n, j.at("element"), "simplex/element")};
}

Json horn_to_json(const CurvedLinfPresentation& l, const MCHorn& horn) {
    Json faces = Json::array();
    for (const auto& [jdx, face] : horn.faces) {
        Json f;
        f["face"] = jdx;
        f["element"] = form_element_to_json(l, face);
        faces.push_back(std::move(f));
    }
    Json out;
    out["schema"] = kSchemaTag;
    out["n"] = horn.n;
    out["missing"] = horn.missing;
    out["faces"] = std::move(faces);
    return out;
}

MCHorn horn_from_json(const CurvedLinfPresentation& l, const Json& j) {
    expect_object(j, "horn");
    MCHorn horn;
    horn.n = j.value("n", 0);
    horn.missing = j.value("missing", 1);
    int k = 0;
    for (const auto& f : j.value("faces", Json::array())) {
        std::string here = "horn/faces/" + std::to_string(k++);
        if (!f.contains("face")) bad(here, "face entries need an index");
        horn.faces[f["face"].get<int>()] =
            form_element_from_json(l, horn.n - 1, f.at("element"), here);
    }
    return horn;
}

Json report_to_json(const ValidationReport& rep) {
    Json items = Json::array();
    for (const auto& v : rep.items) {
        Json o;
        o["kind"] = v.kind;
        o["n"] = v.n;
        o["tuple"] = v.tuple;
        o["detail"] = v.detail;
        items.push_back(std::move(o));
    }
    Json out;
    out["ok"] = rep.ok();
    out["violations"] = std::move(items);
    return out;
}

}  // namespace mch
