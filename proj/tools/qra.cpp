#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qra/catalog.hpp"
#include "qra/filters.hpp"
#include "qra/io.hpp"
#include "qra/morphisms.hpp"
#include "qra/ra.hpp"
#include "qra/represent.hpp"

using namespace qra;
namespace fs = std::filesystem;

namespace {

struct Globals {
    int jobs = 1;
    std::string format = "text";
    bool json() const { return format == "json"; }
};
Globals G;

void emit(const Json& j) { std::cout << canonical_dump(j); }

Json report_json(const std::string& kind, const ValidationReport& r) {
    Json j;
    j["kind"] = kind;
    j["ok"] = r.ok();
    Json fs = Json::array();
    for (const auto& f : r.failures) {
        Json x;
        x["law"] = f.law;
        x["witness"] = f.witness;
        fs.push_back(x);
    }
    j["failures"] = fs;
    j["dropped"] = r.dropped;
    j["notes"] = r.notes;
    return j;
}

// prints the report; returns false on failure
bool show_report(const std::string& kind, const ValidationReport& r) {
    if (G.json())
        emit(report_json(kind, r));
    else
        std::cout << kind << ": " << r.str() << "\n";
    return r.ok();
}

enum class Kind { Frame, PointedFrame, Algebra, Morphism, Base };

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Frame: return "frame";
        case Kind::PointedFrame: return "pointed frame";
        case Kind::Algebra: return "algebra";
        case Kind::Morphism: return "morphism";
        case Kind::Base: return "base";
    }
    return "?";
}

Kind detect(const Json& j, const std::string& src) {
    if (!j.is_object()) throw StructuralError(src + ": expected a JSON object");
    if (j.contains("map")) return Kind::Morphism;
    if (j.contains("comp")) return j.contains("bottom") ? Kind::PointedFrame : Kind::Frame;
    if (j.contains("product")) return Kind::Algebra;
    if (j.contains("E") && j.contains("alpha")) return Kind::Base;
    throw StructuralError(src + ": cannot tell what kind of object this is");
}

FinAlgebra catalog_algebra(const std::string& name) {
    // D<n>_..., optionally with a ":dinfl" suffix for the reduct
    std::string nm = name;
    bool reduct = false;
    if (nm.size() > 6 && nm.compare(nm.size() - 6, 6, ":dinfl") == 0) {
        reduct = true;
        nm.resize(nm.size() - 6);
    }
    std::size_t us = nm.find('_');
    int n = 0;
    try {
        n = std::stoi(nm.substr(1, us - 1));
    } catch (...) {
        throw NotFound("no bundled object named " + name);
    }
    if (n < 1 || n > 6) throw NotFound("no bundled object named " + name);
    Catalog c = build_catalog(n, {G.jobs});
    for (auto& e : c.entries) {
        if (reduct && e.name == nm) return e.algebra;
        if (!reduct)
            for (auto& v : e.variants)
                if (v.name == nm) return v.algebra;
    }
    throw NotFound("no bundled object named " + name);
}

// a file path, or a bundled name: W.. frames, RA<k> relation algebras, D.. catalog algebras
Json load_json(const std::string& arg) {
    if (fs::exists(arg)) return read_json_file(arg);
    for (const auto& n : bundled_frame_names())
        if (n == arg) return frame_to_json(bundled_frame(n));
    if (arg.rfind("RA", 0) == 0) {
        FinAlgebra A = ra_from_atoms(atom_structure_by_name(arg));
        return algebra_to_json(A);
    }
    if (!arg.empty() && arg[0] == 'D') return algebra_to_json(catalog_algebra(arg));
    throw NotFound("cannot open '" + arg + "': no such file or bundled name");
}

FinAlgebra as_algebra(const Json& j, const std::string& src) {
    Kind k = detect(j, src);
    if (k == Kind::Algebra) return algebra_from_json(j);
    if (k == Kind::Frame) {
        FinAlgebra A = complex_algebra(frame_from_json(j));
        A.set_name(json_field(j, "name").get<std::string>() + "+");
        return A;
    }
    throw StructuralError(src + ": expected an algebra, found a " + kind_name(k));
}

Frame as_frame(const Json& j, const std::string& src) {
    Kind k = detect(j, src);
    if (k == Kind::Frame || k == Kind::PointedFrame) return frame_from_json(j);
    throw StructuralError(src + ": expected a frame, found a " + kind_name(k));
}

PointedFrame pointed_from_json(const Json& j) {
    PointedFrame P;
    P.frame = frame_from_json(j);
    P.bottom = json_field(j, "bottom").get<int>();
    P.top = json_field(j, "top").get<int>();
    return P;
}

std::string sig_word(bool neg) { return neg ? "DqRA" : "DInFL"; }

// ---------------------------------------------------------------- verbs

int check_morphism_json(const Json& j, const std::string& src);

int cmd_check(const std::string& file) {
    Json j = load_json(file);
    switch (detect(j, file)) {
        case Kind::Frame: {
            Frame W = frame_from_json(j);
            auto r = W.neg ? validate_dqra_frame(W) : validate_dinfl_frame(W);
            return show_report(sig_word(W.neg.has_value()) + "-frame", r) ? 0 : 1;
        }
        case Kind::PointedFrame:
            return show_report("pointed frame", validate_pointed_frame(pointed_from_json(j))) ? 0 : 1;
        case Kind::Algebra: {
            FinAlgebra A = algebra_from_json(j);
            ValidationReport r = A.has_neg() ? validate_dqra(A) : validate_dinfl(A);
            if (r.ok()) r.merge(check_di(A));
            return show_report(A.has_neg() ? "DqRA" : "DInFL-algebra", r) ? 0 : 1;
        }
        case Kind::Morphism:
            return check_morphism_json(j, file);
        case Kind::Base: {
            base_from_json(j);
            return show_report("base", ValidationReport{}) ? 0 : 1;
        }
    }
    return 2;
}

int cmd_complex(const std::string& file) {
    Json j = load_json(file);
    Frame W = as_frame(j, file);
    FinAlgebra A = complex_algebra(W);
    A.set_name(W.name + "+");
    emit(algebra_to_json(A));
    return 0;
}

int cmd_dual(const std::string& file) {
    FinAlgebra A = as_algebra(load_json(file), file);
    Frame W = dual_frame(A);
    W.name = A.name() + "_dual";
    emit(frame_to_json(W));
    return 0;
}

int cmd_roundtrip(const std::string& file) {
    Json j = load_json(file);
    Kind k = detect(j, file);
    std::vector<int> map;
    std::string what;
    try {
        if (k == Kind::Frame || k == Kind::PointedFrame) {
            map = roundtrip_frame(frame_from_json(j));
            what = "frame roundtrip";
        } else {
            map = roundtrip_algebra(as_algebra(j, file));
            what = "algebra roundtrip";
        }
    } catch (InternalError& e) {
        ValidationReport r;
        r.fail(e.what(), {});
        show_report("roundtrip", r);
        return 1;
    }
    if (G.json()) {
        Json o;
        o["kind"] = what;
        o["ok"] = true;
        o["map"] = map;
        emit(o);
    } else {
        std::cout << what << ": ok\n";
    }
    return 0;
}

int cmd_iso(const std::string& f1, const std::string& f2) {
    Json a = load_json(f1), b = load_json(f2);
    Kind ka = detect(a, f1), kb = detect(b, f2);
    std::optional<std::vector<int>> m;
    bool frames = ka == Kind::Frame || ka == Kind::PointedFrame;
    // a frame against an algebra compares the frame's complex algebra
    if (frames != (kb == Kind::Frame || kb == Kind::PointedFrame)) frames = false;
    if (frames)
        m = frame_iso(frame_from_json(a), frame_from_json(b));
    else
        m = algebra_iso(as_algebra(a, f1), as_algebra(b, f2));
    if (G.json()) {
        Json o;
        o["isomorphic"] = m.has_value();
        o["map"] = m ? Json(*m) : Json(nullptr);
        emit(o);
    } else if (m) {
        std::cout << "isomorphic:";
        for (int x : *m) std::cout << " " << x;
        std::cout << "\n";
    } else {
        std::cout << "not isomorphic\n";
    }
    return m ? 0 : 1;
}

Json resolve_side(const Json& j, const std::string& src) {
    if (j.is_string()) return load_json(j.get<std::string>());
    if (j.is_object()) return j;
    throw StructuralError(src + ": source and target must be names or objects");
}

int check_morphism_json(const Json& j, const std::string& src) {
    Json s = resolve_side(json_field(j, "source"), src), t = resolve_side(json_field(j, "target"), src);
    Kind ks = detect(s, src);
    bool frames = ks == Kind::Frame || ks == Kind::PointedFrame;
    ValidationReport r;
    Json extra;
    if (frames) {
        FrameMap f{frame_from_json(s), as_frame(t, src), {}};
        f.map = json_int_array(json_field(j, "map"), "map", 0, std::max(0, f.target.n - 1));
        r = validate_frame_morphism(f);
        if (r.ok()) {
            AlgHom h = frame_morphism_dual(f);
            r.merge(validate_homomorphism(h));
            if (is_surjective(f.map, f.target.n) && !is_injective(h.map)) r.fail("surjective map has injective dual", {});
            if (is_order_embedding(f) && !is_surjective(h.map, h.target.size()))
                r.fail("order embedding has surjective dual", {});
            extra["dual"] = h.map;
        }
    } else {
        AlgHom h{as_algebra(s, src), as_algebra(t, src), {}};
        h.map = json_int_array(json_field(j, "map"), "map", 0, std::max(0, h.target.size() - 1));
        if ((int)h.map.size() != h.source.size()) throw StructuralError(src + ": map has wrong length");
        r = validate_homomorphism(h);
        if (r.ok()) {
            if (preserves_bounds(h)) {
                FrameMap f = hom_dual(h);
                r.merge(validate_frame_morphism(f));
                r.merge(check_hom_dual_lemmas(h));
                if (is_injective(h.map) && !is_surjective(f.map, f.target.n)) r.fail("injective map has surjective dual", {});
                if (is_surjective(h.map, h.target.size()) && !is_order_embedding(f))
                    r.fail("surjective map has order-embedding dual", {});
                extra["dual"] = f.map;
            } else {
                r.notes.push_back("bounds not preserved: dual taken on generalised prime filters");
                r.merge(check_filter_preimage(h));
                extra["filter_dual"] = filter_preimage(h).map;
            }
        }
    }
    std::string kind = frames ? "frame morphism" : "homomorphism";
    if (G.json()) {
        Json o = report_json(kind, r);
        for (auto& [k, v] : extra.items()) o[k] = v;
        emit(o);
    } else {
        std::cout << kind << ": " << r.str() << "\n";
        for (const auto& n : r.notes) std::cout << "  note: " << n << "\n";
    }
    return r.ok() ? 0 : 1;
}

int cmd_morphism(const std::string& file) { return check_morphism_json(load_json(file), file); }

PosetShape load_poset(const std::string& arg) {
    if (fs::exists(arg)) {
        Json j = read_json_file(arg);
        const Json& m = json_field(j, "leq");
        if (!m.is_array()) throw StructuralError(arg + ": leq must be a matrix");
        int n = (int)m.size();
        Poset P = Poset::from_matrix(json_int_matrix(m, "leq", n, n, 0, 1));
        if (!P.valid()) throw StructuralError(arg + ": leq is not a partial order");
        return make_shape(P);
    }
    return named_poset(arg);
}

std::string file_safe(std::string s) {
    for (char& c : s)
        if (!std::isalnum((unsigned char)c) && c != '_' && c != '-' && c != '+') c = '_';
    return s;
}

int cmd_enumerate(const std::string& poset, const std::string& sig, const std::string& emit_dir) {
    PosetShape P = load_poset(poset);
    Signature s;
    if (sig == "dinfl")
        s = Signature::DInFL;
    else if (sig == "dqra")
        s = Signature::DqRA;
    else
        throw StructuralError("signature must be dinfl or dqra");
    SearchOptions opt{G.jobs, budget_from_env()};
    auto res = enumerate_frames(P, s, opt);
    if (!emit_dir.empty()) {
        fs::create_directories(emit_dir);
        for (const auto& W : res.frames) {
            std::ofstream out(fs::path(emit_dir) / (file_safe(W.name) + ".json"));
            out << canonical_dump(frame_to_json(W));
        }
    }
    if (G.json()) {
        Json o;
        o["poset"] = P.name;
        o["signature"] = signature_name(s);
        o["count"] = res.count();
        Json fsj = Json::array();
        for (const auto& W : res.frames) fsj.push_back(frame_to_json(W));
        o["frames"] = fsj;
        emit(o);
    } else {
        std::cout << P.name << ": " << res.count() << " " << sig_word(s == Signature::DqRA) << "-frames ("
                  << res.stats.nodes << " nodes, " << std::fixed << std::setprecision(1) << res.stats.wall_ms
                  << " ms)\n";
        for (const auto& W : res.frames) std::cout << "  " << W.name << "\n";
    }
    return 0;
}

int cmd_count(int max_size, bool by_poset) {
    SearchOptions opt{G.jobs, budget_from_env()};
    std::vector<long> dinfl, dqra;
    for (int n = 1; n <= max_size; ++n) {
        auto c = count_algebras(n, opt);
        dinfl.push_back(c.dinfl);
        dqra.push_back(c.dqra);
    }
    std::vector<std::tuple<std::string, long, long>> posets;
    if (by_poset) {
        for (const auto& name : figure_poset_names()) {
            PosetShape s = named_poset(name);
            if (s.upset_count > max_size) continue;
            posets.emplace_back(s.name, (long)enumerate_frames(s, Signature::DInFL, opt).count(),
                                (long)enumerate_frames(s, Signature::DqRA, opt).count());
        }
    }
    if (G.json()) {
        Json o;
        std::vector<int> sizes;
        for (int n = 1; n <= max_size; ++n) sizes.push_back(n);
        o["sizes"] = sizes;
        o["dinfl"] = dinfl;
        o["dqra"] = dqra;
        Json ps = Json::array();
        for (auto& [n, a, b] : posets) {
            Json x;
            x["poset"] = n;
            x["dinfl"] = a;
            x["dqra"] = b;
            ps.push_back(x);
        }
        o["posets"] = ps;
        emit(o);
        return 0;
    }
    auto row = [](const std::string& head, const auto& cells) {
        std::cout << std::left << std::setw(16) << head;
        for (const auto& c : cells) {
            std::ostringstream os;
            os << c;
            std::cout << std::right << std::setw(std::max<int>(5, (int)os.str().size() + 2)) << os.str();
        }
        std::cout << "\n";
    };
    if (!posets.empty()) {
        std::vector<std::string> h, a, b;
        for (auto& [n, x, y] : posets) {
            h.push_back(n);
            a.push_back(std::to_string(x));
            b.push_back(std::to_string(y));
        }
        row("poset", h);
        row("DInFL-frames", a);
        row("DqRA-frames", b);
        std::cout << "\n";
    }
    std::vector<int> sizes;
    for (int n = 1; n <= max_size; ++n) sizes.push_back(n);
    row("size", sizes);
    row("DInFL-algebras", dinfl);
    row("DqRAs", dqra);
    return 0;
}

int cmd_catalog(int max_size) {
    Catalog c = build_catalog(max_size, {G.jobs, budget_from_env()});
    if (G.json()) {
        emit(catalog_to_json(c));
    } else {
        std::cout << std::left << std::setw(22) << "name" << std::setw(8) << "poset" << std::setw(12) << "neg"
                  << "representability\n";
        for (const auto& e : c.entries) {
            for (const auto& v : e.variants)
                std::cout << std::setw(22) << v.name << std::setw(8) << (e.poset.empty() ? "-" : e.poset)
                          << std::setw(12) << v.neg << (v.rep ? v.rep->status : "no annotation") << "\n";
        }
        for (const auto& p : c.problems) std::cout << "problem: " << p << "\n";
    }
    return c.problems.empty() ? 0 : 1;
}

int cmd_priestley(const std::string& file, bool roundtrip) {
    FinAlgebra A = as_algebra(load_json(file), file);
    if (roundtrip) {
        try {
            auto m = priestley_roundtrip(A);
            if (G.json()) {
                Json o;
                o["kind"] = "priestley roundtrip";
                o["ok"] = true;
                o["map"] = m;
                emit(o);
            } else {
                std::cout << "priestley roundtrip: ok\n";
            }
            return 0;
        } catch (InternalError& e) {
            ValidationReport r;
            r.fail(e.what(), {});
            show_report("priestley roundtrip", r);
            return 1;
        }
    }
    PointedFrame P = filter_frame(A);
    Json o = frame_to_json(P.frame);
    o["bottom"] = P.bottom;
    o["top"] = P.top;
    emit(o);
    return validate_pointed_frame(P).ok() ? 0 : 1;
}

int cmd_represent(const std::string& file, int max_points, bool full_e, bool cyclic_only, bool no_filter,
                  const std::string& verify) {
    FinAlgebra A = as_algebra(load_json(file), file);
    if (!verify.empty()) {
        auto r = verify_certificate(A, read_json_file(verify));
        return show_report("certificate", r) ? 0 : 1;
    }
    RepOptions o;
    o.max_points = max_points;
    o.full_E_only = full_e;
    o.alpha_id_only = cyclic_only;
    o.use_filter = !no_filter;
    o.jobs = G.jobs;
    o.budget_ms = budget_from_env();
    RepResult r = representation_search(A, o);
    Json s = r.summary();
    s["algebra"] = A.name();
    s["max_points"] = max_points;
    emit(s);
    return 0;
}

int cmd_subreducts(int index, bool all) {
    std::vector<int> idx;
    if (all || index == 0)
        for (const auto& s : builtin_atom_structures()) idx.push_back(s.index);
    else
        idx.push_back(atom_structure(index).index);
    Json rows = Json::array();
    for (int k : idx) {
        const AtomStructure& s = atom_structure(k);
        auto sub = max_proper_qra_subreduct(s);
        Family fam = family_criteria(s);
        Json x;
        x["index"] = k;
        x["name"] = s.name;
        x["family"] = family_name(fam);
        x["size"] = sub ? sub->algebra.size() : 0;
        x["poset"] = sub ? Json(sub->poset) : Json(nullptr);
        x["lattice"] = sub ? Json(lattice_shape(sub->poset)) : Json(nullptr);
        x["commutative"] = sub ? Json(classify(sub->algebra).commutative) : Json(nullptr);
        x["neg_candidates"] = sub ? (int)sub->neg_candidates.size() : 0;
        x["representable"] = s.ra_representable ? "relation algebra representable" : "relation algebra not representable";
        if (!s.note.empty()) x["note"] = s.note;
        rows.push_back(x);
    }
    if (G.json()) {
        Json o;
        o["structures"] = rows;
        emit(o);
        return 0;
    }
    std::cout << std::left << std::setw(6) << "RA" << std::setw(7) << "family" << std::setw(6) << "size"
              << std::setw(8) << "poset" << std::setw(8) << "lattice" << std::setw(6) << "comm"
              << "annotation\n";
    for (const auto& x : rows) {
        std::string comm = x["commutative"].is_null() ? "-" : (x["commutative"].get<bool>() ? "yes" : "no");
        std::cout << std::setw(6) << x["index"].get<int>() << std::setw(7) << x["family"].get<std::string>()
                  << std::setw(6) << x["size"].get<int>() << std::setw(8)
                  << (x["poset"].is_null() ? "-" : x["poset"].get<std::string>()) << std::setw(8)
                  << (x["lattice"].is_null() ? "-" : x["lattice"].get<std::string>()) << std::setw(6) << comm
                  << x["representable"].get<std::string>();
        if (x.contains("note")) std::cout << "; " << x["note"].get<std::string>();
        std::cout << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qra: finite DInFL-algebras, DqRAs and their frames"};
    app.require_subcommand(1);
    app.add_option("--jobs,-j", G.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--format", G.format, "text or json (table is accepted as text)")
        ->check(CLI::IsMember({"text", "table", "json"}));

    std::string f1, f2, poset, sig = "dqra", emit_dir, verify;
    int max_size = 6, max_points = 1, index = 0;
    bool by_poset = false, roundtrip = false, full_e = false, cyclic_only = false, no_filter = false, all = false;

    auto sub = [&](const char* name, const char* desc) {
        auto* s = app.add_subcommand(name, desc);
        s->fallthrough();
        return s;
    };
    auto* c_check = sub("check", "validate a frame, algebra, morphism or base");
    c_check->add_option("file", f1)->required();
    auto* c_complex = sub("complex", "complex algebra of a frame");
    c_complex->add_option("file", f1)->required();
    auto* c_dual = sub("dual", "dual frame of an algebra");
    c_dual->add_option("file", f1)->required();
    auto* c_rt = sub("roundtrip", "check the duality round trip");
    c_rt->add_option("file", f1)->required();
    auto* c_iso = sub("iso", "isomorphism between two frames or two algebras");
    c_iso->add_option("first", f1)->required();
    c_iso->add_option("second", f2)->required();
    auto* c_mor = sub("morphism-check", "validate a frame morphism or homomorphism and its dual");
    c_mor->add_option("file", f1)->required();
    auto* c_enum = sub("enumerate", "enumerate frames over one poset");
    c_enum->add_option("--poset", poset)->required();
    c_enum->add_option("--signature", sig)->check(CLI::IsMember({"dinfl", "dqra"}));
    c_enum->add_option("--emit", emit_dir, "write one JSON file per frame");
    auto* c_count = sub("count", "count algebras by size");
    c_count->add_option("--max-size", max_size)->check(CLI::Range(1, 8));
    c_count->add_flag("--by-poset", by_poset, "also count frames over each named poset in range");
    auto* c_cat = sub("catalog", "named algebras up to size six");
    c_cat->add_option("--max-size", max_size)->check(CLI::Range(1, 6));
    auto* c_pr = sub("priestley", "filter frame of an algebra");
    c_pr->add_option("file", f1)->required();
    c_pr->add_flag("--roundtrip", roundtrip);
    auto* c_rep = sub("represent", "search for a finite representation");
    c_rep->add_option("file", f1)->required();
    c_rep->add_option("--max-points", max_points)->check(CLI::Range(1, 8));
    c_rep->add_flag("--full-E", full_e, "only E = X^2");
    c_rep->add_flag("--cyclic-only", cyclic_only, "only alpha = identity");
    c_rep->add_flag("--no-filter", no_filter, "search even when finite representations are ruled out");
    c_rep->add_option("--verify", verify, "re-check a certificate file instead of searching");
    auto* c_sub = sub("subreducts", "proper quasi relation algebra subreducts of the 37 atom structures");
    auto* o_idx = c_sub->add_option("--index", index)->check(CLI::Range(1, 37));
    c_sub->add_flag("--all", all)->excludes(o_idx);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*c_check) return cmd_check(f1);
        if (*c_complex) return cmd_complex(f1);
        if (*c_dual) return cmd_dual(f1);
        if (*c_rt) return cmd_roundtrip(f1);
        if (*c_iso) return cmd_iso(f1, f2);
        if (*c_mor) return cmd_morphism(f1);
        if (*c_enum) return cmd_enumerate(poset, sig, emit_dir);
        if (*c_count) return cmd_count(max_size, by_poset);
        if (*c_cat) return cmd_catalog(max_size);
        if (*c_pr) return cmd_priestley(f1, roundtrip);
        if (*c_rep) return cmd_represent(f1, max_points, full_e, cyclic_only, no_filter, verify);
        if (*c_sub) return cmd_subreducts(index, all);
    } catch (const BudgetExceeded& e) {
        std::cerr << "qra: " << e.what() << "\n";
        std::cout << e.checkpoint << "\n";
        return 3;
    } catch (const InternalError& e) {
        std::cerr << "qra: internal error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "qra: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "qra: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
