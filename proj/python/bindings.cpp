// Thin bindings: structured values cross the boundary as JSON text, the
// python package turns them into dicts and lists.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qra/catalog.hpp"
#include "qra/enumerate.hpp"
#include "qra/filters.hpp"
#include "qra/io.hpp"
#include "qra/morphisms.hpp"
#include "qra/ra.hpp"
#include "qra/represent.hpp"

namespace py = pybind11;
using namespace qra;

namespace {

FinAlgebra alg(const std::string& text) { return algebra_from_json(parse_json_text(text, "algebra")); }
Frame frm(const std::string& text) { return frame_from_json(parse_json_text(text, "frame")); }

std::string report_json(const ValidationReport& r) {
    Json j;
    j["ok"] = r.ok();
    j["failures"] = Json::array();
    for (auto& f : r.failures) j["failures"].push_back({{"law", f.law}, {"witness", f.witness}});
    j["notes"] = r.notes;
    return j.dump();
}

Signature sig_of(const std::string& s) {
    if (s == "dinfl") return Signature::DInFL;
    if (s == "dqra") return Signature::DqRA;
    throw PreconditionError("signature must be dinfl or dqra");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "finite DInFL-algebras, quasi relation algebras and their frames";

    py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
    py::register_exception<SignatureError>(m, "SignatureError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<NotFound>(m, "NotFound", PyExc_KeyError);
    py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);
    // budget errors carry the checkpoint as their message
    static py::exception<BudgetExceeded> budget(m, "BudgetExceeded", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const BudgetExceeded& e) {
            budget(e.checkpoint.c_str());
        }
    });

    m.def("validate_algebra", [](const std::string& a) {
        auto A = alg(a);
        return report_json(A.has_neg() ? validate_dqra(A) : validate_dinfl(A));
    });
    m.def("validate_frame", [](const std::string& w) {
        auto W = frm(w);
        return report_json(W.neg ? validate_dqra_frame(W) : validate_dinfl_frame(W));
    });
    m.def("classify", [](const std::string& a) {
        auto f = classify(alg(a));
        return Json{{"cyclic", f.cyclic}, {"commutative", f.commutative}, {"symmetric", f.symmetric}, {"odd", f.odd}}
            .dump();
    });
    m.def("complex_algebra", [](const std::string& w) { return algebra_to_json(complex_algebra(frm(w))).dump(); });
    m.def("dual_frame", [](const std::string& a) { return frame_to_json(dual_frame(alg(a))).dump(); });
    m.def("roundtrip_algebra", [](const std::string& a) { return roundtrip_algebra(alg(a)); });
    m.def("roundtrip_frame", [](const std::string& w) { return roundtrip_frame(frm(w)); });
    m.def("algebra_iso", [](const std::string& a, const std::string& b) { return algebra_iso(alg(a), alg(b)); });
    m.def("frame_iso", [](const std::string& a, const std::string& b) { return frame_iso(frm(a), frm(b)); });
    m.def("enumerate_homs", [](const std::string& a, const std::string& b) {
        std::vector<std::vector<int>> out;
        for (auto& h : enumerate_homs(alg(a), alg(b))) out.push_back(h.map);
        return out;
    });
    m.def("enumerate_frames", [](const std::string& poset, const std::string& sig) {
        std::vector<std::string> out;
        for (auto& W : enumerate_frames(named_poset(poset), sig_of(sig)).frames) out.push_back(frame_to_json(W).dump());
        return out;
    });
    m.def("count_algebras", [](int n) {
        auto c = count_algebras(n);
        return std::make_pair(c.dinfl, c.dqra);
    });
    m.def("catalog", [](int max_size) { return catalog_to_json(build_catalog(max_size)).dump(); });
    m.def("bundled_frame_names", &bundled_frame_names);
    m.def("bundled_frame", [](const std::string& n) { return frame_to_json(bundled_frame(n)).dump(); });
    m.def("gen_prime_filters", [](const std::string& a) {
        auto A = alg(a);
        std::vector<std::vector<int>> out;
        for (Set F : gen_prime_filters(A)) {
            std::vector<int> e;
            for_bits(F, [&](int x) { e.push_back(x); });
            out.push_back(e);
        }
        return out;
    });
    m.def("priestley_roundtrip", [](const std::string& a) { return priestley_roundtrip(alg(a)); });
    m.def("no_finite_rep_filter", [](const std::string& a) { return no_finite_rep_filter(alg(a)); });
    m.def(
        "represent",
        [](const std::string& a, int max_points, bool full_E_only, bool alpha_id_only, bool use_filter) {
            RepOptions o;
            o.max_points = max_points;
            o.full_E_only = full_E_only;
            o.alpha_id_only = alpha_id_only;
            o.use_filter = use_filter;
            py::gil_scoped_release nogil;
            return representation_search(alg(a), o).summary().dump();
        },
        py::arg("algebra"), py::arg("max_points") = 2, py::arg("full_E_only") = false,
        py::arg("alpha_id_only") = false, py::arg("use_filter") = true);
    m.def("verify_certificate", [](const std::string& a, const std::string& cert) {
        return report_json(verify_certificate(alg(a), parse_json_text(cert, "certificate")));
    });
    m.def("family", [](int index) { return std::string(family_name(family_criteria(atom_structure(index)))); });
    m.def("subreduct", [](int index) -> std::optional<std::string> {
        auto s = max_proper_qra_subreduct(atom_structure(index));
        if (!s) return std::nullopt;
        Json j;
        j["members"] = s->members;
        j["algebra"] = algebra_to_json(s->algebra);
        j["poset"] = s->poset;
        j["neg_candidates"] = s->neg_candidates;
        return j.dump();
    });
}
