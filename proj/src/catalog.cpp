#include "qra/catalog.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace qra {

namespace {

std::vector<Diagram> load_diagrams() {
    Json j = parse_json_text(bundled_text("catalog_diagrams.json"), "catalog_diagrams.json");
    std::vector<Diagram> out;
    for (const Json& e : json_field(j, "entries")) {
        Diagram d;
        d.name = json_field(e, "name").get<std::string>();
        d.size = json_field(e, "size").get<int>();
        for (const Json& n : json_field(e, "nodes")) {
            DiagramNode node;
            node.style = json_field(n, "style").get<std::string>();
            node.label = json_field(n, "label").get<std::string>();
            node.covers = json_int_array(json_field(n, "covers"), "covers", 0, d.size - 1);
            d.nodes.push_back(std::move(node));
        }
        if ((int)d.nodes.size() != d.size) throw StructuralError("catalog: node count differs for " + d.name);
        out.push_back(std::move(d));
    }
    return out;
}

std::vector<std::string> split_terms(const std::string& label) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : label) {
        if (ch == '=') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

bool is_letter(char c) { return c >= 'a' && c <= 'd'; }

Poset diagram_poset(const Diagram& D) {
    Poset P;
    P.n = D.size;
    P.up.assign(D.size, 0);
    for (int x = 0; x < D.size; ++x) P.up[x] = bit(x);
    // covers point upwards, so closing under covers gives the up-sets
    for (int round = 0; round < D.size; ++round)
        for (int x = 0; x < D.size; ++x)
            for (int y : D.nodes[x].covers) P.up[x] |= P.up[y];
    return P;
}

// value of a term, or -1 when it mentions an unbound letter
int eval_term(const FinAlgebra& A, const std::string& t, const std::vector<int>& letters) {
    auto sym = [&](char c) -> int {
        if (c == '1') return A.one();
        if (c == '0') return A.zero();
        if (c == 'T') return A.top();
        if (is_letter(c)) return letters[c - 'a'];
        throw StructuralError(std::string("catalog: unknown symbol ") + c);
    };
    if (t.size() == 3 && t[1] == '^' && t[2] == '2') {
        int x = sym(t[0]);
        return x < 0 ? -1 : A.mul(x, x);
    }
    if (t.size() == 1) return sym(t[0]);
    if (t.size() == 2) {
        int x = sym(t[0]), y = sym(t[1]);
        return (x < 0 || y < 0) ? -1 : A.mul(x, y);
    }
    throw StructuralError("catalog: cannot read term " + t);
}

}  // namespace

const std::vector<Diagram>& catalog_diagrams() {
    static const std::vector<Diagram> d = load_diagrams();
    return d;
}

std::string element_style(const FinAlgebra& A, int a) {
    bool c = is_central(A, a), i = is_idempotent(A, a);
    if (c) return i ? "i" : "c";
    return i ? "nci" : "nc";
}

std::vector<int> letter_values(const Diagram& D, const std::vector<int>& binding) {
    std::vector<int> v(4, -1);
    for (int x = 0; x < D.size; ++x)
        for (const auto& t : split_terms(D.nodes[x].label))
            if (t.size() == 1 && is_letter(t[0])) v[t[0] - 'a'] = binding[x];
    return v;
}

std::vector<std::vector<int>> diagram_bindings(const Diagram& D, const FinAlgebra& A) {
    std::vector<std::vector<int>> out;
    if (D.size != A.size() || !A.is_lattice()) return out;
    Poset order{A.size(), std::vector<Set>(A.size(), 0)};
    for (int a = 0; a < A.size(); ++a)
        for (int b = 0; b < A.size(); ++b)
            if (A.leq(a, b)) order.up[a] |= bit(b);
    // letters used only inside products are left free and tried exhaustively
    std::vector<char> used(4, 0), bare(4, 0);
    for (const auto& node : D.nodes)
        for (const auto& t : split_terms(node.label)) {
            for (char ch : t)
                if (is_letter(ch)) used[ch - 'a'] = 1;
            if (t.size() == 1 && is_letter(t[0])) bare[t[0] - 'a'] = 1;
        }
    std::vector<int> free_letters;
    for (int l = 0; l < 4; ++l)
        if (used[l] && !bare[l]) free_letters.push_back(l);
    for (auto& f : poset_isos(diagram_poset(D), order)) {
        bool ok = true;
        for (int x = 0; x < D.size && ok; ++x) ok = element_style(A, f[x]) == D.nodes[x].style;
        if (!ok) continue;
        std::vector<int> letters(4, -1);
        for (int x = 0; x < D.size && ok; ++x)
            for (const auto& t : split_terms(D.nodes[x].label))
                if (t.size() == 1 && is_letter(t[0])) {
                    int& v = letters[t[0] - 'a'];
                    if (v >= 0 && v != f[x]) ok = false;
                    v = f[x];
                }
        if (!ok) continue;
        bool matched = false;
        auto try_free = [&](auto&& self, std::size_t i) -> void {
            if (matched) return;
            if (i == free_letters.size()) {
                for (int x = 0; x < D.size; ++x)
                    for (const auto& t : split_terms(D.nodes[x].label))
                        if (eval_term(A, t, letters) != f[x]) return;
                matched = true;
                return;
            }
            for (int a = 0; a < A.size(); ++a) {
                letters[free_letters[i]] = a;
                self(self, i + 1);
            }
            letters[free_letters[i]] = -1;
        };
        try_free(try_free, 0);
        if (matched) out.push_back(f);
    }
    return out;
}

std::string describe_neg(const Diagram& D, const FinAlgebra& A, const std::vector<int>& binding) {
    if (!A.has_neg()) throw SignatureError("describe_neg: algebra has no neg");
    if (A.neg_map() == A.tilde_map()) return "neg=tilde";
    auto letters = letter_values(D, binding);
    for (int l = 0; l < 4; ++l) {
        int x = letters[l];
        if (x < 0 || A.neg(x) == A.tilde(x)) continue;
        for (int m = 0; m < 4; ++m)
            if (letters[m] == A.neg(x))
                return std::string("neg ") + char('a' + l) + "=" + char('a' + m);
    }
    // no letter pins it down; list the map itself
    std::string s = "neg";
    for (int a = 0; a < A.size(); ++a) s += (a ? "," : " ") + std::to_string(A.neg(a));
    return s;
}

RepAnnotation representability(const std::string& name, const std::string& neg) {
    static const std::map<std::pair<std::string, std::string>, RepAnnotation> table = [] {
        std::map<std::pair<std::string, std::string>, RepAnnotation> t;
        Json j = parse_json_text(bundled_text("representability.json"), "representability.json");
        for (const Json& e : json_field(j, "entries"))
            t[{json_field(e, "name").get<std::string>(), json_field(e, "neg").get<std::string>()}] = {
                json_field(e, "class").get<std::string>(), json_field(e, "status").get<std::string>()};
        return t;
    }();
    auto it = table.find({name, neg});
    if (it == table.end()) throw NotFound("no representability annotation for " + name + " (" + neg + ")");
    return it->second;
}

namespace {

std::vector<PosetShape> shapes_with_upsets(int n) {
    if (n == 1) return {make_shape(Poset{0, {}})};
    return posets_with_upsets(n);
}

}  // namespace

Catalog build_catalog(int max_size, const SearchOptions& opt) {
    if (max_size < 1 || max_size > 6) throw PreconditionError("catalog: size bound must be between 1 and 6");
    Catalog cat;
    const auto& diagrams = catalog_diagrams();
    for (int n = 1; n <= max_size; ++n) {
        std::vector<const Diagram*> ds;
        for (const auto& d : diagrams)
            if (d.size == n) ds.push_back(&d);
        std::vector<int> claimed(ds.size(), 0);
        std::vector<CatalogEntry> level;
        for (const auto& sh : shapes_with_upsets(n)) {
            for (auto& W : enumerate_frames(sh, Signature::DInFL, opt).frames) {
                CatalogEntry e;
                e.size = n;
                e.poset = sh.name;
                e.frame = W;
                e.algebra = complex_algebra(W);
                int first = -1;
                for (std::size_t k = 0; k < ds.size(); ++k) {
                    auto b = diagram_bindings(*ds[k], e.algebra);
                    if (b.empty()) continue;
                    e.candidates.push_back(ds[k]->name);
                    ++claimed[k];
                    if (first < 0) {
                        first = (int)k;
                        e.binding = b.front();
                    }
                }
                if (first < 0) {
                    cat.problems.push_back("no diagram matches " + W.name);
                    continue;
                }
                e.name = ds[first]->name;
                e.algebra.set_name(e.name);
                e.ambiguous = e.candidates.size() > 1;
                if (e.ambiguous) cat.problems.push_back(W.name + " matches several diagrams");
                level.push_back(std::move(e));
            }
        }
        for (std::size_t k = 0; k < ds.size(); ++k) {
            if (claimed[k] == 0) cat.problems.push_back("diagram " + ds[k]->name + " matches no algebra");
            if (claimed[k] > 1) cat.problems.push_back("diagram " + ds[k]->name + " matches several algebras");
        }
        // DqRA variants hang off the entry their reduct is isomorphic to
        for (const auto& sh : shapes_with_upsets(n)) {
            for (auto& W : enumerate_frames(sh, Signature::DqRA, opt).frames) {
                FinAlgebra Q = complex_algebra(W);
                FinAlgebra R = Q.with_neg(std::nullopt);
                bool placed = false;
                for (auto& e : level) {
                    if (e.poset != sh.name) continue;
                    auto g = algebra_iso(R, e.algebra);
                    if (!g) continue;
                    FinAlgebra Qe = permute(Q, *g);
                    const Diagram* D = nullptr;
                    for (auto* d : ds)
                        if (d->name == e.name) D = d;
                    // the description must not depend on which binding is used
                    std::string desc;
                    for (auto& b : diagram_bindings(*D, e.algebra)) {
                        std::string s = describe_neg(*D, Qe, b);
                        if (desc.empty() || s < desc) desc = s;
                    }
                    CatalogVariant v;
                    v.neg = desc;
                    v.algebra = Qe;
                    v.frame = W;
                    e.variants.push_back(std::move(v));
                    placed = true;
                    break;
                }
                if (!placed) cat.problems.push_back("DqRA frame " + W.name + " has no DInFL entry");
            }
        }
        for (auto& e : level) {
            std::sort(e.variants.begin(), e.variants.end(), [](const auto& a, const auto& b) {
                bool ta = a.neg == "neg=tilde", tb = b.neg == "neg=tilde";
                return ta != tb ? ta : a.neg < b.neg;
            });
            bool has_tilde = !e.variants.empty() && e.variants.front().neg == "neg=tilde";
            for (auto& v : e.variants) {
                v.name = (has_tilde && v.neg != "neg=tilde") ? e.name + "[" + v.neg + "]" : e.name;
                v.algebra.set_name(v.name);
                try {
                    v.rep = representability(e.name, v.neg);
                } catch (NotFound&) {
                }
            }
        }
        std::sort(level.begin(), level.end(), [&](const auto& a, const auto& b) {
            auto pos = [&](const std::string& nm) {
                for (std::size_t k = 0; k < diagrams.size(); ++k)
                    if (diagrams[k].name == nm) return k;
                return diagrams.size();
            };
            return pos(a.name) < pos(b.name);
        });
        for (auto& e : level) cat.entries.push_back(std::move(e));
    }
    return cat;
}

Json catalog_to_json(const Catalog& c) {
    Json j;
    Json es = Json::array();
    for (const auto& e : c.entries) {
        Json x;
        x["name"] = e.name;
        x["size"] = e.size;
        x["poset"] = e.poset;
        x["frame"] = e.frame.name;
        x["ambiguous"] = e.ambiguous;
        Json styles = Json::array();
        for (int a = 0; a < e.algebra.size(); ++a) styles.push_back(element_style(e.algebra, a));
        x["styles"] = styles;
        Json vs = Json::array();
        for (const auto& v : e.variants) {
            Json y;
            y["name"] = v.name;
            y["neg"] = v.neg;
            y["class"] = v.rep ? Json(v.rep->cls) : Json(nullptr);
            y["status"] = v.rep ? Json(v.rep->status) : Json(nullptr);
            vs.push_back(y);
        }
        x["dqra"] = vs;
        es.push_back(x);
    }
    j["entries"] = es;
    j["problems"] = c.problems;
    return j;
}

}  // namespace qra
