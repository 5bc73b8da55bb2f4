#include "qra/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <string_view>

namespace qra {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_files();
}

std::string canonical_dump(const Json& j) {
    std::string s;
    if (j.is_object()) {
        s = "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) s += ",\n";
            first = false;
            s += "  " + Json(it.key()).dump() + ": ";
            const Json& v = it.value();
            bool objs = v.is_array() && !v.empty() &&
                        std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_object(); });
            if (objs) {
                s += "[\n";
                for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ",\n" : "") + std::string("    ") + v[i].dump();
                s += "\n  ]";
            } else {
                s += v.dump();
            }
        }
        s += "\n}\n";
    } else if (j.is_array()) {
        if (j.empty()) return "[]\n";
        s = "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ",\n" : "") + std::string("  ") + j[i].dump();
        s += "\n]\n";
    } else {
        s = j.dump() + "\n";
    }
    return s;
}

Json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw StructuralError(source + ": JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StructuralError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_json_file(const std::string& path) { return parse_json_text(read_text_file(path), path); }

const Json& json_field(const Json& j, const char* key) {
    if (!j.is_object()) throw StructuralError("expected a JSON object");
    auto it = j.find(key);
    if (it == j.end()) throw StructuralError(std::string("missing field \"") + key + "\"");
    return *it;
}

std::vector<int> json_int_array(const Json& j, const char* what, int lo, int hi) {
    if (!j.is_array()) throw StructuralError(std::string(what) + ": expected an array");
    std::vector<int> v;
    for (auto& e : j) {
        if (!e.is_number_integer()) throw StructuralError(std::string(what) + ": expected integers");
        long x = e.get<long>();
        if (x < lo || x > hi)
            throw StructuralError(std::string(what) + ": value " + std::to_string(x) + " out of range");
        v.push_back((int)x);
    }
    return v;
}

std::vector<std::vector<int>> json_int_matrix(const Json& j, const char* what, int rows, int cols, int lo, int hi) {
    if (!j.is_array() || (int)j.size() != rows)
        throw StructuralError(std::string(what) + ": expected " + std::to_string(rows) + " rows");
    std::vector<std::vector<int>> m;
    for (auto& r : j) {
        auto row = json_int_array(r, what, lo, hi);
        if ((int)row.size() != cols) throw StructuralError(std::string(what) + ": ragged matrix");
        m.push_back(std::move(row));
    }
    return m;
}

namespace {

Json matrix_json(int n, auto&& f) {
    Json m = Json::array();
    for (int i = 0; i < n; ++i) {
        Json r = Json::array();
        for (int k = 0; k < n; ++k) r.push_back(f(i, k));
        m.push_back(r);
    }
    return m;
}

Json set_json(Set s) {
    Json a = Json::array();
    for_bits(s, [&](int x) { a.push_back(x); });
    return a;
}

Set set_from_json(const Json& j, const char* what, int n) {
    Set s = 0;
    for (int x : json_int_array(j, what, 0, n - 1)) {
        if (has(s, x)) throw StructuralError(std::string(what) + ": repeated element");
        s |= bit(x);
    }
    return s;
}

std::string opt_name(const Json& j) {
    auto it = j.find("name");
    if (it == j.end() || it->is_null()) return {};
    if (!it->is_string()) throw StructuralError("name: expected a string");
    return it->get<std::string>();
}

}  // namespace

Json algebra_to_json(const FinAlgebra& A) {
    const int n = A.size();
    Json j;
    j["name"] = A.name();
    j["size"] = n;
    j["leq"] = matrix_json(n, [&](int a, int b) { return A.leq(a, b) ? 1 : 0; });
    j["product"] = matrix_json(n, [&](int a, int b) { return A.mul(a, b); });
    j["one"] = A.one();
    j["tilde"] = A.tilde_map();
    j["minus"] = A.minus_map();
    j["neg"] = A.has_neg() ? Json(*A.neg_map()) : Json(nullptr);
    return j;
}

FinAlgebra algebra_from_json(const Json& j) {
    const Json& sz = json_field(j, "size");
    if (!sz.is_number_integer() || sz.get<long>() < 1 || sz.get<long>() > 100000)
        throw StructuralError("size: expected a positive integer");
    int n = sz.get<int>();
    auto leq = json_int_matrix(json_field(j, "leq"), "leq", n, n, 0, 1);
    auto prod = json_int_matrix(json_field(j, "product"), "product", n, n, 0, n - 1);
    const Json& one = json_field(j, "one");
    if (!one.is_number_integer() || one.get<long>() < 0 || one.get<long>() >= n)
        throw StructuralError("one: index out of range");
    auto tilde = json_int_array(json_field(j, "tilde"), "tilde", 0, n - 1);
    auto minus = json_int_array(json_field(j, "minus"), "minus", 0, n - 1);
    std::optional<std::vector<int>> neg;
    auto it = j.find("neg");
    if (it != j.end() && !it->is_null()) neg = json_int_array(*it, "neg", 0, n - 1);
    return FinAlgebra::from_matrices(leq, prod, one.get<int>(), tilde, minus, neg, opt_name(j));
}

Json frame_to_json(const Frame& W) {
    const int n = W.n;
    Json j;
    j["name"] = W.name;
    j["size"] = n;
    j["leq"] = matrix_json(n, [&](int a, int b) { return W.leq(a, b) ? 1 : 0; });
    j["identity"] = set_json(W.identity);
    Json comp = Json::array();
    for (int x = 0; x < n; ++x) {
        Json r = Json::array();
        for (int y = 0; y < n; ++y) r.push_back(set_json(W.c(x, y)));
        comp.push_back(r);
    }
    j["comp"] = comp;
    j["tilde"] = W.tilde;
    j["minus"] = W.minus;
    j["neg"] = W.neg ? Json(*W.neg) : Json(nullptr);
    return j;
}

Frame frame_from_json(const Json& j) {
    const Json& sz = json_field(j, "size");
    if (!sz.is_number_integer() || sz.get<long>() < 0 || sz.get<long>() > 64)
        throw StructuralError("size: expected an integer between 0 and 64");
    Frame W;
    W.n = sz.get<int>();
    const int n = W.n;
    W.name = opt_name(j);
    auto leq = json_int_matrix(json_field(j, "leq"), "leq", n, n, 0, 1);
    W.up.assign(n, 0);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (leq[x][y]) W.up[x] |= bit(y);
    W.identity = n ? set_from_json(json_field(j, "identity"), "identity", n) : 0;
    if (!n && !json_field(j, "identity").empty()) throw StructuralError("identity: empty frame has no points");
    const Json& comp = json_field(j, "comp");
    if (!comp.is_array() || (int)comp.size() != n) throw StructuralError("comp: expected size rows");
    W.comp.assign(n * n, 0);
    for (int x = 0; x < n; ++x) {
        if (!comp[x].is_array() || (int)comp[x].size() != n) throw StructuralError("comp: ragged table");
        for (int y = 0; y < n; ++y) W.comp[x * n + y] = set_from_json(comp[x][y], "comp", n);
    }
    W.tilde = json_int_array(json_field(j, "tilde"), "tilde", 0, n - 1);
    W.minus = json_int_array(json_field(j, "minus"), "minus", 0, n - 1);
    auto it = j.find("neg");
    if (it != j.end() && !it->is_null()) W.neg = json_int_array(*it, "neg", 0, n - 1);
    W.check_structure();
    return W;
}

std::vector<std::string> bundled_files() {
    std::vector<std::string> v;
    for (auto& [p, c] : detail::embedded_files()) v.emplace_back(p);
    return v;
}

const std::string& bundled_text(const std::string& rel) {
    static std::mutex mu;
    static std::map<std::string, std::string> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(rel);
    if (it != cache.end()) return it->second;
    for (auto& [p, c] : detail::embedded_files())
        if (p == rel) return cache.emplace(rel, std::string(c)).first->second;
    throw NotFound("no bundled data file " + rel);
}

std::vector<std::string> bundled_frame_names() {
    std::vector<std::string> v;
    for (auto& p : bundled_files())
        if (p.rfind("frames/", 0) == 0) v.push_back(p.substr(7, p.size() - 12));
    return v;
}

Frame bundled_frame(const std::string& name) {
    const std::string* text;
    try {
        text = &bundled_text("frames/" + name + ".json");
    } catch (const NotFound&) {
        throw NotFound("no bundled frame named " + name);
    }
    return frame_from_json(parse_json_text(*text, "frames/" + name + ".json"));
}

}  // namespace qra
