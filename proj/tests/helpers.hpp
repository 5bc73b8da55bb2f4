#pragma once
// small hand-written algebras and a shared catalog for the unit tests

#include <map>
#include <string>

#include "qra/catalog.hpp"
#include "qra/core.hpp"

namespace fixture {

using qra::FinAlgebra;

inline std::vector<std::vector<int>> chain_leq(int n) {
    std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) m[a][b] = 1;
    return m;
}

inline FinAlgebra trivial() { return FinAlgebra::from_matrices({{1}}, {{0}}, 0, {0}, {0}, std::vector<int>{0}, "T1"); }

// 0 < 1, product = meet
inline FinAlgebra boolean2(bool with_neg = true) {
    std::optional<std::vector<int>> ng;
    if (with_neg) ng = std::vector<int>{1, 0};
    return FinAlgebra::from_matrices(chain_leq(2), {{0, 0}, {0, 1}}, 1, {1, 0}, {1, 0}, ng, "B2");
}

// -1 < 0 < 1 as 0 < 1 < 2; the factor of larger absolute value wins, ties go down
inline FinAlgebra sugihara3(bool with_neg = true) {
    std::optional<std::vector<int>> ng;
    if (with_neg) ng = std::vector<int>{2, 1, 0};
    return FinAlgebra::from_matrices(chain_leq(3), {{0, 0, 0}, {0, 1, 2}, {0, 2, 2}}, 1, {2, 1, 0}, {2, 1, 0}, ng, "S3");
}

// 0 < a < 1 with a.a = 0
inline FinAlgebra lukasiewicz3(bool with_neg = true) {
    std::optional<std::vector<int>> ng;
    if (with_neg) ng = std::vector<int>{2, 1, 0};
    return FinAlgebra::from_matrices(chain_leq(3), {{0, 0, 0}, {0, 0, 1}, {0, 1, 2}}, 2, {2, 1, 0}, {2, 1, 0}, ng, "L3");
}

// 0 < a < b < 1, truncated addition of thirds
inline FinAlgebra lukasiewicz4() {
    std::vector<std::vector<int>> p(4, std::vector<int>(4));
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) p[a][b] = std::max(0, a + b - 3);
    return FinAlgebra::from_matrices(chain_leq(4), p, 3, {3, 2, 1, 0}, {3, 2, 1, 0}, std::vector<int>{3, 2, 1, 0}, "L4");
}

inline const qra::Catalog& catalog6() {
    static const qra::Catalog c = qra::build_catalog(6);
    return c;
}

// every DqRA variant, keyed by variant name
inline std::map<std::string, FinAlgebra> catalog_dqras(int max_size = 6) {
    std::map<std::string, FinAlgebra> out;
    for (const auto& e : catalog6().entries)
        if (e.size <= max_size)
            for (const auto& v : e.variants) out.emplace(v.name, v.algebra);
    return out;
}

inline std::map<std::string, FinAlgebra> catalog_dinfls(int max_size = 6) {
    std::map<std::string, FinAlgebra> out;
    for (const auto& e : catalog6().entries)
        if (e.size <= max_size) out.emplace(e.name, e.algebra);
    return out;
}

}  // namespace fixture
