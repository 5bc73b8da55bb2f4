#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace qra;
using namespace fixture;

TEST_CASE("small hand-built algebras validate") {
    CHECK(validate_dinfl(trivial()).ok());
    CHECK(validate_dqra(trivial()).ok());
    CHECK(validate_dqra(boolean2()).ok());
    CHECK(validate_dqra(sugihara3()).ok());
    CHECK(validate_dqra(lukasiewicz3()).ok());
    CHECK(validate_dqra(lukasiewicz4()).ok());
    CHECK(check_di(sugihara3()).ok());
    CHECK(check_di(trivial()).ok());
}

TEST_CASE("swapped two-element product breaks the unit law") {
    // 1.1 = 0, 0.0 = 1 style swap: 1 no longer acts as a unit
    auto A = FinAlgebra::from_matrices(chain_leq(2), {{1, 0}, {0, 0}}, 1, {1, 0}, {1, 0});
    auto r = validate_dinfl(A);
    CHECK_FALSE(r.ok());
    CHECK((r.has_law("unit left") || r.has_law("unit right")));
}

TEST_CASE("identity negation on a non-Boolean chain fails De Morgan") {
    auto A = lukasiewicz3(false).with_neg(std::vector<int>{0, 1, 2});
    auto r = validate_dqra(A);
    CHECK_FALSE(r.ok());
}

TEST_CASE("negation missing is a signature error") {
    CHECK_THROWS_AS(validate_dqra(sugihara3(false)), SignatureError);
}

TEST_CASE("ragged tables are structural errors") {
    CHECK_THROWS_AS(FinAlgebra::from_matrices({{1, 1}, {0}}, {{0, 0}, {0, 1}}, 1, {1, 0}, {1, 0}), StructuralError);
    CHECK_THROWS_AS(FinAlgebra::from_matrices(chain_leq(2), {{0, 0}, {0, 5}}, 1, {1, 0}, {1, 0}), StructuralError);
    CHECK_THROWS_AS(FinAlgebra::from_matrices(chain_leq(2), {{0, 0}, {0, 1}}, 1, {0, 0}, {1, 0}), StructuralError);
}

TEST_CASE("derived operations") {
    CHECK(derived_ops(boolean2()).zero == 0);
    auto S = sugihara3();
    auto d = derived_ops(S);
    CHECK(d.zero == S.one());
    for (auto& A : {boolean2(), sugihara3(), lukasiewicz3(), lukasiewicz4()}) {
        auto D = derived_ops(A);
        const int n = A.size();
        for (int a = 0; a < n; ++a) {
            CHECK(D.plus[a * n + D.zero] == a);
            for (int b = 0; b < n; ++b) {
                // both forms of the dual product agree
                CHECK(D.plus[a * n + b] == A.tilde(A.mul(A.minus(b), A.minus(a))));
                for (int c = 0; c < n; ++c) {
                    bool lhs = A.leq(A.mul(a, b), c);
                    CHECK(lhs == A.leq(b, D.lres[a * n + c]));
                    CHECK(lhs == A.leq(a, D.rres[c * n + b]));
                }
            }
        }
    }
}

TEST_CASE("classification flags") {
    auto f = classify(sugihara3());
    CHECK(f.cyclic);
    CHECK(f.commutative);
    CHECK(f.symmetric);
    CHECK(f.odd);
    auto t = classify(trivial());
    CHECK((t.cyclic && t.commutative && t.symmetric && t.odd));
    auto l = classify(lukasiewicz3());
    CHECK_FALSE(l.odd);

    auto alg = catalog_dqras(4);
    REQUIRE(alg.count("D4_2_1_2[neg a=a]"));
    auto g = classify(alg.at("D4_2_1_2[neg a=a]"));
    CHECK(g.cyclic);
    CHECK(g.commutative);
    CHECK_FALSE(g.symmetric);
}

TEST_CASE("join irreducibles and kappa") {
    auto B = boolean2();
    CHECK(join_irreducibles(B) == std::vector<int>{1});
    CHECK(kappa(B, 1) == 0);
    CHECK(join_irreducibles(lukasiewicz4()) == std::vector<int>{1, 2, 3});
    CHECK_THROWS(kappa(B, 0));

    // 2x2: bottom 0, atoms 1 and 2, top 3; product = meet, negations complement
    std::vector<std::vector<int>> leq = {{1, 1, 1, 1}, {0, 1, 0, 1}, {0, 0, 1, 1}, {0, 0, 0, 1}};
    std::vector<std::vector<int>> meet = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 0, 2, 2}, {0, 1, 2, 3}};
    auto D = FinAlgebra::from_matrices(leq, meet, 3, {3, 2, 1, 0}, {3, 2, 1, 0}, std::vector<int>{3, 2, 1, 0});
    REQUIRE(validate_dqra(D).ok());
    auto J = join_irreducibles(D);
    CHECK(J == std::vector<int>{1, 2});
    // brute force: join of everything not above j
    for (int j : J) {
        int k = D.bottom();
        for (int a = 0; a < 4; ++a)
            if (!D.leq(j, a)) k = D.join(k, a);
        CHECK(kappa(D, j) == k);
    }
    CHECK(kappa(D, 1) == 2);
    CHECK(kappa(D, 2) == 1);
}

TEST_CASE("commutative algebras extend to quasi relation algebras") {
    auto S = commutative_to_qra(sugihara3(false));
    CHECK(validate_dqra(S).ok());
    CHECK(*S.neg_map() == S.tilde_map());
    CHECK(commutative_to_qra(trivial().with_neg(std::nullopt)).size() == 1);
    int n = 0;
    for (auto& [name, A] : catalog_dinfls(6))
        if (classify(A).commutative) {
            CHECK_MESSAGE(validate_dqra(commutative_to_qra(A)).ok(), name);
            ++n;
        }
    CHECK(n > 0);
}

TEST_CASE("commutative_to_qra rejects noncommutative input") {
    bool seen = false;
    for (auto& [name, A] : catalog_dinfls(6))
        if (!classify(A).commutative) {
            CHECK_THROWS_AS(commutative_to_qra(A), PreconditionError);
            seen = true;
            break;
        }
    CHECK(seen);
}

TEST_CASE("algebra isomorphism") {
    auto S = sugihara3();
    auto id = algebra_iso(S, S);
    REQUIRE(id);
    CHECK(*id == std::vector<int>{0, 1, 2});
    CHECK_FALSE(algebra_iso(S, lukasiewicz3()));
    CHECK_THROWS(algebra_iso(S, sugihara3(false)));

    // relabel a 5-element catalog algebra two ways
    auto alg = catalog_dqras(5);
    const FinAlgebra* five = nullptr;
    for (auto& [name, A] : alg)
        if (A.size() == 5) five = &A;
    REQUIRE(five);
    std::vector<int> p1 = {3, 0, 4, 1, 2}, p2 = {1, 4, 0, 2, 3};
    auto A1 = permute(*five, p1), A2 = permute(*five, p2);
    CHECK(validate_dqra(A1).ok());
    auto f = algebra_iso(A1, A2);
    REQUIRE(f);
    CHECK(is_algebra_iso(A1, A2, *f));
    auto g = algebra_iso(A2, A1);
    REQUIRE(g);
    for (int a = 0; a < 5; ++a) CHECK((*g)[(*f)[a]] == a);
}

TEST_CASE("identities that hold in every catalog algebra") {
    for (auto& [name, A] : catalog_dqras(6)) {
        CAPTURE(name);
        const int n = A.size();
        CHECK(check_di(A).ok());
        CHECK(A.tilde(A.one()) == A.neg(A.one()));
        int z = A.minus(A.one());
        for (int a = 0; a < n; ++a) {
            CHECK(A.minus(A.tilde(a)) == a);
            CHECK(A.tilde(A.minus(a)) == a);
            CHECK(A.neg(A.tilde(a)) == A.minus(A.neg(a)));
            for (int b = 0; b < n; ++b) {
                bool le = A.leq(a, b);
                CHECK(le == A.leq(A.tilde(b), A.tilde(a)));
                CHECK(le == A.leq(A.minus(b), A.minus(a)));
                CHECK(le == A.leq(A.mul(a, A.tilde(b)), z));
                CHECK(le == A.leq(A.mul(A.minus(b), a), z));
                CHECK(A.meet(a, b) == A.minus(A.join(A.tilde(a), A.tilde(b))));
            }
        }
    }
}
