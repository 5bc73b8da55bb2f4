#include "doctest.h"
#include "helpers.hpp"
#include "qra/represent.hpp"

using namespace qra;
using namespace fixture;

TEST_CASE("catalog matches every enumerated algebra to one diagram") {
    const auto& c = catalog6();
    CHECK(c.problems.empty());
    std::size_t dinfl[7] = {}, dqra[7] = {};
    for (const auto& e : c.entries) {
        CAPTURE(e.name);
        CHECK_FALSE(e.ambiguous);
        CHECK(e.candidates.size() == 1);
        ++dinfl[e.size];
        dqra[e.size] += e.variants.size();
        for (const auto& v : e.variants) {
            CHECK(validate_dqra(v.algebra).ok());
            CHECK(v.rep.has_value());
            CHECK(frame_iso(dual_frame(v.algebra), v.frame));
        }
    }
    std::size_t want_d[] = {0, 1, 1, 2, 9, 8, 43}, want_q[] = {0, 1, 1, 2, 10, 8, 50};
    for (int n = 1; n <= 6; ++n) {
        CHECK(dinfl[n] == want_d[n]);
        CHECK(dqra[n] == want_q[n]);
    }
}

TEST_CASE("small catalog names") {
    auto q = catalog_dqras(4);
    CHECK(q.count("D1_1_1"));
    CHECK(q.count("D3_1_1"));
    CHECK(q.count("D3_1_2"));
    CHECK(q.count("D4_2_1_2"));
    CHECK(q.count("D4_2_1_2[neg a=a]"));
    CHECK(algebra_iso(q.at("D3_1_1"), lukasiewicz3()));
    CHECK(algebra_iso(q.at("D3_1_2"), sugihara3()));
    CHECK(q.size() == 14);
}

TEST_CASE("element styles") {
    auto S = sugihara3();
    for (int a = 0; a < 3; ++a) CHECK(element_style(S, a) == "i");
    auto L = lukasiewicz3();
    CHECK(element_style(L, 1) == "c");
}

TEST_CASE("representability annotations") {
    CHECK(representability("D3_1_1", "neg=tilde").cls == "infinite_only");
    CHECK_THROWS_AS(representability("D9_9_9", "neg=tilde"), NotFound);
}

TEST_CASE("filter agrees with the annotations") {
    for (const auto& e : catalog6().entries)
        for (const auto& v : e.variants) {
            CAPTURE(v.name);
            REQUIRE(v.rep);
            auto w = no_finite_rep_filter(v.algebra);
            if (v.rep->cls == "infinite_only") CHECK(w.has_value());
            if (v.rep->cls == "finite") CHECK_FALSE(w.has_value());
        }
}
