#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "qra/represent.hpp"

using namespace qra;
using namespace fixture;

namespace {

using Pairs = std::set<std::pair<int, int>>;

RepBase chain2_base(bool with_beta) {
    RepBase b;
    b.points = 2;
    b.up = {bit(0) | bit(1), bit(1)};
    b.E = {3, 3};
    b.alpha = {0, 1};
    if (with_beta) b.beta = std::vector<int>{1, 0};
    return b;
}

RepBase point_base() {
    RepBase b;
    b.points = 1;
    b.up = {1};
    b.E = {1};
    b.alpha = {0};
    b.beta = std::vector<int>{0};
    return b;
}

// relation algebra on explicit pair sets, independent of the bitmask code
struct SetDq {
    const RepBase& b;
    Pairs E, leq;
    explicit SetDq(const RepBase& base) : b(base) {
        for (int x = 0; x < b.points; ++x)
            for (int y = 0; y < b.points; ++y) {
                if (b.in_E(x, y)) E.insert({x, y});
                if (b.leq(x, y)) leq.insert({x, y});
            }
    }
    Pairs graph(const std::vector<int>& f) const {
        Pairs g;
        for (int x = 0; x < (int)f.size(); ++x) g.insert({x, f[x]});
        return g;
    }
    Pairs comp(const Pairs& R, const Pairs& S) const {
        Pairs o;
        for (auto [x, y] : R)
            for (auto [u, v] : S)
                if (y == u) o.insert({x, v});
        return o;
    }
    Pairs conv(const Pairs& R) const {
        Pairs o;
        for (auto [x, y] : R) o.insert({y, x});
        return o;
    }
    Pairs compl_(const Pairs& R) const {
        Pairs o;
        for (auto p : E)
            if (!R.count(p)) o.insert(p);
        return o;
    }
    // (u,v) below (x,y) iff x <= u and v <= y; upsets closed upward
    bool upset(const Pairs& R) const {
        for (auto [u, v] : R)
            for (auto [x, y] : E)
                if (b.leq(x, u) && b.leq(v, y) && !R.count({x, y})) return false;
        return true;
    }
    std::vector<Pairs> upsets() const {
        std::vector<std::pair<int, int>> e(E.begin(), E.end());
        std::vector<Pairs> out;
        for (std::uint32_t m = 0; m < (1u << e.size()); ++m) {
            Pairs R;
            for (std::size_t i = 0; i < e.size(); ++i)
                if ((m >> i) & 1) R.insert(e[i]);
            if (upset(R)) out.push_back(R);
        }
        return out;
    }
};

Pairs to_pairs(const DqE& d, Rel R) {
    Pairs p;
    for (int x = 0; x < d.points(); ++x)
        for (int y = 0; y < d.points(); ++y)
            if (R & d.pair_bit(x, y)) p.insert({x, y});
    return p;
}

void compare_with_sets(const RepBase& base) {
    DqE d(base);
    SetDq s(base);
    std::vector<Rel> carrier;
    auto A = build_dq(base, &carrier);
    auto ups = s.upsets();
    REQUIRE(ups.size() == carrier.size());
    std::set<Pairs> a, b(ups.begin(), ups.end());
    for (Rel r : carrier) a.insert(to_pairs(d, r));
    CHECK(a == b);
    Pairs alpha = s.graph(base.alpha);
    CHECK(to_pairs(d, carrier[A.one()]) == s.leq);
    CHECK(to_pairs(d, carrier[A.zero()]) == s.comp(alpha, s.conv(s.compl_(s.leq))));
    for (int i = 0; i < A.size(); ++i) {
        Pairs R = to_pairs(d, carrier[i]);
        CHECK(to_pairs(d, carrier[A.tilde(i)]) == s.comp(s.conv(s.compl_(R)), alpha));
        CHECK(to_pairs(d, carrier[A.minus(i)]) == s.comp(alpha, s.conv(s.compl_(R))));
        if (base.beta) {
            Pairs beta = s.graph(*base.beta);
            CHECK(to_pairs(d, carrier[A.neg(i)]) == s.comp(s.comp(s.comp(alpha, beta), s.compl_(R)), beta));
        }
        for (int j = 0; j < A.size(); ++j)
            CHECK(to_pairs(d, carrier[A.mul(i, j)]) == s.comp(R, to_pairs(d, carrier[j])));
    }
}

}  // namespace

TEST_CASE("twisted order") {
    RepBase p = point_base();
    CHECK(twist_order(p).n == 1);

    auto b = chain2_base(false);
    DqE d(b);
    auto T = d.twist_order();
    REQUIRE(T.n == 4);
    auto index = [&](int x, int y) {
        for (int i = 0; i < 4; ++i)
            if (d.pairs()[i] == std::pair{x, y}) return i;
        return -1;
    };
    int yx = index(1, 0), xy = index(0, 1), xx = index(0, 0), yy = index(1, 1);
    for (int i = 0; i < 4; ++i) {
        CHECK(T.leq(yx, i));
        CHECK(T.leq(i, xy));
    }
    CHECK_FALSE(T.leq(xx, yy));
    CHECK_FALSE(T.leq(yy, xx));

    RepBase disc;
    disc.points = 2;
    disc.up = {bit(0), bit(1)};
    disc.E = {3, 3};
    disc.alpha = {0, 1};
    auto D = twist_order(disc);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(D.leq(i, j) == (i == j));
}

TEST_CASE("build_dq on the smallest bases") {
    auto A = build_dq(point_base());
    CHECK(A.size() == 2);
    CHECK(algebra_iso(A, boolean2()));

    auto b = chain2_base(true);
    std::vector<Rel> carrier;
    auto C = build_dq(b, &carrier);
    CHECK(C.size() == 6);
    CHECK(validate_dqra(C).ok());
    // the unit is a coatom
    auto up = C.upper_covers(C.one());
    CHECK(up == std::vector<int>{C.top()});
    compare_with_sets(b);
    compare_with_sets(point_base());
}

TEST_CASE("build_dq agrees with the set model on every 2- and 3-point base") {
    int seen = 0;
    for (int k = 2; k <= 3; ++k)
        for (bool beta : {false, true})
            for (auto& base : enumerate_bases(k, beta, true, false)) {
                compare_with_sets(base);
                auto A = build_dq(base);
                bool alpha_id = true;
                for (int x = 0; x < k; ++x) alpha_id = alpha_id && base.alpha[x] == x;
                CHECK(classify(A).cyclic == alpha_id);
                CHECK((beta ? validate_dqra(A) : validate_dinfl(A)).ok());
                ++seen;
            }
    CHECK(seen > 0);
}

TEST_CASE("complements commute with bijections") {
    auto b = chain2_base(true);
    DqE d(b);
    int n = 0;
    for (Rel R = 0; R < 16; ++R) {
        Rel r = 0;
        for (int i = 0; i < 4; ++i)
            if ((R >> i) & 1) r |= d.pair_bit(d.pairs()[i].first, d.pairs()[i].second);
        for (const auto& g : {std::vector<int>{0, 1}, *b.beta}) {
            auto [l, rr] = bijection_complement_check(b, g, r);
            CHECK(l);
            CHECK(rr);
            ++n;
        }
    }
    CHECK(n == 32);
    CHECK_THROWS_AS(bijection_complement_check(b, {0, 0}, 0), PreconditionError);
}

TEST_CASE("bad bases are rejected") {
    auto b = chain2_base(true);
    b.E = {1, 2};  // does not contain the order
    CHECK_THROWS(check_base(b));
    auto c = chain2_base(true);
    c.beta = std::vector<int>{0, 1};  // order preserving, not reversing
    CHECK_THROWS(check_base(c));
    auto j = base_to_json(chain2_base(true));
    auto back = base_from_json(j);
    CHECK(base_to_json(back) == j);
}

TEST_CASE("embedding search") {
    auto B = build_dq(point_base());
    auto h = embed_search(boolean2(), B);
    REQUIRE(h);
    CHECK(validate_homomorphism(*h).ok());

    auto S = sugihara3();
    auto self = embed_search(S, S);
    REQUIRE(self);
    CHECK(self->map == std::vector<int>{0, 1, 2});

    // S3 into the 6-element algebra: compare with trying every injective map
    auto C = build_dq(chain2_base(true));
    bool brute = false;
    for (int a = 0; a < 6 && !brute; ++a)
        for (int b = 0; b < 6 && !brute; ++b)
            for (int c = 0; c < 6 && !brute; ++c) {
                if (a == b || b == c || a == c) continue;
                brute = validate_homomorphism(AlgHom{S, C, {a, b, c}}).ok();
            }
    auto found = embed_search(S, C);
    CHECK(found.has_value() == brute);
    if (found) CHECK(validate_homomorphism(*found).ok());
}

TEST_CASE("no finite representation filter") {
    auto w = no_finite_rep_filter(lukasiewicz3());
    REQUIRE(w);
    CHECK(*w == 1);
    CHECK_FALSE(no_finite_rep_filter(boolean2()));
    CHECK_FALSE(no_finite_rep_filter(sugihara3()));
}

TEST_CASE("representation search") {
    RepOptions o;
    o.max_points = 1;
    auto r = representation_search(boolean2(), o);
    REQUIRE(r.found);
    CHECK(r.certificate["base"]["points"] == 1);
    CHECK(verify_certificate(boolean2(), r.certificate).ok());

    auto l = representation_search(lukasiewicz3(), o);
    CHECK(l.skipped);
    CHECK_FALSE(l.found);
    // with the filter off the search simply runs out on small bases
    RepOptions off;
    off.max_points = 2;
    off.use_filter = false;
    CHECK_FALSE(representation_search(lukasiewicz3(), off).found);

    // the 6-element algebra of the 2-chain base represents itself at 2 points
    auto C = build_dq(chain2_base(true));
    RepOptions two;
    two.max_points = 2;
    auto c = representation_search(C, two);
    REQUIRE(c.found);
    CHECK(c.certificate["base"]["points"] <= 2);
    CHECK(verify_certificate(C, c.certificate).ok());

    // tampering with a certificate is caught
    auto bad = r.certificate;
    bad["images"][1] = Json::array();
    CHECK_FALSE(verify_certificate(boolean2(), bad).ok());
}
