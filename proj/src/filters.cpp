#include "qra/filters.hpp"

#include <algorithm>

namespace qra {

namespace {

Set carrier_set(const FinAlgebra& A) {
    if (A.size() > 64) throw PreconditionError("filters: at most 64 elements supported");
    return full_set(A.size());
}

Set up_of(const FinAlgebra& A, int a) {
    Set s = 0;
    for (int b = 0; b < A.size(); ++b)
        if (A.leq(a, b)) s |= bit(b);
    return s;
}

}  // namespace

bool is_gen_prime_filter(const FinAlgebra& A, Set F) {
    Set all = carrier_set(A);
    if (F == 0 || F == all) return true;
    const int n = A.size();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (has(F, a) && A.leq(a, b) && !has(F, b)) return false;
            if (has(F, a) && has(F, b) && !has(F, A.meet(a, b))) return false;
            if (has(F, A.join(a, b)) && !has(F, a) && !has(F, b)) return false;
        }
    return true;
}

std::vector<Set> gen_prime_filters(const FinAlgebra& A) {
    Set all = carrier_set(A);
    std::vector<Set> v{0};
    if (all != 0) v.push_back(all);
    for (int j : join_irreducibles(A)) {
        Set F = up_of(A, j);
        if (!is_gen_prime_filter(A, F)) throw InternalError("principal filter of a join irreducible is not prime");
        if (F != all) v.push_back(F);
    }
    std::sort(v.begin(), v.end(), [](Set a, Set b) {
        return popcount(a) != popcount(b) ? popcount(a) < popcount(b) : a < b;
    });
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

FilterUnaries filter_unaries(const FinAlgebra& A, Set F) {
    FilterUnaries u{0, 0, std::nullopt};
    Set ng = 0;
    for (int a = 0; a < A.size(); ++a) {
        if (has(F, a)) continue;
        u.tilde |= bit(A.tilde(a));
        u.minus |= bit(A.minus(a));
        if (A.has_neg()) ng |= bit(A.neg(a));
    }
    if (A.has_neg()) u.neg = ng;
    for (Set s : {u.tilde, u.minus, u.neg.value_or(0)})
        if (!is_gen_prime_filter(A, s)) throw InternalError("negation of a generalised prime filter is not one");
    return u;
}

Set filter_product(const FinAlgebra& A, const std::vector<Set>& filters, Set F, Set G) {
    Set FG = 0;
    for_bits(F, [&](int a) { for_bits(G, [&](int b) { FG |= bit(A.mul(a, b)); }); });
    Set out = 0;
    for (std::size_t i = 0; i < filters.size(); ++i)
        if ((FG & ~filters[i]) == 0) out |= bit((int)i);
    return out;
}

PointedFrame filter_frame(const FinAlgebra& A) {
    auto fs = gen_prime_filters(A);
    const int n = (int)fs.size();
    if (n > 64) throw PreconditionError("filter_frame: too many filters");
    auto index = [&](Set F) {
        auto it = std::find(fs.begin(), fs.end(), F);
        if (it == fs.end()) throw InternalError("filter_frame: operation left the filter set");
        return (int)(it - fs.begin());
    };
    PointedFrame P;
    Frame& W = P.frame;
    W.n = n;
    W.name = A.name() + "_filters";
    W.up.assign(n, 0);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if ((fs[x] & ~fs[y]) == 0) W.up[x] |= bit(y);
    for (int x = 0; x < n; ++x)
        if (has(fs[x], A.one())) W.identity |= bit(x);
    W.comp.assign(n * n, 0);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) W.comp[x * n + y] = filter_product(A, fs, fs[x], fs[y]);
    W.tilde.resize(n);
    W.minus.resize(n);
    if (A.has_neg()) W.neg = std::vector<int>(n);
    for (int x = 0; x < n; ++x) {
        auto u = filter_unaries(A, fs[x]);
        W.tilde[x] = index(u.tilde);
        W.minus[x] = index(u.minus);
        if (u.neg) (*W.neg)[x] = index(*u.neg);
    }
    P.bottom = index(0);
    P.top = index(full_set(A.size()));
    return P;
}

ValidationReport validate_pointed_frame(const PointedFrame& P) {
    const Frame& W = P.frame;
    ValidationReport r = W.neg ? validate_dqra_frame(W) : validate_dinfl_frame(W);
    if (P.bottom < 0 || P.bottom >= W.n || P.top < 0 || P.top >= W.n) {
        r.fail("bounds present", {});
        return r;
    }
    if (P.bottom == P.top) r.fail("bottom differs from top", {P.bottom});
    for (int x = 0; x < W.n; ++x) {
        if (!W.leq(P.bottom, x)) r.fail("bottom is least", {x});
        if (!W.leq(x, P.top)) r.fail("top is greatest", {x});
    }
    if (W.identity == 0) r.fail("identity set non-empty", {});
    if (W.identity == full_set(W.n)) r.fail("identity set proper", {});
    r.notes.push_back("finite carrier: discrete topology, every upset clopen");
    return r;
}

FinAlgebra space_algebra(const PointedFrame& P, std::vector<Set>* carrier) {
    const Frame& W = P.frame;
    auto ups = W.poset().upsets();
    std::vector<Set> K;
    for (Set U : ups)
        if (U != 0 && U != full_set(W.n)) K.push_back(U);
    const int n = (int)K.size();
    if (n == 0) throw PreconditionError("space_algebra: no proper non-empty upsets");
    auto index = [&](Set U) {
        auto it = std::find(K.begin(), K.end(), U);
        if (it == K.end()) throw InternalError("space_algebra: operation left the proper non-empty upsets");
        return (int)(it - K.begin());
    };
    auto unary = [&](Set U, const std::vector<int>& map) {
        Set V = 0;
        for (int w = 0; w < W.n; ++w)
            if (!has(U, map[w])) V |= bit(w);
        return V;
    };
    std::vector<std::uint8_t> leq(n * n);
    std::vector<int> prod(n * n), tilde(n), minus(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            leq[a * n + b] = (K[a] & ~K[b]) == 0;
            prod[a * n + b] = index(W.comp_sets(K[a], K[b]));
        }
    std::optional<std::vector<int>> neg;
    if (W.neg) neg = std::vector<int>(n);
    for (int a = 0; a < n; ++a) {
        tilde[a] = index(unary(K[a], W.minus));
        minus[a] = index(unary(K[a], W.tilde));
        if (W.neg) (*neg)[a] = index(unary(K[a], *W.neg));
    }
    if (carrier) *carrier = K;
    return FinAlgebra(n, leq, prod, index(W.identity), tilde, minus, neg, W.name + "_space");
}

std::vector<int> priestley_roundtrip(const FinAlgebra& A) {
    auto fs = gen_prime_filters(A);
    PointedFrame P = filter_frame(A);
    std::vector<Set> K;
    FinAlgebra S = space_algebra(P, &K);
    std::vector<int> map(A.size());
    for (int a = 0; a < A.size(); ++a) {
        Set X = 0;
        for (std::size_t i = 0; i < fs.size(); ++i)
            if (has(fs[i], a)) X |= bit((int)i);
        auto it = std::find(K.begin(), K.end(), X);
        if (it == K.end()) throw InternalError("priestley_roundtrip: X_a is not a proper non-empty upset");
        map[a] = (int)(it - K.begin());
    }
    if (S.size() != A.size() || !is_algebra_iso(A, S, map))
        throw InternalError("priestley_roundtrip: a -> X_a is not an isomorphism");
    return map;
}

FrameMap filter_preimage(const AlgHom& h) {
    auto fa = gen_prime_filters(h.source), fb = gen_prime_filters(h.target);
    FrameMap f{filter_frame(h.target).frame, filter_frame(h.source).frame, {}};
    for (Set F : fb) {
        Set pre = 0;
        for (int a = 0; a < h.source.size(); ++a)
            if (has(F, h.map[a])) pre |= bit(a);
        auto it = std::find(fa.begin(), fa.end(), pre);
        if (it == fa.end()) throw InternalError("filter preimage is not a generalised prime filter");
        f.map.push_back((int)(it - fa.begin()));
    }
    return f;
}

ValidationReport check_filter_preimage(const AlgHom& h) {
    ValidationReport r;
    FrameMap f;
    try {
        f = filter_preimage(h);
    } catch (InternalError&) {
        r.fail("preimage of a generalised prime filter is one", {});
        return r;
    }
    r.merge(validate_frame_morphism(f));
    auto pa = filter_frame(h.source), pb = filter_frame(h.target);
    if (f.map[pb.bottom] != pa.bottom) r.fail("bottom point preserved", {pb.bottom});
    if (f.map[pb.top] != pa.top) r.fail("top point preserved", {pb.top});
    return r;
}

}  // namespace qra
