#pragma once
// Brute-force reference implementations used only by the tests. Nothing here
// calls the library's search or validation code; results are compared against it.

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

#include "qra/frames.hpp"

namespace oracle {

using qra::Set;
using qra::bit;
using qra::has;

inline bool leq(const std::vector<Set>& up, int x, int y) { return has(up[x], y); }

inline std::vector<Set> all_upsets(int n, const std::vector<Set>& up) {
    std::vector<Set> out;
    for (Set s = 0; s < (Set{1} << n); ++s) {
        bool ok = true;
        for (int x = 0; x < n && ok; ++x)
            if (has(s, x) && (up[x] & ~s)) ok = false;
        if (ok) out.push_back(s);
    }
    return out;
}

inline std::vector<std::vector<int>> all_perms(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// order automorphisms (dual = false) or anti-automorphisms (dual = true)
inline std::vector<std::vector<int>> order_maps(int n, const std::vector<Set>& up, bool dual) {
    std::vector<std::vector<int>> out;
    for (auto& p : all_perms(n)) {
        bool ok = true;
        for (int x = 0; x < n && ok; ++x)
            for (int y = 0; y < n && ok; ++y)
                ok = leq(up, x, y) == (dual ? leq(up, p[y], p[x]) : leq(up, p[x], p[y]));
        if (ok) out.push_back(p);
    }
    return out;
}

inline Set image(Set s, const std::vector<int>& g) {
    Set r = 0;
    for (int x = 0; x < (int)g.size(); ++x)
        if (has(s, x)) r |= bit(g[x]);
    return r;
}

// least transformed table over all order automorphisms
inline std::vector<std::uint64_t> canonical_key(const qra::Frame& W, const std::vector<std::vector<int>>& auts) {
    const int n = W.n;
    std::vector<std::uint64_t> best;
    for (const auto& g : auts) {
        std::vector<std::uint64_t> k(1 + n * n + 2 * n, 0);
        k[0] = image(W.identity, g);
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) k[1 + g[x] * n + g[y]] = image(W.c(x, y), g);
        for (int x = 0; x < n; ++x) {
            k[1 + n * n + g[x]] = g[W.tilde[x]];
            k[1 + n * n + n + g[x]] = W.neg ? g[(*W.neg)[x]] : 0;
        }
        if (best.empty() || k < best) best = k;
    }
    return best;
}

struct FrameChecks {
    const qra::Frame& W;
    bool R(int x, int y, int z) const { return has(W.comp[x * W.n + y], z); }
    bool ident(int x, int y) const {
        bool l = false, r = false;
        for (int e = 0; e < W.n; ++e)
            if (has(W.identity, e)) {
                l = l || R(e, x, y);
                r = r || R(x, e, y);
            }
        bool o = leq(W.up, x, y);
        return l == o && r == o;
    }
    bool rotate(int x, int y, int z) const { return R(x, y, W.tilde[z]) == R(z, x, W.minus[y]); }
    bool assoc() const {
        const int n = W.n;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z) {
                    Set l = 0, r = 0;
                    for (int u = 0; u < n; ++u) {
                        if (R(x, y, u)) l |= W.comp[u * n + z];
                        if (R(y, z, u)) r |= W.comp[x * n + u];
                    }
                    if (l != r) return false;
                }
        return true;
    }
    bool neg_ok(const std::vector<int>& ng) const {
        const int n = W.n;
        for (int x = 0; x < n; ++x) {
            if (ng[ng[x]] != x) return false;
            for (int y = 0; y < n; ++y) {
                if (leq(W.up, x, y) && !leq(W.up, ng[y], ng[x])) return false;
                for (int z = 0; z < n; ++z)
                    if (R(x, y, W.minus[z]) != R(ng[W.tilde[y]], ng[W.tilde[x]], ng[z])) return false;
            }
        }
        return true;
    }
};

// every frame on the poset, up to isomorphism, as canonical keys
inline std::set<std::vector<std::uint64_t>> brute_frames(int n, const std::vector<Set>& up, bool dqra) {
    std::set<std::vector<std::uint64_t>> out;
    auto ups = all_upsets(n, up);
    auto auts = order_maps(n, up, false);
    auto antis = order_maps(n, up, true);
    qra::Frame W;
    W.n = n;
    W.up = up;
    W.comp.assign(n * n, 0);
    for (Set I : ups) {
        W.identity = I;
        for (const auto& t : antis) {
            W.tilde = t;
            W.minus.assign(n, 0);
            for (int x = 0; x < n; ++x) W.minus[t[x]] = x;
            FrameChecks C{W};
            // a condition is looked at only once every cell it mentions is filled
            auto filled_ok = [&](int k) {
                auto in = [&](int x, int y) { return x * n + y <= k; };
                for (int x = 0; x < n; ++x)
                    for (int y = 0; y < n; ++y) {
                        bool all = true;
                        for (int e = 0; e < n; ++e)
                            if (has(I, e)) all = all && in(e, x) && in(x, e);
                        if (all && !C.ident(x, y)) return false;
                        for (int z = 0; z < n; ++z)
                            if (in(x, y) && in(z, x) && !C.rotate(x, y, z)) return false;
                    }
                return true;
            };
            std::function<void(int)> fill = [&](int k) {
                if (k == n * n) {
                    if (!C.assoc()) return;
                    if (!dqra) {
                        W.neg.reset();
                        out.insert(canonical_key(W, auts));
                        return;
                    }
                    for (const auto& g : all_perms(n))
                        if (C.neg_ok(g)) {
                            W.neg = g;
                            out.insert(canonical_key(W, auts));
                        }
                    W.neg.reset();
                    return;
                }
                for (Set v : ups) {
                    W.comp[k] = v;
                    if (filled_ok(k)) fill(k + 1);
                }
                W.comp[k] = 0;
            };
            fill(0);
        }
    }
    return out;
}

// homomorphisms by trying every map
inline std::vector<std::vector<int>> brute_homs(const qra::FinAlgebra& A, const qra::FinAlgebra& B) {
    std::vector<std::vector<int>> out;
    const int n = A.size(), m = B.size();
    std::vector<int> f(n, 0);
    for (;;) {
        bool ok = f[A.one()] == B.one();
        for (int a = 0; a < n && ok; ++a) {
            ok = f[A.tilde(a)] == B.tilde(f[a]) && f[A.minus(a)] == B.minus(f[a]);
            if (ok && A.has_neg()) ok = f[A.neg(a)] == B.neg(f[a]);
            for (int b = 0; b < n && ok; ++b)
                ok = f[A.join(a, b)] == B.join(f[a], f[b]) && f[A.meet(a, b)] == B.meet(f[a], f[b]) &&
                     f[A.mul(a, b)] == B.mul(f[a], f[b]);
        }
        if (ok) out.push_back(f);
        int i = n - 1;
        while (i >= 0 && ++f[i] == m) f[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

// generalised prime filters straight from the definition
inline std::vector<Set> brute_filters(const qra::FinAlgebra& A) {
    const int n = A.size();
    std::vector<Set> out;
    for (Set s = 0; s < (Set{1} << n); ++s) {
        if (s == 0 || s == (Set{1} << n) - 1) {
            out.push_back(s);
            continue;
        }
        bool ok = true;
        for (int a = 0; a < n && ok; ++a)
            for (int b = 0; b < n && ok; ++b) {
                if (has(s, a) && A.leq(a, b) && !has(s, b)) ok = false;
                if (has(s, a) && has(s, b) && !has(s, A.meet(a, b))) ok = false;
                if (has(s, A.join(a, b)) && !has(s, a) && !has(s, b)) ok = false;
            }
        if (ok) out.push_back(s);
    }
    return out;
}

}  // namespace oracle
