#include "qra/frames.hpp"

#include <algorithm>
#include <unordered_map>

namespace qra {

Set Poset::down(int x) const {
    Set d = 0;
    for (int y = 0; y < n; ++y)
        if (has(up[y], x)) d |= bit(y);
    return d;
}

std::vector<Set> Poset::downs() const {
    std::vector<Set> d(n, 0);
    for (int x = 0; x < n; ++x) for_bits(up[x], [&](int y) { d[y] |= bit(x); });
    return d;
}

bool Poset::is_upset(Set s) const {
    bool ok = true;
    for_bits(s, [&](int x) {
        if ((up[x] & ~s) != 0) ok = false;
    });
    return ok;
}

Set Poset::up_closure(Set s) const {
    Set r = 0;
    for_bits(s, [&](int x) { r |= up[x]; });
    return r;
}

Set Poset::down_closure(Set s) const {
    Set r = 0;
    for (int y = 0; y < n; ++y)
        if (up[y] & s) r |= bit(y);
    return r;
}

Set Poset::minimal(Set s) const {
    Set r = 0;
    for_bits(s, [&](int x) {
        if ((down(x) & s) == bit(x)) r |= bit(x);
    });
    return r;
}

std::vector<Set> Poset::upsets() const {
    // depth-first: each upset is built by deciding points in a linear extension
    // from the top down (a point may join only if everything above it has)
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::vector<int> rank(n);
    for (int x = 0; x < n; ++x) rank[x] = popcount(up[x]);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rank[a] < rank[b]; });
    std::vector<Set> res;
    auto rec = [&](auto&& self, int i, Set cur) -> void {
        if (i == n) {
            res.push_back(cur);
            return;
        }
        int x = order[i];
        self(self, i + 1, cur);
        if ((up[x] & ~bit(x) & ~cur) == 0) self(self, i + 1, cur | bit(x));
    };
    rec(rec, 0, 0);
    std::sort(res.begin(), res.end(), [](Set a, Set b) {
        int pa = popcount(a), pb = popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    return res;
}

bool Poset::valid() const {
    if ((int)up.size() != n) return false;
    for (int x = 0; x < n; ++x) {
        if (!has(up[x], x)) return false;
        if (up[x] & ~full_set(n)) return false;
        for (int y = 0; y < n; ++y)
            if (x != y && has(up[x], y) && has(up[y], x)) return false;
        if ((up_closure(up[x])) != up[x]) return false;
    }
    return true;
}

Poset Poset::from_matrix(const std::vector<std::vector<int>>& m) {
    Poset p;
    p.n = (int)m.size();
    if (p.n > 64) throw StructuralError("posets are limited to 64 points");
    p.up.assign(p.n, 0);
    for (int x = 0; x < p.n; ++x) {
        if ((int)m[x].size() != p.n) throw StructuralError("order matrix is ragged");
        for (int y = 0; y < p.n; ++y) {
            if (m[x][y] != 0 && m[x][y] != 1) throw StructuralError("order entries must be 0 or 1");
            if (m[x][y]) p.up[x] |= bit(y);
        }
    }
    return p;
}

std::vector<std::vector<int>> Poset::matrix() const {
    std::vector<std::vector<int>> m(n, std::vector<int>(n));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) m[x][y] = leq(x, y);
    return m;
}

Set Frame::comp_sets(Set U, Set V) const {
    Set r = 0;
    for_bits(U, [&](int x) { for_bits(V, [&](int y) { r |= c(x, y); }); });
    return r;
}

namespace {

bool perm_ok(const std::vector<int>& p, int n) {
    if ((int)p.size() != n) return false;
    std::vector<char> seen(n, 0);
    for (int v : p) {
        if (v < 0 || v >= n || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

}  // namespace

void Frame::check_structure() const {
    if (n < 0 || n > 64) throw StructuralError("frame size must be within 0..64");
    Set all = full_set(n);
    if ((int)up.size() != n) throw StructuralError("frame order has wrong size");
    for (Set s : up)
        if (s & ~all) throw StructuralError("frame order refers to points outside the carrier");
    if (identity & ~all) throw StructuralError("identity set refers to points outside the carrier");
    if ((int)comp.size() != n * n) throw StructuralError("comp table has wrong size");
    for (Set s : comp)
        if (s & ~all) throw StructuralError("comp entry is not a subset of the carrier");
    if (!perm_ok(tilde, n)) throw StructuralError("tilde is not a permutation");
    if (!perm_ok(minus, n)) throw StructuralError("minus is not a permutation");
    if (neg && !perm_ok(*neg, n)) throw StructuralError("neg is not a permutation");
}

Frame Frame::without_neg() const {
    Frame f = *this;
    f.neg.reset();
    return f;
}

ValidationReport validate_dinfl_frame(const Frame& W) {
    W.check_structure();
    ValidationReport rep;
    rep.notes.push_back("finite frame: no topology conditions needed");
    const int n = W.n;
    for (int x = 0; x < n; ++x) {
        if (!W.leq(x, x)) rep.fail("order reflexive", {x});
        for (int y = 0; y < n; ++y) {
            if (x != y && W.leq(x, y) && W.leq(y, x)) rep.fail("order antisymmetric", {x, y});
            if (!W.leq(x, y)) continue;
            for (int z = 0; z < n; ++z)
                if (W.leq(y, z) && !W.leq(x, z)) rep.fail("order transitive", {x, y, z});
        }
    }
    // identity condition
    for (int x = 0; x < n; ++x) {
        Set left = W.comp_sets(W.identity, bit(x));
        Set right = W.comp_sets(bit(x), W.identity);
        for (int y = 0; y < n; ++y) {
            if (has(left, y) != W.leq(x, y)) rep.fail("identity left: x<=y iff y in I o x", {x, y});
            if (has(right, y) != W.leq(x, y)) rep.fail("identity right: x<=y iff y in x o I", {x, y});
        }
    }
    for (int x = 0; x < n; ++x)
        if (has(W.identity, x))
            for (int y = 0; y < n; ++y)
                if (W.leq(x, y) && !has(W.identity, y)) rep.fail("identity set is an upset", {x, y});
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            for (int x = 0; x < n; ++x)
                if (W.R(u, v, x))
                    for (int y = 0; y < n; ++y)
                        if (W.leq(x, y) && !W.R(u, v, y)) rep.fail("composition yields upsets", {u, v, x, y});
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                Set l = W.comp_sets(W.c(x, y), bit(z));
                Set r = W.comp_sets(bit(x), W.c(y, z));
                if (l != r) rep.fail("composition associative", {x, y, z});
            }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                if (W.R(x, y, W.tilde[z]) != W.R(z, x, W.minus[y])) rep.fail("rotation: z~ in x o y iff y- in z o x", {x, y, z});
    for (int x = 0; x < n; ++x) {
        if (!W.leq(W.minus[W.tilde[x]], x)) rep.fail("x~- <= x", {x});
        if (!W.leq(W.tilde[W.minus[x]], x)) rep.fail("x-~ <= x", {x});
    }
    // derived consequences, checked as redundancy
    for (int x = 0; x < n; ++x) {
        if (W.minus[W.tilde[x]] != x || W.tilde[W.minus[x]] != x) rep.fail("tilde and minus mutually inverse", {x});
        for (int y = 0; y < n; ++y) {
            if (!W.leq(x, y)) continue;
            if (!W.leq(W.minus[y], W.minus[x]) || !W.leq(W.tilde[y], W.tilde[x]))
                rep.fail("tilde and minus order-reversing", {x, y});
            for (int w = 0; w < n; ++w) {
                if ((W.c(y, w) & ~W.c(x, w)) != 0) rep.fail("composition antitone in first argument", {x, y, w});
                if ((W.c(w, y) & ~W.c(w, x)) != 0) rep.fail("composition antitone in second argument", {x, y, w});
            }
        }
    }
    return rep;
}

ValidationReport validate_dqra_frame(const Frame& W) {
    W.check_structure();
    if (!W.neg) throw SignatureError("validate_dqra_frame needs a frame with neg");
    ValidationReport rep = validate_dinfl_frame(W);
    const int n = W.n;
    const auto& ng = *W.neg;
    for (int x = 0; x < n; ++x) {
        if (ng[ng[x]] != x) rep.fail("neg involution", {x});
        for (int y = 0; y < n; ++y)
            if (W.leq(x, y) && !W.leq(ng[y], ng[x])) rep.fail("neg order-reversing", {x, y});
    }
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z) {
                int a = ng[W.tilde[y]], b = ng[W.tilde[x]];
                if (W.R(x, y, W.minus[z]) != W.R(a, b, ng[z])) rep.fail("neg rotation: z- in x o y iff z neg in y~neg o x~neg", {x, y, z});
            }
    for (int x = 0; x < n; ++x) {
        if (ng[W.tilde[x]] != W.minus[ng[x]]) rep.fail("x~neg = xneg-", {x});
        if (ng[W.minus[x]] != W.tilde[ng[x]]) rep.fail("x-neg = xneg~", {x});
    }
    return rep;
}

FinAlgebra complex_algebra(const Frame& W, std::vector<Set>* carrier) {
    W.check_structure();
    const Poset P = W.poset();
    std::vector<Set> ups = P.upsets();
    const int m = (int)ups.size();
    std::unordered_map<Set, int> index;
    for (int i = 0; i < m; ++i) index[ups[i]] = i;
    auto idx = [&](Set s) {
        auto it = index.find(s);
        if (it == index.end()) throw InternalError("complex algebra operation left the upsets");
        return it->second;
    };
    std::vector<std::uint8_t> leq((std::size_t)m * m);
    std::vector<int> prod((std::size_t)m * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            leq[i * m + j] = (ups[i] & ~ups[j]) == 0;
            prod[i * m + j] = idx(W.comp_sets(ups[i], ups[j]));
        }
    auto unary = [&](const std::vector<int>& pt) {
        std::vector<int> r(m);
        for (int i = 0; i < m; ++i) {
            Set s = 0;
            for (int w = 0; w < W.n; ++w)
                if (!has(ups[i], pt[w])) s |= bit(w);
            r[i] = idx(s);
        }
        return r;
    };
    std::optional<std::vector<int>> ng;
    if (W.neg) ng = unary(*W.neg);
    auto it = index.find(W.identity);
    if (it == index.end()) throw PreconditionError("complex_algebra: identity set is not an upset");
    FinAlgebra A(m, std::move(leq), std::move(prod), it->second, unary(W.minus), unary(W.tilde),
                 std::move(ng), W.name.empty() ? std::string{} : W.name + "+");
    if (carrier) *carrier = ups;
    return A;
}

Frame dual_frame(const FinAlgebra& A, std::vector<int>* points) {
    std::vector<int> J = join_irreducibles(A);
    const int k = (int)J.size();
    if (k > 64) throw PreconditionError("dual_frame: more than 64 join-irreducibles");
    std::vector<int> pos(A.size(), -1);
    for (int i = 0; i < k; ++i) pos[J[i]] = i;
    Frame W;
    W.n = k;
    W.up.assign(k, 0);
    W.comp.assign((std::size_t)k * k, 0);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j)
            if (A.leq(J[j], J[i])) W.up[i] |= bit(j);
        if (A.leq(J[i], A.one())) W.identity |= bit(i);
    }
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            int p = A.mul(J[i], J[j]);
            Set s = 0;
            for (int m = 0; m < k; ++m)
                if (A.leq(J[m], p)) s |= bit(m);
            W.comp[i * k + j] = s;
        }
    auto unary = [&](auto op) {
        std::vector<int> r(k);
        for (int i = 0; i < k; ++i) {
            int v = op(kappa(A, J[i]));
            if (pos[v] < 0) throw InternalError("dual_frame: unary image is not join-irreducible");
            r[i] = pos[v];
        }
        return r;
    };
    W.tilde = unary([&](int a) { return A.tilde(a); });
    W.minus = unary([&](int a) { return A.minus(a); });
    if (A.has_neg()) W.neg = unary([&](int a) { return A.neg(a); });
    W.name = A.name().empty() ? std::string{} : A.name() + "_+";
    if (points) *points = J;
    return W;
}

bool is_algebra_iso(const FinAlgebra& A, const FinAlgebra& B, const std::vector<int>& f) {
    const int n = A.size();
    if (B.size() != n || (int)f.size() != n || A.has_neg() != B.has_neg()) return false;
    std::vector<char> seen(n, 0);
    for (int v : f) {
        if (v < 0 || v >= n || seen[v]) return false;
        seen[v] = 1;
    }
    if (f[A.one()] != B.one()) return false;
    for (int a = 0; a < n; ++a) {
        if (f[A.tilde(a)] != B.tilde(f[a]) || f[A.minus(a)] != B.minus(f[a])) return false;
        if (A.has_neg() && f[A.neg(a)] != B.neg(f[a])) return false;
        for (int b = 0; b < n; ++b) {
            if (A.leq(a, b) != B.leq(f[a], f[b])) return false;
            if (f[A.mul(a, b)] != B.mul(f[a], f[b])) return false;
        }
    }
    return true;
}

bool is_frame_iso(const Frame& A, const Frame& B, const std::vector<int>& f) {
    const int n = A.n;
    if (B.n != n || (int)f.size() != n || A.neg.has_value() != B.neg.has_value()) return false;
    std::vector<char> seen(n, 0);
    for (int v : f) {
        if (v < 0 || v >= n || seen[v]) return false;
        seen[v] = 1;
    }
    auto img = [&](Set s) {
        Set r = 0;
        for_bits(s, [&](int x) { r |= bit(f[x]); });
        return r;
    };
    if (img(A.identity) != B.identity) return false;
    for (int x = 0; x < n; ++x) {
        if (img(A.up[x]) != B.up[f[x]]) return false;
        if (f[A.tilde[x]] != B.tilde[f[x]] || f[A.minus[x]] != B.minus[f[x]]) return false;
        if (A.neg && f[(*A.neg)[x]] != (*B.neg)[f[x]]) return false;
        for (int y = 0; y < n; ++y)
            if (img(A.c(x, y)) != B.c(f[x], f[y])) return false;
    }
    return true;
}

std::vector<int> roundtrip_algebra(const FinAlgebra& A) {
    std::vector<int> J;
    Frame W = dual_frame(A, &J);
    std::vector<Set> carrier;
    FinAlgebra B = complex_algebra(W, &carrier);
    std::unordered_map<Set, int> index;
    for (int i = 0; i < (int)carrier.size(); ++i) index[carrier[i]] = i;
    std::vector<int> psi(A.size());
    for (int a = 0; a < A.size(); ++a) {
        Set s = 0;
        for (int i = 0; i < (int)J.size(); ++i)
            if (A.leq(J[i], a)) s |= bit(i);
        auto it = index.find(s);
        if (it == index.end()) throw InternalError("roundtrip_algebra: psi(a) is not an upset");
        psi[a] = it->second;
    }
    if (!is_algebra_iso(A, B, psi)) throw InternalError("roundtrip_algebra: psi is not an isomorphism");
    return psi;
}

std::vector<int> roundtrip_frame(const Frame& W) {
    std::vector<Set> carrier;
    FinAlgebra B = complex_algebra(W, &carrier);
    std::vector<int> pts;
    Frame W2 = dual_frame(B, &pts);
    std::vector<int> f(W.n, -1);
    for (int x = 0; x < W.n; ++x) {
        auto it = std::find(carrier.begin(), carrier.end(), W.up[x]);
        int e = (int)(it - carrier.begin());
        auto jt = std::find(pts.begin(), pts.end(), e);
        if (jt == pts.end()) throw InternalError("roundtrip_frame: principal upset is not join-irreducible");
        f[x] = (int)(jt - pts.begin());
    }
    if (!is_frame_iso(W, W2, f)) throw InternalError("roundtrip_frame: x -> up(x) is not an isomorphism");
    return f;
}

Frame permute(const Frame& W, const std::vector<int>& p) {
    const int n = W.n;
    Frame r;
    r.n = n;
    r.name = W.name;
    auto img = [&](Set s) {
        Set o = 0;
        for_bits(s, [&](int x) { o |= bit(p[x]); });
        return o;
    };
    r.up.assign(n, 0);
    r.comp.assign((std::size_t)n * n, 0);
    r.tilde.assign(n, 0);
    r.minus.assign(n, 0);
    r.identity = img(W.identity);
    if (W.neg) r.neg = std::vector<int>(n);
    for (int x = 0; x < n; ++x) {
        r.up[p[x]] = img(W.up[x]);
        r.tilde[p[x]] = p[W.tilde[x]];
        r.minus[p[x]] = p[W.minus[x]];
        if (W.neg) (*r.neg)[p[x]] = p[(*W.neg)[x]];
        for (int y = 0; y < n; ++y) r.comp[p[x] * n + p[y]] = img(W.c(x, y));
    }
    return r;
}

namespace {

struct FrameIsoSearch {
    const Frame& A;
    const Frame& B;
    int n;
    std::vector<int> f, finv;
    std::vector<std::vector<int>> cand;

    static std::vector<long> inv(const Frame& W, int x) {
        long dn = 0, self = popcount(W.c(x, x)), row = 0, col = 0;
        for (int y = 0; y < W.n; ++y) {
            dn += W.leq(y, x);
            row += popcount(W.c(x, y));
            col += popcount(W.c(y, x));
        }
        return {popcount(W.up[x]), dn, has(W.identity, x), self, row, col, W.tilde[x] == x,
                W.neg ? (*W.neg)[x] == x : 0};
    }

    bool consistent(int x) {
        int fx = f[x];
        auto un = [&](int a, int b) { return f[a] >= 0 ? f[a] == b : finv[b] < 0; };
        if (!un(A.tilde[x], B.tilde[fx]) || !un(A.minus[x], B.minus[fx])) return false;
        if (A.neg && !un((*A.neg)[x], (*B.neg)[fx])) return false;
        for (int y = 0; y <= x; ++y) {
            int fy = f[y];
            if (A.leq(x, y) != B.leq(fx, fy) || A.leq(y, x) != B.leq(fy, fx)) return false;
            if (A.tilde[y] == x && B.tilde[fy] != fx) return false;
            if (A.minus[y] == x && B.minus[fy] != fx) return false;
            if (A.neg && (*A.neg)[y] == x && (*B.neg)[fy] != fx) return false;
            for (int z = 0; z <= x; ++z) {
                int fz = f[z];
                if (A.R(x, y, z) != B.R(fx, fy, fz) || A.R(y, x, z) != B.R(fy, fx, fz)) return false;
                if (A.R(y, z, x) != B.R(fy, fz, fx) || A.R(z, y, x) != B.R(fz, fy, fx)) return false;
                if (A.R(x, z, y) != B.R(fx, fz, fy) || A.R(z, x, y) != B.R(fz, fx, fy)) return false;
            }
        }
        return true;
    }

    bool rec(int x) {
        if (x == n) return true;
        for (int c : cand[x]) {
            if (finv[c] >= 0) continue;
            f[x] = c;
            finv[c] = x;
            if (consistent(x) && rec(x + 1)) return true;
            f[x] = -1;
            finv[c] = -1;
        }
        return false;
    }
};

}  // namespace

std::optional<std::vector<int>> frame_iso(const Frame& A, const Frame& B) {
    if (A.neg.has_value() != B.neg.has_value()) throw SignatureError("frame_iso: signatures differ (neg)");
    if (A.n != B.n) return std::nullopt;
    FrameIsoSearch s{A, B, A.n, {}, {}, {}};
    s.f.assign(s.n, -1);
    s.finv.assign(s.n, -1);
    s.cand.assign(s.n, {});
    for (int x = 0; x < s.n; ++x) {
        auto ia = FrameIsoSearch::inv(A, x);
        for (int y = 0; y < s.n; ++y)
            if (FrameIsoSearch::inv(B, y) == ia) s.cand[x].push_back(y);
    }
    if (!s.rec(0)) return std::nullopt;
    if (!is_frame_iso(A, B, s.f)) throw InternalError("frame_iso: search returned a non-isomorphism");
    return s.f;
}

}  // namespace qra
