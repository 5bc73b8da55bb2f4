#include "qra/morphisms.hpp"

#include <algorithm>

namespace qra {

namespace {

bool same_signature(bool a, bool b) { return a == b; }

}  // namespace

bool is_injective(const std::vector<int>& f) {
    std::vector<int> s = f;
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) == s.end();
}

bool is_surjective(const std::vector<int>& f, int target_size) {
    std::vector<char> hit(target_size, 0);
    for (int y : f) hit[y] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c; });
}

bool is_order_embedding(const FrameMap& f) {
    const int n = f.source.n;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (f.source.leq(x, y) != f.target.leq(f.map[x], f.map[y])) return false;
    return true;
}

ValidationReport validate_frame_morphism(const FrameMap& f) {
    const Frame &A = f.source, &B = f.target;
    if (!same_signature(A.neg.has_value(), B.neg.has_value()))
        throw SignatureError("frame morphism: source and target signatures differ");
    if ((int)f.map.size() != A.n) throw StructuralError("frame morphism: map has wrong length");
    for (int y : f.map)
        if (y < 0 || y >= B.n) throw StructuralError("frame morphism: image out of range");
    ValidationReport r;
    const auto& m = f.map;
    for (int x = 0; x < A.n; ++x)
        for (int y = 0; y < A.n; ++y)
            if (A.leq(x, y) && !B.leq(m[x], m[y])) r.fail("monotone", {x, y});
    for (int x = 0; x < A.n; ++x)
        for (int y = 0; y < A.n; ++y)
            for_bits(A.c(x, y), [&](int z) {
                if (!B.R(m[x], m[y], m[z])) r.fail("forth: z in x o y gives f(z) in f(x) o f(y)", {x, y, z});
            });
    // back condition: f(z) in u o v needs x, y with u <= f(x), v <= f(y), z in x o y
    for (int z = 0; z < A.n; ++z)
        for (int u = 0; u < B.n; ++u)
            for (int v = 0; v < B.n; ++v) {
                if (!B.R(u, v, m[z])) continue;
                bool found = false;
                for (int x = 0; x < A.n && !found; ++x) {
                    if (!B.leq(u, m[x])) continue;
                    for (int y = 0; y < A.n && !found; ++y)
                        if (B.leq(v, m[y]) && A.R(x, y, z)) found = true;
                }
                if (!found) r.fail("back: f(z) in u o v has a witness pair", {z, u, v});
            }
    for (int x = 0; x < A.n; ++x) {
        if (m[A.tilde[x]] != B.tilde[m[x]]) r.fail("preserves tilde", {x});
        if (m[A.minus[x]] != B.minus[m[x]]) r.fail("preserves minus", {x});
        if (has(A.identity, x) != has(B.identity, m[x])) r.fail("identity set is the preimage", {x});
        if (A.neg && m[(*A.neg)[x]] != (*B.neg)[m[x]]) r.fail("preserves neg", {x});
    }
    return r;
}

AlgHom frame_morphism_dual(const FrameMap& f) {
    std::vector<Set> c1, c2;
    FinAlgebra A1 = complex_algebra(f.source, &c1);
    FinAlgebra A2 = complex_algebra(f.target, &c2);
    std::vector<int> map(c2.size());
    for (std::size_t i = 0; i < c2.size(); ++i) {
        Set pre = 0;
        for (int x = 0; x < f.source.n; ++x)
            if (has(c2[i], f.map[x])) pre |= bit(x);
        auto it = std::find(c1.begin(), c1.end(), pre);
        if (it == c1.end()) throw PreconditionError("preimage of an upset is not an upset; the map is not monotone");
        map[i] = (int)(it - c1.begin());
    }
    return {A2, A1, map};
}

ValidationReport validate_homomorphism(const AlgHom& h) {
    const FinAlgebra &A = h.source, &B = h.target;
    if (A.has_neg() != B.has_neg()) throw SignatureError("homomorphism: source and target signatures differ");
    if ((int)h.map.size() != A.size()) throw StructuralError("homomorphism: map has wrong length");
    for (int y : h.map)
        if (y < 0 || y >= B.size()) throw StructuralError("homomorphism: image out of range");
    ValidationReport r;
    const auto& m = h.map;
    const int n = A.size();
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (m[A.join(a, b)] != B.join(m[a], m[b])) r.fail("preserves join", {a, b});
            if (m[A.meet(a, b)] != B.meet(m[a], m[b])) r.fail("preserves meet", {a, b});
            if (m[A.mul(a, b)] != B.mul(m[a], m[b])) r.fail("preserves product", {a, b});
        }
        if (m[A.tilde(a)] != B.tilde(m[a])) r.fail("preserves tilde", {a});
        if (m[A.minus(a)] != B.minus(m[a])) r.fail("preserves minus", {a});
        if (A.has_neg() && m[A.neg(a)] != B.neg(m[a])) r.fail("preserves neg", {a});
    }
    if (m[A.one()] != B.one()) r.fail("preserves one", {A.one()});
    r.notes.push_back("finite algebras: preserving binary joins and meets is complete preservation of nonempty joins and meets");
    return r;
}

bool preserves_bounds(const AlgHom& h) {
    return h.map[h.source.bottom()] == h.target.bottom() && h.map[h.source.top()] == h.target.top();
}

int hom_dual_value(const AlgHom& h, int b) {
    const FinAlgebra &A = h.source, &B = h.target;
    int r = A.top();
    for (int a = 0; a < A.size(); ++a)
        if (B.leq(b, h.map[a])) r = A.meet(r, a);
    return r;
}

FrameMap hom_dual(const AlgHom& h) {
    std::vector<int> pa, pb;
    Frame WA = dual_frame(h.source, &pa);
    Frame WB = dual_frame(h.target, &pb);
    if (!preserves_bounds(h))
        throw PreconditionError("hom_dual: the homomorphism does not preserve the lattice bounds, so it is not complete");
    std::vector<int> map(pb.size());
    for (std::size_t i = 0; i < pb.size(); ++i) {
        int v = hom_dual_value(h, pb[i]);
        auto it = std::find(pa.begin(), pa.end(), v);
        if (it == pa.end())
            throw InternalError("hom_dual: meet of the preimage of a join irreducible is not join irreducible");
        map[i] = (int)(it - pa.begin());
    }
    return {WB, WA, map};
}

ValidationReport check_hom_dual_lemmas(const AlgHom& h) {
    const FinAlgebra &A = h.source, &B = h.target;
    ValidationReport r;
    auto jb = join_irreducibles(B);
    for (int b = 0; b < B.size(); ++b) {
        int d = hom_dual_value(h, b);
        if (!B.leq(b, h.map[d])) r.fail("b <= h(meet of preimage of up b)", {b});
        for (int a = 0; a < A.size(); ++a)
            if (B.leq(b, h.map[a]) && !A.leq(d, a)) r.fail("b <= h(a) implies dual value <= a", {b, a});
    }
    if (preserves_bounds(h)) {
        auto ja = join_irreducibles(A);
        for (int b : jb) {
            int d = hom_dual_value(h, b);
            if (std::find(ja.begin(), ja.end(), d) == ja.end()) r.fail("dual value of a join irreducible is join irreducible", {b});
            for (int a = 0; a < A.size(); ++a)
                if (A.leq(d, a) && !B.leq(b, h.map[a])) r.fail("dual value <= a implies b <= h(a)", {b, a});
        }
    }
    return r;
}

std::vector<AlgHom> enumerate_homs(const FinAlgebra& A, const FinAlgebra& B, long node_budget) {
    if (A.has_neg() != B.has_neg()) throw SignatureError("enumerate_homs: signatures differ");
    std::vector<AlgHom> out;
    const int n = A.size(), m = B.size();
    if (n == 1) {
        AlgHom h{A, B, {B.one()}};
        if (validate_homomorphism(h).ok()) out.push_back(h);
        return out;
    }
    // images of join irreducibles determine every non-bottom element; the
    // bottom goes to tilde of the image of the top
    auto J = join_irreducibles(A);
    std::vector<std::vector<int>> below(n);
    for (int a = 0; a < n; ++a)
        for (int j : J)
            if (A.leq(j, a)) below[a].push_back(j);
    std::vector<int> img(n, -1);
    long nodes = 0;
    auto extend = [&]() {
        std::vector<int> h(n, -1);
        for (int a = 0; a < n; ++a) {
            if (below[a].empty()) continue;
            int v = -1;
            for (int j : below[a]) v = v < 0 ? img[j] : B.join(v, img[j]);
            h[a] = v;
        }
        h[A.bottom()] = B.tilde(h[A.top()]);
        return h;
    };
    auto rec = [&](auto&& self, std::size_t k) -> void {
        if (node_budget > 0 && ++nodes > node_budget)
            throw BudgetExceeded("enumerate_homs: node budget exhausted", "{\"node_budget\":" + std::to_string(node_budget) + "}");
        if (k == J.size()) {
            AlgHom h{A, B, extend()};
            if (validate_homomorphism(h).ok()) out.push_back(std::move(h));
            return;
        }
        int j = J[k];
        for (int v = 0; v < m; ++v) {
            bool ok = true;
            for (std::size_t i = 0; i < k && ok; ++i)
                if (A.leq(J[i], j) && !B.leq(img[J[i]], v)) ok = false;
            if (!ok) continue;
            img[j] = v;
            self(self, k + 1);
        }
        img[j] = -1;
    };
    // join irreducibles in a linear extension so lower ones are fixed first
    std::sort(J.begin(), J.end(), [&](int x, int y) {
        int dx = 0, dy = 0;
        for (int a = 0; a < n; ++a) dx += A.leq(a, x), dy += A.leq(a, y);
        return dx != dy ? dx < dy : x < y;
    });
    rec(rec, 0);
    std::sort(out.begin(), out.end(), [](const AlgHom& a, const AlgHom& b) { return a.map < b.map; });
    return out;
}

std::vector<FrameMap> enumerate_frame_morphisms(const Frame& W1, const Frame& W2, long node_budget) {
    if (W1.neg.has_value() != W2.neg.has_value()) throw SignatureError("enumerate_frame_morphisms: signatures differ");
    std::vector<FrameMap> out;
    const int n = W1.n;
    std::vector<int> f(n, 0);
    long nodes = 0;
    auto rec = [&](auto&& self, int x) -> void {
        if (node_budget > 0 && ++nodes > node_budget)
            throw BudgetExceeded("enumerate_frame_morphisms: node budget exhausted", "{}");
        if (x == n) {
            FrameMap fm{W1, W2, f};
            if (validate_frame_morphism(fm).ok()) out.push_back(std::move(fm));
            return;
        }
        for (int y = 0; y < W2.n; ++y) {
            // cheap local checks: identity membership, order with earlier points
            if (has(W1.identity, x) != has(W2.identity, y)) continue;
            bool ok = true;
            for (int z = 0; z < x && ok; ++z)
                if ((W1.leq(z, x) && !W2.leq(f[z], y)) || (W1.leq(x, z) && !W2.leq(y, f[z]))) ok = false;
            if (!ok) continue;
            f[x] = y;
            self(self, x + 1);
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace qra
