#include "qra/represent.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

#include "qra/enumerate.hpp"

namespace qra {

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
    long ms = 0;
    Clock::time_point start = Clock::now();
    bool passed() const {
        return ms > 0 && std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count() >= ms;
    }
};

bool is_perm(const std::vector<int>& p, int n) {
    if ((int)p.size() != n) return false;
    std::vector<char> seen(n, 0);
    for (int x : p) {
        if (x < 0 || x >= n || seen[x]) return false;
        seen[x] = 1;
    }
    return true;
}

}  // namespace

void check_base(const RepBase& b) {
    const int n = b.points;
    if (n < 0 || n > 8) throw StructuralError("base: points must be between 0 and 8");
    if ((int)b.up.size() != n || (int)b.E.size() != n) throw StructuralError("base: matrix size mismatch");
    Poset P{n, b.up};
    if (!P.valid()) throw PreconditionError("base: leq is not a partial order");
    for (int x = 0; x < n; ++x) {
        if (b.E[x] & ~full_set(n)) throw StructuralError("base: E index out of range");
        if (!b.in_E(x, x)) throw PreconditionError("base: E not reflexive");
        for (int y = 0; y < n; ++y) {
            if (b.in_E(x, y) != b.in_E(y, x)) throw PreconditionError("base: E not symmetric");
            if (b.leq(x, y) && !b.in_E(x, y)) throw PreconditionError("base: leq not contained in E");
            if (b.in_E(x, y) && b.E[x] != b.E[y]) throw PreconditionError("base: E not transitive");
        }
    }
    if (!is_perm(b.alpha, n)) throw StructuralError("base: alpha is not a permutation");
    for (int x = 0; x < n; ++x) {
        if (!b.in_E(x, b.alpha[x])) throw PreconditionError("base: alpha not contained in E");
        for (int y = 0; y < n; ++y)
            if (b.leq(x, y) != b.leq(b.alpha[x], b.alpha[y]))
                throw PreconditionError("base: alpha is not an order automorphism");
    }
    if (b.beta) {
        const auto& be = *b.beta;
        if (!is_perm(be, n)) throw StructuralError("base: beta is not a permutation");
        for (int x = 0; x < n; ++x) {
            if (be[be[x]] != x) throw PreconditionError("base: beta is not an involution");
            if (!b.in_E(x, be[x])) throw PreconditionError("base: beta not contained in E");
            if (be[x] != b.alpha[be[b.alpha[x]]]) throw PreconditionError("base: beta differs from alpha;beta;alpha");
            for (int y = 0; y < n; ++y)
                if (b.leq(x, y) != b.leq(be[y], be[x]))
                    throw PreconditionError("base: beta is not a dual order automorphism");
        }
    }
}

namespace {

std::vector<std::vector<int>> set_rows_matrix(const std::vector<Set>& rows, int n) {
    std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) m[x][y] = has(rows[x], y) ? 1 : 0;
    return m;
}

std::vector<Set> matrix_rows(const std::vector<std::vector<int>>& m) {
    std::vector<Set> r(m.size(), 0);
    for (std::size_t x = 0; x < m.size(); ++x)
        for (std::size_t y = 0; y < m[x].size(); ++y)
            if (m[x][y]) r[x] |= bit((int)y);
    return r;
}

}  // namespace

Json base_to_json(const RepBase& b) {
    Json j;
    j["points"] = b.points;
    j["leq"] = set_rows_matrix(b.up, b.points);
    j["E"] = set_rows_matrix(b.E, b.points);
    j["alpha"] = b.alpha;
    if (b.beta)
        j["beta"] = *b.beta;
    else
        j["beta"] = nullptr;
    return j;
}

RepBase base_from_json(const Json& j) {
    if (!j.is_object()) throw StructuralError("base: expected an object");
    const Json& pj = json_field(j, "points");
    if (!pj.is_number_integer()) throw StructuralError("base: points must be an integer");
    RepBase b;
    b.points = pj.get<int>();
    if (b.points < 0 || b.points > 8) throw StructuralError("base: points must be between 0 and 8");
    const int n = b.points;
    b.up = matrix_rows(json_int_matrix(json_field(j, "leq"), "leq", n, n, 0, 1));
    b.E = matrix_rows(json_int_matrix(json_field(j, "E"), "E", n, n, 0, 1));
    b.alpha = json_int_array(json_field(j, "alpha"), "alpha", 0, std::max(0, n - 1));
    if (j.contains("beta") && !j["beta"].is_null()) b.beta = json_int_array(j["beta"], "beta", 0, std::max(0, n - 1));
    check_base(b);
    return b;
}

DqE::DqE(RepBase base) : b_(std::move(base)), N_(b_.points) {
    check_base(b_);
    for (int x = 0; x < N_; ++x)
        for (int y = 0; y < N_; ++y) {
            if (b_.in_E(x, y)) {
                E_ |= pair_bit(x, y);
                pairs_.push_back({x, y});
            }
            if (b_.leq(x, y)) leq_ |= pair_bit(x, y);
        }
    alpha_ = graph(b_.alpha);
    if (b_.beta) beta_ = graph(*b_.beta);
}

Rel DqE::graph(const std::vector<int>& f) const {
    Rel r = 0;
    for (int x = 0; x < N_; ++x) r |= pair_bit(x, f[x]);
    return r;
}

Rel DqE::compose(Rel R, Rel S) const {
    const Rel rowmask = (Rel{1} << N_) - 1;
    Rel out = 0;
    for (int x = 0; x < N_; ++x) {
        Rel row = (R >> (x * N_)) & rowmask, acc = 0;
        while (row) {
            int y = std::countr_zero(row);
            row &= row - 1;
            acc |= (S >> (y * N_)) & rowmask;
        }
        out |= acc << (x * N_);
    }
    return out;
}

Rel DqE::converse(Rel R) const {
    Rel out = 0;
    while (R) {
        int i = std::countr_zero(R);
        R &= R - 1;
        out |= pair_bit(i % N_, i / N_);
    }
    return out;
}

Rel DqE::zero() const { return compose(alpha_, converse(complement(leq_))); }
Rel DqE::tilde(Rel R) const { return compose(converse(complement(R)), alpha_); }
Rel DqE::minus(Rel R) const { return compose(alpha_, converse(complement(R))); }
Rel DqE::neg(Rel R) const {
    if (!b_.beta) throw SignatureError("Dq(E): base has no beta");
    return compose(compose(compose(alpha_, beta_), complement(R)), beta_);
}

bool DqE::is_upset(Rel R) const {
    if (R & ~E_) return false;
    return compose(compose(leq_, R), leq_) == R;
}

Poset DqE::twist_order() const {
    const int m = (int)pairs_.size();
    Poset P;
    P.n = m;
    P.up.assign(m, 0);
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) {
            auto [u, v] = pairs_[i];
            auto [x, y] = pairs_[k];
            if (b_.leq(x, u) && b_.leq(v, y)) P.up[i] |= bit(k);
        }
    return P;
}

Poset twist_order(const RepBase& b) { return DqE(b).twist_order(); }

namespace {

// upsets of P, aborting once more than cap exist; returns false on abort
bool capped_upsets(const Poset& P, std::size_t cap, std::vector<Set>* out, std::size_t* count) {
    const int n = P.n;
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::vector<int> rank(n);
    for (int x = 0; x < n; ++x) rank[x] = popcount(P.up[x]);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rank[a] < rank[b]; });
    std::size_t cnt = 0;
    bool over = false;
    auto rec = [&](auto&& self, int i, Set cur) -> void {
        if (over) return;
        if (i == n) {
            if (++cnt > cap) {
                over = true;
                return;
            }
            if (out) out->push_back(cur);
            return;
        }
        int x = order[i];
        self(self, i + 1, cur);
        if ((P.up[x] & ~bit(x) & ~cur) == 0) self(self, i + 1, cur | bit(x));
    };
    rec(rec, 0, 0);
    *count = cnt;
    return !over;
}

}  // namespace

std::size_t DqE::count_upsets(std::size_t cap) const {
    std::size_t c = 0;
    capped_upsets(twist_order(), cap, nullptr, &c);
    return c;
}

std::vector<Rel> DqE::upsets(std::size_t cap) const {
    std::vector<Set> raw;
    std::size_t c = 0;
    if (!capped_upsets(twist_order(), cap, &raw, &c))
        throw PreconditionError("Dq(E): more than " + std::to_string(cap) + " upsets");
    std::vector<Rel> res;
    res.reserve(raw.size());
    for (Set s : raw) {
        Rel r = 0;
        for_bits(s, [&](int i) { r |= pair_bit(pairs_[i].first, pairs_[i].second); });
        res.push_back(r);
    }
    std::sort(res.begin(), res.end(), [](Rel a, Rel b) {
        int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    return res;
}

FinAlgebra build_dq(const RepBase& b, std::vector<Rel>* carrier, std::size_t cap) {
    DqE d(b);
    std::vector<Rel> el = d.upsets(std::min(cap, kTableLimit));
    const int n = (int)el.size();
    std::unordered_map<Rel, int> idx;
    for (int i = 0; i < n; ++i) idx[el[i]] = i;
    auto look = [&](Rel r) {
        auto it = idx.find(r);
        if (it == idx.end()) throw InternalError("Dq(E): operation left the carrier");
        return it->second;
    };
    std::vector<std::uint8_t> leq((std::size_t)n * n);
    std::vector<int> prod((std::size_t)n * n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            leq[(std::size_t)i * n + k] = (el[i] & ~el[k]) == 0;
            prod[(std::size_t)i * n + k] = look(d.compose(el[i], el[k]));
        }
    std::vector<int> tl(n), mi(n);
    std::optional<std::vector<int>> ng;
    if (b.beta) ng.emplace(n);
    for (int i = 0; i < n; ++i) {
        tl[i] = look(d.tilde(el[i]));
        mi[i] = look(d.minus(el[i]));
        if (ng) (*ng)[i] = look(d.neg(el[i]));
    }
    if (carrier) *carrier = el;
    return FinAlgebra(n, std::move(leq), std::move(prod), look(d.unit()), std::move(tl), std::move(mi),
                      std::move(ng), "Dq(E)");
}

std::pair<bool, bool> bijection_complement_check(const RepBase& b, const std::vector<int>& gamma, Rel R) {
    DqE d(b);
    if (!is_perm(gamma, b.points)) throw PreconditionError("gamma is not a bijection");
    Rel g = d.graph(gamma);
    if (g & ~d.E()) throw PreconditionError("gamma not contained in E");
    if (R & ~d.E()) throw PreconditionError("relation not contained in E");
    bool left = d.complement(d.compose(g, R)) == d.compose(g, d.complement(R));
    bool right = d.complement(d.compose(R, g)) == d.compose(d.complement(R), g);
    return {left, right};
}

std::optional<int> no_finite_rep_filter(const FinAlgebra& A) {
    const int z = A.zero(), o = A.one();
    for (int a = 0; a < A.size(); ++a) {
        bool above_zero = A.leq(z, a) && a != z;
        bool below_one = A.leq(a, o) && a != o;
        if (above_zero && below_one && A.leq(A.mul(a, a), z)) return a;
    }
    return std::nullopt;
}

namespace {

struct AlgOps {
    using Elem = int;
    const FinAlgebra& B;
    bool leq(int a, int b) const { return B.leq(a, b); }
    int join(int a, int b) const { return B.join(a, b); }
    int meet(int a, int b) const { return B.meet(a, b); }
    int mul(int a, int b) const { return B.mul(a, b); }
    int tilde(int a) const { return B.tilde(a); }
    int minus(int a) const { return B.minus(a); }
    int neg(int a) const { return B.neg(a); }
    int one() const { return B.one(); }
    bool has_neg() const { return B.has_neg(); }
};

struct RelOps {
    using Elem = Rel;
    const DqE& D;
    Rel unit;
    bool leq(Rel a, Rel b) const { return (a & ~b) == 0; }
    Rel join(Rel a, Rel b) const { return a | b; }
    Rel meet(Rel a, Rel b) const { return a & b; }
    Rel mul(Rel a, Rel b) const { return D.compose(a, b); }
    Rel tilde(Rel a) const { return D.tilde(a); }
    Rel minus(Rel a) const { return D.minus(a); }
    Rel neg(Rel a) const { return D.neg(a); }
    Rel one() const { return unit; }
    bool has_neg() const { return D.base().beta.has_value(); }
};

struct StopSearch {};

// injective homomorphisms are fixed by the images of join irreducibles; the
// rest follow by joins, with the bottom forced to tilde of the top's image
template <class Ops>
class Embedder {
public:
    using T = typename Ops::Elem;

    Embedder(const FinAlgebra& A, const Ops& B, std::vector<T> cands, long node_budget, const Deadline* dl,
             const std::atomic<bool>* cancel)
        : A_(A), B_(B), cands_(std::move(cands)), node_budget_(node_budget), dl_(dl), cancel_(cancel) {}

    std::optional<std::vector<T>> run() {
        const int n = A_.size();
        if (!A_.is_lattice() || n == 0) return std::nullopt;
        if (A_.has_neg() != B_.has_neg()) throw SignatureError("embedding: signatures differ");
        J_ = join_irreducibles(A_);
        std::vector<int> below_cnt(n, 0);
        for (int j : J_)
            for (int k : J_)
                if (A_.leq(k, j)) ++below_cnt[j];
        std::stable_sort(J_.begin(), J_.end(), [&](int a, int b) { return below_cnt[a] < below_cnt[b]; });
        defined_at_.assign(J_.size(), {});
        bot_ = A_.bottom();
        for (int a = 0; a < n; ++a) {
            if (a == bot_) continue;
            int last = -1;
            for (int k = 0; k < (int)J_.size(); ++k)
                if (A_.leq(J_[k], a)) last = k;
            if (last < 0) throw InternalError("embedding: element with no join irreducible below");
            defined_at_[last].push_back(a);
        }
        h_.assign(n, T{});
        def_.assign(n, 0);
        per_j_.resize(J_.size());
        for (std::size_t k = 0; k < J_.size(); ++k) per_j_[k] = prefilter(J_[k]);
        if (J_.empty()) {
            // one-element algebra
            h_[bot_] = B_.one();
            def_[bot_] = 1;
            if (final_check()) return h_;
            return std::nullopt;
        }
        try {
            if (rec(0)) return h_;
        } catch (StopSearch&) {
            throw;
        }
        return std::nullopt;
    }

    long nodes() const { return nodes_; }

private:
    std::vector<T> prefilter(int j) const {
        const int o = A_.one();
        std::vector<T> out;
        const bool jj_le_j = A_.leq(A_.mul(j, j), j), j_le_jj = A_.leq(j, A_.mul(j, j));
        for (const T& c : cands_) {
            if (B_.leq(c, B_.one()) != A_.leq(j, o)) continue;
            if (B_.leq(B_.one(), c) != A_.leq(o, j)) continue;
            T cc = B_.mul(c, c);
            if (B_.leq(cc, c) != jj_le_j || B_.leq(c, cc) != j_le_jj) continue;
            if (B_.leq(c, B_.tilde(c)) != A_.leq(j, A_.tilde(j))) continue;
            if (B_.leq(B_.tilde(c), c) != A_.leq(A_.tilde(j), j)) continue;
            if (B_.leq(c, B_.minus(c)) != A_.leq(j, A_.minus(j))) continue;
            if (A_.has_neg()) {
                if (B_.leq(c, B_.neg(c)) != A_.leq(j, A_.neg(j))) continue;
                if (B_.leq(B_.neg(c), c) != A_.leq(A_.neg(j), j)) continue;
            }
            out.push_back(c);
        }
        return out;
    }

    void tick() {
        ++nodes_;
        if (node_budget_ > 0 && nodes_ > node_budget_) throw StopSearch{};
        if ((nodes_ & 1023) == 0) {
            if (dl_ && dl_->passed()) throw StopSearch{};
            if (cancel_ && cancel_->load()) throw StopSearch{};
        }
    }

    bool eq(const T& a, const T& b) const { return a == b; }

    bool pair_ok(int a, int b) {
        const T &ha = h_[a], &hb = h_[b];
        if (A_.leq(a, b) != B_.leq(ha, hb)) return false;
        if (A_.leq(b, a) != B_.leq(hb, ha)) return false;
        int m = A_.meet(a, b);
        if (def_[m] && !eq(h_[m], B_.meet(ha, hb))) return false;
        int p = A_.mul(a, b);
        if (def_[p] && !eq(h_[p], B_.mul(ha, hb))) return false;
        p = A_.mul(b, a);
        if (def_[p] && !eq(h_[p], B_.mul(hb, ha))) return false;
        return true;
    }

    bool unary_ok(int a) {
        int u = A_.tilde(a);
        if (def_[u] && !eq(h_[u], B_.tilde(h_[a]))) return false;
        u = A_.minus(a);
        if (def_[u] && !eq(h_[u], B_.minus(h_[a]))) return false;
        if (A_.has_neg()) {
            u = A_.neg(a);
            if (def_[u] && !eq(h_[u], B_.neg(h_[a]))) return false;
        }
        if (a == A_.one() && !eq(h_[a], B_.one())) return false;
        return true;
    }

    bool stage_ok(const std::vector<int>& fresh) {
        const int n = A_.size();
        std::vector<char> is_new(n, 0);
        for (int a : fresh) is_new[a] = 1;
        for (int a : fresh)
            for (int b = 0; b < n; ++b)
                if (def_[b] && !pair_ok(a, b)) return false;
        for (int b = 0; b < n; ++b) {
            if (!def_[b]) continue;
            bool touch = is_new[b] || is_new[A_.tilde(b)] || is_new[A_.minus(b)] ||
                         (A_.has_neg() && is_new[A_.neg(b)]);
            if (touch && !unary_ok(b)) return false;
        }
        return true;
    }

    bool final_check() {
        const int n = A_.size();
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                if (!pair_ok(a, b)) return false;
                if (!eq(h_[A_.join(a, b)], B_.join(h_[a], h_[b]))) return false;
            }
            if (!unary_ok(a)) return false;
        }
        return true;
    }

    bool rec(std::size_t k) {
        if (k == J_.size()) {
            h_[bot_] = B_.tilde(h_[A_.top()]);
            def_[bot_] = 1;
            bool ok = final_check();
            if (!ok) def_[bot_] = 0;
            return ok;
        }
        const int j = J_[k];
        for (const T& c : per_j_[k]) {
            tick();
            std::vector<int> fresh = defined_at_[k];
            bool ok = true;
            for (int a : fresh) {
                if (a == j) {
                    h_[a] = c;
                } else {
                    T acc{};
                    bool first = true;
                    for (std::size_t i = 0; i <= k; ++i)
                        if (A_.leq(J_[i], a)) {
                            const T& v = (J_[i] == j) ? c : h_[J_[i]];
                            acc = first ? v : B_.join(acc, v);
                            first = false;
                        }
                    h_[a] = acc;
                }
                def_[a] = 1;
            }
            ok = stage_ok(fresh);
            if (ok && rec(k + 1)) return true;
            for (int a : fresh) def_[a] = 0;
        }
        return false;
    }

    const FinAlgebra& A_;
    const Ops& B_;
    std::vector<T> cands_;
    long node_budget_;
    const Deadline* dl_;
    const std::atomic<bool>* cancel_;
    std::vector<int> J_;
    std::vector<std::vector<int>> defined_at_;
    std::vector<std::vector<T>> per_j_;
    std::vector<T> h_;
    std::vector<char> def_;
    int bot_ = -1;
    long nodes_ = 0;
};

}  // namespace

std::optional<AlgHom> embed_search(const FinAlgebra& A, const FinAlgebra& B, long node_budget) {
    AlgOps ops{B};
    std::vector<int> cands(B.size());
    for (int i = 0; i < B.size(); ++i) cands[i] = i;
    Embedder<AlgOps> e(A, ops, cands, node_budget, nullptr, nullptr);
    std::optional<std::vector<int>> m;
    try {
        m = e.run();
    } catch (StopSearch&) {
        throw BudgetExceeded("embedding search: node budget exhausted", "{}");
    }
    if (!m) return std::nullopt;
    return AlgHom{A, B, *m};
}

std::vector<RepBase> enumerate_bases(int points, bool need_beta, bool full_E_only, bool alpha_id_only) {
    std::vector<RepBase> out;
    if (points < 1 || points > 8) throw PreconditionError("bases: points must be between 1 and 8");
    for (const PosetShape& sh : enumerate_posets(points)) {
        const Poset& P = sh.poset;
        if (P.n != points) continue;
        if (need_beta && !sh.self_dual) continue;
        // connected components of the comparability graph
        std::vector<int> comp(points, -1);
        int nc = 0;
        for (int s = 0; s < points; ++s) {
            if (comp[s] >= 0) continue;
            std::vector<int> st{s};
            comp[s] = nc;
            while (!st.empty()) {
                int x = st.back();
                st.pop_back();
                for (int y = 0; y < points; ++y)
                    if (comp[y] < 0 && (P.leq(x, y) || P.leq(y, x))) {
                        comp[y] = nc;
                        st.push_back(y);
                    }
            }
            ++nc;
        }
        // set partitions of the components as restricted growth strings
        std::vector<std::vector<int>> parts;
        if (full_E_only) {
            parts.push_back(std::vector<int>(nc, 0));
        } else {
            std::vector<int> rgs(nc, 0);
            auto gen = [&](auto&& self, int i, int mx) -> void {
                if (i == nc) {
                    parts.push_back(rgs);
                    return;
                }
                for (int v = 0; v <= mx + 1; ++v) {
                    rgs[i] = v;
                    self(self, i + 1, std::max(mx, v));
                }
            };
            if (nc > 0) {
                rgs[0] = 0;
                gen(gen, 1, 0);
            }
            auto blocks = [](const std::vector<int>& r) { return *std::max_element(r.begin(), r.end()) + 1; };
            std::stable_sort(parts.begin(), parts.end(),
                             [&](const auto& a, const auto& b) { return blocks(a) > blocks(b); });
        }
        auto auts = automorphisms(P);
        std::sort(auts.begin(), auts.end());
        auto antis = need_beta ? anti_automorphisms(P) : std::vector<std::vector<int>>{};
        std::sort(antis.begin(), antis.end());
        for (const auto& pr : parts) {
            RepBase b;
            b.points = points;
            b.up = P.up;
            b.E.assign(points, 0);
            for (int x = 0; x < points; ++x)
                for (int y = 0; y < points; ++y)
                    if (pr[comp[x]] == pr[comp[y]]) b.E[x] |= bit(y);
            for (const auto& al : auts) {
                bool is_id = true, inE = true;
                for (int x = 0; x < points; ++x) {
                    if (al[x] != x) is_id = false;
                    if (!b.in_E(x, al[x])) inE = false;
                }
                if (!inE || (alpha_id_only && !is_id)) continue;
                b.alpha = al;
                if (!need_beta) {
                    b.beta.reset();
                    out.push_back(b);
                    continue;
                }
                for (const auto& be : antis) {
                    bool ok = true;
                    for (int x = 0; x < points && ok; ++x)
                        ok = be[be[x]] == x && b.in_E(x, be[x]) && be[x] == al[be[al[x]]];
                    if (!ok) continue;
                    b.beta = be;
                    out.push_back(b);
                }
            }
        }
    }
    return out;
}

namespace {

Json rel_pairs(Rel r, int N) {
    Json a = Json::array();
    for (int i = 0; i < N * N; ++i)
        if ((r >> i) & 1) a.push_back(Json::array({i / N, i % N}));
    return a;
}

}  // namespace

Json RepResult::summary() const {
    Json j;
    if (found) {
        j["result"] = "certificate";
        j["certificate"] = certificate;
    } else if (skipped) {
        j["result"] = "no finite representation possible";
        j["witness"] = filter_witness ? Json(*filter_witness) : Json(nullptr);
    } else {
        j["result"] = "exhausted";
    }
    j["bases_tried"] = bases_tried;
    j["bases_over_cap"] = bases_over_cap;
    return j;
}

RepResult representation_search(const FinAlgebra& A, const RepOptions& opt) {
    if (opt.max_points < 1 || opt.max_points > 8) throw PreconditionError("represent: max points must be between 1 and 8");
    RepResult res;
    if (opt.use_filter) {
        res.filter_witness = no_finite_rep_filter(A);
        if (res.filter_witness) {
            res.skipped = true;
            return res;
        }
    }
    const bool need_beta = A.has_neg();
    const bool cyclic = classify(A).cyclic;
    std::vector<RepBase> bases;
    for (int k = 1; k <= opt.max_points; ++k) {
        for (auto& b : enumerate_bases(k, need_beta, opt.full_E_only, opt.alpha_id_only)) {
            bool is_id = true;
            for (int x = 0; x < k; ++x) is_id = is_id && b.alpha[x] == x;
            // Dq(E) is cyclic exactly when alpha is the identity
            if (!cyclic && is_id) continue;
            bases.push_back(std::move(b));
        }
    }
    Deadline dl{opt.budget_ms};
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best{bases.size()};
    std::atomic<bool> stop{false}, timed_out{false};
    std::atomic<long> tried{0}, over{0};
    std::vector<std::optional<std::vector<Rel>>> found(bases.size());
    std::vector<char> done(bases.size(), 0);
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= bases.size() || i > best.load()) return;
            if (dl.passed()) {
                timed_out = true;
                stop = true;
                return;
            }
            DqE d(bases[i]);
            if (d.count_upsets(opt.upset_cap) > opt.upset_cap) {
                ++over;
                done[i] = 1;
                continue;
            }
            ++tried;
            RelOps ops{d, d.unit()};
            Embedder<RelOps> e(A, ops, d.upsets(opt.upset_cap), 0, &dl, &stop);
            try {
                found[i] = e.run();
            } catch (StopSearch&) {
                timed_out = true;
                stop = true;
                return;
            }
            done[i] = 1;
            if (found[i]) {
                std::size_t cur = best.load();
                while (i < cur && !best.compare_exchange_weak(cur, i)) {
                }
            }
        }
    };
    const int jobs = std::max(1, opt.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> th;
        for (int t = 0; t < jobs; ++t) th.emplace_back(worker);
        for (auto& t : th) t.join();
    }
    res.bases_tried = tried;
    res.bases_over_cap = over;
    std::size_t b = best.load();
    // a hit only counts when every earlier base finished without one
    bool settled = b < bases.size();
    for (std::size_t i = 0; settled && i < b; ++i) settled = done[i];
    if (settled) {
        const RepBase& base = bases[b];
        Json cert;
        cert["algebra"] = A.name();
        cert["size"] = A.size();
        cert["base"] = base_to_json(base);
        Json imgs = Json::array();
        for (Rel r : *found[b]) imgs.push_back(rel_pairs(r, base.points));
        cert["images"] = imgs;
        res.found = true;
        res.certificate = cert;
        return res;
    }
    if (timed_out) {
        std::size_t first = 0;
        while (first < bases.size() && done[first]) ++first;
        Json cp;
        cp["operation"] = "represent";
        cp["algebra"] = A.name();
        cp["max_points"] = opt.max_points;
        cp["bases"] = bases.size();
        cp["next_base"] = first;
        throw BudgetExceeded("represent: budget exhausted", cp.dump());
    }
    return res;
}

namespace {

// plain set-of-pairs relations, deliberately separate from the bitmask code
using PairSet = std::set<std::pair<int, int>>;

PairSet ps_compose(const PairSet& R, const PairSet& S) {
    PairSet out;
    for (auto [x, y] : R)
        for (auto it = S.lower_bound({y, -1}); it != S.end() && it->first == y; ++it) out.insert({x, it->second});
    return out;
}
PairSet ps_converse(const PairSet& R) {
    PairSet out;
    for (auto [x, y] : R) out.insert({y, x});
    return out;
}
PairSet ps_minus(const PairSet& A, const PairSet& B) {
    PairSet out;
    for (auto p : A)
        if (!B.count(p)) out.insert(p);
    return out;
}
PairSet ps_union(const PairSet& A, const PairSet& B) {
    PairSet out = A;
    out.insert(B.begin(), B.end());
    return out;
}
PairSet ps_inter(const PairSet& A, const PairSet& B) {
    PairSet out;
    for (auto p : A)
        if (B.count(p)) out.insert(p);
    return out;
}
bool ps_subset(const PairSet& A, const PairSet& B) {
    return std::includes(B.begin(), B.end(), A.begin(), A.end());
}

}  // namespace

ValidationReport verify_certificate(const FinAlgebra& A, const Json& cert) {
    ValidationReport r;
    if (!cert.is_object()) throw StructuralError("certificate: expected an object");
    const Json& bj = json_field(cert, "base");
    const Json& ij = json_field(cert, "images");
    if (!bj.is_object()) throw StructuralError("certificate: base must be an object");
    const int N = json_field(bj, "points").get<int>();
    if (N < 0 || N > 8) throw StructuralError("certificate: bad point count");
    auto leqm = json_int_matrix(json_field(bj, "leq"), "leq", N, N, 0, 1);
    auto Em = json_int_matrix(json_field(bj, "E"), "E", N, N, 0, 1);
    auto alpha = json_int_array(json_field(bj, "alpha"), "alpha", 0, std::max(0, N - 1));
    std::optional<std::vector<int>> beta;
    if (bj.contains("beta") && !bj["beta"].is_null()) beta = json_int_array(bj["beta"], "beta", 0, std::max(0, N - 1));
    if ((int)alpha.size() != N || (beta && (int)beta->size() != N))
        throw StructuralError("certificate: map length differs from point count");
    PairSet LE, E, AL, BE;
    for (int x = 0; x < N; ++x)
        for (int y = 0; y < N; ++y) {
            if (leqm[x][y]) LE.insert({x, y});
            if (Em[x][y]) E.insert({x, y});
        }
    for (int x = 0; x < N; ++x) {
        AL.insert({x, alpha[x]});
        if (beta) BE.insert({x, (*beta)[x]});
    }
    PairSet ID;
    for (int x = 0; x < N; ++x) ID.insert({x, x});
    // base conditions
    if (!ps_subset(ID, LE) || !ps_subset(ps_compose(LE, LE), LE) || ps_inter(LE, ps_converse(LE)) != ID)
        r.fail("base order is a partial order", {});
    if (!ps_subset(ID, E) || ps_converse(E) != E || !ps_subset(ps_compose(E, E), E))
        r.fail("E is an equivalence", {});
    if (!ps_subset(LE, E)) r.fail("order contained in E", {});
    auto bijective = [&](const PairSet& G) {
        return ps_compose(G, ps_converse(G)) == ID && ps_compose(ps_converse(G), G) == ID;
    };
    if (!bijective(AL) || !ps_subset(AL, E) || ps_compose(ps_compose(ps_converse(AL), LE), AL) != LE)
        r.fail("alpha is an order automorphism inside E", {});
    if (A.has_neg() != beta.has_value()) r.fail("beta present exactly for De Morgan negation", {});
    if (beta) {
        if (!bijective(BE) || ps_compose(BE, BE) != ID || !ps_subset(BE, E) ||
            ps_compose(ps_compose(BE, LE), BE) != ps_converse(LE) || ps_compose(ps_compose(AL, BE), AL) != BE)
            r.fail("beta is an involutive dual automorphism inside E commuting with alpha", {});
    }
    if (!r.ok()) return r;
    if (!ij.is_array() || (int)ij.size() != A.size()) throw StructuralError("certificate: one image per element expected");
    std::vector<PairSet> h(A.size());
    for (int a = 0; a < A.size(); ++a) {
        if (!ij[a].is_array()) throw StructuralError("certificate: image must be a list of pairs");
        for (const Json& p : ij[a]) {
            auto v = json_int_array(p, "pair", 0, std::max(0, N - 1));
            if (v.size() != 2) throw StructuralError("certificate: pairs have two entries");
            h[a].insert({v[0], v[1]});
        }
    }
    auto comp = [&](const PairSet& R) { return ps_minus(E, R); };
    auto tl = [&](const PairSet& R) { return ps_compose(ps_converse(comp(R)), AL); };
    auto mi = [&](const PairSet& R) { return ps_compose(AL, ps_converse(comp(R))); };
    auto ng = [&](const PairSet& R) { return ps_compose(ps_compose(ps_compose(AL, BE), comp(R)), BE); };
    for (int a = 0; a < A.size(); ++a) {
        if (!ps_subset(h[a], E) || ps_compose(ps_compose(LE, h[a]), LE) != h[a]) r.fail("image is an upset of E", {a});
        if (tl(h[a]) != h[A.tilde(a)]) r.fail("preserves tilde", {a});
        if (mi(h[a]) != h[A.minus(a)]) r.fail("preserves minus", {a});
        if (beta && ng(h[a]) != h[A.neg(a)]) r.fail("preserves neg", {a});
        for (int b = 0; b < A.size(); ++b) {
            if (a < b && h[a] == h[b]) r.fail("injective", {a, b});
            if (ps_union(h[a], h[b]) != h[A.join(a, b)]) r.fail("preserves join", {a, b});
            if (ps_inter(h[a], h[b]) != h[A.meet(a, b)]) r.fail("preserves meet", {a, b});
            if (ps_compose(h[a], h[b]) != h[A.mul(a, b)]) r.fail("preserves product", {a, b});
        }
    }
    if (h[A.one()] != LE) r.fail("unit maps to the order", {A.one()});
    return r;
}

}  // namespace qra
