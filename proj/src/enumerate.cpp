#include "qra/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace qra {

// ---------------------------------------------------------------- posets

namespace {

Poset dual_of(const Poset& P) {
    Poset d;
    d.n = P.n;
    d.up = P.downs();
    return d;
}

std::pair<int, int> point_inv(const Poset& P, const std::vector<Set>& downs, int x) {
    return {popcount(downs[x]), popcount(P.up[x])};
}

Poset from_covers(int n, const std::vector<std::pair<int, int>>& covers) {
    Poset p;
    p.n = n;
    p.up.assign(n, 0);
    for (int i = 0; i < n; ++i) p.up[i] = bit(i);
    bool changed = true;
    for (auto [a, b] : covers) p.up[a] |= bit(b);
    while (changed) {
        changed = false;
        for (int i = 0; i < n; ++i) {
            Set c = p.up_closure(p.up[i]);
            if (c != p.up[i]) {
                p.up[i] = c;
                changed = true;
            }
        }
    }
    return p;
}

Poset chain(int k) {
    std::vector<std::pair<int, int>> c;
    for (int i = 0; i + 1 < k; ++i) c.push_back({i, i + 1});
    return from_covers(k, c);
}

Poset disjoint(const Poset& a, const Poset& b) {
    Poset p;
    p.n = a.n + b.n;
    p.up = a.up;
    for (Set s : b.up) p.up.push_back(s << a.n);
    return p;
}

const std::vector<std::pair<std::string, Poset>>& named_shapes() {
    static const std::vector<std::pair<std::string, Poset>> shapes = [] {
        std::vector<std::pair<std::string, Poset>> v;
        v.push_back({"1", chain(1)});
        v.push_back({"2", chain(2)});
        v.push_back({"1+1", disjoint(chain(1), chain(1))});
        v.push_back({"3", chain(3)});
        v.push_back({"4", chain(4)});
        v.push_back({"1+2", disjoint(chain(1), chain(2))});
        v.push_back({"2x2", from_covers(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}})});
        v.push_back({"5", chain(5)});
        v.push_back({"bowtie", from_covers(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}})});
        v.push_back({"6", chain(6)});
        v.push_back({"1+1+1", disjoint(chain(1), disjoint(chain(1), chain(1)))});
        v.push_back({"1+3", disjoint(chain(1), chain(3))});
        v.push_back({"N", from_covers(4, {{0, 2}, {1, 2}, {1, 3}})});
        v.push_back({"X", from_covers(5, {{0, 2}, {1, 2}, {2, 3}, {2, 4}})});
        v.push_back({"P", from_covers(5, {{0, 1}, {0, 2}, {1, 3}, {3, 4}, {2, 4}})});
        v.push_back({"d(2x2)", from_covers(6, {{0, 1}, {1, 2}, {1, 3}, {2, 4}, {3, 4}, {4, 5}})});
        v.push_back({"7", chain(7)});
        // a few non-self-dual or larger shapes that show up in reports
        v.push_back({"1+1+2", disjoint(disjoint(chain(1), chain(1)), chain(2))});
        v.push_back({"V", from_covers(3, {{0, 1}, {0, 2}})});
        v.push_back({"Lambda", from_covers(3, {{0, 2}, {1, 2}})});
        v.push_back({"2+2", disjoint(chain(2), chain(2))});
        v.push_back({"1+1+1+1", disjoint(disjoint(chain(1), chain(1)), disjoint(chain(1), chain(1)))});
        v.push_back({"8", chain(8)});
        return v;
    }();
    return shapes;
}

}  // namespace

std::vector<std::vector<int>> poset_isos(const Poset& A, const Poset& B, bool first_only) {
    std::vector<std::vector<int>> out;
    if (A.n != B.n) return out;
    const int n = A.n;
    auto da = A.downs(), db = B.downs();
    std::vector<int> f(n, -1);
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, int x) -> bool {
        if (x == n) {
            out.push_back(f);
            return first_only;
        }
        auto ix = point_inv(A, da, x);
        for (int y = 0; y < n; ++y) {
            if (used[y] || point_inv(B, db, y) != ix) continue;
            bool ok = true;
            for (int z = 0; z < x && ok; ++z)
                if (A.leq(x, z) != B.leq(y, f[z]) || A.leq(z, x) != B.leq(f[z], y)) ok = false;
            if (!ok) continue;
            f[x] = y;
            used[y] = 1;
            if (self(self, x + 1)) return true;
            used[y] = 0;
            f[x] = -1;
        }
        return false;
    };
    rec(rec, 0);
    return out;
}

std::vector<std::vector<int>> automorphisms(const Poset& P) { return poset_isos(P, P); }

std::vector<std::vector<int>> anti_automorphisms(const Poset& P) { return poset_isos(P, dual_of(P)); }

std::string poset_certificate(const Poset& P) {
    const int n = P.n;
    auto downs = P.downs();
    std::vector<std::pair<int, int>> inv(n);
    for (int x = 0; x < n; ++x) inv[x] = point_inv(P, downs, x);
    std::vector<std::pair<int, int>> slots = inv;
    std::sort(slots.begin(), slots.end());
    // bits in order: for p = 1..n-1, pairs (p,q) and (q,p) for q < p
    std::string best, cur;
    std::vector<int> at(n, -1);
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, int p) -> void {
        if (p == n) {
            if (best.empty() || cur < best) best = cur;
            return;
        }
        for (int x = 0; x < n; ++x) {
            if (used[x] || inv[x] != slots[p]) continue;
            std::size_t len = cur.size();
            for (int q = 0; q < p; ++q) {
                cur.push_back(P.leq(x, at[q]) ? '1' : '0');
                cur.push_back(P.leq(at[q], x) ? '1' : '0');
            }
            if (best.empty() || cur.compare(0, cur.size(), best, 0, cur.size()) <= 0) {
                used[x] = 1;
                at[p] = x;
                self(self, p + 1);
                used[x] = 0;
            }
            cur.resize(len);
        }
    };
    rec(rec, 0);
    std::ostringstream os;
    os << n << ":";
    for (auto& s : slots) os << s.first << s.second;
    os << ":" << best;
    return os.str();
}

std::string poset_name(const Poset& P) {
    std::string cert = poset_certificate(P);
    for (auto& [name, shape] : named_shapes())
        if (shape.n == P.n && poset_certificate(shape) == cert) return name;
    // disjoint union of chains gets a sum name
    std::vector<Set> comps;
    Set seen = 0;
    auto downs = P.downs();
    for (int x = 0; x < P.n; ++x) {
        if (has(seen, x)) continue;
        Set c = bit(x), prev = 0;
        while (c != prev) {
            prev = c;
            for_bits(c, [&](int y) { c |= P.up[y] | downs[y]; });
        }
        seen |= c;
        comps.push_back(c);
    }
    std::vector<int> lens;
    bool chains = true;
    for (Set c : comps) {
        int k = popcount(c);
        for_bits(c, [&](int y) {
            if (popcount(P.up[y] | downs[y]) != k) chains = false;
        });
        lens.push_back(k);
    }
    if (chains) {
        std::sort(lens.begin(), lens.end());
        std::string s;
        for (std::size_t i = 0; i < lens.size(); ++i) s += (i ? "+" : "") + std::to_string(lens[i]);
        return s;
    }
    return "poset" + cert;
}

PosetShape make_shape(const Poset& P) {
    PosetShape s;
    s.poset = P;
    s.certificate = poset_certificate(P);
    s.name = poset_name(P);
    s.self_dual = !poset_isos(P, dual_of(P), true).empty();
    s.upset_count = (int)P.upsets().size();
    return s;
}

std::vector<PosetShape> enumerate_posets(int k) {
    if (k > 8) throw PreconditionError("enumerate_posets: at most 8 points supported");
    static std::mutex mu;
    static std::vector<std::vector<Poset>> levels;  // levels[s] = posets of size s
    std::lock_guard<std::mutex> lock(mu);
    if (levels.empty()) {
        levels.resize(2);
        levels[1].push_back(chain(1));
    }
    while ((int)levels.size() <= k) {
        int s = (int)levels.size() - 1;
        std::map<std::string, Poset> next;
        for (const Poset& P : levels[s]) {
            // new maximal point s whose strict downset is any downset D of P
            Poset dual = dual_of(P);
            for (Set D : dual.upsets()) {
                Poset Q;
                Q.n = s + 1;
                Q.up = P.up;
                for_bits(D, [&](int x) { Q.up[x] |= bit(s); });
                Q.up.push_back(bit(s));
                next.emplace(poset_certificate(Q), Q);
            }
        }
        std::vector<Poset> lvl;
        for (auto& [c, Q] : next) lvl.push_back(Q);
        levels.push_back(std::move(lvl));
    }
    std::vector<PosetShape> out;
    for (int s = 1; s <= k; ++s)
        for (const Poset& P : levels[s]) out.push_back(make_shape(P));
    return out;
}

PosetShape named_poset(const std::string& name) {
    for (auto& [nm, shape] : named_shapes())
        if (nm == name) return make_shape(shape);
    // generic chain names
    bool digits = !name.empty() && std::all_of(name.begin(), name.end(), ::isdigit);
    if (digits) {
        int k = std::stoi(name);
        if (k >= 1 && k <= 64) return make_shape(chain(k));
    }
    throw NotFound("unknown poset name: " + name);
}

std::vector<std::string> figure_poset_names() {
    return {"1", "2", "1+1", "3", "4", "1+2", "2x2", "5", "bowtie", "6", "1+1+1", "1+3", "N", "X", "P", "d(2x2)", "7"};
}

std::vector<PosetShape> posets_with_upsets(int n) {
    std::vector<PosetShape> out;
    if (n <= 1) return out;
    for (auto& s : enumerate_posets(n - 1))
        if (s.self_dual && s.upset_count == n) out.push_back(s);
    return out;
}

const char* signature_name(Signature s) { return s == Signature::DInFL ? "dinfl" : "dqra"; }

long budget_from_env() {
    const char* v = std::getenv("QRA_BUDGET_MS");
    if (!v || !*v) return 0;
    try {
        return std::stol(v);
    } catch (...) {
        throw StructuralError(std::string("QRA_BUDGET_MS is not a number: ") + v);
    }
}

// ---------------------------------------------------------------- frames

std::vector<std::uint64_t> frame_key(const Frame& W) {
    std::vector<std::uint64_t> k;
    k.push_back((std::uint64_t)W.n);
    k.push_back(W.identity);
    for (int x : W.tilde) k.push_back((std::uint64_t)x);
    for (Set s : W.comp) k.push_back(s);
    if (W.neg)
        for (int x : *W.neg) k.push_back((std::uint64_t)x);
    return k;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Shared {
    const Poset& P;
    Signature sig;
    std::vector<std::vector<int>> aut;
    std::vector<std::vector<int>> aut_inv;
    std::vector<std::vector<int>> involutions;  // order-reversing involutions, candidates for neg
    Clock::time_point deadline;
    bool has_deadline = false;
    long node_budget = 0;
    std::atomic<bool> stop{false};
    std::atomic<long> nodes{0}, prunes{0};
};

// sign of key(g.W) - key(W) without materialising g.W
int compare_image(const Frame& W, const std::vector<int>& g, const std::vector<int>& gi) {
    const int n = W.n;
    auto img = [&](Set s) {
        Set o = 0;
        for_bits(s, [&](int x) { o |= bit(g[x]); });
        return o;
    };
    Set I2 = img(W.identity);
    if (I2 != W.identity) return I2 < W.identity ? -1 : 1;
    for (int p = 0; p < n; ++p) {
        int v = g[W.tilde[gi[p]]];
        if (v != W.tilde[p]) return v < W.tilde[p] ? -1 : 1;
    }
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            Set v = img(W.c(gi[p], gi[q]));
            Set w = W.c(p, q);
            if (v != w) return v < w ? -1 : 1;
        }
    if (W.neg) {
        for (int p = 0; p < n; ++p) {
            int v = g[(*W.neg)[gi[p]]];
            if (v != (*W.neg)[p]) return v < (*W.neg)[p] ? -1 : 1;
        }
    }
    return 0;
}

bool is_canonical(const Frame& W, const Shared& sh) {
    for (std::size_t i = 0; i < sh.aut.size(); ++i)
        if (compare_image(W, sh.aut[i], sh.aut_inv[i]) < 0) return false;
    return true;
}

class TaskSearch {
public:
    TaskSearch(Shared& sh, Set I, std::vector<int> t, long& local_nodes)
        : sh_(sh), P_(sh.P), n_(sh.P.n), I_(I), t_(std::move(t)), nodes_(local_nodes) {
        m_.assign(n_, 0);
        for (int x = 0; x < n_; ++x) m_[t_[x]] = x;
        downs_ = P_.downs();
        build_orbits();
        val_.assign(norb_, -1);
        const int nn = n_ * n_;
        Set all = full_set(n_);
        T3_.assign(nn, 0);
        T1_.assign(nn, 0);
        T2_.assign(nn, 0);
        P3_.assign(nn, all);
        P1_.assign(nn, all);
        P2_.assign(nn, all);
    }

    void run(std::vector<Frame>& out) {
        out_ = &out;
        // identity condition, negative half: y not above x means no i in I
        // has y in i o x or in x o i
        bool ok = true;
        for (int x = 0; x < n_ && ok; ++x)
            for (int y = 0; y < n_ && ok; ++y) {
                if (P_.leq(x, y)) continue;
                for_bits(I_, [&](int i) {
                    if (ok) ok = assign(orbit(i, x, y), 0) && assign(orbit(x, i, y), 0);
                });
            }
        if (!ok || !propagate()) {
            sh_.prunes++;
            return;
        }
        search();
    }

private:
    int idx(int x, int y, int z) const { return (x * n_ + y) * n_ + z; }
    int orbit(int x, int y, int z) const { return orb_[idx(x, y, z)]; }

    void build_orbits() {
        const int N = n_ * n_ * n_;
        orb_.assign(N, -1);
        norb_ = 0;
        for (int s = 0; s < N; ++s) {
            if (orb_[s] >= 0) continue;
            std::vector<int> mem;
            int cur = s;
            while (orb_[cur] < 0) {
                orb_[cur] = norb_;
                mem.push_back(cur);
                int x = cur / (n_ * n_), y = (cur / n_) % n_, w = cur % n_;
                // R x y w  <=>  R (w-) x (y-)
                cur = idx(m_[w], x, m_[y]);
            }
            if (orb_[cur] != norb_) throw InternalError("orbit construction is not a permutation");
            members_.push_back(std::move(mem));
            ++norb_;
        }
    }

    bool assign(int o, int v) {
        if (val_[o] == v) return true;
        if (val_[o] >= 0) return false;
        val_[o] = (std::int8_t)v;
        trail_.push_back(o);
        queue_.push_back(o);
        for (int s : members_[o]) {
            int x = s / (n_ * n_), y = (s / n_) % n_, z = s % n_;
            if (v) {
                T3_[x * n_ + y] |= bit(z);
                T1_[y * n_ + z] |= bit(x);
                T2_[x * n_ + z] |= bit(y);
            } else {
                P3_[x * n_ + y] &= ~bit(z);
                P1_[y * n_ + z] &= ~bit(x);
                P2_[x * n_ + z] &= ~bit(y);
            }
        }
        return true;
    }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            int o = trail_.back();
            trail_.pop_back();
            int v = val_[o];
            val_[o] = -1;
            for (int s : members_[o]) {
                int x = s / (n_ * n_), y = (s / n_) % n_, z = s % n_;
                if (v) {
                    T3_[x * n_ + y] &= ~bit(z);
                    T1_[y * n_ + z] &= ~bit(x);
                    T2_[x * n_ + z] &= ~bit(y);
                } else {
                    P3_[x * n_ + y] |= bit(z);
                    P1_[y * n_ + z] |= bit(x);
                    P2_[x * n_ + z] |= bit(y);
                }
            }
        }
        queue_.clear();
    }

    // upward closure in the third argument; orbits carry it to the others
    bool propagate_implications() {
        while (!queue_.empty()) {
            int o = queue_.back();
            queue_.pop_back();
            int v = val_[o];
            for (int s : members_[o]) {
                int x = s / (n_ * n_), y = (s / n_) % n_, z = s % n_;
                Set nb = v ? (P_.up[z] & ~bit(z)) : (downs_[z] & ~bit(z));
                bool ok = true;
                for_bits(nb, [&](int w) {
                    if (ok) ok = assign(orbit(x, y, w), v);
                });
                if (!ok) return false;
            }
        }
        return true;
    }

    bool propagate() {
        for (;;) {
            if (!propagate_implications()) return false;
            std::size_t before = trail_.size();
            if (!identity_clauses()) return false;
            if (!associativity()) return false;
            if (trail_.size() == before) return true;
        }
    }

    // positive half of the identity condition: some i in I with x in i o x,
    // and some i in I with x in x o i
    bool identity_clauses() {
        for (int x = 0; x < n_; ++x) {
            int xx = x * n_ + x;
            if (!(T1_[x * n_ + x] & I_)) {
                Set poss = P1_[x * n_ + x] & I_;
                if (!poss) return false;
                if (popcount(poss) == 1 && !assign(orbit(std::countr_zero(poss), x, x), 1)) return false;
            }
            if (!(T2_[xx] & I_)) {
                Set poss = P2_[xx] & I_;
                if (!poss) return false;
                if (popcount(poss) == 1 && !assign(orbit(x, std::countr_zero(poss), x), 1)) return false;
            }
        }
        return true;
    }

    // (x o y) o z = x o (y o z) pointwise: w on the left iff w on the right
    bool associativity() {
        const int n = n_;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                Set t3xy = T3_[x * n + y], p3xy = P3_[x * n + y];
                for (int z = 0; z < n; ++z) {
                    Set t3yz = T3_[y * n + z], p3yz = P3_[y * n + z];
                    for (int w = 0; w < n; ++w) {
                        Set lt = t3xy & T1_[z * n + w], lp = p3xy & P1_[z * n + w];
                        Set rt = t3yz & T2_[x * n + w], rp = p3yz & P2_[x * n + w];
                        if (lt && !rp) return false;
                        if (rt && !lp) return false;
                        if (lt && !rt && popcount(rp) == 1) {
                            int v = std::countr_zero(rp);
                            if (!assign(orbit(y, z, v), 1) || !assign(orbit(x, v, w), 1)) return false;
                        }
                        if (rt && !lt && popcount(lp) == 1) {
                            int u = std::countr_zero(lp);
                            if (!assign(orbit(x, y, u), 1) || !assign(orbit(u, z, w), 1)) return false;
                        }
                        if (!lp && rp) {
                            bool ok = true;
                            for_bits(rp, [&](int v) {
                                if (!ok) return;
                                if (has(t3yz, v)) ok = assign(orbit(x, v, w), 0);
                                else if (has(T2_[x * n + w], v)) ok = assign(orbit(y, z, v), 0);
                            });
                            if (!ok) return false;
                        }
                        if (!rp && lp) {
                            bool ok = true;
                            for_bits(lp, [&](int u) {
                                if (!ok) return;
                                if (has(t3xy, u)) ok = assign(orbit(u, z, w), 0);
                                else if (has(T1_[z * n + w], u)) ok = assign(orbit(x, y, u), 0);
                            });
                            if (!ok) return false;
                        }
                        // masks may have changed; refresh the row caches
                        t3xy = T3_[x * n + y];
                        p3xy = P3_[x * n + y];
                        t3yz = T3_[y * n + z];
                        p3yz = P3_[y * n + z];
                    }
                }
            }
        return true;
    }

    void check_budget() {
        ++nodes_;
        if ((nodes_ & 255) == 0) {
            if (sh_.has_deadline && Clock::now() > sh_.deadline) sh_.stop = true;
            if (sh_.node_budget > 0 && sh_.nodes.load() + nodes_ > sh_.node_budget) sh_.stop = true;
        }
    }

    void search() {
        if (sh_.stop) return;
        check_budget();
        int o = -1;
        for (int i = 0; i < norb_; ++i)
            if (val_[i] < 0) {
                o = i;
                break;
            }
        if (o < 0) {
            leaf();
            return;
        }
        for (int v = 1; v >= 0; --v) {
            std::size_t mark = trail_.size();
            if (assign(o, v) && propagate()) search();
            else sh_.prunes++;
            undo_to(mark);
            if (sh_.stop) return;
        }
    }

    void leaf() {
        Frame W;
        W.n = n_;
        W.up = P_.up;
        W.identity = I_;
        W.comp = T3_;
        W.tilde = t_;
        W.minus = m_;
        if (!is_canonical(W, sh_)) return;
        if (sh_.sig == Signature::DInFL) {
            out_->push_back(std::move(W));
            return;
        }
        for (const auto& nu : sh_.involutions) {
            bool ok = true;
            for (int x = 0; x < n_ && ok; ++x)
                for (int y = 0; y < n_ && ok; ++y) {
                    int a = nu[t_[y]], b = nu[t_[x]];
                    for (int z = 0; z < n_; ++z)
                        if (W.R(x, y, m_[z]) != W.R(a, b, nu[z])) {
                            ok = false;
                            break;
                        }
                }
            if (!ok) continue;
            Frame V = W;
            V.neg = nu;
            if (is_canonical(V, sh_)) out_->push_back(std::move(V));
        }
    }

    Shared& sh_;
    const Poset& P_;
    int n_;
    Set I_;
    std::vector<int> t_, m_;
    std::vector<Set> downs_;
    std::vector<int> orb_;
    std::vector<std::vector<int>> members_;
    int norb_ = 0;
    std::vector<std::int8_t> val_;
    std::vector<int> trail_, queue_;
    std::vector<Set> T3_, T1_, T2_, P3_, P1_, P2_;
    std::vector<Frame>* out_ = nullptr;
    long& nodes_;
};

}  // namespace

EnumerationResult enumerate_frames(const PosetShape& shape, Signature sig, const SearchOptions& opt) {
    auto t0 = Clock::now();
    EnumerationResult res;
    res.poset_name = shape.name;
    res.signature = sig;
    const Poset& P = shape.poset;
    if (!P.valid()) throw StructuralError("enumerate_frames: not a partial order");
    if (P.n == 0) {
        Frame W;
        if (sig == Signature::DqRA) W.neg = std::vector<int>{};
        res.frames.push_back(W);
        return res;
    }
    Shared sh{P, sig, {}, {}, {}, {}, false, opt.node_budget, {}, {}, {}};
    sh.aut = automorphisms(P);
    for (auto& g : sh.aut) {
        std::vector<int> gi(P.n);
        for (int x = 0; x < P.n; ++x) gi[g[x]] = x;
        sh.aut_inv.push_back(gi);
    }
    auto antis = anti_automorphisms(P);
    for (auto& a : antis) {
        bool inv = true;
        for (int x = 0; x < P.n; ++x)
            if (a[a[x]] != x) inv = false;
        if (inv) sh.involutions.push_back(a);
    }
    long budget = opt.budget_ms;
    if (budget > 0) {
        sh.has_deadline = true;
        sh.deadline = t0 + std::chrono::milliseconds(budget);
    }
    // tasks: (I, tilde) pairs that are least in their automorphism orbit
    struct Task {
        Set I;
        std::vector<int> t;
    };
    std::vector<Task> tasks;
    for (Set I : P.upsets()) {
        if (I == 0) continue;
        for (auto& t : antis) {
            bool least = true;
            for (std::size_t k = 0; k < sh.aut.size() && least; ++k) {
                const auto& g = sh.aut[k];
                const auto& gi = sh.aut_inv[k];
                Set I2 = 0;
                for_bits(I, [&](int x) { I2 |= bit(g[x]); });
                if (I2 != I) {
                    if (I2 < I) least = false;
                    continue;
                }
                for (int p = 0; p < P.n; ++p) {
                    int v = g[t[gi[p]]];
                    if (v != t[p]) {
                        if (v < t[p]) least = false;
                        break;
                    }
                }
            }
            if (least) tasks.push_back({I, t});
        }
    }
    res.stats.tasks = tasks.size();
    std::vector<std::vector<Frame>> results(tasks.size());
    std::vector<char> done(tasks.size(), 0);
    std::atomic<std::size_t> next{opt.start_task};
    auto worker = [&]() {
        long local = 0;
        for (;;) {
            std::size_t k = next.fetch_add(1);
            if (k >= tasks.size() || sh.stop) break;
            std::vector<Frame> out;
            TaskSearch ts(sh, tasks[k].I, tasks[k].t, local);
            ts.run(out);
            sh.nodes += local;
            local = 0;
            if (sh.stop) break;
            results[k] = std::move(out);
            done[k] = 1;
            // small tasks never reach the in-search check
            if (sh.node_budget > 0 && sh.nodes.load() > sh.node_budget && k + 1 < tasks.size()) sh.stop = true;
        }
    };
    int jobs = std::max(1, opt.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> th;
        for (int j = 0; j < jobs; ++j) th.emplace_back(worker);
        for (auto& t : th) t.join();
    }
    res.stats.nodes = sh.nodes;
    res.stats.prunes = sh.prunes;
    res.stats.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    if (sh.stop) {
        std::size_t first = opt.start_task;
        while (first < tasks.size() && done[first]) ++first;
        long partial = 0;
        for (std::size_t k = opt.start_task; k < first; ++k) partial += (long)results[k].size();
        nlohmann::json cp = {{"poset", shape.name},
                             {"certificate", shape.certificate},
                             {"signature", signature_name(sig)},
                             {"next_task", first},
                             {"tasks", tasks.size()},
                             {"frames_before_next_task", partial}};
        throw BudgetExceeded("enumeration budget exhausted on poset " + shape.name + " after " +
                                 std::to_string(first) + " of " + std::to_string(tasks.size()) + " tasks",
                             cp.dump());
    }
    for (std::size_t k = opt.start_task; k < tasks.size(); ++k)
        for (auto& f : results[k]) res.frames.push_back(std::move(f));
    std::sort(res.frames.begin(), res.frames.end(),
              [](const Frame& a, const Frame& b) { return frame_key(a) < frame_key(b); });
    for (std::size_t i = 0; i < res.frames.size(); ++i)
        res.frames[i].name = shape.name + "#" + std::to_string(i + 1);
    return res;
}

AlgebraCounts count_algebras(int n, const SearchOptions& opt) {
    AlgebraCounts c;
    if (n < 1) throw PreconditionError("count_algebras: size must be positive");
    if (n == 1) {
        c.dinfl = c.dqra = 1;
        c.by_poset.push_back({"empty", {1, 1}});
        return c;
    }
    for (auto& s : posets_with_upsets(n)) {
        long a = (long)enumerate_frames(s, Signature::DInFL, opt).count();
        long b = (long)enumerate_frames(s, Signature::DqRA, opt).count();
        c.dinfl += a;
        c.dqra += b;
        c.by_poset.push_back({s.name, {a, b}});
    }
    return c;
}

}  // namespace qra
