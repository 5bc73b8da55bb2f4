#include "qra/core.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace qra {

namespace {

constexpr std::size_t kWitnessCap = 8;

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

void ValidationReport::fail(const std::string& law, std::vector<int> witness) {
    std::size_t count = 0;
    for (auto& f : failures)
        if (f.law == law) ++count;
    if (count >= kWitnessCap) {
        ++dropped;
        return;
    }
    failures.push_back({law, std::move(witness)});
}

void ValidationReport::merge(const ValidationReport& o) {
    for (auto& f : o.failures) fail(f.law, f.witness);
    dropped += o.dropped;
    for (auto& n : o.notes)
        if (std::find(notes.begin(), notes.end(), n) == notes.end()) notes.push_back(n);
}

bool ValidationReport::has_law(const std::string& law) const {
    for (auto& f : failures)
        if (f.law == law) return true;
    return false;
}

std::string ValidationReport::str() const {
    std::ostringstream os;
    if (ok()) {
        os << "ok";
    } else {
        os << failures.size() + dropped << " violation(s)";
        for (auto& f : failures) {
            os << "\n  " << f.law << " (";
            for (std::size_t i = 0; i < f.witness.size(); ++i) os << (i ? "," : "") << f.witness[i];
            os << ")";
        }
        if (dropped) os << "\n  ... " << dropped << " more";
    }
    return os.str();
}

FinAlgebra::FinAlgebra(int n, std::vector<std::uint8_t> leq, std::vector<int> product, int one,
                       std::vector<int> tilde, std::vector<int> minus,
                       std::optional<std::vector<int>> neg, std::string name)
    : n_(n), leq_(std::move(leq)), prod_(std::move(product)), one_(one), tilde_(std::move(tilde)),
      minus_(std::move(minus)), neg_(std::move(neg)), name_(std::move(name)) {
    if (n_ < 1) throw StructuralError("algebra size must be at least 1");
    std::size_t nn = (std::size_t)n_ * n_;
    if (leq_.size() != nn) throw StructuralError("leq table has wrong dimensions");
    if (prod_.size() != nn) throw StructuralError("product table has wrong dimensions");
    for (int v : prod_)
        if (v < 0 || v >= n_) throw StructuralError("product entry out of range");
    if (one_ < 0 || one_ >= n_) throw StructuralError("unit out of range");
    if (!is_perm(tilde_, n_)) throw StructuralError("tilde is not a permutation");
    if (!is_perm(minus_, n_)) throw StructuralError("minus is not a permutation");
    if (neg_ && !is_perm(*neg_, n_)) throw StructuralError("neg is not a permutation");
    for (auto& v : leq_) v = v ? 1 : 0;
    build_lattice();
}

FinAlgebra FinAlgebra::from_matrices(const std::vector<std::vector<int>>& leq,
                                     const std::vector<std::vector<int>>& product, int one,
                                     std::vector<int> tilde, std::vector<int> minus,
                                     std::optional<std::vector<int>> neg, std::string name) {
    int n = (int)leq.size();
    std::vector<std::uint8_t> l;
    std::vector<int> p;
    for (auto& row : leq) {
        if ((int)row.size() != n) throw StructuralError("leq matrix is ragged");
        for (int v : row) {
            if (v != 0 && v != 1) throw StructuralError("leq entries must be 0 or 1");
            l.push_back((std::uint8_t)v);
        }
    }
    if ((int)product.size() != n) throw StructuralError("product matrix has wrong row count");
    for (auto& row : product) {
        if ((int)row.size() != n) throw StructuralError("product matrix is ragged");
        p.insert(p.end(), row.begin(), row.end());
    }
    return FinAlgebra(n, std::move(l), std::move(p), one, std::move(tilde), std::move(minus),
                      std::move(neg), std::move(name));
}

void FinAlgebra::build_lattice() {
    const int n = n_;
    join_.assign((std::size_t)n * n, -1);
    meet_.assign((std::size_t)n * n, -1);
    // a linear extension of leq, when one exists, lets the least upper bound
    // be found as the first common upper bound in that order
    std::vector<int> rank(n, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (leq(b, a)) ++rank[a];
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return rank[x] < rank[y]; });
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    const int W = (n + 63) / 64;
    std::vector<std::uint64_t> up((std::size_t)n * W, 0), down((std::size_t)n * W, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (leq(a, b)) up[(std::size_t)a * W + pos[b] / 64] |= bit(pos[b] % 64);
            if (leq(b, a)) down[(std::size_t)a * W + pos[b] / 64] |= bit(pos[b] % 64);
        }
    auto first = [&](const std::vector<std::uint64_t>& v) {
        for (int w = 0; w < W; ++w)
            if (v[w]) return w * 64 + std::countr_zero(v[w]);
        return -1;
    };
    auto last = [&](const std::vector<std::uint64_t>& v) {
        for (int w = W - 1; w >= 0; --w)
            if (v[w]) return w * 64 + 63 - std::countl_zero(v[w]);
        return -1;
    };
    std::vector<std::uint64_t> tmp(W);
    bool all = true;
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            for (int w = 0; w < W; ++w) tmp[w] = up[(std::size_t)a * W + w] & up[(std::size_t)b * W + w];
            int j = -1;
            int p = first(tmp);
            if (p >= 0) {
                int c = order[p];
                bool least = true;
                for (int w = 0; w < W && least; ++w)
                    if ((tmp[w] & up[(std::size_t)c * W + w]) != tmp[w]) least = false;
                if (least) j = c;
            }
            for (int w = 0; w < W; ++w) tmp[w] = down[(std::size_t)a * W + w] & down[(std::size_t)b * W + w];
            int m = -1;
            p = last(tmp);
            if (p >= 0) {
                int c = order[p];
                bool greatest = true;
                for (int w = 0; w < W && greatest; ++w)
                    if ((tmp[w] & down[(std::size_t)c * W + w]) != tmp[w]) greatest = false;
                if (greatest) m = c;
            }
            join_[a * n + b] = join_[b * n + a] = j;
            meet_[a * n + b] = meet_[b * n + a] = m;
            if (j < 0 || m < 0) all = false;
        }
    lattice_ = all;
    top_ = bottom_ = -1;
    for (int a = 0; a < n; ++a) {
        bool t = true, bo = true;
        for (int b = 0; b < n; ++b) {
            if (!leq(b, a)) t = false;
            if (!leq(a, b)) bo = false;
        }
        if (t) top_ = a;
        if (bo) bottom_ = a;
    }
}

FinAlgebra FinAlgebra::with_neg(std::optional<std::vector<int>> neg) const {
    FinAlgebra r = *this;
    if (neg && !is_perm(*neg, n_)) throw StructuralError("neg is not a permutation");
    r.neg_ = std::move(neg);
    return r;
}

std::vector<int> FinAlgebra::lower_covers(int a) const {
    std::vector<int> r;
    for (int b = 0; b < n_; ++b) {
        if (b == a || !leq(b, a)) continue;
        bool cover = true;
        for (int c = 0; c < n_ && cover; ++c)
            if (c != a && c != b && leq(b, c) && leq(c, a)) cover = false;
        if (cover) r.push_back(b);
    }
    return r;
}

std::vector<int> FinAlgebra::upper_covers(int a) const {
    std::vector<int> r;
    for (int b = 0; b < n_; ++b) {
        if (b == a || !leq(a, b)) continue;
        bool cover = true;
        for (int c = 0; c < n_ && cover; ++c)
            if (c != a && c != b && leq(a, c) && leq(c, b)) cover = false;
        if (cover) r.push_back(b);
    }
    return r;
}

ValidationReport validate_dinfl(const FinAlgebra& A) {
    ValidationReport rep;
    rep.notes.push_back("finite carrier: complete and perfect automatically");
    const int n = A.size();
    for (int a = 0; a < n; ++a)
        if (!A.leq(a, a)) rep.fail("order reflexive", {a});
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a != b && A.leq(a, b) && A.leq(b, a)) rep.fail("order antisymmetric", {a, b});
            if (!A.leq(a, b)) continue;
            for (int c = 0; c < n; ++c)
                if (A.leq(b, c) && !A.leq(a, c)) rep.fail("order transitive", {a, b, c});
        }
    bool order_ok = rep.ok();
    if (order_ok) {
        for (int a = 0; a < n; ++a)
            for (int b = a; b < n; ++b) {
                if (A.join(a, b) < 0) rep.fail("lattice join exists", {a, b});
                if (A.meet(a, b) < 0) rep.fail("lattice meet exists", {a, b});
            }
    }
    if (order_ok && A.is_lattice()) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = b; c < n; ++c) {
                    int l = A.meet(a, A.join(b, c));
                    int r = A.join(A.meet(a, b), A.meet(a, c));
                    if (l != r) rep.fail("distributive", {a, b, c});
                }
    }
    for (int a = 0; a < n; ++a) {
        if (A.mul(A.one(), a) != a) rep.fail("unit left", {a});
        if (A.mul(a, A.one()) != a) rep.fail("unit right", {a});
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            int ab = A.mul(a, b);
            for (int c = 0; c < n; ++c)
                if (A.mul(ab, c) != A.mul(a, A.mul(b, c))) rep.fail("product associative", {a, b, c});
        }
    for (int a = 0; a < n; ++a) {
        if (A.minus(A.tilde(a)) != a) rep.fail("involution -~a=a", {a});
        if (A.tilde(A.minus(a)) != a) rep.fail("involution ~-a=a", {a});
    }
    if (order_ok) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (!A.leq(a, b)) continue;
                if (!A.leq(A.tilde(b), A.tilde(a))) rep.fail("tilde order-reversing", {a, b});
                if (!A.leq(A.minus(b), A.minus(a))) rep.fail("minus order-reversing", {a, b});
            }
    }
    // residuation as a three-way biconditional
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            int ab = A.mul(a, b);
            for (int c = 0; c < n; ++c) {
                bool x = A.leq(ab, c);
                bool y = A.leq(a, A.rres(c, b));
                bool z = A.leq(b, A.lres(a, c));
                if (x != y || x != z) rep.fail("residuation", {a, b, c});
            }
        }
    return rep;
}

ValidationReport validate_dqra(const FinAlgebra& A) {
    if (!A.has_neg()) throw SignatureError("validate_dqra needs an algebra with neg");
    ValidationReport rep = validate_dinfl(A);
    const int n = A.size();
    for (int a = 0; a < n; ++a)
        if (A.neg(A.neg(a)) != a) rep.fail("neg involution", {a});
    if (A.is_lattice()) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (A.neg(A.meet(a, b)) != A.join(A.neg(a), A.neg(b))) rep.fail("neg De Morgan on meets", {a, b});
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (A.neg(A.mul(a, b)) != A.plus(A.neg(a), A.neg(b))) rep.fail("neg turns product into plus", {a, b});
    return rep;
}

ValidationReport check_di(const FinAlgebra& A) {
    if (!A.has_neg()) throw SignatureError("check_di needs an algebra with neg");
    ValidationReport rep;
    int t1 = A.tilde(A.one()), n1 = A.neg(A.one()), m1 = A.minus(A.one());
    if (t1 != n1 || n1 != m1) rep.fail("~1 = neg 1 = -1 (internal)", {t1, n1, m1});
    for (int a = 0; a < A.size(); ++a)
        if (A.neg(A.tilde(a)) != A.minus(A.neg(a))) rep.fail("neg ~a = -neg a (internal)", {a});
    return rep;
}

DerivedOps derived_ops(const FinAlgebra& A) {
    const int n = A.size();
    DerivedOps d;
    d.zero = A.zero();
    if (A.minus(A.one()) != d.zero) throw InternalError("~1 and -1 disagree");
    d.plus.resize((std::size_t)n * n);
    d.lres.resize((std::size_t)n * n);
    d.rres.resize((std::size_t)n * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            d.plus[a * n + b] = A.plus(a, b);
            if (A.plus(a, b) != A.tilde(A.mul(A.minus(b), A.minus(a))))
                throw InternalError("the two forms of + disagree");
            d.lres[a * n + b] = A.lres(a, b);
            d.rres[a * n + b] = A.rres(a, b);
        }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                bool x = A.leq(A.mul(a, b), c);
                if (x != A.leq(b, A.lres(a, c)) || x != A.leq(a, A.rres(c, b)))
                    throw InternalError("residual adjunction fails");
            }
    return d;
}

Flags classify(const FinAlgebra& A) {
    Flags f;
    f.cyclic = f.commutative = true;
    const int n = A.size();
    for (int a = 0; a < n; ++a)
        if (A.tilde(a) != A.minus(a)) f.cyclic = false;
    for (int a = 0; a < n && f.commutative; ++a)
        for (int b = 0; b < n; ++b)
            if (A.mul(a, b) != A.mul(b, a)) {
                f.commutative = false;
                break;
            }
    f.symmetric = A.has_neg() && f.cyclic;
    if (A.has_neg())
        for (int a = 0; a < n; ++a)
            if (A.neg(a) != A.tilde(a)) f.symmetric = false;
    f.odd = A.one() == A.zero();
    return f;
}

std::vector<int> join_irreducibles(const FinAlgebra& A) {
    if (!A.is_lattice()) throw PreconditionError("join_irreducibles needs a lattice");
    std::vector<int> r;
    for (int a = 0; a < A.size(); ++a)
        if (A.lower_covers(a).size() == 1) r.push_back(a);
    // completely join-prime check: j <= x v y implies j <= x or j <= y
    for (int j : r)
        for (int x = 0; x < A.size(); ++x)
            for (int y = x; y < A.size(); ++y)
                if (A.leq(j, A.join(x, y)) && !A.leq(j, x) && !A.leq(j, y))
                    throw PreconditionError("join-irreducible " + std::to_string(j) + " is not join-prime");
    return r;
}

std::vector<int> meet_irreducibles(const FinAlgebra& A) {
    if (!A.is_lattice()) throw PreconditionError("meet_irreducibles needs a lattice");
    std::vector<int> r;
    for (int a = 0; a < A.size(); ++a)
        if (A.upper_covers(a).size() == 1) r.push_back(a);
    return r;
}

int kappa(const FinAlgebra& A, int j) {
    if (!A.is_lattice()) throw PreconditionError("kappa needs a lattice");
    if (j < 0 || j >= A.size() || A.lower_covers(j).size() != 1)
        throw PreconditionError("kappa: element " + std::to_string(j) + " is not join-irreducible");
    int acc = -1;
    for (int a = 0; a < A.size(); ++a) {
        if (A.leq(j, a)) continue;
        acc = acc < 0 ? a : A.join(acc, a);
    }
    return acc;
}

FinAlgebra commutative_to_qra(const FinAlgebra& A) {
    if (!classify(A).commutative) throw PreconditionError("commutative_to_qra: product is not commutative");
    return A.with_neg(A.tilde_map());
}

bool is_central(const FinAlgebra& A, int a) {
    for (int b = 0; b < A.size(); ++b)
        if (A.mul(a, b) != A.mul(b, a)) return false;
    return true;
}

bool is_idempotent(const FinAlgebra& A, int a) { return A.mul(a, a) == a; }

FinAlgebra permute(const FinAlgebra& A, const std::vector<int>& p) {
    const int n = A.size();
    if (!is_perm(p, n)) throw PreconditionError("permute: not a permutation");
    std::vector<std::uint8_t> leq((std::size_t)n * n);
    std::vector<int> prod((std::size_t)n * n), t(n), m(n);
    std::optional<std::vector<int>> ng;
    if (A.has_neg()) ng = std::vector<int>(n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            leq[p[a] * n + p[b]] = A.leq(a, b);
            prod[p[a] * n + p[b]] = p[A.mul(a, b)];
        }
        t[p[a]] = p[A.tilde(a)];
        m[p[a]] = p[A.minus(a)];
        if (ng) (*ng)[p[a]] = p[A.neg(a)];
    }
    return FinAlgebra(n, std::move(leq), std::move(prod), p[A.one()], std::move(t), std::move(m),
                      std::move(ng), A.name());
}

namespace {

struct IsoSearch {
    const FinAlgebra& A;
    const FinAlgebra& B;
    int n;
    std::vector<int> f, finv;
    std::vector<std::vector<int>> cand;

    IsoSearch(const FinAlgebra& a, const FinAlgebra& b) : A(a), B(b), n(a.size()) {}

    static std::vector<long> invariant(const FinAlgebra& X, int a) {
        long up = 0, down = 0, sq = 0;
        for (int b = 0; b < X.size(); ++b) {
            up += X.leq(a, b);
            down += X.leq(b, a);
            sq += X.mul(b, b) == a;
        }
        return {up, down, sq, X.mul(a, a) == a, a == X.one(), X.tilde(a) == a, X.minus(a) == a,
                X.has_neg() ? X.neg(a) == a : 0, is_central(X, a)};
    }

    bool consistent(int a) {
        int fa = f[a];
        for (int b = 0; b <= a; ++b) {
            int fb = f[b];
            if (A.leq(a, b) != B.leq(fa, fb) || A.leq(b, a) != B.leq(fb, fa)) return false;
            for (int k = 0; k < 2; ++k) {
                int x = k ? a : b, y = k ? b : a;
                int c = A.mul(x, y), d = B.mul(f[x], f[y]);
                if (f[c] >= 0 ? f[c] != d : finv[d] >= 0) return false;
            }
        }
        auto unary = [&](int c, int d) { return f[c] >= 0 ? f[c] == d : finv[d] < 0; };
        if (!unary(A.tilde(a), B.tilde(fa)) || !unary(A.minus(a), B.minus(fa))) return false;
        if (A.has_neg() && !unary(A.neg(a), B.neg(fa))) return false;
        // preimages under unaries that are already mapped
        for (int b = 0; b < a; ++b) {
            if (A.tilde(b) == a && B.tilde(f[b]) != fa) return false;
            if (A.minus(b) == a && B.minus(f[b]) != fa) return false;
            if (A.has_neg() && A.neg(b) == a && B.neg(f[b]) != fa) return false;
        }
        return true;
    }

    bool rec(int a) {
        if (a == n) return true;
        for (int c : cand[a]) {
            if (finv[c] >= 0) continue;
            f[a] = c;
            finv[c] = a;
            if (consistent(a) && rec(a + 1)) return true;
            f[a] = -1;
            finv[c] = -1;
        }
        return false;
    }

    std::optional<std::vector<int>> run() {
        if (A.size() != B.size()) return std::nullopt;
        f.assign(n, -1);
        finv.assign(n, -1);
        cand.assign(n, {});
        std::vector<std::vector<long>> ib(n);
        for (int c = 0; c < n; ++c) ib[c] = invariant(B, c);
        for (int a = 0; a < n; ++a) {
            auto ia = invariant(A, a);
            for (int c = 0; c < n; ++c)
                if (ib[c] == ia) cand[a].push_back(c);
            if (cand[a].empty()) return std::nullopt;
        }
        if (!rec(0)) return std::nullopt;
        return f;
    }
};

}  // namespace

std::optional<std::vector<int>> algebra_iso(const FinAlgebra& A, const FinAlgebra& B) {
    if (A.has_neg() != B.has_neg()) throw SignatureError("algebra_iso: signatures differ (neg)");
    IsoSearch s(A, B);
    return s.run();
}

}  // namespace qra
