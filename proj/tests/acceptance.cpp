// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "qra/catalog.hpp"
#include "qra/enumerate.hpp"
#include "qra/filters.hpp"
#include "qra/io.hpp"
#include "qra/morphisms.hpp"
#include "qra/ra.hpp"
#include "qra/represent.hpp"

using namespace qra;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void need(bool cond, const std::string& what) {
        if (!cond) {
            if (pass) detail << "first failure: " << what << "; ";
            pass = false;
        }
    }
};

std::vector<int> iota_vec(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

Frame empty_frame(bool dqra) {
    Frame W;
    if (dqra) W.neg = std::vector<int>{};
    return W;
}

// every frame over self-dual posets whose upset lattice has at most max_upsets elements
std::vector<Frame> frames_up_to(int max_upsets, Signature sig, int max_points = 64) {
    std::vector<Frame> out{empty_frame(sig == Signature::DqRA)};
    for (int n = 2; n <= max_upsets; ++n)
        for (auto& P : posets_with_upsets(n))
            if (P.poset.n <= max_points)
                for (auto& W : enumerate_frames(P, sig).frames) out.push_back(W);
    return out;
}

const Catalog& catalog() {
    static const Catalog c = build_catalog(6);
    return c;
}

// DInFL reducts and DqRA variants of the catalog up to a size
std::vector<FinAlgebra> catalog_algebras(int max_size) {
    std::vector<FinAlgebra> out;
    for (auto& e : catalog().entries) {
        if (e.size > max_size) continue;
        out.push_back(e.algebra);
        for (auto& v : e.variants) out.push_back(v.algebra);
    }
    return out;
}

// the frame lemmas checked straight from their statements
bool frame_lemmas(const Frame& W) {
    const int n = W.n;
    for (int x = 0; x < n; ++x) {
        if (W.minus[W.tilde[x]] != x || W.tilde[W.minus[x]] != x) return false;
        for (int y = 0; y < n; ++y) {
            if (!W.leq(x, y)) continue;
            if (!W.leq(W.minus[y], W.minus[x]) || !W.leq(W.tilde[y], W.tilde[x])) return false;
            for (int w = 0; w < n; ++w)
                for (int z = 0; z < n; ++z) {
                    if (W.R(y, w, z) && !W.R(x, w, z)) return false;
                    if (W.R(w, y, z) && !W.R(w, x, z)) return false;
                }
        }
        if (W.neg) {
            const auto& g = *W.neg;
            if (g[W.tilde[x]] != W.minus[g[x]]) return false;
            if (g[W.minus[x]] != W.tilde[g[x]]) return false;
        }
    }
    return true;
}

bool algebra_lemmas(const FinAlgebra& A) {
    if (!A.has_neg()) return true;
    int o = A.one();
    if (A.tilde(o) != A.neg(o) || A.neg(o) != A.minus(o)) return false;
    for (int a = 0; a < A.size(); ++a)
        if (A.neg(A.tilde(a)) != A.minus(A.neg(a))) return false;
    return true;
}

// the three order facts about meets of preimages, evaluated directly
bool preimage_meet_facts(const AlgHom& h) {
    const auto& A = h.source;
    const auto& B = h.target;
    for (int b : join_irreducibles(B)) {
        int m = A.top();
        for (int a = 0; a < A.size(); ++a)
            if (B.leq(b, h.map[a])) m = A.meet(m, a);
        if (!B.leq(b, h.map[m])) return false;
        for (int a = 0; a < A.size(); ++a) {
            bool up = B.leq(b, h.map[a]);
            if (up && !A.leq(m, a)) return false;
            if (A.leq(m, a) && !up) return false;
        }
    }
    return true;
}

Outcome c1() {
    Outcome o;
    auto frames = frames_up_to(4, Signature::DqRA);
    auto names = bundled_frame_names();
    std::vector<bool> used(names.size(), false);
    int matched = 0;
    for (auto& W : frames) {
        int hits = 0;
        for (std::size_t i = 0; i < names.size(); ++i) {
            auto B = bundled_frame(names[i]);
            if (B.n == W.n && frame_iso(W, B)) {
                ++hits;
                o.need(!used[i], "bundled frame matched twice: " + names[i]);
                used[i] = true;
            }
        }
        o.need(hits == 1, "enumerated frame without a unique bundled match");
        matched += hits == 1;
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        o.need(used[i], "bundled frame not enumerated: " + names[i]);
        auto B = bundled_frame(names[i]);
        o.need(validate_dqra_frame(B).ok(), "bundled frame invalid: " + names[i]);
        o.need(is_frame_iso(B, dual_frame(complex_algebra(B)), roundtrip_frame(B)), "round trip " + names[i]);
    }
    o.detail << frames.size() << " enumerated, " << names.size() << " bundled, " << matched << " matched";
    return o;
}

Outcome c2() {
    Outcome o;
    struct Row {
        const char* p;
        std::size_t d, q;
    };
    for (auto r : {Row{"1", 1, 1}, Row{"2", 2, 2}, Row{"1+1", 5, 6}, Row{"3", 4, 4}, Row{"4", 8, 8},
                   Row{"1+2", 10, 10}, Row{"2x2", 16, 23}, Row{"bowtie", 11, 12}}) {
        auto P = named_poset(r.p);
        auto d = enumerate_frames(P, Signature::DInFL).count();
        auto q = enumerate_frames(P, Signature::DqRA).count();
        o.need(d == r.d && q == r.q, std::string("counts for ") + r.p);
        o.detail << r.p << ":" << d << "/" << q << " ";
    }
    return o;
}

Outcome c3() {
    Outcome o;
    long d[] = {1, 1, 2, 9, 8, 43}, q[] = {1, 1, 2, 10, 8, 50};
    for (int n = 1; n <= 6; ++n) {
        auto c = count_algebras(n);
        o.need(c.dinfl == d[n - 1] && c.dqra == q[n - 1], "size " + std::to_string(n));
        o.detail << n << ":" << c.dinfl << "/" << c.dqra << " ";
    }
    return o;
}

Outcome c4() {
    Outcome o;
    long nf = 0, na = 0;
    for (auto sig : {Signature::DInFL, Signature::DqRA}) {
        // frames on posets with at most four points
        std::vector<Frame> fs{empty_frame(sig == Signature::DqRA)};
        for (auto& P : enumerate_posets(4))
            if (P.self_dual)
                for (auto& W : enumerate_frames(P, sig).frames) fs.push_back(W);
        for (auto& W : fs) {
            ++nf;
            try {
                o.need(is_frame_iso(W, dual_frame(complex_algebra(W)), roundtrip_frame(W)), "frame round trip");
            } catch (const InternalError& e) {
                o.need(false, e.what());
            }
        }
        // algebras of size at most six
        for (auto& W : frames_up_to(6, sig)) {
            auto A = complex_algebra(W);
            ++na;
            try {
                o.need(is_algebra_iso(A, complex_algebra(dual_frame(A)), roundtrip_algebra(A)), "algebra round trip");
            } catch (const InternalError& e) {
                o.need(false, e.what());
            }
        }
    }
    o.detail << nf << " frames, " << na << " algebras";
    return o;
}

Outcome c5() {
    Outcome o;
    long nf = 0, na = 0, nh = 0;
    for (auto sig : {Signature::DInFL, Signature::DqRA})
        for (auto& W : frames_up_to(6, sig)) {
            ++nf;
            o.need(frame_lemmas(W), "frame lemma");
            auto A = complex_algebra(W);
            ++na;
            o.need(algebra_lemmas(A), "algebra lemma");
            if (A.has_neg()) o.need(check_di(A).ok(), "check_di");
        }
    auto algs = catalog_algebras(4);
    for (auto& A : algs)
        for (auto& B : algs) {
            if (A.has_neg() != B.has_neg()) continue;
            for (auto& h : enumerate_homs(A, B)) {
                if (!preserves_bounds(h)) continue;
                ++nh;
                o.need(preimage_meet_facts(h), "preimage meet facts");
                o.need(check_hom_dual_lemmas(h).ok(), "check_hom_dual_lemmas");
            }
        }
    o.detail << nf << " frames, " << na << " algebras, " << nh << " complete homomorphisms";
    return o;
}

Outcome c6() {
    Outcome o;
    auto algs = catalog_algebras(4);
    long homs = 0, complete = 0, fms = 0;
    for (auto& A : algs)
        for (auto& B : algs) {
            if (A.has_neg() != B.has_neg()) continue;
            for (auto& h : enumerate_homs(A, B, 1000000)) {
                ++homs;
                o.need(validate_homomorphism(h).ok(), "homomorphism invalid");
                if (!preserves_bounds(h)) {
                    o.need(check_filter_preimage(h).ok(), "filter preimage");
                    continue;
                }
                ++complete;
                auto f = hom_dual(h);
                o.need(validate_frame_morphism(f).ok(), "dual not a frame morphism");
                if (is_injective(h.map)) o.need(is_surjective(f.map, f.target.n), "injective -> surjective");
                if (is_surjective(h.map, B.size())) o.need(is_order_embedding(f), "surjective -> embedding");
            }
        }
    std::vector<Frame> frames;
    for (auto& e : catalog().entries) {
        if (e.size > 4) continue;
        frames.push_back(e.frame);
        for (auto& v : e.variants) frames.push_back(v.frame);
    }
    for (auto& W1 : frames)
        for (auto& W2 : frames) {
            if (W1.neg.has_value() != W2.neg.has_value()) continue;
            for (auto& f : enumerate_frame_morphisms(W1, W2, 1000000)) {
                ++fms;
                auto h = frame_morphism_dual(f);
                o.need(validate_homomorphism(h).ok(), "dual not a homomorphism");
                if (is_surjective(f.map, W2.n)) o.need(is_injective(h.map), "surjective -> injective");
                if (is_order_embedding(f)) o.need(is_surjective(h.map, h.target.size()), "embedding -> surjective");
            }
        }
    o.detail << homs << " homomorphisms (" << complete << " complete), " << fms << " frame morphisms";
    return o;
}

Outcome c7() {
    Outcome o;
    long n = 0;
    for (auto& A : catalog_algebras(6)) {
        ++n;
        auto P = filter_frame(A);
        o.need(validate_pointed_frame(P).ok(), "pointed frame " + A.name());
        Set I = P.frame.identity;
        o.need(I != 0 && I != full_set(P.frame.n) && P.frame.poset().is_upset(I), "identity set " + A.name());
        try {
            auto psi = priestley_roundtrip(A);
            o.need(is_algebra_iso(A, space_algebra(P), psi), "space algebra " + A.name());
        } catch (const InternalError& e) {
            o.need(false, e.what());
        }
    }
    o.detail << n << " algebras";
    return o;
}

Outcome c8() {
    Outcome o;
    std::set<int> A = {1, 2, 5, 6, 7, 8, 11, 12, 14, 15, 16, 17, 20, 21, 22, 31, 32, 33, 36, 37};
    std::set<int> B = {13, 19, 23, 24, 25, 26, 27, 28, 29, 30};
    std::set<int> N = {3, 4, 9, 10, 18, 34, 35};
    std::set<int> ga, gb, gn;
    for (auto& s : builtin_atom_structures()) {
        Family f = family_criteria(s);
        (f == Family::A12 ? ga : f == Family::B8 ? gb : gn).insert(s.index);
        auto sub = max_proper_qra_subreduct(s);
        Family g = !sub ? Family::None : sub->members.size() == 12 && sub->poset == "1+1+2" ? Family::A12
                   : sub->members.size() == 8 && sub->poset == "1+3"                   ? Family::B8
                                                                                         : Family::None;
        if (sub && g == Family::None) o.need(false, "unexpected subreduct shape at " + std::to_string(s.index));
        o.need(f == g, "disagreement at " + std::to_string(s.index));
    }
    o.need(ga == A && gb == B && gn == N, "index sets");
    auto s19 = max_proper_qra_subreduct(atom_structure(19));
    auto s30 = max_proper_qra_subreduct(atom_structure(30));
    o.need(s19 && s30 && algebra_iso(s19->algebra, s30->algebra).has_value(), "19/30 isomorphic");
    o.detail << ga.size() << "/" << gb.size() << "/" << gn.size();
    return o;
}

Outcome c9() {
    Outcome o;
    long bases = 0, lemma = 0;
    for (int k = 1; k <= 3; ++k)
        for (bool with_beta : {false, true})
            for (auto& b : enumerate_bases(k, with_beta, true, false)) {
                ++bases;
                DqE d(b);
                std::vector<Rel> carrier;
                auto A = build_dq(b, &carrier);
                o.need((with_beta ? validate_dqra(A) : validate_dinfl(A)).ok(), "validation");
                Rel le = 0, zero = 0;
                for (int x = 0; x < k; ++x)
                    for (int y = 0; y < k; ++y) {
                        if (b.leq(x, y)) le |= d.pair_bit(x, y);
                        // x alpha y', then (y',y) in the converse of the complement of <=
                        int a = b.alpha[x];
                        if (b.in_E(y, a) && !b.leq(y, a)) zero |= d.pair_bit(x, y);
                    }
                o.need(carrier[A.one()] == le, "unit is the order");
                o.need(carrier[A.zero()] == zero, "zero formula");
                bool id = b.alpha == iota_vec(k);
                o.need(classify(A).cyclic == id, "cyclic iff alpha is the identity");
                std::vector<std::vector<int>> gammas{b.alpha};
                if (b.beta) {
                    gammas.push_back(*b.beta);
                    std::vector<int> ab(k);
                    for (int x = 0; x < k; ++x) ab[x] = (*b.beta)[b.alpha[x]];
                    gammas.push_back(ab);
                }
                const auto& pr = d.pairs();
                for (std::uint32_t m = 0; m < (1u << pr.size()); ++m) {
                    Rel R = 0;
                    for (std::size_t i = 0; i < pr.size(); ++i)
                        if ((m >> i) & 1) R |= d.pair_bit(pr[i].first, pr[i].second);
                    for (auto& g : gammas) {
                        auto [l, r] = bijection_complement_check(b, g, R);
                        ++lemma;
                        o.need(l && r, "complement identity");
                    }
                }
            }
    o.detail << bases << " bases, " << lemma << " complement checks";
    return o;
}

Outcome c10() {
    Outcome o;
    std::map<std::string, const CatalogVariant*> vs;
    for (auto& e : catalog().entries)
        for (auto& v : e.variants) vs[v.name] = &v;
    RepOptions opt;
    opt.max_points = 1;
    auto r = representation_search(vs.at("D2_1_1")->algebra, opt);
    o.need(r.found && r.certificate["base"]["points"].get<int>() <= 1, "boolean certificate");
    if (r.found) o.need(verify_certificate(vs.at("D2_1_1")->algebra, r.certificate).ok(), "certificate verifies");
    for (auto nm : {"D3_1_1", "D4_1_1", "D4_1_2"})
        o.need(no_finite_rep_filter(vs.at(nm)->algebra).has_value(), std::string("filter misses ") + nm);
    int inf = 0, fin = 0, flagged_other = 0;
    for (auto& [nm, v] : vs) {
        if (!v->rep) {
            o.need(false, "missing annotation " + nm);
            continue;
        }
        bool flagged = no_finite_rep_filter(v->algebra).has_value();
        if (v->rep->cls == "infinite_only") {
            ++inf;
            o.need(flagged, "filter misses " + nm);
        } else if (v->rep->cls == "finite") {
            ++fin;
            o.need(!flagged, "filter flags finitely representable " + nm);
        } else if (flagged) {
            ++flagged_other;
        }
    }
    o.detail << inf << " must-be-infinite flagged, " << fin << " finite unflagged, " << flagged_other
             << " others flagged";
    return o;
}

}  // namespace

int main() {
    struct Crit {
        int id;
        std::function<Outcome()> run;
        double limit_s;  // 0 = none
    };
    std::vector<Crit> crits = {{1, c1, 5},  {2, c2, 60},  {3, c3, 300}, {4, c4, 0},  {5, c5, 0},
                               {6, c6, 0},  {7, c7, 0},   {8, c8, 30},  {9, c9, 120}, {10, c10, 0}};
    // the catalog is shared; build it outside the timed sections
    catalog();
    int failed = 0;
    for (auto& c : crits) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_time = c.limit_s == 0 || s < c.limit_s;
        bool ok = o.pass && in_time;
        failed += !ok;
        std::printf("criterion %d: %s (%.2fs%s) %s\n", c.id, ok ? "PASS" : "FAIL", s,
                    in_time ? "" : ", over time limit", o.detail.str().c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
