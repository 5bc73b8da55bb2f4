#pragma once

#include <string>
#include <utility>

#include "qra/frames.hpp"
#include "qra/io.hpp"
#include "qra/morphisms.hpp"

namespace qra {

// poset X with an equivalence E containing the order, an order automorphism
// alpha and optionally a self-inverse dual order automorphism beta
struct RepBase {
    int points = 0;
    std::vector<Set> up;  // order on X as up-sets
    std::vector<Set> E;   // E[x] = class of x
    std::vector<int> alpha;
    std::optional<std::vector<int>> beta;

    bool leq(int x, int y) const { return has(up[x], y); }
    bool in_E(int x, int y) const { return has(E[x], y); }
};

// throws StructuralError / PreconditionError naming the broken condition
void check_base(const RepBase& b);
Json base_to_json(const RepBase& b);
RepBase base_from_json(const Json& j);

// a binary relation on X as a bitmask over pairs: bit x*points+y
using Rel = std::uint64_t;

class DqE {
public:
    explicit DqE(RepBase base);  // at most 8 points

    const RepBase& base() const { return b_; }
    int points() const { return N_; }
    Rel pair_bit(int x, int y) const { return Rel{1} << (x * N_ + y); }
    Rel E() const { return E_; }
    // E pairs in increasing bit order
    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }

    Rel compose(Rel R, Rel S) const;
    Rel converse(Rel R) const;
    Rel complement(Rel R) const { return E_ & ~R; }
    Rel graph(const std::vector<int>& f) const;
    Rel unit() const { return leq_; }
    Rel zero() const;  // alpha ; (complement of <=) converse
    Rel tilde(Rel R) const;
    Rel minus(Rel R) const;
    Rel neg(Rel R) const;  // needs beta
    bool is_upset(Rel R) const;
    // the twisted order on E pairs, indexed as pairs()
    Poset twist_order() const;
    // upsets of the twisted order, sorted by (size, mask); PreconditionError
    // when more than cap exist
    std::vector<Rel> upsets(std::size_t cap) const;
    std::size_t count_upsets(std::size_t cap) const;  // returns cap+1 when over

private:
    RepBase b_;
    int N_;
    Rel E_ = 0, leq_ = 0, alpha_ = 0, beta_ = 0;
    std::vector<std::pair<int, int>> pairs_;
};

Poset twist_order(const RepBase& b);

constexpr std::size_t kDefaultUpsetCap = std::size_t{1} << 16;
constexpr std::size_t kTableLimit = 4096;  // largest carrier build_dq will tabulate

// algebra of upsets of E; neg present iff beta is
FinAlgebra build_dq(const RepBase& b, std::vector<Rel>* carrier = nullptr, std::size_t cap = kDefaultUpsetCap);

// complements commute with composing by a bijection gamma inside E
std::pair<bool, bool> bijection_complement_check(const RepBase& b, const std::vector<int>& gamma, Rel R);

// injective homomorphism A -> B if one exists
std::optional<AlgHom> embed_search(const FinAlgebra& A, const FinAlgebra& B, long node_budget = 0);

// element with zero < a < one and a.a <= zero
std::optional<int> no_finite_rep_filter(const FinAlgebra& A);

struct RepOptions {
    int max_points = 2;
    bool full_E_only = false;
    bool alpha_id_only = false;
    std::size_t upset_cap = kDefaultUpsetCap;
    long budget_ms = 0;
    int jobs = 1;
    bool use_filter = true;
};

struct RepResult {
    bool found = false;
    bool skipped = false;  // filter proved no finite representation
    std::optional<int> filter_witness;
    Json certificate;      // base plus images of every element, as pair lists
    long bases_tried = 0, bases_over_cap = 0;
    Json summary() const;
};

RepResult representation_search(const FinAlgebra& A, const RepOptions& opt = {});

// re-checks a certificate from scratch with set-based relations
ValidationReport verify_certificate(const FinAlgebra& A, const Json& certificate);

// every base on posets of the given size: E from finest to X^2, admissible alpha, beta
std::vector<RepBase> enumerate_bases(int points, bool need_beta, bool full_E_only, bool alpha_id_only);

}  // namespace qra
