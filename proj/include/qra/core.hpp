#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qra {

// element sets over carriers of at most 64 points
using Set = std::uint64_t;

inline int popcount(Set s) { return std::popcount(s); }
inline bool has(Set s, int i) { return (s >> i) & 1u; }
inline Set bit(int i) { return Set{1} << i; }
inline Set full_set(int n) { return n >= 64 ? ~Set{0} : (bit(n) - 1); }

template <class F>
inline void for_bits(Set s, F&& f) {
    while (s) {
        int i = std::countr_zero(s);
        f(i);
        s &= s - 1;
    }
}

// exception hierarchy; the cli maps these to exit codes
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StructuralError : Error {
    using Error::Error;
};
struct SignatureError : Error {
    using Error::Error;
};
struct PreconditionError : Error {
    using Error::Error;
};
struct NotFound : Error {
    using Error::Error;
};
struct InternalError : Error {
    using Error::Error;
};
struct BudgetExceeded : Error {
    std::string checkpoint;  // json text describing where to resume
    BudgetExceeded(const std::string& what, std::string cp)
        : Error(what), checkpoint(std::move(cp)) {}
};

struct Failure {
    std::string law;
    std::vector<int> witness;
};

struct ValidationReport {
    std::vector<Failure> failures;
    std::vector<std::string> notes;
    std::size_t dropped = 0;  // failures beyond the per-law cap

    bool ok() const { return failures.empty(); }
    void fail(const std::string& law, std::vector<int> witness);
    void merge(const ValidationReport& other);
    bool has_law(const std::string& law) const;
    std::string str() const;
};

class FinAlgebra {
public:
    FinAlgebra() = default;
    // throws StructuralError for bad dimensions, indices or non-permutations
    FinAlgebra(int n, std::vector<std::uint8_t> leq, std::vector<int> product, int one,
               std::vector<int> tilde, std::vector<int> minus,
               std::optional<std::vector<int>> neg = std::nullopt, std::string name = {});

    static FinAlgebra from_matrices(const std::vector<std::vector<int>>& leq,
                                    const std::vector<std::vector<int>>& product, int one,
                                    std::vector<int> tilde, std::vector<int> minus,
                                    std::optional<std::vector<int>> neg = std::nullopt,
                                    std::string name = {});

    int size() const { return n_; }
    bool leq(int a, int b) const { return leq_[a * n_ + b] != 0; }
    int mul(int a, int b) const { return prod_[a * n_ + b]; }
    int one() const { return one_; }
    int tilde(int a) const { return tilde_[a]; }
    int minus(int a) const { return minus_[a]; }
    bool has_neg() const { return neg_.has_value(); }
    int neg(int a) const { return (*neg_)[a]; }

    const std::vector<int>& tilde_map() const { return tilde_; }
    const std::vector<int>& minus_map() const { return minus_; }
    const std::optional<std::vector<int>>& neg_map() const { return neg_; }
    const std::vector<int>& product_table() const { return prod_; }
    const std::vector<std::uint8_t>& leq_table() const { return leq_; }

    const std::string& name() const { return name_; }
    void set_name(std::string s) { name_ = std::move(s); }

    // lattice structure; join/meet return -1 when no bound exists
    bool is_lattice() const { return lattice_; }
    int join(int a, int b) const { return join_[a * n_ + b]; }
    int meet(int a, int b) const { return meet_[a * n_ + b]; }
    int top() const { return top_; }
    int bottom() const { return bottom_; }

    // derived operations
    int zero() const { return tilde_[one_]; }
    int plus(int a, int b) const { return minus_[mul(tilde_[b], tilde_[a])]; }
    int rres(int c, int b) const { return minus_[mul(b, tilde_[c])]; }
    int lres(int a, int c) const { return tilde_[mul(minus_[c], a)]; }

    FinAlgebra with_neg(std::optional<std::vector<int>> neg) const;

    // elements strictly below / covers
    std::vector<int> lower_covers(int a) const;
    std::vector<int> upper_covers(int a) const;

private:
    void build_lattice();

    int n_ = 0;
    std::vector<std::uint8_t> leq_;
    std::vector<int> prod_;
    int one_ = 0;
    std::vector<int> tilde_, minus_;
    std::optional<std::vector<int>> neg_;
    std::string name_;
    bool lattice_ = false;
    std::vector<int> join_, meet_;
    int top_ = -1, bottom_ = -1;
};

ValidationReport validate_dinfl(const FinAlgebra& A);
ValidationReport validate_dqra(const FinAlgebra& A);
// ~1 = neg 1 = -1 and neg ~a = - neg a; these follow from the axioms, so a
// failure means a bug elsewhere rather than bad input
ValidationReport check_di(const FinAlgebra& A);

struct DerivedOps {
    int zero = 0;
    std::vector<int> plus, lres, rres;  // n*n tables
};
DerivedOps derived_ops(const FinAlgebra& A);

struct Flags {
    bool cyclic = false, commutative = false, symmetric = false, odd = false;
};
Flags classify(const FinAlgebra& A);

std::vector<int> join_irreducibles(const FinAlgebra& A);
std::vector<int> meet_irreducibles(const FinAlgebra& A);
int kappa(const FinAlgebra& A, int j);

FinAlgebra commutative_to_qra(const FinAlgebra& A);

// lexicographically least isomorphism A -> B, if any
std::optional<std::vector<int>> algebra_iso(const FinAlgebra& A, const FinAlgebra& B);

// relabel: element a of A becomes perm[a]
FinAlgebra permute(const FinAlgebra& A, const std::vector<int>& perm);

bool is_central(const FinAlgebra& A, int a);
bool is_idempotent(const FinAlgebra& A, int a);

}  // namespace qra
