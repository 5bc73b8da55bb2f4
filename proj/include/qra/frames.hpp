#pragma once

#include "qra/core.hpp"

namespace qra {

// Finite poset as up-sets: up[x] = {y : x <= y}
struct Poset {
    int n = 0;
    std::vector<Set> up;

    bool leq(int x, int y) const { return has(up[x], y); }
    Set down(int x) const;
    std::vector<Set> downs() const;
    bool is_upset(Set s) const;
    Set up_closure(Set s) const;
    Set down_closure(Set s) const;
    // all upsets sorted by (size, mask)
    std::vector<Set> upsets() const;
    Set minimal(Set s) const;  // minimal elements of s
    bool valid() const;        // partial order check
    static Poset from_matrix(const std::vector<std::vector<int>>& m);
    std::vector<std::vector<int>> matrix() const;
};

struct Frame {
    int n = 0;
    std::vector<Set> up;  // order as up-sets
    Set identity = 0;
    std::vector<Set> comp;  // n*n, comp[x*n+y] = x o y
    std::vector<int> tilde, minus;
    std::optional<std::vector<int>> neg;
    std::string name;

    Poset poset() const { return {n, up}; }
    bool leq(int x, int y) const { return has(up[x], y); }
    Set c(int x, int y) const { return comp[x * n + y]; }
    bool R(int x, int y, int z) const { return has(comp[x * n + y], z); }
    Set comp_sets(Set U, Set V) const;  // U o V

    // throws StructuralError on size mismatch, out-of-range indices, non-permutations
    void check_structure() const;
    Frame without_neg() const;
};

ValidationReport validate_dinfl_frame(const Frame& W);
ValidationReport validate_dqra_frame(const Frame& W);

// carrier = upsets sorted by (size, mask); the returned vector gives the upset
// for every element index
FinAlgebra complex_algebra(const Frame& W, std::vector<Set>* carrier = nullptr);

// points = join irreducibles of A in increasing index order
Frame dual_frame(const FinAlgebra& A, std::vector<int>* points = nullptr);

// psi(a) = {j : j <= a}, as indices into complex_algebra(dual_frame(A))
std::vector<int> roundtrip_algebra(const FinAlgebra& A);
// x -> up(x), as point indices of dual_frame(complex_algebra(W))
std::vector<int> roundtrip_frame(const Frame& W);

std::optional<std::vector<int>> frame_iso(const Frame& A, const Frame& B);
bool is_frame_iso(const Frame& A, const Frame& B, const std::vector<int>& f);
bool is_algebra_iso(const FinAlgebra& A, const FinAlgebra& B, const std::vector<int>& f);

// relabel: point x becomes p[x]
Frame permute(const Frame& W, const std::vector<int>& p);

}  // namespace qra
