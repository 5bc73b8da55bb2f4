#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "qra/frames.hpp"

namespace qra {

struct PosetShape {
    Poset poset;
    std::string name;
    std::string certificate;
    bool self_dual = false;
    int upset_count = 0;
};

std::string poset_certificate(const Poset& P);
std::string poset_name(const Poset& P);
PosetShape make_shape(const Poset& P);
// all nonisomorphic posets with 1..k points, by size then certificate
std::vector<PosetShape> enumerate_posets(int k);
// "1", "2x2", "bowtie", "1+1+2", ...; throws NotFound
PosetShape named_poset(const std::string& name);
// the named self-dual shapes with at most 8 upsets, in table order
std::vector<std::string> figure_poset_names();

std::vector<std::vector<int>> automorphisms(const Poset& P);
std::vector<std::vector<int>> anti_automorphisms(const Poset& P);
std::vector<std::vector<int>> poset_isos(const Poset& A, const Poset& B, bool first_only = false);

enum class Signature { DInFL, DqRA };
const char* signature_name(Signature s);

struct SearchOptions {
    int jobs = 1;
    long budget_ms = 0;   // 0 = unlimited; see budget_from_env
    long node_budget = 0; // 0 = unlimited
    std::size_t start_task = 0;
};
long budget_from_env();  // QRA_BUDGET_MS or 0

struct SearchStats {
    long nodes = 0;
    long prunes = 0;
    double wall_ms = 0;
    std::size_t tasks = 0;
};

struct EnumerationResult {
    std::string poset_name;
    Signature signature = Signature::DInFL;
    std::vector<Frame> frames;
    SearchStats stats;
    std::size_t count() const { return frames.size(); }
};

EnumerationResult enumerate_frames(const PosetShape& P, Signature sig, const SearchOptions& opt = {});

struct AlgebraCounts {
    long dinfl = 0;
    long dqra = 0;
    std::vector<std::pair<std::string, std::pair<long, long>>> by_poset;
};
AlgebraCounts count_algebras(int n, const SearchOptions& opt = {});

// self-dual posets (up to iso) whose upset lattice has exactly n elements
std::vector<PosetShape> posets_with_upsets(int n);

// canonical key used for isomorphism rejection; equal keys mean equal frames
std::vector<std::uint64_t> frame_key(const Frame& W);

}  // namespace qra
