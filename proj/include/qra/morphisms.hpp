#pragma once

#include "qra/frames.hpp"

namespace qra {

struct FrameMap {
    Frame source, target;
    std::vector<int> map;
};

struct AlgHom {
    FinAlgebra source, target;
    std::vector<int> map;
};

ValidationReport validate_frame_morphism(const FrameMap& f);
// preimage map on upsets, as an algebra map complex(target) -> complex(source)
AlgHom frame_morphism_dual(const FrameMap& f);

ValidationReport validate_homomorphism(const AlgHom& h);
// meet of {a : b <= h(a)}; the empty meet is the top
int hom_dual_value(const AlgHom& h, int b);
// b -> hom_dual_value(h, b) on join irreducibles: dual_frame(target) -> dual_frame(source).
// Needs a complete homomorphism (bounds preserved); PreconditionError otherwise.
FrameMap hom_dual(const AlgHom& h);
bool preserves_bounds(const AlgHom& h);

// all homomorphisms A -> B, lexicographic by image sequence; node_budget 0 = unlimited
std::vector<AlgHom> enumerate_homs(const FinAlgebra& A, const FinAlgebra& B, long node_budget = 0);
std::vector<FrameMap> enumerate_frame_morphisms(const Frame& W1, const Frame& W2, long node_budget = 0);

bool is_injective(const std::vector<int>& f);
bool is_surjective(const std::vector<int>& f, int target_size);
bool is_order_embedding(const FrameMap& f);

// the three order facts tying h to its dual, checked elementwise
ValidationReport check_hom_dual_lemmas(const AlgHom& h);

}  // namespace qra
