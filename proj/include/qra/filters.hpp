#pragma once

#include "qra/morphisms.hpp"

namespace qra {

// a frame with designated least and greatest points
struct PointedFrame {
    Frame frame;
    int bottom = -1, top = -1;
};

// empty set, whole carrier and the prime filters, sorted by (size, mask)
std::vector<Set> gen_prime_filters(const FinAlgebra& A);
bool is_gen_prime_filter(const FinAlgebra& A, Set F);

struct FilterUnaries {
    Set tilde, minus;
    std::optional<Set> neg;
};
// F^~ = {~a : a not in F}, and likewise for - and neg
FilterUnaries filter_unaries(const FinAlgebra& A, Set F);
// all generalised prime filters H with F.G inside H, as a set of filter indices
Set filter_product(const FinAlgebra& A, const std::vector<Set>& filters, Set F, Set G);

PointedFrame filter_frame(const FinAlgebra& A);
// bounded poset with I a proper non-empty upset, plus the frame conditions
ValidationReport validate_pointed_frame(const PointedFrame& W);

// algebra of proper non-empty upsets; carrier sorted by (size, mask)
FinAlgebra space_algebra(const PointedFrame& W, std::vector<Set>* carrier = nullptr);
// a -> {F : a in F} as indices into space_algebra(filter_frame(A)); throws InternalError on failure
std::vector<int> priestley_roundtrip(const FinAlgebra& A);

// F -> h^-1[F], from the filter frame of the target to that of the source;
// defined for every homomorphism, complete or not
FrameMap filter_preimage(const AlgHom& h);
// the map above is a frame morphism fixing both designated points
ValidationReport check_filter_preimage(const AlgHom& h);

}  // namespace qra
