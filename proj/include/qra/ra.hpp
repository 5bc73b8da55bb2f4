#pragma once

#include <string>

#include "qra/enumerate.hpp"

namespace qra {

// atom structure of an integral relation algebra; atom 0 is the identity
struct AtomStructure {
    int atoms = 0;
    std::vector<int> converse;
    std::vector<Set> comp;  // atoms*atoms, sets of atoms
    std::vector<std::string> names;
    int index = 0;
    std::string name;
    bool ra_representable = true;
    std::string note;

    Set c(int x, int y) const { return comp[x * atoms + y]; }
};

// the 37 nonsymmetric integral relation algebras with atoms 1, a, r, s (s = r converse)
const std::vector<AtomStructure>& builtin_atom_structures();
const AtomStructure& atom_structure(int index);  // NotFound outside 1..37
AtomStructure atom_structure_by_name(const std::string& name);  // "RA13"

// small symmetric ones used as sanity checks
AtomStructure two_element_ra();
AtomStructure one_diversity_atom_ra(bool aa_contains_a);

// checks on the lifted algebra: identity law, converse involutive and
// antimultiplicative, associativity
ValidationReport validate_atom_structure(const AtomStructure& s);

// full algebra: element = bitmask of atoms, so index = mask; neg = complement,
// tilde = minus = complement of converse
FinAlgebra ra_from_atoms(const AtomStructure& s);
int ra_converse(const AtomStructure& s, int x);

// all subsets containing 1 that are closed under join, product and tilde,
// as bitmasks over the carrier (one bit per element)
std::vector<std::uint64_t> closed_subreducts(const FinAlgebra& R);
bool closed_under_complement(const FinAlgebra& R, std::uint64_t members);

struct Subreduct {
    std::vector<int> members;       // elements of the relation algebra, increasing
    FinAlgebra algebra;             // DInFL algebra on members, in the same order
    std::vector<std::vector<int>> neg_candidates;  // admissible neg maps
    std::string poset;              // name of the dual frame's poset
    int maximal_count = 0;          // number of maximal proper closed sets found
};
std::optional<Subreduct> max_proper_qra_subreduct(const AtomStructure& s);

// upset lattice of a sum of chains, e.g. "1+1+2" -> "2x2x3"; other posets
// come back as "upsets(<name>)"
std::string lattice_shape(const std::string& poset);

enum class Family { A12, B8, None };
const char* family_name(Family f);
Family family_criteria(const AtomStructure& s);

// every closed subset of a symmetric algebra is complement closed
bool symmetric_subreduct_check(const AtomStructure& s);

// order-reversing involutions satisfying the De Morgan laws on meets and products
std::vector<std::vector<int>> neg_candidates(const FinAlgebra& A);

}  // namespace qra
