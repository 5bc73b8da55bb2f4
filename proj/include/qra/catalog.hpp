#pragma once

#include <string>

#include "qra/enumerate.hpp"
#include "qra/io.hpp"

namespace qra {

// one node of a drawn Hasse diagram; covers are upper covers
struct DiagramNode {
    std::string style;  // i, c, nci, nc
    std::string label;  // '='-separated terms
    std::vector<int> covers;
};

struct Diagram {
    std::string name;
    int size = 0;
    std::vector<DiagramNode> nodes;
};

const std::vector<Diagram>& catalog_diagrams();

// "i" central idempotent, "c" central, "nci" idempotent, "nc" neither
std::string element_style(const FinAlgebra& A, int a);

// all node -> element maps that are order isomorphisms agreeing with the
// drawn styles and labels; letters a..d are bound consistently
std::vector<std::vector<int>> diagram_bindings(const Diagram& D, const FinAlgebra& A);

// letter -> element under a binding; -1 when the letter is absent
std::vector<int> letter_values(const Diagram& D, const std::vector<int>& binding);

// "neg=tilde", or "neg s=t" for the first letter s whose neg and tilde differ
std::string describe_neg(const Diagram& D, const FinAlgebra& A, const std::vector<int>& binding);

struct RepAnnotation {
    std::string cls;  // infinite_only, finite, known, construction, open
    std::string status;
};
// keyed by catalog name and neg description; NotFound when absent
RepAnnotation representability(const std::string& name, const std::string& neg);

struct CatalogVariant {
    std::string name;  // entry name, or entry name + "[neg s=t]" beside a neg=tilde sibling
    std::string neg;
    FinAlgebra algebra;  // the DqRA
    Frame frame;
    std::optional<RepAnnotation> rep;
};

struct CatalogEntry {
    std::string name;
    int size = 0;
    std::string poset;
    FinAlgebra algebra;  // DInFL reduct
    Frame frame;
    std::vector<int> binding;       // diagram node -> element
    std::vector<std::string> candidates;  // every diagram the algebra matches
    bool ambiguous = false;
    std::vector<CatalogVariant> variants;
};

struct Catalog {
    std::vector<CatalogEntry> entries;
    std::vector<std::string> problems;  // unmatched algebras or diagrams, ambiguities
};

Catalog build_catalog(int max_size, const SearchOptions& opt = {});
Json catalog_to_json(const Catalog& c);

}  // namespace qra
