#include "qra/ra.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_set>

#include "qra/io.hpp"

namespace qra {

namespace {

Set parse_atoms(const std::string& s, const std::vector<std::string>& names) {
    Set m = 0;
    for (char ch : s) {
        auto it = std::find(names.begin(), names.end(), std::string(1, ch));
        if (it == names.end()) throw StructuralError(std::string("unknown atom '") + ch + "'");
        m |= bit((int)(it - names.begin()));
    }
    return m;
}

Set lift(const AtomStructure& s, Set x, Set y) {
    Set r = 0;
    for_bits(x, [&](int i) { for_bits(y, [&](int k) { r |= s.c(i, k); }); });
    return r;
}

Set conv_set(const AtomStructure& s, Set x) {
    Set r = 0;
    for_bits(x, [&](int i) { r |= bit(s.converse[i]); });
    return r;
}

}  // namespace

const std::vector<AtomStructure>& builtin_atom_structures() {
    static std::once_flag once;
    static std::vector<AtomStructure> v;
    std::call_once(once, [] {
        Json j = parse_json_text(bundled_text("atom_structures.json"), "atom_structures.json");
        std::vector<std::string> names = j.at("atoms").get<std::vector<std::string>>();
        std::vector<std::string> conv = j.at("converse").get<std::vector<std::string>>();
        for (auto& e : j.at("structures")) {
            AtomStructure s;
            s.atoms = 4;
            s.names = names;
            for (auto& c : conv) s.converse.push_back(std::countr_zero(parse_atoms(c, names)));
            s.comp.assign(16, 0);
            for (int x = 0; x < 4; ++x) {
                s.comp[x] = bit(x);
                s.comp[x * 4] = bit(x);
            }
            for (int x = 1; x < 4; ++x) {
                auto row = e.at(names[x]).get<std::vector<std::string>>();
                if (row.size() != 3) throw StructuralError("atom structure row must have three entries");
                for (int y = 1; y < 4; ++y) s.comp[x * 4 + y] = parse_atoms(row[y - 1], names);
            }
            s.index = e.at("index").get<int>();
            s.name = e.at("name").get<std::string>();
            s.ra_representable = e.at("ra_representable").get<bool>();
            s.note = e.at("note").get<std::string>();
            v.push_back(std::move(s));
        }
    });
    return v;
}

const AtomStructure& atom_structure(int index) {
    for (auto& s : builtin_atom_structures())
        if (s.index == index) return s;
    throw NotFound("no atom structure with index " + std::to_string(index));
}

AtomStructure atom_structure_by_name(const std::string& name) {
    for (auto& s : builtin_atom_structures())
        if (s.name == name) return s;
    throw NotFound("no atom structure named " + name);
}

AtomStructure two_element_ra() {
    AtomStructure s;
    s.atoms = 1;
    s.converse = {0};
    s.comp = {1};
    s.names = {"1"};
    s.name = "RA_2";
    return s;
}

AtomStructure one_diversity_atom_ra(bool aa_contains_a) {
    AtomStructure s;
    s.atoms = 2;
    s.converse = {0, 1};
    s.comp = {bit(0), bit(1), bit(1), aa_contains_a ? Set{3} : Set{1}};
    s.names = {"1", "a"};
    s.name = aa_contains_a ? "RA_4_complete" : "RA_4_group";
    return s;
}

int ra_converse(const AtomStructure& s, int x) { return (int)conv_set(s, (Set)x); }

ValidationReport validate_atom_structure(const AtomStructure& s) {
    ValidationReport r;
    const int k = s.atoms;
    if ((int)s.converse.size() != k || (int)s.comp.size() != k * k) throw StructuralError("atom structure: bad table sizes");
    Set all = full_set(k);
    for (int x = 0; x < k; ++x) {
        if (s.converse[x] < 0 || s.converse[x] >= k) throw StructuralError("atom structure: converse out of range");
        if (s.converse[s.converse[x]] != x) r.fail("converse involutive", {x});
        if (s.c(0, x) != bit(x) || s.c(x, 0) != bit(x)) r.fail("identity law", {x});
        for (int y = 0; y < k; ++y) {
            if ((s.c(x, y) & ~all) != 0) throw StructuralError("atom structure: product outside the atoms");
            if (conv_set(s, s.c(x, y)) != s.c(s.converse[y], s.converse[x])) r.fail("converse reverses products", {x, y});
            // cycle law: z in x;y iff y in x^;z
            for (int z = 0; z < k; ++z)
                if (has(s.c(x, y), z) != has(s.c(s.converse[x], z), y)) r.fail("cycle law", {x, y, z});
        }
    }
    for (Set x = 1; x <= all; ++x)
        for (Set y = 1; y <= all; ++y)
            for (Set z = 1; z <= all; ++z)
                if (popcount(x) == 1 && popcount(y) == 1 && popcount(z) == 1 &&
                    lift(s, lift(s, x, y), z) != lift(s, x, lift(s, y, z)))
                    r.fail("associativity", {std::countr_zero(x), std::countr_zero(y), std::countr_zero(z)});
    return r;
}

FinAlgebra ra_from_atoms(const AtomStructure& s) {
    if (s.atoms > 6) throw PreconditionError("ra_from_atoms: at most 6 atoms");
    const int n = 1 << s.atoms;
    Set all = full_set(s.atoms);
    std::vector<std::uint8_t> leq(n * n);
    std::vector<int> prod(n * n), tilde(n), neg(n);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            leq[x * n + y] = ((Set)x & ~(Set)y) == 0;
            prod[x * n + y] = (int)lift(s, (Set)x, (Set)y);
        }
        neg[x] = (int)(all & ~(Set)x);
        tilde[x] = (int)(all & ~conv_set(s, (Set)x));
    }
    std::string nm = s.name.empty() ? "RA" : s.name;
    return FinAlgebra(n, leq, prod, 1, tilde, tilde, neg, nm);
}

std::vector<std::uint64_t> closed_subreducts(const FinAlgebra& R) {
    const int n = R.size();
    if (n > 64) throw PreconditionError("closed_subreducts: at most 64 elements");
    auto close = [&](std::uint64_t m) {
        for (;;) {
            std::uint64_t add = 0;
            for_bits(m, [&](int a) {
                add |= bit(R.tilde(a)) | bit(R.minus(a));
                for_bits(m, [&](int b) { add |= bit(R.join(a, b)) | bit(R.mul(a, b)); });
            });
            if ((add & ~m) == 0) return m;
            m |= add;
        }
    };
    std::uint64_t start = close(bit(R.one()));
    std::unordered_set<std::uint64_t> seen{start};
    std::vector<std::uint64_t> stack{start}, out;
    while (!stack.empty()) {
        std::uint64_t m = stack.back();
        stack.pop_back();
        out.push_back(m);
        for (int a = 0; a < n; ++a) {
            if (has(m, a)) continue;
            std::uint64_t c = close(m | bit(a));
            if (seen.insert(c).second) stack.push_back(c);
        }
    }
    std::sort(out.begin(), out.end(), [](std::uint64_t a, std::uint64_t b) {
        return popcount(a) != popcount(b) ? popcount(a) < popcount(b) : a < b;
    });
    return out;
}

bool closed_under_complement(const FinAlgebra& R, std::uint64_t members) {
    if (!R.has_neg()) throw SignatureError("closed_under_complement: needs the Boolean complement as neg");
    bool ok = true;
    for_bits(members, [&](int a) {
        if (!has(members, R.neg(a))) ok = false;
    });
    return ok;
}

std::vector<std::vector<int>> neg_candidates(const FinAlgebra& A) {
    const int n = A.size();
    std::vector<std::vector<int>> out;
    std::vector<int> p(n, -1);
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, int a) -> void {
        if (a == n) {
            FinAlgebra B = A.with_neg(p);
            if (validate_dqra(B).ok()) out.push_back(p);
            return;
        }
        if (p[a] >= 0) {
            self(self, a + 1);
            return;
        }
        for (int b = a; b < n; ++b) {
            if (used[b] || p[b] >= 0) continue;
            // involution: set both directions, check order reversal so far
            p[a] = b;
            p[b] = a;
            bool ok = true;
            for (int c = 0; c < n && ok; ++c) {
                if (p[c] < 0) continue;
                for (int d = 0; d < n && ok; ++d)
                    if (p[d] >= 0 && A.leq(c, d) != A.leq(p[d], p[c])) ok = false;
            }
            if (ok) {
                used[a] = used[b] = 1;
                self(self, a + 1);
                used[a] = used[b] = 0;
            }
            p[a] = -1;
            p[b] = -1;
        }
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<Subreduct> max_proper_qra_subreduct(const AtomStructure& s) {
    FinAlgebra R = ra_from_atoms(s);
    auto closed = closed_subreducts(R);
    std::vector<std::uint64_t> proper;
    for (auto m : closed)
        if (!closed_under_complement(R, m)) proper.push_back(m);
    std::vector<std::uint64_t> maximal;
    for (auto m : proper) {
        bool is_max = true;
        for (auto o : proper)
            if (o != m && (m & ~o) == 0) is_max = false;
        if (is_max) maximal.push_back(m);
    }
    if (maximal.empty()) return std::nullopt;
    // largest first, then by mask
    std::sort(maximal.begin(), maximal.end(), [](std::uint64_t a, std::uint64_t b) {
        return popcount(a) != popcount(b) ? popcount(a) > popcount(b) : a < b;
    });
    std::uint64_t m = maximal.front();
    Subreduct sub;
    sub.maximal_count = (int)maximal.size();
    for_bits(m, [&](int a) { sub.members.push_back(a); });
    const int k = (int)sub.members.size();
    auto pos = [&](int a) { return (int)(std::find(sub.members.begin(), sub.members.end(), a) - sub.members.begin()); };
    std::vector<std::uint8_t> leq(k * k);
    std::vector<int> prod(k * k), tilde(k), minus(k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            leq[i * k + j] = R.leq(sub.members[i], sub.members[j]);
            prod[i * k + j] = pos(R.mul(sub.members[i], sub.members[j]));
        }
        tilde[i] = pos(R.tilde(sub.members[i]));
        minus[i] = pos(R.minus(sub.members[i]));
    }
    sub.algebra = FinAlgebra(k, leq, prod, pos(R.one()), tilde, minus, std::nullopt, s.name + "_sub");
    auto rep = validate_dinfl(sub.algebra);
    if (!rep.ok()) throw InternalError("subreduct of " + s.name + " is not a DInFL algebra: " + rep.str());
    sub.neg_candidates = neg_candidates(sub.algebra);
    sub.poset = make_shape(dual_frame(sub.algebra).poset()).name;
    return sub;
}

const char* family_name(Family f) {
    switch (f) {
        case Family::A12: return "A12";
        case Family::B8: return "B8";
        default: return "none";
    }
}

Family family_criteria(const AtomStructure& s) {
    if (s.atoms != 4) throw PreconditionError("family_criteria: needs atoms 1, a, r, s");
    FinAlgebra R = ra_from_atoms(s);
    const int a = 2, r = 4, sa = 8;  // singleton masks
    auto le = [&](int x, int y) { return R.leq(x, y); };
    bool famA = true;
    for (int x : {a, r, r | sa})
        for (int y : {a, r, r | sa}) {
            int p = R.mul(x, y);
            if (le(sa, p) && !le(r, p)) famA = false;
        }
    if (famA) return Family::A12;
    bool famB = true;
    for (int x : {r, a | r, a | r | sa})
        for (int y : {r, a | r, a | r | sa}) {
            int p = R.mul(x, y);
            if (le(sa, p) && !le(a | r, p)) famB = false;
            if (le(a, p) && !le(r, p)) famB = false;
        }
    return famB ? Family::B8 : Family::None;
}

bool symmetric_subreduct_check(const AtomStructure& s) {
    for (int x = 0; x < s.atoms; ++x)
        if (s.converse[x] != x) throw PreconditionError("symmetric_subreduct_check: atom structure is not symmetric");
    FinAlgebra R = ra_from_atoms(s);
    for (auto m : closed_subreducts(R))
        if (!closed_under_complement(R, m)) return false;
    return true;
}

std::string lattice_shape(const std::string& poset) {
    std::vector<int> f;
    std::size_t pos = 0;
    while (pos <= poset.size()) {
        std::size_t e = poset.find('+', pos);
        if (e == std::string::npos) e = poset.size();
        std::string part = poset.substr(pos, e - pos);
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) return "upsets(" + poset + ")";
        f.push_back(std::stoi(part) + 1);
        pos = e + 1;
    }
    std::sort(f.begin(), f.end());
    std::string s;
    for (int k : f) s += (s.empty() ? "" : "x") + std::to_string(k);
    return s;
}

}  // namespace qra
