#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace styre {

// Finite group given by its multiplication table. Element 0 is always the
// identity. table[i][j] is the index of the product element_i * element_j.
struct FiniteGroup {
    int order = 0;
    std::vector<std::string> labels;
    std::vector<std::vector<int>> table;
    std::vector<int> inverse;

    int mul(int a, int b) const { return table[a][b]; }
    int inv(int a) const { return inverse[a]; }
    int label_index(const std::string& label) const;  // throws if unknown
    bool is_abelian() const;
};

// Sorted index set, closed under product and inverse, containing 0.
struct Subgroup {
    const FiniteGroup* parent = nullptr;
    std::vector<int> members;

    bool contains(int g) const;
    bool operator==(const Subgroup& other) const { return members == other.members; }
    std::vector<std::string> member_labels() const;
};

// Family constructors. Labels are canonical: decimal digits for cyclic
// groups, cycle notation for symmetric groups, "r.."/"sr.." for dihedral,
// "(a,b)" pairs for direct products.
FiniteGroup make_cyclic(int n);
FiniteGroup make_symmetric(int n);   // n <= 5
FiniteGroup make_dihedral(int n);    // n >= 2, order 2n
FiniteGroup make_product(const FiniteGroup& a, const FiniteGroup& b);
FiniteGroup make_from_table(std::vector<std::vector<int>> table,
                            std::vector<std::string> labels = {});

// Validates the Latin-square, identity, inverse and associativity
// invariants; associativity is exhaustive up to order 64 and sampled above.
void validate_group(const FiniteGroup& g);

Subgroup subgroup_generated(const FiniteGroup& g, const std::vector<int>& gens);
Subgroup whole_group(const FiniteGroup& g);
Subgroup trivial_subgroup(const FiniteGroup& g);
bool is_normal(const FiniteGroup& g, const Subgroup& h);
Subgroup conjugate_subgroup(const FiniteGroup& g, const Subgroup& h, int by);

}  // namespace styre
