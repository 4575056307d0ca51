/**
 * @file residue_groups.hpp
 * @brief Subgroups of (Z/dZ)^*, the balanced condition, and orbits of
 *        multiplication by q on Z/dZ.
 *
 * Throughout, d > 2.  The unit group G = (Z/dZ)^* splits into the two
 * "halves" A = {residues in (0,d/2)} and B = {residues in (d/2,d)}.  A
 * subgroup H <= G is *balanced* when every coset C of H satisfies
 * |C n A| = |C n B|.  Balanced subgroups are classified as:
 *
 *   - MinusOne:    -1 in H (negation swaps A and B coset-wise),
 *   - HalfPlusOne: 4 | d and d/2+1 in H,
 *   - Sporadic:    balanced but neither of the above,
 *   - NotBalanced: some coset meets A and B unequally.
 *
 * MinusOne takes precedence over HalfPlusOne when both hold.
 */

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace leglab {

/// The unit group (Z/dZ)^* as a sorted list of least positive residues.
struct UnitGroup {
    int64_t modulus = 0;
    std::vector<int64_t> elements;  // sorted, all in [1,d-1], coprime to d
};

/// A subgroup of (Z/dZ)^* with its coset decomposition.
struct SubgroupData {
    int64_t modulus = 0;
    std::vector<int64_t> generators;             // as given, reduced mod d
    std::vector<int64_t> elements;               // sorted, contains 1
    std::vector<std::vector<int64_t>> cosets;    // partition of the unit group;
                                                 // each coset sorted, cosets
                                                 // ordered by least element

    bool contains(int64_t r) const;
    int64_t order() const { return static_cast<int64_t>(elements.size()); }
};

enum class BalanceClass { MinusOne, HalfPlusOne, Sporadic, NotBalanced };

/// Per-coset A/B counts for one subgroup, with the balanced verdict.
struct BalancedReport {
    int64_t modulus = 0;
    SubgroupData subgroup;
    struct CosetCount {
        int64_t representative;  // least element of the coset
        int64_t count_a;
        int64_t count_b;
    };
    std::vector<CosetCount> per_coset;
    bool balanced = false;
    BalanceClass classification = BalanceClass::NotBalanced;
};

/// One orbit of x -> q*x on Z/dZ.  Every orbit determines e = d/gcd(d,i)
/// and i' = i/gcd(d,i), where i is the least element of the orbit; these
/// are independent of the representative chosen.
struct Orbit {
    std::vector<int64_t> elements;  // in cycle order starting from the least
    int64_t size = 0;               // |o| = multiplicative order of q mod e
    int64_t e = 0;
    int64_t i_prime = 0;
};

/// All residues coprime to d, sorted.  Requires d >= 3.
UnitGroup unit_group(int64_t d);

/// The halves A (units in (0,d/2)) and B (units in (d/2,d)).  Requires d >= 3.
std::pair<std::vector<int64_t>, std::vector<int64_t>> half_partition(int64_t d);

/// Smallest subgroup of (Z/dZ)^* containing the given generators, with
/// cosets computed against the full unit group.  Requires every generator
/// coprime to d (after reduction mod d).
SubgroupData generated_subgroup(int64_t d, const std::vector<int64_t>& gens);

/// Counts each coset of the subgroup against A and B and classifies.
BalancedReport is_balanced(int64_t d, const SubgroupData& subgroup);

/// Convenience: is_balanced(d, <gens>).
BalancedReport is_balanced(int64_t d, const std::vector<int64_t>& gens);

/// Every subgroup of (Z/dZ)^*, enumerated as joins of cyclic subgroups and
/// deduplicated; sorted by (order, elements).  Guarded by phi_cap.
std::vector<SubgroupData> all_subgroups(int64_t d, int64_t phi_cap = 5000);

/// All balanced subgroups containing no proper balanced subgroup.
/// Throws resource_error when phi(d) exceeds phi_cap.
std::vector<SubgroupData> minimal_balanced_subgroups(int64_t d, int64_t phi_cap = 5000);

/// Orbits of multiplication by q on Z/dZ, excluding {0} and (for even d)
/// {d/2}; ordered by least element.  Requires gcd(q,d)=1.
std::vector<Orbit> orbits_mod_d(int64_t d, int64_t q);

/// Least f >= 1 with a^f = 1 mod m.  Requires gcd(a,m)=1, m >= 1.
int64_t multiplicative_order(int64_t a, int64_t m);

/// Census of the classification of <p> mod d over all d < X coprime to p.
struct BalancedCensus {
    int64_t p = 0;
    int64_t x_bound = 0;
    int64_t count_minus_one = 0;
    int64_t count_half_plus_one = 0;
    int64_t count_sporadic = 0;
    int64_t count_not_balanced = 0;
    std::vector<int64_t> sporadic_d;  // the d with a sporadic classification
};

/// Classifies <p> mod d for every d in [3,X) with gcd(d,p)=1.
/// Requires p prime (p=2 allowed) and X >= 3.
BalancedCensus scan_balanced(int64_t p, int64_t x_bound);

}  // namespace leglab
