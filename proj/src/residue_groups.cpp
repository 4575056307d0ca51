#include "leglab/residue_groups.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "leglab/errors.hpp"
#include "leglab/intarith.hpp"

namespace leglab {

namespace {

void require_modulus(int64_t d) {
    if (d < 3) throw std::domain_error("modulus d must be at least 3 (got " +
                                       std::to_string(d) + ")");
}

}  // namespace

bool SubgroupData::contains(int64_t r) const {
    r = mod_nonneg(r, modulus);
    return std::binary_search(elements.begin(), elements.end(), r);
}

UnitGroup unit_group(int64_t d) {
    require_modulus(d);
    UnitGroup g;
    g.modulus = d;
    for (int64_t r = 1; r < d; ++r)
        if (std::gcd(r, d) == 1) g.elements.push_back(r);
    return g;
}

std::pair<std::vector<int64_t>, std::vector<int64_t>> half_partition(int64_t d) {
    require_modulus(d);
    std::vector<int64_t> a, b;
    for (int64_t r : unit_group(d).elements) {
        // No unit sits at d/2 exactly: d/2 shares a factor with even d.
        if (2 * r < d)
            a.push_back(r);
        else
            b.push_back(r);
    }
    return {a, b};
}

SubgroupData generated_subgroup(int64_t d, const std::vector<int64_t>& gens) {
    require_modulus(d);
    SubgroupData h;
    h.modulus = d;
    for (int64_t g : gens) {
        int64_t r = mod_nonneg(g, d);
        if (std::gcd(r, d) != 1)
            throw std::domain_error("generator " + std::to_string(g) +
                                    " is not coprime to d=" + std::to_string(d));
        h.generators.push_back(r);
    }

    // Closure of {1} u gens under multiplication mod d.
    std::set<int64_t> closure{1};
    std::vector<int64_t> frontier{1};
    while (!frontier.empty()) {
        int64_t x = frontier.back();
        frontier.pop_back();
        for (int64_t g : h.generators) {
            int64_t y = mulmod_i64(x, g, d);
            if (closure.insert(y).second) frontier.push_back(y);
        }
    }
    h.elements.assign(closure.begin(), closure.end());

    // Cosets against the full unit group, ordered by least element.
    UnitGroup units = unit_group(d);
    std::set<int64_t> remaining(units.elements.begin(), units.elements.end());
    while (!remaining.empty()) {
        int64_t rep = *remaining.begin();
        std::vector<int64_t> coset;
        for (int64_t x : h.elements) coset.push_back(mulmod_i64(rep, x, d));
        std::sort(coset.begin(), coset.end());
        for (int64_t x : coset) remaining.erase(x);
        h.cosets.push_back(std::move(coset));
    }
    return h;
}

BalancedReport is_balanced(int64_t d, const SubgroupData& subgroup) {
    require_modulus(d);
    if (subgroup.modulus != d)
        throw std::domain_error("subgroup modulus mismatch");

    BalancedReport report;
    report.modulus = d;
    report.subgroup = subgroup;
    report.balanced = true;
    for (const auto& coset : subgroup.cosets) {
        int64_t in_a = 0, in_b = 0;
        for (int64_t r : coset) (2 * r < d ? in_a : in_b)++;
        report.per_coset.push_back({coset.front(), in_a, in_b});
        if (in_a != in_b) report.balanced = false;
    }

    if (!report.balanced)
        report.classification = BalanceClass::NotBalanced;
    else if (subgroup.contains(d - 1))
        report.classification = BalanceClass::MinusOne;
    else if (d % 4 == 0 && subgroup.contains(d / 2 + 1))
        report.classification = BalanceClass::HalfPlusOne;
    else
        report.classification = BalanceClass::Sporadic;
    return report;
}

BalancedReport is_balanced(int64_t d, const std::vector<int64_t>& gens) {
    return is_balanced(d, generated_subgroup(d, gens));
}

std::vector<SubgroupData> all_subgroups(int64_t d, int64_t phi_cap) {
    require_modulus(d);
    UnitGroup units = unit_group(d);
    int64_t phi = static_cast<int64_t>(units.elements.size());
    if (phi > phi_cap)
        throw resource_error("subgroup enumeration: phi(" + std::to_string(d) +
                             ")=" + std::to_string(phi) + " exceeds cap " +
                             std::to_string(phi_cap));

    // Seed with all cyclic subgroups, then close under joins.
    std::set<std::vector<int64_t>> seen;
    std::vector<SubgroupData> out;
    std::vector<std::vector<int64_t>> worklist;
    auto add = [&](SubgroupData h) {
        if (seen.insert(h.elements).second) {
            worklist.push_back(h.elements);
            out.push_back(std::move(h));
        }
    };
    for (int64_t g : units.elements) add(generated_subgroup(d, {g}));

    // Join-close: the join of two subgroups is generated by their union.
    // Iterate each new subgroup against every cyclic seed.
    std::vector<std::vector<int64_t>> cyclic_gens;
    for (int64_t g : units.elements) cyclic_gens.push_back({g});
    while (!worklist.empty()) {
        std::vector<int64_t> base = std::move(worklist.back());
        worklist.pop_back();
        for (int64_t g : units.elements) {
            std::vector<int64_t> gens = base;
            gens.push_back(g);
            add(generated_subgroup(d, gens));
        }
    }

    std::sort(out.begin(), out.end(), [](const SubgroupData& x, const SubgroupData& y) {
        if (x.elements.size() != y.elements.size())
            return x.elements.size() < y.elements.size();
        return x.elements < y.elements;
    });
    return out;
}

std::vector<SubgroupData> minimal_balanced_subgroups(int64_t d, int64_t phi_cap) {
    std::vector<SubgroupData> balanced;
    for (SubgroupData& h : all_subgroups(d, phi_cap))
        if (is_balanced(d, h).balanced) balanced.push_back(std::move(h));

    std::vector<SubgroupData> minimal;
    for (const SubgroupData& h : balanced) {
        bool has_proper_balanced_subgroup = false;
        for (const SubgroupData& h2 : balanced) {
            if (h2.elements.size() >= h.elements.size()) continue;
            if (std::includes(h.elements.begin(), h.elements.end(),
                              h2.elements.begin(), h2.elements.end())) {
                has_proper_balanced_subgroup = true;
                break;
            }
        }
        if (!has_proper_balanced_subgroup) minimal.push_back(h);
    }
    return minimal;
}

std::vector<Orbit> orbits_mod_d(int64_t d, int64_t q) {
    require_modulus(d);
    q = mod_nonneg(q, d);
    if (std::gcd(q, d) != 1)
        throw std::domain_error("orbits_mod_d: gcd(q,d) != 1");

    std::vector<bool> visited(d, false);
    visited[0] = true;
    if (d % 2 == 0) visited[d / 2] = true;

    std::vector<Orbit> orbits;
    for (int64_t s = 1; s < d; ++s) {
        if (visited[s]) continue;
        Orbit o;
        int64_t x = s;
        do {
            visited[x] = true;
            o.elements.push_back(x);
            x = mulmod_i64(x, q, d);
        } while (x != s);
        int64_t g = std::gcd(d, s);
        o.size = static_cast<int64_t>(o.elements.size());
        o.e = d / g;
        o.i_prime = s / g;
        if (o.size != multiplicative_order(q % o.e, o.e))
            throw consistency_error("orbit size disagrees with o_e(q)");
        orbits.push_back(std::move(o));
    }
    return orbits;
}

int64_t multiplicative_order(int64_t a, int64_t m) {
    if (m < 1) throw std::domain_error("multiplicative_order: m must be >= 1");
    a = mod_nonneg(a, m);
    if (std::gcd(a, m) != 1)
        throw std::domain_error("multiplicative_order: gcd(a,m) != 1");
    if (m == 1) return 1;
    int64_t x = a % m, f = 1;
    while (x != 1) {
        x = mulmod_i64(x, a, m);
        ++f;
    }
    return f;
}

BalancedCensus scan_balanced(int64_t p, int64_t x_bound) {
    if (!is_prime_i64(p)) throw std::domain_error("scan_balanced: p must be prime");
    if (x_bound < 3) throw std::domain_error("scan_balanced: X must be >= 3");

    BalancedCensus census;
    census.p = p;
    census.x_bound = x_bound;
    for (int64_t d = 3; d < x_bound; ++d) {
        if (std::gcd(d, p) != 1) continue;
        switch (is_balanced(d, std::vector<int64_t>{p % d}).classification) {
            case BalanceClass::MinusOne: census.count_minus_one++; break;
            case BalanceClass::HalfPlusOne: census.count_half_plus_one++; break;
            case BalanceClass::Sporadic:
                census.count_sporadic++;
                census.sporadic_d.push_back(d);
                break;
            case BalanceClass::NotBalanced: census.count_not_balanced++; break;
        }
    }
    return census;
}

}  // namespace leglab
