/**
 * @file lfunction.hpp
 * @brief The factored L-function of the Legendre curve E: y^2 = x(x+1)(x+t)
 *        over K = F_q(t^{1/d}) (and of its char-2 companion E'), analytic
 *        rank, the divisor-sum rank formula, a brute-force point-counting
 *        oracle, and the BSD-ratio report.
 *
 * The L-function factors over the orbits o of multiplication by q on
 * Z/dZ (excluding {0} and {d/2}):
 *
 *     L(E/K,T) = prod over o of (1 - J_o^2 T^{|o|}),
 *
 * so each factor is the pair (J_o^2, |o|).  The analytic rank is the
 * number of factors with J_o^2 = q^{|o|} exactly (each contributes a
 * simple zero at T = q^{-1}).  Independently, the rank equals the sum of
 * phi(e)/o_e(q) over divisors e > 2 of d such that p is balanced mod e;
 * this depends on q only through its residues mod divisors of d, so a
 * symbolic q given as "r mod m" is accepted there.
 *
 * The oracle recomputes the log-L coefficients c_n three ways: a double
 * loop over P^1(F_{q^n}) x F_{q^n} using the character-sum form of a_beta,
 * the closed form -sum_{i=1, i != g/2}^{g-1} J(lambda,psi^i)^2 with
 * g = gcd(q^n-1, d), and the n-th log coefficient of the factored product.
 * All three must agree as exact integers.
 */

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "leglab/cyclotomic.hpp"
#include "leglab/jacobi.hpp"
#include "leglab/residue_groups.hpp"

namespace leglab {

enum class CurveTag { E, EPrime };

struct LFactor {
    CycInt j_squared;  // J_o^2 (or J'_o^2)
    int64_t size = 0;  // |o|
    Orbit orbit;
    bool pure = false;  // j_squared == q^size exactly
};

struct LFactorization {
    int64_t p = 0;
    int64_t q = 0;
    int64_t d = 0;
    CurveTag curve = CurveTag::E;
    std::vector<LFactor> factors;  // ordered by orbit least element
};

/// One factor (1 - J_o^2 T^{|o|}) per orbit.  curve = E uses J_o (p odd);
/// curve = EPrime uses J'_o (p = 2 allowed).  Requires gcd(d, pq) = 1;
/// throws resource_error past the field cap.
LFactorization lfunction_factors(int64_t p, int64_t q, int64_t d, CurveTag curve,
                                 int64_t field_cap = int64_t{1} << 20);

/// Number of pure factors = order of vanishing at T = q^{-1}.
int64_t analytic_rank(const LFactorization& lfac);

/// q for the rank formula: either a concrete integer or a residue class
/// "r mod m" (sufficient because the formula uses q only mod divisors of d).
struct QSpec {
    std::optional<mpz_class> value;
    std::optional<std::pair<int64_t, int64_t>> residue;  // (r, m)

    static QSpec from_int(const mpz_class& q) { return {q, std::nullopt}; }
    static QSpec from_residue(int64_t r, int64_t m) { return {std::nullopt, {{r, m}}}; }
    /// q mod e; throws std::domain_error when the residue modulus does not
    /// determine it (e does not divide m).
    int64_t mod(int64_t e) const;
};

/// Rank formula result with the per-divisor breakdown table.
struct RankResult {
    int64_t rank = 0;
    struct Row {
        int64_t e;             // divisor of d, e > 2
        bool balanced;         // is <p> balanced mod e
        int64_t phi;           // phi(e)
        int64_t order_q;       // o_e(q)
        int64_t contribution;  // phi/order_q if balanced, else 0
    };
    std::vector<Row> rows;  // ascending e
};

/// Sum of phi(e)/o_e(q) over divisors e > 2 of d with p balanced mod e.
/// Requires p odd prime, gcd(p,d) = 1, gcd(q,d) = 1.
RankResult rank_formula(int64_t p, const QSpec& q, int64_t d);

/// The p = 2 variant (curve E'); requires d odd.
RankResult rank_formula_char2(const QSpec& q, int64_t d);

/// c_n = sum of a_{beta,q^n} over beta in P^1(F_{q^n}), where for finite
/// beta a = -sum_gamma lambda(gamma(gamma+1)(gamma+beta^d)) and a_infty is
/// 1 for even d, 0 for odd d.  q must be an odd prime power; any d >= 1 is
/// accepted (beta -> beta^{p^j} permutes the field, so only the prime-to-p
/// part of d matters).  The q^{2n}-step double loop is guarded by max_ops.
mpz_class pointcount_coefficient(int64_t q, int64_t d, int64_t n,
                                 int64_t max_ops = 10'000'000);

/// Triple cross-check of c_n for n = 1..n_max (skipping n past the bound
/// when skip_past_bound, else throwing resource_error).  d divisible by p
/// is allowed: the factored-product leg uses the prime-to-p part of d
/// (u -> u^p is a purely inseparable base change, which leaves the
/// L-function unchanged), while the other two legs use d as given.
struct VerificationRecord {
    int64_t p = 0, q = 0, d = 0;
    struct Row {
        int64_t n;
        mpz_class point_count;   // oracle (i)
        mpz_class jacobi_form;   // closed form (ii)
        mpz_class log_coeff;     // from the factored L (iii)
        bool agree;
    };
    std::vector<Row> rows;
    bool all_agree = true;
};

VerificationRecord verify_lfunction(int64_t p, int64_t q, int64_t d, int64_t n_max,
                                    int64_t max_ops = 10'000'000,
                                    bool skip_past_bound = true);

/// Checks rank(level d) - rank(level d/2) = d/2 for d = 2(p^f - 1), and
/// that the L-factor multiset at level d is the level-d/2 multiset plus
/// d/2 copies of (q, 1).  Requires q = 1 mod d.
struct RankRelationResult {
    bool holds = false;
    int64_t d = 0;
    int64_t rank_level_d = 0;
    int64_t rank_level_d2 = 0;
    bool factor_multiset_ok = false;
};

RankRelationResult rank_relation_check(int64_t p, int64_t f, int64_t q,
                                       int64_t field_cap = int64_t{1} << 20);

/// The reported quantities around the BSD leading coefficient at level
/// d = 2(p^f - 1): Tamagawa products, lattice discriminant, and the exact
/// constant c in I^2 = c * |Ker N| / |coker N|.  Nothing here asserts
/// anything about the actual index I or Sha.
struct BsdReport {
    int64_t p = 0, f = 0, q = 0, d = 0;
    mpq_class tamagawa_u;           // 2^{d+2} d^2 q^{1-d/2}
    mpq_class tamagawa_u2;          // 2^{d/2} d^2 q^{1-d/4}
    mpz_class disc_wd;              // p^{fd/2}
    mpq_class predicted_constraint; // 2^{p^f+1} p^{fd/2} / q^{d/4}
};

/// Requires d = 2(p^f - 1) >= 4 and q = 1 mod d.
BsdReport bsd_quantities(int64_t p, int64_t f, int64_t q);

}  // namespace leglab
