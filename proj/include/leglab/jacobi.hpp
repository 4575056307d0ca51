/**
 * @file jacobi.hpp
 * @brief Jacobi sums J(chi1,chi2), the orbit sums J_o and J'_o attached to
 *        the Legendre curve, Stickelberger valuations, and purity analysis.
 *
 * For characters chi1, chi2 of a finite field k, the Jacobi sum is
 *
 *     J(chi1,chi2) = sum over u+v+1=0 in k of chi1(u)*chi2(v),
 *
 * with chi(0) = 0 for nontrivial chi and 1 for the trivial character.
 *
 * For an orbit o of multiplication by q on Z/dZ (with invariants e, i'),
 * the field is F_{q^|o|} and, writing Q = q^|o| and t for the Teichmueller
 * character (the discrete-log identification chi(gen^s) = zeta_{Q-1}^s):
 *
 *     J_o  = J(lambda, chi_i),  chi_i = t^{(Q-1)i/d},  lambda = t^{(Q-1)/2},
 *     J'_o = J(chi_i, chi_i)                     (defined also for p = 2).
 *
 * Both are independent of the representative i in o (Frobenius invariance
 * of Jacobi sums); this is checked at every representative.  J_o lives in
 * Z[mu_e] up to a quadratic sign twist, so it is returned at order
 * lcm(2,e); J'_o is returned at order e.
 *
 * Stickelberger's theorem gives the valuation of these sums at each prime
 * sigma_a(P) above p purely in terms of fractional parts; both the
 * standard profile (for J_o) and the prime-variant profile (for J'_o) are
 * provided, with val normalized so val(p) = 1.
 */

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>

#include "leglab/cyclotomic.hpp"
#include "leglab/finite_field.hpp"
#include "leglab/residue_groups.hpp"

namespace leglab {

/// The value of J_o or J'_o together with its defining data.
struct JacobiSumValue {
    Orbit orbit;
    int64_t p = 0;          // characteristic
    int64_t q = 0;          // base field size, a power of p
    int64_t nu = 0;         // q^|o| = p^nu
    mpz_class field_size;   // q^|o|
    CycInt value;           // at order lcm(2,e) (J_o) or e (J'_o)
};

enum class JacobiVariant { Standard, Prime };

/// Valuations of the sum at the primes sigma_a(P) above p, one per
/// a in (Z/eZ)^*, normalized so val(p) = 1.
struct ValuationProfile {
    int64_t e = 0;
    int64_t nu = 0;                       // q^|o| = p^nu
    std::map<int64_t, mpq_class> valuations;
};

enum class Purity { PurePlus, PureMinus, NotPure };

/// Exact Jacobi sum of two characters on the same field, returned at order
/// lcm of the two character value orders (the smallest cyclotomic ring
/// containing every summand).  Throws std::domain_error on field mismatch.
CycInt jacobi_sum(const CharacterSpec& chi1, const CharacterSpec& chi2);

/// J_o for the orbit o of multiplication by q on Z/dZ.  Builds F_{q^|o|}
/// (cached), evaluates the sum at every representative i in o and checks
/// they agree.  Requires p odd, gcd(d,p) = 1; throws resource_error when
/// q^|o| exceeds field_cap.
JacobiSumValue jacobi_J_o(int64_t p, int64_t q, int64_t d, const Orbit& o,
                          int64_t field_cap = int64_t{1} << 20);

/// J'_o = J(chi_i, chi_i); p = 2 is allowed.
JacobiSumValue jacobi_Jprime_o(int64_t p, int64_t q, int64_t d, const Orbit& o,
                               int64_t field_cap = int64_t{1} << 20);

/// Stickelberger valuations from the fractional-part closed form (no ideal
/// factorization).  Standard variant: for each a coprime to e, lift a to
/// its odd representative a~ mod 2e and sum, over 0 <= j < nu,
///     <a~ p^j/2> + <a~ i' p^j/e> + <a~(-i'-e/2) p^j/e>,
/// then subtract nu.  Prime variant: sum 2<a i' p^j/e> + <-2a i' p^j/e>,
/// minus nu.  (<x> is the fractional part; the odd lift matters because
/// <a p^j/2> depends on a mod 2, which is not determined by a mod e when e
/// is odd.)
ValuationProfile stickelberger_valuations(int64_t p, int64_t q, int64_t d,
                                          const Orbit& o, JacobiVariant variant);

/// Tests J^2 = q^|o| exactly and, when pure, determines the sign of
/// J = +-p^{nu/2}.  The caller passes the balanced verdict for e; a
/// disagreement between purity and balancedness throws consistency_error
/// (it contradicts the purity criterion and means a bug).
Purity purity_check(const JacobiSumValue& j_value, bool balanced);

}  // namespace leglab
