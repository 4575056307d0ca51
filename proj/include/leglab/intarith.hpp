/**
 * @file intarith.hpp
 * @brief Small integer helpers shared across modules: primality by trial
 *        division, factorization, divisor lists, and safe modular ops.
 *
 * Everything here is desk-scale (64-bit, trial division); the library
 * never needs more.
 */

#pragma once

#include <cstdint>
#include <vector>

namespace leglab {

/// Nonnegative remainder of a mod m (m > 0), correct for negative a.
inline int64_t mod_nonneg(int64_t a, int64_t m) {
    int64_t r = a % m;
    return r < 0 ? r + m : r;
}

/// Trial-division primality for n >= 0.
bool is_prime_i64(int64_t n);

/// Prime factorization as (prime, exponent) pairs, ascending; n >= 1.
std::vector<std::pair<int64_t, int64_t>> prime_factors(int64_t n);

/// All positive divisors of n >= 1, ascending.
std::vector<int64_t> divisors(int64_t n);

/// (a*b) mod m without overflow for m < 2^31 is plain arithmetic; this
/// version is safe for any m < 2^62 via __int128.
int64_t mulmod_i64(int64_t a, int64_t b, int64_t m);

/// a^e mod m, e >= 0, m > 0.
int64_t powmod_i64(int64_t a, int64_t e, int64_t m);

/// Writes q = p^k; returns k >= 1 if q is a power of the prime p, else 0.
int64_t prime_power_exponent(int64_t q, int64_t p);

/// Smallest prime factor of n >= 2.
int64_t smallest_prime_factor(int64_t n);

}  // namespace leglab
