/**
 * @file cyclotomic.hpp
 * @brief Exact arithmetic in Z[zeta_n], the ring of integers generated by a
 *        primitive n-th root of unity.
 *
 * A CycInt of order n is stored as a length-n vector of arbitrary-precision
 * integers (c_0,...,c_{n-1}) representing the class of sum c_j X^j in
 * Z[X]/(X^n - 1).  Because X^n - 1 is not irreducible, values are kept in
 * *canonical form*: the residue modulo the n-th cyclotomic polynomial
 * Phi_n, embedded back as a vector with c_j = 0 for j >= phi(n).  Equality,
 * integer detection and root-of-unity detection all operate on canonical
 * forms.  Multiplication is cyclic convolution followed by
 * re-canonicalization; binary operations on different orders lift both
 * arguments to the lcm order by index dilation first.
 */

#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace leglab {

class CycInt {
public:
    /// Zero of order n (n >= 1).
    explicit CycInt(int64_t order = 1);
    /// The rational integer m as a CycInt of order n.
    CycInt(int64_t order, const mpz_class& m);
    /// Raw class of sum coeffs[j] X^j in Z[X]/(X^n - 1); canonicalized.
    CycInt(int64_t order, std::vector<mpz_class> coeffs);

    /// zeta_n^k (k reduced mod n).
    static CycInt root_of_unity(int64_t n, int64_t k);

    int64_t order() const { return order_; }
    /// Canonical coefficients: length order(), zero above phi(order()).
    const std::vector<mpz_class>& coeffs() const { return coeffs_; }

    CycInt operator-() const;
    CycInt operator+(const CycInt& rhs) const;
    CycInt operator-(const CycInt& rhs) const;
    CycInt operator*(const CycInt& rhs) const;
    bool operator==(const CycInt& rhs) const;
    bool operator!=(const CycInt& rhs) const { return !(*this == rhs); }

    /// z^e for e >= 0 (square and multiply).
    CycInt pow(int64_t e) const;

    /// Image under zeta_n -> zeta_n^{-1} (complex conjugation).
    CycInt conj() const;

    /// Rewrites to order N (order() | N) by index dilation.
    CycInt lift_to_order(int64_t n_to) const;

    /// Rewrites to a smaller order m | order() when the value lies in
    /// Z[zeta_m]: contracts support divisible by order()/m and applies
    /// zeta_{2m} = -zeta_m^{(m+1)/2} for odd m.  Throws std::domain_error
    /// when the value cannot be expressed at order m by these steps.
    CycInt reduce_to_order(int64_t m) const;

    bool is_zero() const;
    /// The canonical form is a rational integer.
    bool is_integer() const;
    /// Value as a rational integer.  Requires is_integer().
    mpz_class as_integer() const;

private:
    int64_t order_;
    std::vector<mpz_class> coeffs_;  // canonical form

    void canonicalize();
};

/// Free-function aliases for the ring operations.
CycInt cyc_add(const CycInt& z1, const CycInt& z2);
CycInt cyc_mul(const CycInt& z1, const CycInt& z2);
CycInt cyc_neg(const CycInt& z);
CycInt conj(const CycInt& z);

/// Evaluation at zeta_n = exp(2*pi*i*a/n) in double precision.
/// Requires gcd(a,n) = 1.
std::complex<double> embed_complex(const CycInt& z, int64_t a);

/// Least m with z^m = 1, searching the divisors of 2n (the only possible
/// orders of roots of unity in Q(mu_n)); absent when z is not a root of
/// unity.
std::optional<int64_t> is_root_of_unity(const CycInt& z);

/// Canonical form equals the constant m.
bool equals_integer(const CycInt& z, const mpz_class& m);

/// The n-th cyclotomic polynomial as an ascending coefficient vector
/// (degree phi(n)); computed by iterated exact division and cached.
const std::vector<mpz_class>& cyclotomic_polynomial(int64_t n);

/// Euler phi (n >= 1).
int64_t euler_phi(int64_t n);

}  // namespace leglab
