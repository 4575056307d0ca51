/**
 * @file correspondence.hpp
 * @brief Symbolic verification of the quotient maps pulling the Legendre
 *        relation (and its char-2 companion) back to products of
 *        Fermat-type curves.
 *
 * Odd p: on the product of z^d + x^2 + 1 = 0 and w^d + y^2 + 1 = 0, the
 * assignment (X,Y,U) = (-x^2-1, xy(x^2+1), zw) must satisfy
 * Y^2 - X(X+1)(X+U^d) = 0 modulo the two curve relations.
 *
 * Any p (including 2): on the product of z^d = x(1-x) and w^d = y(1-y),
 * the assignment u' -> zw, x' -> -(zw)^d/y, y' -> (zw)^d x(1-y)/y must
 * satisfy y'^2 + x'y' + t'y' = x'^3 + t'x'^2 with t' = u'^d; denominators
 * are cleared by y^3 before reduction.
 *
 * Reduction is by iterated substitution of z^d and w^d (the relations are
 * monomial-leading, so this terminates in a normal form with z,w degrees
 * below d).  Random mode samples points of the product variety over F_q by
 * drawing (x,y) and solving for d-th roots via discrete logs, then
 * evaluates the reduced relation at the sampled point.
 *
 * Each verifier also accepts a deliberately broken assignment (mutation
 * control) which must falsify with a witness.
 */

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace leglab {

/// Exact multivariate polynomial over F_p in x, y, z, w: canonical
/// ordered-term map from exponent tuples to nonzero coefficients in [1,p).
class MultiPoly {
public:
    using Expo = std::array<int32_t, 4>;  // exponents of x, y, z, w

    explicit MultiPoly(int64_t p) : p_(p) {}

    int64_t characteristic() const { return p_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Expo, int64_t>& terms() const { return terms_; }

    static MultiPoly constant(int64_t p, int64_t c);
    /// c * x^a y^b z^e w^f.
    static MultiPoly monomial(int64_t p, int64_t c, const Expo& expo);

    MultiPoly operator+(const MultiPoly& rhs) const;
    MultiPoly operator-(const MultiPoly& rhs) const;
    MultiPoly operator*(const MultiPoly& rhs) const;
    MultiPoly operator-() const;
    bool operator==(const MultiPoly& rhs) const;
    MultiPoly pow(int64_t e) const;

    /// Substitutes z^d -> rel_z and w^d -> rel_w (both free of z and w)
    /// until all z,w exponents are below d.
    MultiPoly reduce_mod_relations(int64_t d, const MultiPoly& rel_z,
                                   const MultiPoly& rel_w) const;

    std::string to_string() const;

private:
    int64_t p_;
    std::map<Expo, int64_t> terms_;

    void insert_term(const Expo& e, int64_t c);
};

enum class CorrespondenceMode { Symbolic, Random };

/// Verdict of one identity verification; witness is set on falsification
/// in random mode (the sampled point), or holds the nonzero normal form in
/// symbolic mode.
struct CorrespondenceResult {
    bool holds = false;
    CorrespondenceMode mode = CorrespondenceMode::Symbolic;
    int64_t trials_done = 0;  // random mode: points actually sampled
    std::optional<std::string> witness;
};

/// Verifies Y^2 - X(X+1)(X+U^d) = 0 mod (z^d+x^2+1, w^d+y^2+1) for
/// (X,Y,U) = (-x^2-1, xy(x^2+1), zw).  Requires p odd, gcd(p,d) = 1.
/// mutated replaces X by x^2+1 (a genuinely breaking perturbation; a sign
/// flip on Y alone is invisible since Y enters squared).
CorrespondenceResult verify_phi_identity(int64_t p, int64_t q, int64_t d,
                                         CorrespondenceMode mode,
                                         int64_t trials = 100, uint64_t seed = 0,
                                         bool mutated = false);

/// Verifies y'^2 + x'y' + t'y' = x'^3 + t'x'^2 (denominators cleared by
/// y^3) mod (z^d - x(1-x), w^d - y(1-y)) for u' = zw, x' = -(zw)^d/y,
/// y' = (zw)^d x(1-y)/y.  Requires gcd(p,d) = 1; p = 2 allowed.
/// mutated drops the x factor from y' (breaking in every characteristic,
/// including 2 where sign flips are no-ops).
CorrespondenceResult verify_phi_prime_identity(int64_t p, int64_t q, int64_t d,
                                               CorrespondenceMode mode,
                                               int64_t trials = 100, uint64_t seed = 0,
                                               bool mutated = false);

}  // namespace leglab
