/**
 * @file finite_field.hpp
 * @brief Exact arithmetic in F_{p^k} with eager discrete-log tables, and
 *        multiplicative characters valued in abstract roots of unity.
 *
 * Elements of F_{p^k} are polynomial residues c_0 + c_1*X + ... +
 * c_{k-1}*X^{k-1} modulo a fixed monic irreducible, encoded as the integer
 * c_0 + c_1*p + ... + c_{k-1}*p^{k-1}.  Construction is deterministic: the
 * modulus defaults to the lexicographically least monic irreducible of
 * degree k (least in this same integer encoding) and the generator is the
 * least encoded element of full multiplicative order.  Exp/log tables are
 * built eagerly, so multiplication, inversion and character evaluation are
 * table lookups.
 *
 * A multiplicative character chi of exponent m sends generator^s to the
 * abstract root of unity zeta_{p^k-1}^{m*s}; chi(0) = 0 for nontrivial chi
 * and 1 for the trivial character.  Character values are returned as
 * reduced (order, index) pairs so callers can accumulate them exactly in a
 * cyclotomic ring of small order.
 */

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace leglab {

using FFElem = int64_t;  // encoded field element, in [0, p^k)

class FieldContext {
public:
    int64_t p = 0;     // characteristic
    int64_t k = 0;     // extension degree
    int64_t size = 0;  // p^k
    std::vector<int64_t> modulus;      // length k+1, monic, coeffs in [0,p)
    FFElem generator = 0;              // least element of order p^k - 1
    std::vector<int32_t> log_table;    // log_table[x] = discrete log of x; -1 at 0
    std::vector<FFElem> exp_table;     // exp_table[s] = generator^s, s in [0, p^k-1)

    FFElem zero() const { return 0; }
    FFElem one() const { return 1; }
    /// Embeds an integer via reduction mod p (image of the prime subfield).
    FFElem from_int(int64_t n) const;

    FFElem add(FFElem a, FFElem b) const;
    FFElem sub(FFElem a, FFElem b) const;
    FFElem neg(FFElem a) const;
    FFElem mul(FFElem a, FFElem b) const;
    /// Multiplicative inverse.  Requires a != 0.
    FFElem inv(FFElem a) const;
    /// a^e with a^0 = 1; 0^e = 0 for e > 0.  Requires e >= 0.
    FFElem pow(FFElem a, int64_t e) const;

    /// Coefficient vector (c_0,...,c_{k-1}) of an encoded element.
    std::vector<int64_t> coeffs(FFElem a) const;
    FFElem from_coeffs(const std::vector<int64_t>& c) const;
};

/// Constructs F_{p^k} deterministically; results are cached and shared.
/// Supplying a modulus overrides the default choice (it must be monic
/// irreducible of degree k, coefficients in [0,p)).
/// Throws std::domain_error for bad p/k/modulus, resource_error when
/// p^k exceeds size_cap (default 2^20).
std::shared_ptr<const FieldContext> make_field(
    int64_t p, int64_t k,
    const std::optional<std::vector<int64_t>>& modulus = std::nullopt,
    int64_t size_cap = int64_t{1} << 20);

/// Exponent s in [0, p^k-2] with generator^s = x.  Requires x != 0.
int64_t discrete_log(const FieldContext& ctx, FFElem x);

/// A multiplicative character of F_{p^k}^*, determined by its exponent m:
/// chi(generator^s) = zeta_{p^k-1}^{m*s}.
struct CharacterSpec {
    std::shared_ptr<const FieldContext> field;
    int64_t exponent = 0;     // m, reduced to [0, p^k-2]
    int64_t value_order = 1;  // n = (p^k-1)/gcd(p^k-1, m)

    bool trivial() const { return exponent == 0; }
};

/// Builds the character of exponent m (reduced mod p^k - 1).
CharacterSpec make_character(std::shared_ptr<const FieldContext> field, int64_t m);

/// An abstract root of unity zeta_order^index (reduced: 0 <= index < order,
/// gcd(index, order) = 1 unless index = 0), or zero.
struct RootOfUnity {
    bool is_zero = false;
    int64_t order = 1;
    int64_t index = 0;
};

/// chi(x): zeta_{p^k-1}^{m*log x} in lowest terms for x != 0; for x = 0,
/// zero when chi is nontrivial and 1 when chi is trivial.
RootOfUnity char_value(const CharacterSpec& chi, FFElem x);

/// The embedding of one field into another with sub.k | sup.k (same p),
/// realized by mapping X to the least encoded root of sub.modulus in sup.
struct FieldEmbedding {
    std::shared_ptr<const FieldContext> sub;
    std::shared_ptr<const FieldContext> sup;
    FFElem root = 0;                 // image of the generator X of sub
    std::vector<FFElem> powers;      // root^0 .. root^{sub.k-1}

    FFElem apply(FFElem a) const;
};

/// Finds the least-encoded root of sub.modulus in sup and returns the
/// induced field embedding.  Requires sub.p == sup.p and sub.k | sup.k.
FieldEmbedding embed_subfield(std::shared_ptr<const FieldContext> sub,
                              std::shared_ptr<const FieldContext> sup);

}  // namespace leglab
