/**
 * @file function_field_curve.hpp
 * @brief The Legendre curve E: y^2 = x(x+1)(x+u^d) over the rational
 *        function field F_q(u): exact rational-function arithmetic, the
 *        chord-tangent group law, the explicit points R_i and P_i, torsion,
 *        the Galois action u -> zeta_d^j u, traces between levels, 2-Selmer
 *        images, and the height lattice of the R-points.
 *
 * Setting t = u^d, the curve is y^2 = x^3 + (1+t)x^2 + tx.  The 2-torsion
 * points are Q_0 = (0,0), Q_1 = (-1,0), Q_t = (-u^d,0); for even d the
 * 4-torsion points P2_0, P2_1 have x = +-u^{d/2}.  When d = 2(p^f - 1) and
 * q = 1 mod d the curve acquires the points
 *
 *     R_i = R(zeta^i u),  R(u) = (u^{-2}, u^{-3}(u^2+1)^{(p^f+1)/2}),
 *
 * and when d = p^f + 1 the points P_i = (zeta^i u, zeta^i u (zeta^i u + 1)^{d/2}).
 *
 * The 2-Selmer image of an affine point (x,y) not equal to Q_1 is the
 * parity vector e_j = ord_{u = zeta^j}(x+1) mod 2, j = 0..d-1.
 */

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <vector>

#include "leglab/finite_field.hpp"

namespace leglab {

/// Univariate polynomial over F_q, ascending coefficients, no trailing
/// zeros (zero polynomial = empty vector).
struct FqPoly {
    std::shared_ptr<const FieldContext> field;
    std::vector<FFElem> c;

    int64_t degree() const { return static_cast<int64_t>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
};

FqPoly poly_zero(std::shared_ptr<const FieldContext> f);
FqPoly poly_const(std::shared_ptr<const FieldContext> f, FFElem a);
/// a * u^k.
FqPoly poly_monomial(std::shared_ptr<const FieldContext> f, FFElem a, int64_t k);
FqPoly poly_add(const FqPoly& a, const FqPoly& b);
FqPoly poly_sub(const FqPoly& a, const FqPoly& b);
FqPoly poly_neg(const FqPoly& a);
FqPoly poly_mul(const FqPoly& a, const FqPoly& b);
/// Quotient and remainder; requires b != 0.
std::pair<FqPoly, FqPoly> poly_divmod(const FqPoly& a, const FqPoly& b);
/// Monic gcd.
FqPoly poly_gcd(const FqPoly& a, const FqPoly& b);
FqPoly poly_pow(const FqPoly& a, int64_t e);
bool poly_eq(const FqPoly& a, const FqPoly& b);
FFElem poly_eval(const FqPoly& a, FFElem x);
/// Coefficient-wise substitution u -> c*u.
FqPoly poly_scale_var(const FqPoly& a, FFElem scale);
/// Multiplicity of the root r (0 when a(r) != 0); requires a != 0.
int64_t poly_root_multiplicity(const FqPoly& a, FFElem r);

/// Rational function in normalized form: gcd(num,den) = 1, den monic.
struct RatFunc {
    FqPoly num;
    FqPoly den;
};

RatFunc rf_from_poly(const FqPoly& p);
RatFunc rf_const(std::shared_ptr<const FieldContext> f, FFElem a);
/// num/den, normalized; requires den != 0.
RatFunc rf_make(const FqPoly& num, const FqPoly& den);
RatFunc rf_add(const RatFunc& a, const RatFunc& b);
RatFunc rf_sub(const RatFunc& a, const RatFunc& b);
RatFunc rf_neg(const RatFunc& a);
RatFunc rf_mul(const RatFunc& a, const RatFunc& b);
/// a/b; requires b != 0.
RatFunc rf_div(const RatFunc& a, const RatFunc& b);
bool rf_eq(const RatFunc& a, const RatFunc& b);
bool rf_is_zero(const RatFunc& a);
RatFunc rf_scale_var(const RatFunc& a, FFElem scale);
/// ord_{u=r}(a) = multiplicity in num minus multiplicity in den;
/// requires a != 0.
int64_t rf_valuation_at(const RatFunc& a, FFElem r);
/// Both num and den supported on powers of u^m (membership in F_q(u^m);
/// exact for normalized representations).
bool rf_in_subfield(const RatFunc& a, int64_t m);

/// Affine point or the point at infinity.
struct CurvePoint {
    bool infinity = true;
    RatFunc x;
    RatFunc y;

    static CurvePoint at_infinity() { return CurvePoint{}; }
    static CurvePoint affine(RatFunc px, RatFunc py) {
        return CurvePoint{false, std::move(px), std::move(py)};
    }
};

/// Fixed data for E over F_q(u): the constant field, d, and the pinned
/// primitive d-th root of unity zeta_d = generator^{(q-1)/d}.
struct CurveContext {
    int64_t p = 0;
    int64_t q = 0;
    int64_t d = 0;
    std::optional<int64_t> f;  // when d = 2(p^f-1) or d = p^f+1
    std::shared_ptr<const FieldContext> field;
    FFElem zeta = 0;  // primitive d-th root of unity

    FFElem zeta_pow(int64_t j) const;  // zeta^j, j reduced mod d
};

/// Builds the context; requires p odd prime, q a power of p with
/// q = 1 mod d whenever zeta_d is demanded (d > 2), and gcd(d,p) = 1.
CurveContext make_curve_context(int64_t p, int64_t q, int64_t d,
                                std::optional<int64_t> f = std::nullopt,
                                int64_t field_cap = int64_t{1} << 20);

/// Exact identity test y^2 = x(x+1)(x+u^d) in F_q(u).
bool on_curve(const CurveContext& ctx, const CurvePoint& pt);

CurvePoint negate(const CurveContext& ctx, const CurvePoint& pt);
/// Chord-tangent addition; requires both points on the curve.
CurvePoint add(const CurveContext& ctx, const CurvePoint& p1, const CurvePoint& p2);
/// n*P for n in Z.
CurvePoint scalar_mul(const CurveContext& ctx, int64_t n, const CurvePoint& pt);
bool point_eq(const CurvePoint& p1, const CurvePoint& p2);

/// 2-torsion: Q_0 = (0,0), Q_1 = (-1,0), Q_t = (-u^d,0).
CurvePoint torsion_Q0(const CurveContext& ctx);
CurvePoint torsion_Q1(const CurveContext& ctx);
CurvePoint torsion_Qt(const CurveContext& ctx);
/// 4-torsion (even d): P2_0 = (u^{d/2}, u^{d/2}(u^{d/2}+1)),
/// P2_1 = (-u^{d/2}, -u^{d/2}(-u^{d/2}+1)).
CurvePoint torsion_P2(const CurveContext& ctx, int64_t i);

/// R_i = R(zeta^i u); requires d = 2(p^f-1), q = 1 mod d, 0 <= i < d.
/// The result is on-curve verified (consistency_error on failure).
CurvePoint point_R(const CurveContext& ctx, int64_t i);

/// P_i = (zeta^i u, zeta^i u (zeta^i u+1)^{d/2}); requires d = p^f + 1.
CurvePoint point_P(const CurveContext& ctx, int64_t i);

/// Substitute u -> zeta^j u in both coordinates.
CurvePoint galois_apply(const CurveContext& ctx, int64_t j, const CurvePoint& pt);

/// Sum of sigma(P) over the Galois group of F_q(u)/F_q(u^{d/e}), i.e.
/// substitutions u -> zeta^{je'} u with e' = e, j = 0..d/e-1; requires
/// e | d.  The result's coordinates are verified to lie in F_q(u^{d/e}).
CurvePoint trace_to_level(const CurveContext& ctx, const CurvePoint& pt, int64_t e);

/// Parity vector over F_2, length d.
using SelmerVector = std::vector<int>;

/// e_j = ord_{u=zeta^j}(x+1) mod 2; requires d even, P not O or Q_1.
SelmerVector selmer_image(const CurveContext& ctx, const CurvePoint& pt);

/// The ambient 2-Selmer space inside (Z/2)^d: the full space when
/// (q-1)/d is even, else the codimension-2 subspace where the even-index
/// and odd-index coordinates each sum to zero.
struct SelmerSpace {
    int64_t d = 0;
    bool full = false;
    int64_t dimension = 0;  // d or d-2

    bool contains(const SelmerVector& v) const;
};

SelmerSpace selmer_space(int64_t q, int64_t d);

/// Dimension of the F_2-span of a set of Selmer vectors.
int64_t selmer_span_dimension(std::vector<SelmerVector> vectors);

/// Height Gram matrix of R_0..R_{d/2-1} (closed form: p^f on the diagonal,
/// 0 elsewhere) with its exactly computed determinant.
struct GramMatrix {
    int64_t size = 0;
    std::vector<std::vector<mpq_class>> entries;
    mpq_class determinant;  // computed by exact elimination
};

/// Requires d = 2(p^f - 1).
GramMatrix height_gram(const CurveContext& ctx);

/// Necessary condition for the 2-divisibility of the two combinations
/// sum_{i<d/4} R_{2i} + P2_{(1+d/4) mod 2} and
/// sum_{i<d/4} R_{2i+1} + P2_{(d/4) mod 2}:
/// both Selmer images must vanish.  Requires d = 2(p^f-1), 4 | d.
bool divisibility_necessary_check(const CurveContext& ctx);

}  // namespace leglab
