#include "leglab/function_field_curve.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "leglab/errors.hpp"
#include "leglab/intarith.hpp"

namespace leglab {

namespace {

const FieldContext& require_same_field(const FqPoly& a, const FqPoly& b) {
    if (!a.field || !b.field) throw std::domain_error("polynomial without a field");
    if (a.field != b.field &&
        (a.field->p != b.field->p || a.field->k != b.field->k ||
         a.field->modulus != b.field->modulus))
        throw std::domain_error("polynomials over different fields");
    return *a.field;
}

void trim(FqPoly& a) {
    while (!a.c.empty() && a.c.back() == 0) a.c.pop_back();
}

FqPoly monic(const FqPoly& a) {
    if (a.is_zero() || a.c.back() == 1) return a;
    const FieldContext& f = *a.field;
    FFElem scale = f.inv(a.c.back());
    FqPoly out = a;
    for (FFElem& coeff : out.c) coeff = f.mul(coeff, scale);
    return out;
}

/// Divides a by (u - r) in place; requires a(r) = 0.
void deflate_at_root(FqPoly& a, FFElem r) {
    const FieldContext& f = *a.field;
    std::vector<FFElem> q(a.c.size() - 1);
    FFElem carry = 0;
    for (size_t k = a.c.size(); k-- > 1;) {
        carry = f.add(a.c[k], f.mul(r, carry));
        q[k - 1] = carry;
    }
    a.c = std::move(q);
    trim(a);
}

}  // namespace

FqPoly poly_zero(std::shared_ptr<const FieldContext> f) { return FqPoly{std::move(f), {}}; }

FqPoly poly_const(std::shared_ptr<const FieldContext> f, FFElem a) {
    FqPoly out{std::move(f), {a}};
    trim(out);
    return out;
}

FqPoly poly_monomial(std::shared_ptr<const FieldContext> f, FFElem a, int64_t k) {
    if (k < 0) throw std::domain_error("poly_monomial: negative degree");
    if (a == 0) return poly_zero(std::move(f));
    FqPoly out{std::move(f), std::vector<FFElem>(k + 1, 0)};
    out.c[k] = a;
    return out;
}

FqPoly poly_add(const FqPoly& a, const FqPoly& b) {
    const FieldContext& f = require_same_field(a, b);
    FqPoly out{a.field, std::vector<FFElem>(std::max(a.c.size(), b.c.size()), 0)};
    for (size_t k = 0; k < out.c.size(); ++k) {
        FFElem lhs = k < a.c.size() ? a.c[k] : 0;
        FFElem rhs = k < b.c.size() ? b.c[k] : 0;
        out.c[k] = f.add(lhs, rhs);
    }
    trim(out);
    return out;
}

FqPoly poly_neg(const FqPoly& a) {
    FqPoly out = a;
    for (FFElem& coeff : out.c) coeff = a.field->neg(coeff);
    return out;
}

FqPoly poly_sub(const FqPoly& a, const FqPoly& b) { return poly_add(a, poly_neg(b)); }

FqPoly poly_mul(const FqPoly& a, const FqPoly& b) {
    const FieldContext& f = require_same_field(a, b);
    if (a.is_zero() || b.is_zero()) return poly_zero(a.field);
    FqPoly out{a.field, std::vector<FFElem>(a.c.size() + b.c.size() - 1, 0)};
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            out.c[i + j] = f.add(out.c[i + j], f.mul(a.c[i], b.c[j]));
    }
    return out;
}

std::pair<FqPoly, FqPoly> poly_divmod(const FqPoly& a, const FqPoly& b) {
    const FieldContext& f = require_same_field(a, b);
    if (b.is_zero()) throw std::domain_error("poly_divmod: division by zero");
    if (a.c.size() < b.c.size()) return {poly_zero(a.field), a};
    FqPoly rem = a;
    FqPoly quot{a.field, std::vector<FFElem>(a.c.size() - b.c.size() + 1, 0)};
    FFElem lead_inv = f.inv(b.c.back());
    for (size_t k = quot.c.size(); k-- > 0;) {
        if (rem.c.size() < b.c.size() + k) continue;
        FFElem coeff = f.mul(rem.c[b.c.size() - 1 + k], lead_inv);
        if (coeff == 0) continue;
        quot.c[k] = coeff;
        for (size_t j = 0; j < b.c.size(); ++j)
            rem.c[j + k] = f.sub(rem.c[j + k], f.mul(coeff, b.c[j]));
    }
    trim(rem);
    trim(quot);
    return {quot, rem};
}

FqPoly poly_gcd(const FqPoly& a, const FqPoly& b) {
    require_same_field(a, b);
    FqPoly x = a, y = b;
    while (!y.is_zero()) {
        FqPoly r = poly_divmod(x, y).second;
        x = std::move(y);
        y = std::move(r);
    }
    return monic(x);
}

FqPoly poly_pow(const FqPoly& a, int64_t e) {
    if (e < 0) throw std::domain_error("poly_pow: negative exponent");
    FqPoly result = poly_const(a.field, 1);
    FqPoly base = a;
    while (e > 0) {
        if (e & 1) result = poly_mul(result, base);
        e >>= 1;
        if (e > 0) base = poly_mul(base, base);
    }
    return result;
}

bool poly_eq(const FqPoly& a, const FqPoly& b) {
    require_same_field(a, b);
    return a.c == b.c;
}

FFElem poly_eval(const FqPoly& a, FFElem x) {
    const FieldContext& f = *a.field;
    FFElem acc = 0;
    for (size_t k = a.c.size(); k-- > 0;) acc = f.add(f.mul(acc, x), a.c[k]);
    return acc;
}

FqPoly poly_scale_var(const FqPoly& a, FFElem scale) {
    const FieldContext& f = *a.field;
    FqPoly out = a;
    FFElem power = 1;
    for (size_t k = 0; k < out.c.size(); ++k) {
        out.c[k] = f.mul(out.c[k], power);
        power = f.mul(power, scale);
    }
    trim(out);
    return out;
}

int64_t poly_root_multiplicity(const FqPoly& a, FFElem r) {
    if (a.is_zero()) throw std::domain_error("poly_root_multiplicity: zero polynomial");
    FqPoly work = a;
    int64_t mult = 0;
    while (!work.c.empty() && poly_eval(work, r) == 0) {
        deflate_at_root(work, r);
        ++mult;
    }
    return mult;
}

RatFunc rf_make(const FqPoly& num, const FqPoly& den) {
    require_same_field(num, den);
    if (den.is_zero()) throw std::domain_error("rf_make: zero denominator");
    if (num.is_zero()) return RatFunc{poly_zero(num.field), poly_const(num.field, 1)};
    FqPoly g = poly_gcd(num, den);
    FqPoly n = poly_divmod(num, g).first;
    FqPoly d = poly_divmod(den, g).first;
    const FieldContext& f = *num.field;
    FFElem scale = f.inv(d.c.back());
    for (FFElem& coeff : n.c) coeff = f.mul(coeff, scale);
    for (FFElem& coeff : d.c) coeff = f.mul(coeff, scale);
    return RatFunc{std::move(n), std::move(d)};
}

RatFunc rf_from_poly(const FqPoly& p) { return RatFunc{p, poly_const(p.field, 1)}; }

RatFunc rf_const(std::shared_ptr<const FieldContext> f, FFElem a) {
    return RatFunc{poly_const(f, a), poly_const(std::move(f), 1)};
}

RatFunc rf_add(const RatFunc& a, const RatFunc& b) {
    return rf_make(poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den)),
                   poly_mul(a.den, b.den));
}

RatFunc rf_neg(const RatFunc& a) { return RatFunc{poly_neg(a.num), a.den}; }

RatFunc rf_sub(const RatFunc& a, const RatFunc& b) { return rf_add(a, rf_neg(b)); }

RatFunc rf_mul(const RatFunc& a, const RatFunc& b) {
    return rf_make(poly_mul(a.num, b.num), poly_mul(a.den, b.den));
}

RatFunc rf_div(const RatFunc& a, const RatFunc& b) {
    if (b.num.is_zero()) throw std::domain_error("rf_div: division by zero");
    return rf_make(poly_mul(a.num, b.den), poly_mul(a.den, b.num));
}

bool rf_eq(const RatFunc& a, const RatFunc& b) {
    return poly_eq(a.num, b.num) && poly_eq(a.den, b.den);
}

bool rf_is_zero(const RatFunc& a) { return a.num.is_zero(); }

RatFunc rf_scale_var(const RatFunc& a, FFElem scale) {
    return rf_make(poly_scale_var(a.num, scale), poly_scale_var(a.den, scale));
}

int64_t rf_valuation_at(const RatFunc& a, FFElem r) {
    if (rf_is_zero(a)) throw std::domain_error("rf_valuation_at: zero function");
    return poly_root_multiplicity(a.num, r) - poly_root_multiplicity(a.den, r);
}

bool rf_in_subfield(const RatFunc& a, int64_t m) {
    if (m < 1) throw std::domain_error("rf_in_subfield: m must be positive");
    auto supported = [m](const FqPoly& p) {
        for (size_t k = 0; k < p.c.size(); ++k)
            if (p.c[k] != 0 && static_cast<int64_t>(k) % m != 0) return false;
        return true;
    };
    return supported(a.num) && supported(a.den);
}

FFElem CurveContext::zeta_pow(int64_t j) const { return field->pow(zeta, mod_nonneg(j, d)); }

CurveContext make_curve_context(int64_t p, int64_t q, int64_t d, std::optional<int64_t> f,
                                int64_t field_cap) {
    if (!is_prime_i64(p) || p == 2)
        throw std::domain_error("make_curve_context: p must be an odd prime");
    int64_t k = prime_power_exponent(q, p);
    if (k == 0) throw std::domain_error("make_curve_context: q must be a power of p");
    if (d < 1 || std::gcd(d, p) != 1)
        throw std::domain_error("make_curve_context: need d >= 1 with gcd(d,p)=1");
    if ((q - 1) % d != 0)
        throw std::domain_error("make_curve_context: need q = 1 mod d");
    if (f) {
        if (*f < 1) throw std::domain_error("make_curve_context: f must be >= 1");
        int64_t pf = 1;
        for (int64_t j = 0; j < *f; ++j) pf *= p;
        if (d != 2 * (pf - 1) && d != pf + 1)
            throw std::domain_error("make_curve_context: d matches neither 2(p^f-1) nor p^f+1");
    }
    CurveContext ctx;
    ctx.p = p;
    ctx.q = q;
    ctx.d = d;
    ctx.f = f;
    ctx.field = make_field(p, k, std::nullopt, field_cap);
    ctx.zeta = ctx.field->pow(ctx.field->generator, (q - 1) / d);
    return ctx;
}

namespace {

/// Right-hand side x(x+1)(x+u^d) of the curve equation.
RatFunc curve_rhs(const CurveContext& ctx, const RatFunc& x) {
    RatFunc one = rf_const(ctx.field, 1);
    RatFunc t = rf_from_poly(poly_monomial(ctx.field, 1, ctx.d));
    return rf_mul(rf_mul(x, rf_add(x, one)), rf_add(x, t));
}

}  // namespace

bool on_curve(const CurveContext& ctx, const CurvePoint& pt) {
    if (pt.infinity) return true;
    return rf_eq(rf_mul(pt.y, pt.y), curve_rhs(ctx, pt.x));
}

CurvePoint negate(const CurveContext& ctx, const CurvePoint& pt) {
    (void)ctx;
    if (pt.infinity) return pt;
    return CurvePoint::affine(pt.x, rf_neg(pt.y));
}

CurvePoint add(const CurveContext& ctx, const CurvePoint& p1, const CurvePoint& p2) {
    if (p1.infinity) return p2;
    if (p2.infinity) return p1;
    RatFunc lambda = rf_const(ctx.field, 0);
    if (rf_eq(p1.x, p2.x)) {
        if (rf_eq(p1.y, rf_neg(p2.y))) return CurvePoint::at_infinity();
        // Tangent slope of y^2 = x^3 + (1+t)x^2 + tx.
        RatFunc t = rf_from_poly(poly_monomial(ctx.field, 1, ctx.d));
        RatFunc a2 = rf_add(rf_const(ctx.field, 1), t);
        RatFunc three = rf_const(ctx.field, ctx.field->from_int(3));
        RatFunc two = rf_const(ctx.field, ctx.field->from_int(2));
        RatFunc numer = rf_add(rf_add(rf_mul(three, rf_mul(p1.x, p1.x)),
                                      rf_mul(two, rf_mul(a2, p1.x))),
                               t);
        lambda = rf_div(numer, rf_mul(two, p1.y));
    } else {
        lambda = rf_div(rf_sub(p2.y, p1.y), rf_sub(p2.x, p1.x));
    }
    RatFunc t = rf_from_poly(poly_monomial(ctx.field, 1, ctx.d));
    RatFunc a2 = rf_add(rf_const(ctx.field, 1), t);
    RatFunc x3 = rf_sub(rf_sub(rf_sub(rf_mul(lambda, lambda), a2), p1.x), p2.x);
    RatFunc y3 = rf_sub(rf_mul(lambda, rf_sub(p1.x, x3)), p1.y);
    return CurvePoint::affine(std::move(x3), std::move(y3));
}

CurvePoint scalar_mul(const CurveContext& ctx, int64_t n, const CurvePoint& pt) {
    CurvePoint base = pt;
    if (n < 0) {
        base = negate(ctx, base);
        n = -n;
    }
    CurvePoint acc = CurvePoint::at_infinity();
    while (n > 0) {
        if (n & 1) acc = add(ctx, acc, base);
        n >>= 1;
        if (n > 0) base = add(ctx, base, base);
    }
    return acc;
}

bool point_eq(const CurvePoint& p1, const CurvePoint& p2) {
    if (p1.infinity || p2.infinity) return p1.infinity == p2.infinity;
    return rf_eq(p1.x, p2.x) && rf_eq(p1.y, p2.y);
}

CurvePoint torsion_Q0(const CurveContext& ctx) {
    return CurvePoint::affine(rf_const(ctx.field, 0), rf_const(ctx.field, 0));
}

CurvePoint torsion_Q1(const CurveContext& ctx) {
    return CurvePoint::affine(rf_const(ctx.field, ctx.field->neg(1)), rf_const(ctx.field, 0));
}

CurvePoint torsion_Qt(const CurveContext& ctx) {
    return CurvePoint::affine(rf_from_poly(poly_monomial(ctx.field, ctx.field->neg(1), ctx.d)),
                              rf_const(ctx.field, 0));
}

CurvePoint torsion_P2(const CurveContext& ctx, int64_t i) {
    if (ctx.d % 2 != 0) throw std::domain_error("torsion_P2: d must be even");
    if (i != 0 && i != 1) throw std::domain_error("torsion_P2: i must be 0 or 1");
    FFElem sign = i == 0 ? FFElem{1} : ctx.field->neg(1);
    RatFunc x = rf_from_poly(poly_monomial(ctx.field, sign, ctx.d / 2));
    RatFunc y = rf_mul(x, rf_add(x, rf_const(ctx.field, 1)));
    CurvePoint pt = CurvePoint::affine(std::move(x), std::move(y));
    if (!on_curve(ctx, pt)) throw consistency_error("torsion_P2: point fails curve equation");
    return pt;
}

CurvePoint point_R(const CurveContext& ctx, int64_t i) {
    if (!ctx.f) throw std::domain_error("point_R: context lacks f");
    int64_t pf = 1;
    for (int64_t j = 0; j < *ctx.f; ++j) pf *= ctx.p;
    if (ctx.d != 2 * (pf - 1)) throw std::domain_error("point_R: requires d = 2(p^f - 1)");
    if (i < 0 || i >= ctx.d) throw std::domain_error("point_R: i out of range");

    // R(u) = (u^{-2}, u^{-3} (u^2+1)^{(p^f+1)/2}), then u -> zeta^i u.
    FqPoly one = poly_const(ctx.field, 1);
    FqPoly u2p1 = poly_add(poly_monomial(ctx.field, 1, 2), one);
    RatFunc x = rf_make(one, poly_monomial(ctx.field, 1, 2));
    RatFunc y = rf_make(poly_pow(u2p1, (pf + 1) / 2), poly_monomial(ctx.field, 1, 3));
    CurvePoint pt = galois_apply(ctx, i, CurvePoint::affine(std::move(x), std::move(y)));
    if (!on_curve(ctx, pt)) throw consistency_error("point_R: point fails curve equation");
    return pt;
}

CurvePoint point_P(const CurveContext& ctx, int64_t i) {
    if (!ctx.f) throw std::domain_error("point_P: context lacks f");
    int64_t pf = 1;
    for (int64_t j = 0; j < *ctx.f; ++j) pf *= ctx.p;
    if (ctx.d != pf + 1) throw std::domain_error("point_P: requires d = p^f + 1");
    if (i < 0 || i >= ctx.d) throw std::domain_error("point_P: i out of range");

    RatFunc x = rf_from_poly(poly_monomial(ctx.field, ctx.zeta_pow(i), 1));
    RatFunc xp1 = rf_add(x, rf_const(ctx.field, 1));
    RatFunc y = rf_mul(x, rf_make(poly_pow(xp1.num, ctx.d / 2), poly_const(ctx.field, 1)));
    CurvePoint pt = CurvePoint::affine(std::move(x), std::move(y));
    if (!on_curve(ctx, pt)) throw consistency_error("point_P: point fails curve equation");
    return pt;
}

CurvePoint galois_apply(const CurveContext& ctx, int64_t j, const CurvePoint& pt) {
    if (pt.infinity) return pt;
    FFElem scale = ctx.zeta_pow(j);
    return CurvePoint::affine(rf_scale_var(pt.x, scale), rf_scale_var(pt.y, scale));
}

CurvePoint trace_to_level(const CurveContext& ctx, const CurvePoint& pt, int64_t e) {
    if (e < 1 || ctx.d % e != 0) throw std::domain_error("trace_to_level: e must divide d");
    CurvePoint acc = CurvePoint::at_infinity();
    for (int64_t j = 0; j < ctx.d / e; ++j) acc = add(ctx, acc, galois_apply(ctx, j * e, pt));
    if (!acc.infinity) {
        int64_t m = ctx.d / e;
        if (!rf_in_subfield(acc.x, m) || !rf_in_subfield(acc.y, m))
            throw consistency_error("trace_to_level: trace does not lie in F_q(u^" +
                                    std::to_string(m) + ")");
    }
    return acc;
}

SelmerVector selmer_image(const CurveContext& ctx, const CurvePoint& pt) {
    if (ctx.d % 2 != 0) throw std::domain_error("selmer_image: d must be even");
    if (pt.infinity) throw std::domain_error("selmer_image: undefined at infinity");
    RatFunc xp1 = rf_add(pt.x, rf_const(ctx.field, 1));
    if (rf_is_zero(xp1)) throw std::domain_error("selmer_image: undefined at Q_1");
    SelmerVector v(ctx.d, 0);
    for (int64_t j = 0; j < ctx.d; ++j)
        v[j] = static_cast<int>(mod_nonneg(rf_valuation_at(xp1, ctx.zeta_pow(j)), 2));
    return v;
}

bool SelmerSpace::contains(const SelmerVector& v) const {
    if (static_cast<int64_t>(v.size()) != d) return false;
    if (full) return true;
    int even_sum = 0;
    int odd_sum = 0;
    for (int64_t j = 0; j < d; ++j) (j % 2 == 0 ? even_sum : odd_sum) ^= v[j] & 1;
    return even_sum == 0 && odd_sum == 0;
}

SelmerSpace selmer_space(int64_t q, int64_t d) {
    if (d < 2 || d % 2 != 0) throw std::domain_error("selmer_space: d must be even");
    if ((q - 1) % d != 0) throw std::domain_error("selmer_space: need q = 1 mod d");
    SelmerSpace space;
    space.d = d;
    space.full = ((q - 1) / d) % 2 == 0;
    space.dimension = space.full ? d : d - 2;
    return space;
}

int64_t selmer_span_dimension(std::vector<SelmerVector> vectors) {
    int64_t rank = 0;
    size_t width = 0;
    for (const SelmerVector& v : vectors) width = std::max(width, v.size());
    for (size_t col = 0; col < width; ++col) {
        size_t pivot = rank;
        while (pivot < vectors.size() &&
               (col >= vectors[pivot].size() || (vectors[pivot][col] & 1) == 0))
            ++pivot;
        if (pivot == vectors.size()) continue;
        std::swap(vectors[pivot], vectors[rank]);
        for (size_t row = 0; row < vectors.size(); ++row) {
            if (row == static_cast<size_t>(rank)) continue;
            if (col < vectors[row].size() && (vectors[row][col] & 1))
                for (size_t j = 0; j < vectors[row].size(); ++j)
                    vectors[row][j] ^= vectors[rank][j];
        }
        ++rank;
    }
    return rank;
}

GramMatrix height_gram(const CurveContext& ctx) {
    if (!ctx.f) throw std::domain_error("height_gram: context lacks f");
    int64_t pf = 1;
    for (int64_t j = 0; j < *ctx.f; ++j) pf *= ctx.p;
    if (ctx.d != 2 * (pf - 1)) throw std::domain_error("height_gram: requires d = 2(p^f - 1)");

    GramMatrix gram;
    gram.size = ctx.d / 2;
    gram.entries.assign(gram.size, std::vector<mpq_class>(gram.size, 0));
    for (int64_t i = 0; i < gram.size; ++i) gram.entries[i][i] = pf;

    // Exact Gaussian elimination; the matrix is small (size d/2).
    std::vector<std::vector<mpq_class>> work = gram.entries;
    gram.determinant = 1;
    for (int64_t col = 0; col < gram.size; ++col) {
        int64_t pivot = col;
        while (pivot < gram.size && work[pivot][col] == 0) ++pivot;
        if (pivot == gram.size) {
            gram.determinant = 0;
            return gram;
        }
        if (pivot != col) {
            std::swap(work[pivot], work[col]);
            gram.determinant = -gram.determinant;
        }
        gram.determinant *= work[col][col];
        for (int64_t row = col + 1; row < gram.size; ++row) {
            if (work[row][col] == 0) continue;
            mpq_class factor = work[row][col] / work[col][col];
            for (int64_t j = col; j < gram.size; ++j) work[row][j] -= factor * work[col][j];
        }
    }
    gram.determinant.canonicalize();
    return gram;
}

bool divisibility_necessary_check(const CurveContext& ctx) {
    if (!ctx.f) throw std::domain_error("divisibility_necessary_check: context lacks f");
    int64_t pf = 1;
    for (int64_t j = 0; j < *ctx.f; ++j) pf *= ctx.p;
    if (ctx.d != 2 * (pf - 1) || ctx.d % 4 != 0)
        throw std::domain_error("divisibility_necessary_check: requires 4 | d = 2(p^f - 1)");

    auto combination_image_is_zero = [&](int64_t parity, int64_t torsion_index) {
        std::vector<CurvePoint> parts;
        for (int64_t i = 0; i < ctx.d / 4; ++i) parts.push_back(point_R(ctx, 2 * i + parity));
        parts.push_back(torsion_P2(ctx, torsion_index));

        CurvePoint sum = CurvePoint::at_infinity();
        for (const CurvePoint& part : parts) sum = add(ctx, sum, part);

        SelmerVector image(ctx.d, 0);
        if (!sum.infinity) {
            RatFunc xp1 = rf_add(sum.x, rf_const(ctx.field, 1));
            if (!rf_is_zero(xp1)) {
                image = selmer_image(ctx, sum);
            } else {
                // The sum landed on Q_1, outside the map's domain; use
                // linearity over the summands instead.
                for (const CurvePoint& part : parts) {
                    SelmerVector v = selmer_image(ctx, part);
                    for (int64_t j = 0; j < ctx.d; ++j) image[j] ^= v[j];
                }
            }
        }
        return std::all_of(image.begin(), image.end(), [](int b) { return b == 0; });
    };

    return combination_image_is_zero(0, (1 + ctx.d / 4) % 2) &&
           combination_image_is_zero(1, (ctx.d / 4) % 2);
}

}  // namespace leglab
