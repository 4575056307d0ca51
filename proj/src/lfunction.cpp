#include "leglab/lfunction.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "leglab/errors.hpp"
#include "leglab/finite_field.hpp"
#include "leglab/intarith.hpp"

namespace leglab {

namespace {

mpz_class mpz_pow(int64_t base, int64_t expo) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base),
                  static_cast<unsigned long>(expo));
    return out;
}

int64_t checked_base_exponent(int64_t p, int64_t q) {
    int64_t k = prime_power_exponent(q, p);
    if (k == 0)
        throw std::domain_error("q=" + std::to_string(q) + " is not a power of p=" +
                                std::to_string(p));
    return k;
}

}  // namespace

LFactorization lfunction_factors(int64_t p, int64_t q, int64_t d, CurveTag curve,
                                 int64_t field_cap) {
    if (!is_prime_i64(p)) throw std::domain_error("lfunction_factors: p must be prime");
    if (p == 2 && curve == CurveTag::E)
        throw std::domain_error("lfunction_factors: curve E needs odd p (use EPrime)");
    checked_base_exponent(p, q);
    if (d < 1 || std::gcd(d, p) != 1)
        throw std::domain_error("lfunction_factors: need d >= 1 with gcd(d,p)=1");

    LFactorization lfac;
    lfac.p = p;
    lfac.q = q;
    lfac.d = d;
    lfac.curve = curve;
    if (d <= 2) return lfac;  // no orbits: L = 1

    for (const Orbit& o : orbits_mod_d(d, q % d)) {
        JacobiSumValue jv = curve == CurveTag::E ? jacobi_J_o(p, q, d, o, field_cap)
                                                 : jacobi_Jprime_o(p, q, d, o, field_cap);
        LFactor factor{jv.value * jv.value, o.size, o, false};
        factor.pure = equals_integer(factor.j_squared, jv.field_size);
        lfac.factors.push_back(std::move(factor));
    }
    // Degree check: orbit sizes cover Z/dZ minus {0} (and {d/2} when even).
    int64_t total = 0;
    for (const LFactor& factor : lfac.factors) total += factor.size;
    if (total != (d % 2 == 0 ? d - 2 : d - 1))
        throw consistency_error("lfunction_factors: orbit sizes do not sum to the degree");
    return lfac;
}

int64_t analytic_rank(const LFactorization& lfac) {
    int64_t rank = 0;
    for (const LFactor& factor : lfac.factors)
        if (factor.pure) ++rank;
    return rank;
}

int64_t QSpec::mod(int64_t e) const {
    if (e < 1) throw std::domain_error("QSpec::mod: e must be positive");
    if (value) {
        mpz_class r = *value % e;
        if (r < 0) r += e;
        return r.get_si();
    }
    if (residue) {
        auto [r, m] = *residue;
        if (m < 1 || m % e != 0)
            throw std::domain_error("QSpec: residue modulus " + std::to_string(m) +
                                    " does not determine q mod " + std::to_string(e));
        return mod_nonneg(r, e);
    }
    throw std::domain_error("QSpec: empty");
}

namespace {

RankResult rank_formula_core(int64_t p, const QSpec& q, int64_t d) {
    if (d < 1) throw std::domain_error("rank formula: d must be positive");
    if (std::gcd(p, d) != 1) throw std::domain_error("rank formula: p must not divide d");

    RankResult result;
    for (int64_t e : divisors(d)) {
        if (e <= 2) continue;
        int64_t q_mod = q.mod(e);
        if (std::gcd(q_mod, e) != 1)
            throw std::domain_error("rank formula: gcd(q,e) != 1 for e=" + std::to_string(e));
        RankResult::Row row;
        row.e = e;
        row.balanced = is_balanced(e, std::vector<int64_t>{p % e}).balanced;
        row.phi = euler_phi(e);
        row.order_q = multiplicative_order(q_mod, e);
        row.contribution = row.balanced ? row.phi / row.order_q : 0;
        result.rank += row.contribution;
        result.rows.push_back(row);
    }
    return result;
}

}  // namespace

RankResult rank_formula(int64_t p, const QSpec& q, int64_t d) {
    if (!is_prime_i64(p) || p == 2)
        throw std::domain_error("rank_formula: p must be an odd prime (see rank_formula_char2)");
    return rank_formula_core(p, q, d);
}

RankResult rank_formula_char2(const QSpec& q, int64_t d) {
    if (d % 2 == 0) throw std::domain_error("rank_formula_char2: d must be odd");
    return rank_formula_core(2, q, d);
}

mpz_class pointcount_coefficient(int64_t q, int64_t d, int64_t n, int64_t max_ops) {
    if (q < 3 || q % 2 == 0)
        throw std::domain_error("pointcount_coefficient: q must be an odd prime power");
    if (d < 1 || n < 1) throw std::domain_error("pointcount_coefficient: need d,n >= 1");
    int64_t p = smallest_prime_factor(q);
    int64_t k = checked_base_exponent(p, q);

    // Field F_{q^n}; the double loop is Q^2 elementary steps.
    int64_t big_q = 1;
    for (int64_t j = 0; j < n; ++j) {
        if (big_q > max_ops / q)
            throw resource_error("pointcount_coefficient: q^(2n) exceeds the loop bound");
        big_q *= q;
    }
    if (big_q > max_ops / big_q)
        throw resource_error("pointcount_coefficient: q^(2n) exceeds the loop bound");
    auto field = make_field(p, k * n, std::nullopt,
                            std::max(int64_t{1} << 20, big_q));
    const FieldContext& f = *field;

    // lambda(x) = +1 for nonzero squares, -1 for nonsquares, 0 at 0; via
    // discrete-log parity.  Precompute it for w = gamma(gamma+1).
    std::vector<int8_t> logw_parity(big_q);  // -1 marks w = 0
    for (FFElem g = 0; g < big_q; ++g) {
        FFElem w = f.mul(g, f.add(g, 1));
        logw_parity[g] = w == 0 ? int8_t{-1} : static_cast<int8_t>(f.log_table[w] & 1);
    }

    int64_t total = 0;
    for (FFElem beta = 0; beta < big_q; ++beta) {
        FFElem bd = f.pow(beta, d);
        int64_t lambda_sum = 0;
        for (FFElem g = 0; g < big_q; ++g) {
            if (logw_parity[g] < 0) continue;
            FFElem s = f.add(g, bd);
            if (s == 0) continue;
            lambda_sum += 1 - 2 * ((logw_parity[g] + f.log_table[s]) & 1);
        }
        total -= lambda_sum;  // a_beta = -sum lambda(...)
    }
    if (d % 2 == 0) total += 1;  // a_infty
    return mpz_class(total);
}

VerificationRecord verify_lfunction(int64_t p, int64_t q, int64_t d, int64_t n_max,
                                    int64_t max_ops, bool skip_past_bound) {
    if (!is_prime_i64(p) || p == 2)
        throw std::domain_error("verify_lfunction: p must be an odd prime");
    int64_t k = checked_base_exponent(p, q);
    if (n_max < 1) throw std::domain_error("verify_lfunction: n_max must be >= 1");

    VerificationRecord record;
    record.p = p;
    record.q = q;
    record.d = d;
    // The factored product lives at the prime-to-p part of d.
    int64_t d_eff = d;
    while (d_eff % p == 0) d_eff /= p;
    LFactorization lfac = lfunction_factors(p, q, d_eff, CurveTag::E);

    for (int64_t n = 1; n <= n_max; ++n) {
        // Loop-bound guard for this n.
        int64_t big_q = 1;
        bool too_big = false;
        for (int64_t j = 0; j < n && !too_big; ++j) {
            if (big_q > max_ops / q) too_big = true;
            else big_q *= q;
        }
        if (!too_big && big_q > max_ops / big_q) too_big = true;
        if (too_big) {
            if (skip_past_bound) break;
            throw resource_error("verify_lfunction: n=" + std::to_string(n) +
                                 " exceeds the loop bound");
        }

        VerificationRecord::Row row;
        row.n = n;

        // (i) brute-force point count over P^1(F_{q^n}).
        row.point_count = pointcount_coefficient(q, d, n, max_ops);

        // (ii) closed form -sum_{i=1, i != g/2}^{g-1} J(lambda, psi^i)^2
        // with g = gcd(q^n - 1, d) and psi of exact order g.
        auto field = make_field(p, k * n, std::nullopt,
                                std::max(int64_t{1} << 20, big_q));
        int64_t g = std::gcd(big_q - 1, d);
        CharacterSpec lambda = make_character(field, (big_q - 1) / 2);
        CycInt closed(1);
        for (int64_t i = 1; i < g; ++i) {
            if (g % 2 == 0 && i == g / 2) continue;
            CharacterSpec psi_i = make_character(field, (big_q - 1) / g * i);
            CycInt ji = jacobi_sum(lambda, psi_i);
            closed = closed + ji * ji;
        }
        closed = -closed;
        if (!closed.is_integer())
            throw consistency_error("verify_lfunction: closed form is not an integer");
        row.jacobi_form = closed.as_integer();

        // (iii) n-th log coefficient of the factored product:
        // c_n = -sum over |o| dividing n of |o| * (J_o^2)^(n/|o|).
        CycInt log_coeff(1);
        for (const LFactor& factor : lfac.factors) {
            if (n % factor.size != 0) continue;
            log_coeff = log_coeff +
                        factor.j_squared.pow(n / factor.size) * CycInt(1, mpz_class(factor.size));
        }
        log_coeff = -log_coeff;
        if (!log_coeff.is_integer())
            throw consistency_error("verify_lfunction: log coefficient is not an integer");
        row.log_coeff = log_coeff.as_integer();

        row.agree = row.point_count == row.jacobi_form && row.jacobi_form == row.log_coeff;
        record.all_agree = record.all_agree && row.agree;
        record.rows.push_back(std::move(row));
    }
    return record;
}

RankRelationResult rank_relation_check(int64_t p, int64_t f, int64_t q, int64_t field_cap) {
    if (!is_prime_i64(p) || p == 2)
        throw std::domain_error("rank_relation_check: p must be an odd prime");
    if (f < 1) throw std::domain_error("rank_relation_check: f must be >= 1");
    int64_t pf = 1;
    for (int64_t j = 0; j < f; ++j) pf *= p;
    int64_t d = 2 * (pf - 1);
    checked_base_exponent(p, q);
    if (q % d != 1)
        throw std::domain_error("rank_relation_check: need q = 1 mod d, d=" + std::to_string(d));

    RankRelationResult result;
    result.d = d;
    result.rank_level_d = rank_formula(p, QSpec::from_int(q), d).rank;
    result.rank_level_d2 = rank_formula(p, QSpec::from_int(q), d / 2).rank;

    // L-factor multisets at the two levels, compared at a common cyclotomic
    // order; the difference must be exactly d/2 copies of (q, 1).
    LFactorization top = lfunction_factors(p, q, d, CurveTag::E, field_cap);
    LFactorization bottom = lfunction_factors(p, q, d / 2, CurveTag::E, field_cap);
    int64_t common_order = std::lcm(int64_t{2}, d);
    std::map<std::pair<int64_t, std::vector<mpz_class>>, int64_t> delta;
    for (const LFactor& factor : top.factors)
        delta[{factor.size, factor.j_squared.lift_to_order(common_order).coeffs()}]++;
    for (const LFactor& factor : bottom.factors)
        delta[{factor.size, factor.j_squared.lift_to_order(common_order).coeffs()}]--;

    std::pair<int64_t, std::vector<mpz_class>> expected{
        1, CycInt(common_order, mpz_class(q)).coeffs()};
    result.factor_multiset_ok = true;
    for (const auto& [key, count] : delta) {
        if (count == 0) continue;
        if (!(key == expected && count == d / 2)) result.factor_multiset_ok = false;
    }
    if (delta.find(expected) == delta.end() || delta[expected] != d / 2)
        result.factor_multiset_ok = false;

    result.holds =
        result.factor_multiset_ok && (result.rank_level_d - result.rank_level_d2 == d / 2);
    return result;
}

BsdReport bsd_quantities(int64_t p, int64_t f, int64_t q) {
    if (!is_prime_i64(p) || p == 2)
        throw std::domain_error("bsd_quantities: p must be an odd prime");
    if (f < 1) throw std::domain_error("bsd_quantities: f must be >= 1");
    int64_t pf = 1;
    for (int64_t j = 0; j < f; ++j) pf *= p;
    int64_t d = 2 * (pf - 1);
    if (d < 4) throw std::domain_error("bsd_quantities: need d = 2(p^f - 1) >= 4");
    checked_base_exponent(p, q);
    if (q % d != 1)
        throw std::domain_error("bsd_quantities: need q = 1 mod d, d=" + std::to_string(d));

    BsdReport report;
    report.p = p;
    report.f = f;
    report.q = q;
    report.d = d;
    // tau(E/F_q(u)) = 2^{d+2} d^2 q^{1-d/2}; the level-2 curve uses d/4.
    // d = 2(p^f - 1) with p odd, so 4 | d and both exponents are integral.
    report.tamagawa_u = mpq_class(mpz_pow(2, d + 2) * d * d * q, mpz_pow(q, d / 2));
    report.tamagawa_u2 = mpq_class(mpz_pow(2, d / 2) * d * d * q, mpz_pow(q, d / 4));
    report.disc_wd = mpz_pow(p, f * d / 2);
    report.predicted_constraint =
        mpq_class(mpz_pow(2, pf + 1) * report.disc_wd, mpz_pow(q, d / 4));
    report.tamagawa_u.canonicalize();
    report.tamagawa_u2.canonicalize();
    report.predicted_constraint.canonicalize();
    return report;
}

}  // namespace leglab
