#include "leglab/jacobi.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "leglab/errors.hpp"
#include "leglab/intarith.hpp"

namespace leglab {

namespace {

bool same_field(const FieldContext& a, const FieldContext& b) {
    if (&a == &b) return true;  // cached fields share contexts
    return a.p == b.p && a.k == b.k && a.modulus == b.modulus;
}

/// q = p^k with p prime; returns k.
int64_t base_exponent(int64_t p, int64_t q) {
    int64_t k = prime_power_exponent(q, p);
    if (k == 0)
        throw std::domain_error("q=" + std::to_string(q) + " is not a power of p=" +
                                std::to_string(p));
    return k;
}

/// q^|o| guarded against the field cap; throws resource_error beyond.
int64_t orbit_field_size(int64_t q, int64_t orbit_size, int64_t field_cap) {
    int64_t size = 1;
    for (int64_t j = 0; j < orbit_size; ++j) {
        if (size > field_cap / q)
            throw resource_error("q^|o| exceeds field cap " + std::to_string(field_cap));
        size *= q;
    }
    return size;
}

struct OrbitSumSetup {
    std::shared_ptr<const FieldContext> field;
    int64_t big_q;  // q^|o|
    int64_t nu;     // big_q = p^nu
};

OrbitSumSetup setup_orbit_field(int64_t p, int64_t q, int64_t d, const Orbit& o,
                                int64_t field_cap) {
    if (std::gcd(d, p) != 1) throw std::domain_error("gcd(d,p) must be 1");
    if (o.elements.empty() || o.e <= 2)
        throw std::domain_error("orbit must exclude {0} and {d/2}");
    for (int64_t i : o.elements)
        if (i <= 0 || i >= d || (d % 2 == 0 && i == d / 2))
            throw std::domain_error("orbit element out of range");
    int64_t k = base_exponent(p, q);
    OrbitSumSetup s;
    s.big_q = orbit_field_size(q, o.size, field_cap);
    s.nu = k * o.size;
    s.field = make_field(p, s.nu, std::nullopt, std::max(field_cap, s.big_q));
    if ((s.big_q - 1) % o.e != 0)
        throw consistency_error("orbit size is not the order of q mod e");
    return s;
}

/// chi_i = t^{(Q-1)i/d} as a CharacterSpec; the exponent (Q-1)i/d equals
/// ((Q-1)/e) * (i/gcd(d,i)) and is integral because e | Q-1.
CharacterSpec chi_for_index(const OrbitSumSetup& s, int64_t d, int64_t i) {
    int64_t g = std::gcd(d, i);
    int64_t e = d / g;
    return make_character(s.field, ((s.big_q - 1) / e) * (i / g));
}

JacobiSumValue orbit_sum(int64_t p, int64_t q, int64_t d, const Orbit& o,
                         int64_t field_cap, JacobiVariant variant) {
    OrbitSumSetup s = setup_orbit_field(p, q, d, o, field_cap);

    // Evaluate at every representative; Frobenius invariance of Jacobi sums
    // makes them all equal, and we check that.
    CharacterSpec lambda;  // quadratic character, only defined for odd p
    if (variant == JacobiVariant::Standard)
        lambda = make_character(s.field, (s.big_q - 1) / 2);
    bool have = false;
    CycInt value(1);
    for (int64_t i : o.elements) {
        CharacterSpec chi = chi_for_index(s, d, i);
        CycInt ji = variant == JacobiVariant::Standard ? jacobi_sum(lambda, chi)
                                                       : jacobi_sum(chi, chi);
        if (!have) {
            value = ji;
            have = true;
        } else if (ji != value) {
            throw consistency_error("J_o depends on the orbit representative");
        }
    }

    JacobiSumValue out;
    out.orbit = o;
    out.p = p;
    out.q = q;
    out.nu = s.nu;
    out.field_size = s.big_q;
    out.value = value;
    return out;
}

}  // namespace

CycInt jacobi_sum(const CharacterSpec& chi1, const CharacterSpec& chi2) {
    if (!chi1.field || !chi2.field || !same_field(*chi1.field, *chi2.field))
        throw std::domain_error("jacobi_sum: characters live on different fields");
    const FieldContext& f = *chi1.field;
    int64_t group = f.size - 1;
    int64_t n0 = std::lcm(chi1.value_order, chi2.value_order);
    int64_t stride = group / n0;

    // Accumulate an exponent histogram in mu_{n0}: every nonzero summand is
    // zeta_{Q-1}^{m1 log u + m2 log v}, and the exponent is a multiple of
    // (Q-1)/n0 because it is a sum of multiples of (Q-1)/n1 and (Q-1)/n2.
    std::vector<int64_t> counts(n0, 0);
    FFElem minus_one = f.neg(f.one());
    for (FFElem u = 0; u < f.size; ++u) {
        FFElem v = f.sub(minus_one, u);
        int64_t exponent = 0;
        if (u == 0) {
            if (!chi1.trivial()) continue;  // chi1(0) = 0
        } else {
            exponent += chi1.exponent * f.log_table[u];
        }
        if (v == 0) {
            if (!chi2.trivial()) continue;  // chi2(0) = 0
        } else {
            exponent += chi2.exponent * f.log_table[v];
        }
        exponent %= group;
        if (exponent % stride != 0)
            throw consistency_error("jacobi_sum: summand outside mu_{n0}");
        counts[exponent / stride]++;
    }

    std::vector<mpz_class> coeffs(n0);
    for (int64_t j = 0; j < n0; ++j) coeffs[j] = counts[j];
    return CycInt(n0, std::move(coeffs));
}

JacobiSumValue jacobi_J_o(int64_t p, int64_t q, int64_t d, const Orbit& o,
                          int64_t field_cap) {
    if (p == 2) throw std::domain_error("jacobi_J_o: p must be odd (J_o needs lambda)");
    return orbit_sum(p, q, d, o, field_cap, JacobiVariant::Standard);
}

JacobiSumValue jacobi_Jprime_o(int64_t p, int64_t q, int64_t d, const Orbit& o,
                               int64_t field_cap) {
    return orbit_sum(p, q, d, o, field_cap, JacobiVariant::Prime);
}

ValuationProfile stickelberger_valuations(int64_t p, int64_t q, int64_t d,
                                          const Orbit& o, JacobiVariant variant) {
    if (std::gcd(d, p) != 1) throw std::domain_error("gcd(d,p) must be 1");
    if (o.e <= 2) throw std::domain_error("orbit must exclude {0} and {d/2}");
    int64_t k = base_exponent(p, q);
    int64_t nu = k * o.size;
    int64_t e = o.e, ip = o.i_prime;

    ValuationProfile profile;
    profile.e = e;
    profile.nu = nu;
    for (int64_t a = 1; a < e; ++a) {
        if (std::gcd(a, e) != 1) continue;
        mpq_class val(0);
        if (variant == JacobiVariant::Standard) {
            // Lift a to its odd representative mod 2e: <a~ p^j / 2> depends
            // on a mod 2, which a mod e leaves free when e is odd.
            int64_t a2 = (a % 2 == 1) ? a : a + e;
            // Third term <a(-i'-e/2)p^j/e> written over denominator 2e.
            int64_t third = mod_nonneg(-2 * ip - e, 2 * e);
            int64_t pj_2 = 1 % 2, pj_e = 1 % e, pj_2e = 1 % (2 * e);
            for (int64_t j = 0; j < nu; ++j) {
                val += mpq_class(mod_nonneg(a2 * pj_2, 2), 2);
                val += mpq_class(mod_nonneg(a2 * ip % e * pj_e, e), e);
                val += mpq_class(mod_nonneg(a2 % (2 * e) * third % (2 * e) * pj_2e, 2 * e),
                                 2 * e);
                pj_2 = pj_2 * (p % 2) % 2;
                pj_e = pj_e * (p % e) % e;
                pj_2e = pj_2e * (p % (2 * e)) % (2 * e);
            }
        } else {
            int64_t minus_two = mod_nonneg(-2 * a % e * ip, e);
            int64_t once = mod_nonneg(a % e * ip, e);
            int64_t pj_e = 1 % e;
            for (int64_t j = 0; j < nu; ++j) {
                val += mpq_class(2 * mod_nonneg(once * pj_e, e), e);
                val += mpq_class(mod_nonneg(minus_two * pj_e, e), e);
                pj_e = pj_e * (p % e) % e;
            }
        }
        val -= nu;
        mpq_class canonical = val;
        canonical.canonicalize();
        profile.valuations.emplace(a, canonical);
    }
    return profile;
}

Purity purity_check(const JacobiSumValue& j_value, bool balanced) {
    CycInt j2 = j_value.value * j_value.value;
    bool pure = equals_integer(j2, j_value.field_size);
    if (pure != balanced)
        throw consistency_error(
            "purity_check: J^2 = q^|o| is " + std::string(pure ? "true" : "false") +
            " but the balanced flag is " + std::string(balanced ? "true" : "false"));
    if (!pure) return Purity::NotPure;

    // Pure implies nu even (a balanced subgroup has even order, and nu is a
    // multiple of o_e(p)); the sign compares J against +-p^{nu/2}.
    if (j_value.nu % 2 != 0)
        throw consistency_error("purity_check: pure value with odd nu");
    mpz_class root;
    mpz_ui_pow_ui(root.get_mpz_t(), static_cast<unsigned long>(j_value.p),
                  static_cast<unsigned long>(j_value.nu / 2));
    if (equals_integer(j_value.value, root)) return Purity::PurePlus;
    if (equals_integer(j_value.value, -root)) return Purity::PureMinus;
    throw consistency_error("purity_check: pure value is not +-p^(nu/2)");
}

}  // namespace leglab
