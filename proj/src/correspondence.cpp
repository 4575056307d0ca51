#include "leglab/correspondence.hpp"

#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "leglab/errors.hpp"
#include "leglab/finite_field.hpp"
#include "leglab/intarith.hpp"

namespace leglab {

void MultiPoly::insert_term(const Expo& e, int64_t c) {
    c = mod_nonneg(c, p_);
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second = mod_nonneg(it->second + c, p_);
        if (it->second == 0) terms_.erase(it);
    }
}

MultiPoly MultiPoly::constant(int64_t p, int64_t c) {
    MultiPoly out(p);
    out.insert_term({0, 0, 0, 0}, c);
    return out;
}

MultiPoly MultiPoly::monomial(int64_t p, int64_t c, const Expo& expo) {
    for (int32_t e : expo)
        if (e < 0) throw std::domain_error("MultiPoly: negative exponent");
    MultiPoly out(p);
    out.insert_term(expo, c);
    return out;
}

namespace {

void require_same_char(const MultiPoly& a, const MultiPoly& b) {
    if (a.characteristic() != b.characteristic())
        throw std::domain_error("MultiPoly: mixed characteristics");
}

}  // namespace

MultiPoly MultiPoly::operator+(const MultiPoly& rhs) const {
    require_same_char(*this, rhs);
    MultiPoly out = *this;
    for (const auto& [e, c] : rhs.terms_) out.insert_term(e, c);
    return out;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly out(p_);
    for (const auto& [e, c] : terms_) out.insert_term(e, -c);
    return out;
}

MultiPoly MultiPoly::operator-(const MultiPoly& rhs) const { return *this + (-rhs); }

MultiPoly MultiPoly::operator*(const MultiPoly& rhs) const {
    require_same_char(*this, rhs);
    MultiPoly out(p_);
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : rhs.terms_) {
            Expo e{e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]};
            out.insert_term(e, mod_nonneg(c1 * c2, p_));
        }
    return out;
}

bool MultiPoly::operator==(const MultiPoly& rhs) const {
    return p_ == rhs.p_ && terms_ == rhs.terms_;
}

MultiPoly MultiPoly::pow(int64_t e) const {
    if (e < 0) throw std::domain_error("MultiPoly::pow: negative exponent");
    MultiPoly result = constant(p_, 1);
    MultiPoly base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return result;
}

MultiPoly MultiPoly::reduce_mod_relations(int64_t d, const MultiPoly& rel_z,
                                          const MultiPoly& rel_w) const {
    if (d < 1) throw std::domain_error("reduce_mod_relations: d must be positive");
    require_same_char(*this, rel_z);
    require_same_char(*this, rel_w);
    for (const auto& [e, c] : rel_z.terms())
        if (e[2] != 0 || e[3] != 0)
            throw std::domain_error("reduce_mod_relations: rel_z must be free of z and w");
    for (const auto& [e, c] : rel_w.terms())
        if (e[2] != 0 || e[3] != 0)
            throw std::domain_error("reduce_mod_relations: rel_w must be free of z and w");

    MultiPoly work = *this;
    bool changed = true;
    while (changed) {
        changed = false;
        MultiPoly next(p_);
        for (const auto& [e, c] : work.terms_) {
            if (e[2] >= d) {
                next = next + monomial(p_, c, {e[0], e[1], static_cast<int32_t>(e[2] - d), e[3]}) *
                                  rel_z;
                changed = true;
            } else if (e[3] >= d) {
                next = next + monomial(p_, c, {e[0], e[1], e[2], static_cast<int32_t>(e[3] - d)}) *
                                  rel_w;
                changed = true;
            } else {
                next.insert_term(e, c);
            }
        }
        work = std::move(next);
    }
    return work;
}

std::string MultiPoly::to_string() const {
    if (terms_.empty()) return "0";
    static const char* names[4] = {"x", "y", "z", "w"};
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) out << " + ";
        first = false;
        bool has_vars = e[0] || e[1] || e[2] || e[3];
        if (c != 1 || !has_vars) out << c;
        bool star = c != 1 || !has_vars;
        for (int v = 0; v < 4; ++v) {
            if (e[v] == 0) continue;
            if (star) out << "*";
            star = true;
            out << names[v];
            if (e[v] > 1) out << "^" << e[v];
        }
    }
    return out.str();
}

namespace {

int64_t inv_mod(int64_t a, int64_t m) {
    int64_t r0 = m, r1 = mod_nonneg(a, m);
    int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        int64_t quot = r0 / r1;
        int64_t r2 = r0 - quot * r1;
        int64_t s2 = s0 - quot * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if (r0 != 1) throw std::domain_error("inv_mod: not invertible");
    return mod_nonneg(s0, m);
}

FFElem eval_multipoly(const MultiPoly& poly, const FieldContext& f, FFElem x, FFElem y,
                      FFElem z, FFElem w) {
    FFElem acc = 0;
    for (const auto& [e, c] : poly.terms()) {
        FFElem term = f.from_int(c);
        term = f.mul(term, f.pow(x, e[0]));
        term = f.mul(term, f.pow(y, e[1]));
        term = f.mul(term, f.pow(z, e[2]));
        term = f.mul(term, f.pow(w, e[3]));
        acc = f.add(acc, term);
    }
    return acc;
}

/// Uniform d-th root of rhs in the field, or nullopt when none exists.
std::optional<FFElem> sample_dth_root(const FieldContext& f, FFElem rhs, int64_t d,
                                      std::mt19937_64& rng) {
    if (rhs == 0) return FFElem{0};
    int64_t group = f.size - 1;
    int64_t g = std::gcd(d, group);
    int64_t target = f.log_table[rhs];
    if (target % g != 0) return std::nullopt;
    int64_t m = group / g;
    int64_t base = m == 1 ? 0 : mod_nonneg((target / g) % m * inv_mod((d / g) % m, m), m);
    std::uniform_int_distribution<int64_t> pick(0, g - 1);
    int64_t log_root = mod_nonneg(base + pick(rng) * m, group);
    return f.exp_table[log_root];
}

struct IdentitySetup {
    MultiPoly expr;   // polynomial that must vanish on the product variety
    MultiPoly rel_z;  // z^d = rel_z(x)
    MultiPoly rel_w;  // w^d = rel_w(y)
};

MultiPoly var(int64_t p, int v) {
    MultiPoly::Expo e{0, 0, 0, 0};
    e[v] = 1;
    return MultiPoly::monomial(p, 1, e);
}

IdentitySetup setup_phi(int64_t p, int64_t d, bool mutated) {
    MultiPoly x = var(p, 0), y = var(p, 1);
    MultiPoly one = MultiPoly::constant(p, 1);
    MultiPoly x2p1 = x * x + one;
    MultiPoly X = mutated ? x2p1 : -x2p1;
    MultiPoly Y = x * y * x2p1;
    MultiPoly Ud = MultiPoly::monomial(
        p, 1, {0, 0, static_cast<int32_t>(d), static_cast<int32_t>(d)});
    IdentitySetup s{Y * Y - X * (X + one) * (X + Ud), -(x * x + one), -(y * y + one)};
    return s;
}

IdentitySetup setup_phi_prime(int64_t p, int64_t d, bool mutated) {
    MultiPoly x = var(p, 0), y = var(p, 1);
    MultiPoly one = MultiPoly::constant(p, 1);
    MultiPoly T = MultiPoly::monomial(
        p, 1, {0, 0, static_cast<int32_t>(d), static_cast<int32_t>(d)});
    // x' = -T/y and y' = T x (1-y)/y; A = y x', B = y y'.  Multiplying the
    // relation y'^2 + x'y' + t'y' = x'^3 + t'x'^2 by y^3 (t' = T) gives
    // y B^2 + y A B + y^2 T B - A^3 - y T A^2 = 0.
    MultiPoly A = -T;
    MultiPoly B = mutated ? T * (one - y) : T * x * (one - y);
    MultiPoly expr = y * B * B + y * A * B + y * y * T * B - A * A * A - y * T * A * A;
    return IdentitySetup{std::move(expr), x * (one - x), y * (one - y)};
}

CorrespondenceResult run_identity(const IdentitySetup& setup, int64_t p, int64_t q, int64_t d,
                                  CorrespondenceMode mode, int64_t trials, uint64_t seed) {
    CorrespondenceResult result;
    result.mode = mode;

    if (mode == CorrespondenceMode::Symbolic) {
        MultiPoly reduced = setup.expr.reduce_mod_relations(d, setup.rel_z, setup.rel_w);
        result.holds = reduced.is_zero();
        if (!result.holds) result.witness = "normal form: " + reduced.to_string();
        return result;
    }

    if (trials < 1) throw std::domain_error("correspondence: trials must be >= 1");
    int64_t k = prime_power_exponent(q, p);
    if (k == 0) throw std::domain_error("correspondence: q must be a power of p");
    auto field = make_field(p, k);
    const FieldContext& f = *field;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int64_t> pick(0, f.size - 1);

    int64_t attempts_left = trials * 200 + 1000;
    while (result.trials_done < trials) {
        if (--attempts_left < 0)
            throw resource_error("correspondence: could not sample enough variety points");
        FFElem x = pick(rng);
        FFElem y = pick(rng);
        auto z = sample_dth_root(f, eval_multipoly(setup.rel_z, f, x, y, 0, 0), d, rng);
        if (!z) continue;
        auto w = sample_dth_root(f, eval_multipoly(setup.rel_w, f, x, y, 0, 0), d, rng);
        if (!w) continue;
        ++result.trials_done;
        FFElem value = eval_multipoly(setup.expr, f, x, y, *z, *w);
        if (value != 0) {
            std::ostringstream witness;
            witness << "point over F_" << q << ": x=" << x << " y=" << y << " z=" << *z
                    << " w=" << *w << " value=" << value;
            result.holds = false;
            result.witness = witness.str();
            return result;
        }
    }
    result.holds = true;
    return result;
}

}  // namespace

CorrespondenceResult verify_phi_identity(int64_t p, int64_t q, int64_t d,
                                         CorrespondenceMode mode, int64_t trials,
                                         uint64_t seed, bool mutated) {
    if (!is_prime_i64(p) || p == 2)
        throw std::domain_error("verify_phi_identity: p must be an odd prime");
    if (d < 1 || d % p == 0)
        throw std::domain_error("verify_phi_identity: need d >= 1 with p not dividing d");
    return run_identity(setup_phi(p, d, mutated), p, q, d, mode, trials, seed);
}

CorrespondenceResult verify_phi_prime_identity(int64_t p, int64_t q, int64_t d,
                                               CorrespondenceMode mode, int64_t trials,
                                               uint64_t seed, bool mutated) {
    if (!is_prime_i64(p))
        throw std::domain_error("verify_phi_prime_identity: p must be prime");
    if (d < 1 || d % p == 0)
        throw std::domain_error("verify_phi_prime_identity: need d >= 1 with p not dividing d");
    return run_identity(setup_phi_prime(p, d, mutated), p, q, d, mode, trials, seed);
}

}  // namespace leglab
