#include "leglab/finite_field.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

#include "leglab/errors.hpp"
#include "leglab/intarith.hpp"

namespace leglab {

namespace {

// Dense polynomials over F_p as ascending coefficient vectors with no
// trailing zeros; used only during field construction (before tables exist).
using PolyFp = std::vector<int64_t>;

void trim(PolyFp& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

PolyFp poly_mulmod(const PolyFp& a, const PolyFp& b, const PolyFp& modulus, int64_t p) {
    if (a.empty() || b.empty()) return {};
    PolyFp prod(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    }
    // Reduce modulo the monic modulus.
    int64_t deg_m = static_cast<int64_t>(modulus.size()) - 1;
    for (int64_t i = static_cast<int64_t>(prod.size()) - 1; i >= deg_m; --i) {
        int64_t c = prod[i];
        if (c == 0) continue;
        for (int64_t j = 0; j <= deg_m; ++j) {
            int64_t& t = prod[i - deg_m + j];
            t = mod_nonneg(t - c * modulus[j], p);
        }
    }
    prod.resize(deg_m > 0 ? deg_m : 0);
    trim(prod);
    return prod;
}

// Remainder of a by monic b over F_p.
PolyFp poly_rem(PolyFp a, const PolyFp& b, int64_t p) {
    int64_t deg_b = static_cast<int64_t>(b.size()) - 1;
    for (int64_t i = static_cast<int64_t>(a.size()) - 1; i >= deg_b; --i) {
        int64_t c = a[i];
        if (c == 0) continue;
        for (int64_t j = 0; j <= deg_b; ++j) {
            int64_t& t = a[i - deg_b + j];
            t = mod_nonneg(t - c * b[j], p);
        }
    }
    a.resize(deg_b > 0 ? deg_b : 0);
    trim(a);
    return a;
}

PolyFp decode_poly(int64_t code, int64_t p) {
    PolyFp c;
    while (code > 0) {
        c.push_back(code % p);
        code /= p;
    }
    return c;
}

// Monic polynomial of degree k whose lower coefficients encode `code`.
PolyFp decode_monic(int64_t code, int64_t p, int64_t k) {
    PolyFp c(k + 1, 0);
    for (int64_t j = 0; j < k && code > 0; ++j, code /= p) c[j] = code % p;
    c[k] = 1;
    return c;
}

bool is_irreducible(const PolyFp& f, int64_t p) {
    int64_t k = static_cast<int64_t>(f.size()) - 1;
    if (k < 1) return false;
    if (k == 1) return true;
    if (f[0] == 0) return false;  // divisible by X
    // Trial division by every monic polynomial of degree 1..k/2.
    for (int64_t deg = 1; 2 * deg <= k; ++deg) {
        int64_t count = 1;
        for (int64_t j = 0; j < deg; ++j) count *= p;
        for (int64_t code = 0; code < count; ++code) {
            PolyFp g = decode_monic(code, p, deg);
            if (poly_rem(f, g, p).empty()) return false;
        }
    }
    return true;
}

int64_t encode_poly(const PolyFp& c, int64_t p) {
    int64_t code = 0;
    for (size_t j = c.size(); j-- > 0;) code = code * p + c[j];
    return code;
}

struct FieldCacheKey {
    int64_t p, k;
    std::vector<int64_t> modulus;
    bool operator<(const FieldCacheKey& o) const {
        return std::tie(p, k, modulus) < std::tie(o.p, o.k, o.modulus);
    }
};

std::mutex field_cache_mutex;
std::map<FieldCacheKey, std::shared_ptr<const FieldContext>> field_cache;

}  // namespace

FFElem FieldContext::from_int(int64_t n) const { return mod_nonneg(n, p); }

FFElem FieldContext::add(FFElem a, FFElem b) const {
    FFElem out = 0, pw = 1;
    while (a > 0 || b > 0) {
        out += ((a % p + b % p) % p) * pw;
        a /= p;
        b /= p;
        pw *= p;
    }
    return out;
}

FFElem FieldContext::neg(FFElem a) const {
    FFElem out = 0, pw = 1;
    while (a > 0) {
        int64_t digit = a % p;
        out += (digit == 0 ? 0 : p - digit) * pw;
        a /= p;
        pw *= p;
    }
    return out;
}

FFElem FieldContext::sub(FFElem a, FFElem b) const { return add(a, neg(b)); }

FFElem FieldContext::mul(FFElem a, FFElem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_table[(log_table[a] + log_table[b]) % (size - 1)];
}

FFElem FieldContext::inv(FFElem a) const {
    if (a == 0) throw std::domain_error("field inverse of zero");
    return exp_table[(size - 1 - log_table[a]) % (size - 1)];
}

FFElem FieldContext::pow(FFElem a, int64_t e) const {
    if (e < 0) throw std::domain_error("field pow: negative exponent");
    if (a == 0) return e == 0 ? 1 : 0;
    return exp_table[(log_table[a] * (e % (size - 1))) % (size - 1)];
}

std::vector<int64_t> FieldContext::coeffs(FFElem a) const {
    std::vector<int64_t> c(k, 0);
    for (int64_t j = 0; j < k && a > 0; ++j, a /= p) c[j] = a % p;
    return c;
}

FFElem FieldContext::from_coeffs(const std::vector<int64_t>& c) const {
    FFElem a = 0;
    for (size_t j = c.size(); j-- > 0;) a = a * p + mod_nonneg(c[j], p);
    return a;
}

std::shared_ptr<const FieldContext> make_field(
    int64_t p, int64_t k, const std::optional<std::vector<int64_t>>& modulus,
    int64_t size_cap) {
    if (!is_prime_i64(p)) throw std::domain_error("make_field: p must be prime");
    if (k < 1) throw std::domain_error("make_field: k must be >= 1");
    int64_t size = 1;
    for (int64_t j = 0; j < k; ++j) {
        if (size > size_cap / p)
            throw resource_error("make_field: p^k exceeds size cap " +
                                 std::to_string(size_cap));
        size *= p;
    }

    // Resolve the modulus: validate a supplied one, else pick the least
    // monic irreducible of degree k in the integer coefficient encoding.
    PolyFp mod_poly;
    if (modulus) {
        mod_poly = *modulus;
        trim(mod_poly);
        if (static_cast<int64_t>(mod_poly.size()) != k + 1 || mod_poly[k] != 1)
            throw std::domain_error("make_field: modulus must be monic of degree k");
        for (int64_t c : mod_poly)
            if (c < 0 || c >= p)
                throw std::domain_error("make_field: modulus coefficients must lie in [0,p)");
        if (!is_irreducible(mod_poly, p))
            throw std::domain_error("make_field: supplied modulus is reducible");
    } else {
        for (int64_t code = 0;; ++code) {
            mod_poly = decode_monic(code, p, k);
            if (is_irreducible(mod_poly, p)) break;
        }
    }

    FieldCacheKey key{p, k, mod_poly};
    {
        std::lock_guard<std::mutex> lock(field_cache_mutex);
        auto it = field_cache.find(key);
        if (it != field_cache.end()) return it->second;
    }

    auto ctx = std::make_shared<FieldContext>();
    ctx->p = p;
    ctx->k = k;
    ctx->size = size;
    ctx->modulus = mod_poly;

    // Generator: least encoded element of full multiplicative order, found
    // by checking cand^((size-1)/l) != 1 for every prime l | size-1 using
    // raw polynomial arithmetic (tables do not exist yet).
    auto raw_pow = [&](const PolyFp& base, int64_t e) {
        PolyFp r{1}, b = base;
        while (e > 0) {
            if (e & 1) r = poly_mulmod(r, b, mod_poly, p);
            b = poly_mulmod(b, b, mod_poly, p);
            e >>= 1;
        }
        return r;
    };
    std::vector<int64_t> prime_divs;
    for (auto [prime, expo] : prime_factors(size - 1)) prime_divs.push_back(prime);
    FFElem gen = 0;
    for (FFElem cand = 2; cand < size; ++cand) {
        PolyFp cp = decode_poly(cand, p);
        bool full_order = true;
        for (int64_t l : prime_divs) {
            PolyFp r = raw_pow(cp, (size - 1) / l);
            if (r.size() == 1 && r[0] == 1) {
                full_order = false;
                break;
            }
        }
        if (full_order) {
            gen = cand;
            break;
        }
    }
    if (gen == 0 && size > 2)
        throw consistency_error("make_field: no generator found");
    if (size == 2) gen = 1;
    ctx->generator = gen;

    // Eager exp/log tables by repeated multiplication.
    ctx->exp_table.assign(size - 1, 0);
    ctx->log_table.assign(size, -1);
    PolyFp gp = decode_poly(gen, p), acc{1};
    for (int64_t s = 0; s < size - 1; ++s) {
        FFElem x = encode_poly(acc, p);
        ctx->exp_table[s] = x;
        if (ctx->log_table[x] != -1)
            throw consistency_error("make_field: generator order too small");
        ctx->log_table[x] = static_cast<int32_t>(s);
        acc = poly_mulmod(acc, gp, mod_poly, p);
    }

    std::lock_guard<std::mutex> lock(field_cache_mutex);
    auto [it, inserted] = field_cache.emplace(key, std::move(ctx));
    return it->second;
}

int64_t discrete_log(const FieldContext& ctx, FFElem x) {
    if (x == 0) throw std::domain_error("discrete_log of zero");
    return ctx.log_table[x];
}

CharacterSpec make_character(std::shared_ptr<const FieldContext> field, int64_t m) {
    CharacterSpec chi;
    int64_t group = field->size - 1;
    chi.exponent = group == 0 ? 0 : mod_nonneg(m, group);
    chi.value_order = group == 0 ? 1 : group / std::gcd(group, chi.exponent);
    chi.field = std::move(field);
    return chi;
}

RootOfUnity char_value(const CharacterSpec& chi, FFElem x) {
    if (x == 0) {
        if (chi.trivial()) return {false, 1, 0};
        return {true, 1, 0};
    }
    int64_t group = chi.field->size - 1;
    if (group == 0) return {false, 1, 0};
    int64_t e = (chi.exponent * chi.field->log_table[x]) % group;
    if (e == 0) return {false, 1, 0};
    int64_t g = std::gcd(e, group);
    return {false, group / g, e / g};
}

FFElem FieldEmbedding::apply(FFElem a) const {
    FFElem out = 0;
    auto digits = sub->coeffs(a);
    for (int64_t j = 0; j < sub->k; ++j) {
        if (digits[j] == 0) continue;
        out = sup->add(out, sup->mul(sup->from_int(digits[j]), powers[j]));
    }
    return out;
}

FieldEmbedding embed_subfield(std::shared_ptr<const FieldContext> sub,
                              std::shared_ptr<const FieldContext> sup) {
    if (sub->p != sup->p || sup->k % sub->k != 0)
        throw std::domain_error("embed_subfield: not a subfield (need same p, sub.k | sup.k)");

    // Least-encoded root of sub.modulus in sup (Horner, prime-field coeffs).
    FieldEmbedding emb;
    emb.sub = sub;
    emb.sup = sup;
    FFElem root = 0;
    bool found = false;
    for (FFElem x = 0; x < sup->size; ++x) {
        FFElem acc = 0;
        for (size_t j = sub->modulus.size(); j-- > 0;)
            acc = sup->add(sup->mul(acc, x), sup->from_int(sub->modulus[j]));
        if (acc == 0) {
            root = x;
            found = true;
            break;
        }
    }
    if (!found) throw consistency_error("embed_subfield: modulus has no root in sup");
    emb.root = root;
    emb.powers.resize(sub->k);
    FFElem pw = 1;
    for (int64_t j = 0; j < sub->k; ++j) {
        emb.powers[j] = pw;
        pw = sup->mul(pw, root);
    }
    return emb;
}

}  // namespace leglab
