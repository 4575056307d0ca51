#include "leglab/intarith.hpp"

#include <algorithm>
#include <stdexcept>

namespace leglab {

bool is_prime_i64(int64_t n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (int64_t f = 3; f * f <= n; f += 2)
        if (n % f == 0) return false;
    return true;
}

std::vector<std::pair<int64_t, int64_t>> prime_factors(int64_t n) {
    if (n < 1) throw std::domain_error("prime_factors: n must be positive");
    std::vector<std::pair<int64_t, int64_t>> out;
    for (int64_t f = 2; f * f <= n; f += (f == 2 ? 1 : 2)) {
        if (n % f != 0) continue;
        int64_t e = 0;
        while (n % f == 0) { n /= f; ++e; }
        out.emplace_back(f, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<int64_t> divisors(int64_t n) {
    if (n < 1) throw std::domain_error("divisors: n must be positive");
    std::vector<int64_t> out{1};
    for (auto [p, e] : prime_factors(n)) {
        size_t base = out.size();
        int64_t pk = 1;
        for (int64_t j = 1; j <= e; ++j) {
            pk *= p;
            for (size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int64_t mulmod_i64(int64_t a, int64_t b, int64_t m) {
    return static_cast<int64_t>((static_cast<__int128>(a) * b) % m);
}

int64_t powmod_i64(int64_t a, int64_t e, int64_t m) {
    if (m <= 0) throw std::domain_error("powmod_i64: modulus must be positive");
    if (e < 0) throw std::domain_error("powmod_i64: negative exponent");
    int64_t r = 1 % m;
    a = mod_nonneg(a, m);
    while (e > 0) {
        if (e & 1) r = mulmod_i64(r, a, m);
        a = mulmod_i64(a, a, m);
        e >>= 1;
    }
    return r;
}

int64_t prime_power_exponent(int64_t q, int64_t p) {
    if (q < 2 || p < 2) return 0;
    int64_t k = 0;
    while (q % p == 0) { q /= p; ++k; }
    return q == 1 ? k : 0;
}

int64_t smallest_prime_factor(int64_t n) {
    if (n < 2) throw std::domain_error("smallest_prime_factor: n must be >= 2");
    for (int64_t f = 2; f * f <= n; f += (f == 2 ? 1 : 2))
        if (n % f == 0) return f;
    return n;
}

}  // namespace leglab
