#include "leglab/cyclotomic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

#include "leglab/errors.hpp"
#include "leglab/intarith.hpp"

namespace leglab {

int64_t euler_phi(int64_t n) {
    if (n < 1) throw std::domain_error("euler_phi: n must be >= 1");
    int64_t phi = n;
    for (const auto& pe : prime_factors(n)) phi -= phi / pe.first;
    return phi;
}

namespace {

// Exact division of polynomials with integer coefficients (remainder must
// vanish); divisor monic is not required but its leading coeff must divide
// exactly at every step — true in the cyclotomic recursion.
std::vector<mpz_class> exact_div(std::vector<mpz_class> num,
                                 const std::vector<mpz_class>& den) {
    int64_t dn = static_cast<int64_t>(num.size()) - 1;
    int64_t dd = static_cast<int64_t>(den.size()) - 1;
    std::vector<mpz_class> quot(dn - dd + 1);
    for (int64_t i = dn; i >= dd; --i) {
        mpz_class c = num[i] / den[dd];
        quot[i - dd] = c;
        if (c != 0)
            for (int64_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
    }
    for (const mpz_class& r : num)
        if (r != 0) throw consistency_error("cyclotomic division not exact");
    return quot;
}

std::mutex phi_cache_mutex;
std::map<int64_t, std::vector<mpz_class>> phi_cache;

}  // namespace

const std::vector<mpz_class>& cyclotomic_polynomial(int64_t n) {
    if (n < 1) throw std::domain_error("cyclotomic_polynomial: n must be >= 1");
    std::lock_guard<std::mutex> lock(phi_cache_mutex);
    auto it = phi_cache.find(n);
    if (it != phi_cache.end()) return it->second;

    // Phi_n = (X^n - 1) / prod over proper divisors d|n of Phi_d.
    std::function<const std::vector<mpz_class>&(int64_t)> get =
        [&](int64_t m) -> const std::vector<mpz_class>& {
        auto hit = phi_cache.find(m);
        if (hit != phi_cache.end()) return hit->second;
        std::vector<mpz_class> num(m + 1);
        num[0] = -1;
        num[m] = 1;
        for (int64_t d : divisors(m)) {
            if (d == m) continue;
            num = exact_div(std::move(num), get(d));
        }
        return phi_cache.emplace(m, std::move(num)).first->second;
    };
    return get(n);
}

CycInt::CycInt(int64_t order) : order_(order), coeffs_(order) {
    if (order < 1) throw std::domain_error("CycInt: order must be >= 1");
}

CycInt::CycInt(int64_t order, const mpz_class& m) : CycInt(order) {
    coeffs_[0] = m;
    canonicalize();
}

CycInt::CycInt(int64_t order, std::vector<mpz_class> coeffs) : order_(order) {
    if (order < 1) throw std::domain_error("CycInt: order must be >= 1");
    if (static_cast<int64_t>(coeffs.size()) != order)
        throw std::domain_error("CycInt: coefficient vector length must equal order");
    coeffs_ = std::move(coeffs);
    canonicalize();
}

CycInt CycInt::root_of_unity(int64_t n, int64_t k) {
    CycInt z(n);
    z.coeffs_[mod_nonneg(k, n)] = 1;
    z.canonicalize();
    return z;
}

void CycInt::canonicalize() {
    const std::vector<mpz_class>& phi = cyclotomic_polynomial(order_);
    int64_t deg = static_cast<int64_t>(phi.size()) - 1;  // = euler_phi(order_)
    for (int64_t i = order_ - 1; i >= deg; --i) {
        if (coeffs_[i] == 0) continue;
        mpz_class c = coeffs_[i];
        for (int64_t j = 0; j <= deg; ++j) coeffs_[i - deg + j] -= c * phi[j];
    }
}

CycInt CycInt::operator-() const {
    CycInt z(order_);
    for (int64_t j = 0; j < order_; ++j) z.coeffs_[j] = -coeffs_[j];
    return z;  // negation preserves canonical form
}

namespace {
int64_t lcm_order(int64_t a, int64_t b) { return std::lcm(a, b); }
}  // namespace

CycInt CycInt::lift_to_order(int64_t n_to) const {
    if (n_to % order_ != 0)
        throw std::domain_error("lift_to_order: target must be a multiple of order");
    if (n_to == order_) return *this;
    int64_t stride = n_to / order_;
    std::vector<mpz_class> raw(n_to);
    for (int64_t j = 0; j < order_; ++j) raw[j * stride] = coeffs_[j];
    return CycInt(n_to, std::move(raw));
}

CycInt CycInt::operator+(const CycInt& rhs) const {
    int64_t n = lcm_order(order_, rhs.order_);
    CycInt a = lift_to_order(n), b = rhs.lift_to_order(n);
    for (int64_t j = 0; j < n; ++j) a.coeffs_[j] += b.coeffs_[j];
    a.canonicalize();
    return a;
}

CycInt CycInt::operator-(const CycInt& rhs) const { return *this + (-rhs); }

CycInt CycInt::operator*(const CycInt& rhs) const {
    int64_t n = lcm_order(order_, rhs.order_);
    CycInt a = lift_to_order(n), b = rhs.lift_to_order(n);
    std::vector<mpz_class> prod(n);
    for (int64_t i = 0; i < n; ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (int64_t j = 0; j < n; ++j) {
            if (b.coeffs_[j] == 0) continue;
            int64_t k = i + j;
            if (k >= n) k -= n;
            prod[k] += a.coeffs_[i] * b.coeffs_[j];
        }
    }
    return CycInt(n, std::move(prod));
}

bool CycInt::operator==(const CycInt& rhs) const {
    int64_t n = lcm_order(order_, rhs.order_);
    return lift_to_order(n).coeffs_ == rhs.lift_to_order(n).coeffs_;
}

CycInt CycInt::pow(int64_t e) const {
    if (e < 0) throw std::domain_error("CycInt::pow: negative exponent");
    CycInt result(order_, mpz_class(1));
    CycInt base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

CycInt CycInt::conj() const {
    std::vector<mpz_class> raw(order_);
    for (int64_t j = 0; j < order_; ++j) raw[(order_ - j) % order_] = coeffs_[j];
    return CycInt(order_, std::move(raw));
}

CycInt CycInt::reduce_to_order(int64_t m) const {
    if (m < 1 || order_ % m != 0)
        throw std::domain_error("reduce_to_order: target must divide order");
    CycInt cur = *this;
    while (cur.order_ > m) {
        int64_t ratio = cur.order_ / m;
        bool progressed = false;
        // Support contraction: if the canonical support lies in l*Z for a
        // prime l | ratio, the value is a polynomial in zeta^(l).
        for (const auto& pe : prime_factors(ratio)) {
            int64_t l = pe.first;
            bool divisible = true;
            for (int64_t j = 0; j < cur.order_ && divisible; ++j)
                if (cur.coeffs_[j] != 0 && j % l != 0) divisible = false;
            if (!divisible) continue;
            int64_t n2 = cur.order_ / l;
            std::vector<mpz_class> raw(n2);
            for (int64_t j = 0; j < n2; ++j) raw[j] = cur.coeffs_[j * l];
            cur = CycInt(n2, std::move(raw));
            progressed = true;
            break;
        }
        if (progressed) continue;
        // Odd doubling: for order 2m' with m' odd, zeta_{2m'} = -zeta_{m'}^{(m'+1)/2}.
        if (cur.order_ % 2 == 0 && (cur.order_ / 2) % 2 == 1 && (cur.order_ / 2) % m == 0) {
            int64_t half = cur.order_ / 2;
            std::vector<mpz_class> raw(half);
            for (int64_t j = 0; j < cur.order_; ++j) {
                if (cur.coeffs_[j] == 0) continue;
                int64_t idx = mod_nonneg(j * ((half + 1) / 2), half);
                if (j % 2 == 0)
                    raw[idx] += cur.coeffs_[j];
                else
                    raw[idx] -= cur.coeffs_[j];
            }
            cur = CycInt(half, std::move(raw));
            continue;
        }
        throw std::domain_error("reduce_to_order: value does not lie in Z[zeta_" +
                                std::to_string(m) + "]");
    }
    return cur;
}

bool CycInt::is_zero() const {
    for (const mpz_class& c : coeffs_)
        if (c != 0) return false;
    return true;
}

bool CycInt::is_integer() const {
    for (int64_t j = 1; j < order_; ++j)
        if (coeffs_[j] != 0) return false;
    return true;
}

mpz_class CycInt::as_integer() const {
    if (!is_integer()) throw std::domain_error("CycInt::as_integer: not an integer");
    return coeffs_[0];
}

CycInt cyc_add(const CycInt& z1, const CycInt& z2) { return z1 + z2; }
CycInt cyc_mul(const CycInt& z1, const CycInt& z2) { return z1 * z2; }
CycInt cyc_neg(const CycInt& z) { return -z; }
CycInt conj(const CycInt& z) { return z.conj(); }

std::complex<double> embed_complex(const CycInt& z, int64_t a) {
    int64_t n = z.order();
    if (std::gcd(mod_nonneg(a, n), n) != 1)
        throw std::domain_error("embed_complex: a must be coprime to the order");
    std::complex<double> out(0.0, 0.0);
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (int64_t j = 0; j < n; ++j) {
        if (z.coeffs()[j] == 0) continue;
        double angle = two_pi * static_cast<double>(mod_nonneg(a * j, n)) / static_cast<double>(n);
        out += z.coeffs()[j].get_d() * std::complex<double>(std::cos(angle), std::sin(angle));
    }
    return out;
}

std::optional<int64_t> is_root_of_unity(const CycInt& z) {
    if (z.is_zero()) return std::nullopt;
    const CycInt one(z.order(), mpz_class(1));
    for (int64_t m : divisors(2 * z.order()))
        if (z.pow(m) == one) return m;
    return std::nullopt;
}

bool equals_integer(const CycInt& z, const mpz_class& m) {
    return z.is_integer() && z.as_integer() == m;
}

}  // namespace leglab
