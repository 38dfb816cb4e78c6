// Primality testing and integer factorization.

#include "ecur/exact.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace ecur {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr std::array<unsigned, 13> kWitnessBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
// Extra bases used only above the deterministic bound.
constexpr std::array<unsigned, 12> kExtraBases = {43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 b, u64 e, u64 m)
{
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

bool strong_probable_prime64(u64 n, u64 a)
{
    a %= n;
    if (a == 0) return true;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

bool is_prime64(u64 n)
{
    if (n < 2) return false;
    for (unsigned p : kWitnessBases) {
        if (n % p == 0) return n == p;
    }
    for (unsigned a : kWitnessBases) {
        if (!strong_probable_prime64(n, a)) return false;
    }
    return true;
}

bool strong_probable_prime(const Integer& n, unsigned base)
{
    Integer d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    Integer x, a(base), nm1 = n - 1;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == nm1) return true;
    for (unsigned long i = 1; i < s; ++i) {
        mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
        if (x == nm1) return true;
    }
    return false;
}

u64 gcd64(u64 a, u64 b) { return std::gcd(a, b); }

// Brent's variant of Pollard rho on word-sized n; consumes `budget`.
u64 rho64(u64 n, u64& budget)
{
    if (n % 2 == 0) return 2;
    for (u64 c = 1; budget > 0; ++c) {
        auto f = [&](u64 x) { return (mulmod(x, x, n) + c) % n; };
        u64 y = 2, x = y, g = 1, q = 1, ys = y;
        u64 r = 1;
        constexpr u64 m = 128;
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                u64 lim = std::min(m, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                budget = budget > lim ? budget - lim : 0;
                g = gcd64(q, n);
                k += m;
            } while (k < r && g == 1 && budget > 0);
            r *= 2;
        } while (g == 1 && budget > 0);
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd64(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != 1 && g != n) return g;
    }
    return 0;
}

Integer rho_mpz(const Integer& n, u64& budget)
{
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned long c = 1; budget > 0; ++c) {
        auto f = [&](Integer& v) {
            v = v * v + c;
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
        };
        Integer y = 2, x, g = 1, q = 1, ys, diff;
        u64 r = 1;
        constexpr u64 m = 128;
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) f(y);
            u64 k = 0;
            do {
                ys = y;
                u64 lim = std::min(m, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    f(y);
                    diff = x - y;
                    q = q * diff;
                    mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                }
                budget = budget > lim ? budget - lim : 0;
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            } while (k < r && g == 1 && budget > 0);
            r *= 2;
        } while (g == 1 && budget > 0);
        if (g == n) {
            do {
                f(ys);
                diff = x - ys;
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != 1 && g != n) return g;
    }
    return 0;
}

std::vector<std::uint32_t> sieve(std::uint64_t bound)
{
    std::vector<std::uint32_t> out;
    if (bound < 2) return out;
    std::vector<bool> composite(bound + 1, false);
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return out;
}

}  // namespace

Primality primality(const Integer& n)
{
    if (n < 2) return Primality::composite;
    if (n.fits_ulong_p() && sizeof(unsigned long) == 8) {
        return is_prime64(n.get_ui()) ? Primality::prime : Primality::composite;
    }
    for (unsigned p : kWitnessBases) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return n == p ? Primality::prime : Primality::composite;
    }
    for (unsigned a : kWitnessBases) {
        if (!strong_probable_prime(n, a)) return Primality::composite;
    }
    static const Integer bound(std::string(kDeterministicPrimalityBound), 10);
    if (n < bound) return Primality::prime;
    for (unsigned a : kExtraBases) {
        if (!strong_probable_prime(n, a)) return Primality::composite;
    }
    return Primality::probable_prime;
}

bool is_prime(const Integer& n) { return primality(n) != Primality::composite; }

const std::vector<std::uint32_t>& small_primes(std::uint64_t bound)
{
    static std::mutex mu;
    static std::map<std::uint64_t, std::vector<std::uint32_t>> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(bound);
    if (it == cache.end()) it = cache.emplace(bound, sieve(bound)).first;
    return it->second;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound)
{
    const auto& ps = small_primes(bound);
    return {ps.begin(), ps.end()};
}

Integer Factorization::abs_value() const
{
    Integer v = cofactor;
    for (const auto& f : factors) {
        Integer pk;
        mpz_pow_ui(pk.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
        v *= pk;
    }
    return v;
}

unsigned long Factorization::exponent_of(const Integer& p) const
{
    for (const auto& f : factors) {
        if (f.prime == p) return f.exponent;
    }
    return 0;
}

std::string Factorization::str() const
{
    std::string out = sign < 0 ? "-" : "";
    bool first = true;
    for (const auto& f : factors) {
        if (!first) out += "*";
        first = false;
        out += f.prime.get_str();
        if (f.exponent > 1) out += "^" + std::to_string(f.exponent);
    }
    if (!complete) {
        if (!first) out += "*";
        first = false;
        out += "[unfactored " + cofactor.get_str() + "]";
    }
    if (first) out += "1";
    return out;
}

Factorization factorize(const Integer& n, const FactorizationBudget& budget)
{
    if (n == 0) throw std::invalid_argument("factorize(0)");
    Factorization out;
    out.sign = sgn(n) < 0 ? -1 : 1;
    Integer m = abs(n);
    std::map<Integer, unsigned long> found;

    for (std::uint32_t p : small_primes(budget.trial_bound)) {
        if (Integer(p) * p > m) break;
        if (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            unsigned long e = 0;
            while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
                mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
                ++e;
            }
            found[Integer(p)] += e;
        }
    }

    u64 rho_budget = budget.rho_iterations;
    std::vector<Integer> stack;
    if (m > 1) stack.push_back(m);
    Integer unfactored = 1;
    while (!stack.empty()) {
        Integer c = stack.back();
        stack.pop_back();
        if (c == 1) continue;
        auto kind = primality(c);
        if (kind != Primality::composite) {
            if (kind == Primality::probable_prime) out.uses_probable_primes = true;
            found[c] += 1;
            continue;
        }
        Integer d = 0;
        if (mpz_perfect_power_p(c.get_mpz_t())) {
            // Split perfect powers directly; rho handles them poorly.
            for (unsigned long k = 2; k <= mpz_sizeinbase(c.get_mpz_t(), 2); ++k) {
                Integer root;
                if (mpz_root(root.get_mpz_t(), c.get_mpz_t(), k)) { d = root; break; }
            }
        }
        if (d == 0) {
            if (c.fits_ulong_p() && sizeof(unsigned long) == 8) {
                d = Integer(static_cast<unsigned long>(rho64(c.get_ui(), rho_budget)));
            } else {
                d = rho_mpz(c, rho_budget);
            }
        }
        if (d == 0 || d == 1 || d == c) {
            unfactored *= c;
            continue;
        }
        stack.push_back(d);
        stack.push_back(Integer(c / d));
    }

    for (auto& [p, e] : found) out.factors.push_back({p, e});
    out.cofactor = unfactored;
    out.complete = unfactored == 1;
    return out;
}

}  // namespace ecur
