#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ecur {

using Integer = mpz_class;

/// Fraction in lowest terms with a positive denominator. Zero is 0/1.
class Rational {
public:
    Rational() = default;
    Rational(int v) : q_(v) {}
    Rational(long v) : q_(v) {}
    Rational(const Integer& n) : q_(n) {}
    Rational(const Integer& num, const Integer& den);
    explicit Rational(const mpq_class& q);

    /// Accepts "a", "-a", "a/b" with optional surrounding whitespace.
    static Rational parse(std::string_view text);

    const mpq_class& raw() const { return q_; }
    Integer num() const { return Integer(q_.get_num()); }
    Integer den() const { return Integer(q_.get_den()); }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
    {
        int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    Rational pow(unsigned long e) const;
    std::string str() const { return q_.get_str(); }
    friend std::ostream& operator<<(std::ostream& os, const Rational& q);

private:
    mpq_class q_;
};

/// p-adic valuation; +infinity exactly for zero.
class Valuation {
public:
    Valuation(long v) : value_(v) {}
    static Valuation infinity() { Valuation v(0); v.infinite_ = true; return v; }

    bool is_infinite() const { return infinite_; }
    bool is_finite() const { return !infinite_; }
    long value() const;

    friend Valuation operator+(const Valuation& a, const Valuation& b)
    {
        if (a.infinite_ || b.infinite_) return infinity();
        return Valuation(a.value_ + b.value_);
    }
    friend bool operator==(const Valuation& a, const Valuation& b)
    {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }
    friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b)
    {
        if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
        return a.value_ <=> b.value_;
    }

    std::string str() const { return infinite_ ? "+inf" : std::to_string(value_); }

private:
    long value_ = 0;
    bool infinite_ = false;
};

enum class Primality { composite, prime, probable_prime };

/// Miller-Rabin with the first 13 prime bases, which is a proof below this bound.
inline constexpr std::string_view kDeterministicPrimalityBound = "3317044064679887385961981";

Primality primality(const Integer& n);
bool is_prime(const Integer& n);

/// An integer known to be prime (or a labelled probable prime above the deterministic bound).
class Prime {
public:
    explicit Prime(const Integer& p);
    explicit Prime(unsigned long p) : Prime(Integer(p)) {}

    const Integer& value() const { return p_; }
    unsigned long ul() const;
    bool fits_ulong() const { return p_.fits_ulong_p(); }
    bool probable() const { return probable_; }

    friend bool operator==(const Prime& a, const Prime& b) { return a.p_ == b.p_; }

private:
    Integer p_;
    bool probable_ = false;
};

Valuation vp(const Integer& n, const Prime& p);
Valuation vp(const Rational& q, const Prime& p);
/// Checks primality of p first; throws std::invalid_argument otherwise.
Valuation vp(const Rational& q, const Integer& p);

/// Residue of a p-integral rational modulo m (m coprime to the denominator).
Integer mod_reduce(const Rational& q, const Integer& m);

struct FactorizationBudget {
    std::uint64_t trial_bound = 1'000'000;
    std::uint64_t rho_iterations = 1'000'000;
};

struct PrimePower {
    Integer prime;
    unsigned long exponent = 0;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
    int sign = 1;
    std::vector<PrimePower> factors;   // ascending primes
    Integer cofactor = 1;              // unfactored composite remainder, 1 when complete
    bool complete = true;
    bool uses_probable_primes = false;

    Integer abs_value() const;
    Integer value() const { return sign < 0 ? Integer(-abs_value()) : abs_value(); }
    unsigned long exponent_of(const Integer& p) const;
    /// "-2^4*3*7^12"; an incomplete cofactor renders as "*[unfactored N]".
    std::string str() const;
};

/// Trial division, then Pollard-Brent rho within the budget. Throws on n == 0.
Factorization factorize(const Integer& n, const FactorizationBudget& budget = {});

/// Primes below `bound` (cached sieve for the default trial bound).
const std::vector<std::uint32_t>& small_primes(std::uint64_t bound);
std::vector<std::uint64_t> primes_up_to(std::uint64_t bound);

/// Renders num/den of q via factorize, e.g. "2^8*3^3*7^12/(1069*51791533)".
std::string factored_str(const Rational& q, const FactorizationBudget& budget = {});

/// Legendre symbol (a|p) for an odd prime p.
int legendre(const Integer& a, const Integer& p);

}  // namespace ecur
