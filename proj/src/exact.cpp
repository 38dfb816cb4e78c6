#include "ecur/exact.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <stdexcept>

namespace ecur {

Rational::Rational(const Integer& num, const Integer& den) : q_(num, den)
{
    if (den == 0) throw std::domain_error("rational with zero denominator");
    q_.canonicalize();
}

Rational::Rational(const mpq_class& q) : q_(q)
{
    if (q_.get_den() == 0) throw std::domain_error("rational with zero denominator");
    q_.canonicalize();
}

Rational Rational::parse(std::string_view text)
{
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    auto parse_int = [](std::string_view s) {
        std::string buf(s);
        if (!buf.empty() && buf.front() == '+') buf.erase(0, 1);
        bool ok = !buf.empty();
        for (std::size_t i = 0; i < buf.size(); ++i) {
            if (i == 0 && buf[i] == '-' && buf.size() > 1) continue;
            if (!std::isdigit(static_cast<unsigned char>(buf[i]))) ok = false;
        }
        if (!ok) throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
        return Integer(buf, 10);
    };
    text = trim(text);
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    Integer den = parse_int(trim(text.substr(slash + 1)));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(trim(text.substr(0, slash))), den);
}

Rational& Rational::operator/=(const Rational& o)
{
    if (o.is_zero()) throw std::domain_error("division by zero");
    q_ /= o.q_;
    return *this;
}

Rational Rational::pow(unsigned long e) const
{
    Integer n, d;
    mpz_pow_ui(n.get_mpz_t(), q_.get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), q_.get_den_mpz_t(), e);
    return Rational(n, d);
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

long Valuation::value() const
{
    if (infinite_) throw std::logic_error("value() of infinite valuation");
    return value_;
}

Prime::Prime(const Integer& p) : p_(p)
{
    auto kind = primality(p);
    if (kind == Primality::composite) {
        throw std::invalid_argument(p.get_str() + " is not prime");
    }
    probable_ = kind == Primality::probable_prime;
}

unsigned long Prime::ul() const
{
    if (!p_.fits_ulong_p()) throw std::overflow_error("prime does not fit in unsigned long");
    return p_.get_ui();
}

Valuation vp(const Integer& n, const Prime& p)
{
    if (n == 0) return Valuation::infinity();
    Integer rest;
    return Valuation(static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.value().get_mpz_t())));
}

Valuation vp(const Rational& q, const Prime& p)
{
    if (q.is_zero()) return Valuation::infinity();
    long vn = vp(q.num(), p).value();
    long vd = vp(q.den(), p).value();
    return Valuation(vn - vd);
}

Valuation vp(const Rational& q, const Integer& p) { return vp(q, Prime(p)); }

Integer mod_reduce(const Rational& q, const Integer& m)
{
    Integer den = q.den(), inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0 && m != 1) {
        throw std::domain_error("denominator of " + q.str() + " is not invertible mod " + m.get_str());
    }
    Integer r = q.num() * inv;
    mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
    return r;
}

int legendre(const Integer& a, const Integer& p)
{
    return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

std::string factored_str(const Rational& q, const FactorizationBudget& budget)
{
    if (q.is_zero()) return "0";
    std::string num = factorize(q.num(), budget).str();
    if (q.is_integer()) return num;
    Factorization d = factorize(q.den(), budget);
    std::string den = d.str();
    bool compound = d.factors.size() + (d.complete ? 0 : 1) > 1;
    return num + "/" + (compound ? "(" + den + ")" : den);
}

}  // namespace ecur
