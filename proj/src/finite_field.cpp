#include "ecur/finite_field.hpp"

#include <algorithm>
#include <stdexcept>

namespace ecur::ff {
namespace {

using u64 = std::uint64_t;
using Poly = std::vector<u64>;  // low to high

void trim(Poly& f)
{
    while (!f.empty() && f.back() == 0) f.pop_back();
}

u64 inv_mod(u64 a, u64 m)
{
    Integer r;
    Integer A(static_cast<unsigned long>(a)), M(static_cast<unsigned long>(m));
    if (mpz_invert(r.get_mpz_t(), A.get_mpz_t(), M.get_mpz_t()) == 0) {
        throw std::domain_error("not invertible mod " + std::to_string(m));
    }
    return r.get_ui();
}

Poly poly_mod(Poly a, const Poly& f, u64 ell)
{
    trim(a);
    std::size_t d = f.size() - 1;
    u64 lead_inv = inv_mod(f.back(), ell);
    while (a.size() > d) {
        u64 c = a.back() * lead_inv % ell;
        std::size_t shift = a.size() - 1 - d;
        for (std::size_t i = 0; i <= d; ++i) {
            a[shift + i] = (a[shift + i] + (ell - c) * f[i]) % ell;
        }
        trim(a);
    }
    return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, u64 ell)
{
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % ell;
    }
    return poly_mod(std::move(r), f, ell);
}

Poly poly_powmod(Poly base, u64 e, const Poly& f, u64 ell)
{
    Poly r{1};
    base = poly_mod(std::move(base), f, ell);
    while (e) {
        if (e & 1) r = poly_mulmod(r, base, f, ell);
        base = poly_mulmod(base, base, f, ell);
        e >>= 1;
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, u64 ell)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, b, ell);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

}  // namespace

bool Field::is_irreducible(u64 ell, const Poly& modulus)
{
    if (modulus.size() < 2 || modulus.back() != 1) return false;
    std::size_t d = modulus.size() - 1;
    if (d == 1) return true;
    for (u64 x = 0; x < ell; ++x) {
        u64 v = 0;
        for (std::size_t i = modulus.size(); i-- > 0;) v = (v * x + modulus[i]) % ell;
        if (v == 0) return false;
    }
    // Ben-Or: no factor of degree k <= d/2, via gcd(f, t^(ell^k) - t).
    Poly h{0, 1};
    for (std::size_t k = 1; k <= d / 2; ++k) {
        h = poly_powmod(h, ell, modulus, ell);
        Poly g = h;
        g.resize(std::max<std::size_t>(g.size(), 2), 0);
        g[1] = (g[1] + ell - 1) % ell;
        if (poly_gcd(modulus, g, ell).size() > 1) return false;
    }
    return true;
}

Field::Field(u64 ell, Poly modulus) : ell_(ell), degree_(static_cast<unsigned>(modulus.size() - 1)), modulus_(std::move(modulus))
{
    if (ell < 2 || ell >= (u64{1} << 32)) throw std::invalid_argument("field characteristic out of range");
    if (!is_prime(Integer(static_cast<unsigned long>(ell)))) {
        throw std::invalid_argument(std::to_string(ell) + " is not prime");
    }
    if (degree_ < 1 || degree_ > kMaxDegree) throw std::invalid_argument("field degree out of range");
    q_ = 1;
    for (unsigned i = 0; i < degree_; ++i) {
        if (q_ > (u64{1} << 62) / ell) throw std::invalid_argument("field too large");
        q_ *= ell;
    }
}

Field Field::prime(u64 ell) { return Field(ell, {0, 1}); }

Field Field::with_modulus(u64 ell, Poly modulus)
{
    if (!is_irreducible(ell, modulus)) throw std::invalid_argument("modulus is not irreducible");
    return Field(ell, std::move(modulus));
}

Field Field::extension(u64 ell, unsigned degree)
{
    if (degree == 1) return prime(ell);
    if (degree > kMaxDegree) throw std::invalid_argument("field degree out of range");
    Poly f(degree + 1, 0);
    f[degree] = 1;
    // Enumerate coefficient vectors as base-ell counters, degree d-1 most significant.
    while (true) {
        if (is_irreducible(ell, f)) return Field(ell, f);
        std::size_t i = 0;
        while (i < degree && ++f[i] == ell) f[i++] = 0;
        if (i == degree) throw std::logic_error("no irreducible polynomial found");
    }
}

Element Field::from_int(const Integer& v) const
{
    Integer r;
    mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), ell_);
    Element e;
    e.c[0] = static_cast<std::uint32_t>(r.get_ui());
    return e;
}

Element Field::from_rational(const Rational& v) const
{
    Integer m(static_cast<unsigned long>(ell_));
    if (mpz_divisible_p(v.den().get_mpz_t(), m.get_mpz_t())) {
        throw std::domain_error(v.str() + " is not integral at " + std::to_string(ell_));
    }
    return from_int(mod_reduce(v, m));
}

Element Field::from_index(u64 i) const
{
    Element e;
    for (unsigned k = 0; k < degree_; ++k) {
        e.c[k] = static_cast<std::uint32_t>(i % ell_);
        i /= ell_;
    }
    return e;
}

u64 Field::index(const Element& e) const
{
    u64 v = 0;
    for (unsigned k = degree_; k-- > 0;) v = v * ell_ + e.c[k];
    return v;
}

Element Field::add(const Element& a, const Element& b) const
{
    Element r;
    for (unsigned k = 0; k < degree_; ++k) {
        u64 s = u64{a.c[k]} + b.c[k];
        r.c[k] = static_cast<std::uint32_t>(s >= ell_ ? s - ell_ : s);
    }
    return r;
}

Element Field::neg(const Element& a) const
{
    Element r;
    for (unsigned k = 0; k < degree_; ++k) r.c[k] = a.c[k] == 0 ? 0 : static_cast<std::uint32_t>(ell_ - a.c[k]);
    return r;
}

Element Field::sub(const Element& a, const Element& b) const { return add(a, neg(b)); }

Element Field::mul(const Element& a, const Element& b) const
{
    Element r;
    if (degree_ == 1) {
        r.c[0] = static_cast<std::uint32_t>(u64{a.c[0]} * b.c[0] % ell_);
        return r;
    }
    std::array<u64, 2 * kMaxDegree> t{};
    for (unsigned i = 0; i < degree_; ++i) {
        if (a.c[i] == 0) continue;
        for (unsigned j = 0; j < degree_; ++j) t[i + j] = (t[i + j] + u64{a.c[i]} * b.c[j]) % ell_;
    }
    for (unsigned k = 2 * degree_ - 2; k >= degree_; --k) {
        u64 c = t[k];
        if (c == 0) continue;
        // t^d = -(m_0 + ... + m_{d-1} t^{d-1})
        for (unsigned i = 0; i < degree_; ++i) {
            t[k - degree_ + i] = (t[k - degree_ + i] + (ell_ - modulus_[i]) % ell_ * c) % ell_;
        }
        t[k] = 0;
    }
    for (unsigned k = 0; k < degree_; ++k) r.c[k] = static_cast<std::uint32_t>(t[k]);
    return r;
}

Element Field::mul_small(const Element& a, u64 k) const
{
    Element r;
    k %= ell_;
    for (unsigned i = 0; i < degree_; ++i) r.c[i] = static_cast<std::uint32_t>(u64{a.c[i]} * k % ell_);
    return r;
}

Element Field::pow(Element a, u64 e) const
{
    Element r = one();
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

Element Field::inv(const Element& a) const
{
    if (is_zero(a)) throw std::domain_error("inverse of zero in F_q");
    return pow(a, q_ - 2);
}

u64 Field::trace(const Element& a) const
{
    Element s = a, t = a;
    for (unsigned i = 1; i < degree_; ++i) {
        s = pow(s, ell_);
        t = add(t, s);
    }
    return t.c[0];
}

int Field::quadratic_character(const Element& a) const
{
    if (ell_ == 2) throw std::logic_error("quadratic character in characteristic 2");
    if (is_zero(a)) return 0;
    return pow(a, (q_ - 1) / 2) == one() ? 1 : -1;
}

std::optional<Element> Field::sqrt(const Element& a) const
{
    if (is_zero(a)) return a;
    if (ell_ == 2) return pow(a, q_ / 2);
    if (quadratic_character(a) != 1) return std::nullopt;
    if (!nonresidue_) {
        for (u64 i = 2;; ++i) {
            Element z = from_index(i);
            if (quadratic_character(z) == -1) { nonresidue_ = z; break; }
        }
    }
    // Tonelli-Shanks
    u64 t = q_ - 1;
    unsigned s = 0;
    while ((t & 1) == 0) { t >>= 1; ++s; }
    Element c = pow(*nonresidue_, t);
    Element tt = pow(a, t);
    Element r = pow(a, (t + 1) / 2);
    unsigned m = s;
    while (!(tt == one())) {
        unsigned i = 0;
        Element w = tt;
        while (!(w == one())) { w = mul(w, w); ++i; }
        Element b = c;
        for (unsigned k = 0; k + i + 1 < m; ++k) b = mul(b, b);
        m = i;
        c = mul(b, b);
        tt = mul(tt, c);
        r = mul(r, b);
    }
    return r;
}

std::optional<Element> Field::artin_schreier_root(const Element& c) const
{
    if (ell_ != 2) throw std::logic_error("Artin-Schreier equation outside characteristic 2");
    // w -> w^2 + w is F_2-linear; solve with Gaussian elimination on bit vectors.
    unsigned d = degree_;
    std::vector<std::uint32_t> rows(d, 0);  // rows[k] bit i = coefficient k of L(t^i)
    for (unsigned i = 0; i < d; ++i) {
        Element e;
        e.c[i] = 1;
        Element img = add(mul(e, e), e);
        for (unsigned k = 0; k < d; ++k) {
            if (img.c[k]) rows[k] |= 1u << i;
        }
    }
    std::vector<std::uint32_t> rhs(d);
    for (unsigned k = 0; k < d; ++k) rhs[k] = c.c[k] & 1u;
    std::vector<int> pivot_col(d, -1);
    unsigned rank = 0;
    for (unsigned col = 0; col < d && rank < d; ++col) {
        unsigned sel = rank;
        while (sel < d && !((rows[sel] >> col) & 1u)) ++sel;
        if (sel == d) continue;
        std::swap(rows[sel], rows[rank]);
        std::swap(rhs[sel], rhs[rank]);
        for (unsigned k = 0; k < d; ++k) {
            if (k != rank && ((rows[k] >> col) & 1u)) { rows[k] ^= rows[rank]; rhs[k] ^= rhs[rank]; }
        }
        pivot_col[rank++] = static_cast<int>(col);
    }
    for (unsigned k = rank; k < d; ++k) {
        if (rhs[k]) return std::nullopt;
    }
    Element w;
    for (unsigned k = 0; k < rank; ++k) w.c[pivot_col[k]] = rhs[k];
    return w;
}

}  // namespace ecur::ff
