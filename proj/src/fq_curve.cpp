#include "ecur/finite_field.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>

namespace ecur::ff {
namespace {
using u64 = std::uint64_t;
}

ReducedCurve::ReducedCurve(Field field, const std::array<Element, 5>& a) : field_(std::move(field)), a_(a)
{
    const Field& F = field_;
    const auto& [a1, a2, a3, a4, a6] = a_;
    Element b2 = F.add(F.mul(a1, a1), F.mul_small(a2, 4));
    Element b4 = F.add(F.mul_small(a4, 2), F.mul(a1, a3));
    Element b6 = F.add(F.mul(a3, a3), F.mul_small(a6, 4));
    Element b8 = F.sub(F.add(F.add(F.mul(F.mul(a1, a1), a6), F.mul_small(F.mul(a2, a6), 4)), F.mul(a2, F.mul(a3, a3))),
                       F.add(F.mul(a1, F.mul(a3, a4)), F.mul(a4, a4)));
    // disc = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
    Element disc = F.neg(F.mul(F.mul(b2, b2), b8));
    disc = F.sub(disc, F.mul_small(F.mul(b4, F.mul(b4, b4)), 8));
    disc = F.sub(disc, F.mul_small(F.mul(b6, b6), 27));
    disc = F.add(disc, F.mul_small(F.mul(b2, F.mul(b4, b6)), 9));
    singular_ = F.is_zero(disc);
}

bool ReducedCurve::contains(const Point& p) const
{
    if (p.infinity) return true;
    const Field& F = field_;
    const auto& [a1, a2, a3, a4, a6] = a_;
    Element lhs = F.add(F.mul(p.y, p.y), F.mul(p.y, F.add(F.mul(a1, p.x), a3)));
    Element rhs = F.add(F.mul(F.add(F.mul(F.add(p.x, a2), p.x), a4), p.x), a6);
    return lhs == rhs;
}

Point ReducedCurve::neg(const Point& p) const
{
    if (p.infinity) return p;
    const Field& F = field_;
    return {false, p.x, F.sub(F.neg(p.y), F.add(F.mul(a_[0], p.x), a_[2]))};
}

Point ReducedCurve::add(const Point& p, const Point& q) const
{
    if (p.infinity) return q;
    if (q.infinity) return p;
    const Field& F = field_;
    const auto& [a1, a2, a3, a4, a6] = a_;
    Element lambda, nu;
    if (p.x == q.x) {
        Element s = F.add(F.add(p.y, q.y), F.add(F.mul(a1, q.x), a3));
        if (F.is_zero(s)) return {};
        Element den = F.add(F.add(F.mul_small(p.y, 2), F.mul(a1, p.x)), a3);
        Element xx = F.mul(p.x, p.x);
        Element num = F.sub(F.add(F.add(F.mul_small(xx, 3), F.mul_small(F.mul(a2, p.x), 2)), a4), F.mul(a1, p.y));
        Element inv = F.inv(den);
        lambda = F.mul(num, inv);
        Element nnum = F.sub(F.add(F.add(F.neg(F.mul(xx, p.x)), F.mul(a4, p.x)), F.mul_small(a6, 2)), F.mul(a3, p.y));
        nu = F.mul(nnum, inv);
    } else {
        Element inv = F.inv(F.sub(q.x, p.x));
        lambda = F.mul(F.sub(q.y, p.y), inv);
        nu = F.mul(F.sub(F.mul(p.y, q.x), F.mul(q.y, p.x)), inv);
    }
    Element x3 = F.sub(F.sub(F.sub(F.add(F.mul(lambda, lambda), F.mul(a1, lambda)), a2), p.x), q.x);
    Element y3 = F.sub(F.sub(F.neg(F.mul(F.add(lambda, a1), x3)), nu), a3);
    return {false, x3, y3};
}

Point ReducedCurve::mul(const Integer& k, const Point& p) const
{
    if (k < 0) return mul(Integer(-k), neg(p));
    Point acc;
    for (long bit = static_cast<long>(mpz_sizeinbase(k.get_mpz_t(), 2)) - 1; bit >= 0 && k != 0; --bit) {
        acc = add(acc, acc);
        if (mpz_tstbit(k.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) acc = add(acc, p);
    }
    return acc;
}

std::vector<Point> ReducedCurve::lift_x(const Element& x) const
{
    const Field& F = field_;
    const auto& [a1, a2, a3, a4, a6] = a_;
    Element b = F.add(F.mul(a1, x), a3);
    Element c = F.add(F.mul(F.add(F.mul(F.add(x, a2), x), a4), x), a6);
    std::vector<Point> out;
    if (F.characteristic() == 2) {
        if (F.is_zero(b)) {
            out.push_back({false, x, *F.sqrt(c)});
            return out;
        }
        Element binv = F.inv(b);
        auto w = F.artin_schreier_root(F.mul(c, F.mul(binv, binv)));
        if (!w) return out;
        Element y = F.mul(b, *w);
        out.push_back({false, x, y});
        out.push_back({false, x, F.add(y, b)});
        return out;
    }
    Element disc = F.add(F.mul(b, b), F.mul_small(c, 4));
    auto r = F.sqrt(disc);
    if (!r) return out;
    Element half = F.inv(F.from_int(2));
    Element y1 = F.mul(F.sub(*r, b), half);
    out.push_back({false, x, y1});
    if (!F.is_zero(*r)) out.push_back({false, x, F.mul(F.sub(F.neg(*r), b), half)});
    return out;
}

Point ReducedCurve::random_point(std::mt19937_64& rng) const
{
    if (singular_) throw std::logic_error("random point on a singular reduction");
    while (true) {
        auto pts = lift_x(field_.from_index(rng() % field_.order()));
        if (pts.empty()) continue;
        return pts[rng() % pts.size()];
    }
}

u64 ReducedCurve::point_key(const Point& p) const
{
    u64 q = field_.order();
    if (p.infinity) return q * q;
    return field_.index(p.x) * q + field_.index(p.y);
}

int ReducedCurve::solutions_in_y(const Element& x) const
{
    const Field& F = field_;
    const auto& [a1, a2, a3, a4, a6] = a_;
    Element b = F.add(F.mul(a1, x), a3);
    Element c = F.add(F.mul(F.add(F.mul(F.add(x, a2), x), a4), x), a6);
    if (F.characteristic() == 2) {
        if (F.is_zero(b)) return 1;
        Element binv = F.inv(b);
        return F.trace(F.mul(c, F.mul(binv, binv))) == 0 ? 2 : 0;
    }
    return 1 + F.quadratic_character(F.add(F.mul(b, b), F.mul_small(c, 4)));
}

void ReducedCurve::require_counting() const
{
    if (singular_) throw std::domain_error("point count requested on a singular reduction");
    if (field_.order() > kBruteForceCeiling) {
        throw BoundExceeded("field of order " + std::to_string(field_.order()) + " exceeds the brute-force ceiling");
    }
}

u64 ReducedCurve::count_points_serial() const
{
    require_counting();
    u64 q = field_.order();
    u64 n = 1;
    for (u64 i = 0; i < q; ++i) n += static_cast<u64>(solutions_in_y(field_.from_index(i)));
    return n;
}

u64 ReducedCurve::count_points() const
{
    require_counting();
    const long long q = static_cast<long long>(field_.order());
    u64 n = 1;
#pragma omp parallel for reduction(+ : n) schedule(static)
    for (long long i = 0; i < q; ++i) {
        n += static_cast<u64>(solutions_in_y(field_.from_index(static_cast<u64>(i))));
    }
    return n;
}

ReducedCurve reduce_curve(const WeierstrassModel& model, const Prime& ell, unsigned degree)
{
    if (!model.is_integral_at(ell)) {
        throw std::domain_error("model " + model.str() + " is not integral at " + ell.value().get_str());
    }
    Field F = Field::extension(ell.ul(), degree);
    std::array<Element, 5> a;
    for (std::size_t i = 0; i < 5; ++i) a[i] = F.from_rational(model.ainvs()[i]);
    return ReducedCurve(std::move(F), a);
}

Point reduce_point(const RationalPoint& p, const ReducedCurve& curve)
{
    if (p.is_infinity()) return {};
    const Field& F = curve.field();
    Integer ell(static_cast<unsigned long>(F.characteristic()));
    if (mpz_divisible_p(p.x().den().get_mpz_t(), ell.get_mpz_t())) return {};
    Point r{false, F.from_rational(p.x()), F.from_rational(p.y())};
    if (!curve.contains(r)) throw std::logic_error("reduced point is not on the reduced curve");
    return r;
}

Integer extension_count(long a_ell, u64 ell, unsigned degree)
{
    if (degree == 0) throw std::invalid_argument("extension degree 0");
    Integer a(a_ell), l(static_cast<unsigned long>(ell));
    if (a * a > 4 * l) {
        throw std::invalid_argument("trace " + std::to_string(a_ell) + " violates the Hasse bound at " + std::to_string(ell));
    }
    Integer t_prev = 2, t = a;
    for (unsigned k = 2; k <= degree; ++k) {
        Integer next = a * t - l * t_prev;
        t_prev = t;
        t = next;
    }
    Integer q;
    mpz_pow_ui(q.get_mpz_t(), l.get_mpz_t(), degree);
    return q + 1 - t;
}

long frobenius_trace(const ReducedCurve& curve)
{
    if (curve.field().degree() != 1) throw std::invalid_argument("frobenius_trace expects a prime field");
    u64 ell = curve.field().characteristic();
    return static_cast<long>(ell + 1) - static_cast<long>(curve.count_points());
}

PrimaryDecomposition::PrimaryDecomposition(const ReducedCurve& curve, u64 p, u64 seed, unsigned max_samples)
    : curve_(curve), p_(p), n_(curve.count_points()), cofactor_(n_), seed_(seed)
{
    if (!is_prime(Integer(static_cast<unsigned long>(p)))) throw std::invalid_argument("p must be prime");
    while (cofactor_ % p_ == 0) {
        cofactor_ /= p_;
        ++e_;
    }
    if (e_ == 0) return;
    // Weil pairing: E[p^b] in E(F_q) forces p^b | q - 1.
    unsigned b_max = 0;
    for (u64 t = curve_.field().order() - 1; t % p_ == 0 && b_max < e_ / 2; t /= p_) ++b_max;

    std::mt19937_64 rng(seed_);
    for (samples_ = 1; samples_ <= max_samples; ++samples_) {
        Point r = curve_.mul(cofactor_, curve_.random_point(rng));
        unsigned k = order_exponent(r);
        if (k > a_) {
            g1_ = r;
            a_ = k;
            g2_ = {};
            b_ = 0;
            rebuild_table();
        } else if (k > b_) {
            // Smallest j with p^j r in <g1>; then r - (c / p^j) g1 has order p^j.
            unsigned j = 0;
            Point t = r;
            auto it = table_.find(curve_.point_key(t));
            while (it == table_.end()) {
                t = curve_.mul(p_, t);
                ++j;
                it = table_.find(curve_.point_key(t));
            }
            if (j > b_) {
                u64 pj = 1;
                for (unsigned i = 0; i < j; ++i) pj *= p_;
                u64 c = it->second;
                if (c % pj != 0) throw std::logic_error("p-primary basis reduction failed");
                g2_ = curve_.add(r, curve_.neg(curve_.mul(c / pj, g1_)));
                b_ = j;
            }
        }
        if (a_ + b_ == e_) break;
    }
    if (a_ + b_ != e_) {
        throw std::runtime_error("p-primary structure not determined after " + std::to_string(max_samples) + " samples");
    }
    if (b_ > b_max) throw std::logic_error("p-primary structure contradicts the Weil pairing bound");
    pa_ = 1;
    for (unsigned i = 0; i < a_; ++i) pa_ *= p_;
    pb_ = 1;
    for (unsigned i = 0; i < b_; ++i) pb_ *= p_;
}

unsigned PrimaryDecomposition::order_exponent(const Point& r) const
{
    unsigned k = 0;
    Point t = r;
    while (!t.infinity) {
        t = curve_.mul(p_, t);
        if (++k > e_) throw std::logic_error("point order exceeds the p-part of the group order");
    }
    return k;
}

void PrimaryDecomposition::rebuild_table()
{
    table_.clear();
    Point t;
    for (u64 k = 0;; ++k) {
        table_.emplace(curve_.point_key(t), k);
        t = curve_.add(t, g1_);
        if (t.infinity) break;
    }
}

std::pair<u64, u64> PrimaryDecomposition::coordinates(const Point& p) const
{
    if (e_ == 0) return {0, 0};
    Point r = curve_.mul(cofactor_, p);
    Point minus_g2 = curve_.neg(g2_);
    for (u64 j = 0; j < pb_; ++j) {
        auto it = table_.find(curve_.point_key(r));
        if (it != table_.end()) return {it->second, j};
        r = curve_.add(r, minus_g2);
    }
    throw std::logic_error("point outside the computed p-primary basis");
}

bool PrimaryDecomposition::in_p_multiple(const Point& p) const
{
    if (e_ == 0) return true;
    auto [i, j] = coordinates(p);
    return i % p_ == 0 && (b_ == 0 || j % p_ == 0);
}

std::vector<u64> PrimaryDecomposition::image_mod_p(const Point& p) const
{
    std::vector<u64> v;
    if (e_ == 0) return v;
    auto [i, j] = coordinates(p);
    v.push_back(i % p_);
    if (b_ > 0) v.push_back(j % p_);
    return v;
}

std::string PrimaryDecomposition::structure() const
{
    auto part = [&](unsigned k) {
        u64 pk = 1;
        for (unsigned i = 0; i < k; ++i) pk *= p_;
        return "Z/" + std::to_string(pk);
    };
    if (a_ == 0) return "trivial";
    if (b_ == 0) return part(a_);
    return part(a_) + " x " + part(b_);
}

bool in_p_multiple(const ReducedCurve& curve, const Point& pbar, u64 p, u64 seed)
{
    return PrimaryDecomposition(curve, p, seed).in_p_multiple(pbar);
}

}  // namespace ecur::ff
