#include "ecur/curve.hpp"

#include <sstream>
#include <stdexcept>

namespace ecur {

IsomorphismData IsomorphismData::inverse() const
{
    if (u.is_zero()) throw std::invalid_argument("isomorphism with u = 0");
    Rational u2 = u * u;
    return {Rational(1) / u, -r / u2, -s / u, (r * s - t) / (u2 * u)};
}

IsomorphismData IsomorphismData::then(const IsomorphismData& next) const
{
    Rational u2 = u * u;
    return {u * next.u, r + u2 * next.r, s + u * next.s, t + u2 * s * next.r + u2 * u * next.t};
}

WeierstrassModel::WeierstrassModel(const AInvariants& a) : a_(a)
{
    const auto& [a1, a2, a3, a4, a6] = a_;
    b2_ = a1 * a1 + 4 * a2;
    b4_ = 2 * a4 + a1 * a3;
    b6_ = a3 * a3 + 4 * a6;
    b8_ = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    c4_ = b2_ * b2_ - 24 * b4_;
    c6_ = -b2_ * b2_ * b2_ + 36 * b2_ * b4_ - 216 * b6_;
    disc_ = -b2_ * b2_ * b8_ - 8 * b4_ * b4_ * b4_ - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;
    if (!disc_.is_zero()) j_ = c4_ * c4_ * c4_ / disc_;
}

ModelPtr WeierstrassModel::from_ainvs(const AInvariants& a)
{
    auto m = std::shared_ptr<WeierstrassModel>(new WeierstrassModel(a));
    if (m->disc_.is_zero()) {
        throw SingularCurve("singular Weierstrass model " + m->str() + ": discriminant is 0");
    }
    return m;
}

ModelPtr WeierstrassModel::from_ainvs(std::initializer_list<long> a)
{
    if (a.size() != 5) throw std::invalid_argument("expected five a-invariants");
    AInvariants ai;
    std::size_t i = 0;
    for (long v : a) ai[i++] = Rational(v);
    return from_ainvs(ai);
}

bool WeierstrassModel::is_integral() const
{
    for (const auto& c : a_) {
        if (!c.is_integer()) return false;
    }
    return true;
}

bool WeierstrassModel::is_integral_at(const Prime& p) const
{
    for (const auto& c : a_) {
        if (mpz_divisible_p(c.den().get_mpz_t(), p.value().get_mpz_t())) return false;
    }
    return true;
}

bool WeierstrassModel::contains(const Rational& x, const Rational& y) const
{
    const auto& [a1, a2, a3, a4, a6] = a_;
    return y * y + a1 * x * y + a3 * y == x * x * x + a2 * x * x + a4 * x + a6;
}

ModelPtr WeierstrassModel::transform(const IsomorphismData& iso) const
{
    const auto& [u, r, s, t] = iso;
    if (u.is_zero()) throw std::invalid_argument("isomorphism with u = 0");
    const auto& [a1, a2, a3, a4, a6] = a_;
    Rational u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
    AInvariants b;
    b[0] = (a1 + 2 * s) / u;
    b[1] = (a2 - s * a1 + 3 * r - s * s) / u2;
    b[2] = (a3 + r * a1 + 2 * t) / u3;
    b[3] = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u4;
    b[4] = (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / u6;
    return from_ainvs(b);
}

ModelPtr WeierstrassModel::quadratic_twist(const Integer& d) const
{
    if (d == 0) throw std::invalid_argument("quadratic twist by 0");
    Rational dd(d);
    AInvariants b{Rational(0), Rational(0), Rational(0), -27 * dd * dd * c4_, -54 * dd * dd * dd * c6_};
    return from_ainvs(b);
}

std::pair<ModelPtr, IsomorphismData> WeierstrassModel::integral_model() const
{
    Integer d = 1;
    for (const auto& c : a_) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), c.den().get_mpz_t());
    IsomorphismData iso;
    iso.u = Rational(Integer(1), d);
    if (d == 1) return {from_ainvs(a_), iso};
    return {transform(iso), iso};
}

std::string WeierstrassModel::str() const
{
    std::ostringstream os;
    os << "[" << a_[0] << "," << a_[1] << "," << a_[2] << "," << a_[3] << "," << a_[4] << "]";
    return os.str();
}

RationalPoint RationalPoint::infinity(ModelPtr model) { return RationalPoint(std::move(model), std::nullopt); }

RationalPoint RationalPoint::affine(ModelPtr model, Rational x, Rational y)
{
    if (!model->contains(x, y)) {
        throw std::invalid_argument("point (" + x.str() + ", " + y.str() + ") is not on " + model->str());
    }
    return RationalPoint(std::move(model), std::make_pair(std::move(x), std::move(y)));
}

const Rational& RationalPoint::x() const
{
    if (!xy_) throw std::logic_error("x() of the point at infinity");
    return xy_->first;
}

const Rational& RationalPoint::y() const
{
    if (!xy_) throw std::logic_error("y() of the point at infinity");
    return xy_->second;
}

bool RationalPoint::same_model(const RationalPoint& o) const
{
    return model_ == o.model_ || *model_ == *o.model_;
}

std::string RationalPoint::str() const
{
    if (!xy_) return "O";
    return "(" + xy_->first.str() + ", " + xy_->second.str() + ")";
}

bool operator==(const RationalPoint& a, const RationalPoint& b)
{
    return a.same_model(b) && a.xy_ == b.xy_;
}

RationalPoint negate(const RationalPoint& p)
{
    if (p.is_infinity()) return p;
    const auto& m = *p.model();
    return RationalPoint::affine(p.model(), p.x(), -p.y() - m.a1() * p.x() - m.a3());
}

RationalPoint add(const RationalPoint& p, const RationalPoint& q)
{
    if (!p.same_model(q)) throw ModelMismatch();
    if (p.is_infinity()) return q;
    if (q.is_infinity()) return p;
    const auto& m = *p.model();
    const Rational &x1 = p.x(), &y1 = p.y(), &x2 = q.x(), &y2 = q.y();
    Rational lambda, nu;
    if (x1 == x2) {
        if ((y1 + y2 + m.a1() * x2 + m.a3()).is_zero()) return RationalPoint::infinity(p.model());
        Rational den = 2 * y1 + m.a1() * x1 + m.a3();
        lambda = (3 * x1 * x1 + 2 * m.a2() * x1 + m.a4() - m.a1() * y1) / den;
        nu = (-x1 * x1 * x1 + m.a4() * x1 + 2 * m.a6() - m.a3() * y1) / den;
    } else {
        Rational dx = x2 - x1;
        lambda = (y2 - y1) / dx;
        nu = (y1 * x2 - y2 * x1) / dx;
    }
    Rational x3 = lambda * lambda + m.a1() * lambda - m.a2() - x1 - x2;
    Rational y3 = -(lambda + m.a1()) * x3 - nu - m.a3();
    return RationalPoint::affine(p.model(), std::move(x3), std::move(y3));
}

RationalPoint dbl(const RationalPoint& p) { return add(p, p); }

RationalPoint scalar_mul(const Integer& k, const RationalPoint& p)
{
    if (k < 0) return scalar_mul(Integer(-k), negate(p));
    RationalPoint acc = RationalPoint::infinity(p.model());
    for (long bit = static_cast<long>(mpz_sizeinbase(k.get_mpz_t(), 2)) - 1; bit >= 0 && k != 0; --bit) {
        acc = dbl(acc);
        if (mpz_tstbit(k.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) acc = add(acc, p);
    }
    return acc;
}

RationalPoint transport(const RationalPoint& p, const IsomorphismData& iso, ModelPtr target)
{
    if (p.is_infinity()) return RationalPoint::infinity(std::move(target));
    const auto& [u, r, s, t] = iso;
    Rational u2 = u * u;
    Rational x = (p.x() - r) / u2;
    Rational y = (p.y() - s * (p.x() - r) - t) / (u2 * u);
    return RationalPoint::affine(std::move(target), std::move(x), std::move(y));
}

int torsion_order(const RationalPoint& p, int bound)
{
    RationalPoint acc = p;
    for (int k = 1; k <= bound; ++k) {
        if (acc.is_infinity()) return k;
        acc = add(acc, p);
    }
    return 0;
}

}  // namespace ecur
