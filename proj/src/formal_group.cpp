#include "ecur/formal_group.hpp"

#include "ecur/local_reduction.hpp"

#include <algorithm>
#include <stdexcept>

namespace ecur {

TruncatedSeries::TruncatedSeries(std::vector<Rational> coeffs, int precision) : c_(std::move(coeffs)), precision_(precision)
{
    if (precision < 0) throw std::invalid_argument("negative series precision");
    c_.resize(static_cast<std::size_t>(precision), Rational(0));
}

const Rational& TruncatedSeries::operator[](int k) const
{
    if (k < 0 || k >= precision_) throw std::out_of_range("series coefficient beyond precision");
    return c_[static_cast<std::size_t>(k)];
}

int TruncatedSeries::valuation() const
{
    for (int k = 0; k < precision_; ++k) {
        if (!c_[k].is_zero()) return k;
    }
    return precision_;
}

TruncatedSeries TruncatedSeries::truncated(int precision) const
{
    return TruncatedSeries(std::vector<Rational>(c_.begin(), c_.begin() + std::min(precision, precision_)),
                           std::min(precision, precision_));
}

TruncatedSeries TruncatedSeries::shifted(int k) const
{
    if (k >= 0) {
        std::vector<Rational> c(static_cast<std::size_t>(k), Rational(0));
        c.insert(c.end(), c_.begin(), c_.end());
        return TruncatedSeries(std::move(c), precision_ + k);
    }
    if (valuation() < -k) throw std::domain_error("shift would produce negative powers");
    return TruncatedSeries(std::vector<Rational>(c_.begin() - k, c_.end()), precision_ + k);
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b)
{
    int p = std::min(a.precision_, b.precision_);
    std::vector<Rational> c(static_cast<std::size_t>(p));
    for (int k = 0; k < p; ++k) c[k] = a.c_[k] + b.c_[k];
    return TruncatedSeries(std::move(c), p);
}

TruncatedSeries TruncatedSeries::operator-() const
{
    std::vector<Rational> c(c_.size());
    for (std::size_t k = 0; k < c_.size(); ++k) c[k] = -c_[k];
    return TruncatedSeries(std::move(c), precision_);
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return a + (-b); }

TruncatedSeries operator*(const Rational& k, const TruncatedSeries& a)
{
    std::vector<Rational> c(a.c_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = k * a.c_[i];
    return TruncatedSeries(std::move(c), a.precision_);
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b)
{
    int va = a.valuation(), vb = b.valuation();
    int p = std::min(va + b.precision_, vb + a.precision_);
    std::vector<Rational> c(static_cast<std::size_t>(p), Rational(0));
    for (int i = va; i < a.precision_ && i < p; ++i) {
        if (a.c_[i].is_zero()) continue;
        for (int j = vb; j < b.precision_ && i + j < p; ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return TruncatedSeries(std::move(c), p);
}

TruncatedSeries TruncatedSeries::add_constant(const Rational& k) const
{
    if (precision_ == 0) return *this;
    TruncatedSeries r = *this;
    r.c_[0] += k;
    return r;
}

TruncatedSeries TruncatedSeries::inverse() const
{
    if (precision_ == 0 || c_[0].is_zero()) throw std::domain_error("series with zero constant term is not invertible");
    std::vector<Rational> r(static_cast<std::size_t>(precision_));
    Rational inv0 = Rational(1) / c_[0];
    r[0] = inv0;
    for (int n = 1; n < precision_; ++n) {
        Rational s = 0;
        for (int k = 1; k <= n; ++k) s += c_[k] * r[n - k];
        r[n] = -s * inv0;
    }
    return TruncatedSeries(std::move(r), precision_);
}

TruncatedSeries TruncatedSeries::derivative() const
{
    if (precision_ == 0) return *this;
    std::vector<Rational> c(static_cast<std::size_t>(precision_ - 1));
    for (int k = 1; k < precision_; ++k) c[k - 1] = Rational(k) * c_[k];
    return TruncatedSeries(std::move(c), precision_ - 1);
}

TruncatedSeries TruncatedSeries::integral() const
{
    std::vector<Rational> c(static_cast<std::size_t>(precision_ + 1), Rational(0));
    for (int k = 0; k < precision_; ++k) c[k + 1] = c_[k] / Rational(k + 1);
    return TruncatedSeries(std::move(c), precision_ + 1);
}

TruncatedSeries TruncatedSeries::compose(const TruncatedSeries& g) const
{
    int vg = g.valuation();
    if (vg < 1) throw std::domain_error("inner series must have zero constant term");
    long target = std::min<long>(g.precision(), static_cast<long>(vg) * precision_);
    int t = static_cast<int>(target);
    if (precision_ == 0) return zero(0);
    TruncatedSeries r = zero(t).add_constant(c_[precision_ - 1]);
    for (int k = precision_ - 2; k >= 0; --k) r = (r * g).truncated(t).add_constant(c_[k]);
    return r.truncated(t);
}

Rational TruncatedSeries::evaluate(const Rational& z) const
{
    Rational s = 0;
    for (int k = precision_; k-- > 0;) s = s * z + c_[k];
    return s;
}

Rational LaurentSeries::coefficient(int e) const
{
    if (e >= absolute_precision()) throw std::out_of_range("Laurent coefficient beyond precision");
    if (e < shift) return 0;
    return body[e - shift];
}

namespace {

LaurentSeries normalized(LaurentSeries a)
{
    int v = a.body.valuation();
    if (v > 0 && v < a.body.precision()) {
        a.body = a.body.shifted(-v);
        a.shift += v;
    }
    return a;
}

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b)
{
    int s = std::min(a.shift, b.shift);
    return normalized({s, a.body.shifted(a.shift - s) + b.body.shifted(b.shift - s)});
}

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b)
{
    return normalized({a.shift + b.shift, a.body * b.body});
}

LaurentSeries operator*(const Rational& k, const LaurentSeries& a) { return normalized({a.shift, k * a.body}); }

LaurentSeries constant(const Rational& k, int precision) { return normalized({0, TruncatedSeries({k}, precision)}); }

LaurentSeries inverse(const LaurentSeries& a)
{
    LaurentSeries n = normalized(a);
    return {-n.shift, n.body.inverse()};
}

LaurentSeries derivative(const LaurentSeries& a)
{
    return normalized({a.shift - 1, Rational(a.shift) * a.body + a.body.derivative().shifted(1)});
}

// w(z) modulo z^m by iterating w = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3.
TruncatedSeries w_series(const WeierstrassModel& E, int m)
{
    TruncatedSeries z3 = TruncatedSeries({0, 0, 0, 1}, m).truncated(m);
    TruncatedSeries w = z3;
    for (int it = 0; it <= m; ++it) {
        TruncatedSeries w2 = (w * w).truncated(m);
        TruncatedSeries next = z3 + E.a1() * w.shifted(1).truncated(m) + E.a2() * w.shifted(2).truncated(m) +
                               E.a3() * w2 + E.a4() * w2.shifted(1).truncated(m) + E.a6() * (w2 * w).truncated(m);
        if (next == w) break;
        w = std::move(next);
    }
    return w;
}

FormalExpansion expansion_from_w(TruncatedSeries w)
{
    TruncatedSeries u_inv = w.shifted(-3).inverse();
    FormalExpansion e;
    e.x = normalized({-2, u_inv});
    e.y = normalized({-3, -u_inv});
    e.w = std::move(w);
    return e;
}

int check_precision(int precision, int minimum, const char* what)
{
    if (precision < minimum) {
        throw std::invalid_argument(std::string(what) + " precision must be at least " + std::to_string(minimum));
    }
    return precision;
}

}  // namespace

FormalExpansion formal_expansion(const WeierstrassModel& model, int precision)
{
    check_precision(precision, 4, "formal expansion");
    return expansion_from_w(w_series(model, precision + 9));
}

LaurentSeries weierstrass_residual(const WeierstrassModel& E, const FormalExpansion& e)
{
    int prec = e.y.absolute_precision() + 16;
    const auto &x = e.x, &y = e.y;
    LaurentSeries lhs = y * y + E.a1() * (x * y) + E.a3() * y;
    LaurentSeries rhs = x * x * x + E.a2() * (x * x) + E.a4() * x + constant(E.a6(), prec);
    return lhs + Rational(-1) * rhs;
}

TruncatedSeries formal_log(const WeierstrassModel& model, int precision)
{
    check_precision(precision, 2, "formal log");
    FormalExpansion e = expansion_from_w(w_series(model, precision + 2));
    int prec = precision + 16;
    LaurentSeries den = Rational(2) * e.y + model.a1() * e.x + constant(model.a3(), prec);
    LaurentSeries omega = derivative(e.x) * inverse(den);
    if (omega.shift != 0) throw std::logic_error("invariant differential does not start at 1");
    return omega.body.integral().truncated(precision);
}

BivariateSeries::BivariateSeries(int degree) : degree_(degree), c_(static_cast<std::size_t>(degree * degree), Rational(0))
{
    if (degree < 1) throw std::invalid_argument("bivariate degree must be positive");
}

std::size_t BivariateSeries::index(int i, int j) const
{
    if (i < 0 || j < 0 || i + j >= degree_) throw std::out_of_range("bivariate term beyond total degree");
    return static_cast<std::size_t>(i * degree_ + j);
}

const Rational& BivariateSeries::at(int i, int j) const { return c_[index(i, j)]; }
Rational& BivariateSeries::at(int i, int j) { return c_[index(i, j)]; }

BivariateSeries BivariateSeries::in_first(const TruncatedSeries& f, int degree)
{
    if (f.precision() < degree) throw std::invalid_argument("series precision below bivariate degree");
    BivariateSeries r(degree);
    for (int i = 0; i < degree; ++i) r.at(i, 0) = f[i];
    return r;
}

BivariateSeries BivariateSeries::in_second(const TruncatedSeries& f, int degree)
{
    if (f.precision() < degree) throw std::invalid_argument("series precision below bivariate degree");
    BivariateSeries r(degree);
    for (int j = 0; j < degree; ++j) r.at(0, j) = f[j];
    return r;
}

BivariateSeries operator+(const BivariateSeries& a, const BivariateSeries& b)
{
    if (a.degree_ != b.degree_) throw std::invalid_argument("bivariate degree mismatch");
    BivariateSeries r(a.degree_);
    for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] = a.c_[k] + b.c_[k];
    return r;
}

BivariateSeries operator*(const Rational& k, const BivariateSeries& a)
{
    BivariateSeries r(a.degree_);
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = k * a.c_[i];
    return r;
}

BivariateSeries operator-(const BivariateSeries& a, const BivariateSeries& b) { return a + Rational(-1) * b; }

BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b)
{
    if (a.degree_ != b.degree_) throw std::invalid_argument("bivariate degree mismatch");
    int D = a.degree_;
    BivariateSeries r(D);
    for (int i = 0; i < D; ++i) {
        for (int j = 0; i + j < D; ++j) {
            const Rational& x = a.at(i, j);
            if (x.is_zero()) continue;
            for (int k = 0; i + j + k < D; ++k) {
                for (int l = 0; i + j + k + l < D; ++l) r.at(i + k, j + l) += x * b.at(k, l);
            }
        }
    }
    return r;
}

BivariateSeries BivariateSeries::inverse() const
{
    if (at(0, 0).is_zero()) throw std::domain_error("bivariate series with zero constant term is not invertible");
    BivariateSeries r(degree_);
    Rational inv0 = Rational(1) / at(0, 0);
    r.at(0, 0) = inv0;
    for (int d = 1; d < degree_; ++d) {
        for (int i = 0; i <= d; ++i) {
            int j = d - i;
            Rational s = 0;
            for (int k = 0; k <= i; ++k) {
                for (int l = 0; l <= j; ++l) {
                    if (k == 0 && l == 0) continue;
                    s += at(k, l) * r.at(i - k, j - l);
                }
            }
            r.at(i, j) = -s * inv0;
        }
    }
    return r;
}

BivariateSeries BivariateSeries::substitute_into(const TruncatedSeries& f) const
{
    if (!at(0, 0).is_zero()) throw std::domain_error("substitution needs a zero constant term");
    if (f.precision() < degree_) throw std::invalid_argument("outer series precision below bivariate degree");
    BivariateSeries r(degree_);
    for (int k = degree_; k-- > 0;) {
        r = r * *this;
        r.at(0, 0) += f[k];
    }
    return r;
}

BivariateSeries formal_group_law(const WeierstrassModel& E, int degree)
{
    int D = degree;
    if (D < 2) throw std::invalid_argument("formal group law degree must be at least 2");
    FormalExpansion e = expansion_from_w(w_series(E, D + 2));
    const TruncatedSeries& w = e.w;

    BivariateSeries lambda(D), z1(D), z2(D), one(D);
    for (int i = 0; i < D; ++i) {
        for (int j = 0; i + j < D; ++j) lambda.at(i, j) = w[i + j + 1];
    }
    if (D > 1) {
        z1.at(1, 0) = 1;
        z2.at(0, 1) = 1;
    }
    one.at(0, 0) = 1;
    BivariateSeries w1 = BivariateSeries::in_first(w, D);
    BivariateSeries nu = w1 - lambda * z1;
    BivariateSeries l2 = lambda * lambda;

    // The line w = lambda z + nu meets the curve at z1, z2, z3; the roots sum to -num/den.
    BivariateSeries num = E.a1() * lambda + E.a2() * nu + E.a3() * l2 + Rational(2) * E.a4() * (lambda * nu) +
                          Rational(3) * E.a6() * (l2 * nu);
    BivariateSeries den = one + E.a2() * lambda + E.a4() * l2 + E.a6() * (l2 * lambda);
    BivariateSeries z3 = Rational(-1) * (z1 + z2 + num * den.inverse());

    // Negation in the parameter: i(z) = x / (y + a1 x + a3).
    int prec = D + 16;
    LaurentSeries i_series = e.x * inverse(e.y + E.a1() * e.x + constant(E.a3(), prec));
    if (i_series.shift != 1) throw std::logic_error("formal inverse does not start at -z");
    return z3.substitute_into(i_series.body.shifted(1).truncated(D));
}

int default_log_precision(const Prime& p, unsigned n)
{
    constexpr unsigned long kCap = 32;
    unsigned long small_p = p.fits_ulong() ? std::min(p.ul(), kCap) : kCap;
    return static_cast<int>(std::min(std::max<unsigned long>(n + 3ul, small_p), kCap));
}

E1Divisibility e1_divisibility(const RationalPoint& P, const Prime& p, unsigned n, int precision)
{
    if (p.value() == 2) throw std::invalid_argument("formal-log divisibility test needs an odd prime");
    const ModelPtr& model = P.model();
    if (!minimal_model_at(model, p).second.is_identity()) {
        throw std::invalid_argument("model " + model->str() + " is not minimal at " + p.value().get_str());
    }
    int prec = precision > 0 ? precision : default_log_precision(p, n);
    return e1_divisibility(P, p, n, formal_log(*model, prec));
}

E1Divisibility e1_divisibility(const RationalPoint& P, const Prime& p, unsigned n, const TruncatedSeries& log)
{
    if (p.value() == 2) throw std::invalid_argument("formal-log divisibility test needs an odd prime");
    E1Divisibility out;
    out.precision = log.precision();
    if (P.is_infinity()) {
        out.divisible = true;
        out.vp_z = Valuation::infinity();
        out.vp_log = Valuation::infinity();
        return out;
    }
    if (vp(P.x(), p) >= Valuation(0)) {
        throw std::invalid_argument("point " + P.str() + " is not in the kernel of reduction at " + p.value().get_str());
    }
    Rational z = -P.x() / P.y();
    out.vp_z = vp(z, p);
    out.vp_log = vp(log.evaluate(z), p);
    out.divisible = out.vp_log >= Valuation(static_cast<long>(n) + 1);
    return out;
}

}  // namespace ecur
