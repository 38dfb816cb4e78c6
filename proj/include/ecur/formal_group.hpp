#pragma once

#include "ecur/curve.hpp"
#include "ecur/exact.hpp"

#include <vector>

namespace ecur {

/// Power series c_0 + c_1 z + ... + O(z^precision). Terms at or beyond the
/// precision are unknown, and arithmetic tracks how far results are known.
class TruncatedSeries {
public:
    TruncatedSeries(std::vector<Rational> coeffs, int precision);
    static TruncatedSeries zero(int precision) { return TruncatedSeries({}, precision); }

    int precision() const { return precision_; }
    /// Throws std::out_of_range for k >= precision.
    const Rational& operator[](int k) const;
    const std::vector<Rational>& coefficients() const { return c_; }
    /// Index of the first nonzero known coefficient, or precision if none.
    int valuation() const;

    TruncatedSeries truncated(int precision) const;
    /// Multiply by z^k; negative k requires the low coefficients to vanish.
    TruncatedSeries shifted(int k) const;
    TruncatedSeries inverse() const;
    TruncatedSeries derivative() const;
    /// Termwise integral with zero constant term.
    TruncatedSeries integral() const;
    /// f(g(z)) with g(0) = 0.
    TruncatedSeries compose(const TruncatedSeries& g) const;
    /// Sum of the known terms at z.
    Rational evaluate(const Rational& z) const;

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
    friend TruncatedSeries operator*(const Rational& k, const TruncatedSeries& a);
    TruncatedSeries operator-() const;
    TruncatedSeries add_constant(const Rational& k) const;

    friend bool operator==(const TruncatedSeries&, const TruncatedSeries&) = default;

private:
    std::vector<Rational> c_;  // size == precision_
    int precision_;
};

/// z^shift * body.
struct LaurentSeries {
    int shift = 0;
    TruncatedSeries body = TruncatedSeries::zero(0);

    /// Exponent through which coefficients are known (exclusive).
    int absolute_precision() const { return shift + body.precision(); }
    /// Coefficient of z^e; zero below the shift.
    Rational coefficient(int e) const;
};

struct FormalExpansion {
    LaurentSeries x;  // z^-2 - a1 z^-1 - a2 - ...
    LaurentSeries y;  // -z^-3 + ...
    TruncatedSeries w = TruncatedSeries::zero(0);  // -1/y as a series in z = -x/y
};

/// Expansions of x and y in z = -x/y; the Weierstrass equation holds
/// modulo z^precision. Throws std::invalid_argument for precision < 4.
FormalExpansion formal_expansion(const WeierstrassModel& model, int precision);

/// Substitutes the expansion into the Weierstrass equation.
LaurentSeries weierstrass_residual(const WeierstrassModel& model, const FormalExpansion& e);

/// log(z) = z + ... + O(z^precision), the integral of the invariant differential.
/// Throws std::invalid_argument for precision < 2.
TruncatedSeries formal_log(const WeierstrassModel& model, int precision);

/// Series in z1, z2 truncated in total degree: terms with i + j < degree.
class BivariateSeries {
public:
    explicit BivariateSeries(int degree);
    static BivariateSeries in_first(const TruncatedSeries& f, int degree);
    static BivariateSeries in_second(const TruncatedSeries& f, int degree);

    int degree() const { return degree_; }
    const Rational& at(int i, int j) const;
    Rational& at(int i, int j);

    BivariateSeries inverse() const;
    /// f(this); requires a zero constant term.
    BivariateSeries substitute_into(const TruncatedSeries& f) const;

    friend BivariateSeries operator+(const BivariateSeries& a, const BivariateSeries& b);
    friend BivariateSeries operator-(const BivariateSeries& a, const BivariateSeries& b);
    friend BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b);
    friend BivariateSeries operator*(const Rational& k, const BivariateSeries& a);
    friend bool operator==(const BivariateSeries&, const BivariateSeries&) = default;

private:
    std::size_t index(int i, int j) const;
    int degree_;
    std::vector<Rational> c_;
};

/// F(z1, z2) = z1 + z2 - a1 z1 z2 - ... modulo total degree `degree`.
BivariateSeries formal_group_law(const WeierstrassModel& model, int degree);

struct E1Divisibility {
    bool divisible = false;  // P in p^n E_1(Q_p)
    Valuation vp_z = 0;
    Valuation vp_log = 0;
    int precision = 0;
};

/// Default number of log terms: max(p, n + 3), capped.
int default_log_precision(const Prime& p, unsigned n);

/// Decides P in p^n E_1(Q_p) through the formal logarithm at z = -x/y.
/// Rejects p = 2, models not minimal at p, and points outside E_1.
E1Divisibility e1_divisibility(const RationalPoint& P, const Prime& p, unsigned n, int precision = 0);
/// Same test with a precomputed log of P's model, which must be minimal at p.
E1Divisibility e1_divisibility(const RationalPoint& P, const Prime& p, unsigned n, const TruncatedSeries& log);

}  // namespace ecur
