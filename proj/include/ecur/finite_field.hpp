#pragma once

#include "ecur/curve.hpp"
#include "ecur/exact.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

namespace ecur::ff {

inline constexpr unsigned kMaxDegree = 20;
/// Largest field (number of elements) the brute-force routines will scan.
inline constexpr std::uint64_t kBruteForceCeiling = 1'000'000;

class BoundExceeded : public std::runtime_error {
public:
    explicit BoundExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Polynomial c[0] + c[1] t + ... modulo the field's defining polynomial.
struct Element {
    std::array<std::uint32_t, kMaxDegree> c{};
    friend bool operator==(const Element&, const Element&) = default;
};

/// F_q with q = ell^degree, realised as F_ell[t]/(modulus).
class Field {
public:
    static Field prime(std::uint64_t ell);
    /// Uses the smallest monic irreducible modulus in lexicographic order
    /// (coefficients compared from degree d-1 down to 0).
    static Field extension(std::uint64_t ell, unsigned degree);
    /// Throws std::invalid_argument unless `modulus` (low to high, monic) is irreducible.
    static Field with_modulus(std::uint64_t ell, std::vector<std::uint64_t> modulus);

    std::uint64_t characteristic() const { return ell_; }
    unsigned degree() const { return degree_; }
    std::uint64_t order() const { return q_; }
    const std::vector<std::uint64_t>& modulus() const { return modulus_; }

    Element zero() const { return {}; }
    Element one() const { Element e; e.c[0] = 1; return e; }
    Element from_int(const Integer& v) const;
    /// Throws std::domain_error when ell divides the denominator.
    Element from_rational(const Rational& v) const;
    Element from_index(std::uint64_t i) const;
    std::uint64_t index(const Element& e) const;

    bool is_zero(const Element& e) const { return e == Element{}; }
    Element add(const Element& a, const Element& b) const;
    Element sub(const Element& a, const Element& b) const;
    Element neg(const Element& a) const;
    Element mul(const Element& a, const Element& b) const;
    Element mul_small(const Element& a, std::uint64_t k) const;
    Element pow(Element a, std::uint64_t e) const;
    Element inv(const Element& a) const;

    /// Absolute trace to F_ell, returned as its integer representative.
    std::uint64_t trace(const Element& a) const;
    /// 0, 1 or -1; odd characteristic only.
    int quadratic_character(const Element& a) const;
    std::optional<Element> sqrt(const Element& a) const;
    /// Characteristic 2: a root w of w^2 + w = c.
    std::optional<Element> artin_schreier_root(const Element& c) const;

    static bool is_irreducible(std::uint64_t ell, const std::vector<std::uint64_t>& modulus);

private:
    Field(std::uint64_t ell, std::vector<std::uint64_t> modulus);

    std::uint64_t ell_;
    unsigned degree_;
    std::uint64_t q_;
    std::vector<std::uint64_t> modulus_;
    mutable std::optional<Element> nonresidue_;
};

struct Point {
    bool infinity = true;
    Element x, y;
    friend bool operator==(const Point&, const Point&) = default;
};

/// A p-integral Weierstrass model reduced into F_q.
class ReducedCurve {
public:
    ReducedCurve(Field field, const std::array<Element, 5>& a);

    const Field& field() const { return field_; }
    const std::array<Element, 5>& ainvs() const { return a_; }
    bool singular() const { return singular_; }

    bool contains(const Point& p) const;
    Point neg(const Point& p) const;
    Point add(const Point& p, const Point& q) const;
    Point mul(const Integer& k, const Point& p) const;
    Point mul(std::uint64_t k, const Point& p) const { return mul(Integer(static_cast<unsigned long>(k)), p); }

    /// Points with the given x-coordinate (zero, one or two).
    std::vector<Point> lift_x(const Element& x) const;
    Point random_point(std::mt19937_64& rng) const;
    std::uint64_t point_key(const Point& p) const;

    /// Reference scan: one x at a time.
    std::uint64_t count_points_serial() const;
    /// OpenMP scan over x; same result as the serial scan.
    std::uint64_t count_points() const;

private:
    void require_counting() const;
    // Number of y with y^2 + b y = c.
    int solutions_in_y(const Element& x) const;

    Field field_;
    std::array<Element, 5> a_;
    bool singular_;
};

/// Throws std::domain_error when the model is not ell-integral.
ReducedCurve reduce_curve(const WeierstrassModel& model, const Prime& ell, unsigned degree = 1);
/// Points with ell in the denominator of x reduce to the identity.
Point reduce_point(const RationalPoint& p, const ReducedCurve& curve);

/// |E(F_{ell^d})| from a_ell via t_k = a t_{k-1} - ell t_{k-2}. Throws if |a| > 2 sqrt(ell).
Integer extension_count(long a_ell, std::uint64_t ell, unsigned degree);
/// a_ell = ell + 1 - |E(F_ell)| for a curve over a prime field.
long frobenius_trace(const ReducedCurve& curve);

/// Z/p^a x Z/p^b (a >= b) p-primary part of E(F_q) with an explicit basis,
/// found from seeded random points and proven by |<g1> + <g2>| = p^e.
class PrimaryDecomposition {
public:
    PrimaryDecomposition(const ReducedCurve& curve, std::uint64_t p, std::uint64_t seed,
                         unsigned max_samples = 512);

    std::uint64_t prime() const { return p_; }
    std::uint64_t group_order() const { return n_; }
    unsigned exponent_a() const { return a_; }
    unsigned exponent_b() const { return b_; }
    unsigned valuation() const { return e_; }
    std::uint64_t seed() const { return seed_; }
    unsigned samples_used() const { return samples_; }
    const Point& generator_a() const { return g1_; }
    const Point& generator_b() const { return g2_; }
    /// Rank of E(F_q)/pE(F_q).
    unsigned rank() const { return (a_ > 0) + (b_ > 0); }

    /// Coordinates (i mod p^a, j mod p^b) of cofactor * P in the basis.
    std::pair<std::uint64_t, std::uint64_t> coordinates(const Point& p) const;
    bool in_p_multiple(const Point& p) const;
    /// Image in E(F_q)/pE(F_q) = (Z/p)^rank, up to a fixed unit.
    std::vector<std::uint64_t> image_mod_p(const Point& p) const;
    std::string structure() const;

private:
    unsigned order_exponent(const Point& r) const;
    void rebuild_table();

    ReducedCurve curve_;
    std::uint64_t p_, n_, cofactor_, seed_;
    unsigned e_ = 0, a_ = 0, b_ = 0, samples_ = 0;
    std::uint64_t pa_ = 1, pb_ = 1;
    Point g1_, g2_;
    std::unordered_map<std::uint64_t, std::uint64_t> table_;  // key(k g1) -> k
};

inline PrimaryDecomposition p_primary_structure(const ReducedCurve& curve, std::uint64_t p, std::uint64_t seed)
{
    return PrimaryDecomposition(curve, p, seed);
}

bool in_p_multiple(const ReducedCurve& curve, const Point& pbar, std::uint64_t p, std::uint64_t seed);

}  // namespace ecur::ff
