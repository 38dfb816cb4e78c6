#pragma once

#include "ecur/exact.hpp"

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ecur {

/// Coordinate change x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.
struct IsomorphismData {
    Rational u = 1, r = 0, s = 0, t = 0;

    static IsomorphismData identity() { return {}; }
    bool is_identity() const { return u == 1 && r.is_zero() && s.is_zero() && t.is_zero(); }
    IsomorphismData inverse() const;
    /// Apply *this first, then `next`.
    IsomorphismData then(const IsomorphismData& next) const;

    friend bool operator==(const IsomorphismData&, const IsomorphismData&) = default;
};

using AInvariants = std::array<Rational, 5>;  // a1, a2, a3, a4, a6

class WeierstrassModel;
using ModelPtr = std::shared_ptr<const WeierstrassModel>;

/// Long Weierstrass equation y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q.
class WeierstrassModel {
public:
    /// Throws SingularCurve when the discriminant vanishes.
    static ModelPtr from_ainvs(const AInvariants& a);
    static ModelPtr from_ainvs(std::initializer_list<long> a);

    const AInvariants& ainvs() const { return a_; }
    const Rational& a1() const { return a_[0]; }
    const Rational& a2() const { return a_[1]; }
    const Rational& a3() const { return a_[2]; }
    const Rational& a4() const { return a_[3]; }
    const Rational& a6() const { return a_[4]; }

    const Rational& b2() const { return b2_; }
    const Rational& b4() const { return b4_; }
    const Rational& b6() const { return b6_; }
    const Rational& b8() const { return b8_; }
    const Rational& c4() const { return c4_; }
    const Rational& c6() const { return c6_; }
    const Rational& disc() const { return disc_; }
    const Rational& j() const { return j_; }

    bool is_integral() const;
    bool is_integral_at(const Prime& p) const;
    bool contains(const Rational& x, const Rational& y) const;

    ModelPtr transform(const IsomorphismData& iso) const;
    /// Quadratic twist by d, as the short model y^2 = x^3 - 27 d^2 c4 x - 54 d^3 c6.
    ModelPtr quadratic_twist(const Integer& d) const;
    /// Model with integer coefficients via x = x'/d^2, y = y'/d^3 and the transform used.
    std::pair<ModelPtr, IsomorphismData> integral_model() const;

    std::string str() const;

    friend bool operator==(const WeierstrassModel& a, const WeierstrassModel& b) { return a.a_ == b.a_; }

private:
    explicit WeierstrassModel(const AInvariants& a);

    AInvariants a_;
    Rational b2_, b4_, b6_, b8_, c4_, c6_, disc_, j_;
};

class SingularCurve : public std::invalid_argument {
public:
    explicit SingularCurve(const std::string& what) : std::invalid_argument(what) {}
};

class ModelMismatch : public std::invalid_argument {
public:
    ModelMismatch() : std::invalid_argument("points lie on different Weierstrass models") {}
};

/// A rational point on a specific model; the model is part of its identity.
class RationalPoint {
public:
    static RationalPoint infinity(ModelPtr model);
    /// Throws std::invalid_argument when (x, y) is not on the model.
    static RationalPoint affine(ModelPtr model, Rational x, Rational y);

    bool is_infinity() const { return !xy_.has_value(); }
    const Rational& x() const;
    const Rational& y() const;
    const ModelPtr& model() const { return model_; }
    bool same_model(const RationalPoint& o) const;

    std::string str() const;

    friend bool operator==(const RationalPoint& a, const RationalPoint& b);

private:
    RationalPoint(ModelPtr m, std::optional<std::pair<Rational, Rational>> xy)
        : model_(std::move(m)), xy_(std::move(xy)) {}

    ModelPtr model_;
    std::optional<std::pair<Rational, Rational>> xy_;
};

RationalPoint negate(const RationalPoint& p);
RationalPoint add(const RationalPoint& p, const RationalPoint& q);
RationalPoint dbl(const RationalPoint& p);
RationalPoint scalar_mul(const Integer& k, const RationalPoint& p);
inline RationalPoint scalar_mul(long k, const RationalPoint& p) { return scalar_mul(Integer(k), p); }

/// Moves a point along `iso` onto `target` (the transformed model).
RationalPoint transport(const RationalPoint& p, const IsomorphismData& iso, ModelPtr target);

/// Order of p if it is at most `bound`, else 0.
int torsion_order(const RationalPoint& p, int bound = 12);

struct TorsionSubgroup {
    std::vector<RationalPoint> points;   // all points, identity first
    std::vector<int> invariants;         // {} trivial, {m} cyclic, {2, 2m}
    std::vector<RationalPoint> generators;

    std::size_t order() const { return points.size(); }
    std::string structure() const;
    bool has_point_of_order(int m) const;
};

/// Rational torsion by Nagell-Lutz on an integral short model. Throws if the
/// discriminant cannot be factored completely.
TorsionSubgroup torsion_subgroup(const ModelPtr& model, const FactorizationBudget& budget = {});

}  // namespace ecur
