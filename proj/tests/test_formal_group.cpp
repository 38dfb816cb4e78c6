#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ecur/formal_group.hpp"
#include "ecur/local_reduction.hpp"
#include "oracles.hpp"

using namespace ecur;

namespace {

ModelPtr model(const std::array<long, 5>& a) { return WeierstrassModel::from_ainvs({a[0], a[1], a[2], a[3], a[4]}); }

const std::vector<std::array<long, 5>> kModels = {
    {0, 1, 1, 0, 0}, {0, 0, 0, -2401, 1}, {1, 2, 3, 4, 5}, {1, -1, 1, -3, 7}, {0, -1, 1, 0, 0},
};

struct PointSet {
    ModelPtr model;
    unsigned long p;
    std::vector<RationalPoint> gens;
};

std::vector<PointSet> point_sets()
{
    auto e1 = model({0, 1, 1, 0, 0});
    auto e2 = model({0, 0, 0, -2401, 1});
    auto e3 = model({0, 0, 1, -1, 0});
    std::vector<RationalPoint> g2{RationalPoint::affine(e2, 0, 1), RationalPoint::affine(e2, -49, 1),
                                  RationalPoint::affine(e2, -1, 49)};
    return {{e1, 13, {RationalPoint::affine(e1, 0, 0)}},
            {e2, 7, g2},
            {e2, 3, g2},
            {e3, 3, {RationalPoint::affine(e3, 0, 0)}},
            {e3, 5, {RationalPoint::affine(e3, 0, 0)}}};
}

}  // namespace

TEST_CASE("truncated series arithmetic")
{
    TruncatedSeries f({1, 2, 3}, 5), g({0, 1}, 4);
    CHECK((f * g).precision() == 4);
    CHECK((f * g)[1] == Rational(1));
    CHECK((f * g)[3] == Rational(3));
    CHECK_THROWS_AS(g[4], std::out_of_range);
    auto inv = f.inverse();
    auto one = f * inv;
    for (int k = 0; k < one.precision(); ++k) CHECK(one[k] == Rational(k == 0 ? 1 : 0));
    CHECK(f.derivative().integral().add_constant(1) == f.truncated(5));
    CHECK(f.evaluate(Rational(Integer(1), Integer(10))) == Rational(Integer(123), Integer(100)));
}

TEST_CASE("formal expansion leading terms")
{
    for (const auto& a : kModels) {
        auto E = model(a);
        auto X = formal_expansion(*E, 12);
        const Rational a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3], a6 = a[4];
        CHECK(X.x.coefficient(-2) == Rational(1));
        CHECK(X.x.coefficient(-1) == -a1);
        CHECK(X.x.coefficient(0) == -a2);
        CHECK(X.x.coefficient(1) == -a3);
        CHECK(X.x.coefficient(2) == -(a4 + a1 * a3));
        CHECK(X.y.coefficient(-3) == Rational(-1));
        CHECK(X.y.coefficient(-2) == a1);
        CHECK(X.y.coefficient(-1) == a2);
        // w = z^3 + a1 z^4 + (a1^2 + a2) z^5 + (a1^3 + 2 a1 a2 + a3) z^6 + ...
        CHECK(X.w[3] == Rational(1));
        CHECK(X.w[4] == a1);
        CHECK(X.w[5] == a1 * a1 + a2);
        CHECK(X.w[6] == a1 * a1 * a1 + Rational(2) * a1 * a2 + a3);
        (void)a6;

        auto r = weierstrass_residual(*E, X);
        CHECK(r.absolute_precision() >= 12);
        for (int e = r.shift; e < 12; ++e) CHECK(r.coefficient(e) == Rational(0));
    }
    CHECK_THROWS(formal_expansion(*model({0, 1, 1, 0, 0}), 3));
}

TEST_CASE("formal expansion is stable in the precision")
{
    auto E = model({0, 0, 0, -2401, 1});
    auto lo = formal_expansion(*E, 10), hi = formal_expansion(*E, 18);
    for (int e = -2; e < lo.x.absolute_precision(); ++e) CHECK(lo.x.coefficient(e) == hi.x.coefficient(e));
    CHECK(hi.x.coefficient(0) == Rational(0));
    CHECK(hi.x.coefficient(2) == Rational(-2401) * Rational(-1));
}

TEST_CASE("formal logarithm")
{
    for (const auto& a : kModels) {
        auto E = model(a);
        auto L = formal_log(*E, 30);
        CHECK(L[0] == Rational(0));
        CHECK(L[1] == Rational(1));
        CHECK(L[2] == Rational(a[0]) / Rational(2));
        CHECK(L[3] == (Rational(a[0] * a[0]) + Rational(a[1])) / Rational(3));
        for (int k = 1; k < L.precision(); ++k) {
            REQUIRE((Rational(k) * L[k]).is_integer());
        }
    }
    CHECK(formal_log(*model({0, 0, 0, -2401, 1}), 8)[2] == Rational(0));
    CHECK_THROWS(formal_log(*model({0, 1, 1, 0, 0}), 1));
}

TEST_CASE("formal group law is commutative with identity and log turns it into addition")
{
    const int D = 8;
    for (const auto& a : kModels) {
        auto E = model(a);
        auto F = formal_group_law(*E, D);
        for (int i = 0; i < D; ++i) {
            for (int j = 0; i + j < D; ++j) REQUIRE(F.at(i, j) == F.at(j, i));
            REQUIRE(F.at(i, 0) == Rational(i == 1 ? 1 : 0));
        }
        CHECK(F.at(1, 1) == -Rational(a[0]));
        CHECK(F.at(2, 1) == -Rational(a[1]));

        auto L = formal_log(*E, D);
        auto lhs = F.substitute_into(L);
        auto rhs = BivariateSeries::in_first(L, D) + BivariateSeries::in_second(L, D);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("log valuation equals vp(z) on sampled points")
{
    int sampled = 0;
    for (const auto& s : point_sets()) {
        Prime p(s.p);
        auto [M, iso] = minimal_model_at(s.model, p);
        auto L = formal_log(*M, std::max<int>(s.p, 8));
        for (const auto& g : s.gens) {
            for (long k = 1; k <= 40 && sampled < 400; ++k) {
                auto P = transport(scalar_mul(k, g), iso, M);
                if (P.is_infinity() || vp(P.x(), p) >= Valuation(0)) continue;
                Rational z = -P.x() / P.y();
                REQUIRE(vp(L.evaluate(z), p) == vp(z, p));
                ++sampled;
            }
        }
    }
    CHECK(sampled >= 50);
}

TEST_CASE("e1_divisibility fixed cases")
{
    auto E = model({0, 1, 1, 0, 0});
    auto P = scalar_mul(19, RationalPoint::affine(E, 0, 0));
    auto r = e1_divisibility(P, Prime(13ul), 2);
    CHECK(r.divisible);
    CHECK(r.vp_z == Valuation(3));
    CHECK(r.vp_log == Valuation(3));

    auto G = model({0, 0, 0, -2401, 1});
    auto R2 = scalar_mul(2, RationalPoint::affine(G, -1, 49));
    auto s = e1_divisibility(R2, Prime(7ul), 1);
    CHECK(s.divisible);
    CHECK(s.vp_z == Valuation(2));

    bool found_vz1 = false;
    for (const auto& ps : point_sets()) {
        for (long k = 1; k <= 30 && !found_vz1; ++k) {
            auto Q = scalar_mul(k, ps.gens[0]);
            if (Q.is_infinity() || vp(Q.x(), Prime(ps.p)) >= Valuation(0)) continue;
            auto [M, iso] = minimal_model_at(ps.model, Prime(ps.p));
            auto Qm = transport(Q, iso, M);
            auto t = e1_divisibility(Qm, Prime(ps.p), 1);
            if (t.vp_z == Valuation(1)) {
                CHECK_FALSE(t.divisible);
                found_vz1 = true;
            }
        }
    }
    CHECK(found_vz1);

    CHECK_THROWS(e1_divisibility(P, Prime(2ul), 1));
    CHECK_THROWS(e1_divisibility(RationalPoint::affine(E, 0, 0), Prime(13ul), 1));
    auto scaled = E->transform(IsomorphismData{Rational(Integer(1), Integer(13)), 0, 0, 0});
    CHECK_THROWS(e1_divisibility(transport(P, IsomorphismData{Rational(Integer(1), Integer(13)), 0, 0, 0}, scaled),
                                 Prime(13ul), 1));
    CHECK(e1_divisibility(RationalPoint::infinity(E), Prime(13ul), 5).divisible);
}

TEST_CASE("formal route agrees with the valuation inequalities")
{
    int pairs = 0;
    for (const auto& s : point_sets()) {
        Prime p(s.p);
        auto [M, iso] = minimal_model_at(s.model, p);
        for (const auto& g : s.gens) {
            for (long k = 1; k <= 30; ++k) {
                auto P = transport(scalar_mul(k, g), iso, M);
                if (P.is_infinity() || vp(P.x(), p) >= Valuation(0)) continue;
                for (unsigned n = 1; n <= 4; ++n) {
                    bool valuation_route = vp(P.x() / P.y(), p) >= Valuation(static_cast<long>(n) + 1);
                    REQUIRE(e1_divisibility(P, p, n).divisible == valuation_route);
                    ++pairs;
                }
            }
        }
    }
    CHECK(pairs >= 200);
}
