#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ecur/curve.hpp"
#include "oracles.hpp"

#include <random>

using namespace ecur;

namespace {

std::array<mpq_class, 5> raw(const WeierstrassModel& E)
{
    std::array<mpq_class, 5> a;
    for (int i = 0; i < 5; ++i) a[i] = E.ainvs()[i].raw();
    return a;
}

oracle::Pt raw(const RationalPoint& P)
{
    if (P.is_infinity()) return std::nullopt;
    return std::make_pair(P.x().raw(), P.y().raw());
}

void check_invariant_identities(const WeierstrassModel& E)
{
    auto inv = oracle::invariants(raw(E));
    REQUIRE(E.disc().raw() == inv.disc);
    REQUIRE(E.c4().raw() == inv.c4);
    REQUIRE(E.c6().raw() == inv.c6);
    REQUIRE(E.j().raw() == inv.j);
    REQUIRE(E.c4() * E.c4() * E.c4() - E.c6() * E.c6() == Rational(1728) * E.disc());
    REQUIRE(Rational(4) * E.b8() == E.b2() * E.b6() - E.b4() * E.b4());
}

struct Sample {
    ModelPtr model;
    std::vector<RationalPoint> gens;
};

std::vector<Sample> samples()
{
    auto e1 = WeierstrassModel::from_ainvs({0, 1, 1, 0, 0});
    auto e2 = WeierstrassModel::from_ainvs({0, 0, 0, -2401, 1});
    auto e3 = WeierstrassModel::from_ainvs({0, 0, 1, -1, 0});  // 37a1
    auto e4 = WeierstrassModel::from_ainvs({1, 0, 0, -3, 4});
    return {
        {e1, {RationalPoint::affine(e1, 0, 0)}},
        {e2, {RationalPoint::affine(e2, 0, 1), RationalPoint::affine(e2, -49, 1), RationalPoint::affine(e2, -1, 49)}},
        {e3, {RationalPoint::affine(e3, 0, 0)}},
        {e4, {RationalPoint::affine(e4, 0, 2), RationalPoint::affine(e4, 1, 1)}},
    };
}

}  // namespace

TEST_CASE("model invariants")
{
    auto E = WeierstrassModel::from_ainvs({0, -1, 1, 0, 0});
    CHECK(E->disc() == Rational(-11));
    check_invariant_identities(*E);

    auto F = WeierstrassModel::from_ainvs({0, 1, 1, 0, 0});
    CHECK(F->disc() == Rational(-43));
    CHECK(F->c4() == Rational(16));

    auto G = WeierstrassModel::from_ainvs({0, 0, 0, -2401, 1});
    CHECK(factored_str(G->j()) == "2^8*3^3*7^12/(1069*51791533)");
    check_invariant_identities(*G);

    try {
        WeierstrassModel::from_ainvs({0, 0, 0, 0, 0});
        FAIL("singular model accepted");
    } catch (const SingularCurve& e) {
        CHECK(std::string(e.what()).find("disc") != std::string::npos);
    }
}

TEST_CASE("c4^3 - c6^2 = 1728 disc on random models")
{
    std::mt19937_64 rng(11);
    int built = 0;
    for (int i = 0; i < 500; ++i) {
        AInvariants a;
        for (auto& v : a) v = Rational(oracle::random_rational(rng, 40));
        if (oracle::invariants({a[0].raw(), a[1].raw(), a[2].raw(), a[3].raw(), a[4].raw()}).disc == 0) continue;
        check_invariant_identities(*WeierstrassModel::from_ainvs(a));
        ++built;
    }
    CHECK(built > 450);
}

TEST_CASE("group law fixed values")
{
    auto E = WeierstrassModel::from_ainvs({0, 0, 0, -2401, 1});
    auto R = RationalPoint::affine(E, -1, 49);
    auto O = RationalPoint::infinity(E);
    CHECK(add(R, O) == R);
    CHECK(add(R, negate(R)).is_infinity());
    auto R2 = dbl(R);
    CHECK(factored_str(R2.x()) == "3^2*139*1153/7^4");
    CHECK(factored_str(R2.y()) == "5*345311039/7^6");

    auto P3 = scalar_mul(3, RationalPoint::affine(E, 0, 1));
    CHECK(P3.x().den() == Integer(7) * 7 * 7 * 7 * 7 * 7 * 7 * 7 * 7 * 7 * 7 * 7 * 7 * 7 * 7 * 7);
    CHECK(vp(P3.x().den(), Prime(7ul)) == Valuation(16));
    CHECK(vp(P3.y().den(), Prime(7ul)) == Valuation(24));
    CHECK(factored_str(P3.x()) == "-2^3*79*199*367*2399/7^16");

    auto F = WeierstrassModel::from_ainvs({0, 1, 1, 0, 0});
    auto G = RationalPoint::affine(F, 0, 0);
    CHECK(scalar_mul(0, G).is_infinity());
    auto G19 = scalar_mul(19, G);
    CHECK(factored_str(G19.x()) == "-2^3*3^2*5*11*59*61*107/(13^6*37^2)");
    CHECK(factored_str(G19.y()) == "3^4*11^2*17*59^2*173*211/(13^9*37^3)");

    CHECK_THROWS_AS(add(R, G), ModelMismatch);
    CHECK_THROWS_AS(RationalPoint::affine(E, 1, 1), std::invalid_argument);
}

TEST_CASE("group law matches the reference chord-tangent law")
{
    for (const auto& s : samples()) {
        auto a = raw(*s.model);
        for (const auto& g : s.gens) {
            for (long k = -6; k <= 6; ++k) {
                auto P = scalar_mul(k, g);
                auto ref = oracle::multiple(a, k >= 0 ? k : -k, raw(g));
                if (k < 0 && ref) ref = raw(negate(RationalPoint::affine(s.model, Rational(ref->first), Rational(ref->second))));
                REQUIRE(raw(P) == ref);
            }
        }
    }
}

TEST_CASE("group axioms on 100 random triples")
{
    std::mt19937_64 rng(5);
    auto all = samples();
    int triples = 0;
    while (triples < 100) {
        const auto& s = all[rng() % all.size()];
        auto pick = [&] {
            RationalPoint acc = RationalPoint::infinity(s.model);
            for (const auto& g : s.gens) acc = add(acc, scalar_mul(static_cast<long>(rng() % 9) - 4, g));
            return acc;
        };
        auto P = pick(), Q = pick(), R = pick();
        REQUIRE(add(add(P, Q), R) == add(P, add(Q, R)));
        REQUIRE(add(P, Q) == add(Q, P));
        REQUIRE(add(P, negate(P)).is_infinity());
        for (const auto& X : {P, Q, R}) {
            if (!X.is_infinity()) REQUIRE(s.model->contains(X.x(), X.y()));
        }
        ++triples;
    }
    CHECK(triples == 100);
}

TEST_CASE("scalar multiplication is additive in the multiplier")
{
    std::mt19937_64 rng(17);
    auto all = samples();
    for (int i = 0; i < 60; ++i) {
        const auto& s = all[i % all.size()];
        const auto& g = s.gens[rng() % s.gens.size()];
        long m = static_cast<long>(rng() % 41) - 20, k = static_cast<long>(rng() % 41) - 20;
        REQUIRE(scalar_mul(m + k, g) == add(scalar_mul(m, g), scalar_mul(k, g)));
    }
}

TEST_CASE("points in the kernel of reduction have vp(x) = -2m, vp(y) = -3m")
{
    const unsigned long primes[] = {3, 5, 7, 11, 13};
    for (const auto& s : samples()) {
        if (!s.model->is_integral()) continue;
        for (const auto& g : s.gens) {
            for (long k = 1; k <= 25; ++k) {
                auto P = scalar_mul(k, g);
                if (P.is_infinity()) continue;
                for (unsigned long p : primes) {
                    long vx = oracle::valuation(P.x().raw(), p);
                    if (vx >= 0) continue;
                    long vy = oracle::valuation(P.y().raw(), p);
                    REQUIRE(vx % 2 == 0);
                    REQUIRE(vy == 3 * vx / 2);
                }
            }
        }
    }
}

TEST_CASE("isomorphisms")
{
    auto E = WeierstrassModel::from_ainvs({1, 0, 0, -3, 4});
    CHECK(*E->transform(IsomorphismData::identity()) == *E);
    CHECK_THROWS(E->transform(IsomorphismData{Rational(0), 0, 0, 0}));

    std::mt19937_64 rng(3);
    auto g = RationalPoint::affine(E, 0, 2), h = RationalPoint::affine(E, 1, 1);
    for (int i = 0; i < 100; ++i) {
        IsomorphismData iso{Rational(oracle::random_rational(rng, 9)), Rational(oracle::random_rational(rng, 9)),
                            Rational(oracle::random_rational(rng, 9)), Rational(oracle::random_rational(rng, 9))};
        auto F = E->transform(iso);
        REQUIRE(F->j() == E->j());
        check_invariant_identities(*F);
        REQUIRE(*F->transform(iso.inverse()) == *E);
        auto P = add(scalar_mul(static_cast<long>(rng() % 7) - 3, g), scalar_mul(static_cast<long>(rng() % 7) - 3, h));
        auto Q = transport(P, iso, F);
        if (!Q.is_infinity()) REQUIRE(F->contains(Q.x(), Q.y()));
        REQUIRE(transport(Q, iso.inverse(), E) == P);
    }
}

TEST_CASE("rational torsion")
{
    auto E = WeierstrassModel::from_ainvs({0, -1, 1, 0, 0});
    auto T = torsion_subgroup(E);
    CHECK(T.structure() == "Z/5");
    CHECK(T.order() == 5);
    REQUIRE(T.generators.size() == 1);
    CHECK(torsion_order(T.generators[0]) == 5);
    bool has_origin = false;
    for (const auto& P : T.points) has_origin |= !P.is_infinity() && P.x() == Rational(0) && P.y() == Rational(0);
    CHECK(has_origin);

    CHECK(torsion_subgroup(WeierstrassModel::from_ainvs({0, 1, 1, 0, 0})).structure() == "trivial");
    CHECK(torsion_subgroup(WeierstrassModel::from_ainvs({0, 0, 0, -2401, 1})).structure() == "trivial");
    CHECK(torsion_subgroup(WeierstrassModel::from_ainvs({0, 0, 0, -1, 0})).structure() == "Z/2 x Z/2");
    CHECK(torsion_subgroup(WeierstrassModel::from_ainvs({0, 0, 0, 0, 1})).structure() == "Z/6");
    CHECK(torsion_subgroup(WeierstrassModel::from_ainvs({0, 0, 0, 0, -432})).structure() == "Z/3");

    for (const auto& a : std::vector<std::vector<long>>{{0, -1, 1, 0, 0}, {0, 0, 0, -1, 0}, {0, 0, 0, 0, 1}}) {
        auto M = WeierstrassModel::from_ainvs({a[0], a[1], a[2], a[3], a[4]});
        for (const auto& P : torsion_subgroup(M).points) {
            int ord = torsion_order(P);
            REQUIRE(ord >= 1);
            REQUIRE(ord <= 12);
            REQUIRE(scalar_mul(ord, P).is_infinity());
        }
    }
}

TEST_CASE("torsion on a model with rational coefficients")
{
    auto E = WeierstrassModel::from_ainvs({0, -1, 1, 0, 0});
    auto F = E->transform(IsomorphismData{Rational(6), Rational(Integer(1), Integer(2)), 0, 0});
    CHECK_FALSE(F->is_integral());
    CHECK(torsion_subgroup(F).structure() == "Z/5");
}

TEST_CASE("quadratic twist")
{
    auto E = WeierstrassModel::from_ainvs({0, -1, 1, 0, 0});
    auto T = E->quadratic_twist(Integer(5));
    CHECK(T->j() == E->j());
    CHECK(torsion_subgroup(T).has_point_of_order(5) == false);
}
