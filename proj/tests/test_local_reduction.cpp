#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ecur/local_reduction.hpp"
#include "oracles.hpp"
#include "tate_corpus.hpp"

using namespace ecur;
using namespace corpus;

namespace {

ModelPtr model(const std::array<long, 5>& a) { return WeierstrassModel::from_ainvs({a[0], a[1], a[2], a[3], a[4]}); }

/// Number of components of the special fibre for a Kodaira symbol.
int components(const Kodaira& k)
{
    using F = Kodaira::Family;
    switch (k.family) {
    case F::I: return k.n == 0 ? 1 : static_cast<int>(k.n);
    case F::I_star: return static_cast<int>(k.n) + 5;
    case F::II: return 1;
    case F::III: return 2;
    case F::IV: return 3;
    case F::IV_star: return 7;
    case F::III_star: return 8;
    case F::II_star: return 9;
    }
    return 0;
}

void check_reduction_invariants(const ReductionData& d)
{
    bool good = d.kind == ReductionKind::good;
    REQUIRE(good == (d.v_disc_min == Valuation(0)));
    REQUIRE(good == (d.kodaira == Kodaira{Kodaira::Family::I, 0}));
    bool mult = d.multiplicative();
    REQUIRE(mult == (d.v_c4 == Valuation(0) && d.v_disc_min > Valuation(0)));
    if (mult) {
        REQUIRE(d.kodaira.family == Kodaira::Family::I);
        REQUIRE(Valuation(static_cast<long>(d.kodaira.n)) == d.v_disc_min);
        REQUIRE(d.v_disc_min.value() == -d.v_j.value());
        REQUIRE(d.kodaira.n % d.tamagawa == 0);
        if (d.kind == ReductionKind::split_multiplicative) REQUIRE(d.tamagawa == d.kodaira.n);
        if (d.kind == ReductionKind::nonsplit_multiplicative) REQUIRE(d.tamagawa == (d.kodaira.n % 2 ? 1u : 2u));
    }
    if (d.kodaira == Kodaira{Kodaira::Family::I, 1}) REQUIRE(d.tamagawa == 1);
    REQUIRE((d.potential == PotentialReduction::multiplicative) == (d.v_j < Valuation(0)));
}

}  // namespace

TEST_CASE("Kodaira symbols")
{
    for (const char* s : {"I0", "I1", "I12", "I0*", "I3*", "II", "III", "IV", "IV*", "III*", "II*"}) {
        CHECK(Kodaira::parse(s).str() == s);
    }
    CHECK_THROWS(Kodaira::parse("V"));
}

TEST_CASE("corpus matches tabulated local data")
{
    CHECK(kCorpus.size() >= 10);
    for (const auto& c : kCorpus) {
        CAPTURE(c.label);
        auto E = model(c.ainvs);
        auto rows = bad_primes(E);
        REQUIRE(rows.size() == c.rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& got = rows[i];
            const auto& want = c.rows[i];
            CAPTURE(want.prime);
            CHECK(got.prime == Integer(want.prime));
            CHECK(got.kodaira.str() == want.kodaira);
            CHECK(got.tamagawa == want.tamagawa);
            CHECK(got.kind == want.kind);
            check_reduction_invariants(got);
            // Ogg: v(disc_min) = f + m - 1.
            if (want.conductor_exponent >= 0) {
                CHECK(got.v_disc_min.value() == want.conductor_exponent + components(got.kodaira) - 1);
            }
        }
    }
}

TEST_CASE("split multiplicative iff -c6 is a square for ell >= 5")
{
    for (const auto& c : kCorpus) {
        auto E = model(c.ainvs);
        for (const auto& d : bad_primes(E)) {
            if (!d.multiplicative() || d.prime < 5 || !d.prime.fits_slong_p()) continue;
            long ell = d.prime.get_si();
            mpq_class c6 = -E->c6().raw();
            int chi = oracle::legendre(oracle::mod(c6.get_num(), ell) * oracle::mod(c6.get_den(), ell) % ell, ell);
            CAPTURE(c.label);
            CHECK((chi == 1) == (d.kind == ReductionKind::split_multiplicative));
        }
    }
}

TEST_CASE("tate_algorithm fixed cases")
{
    auto E = model({0, -1, 1, 0, 0});
    auto d = tate_algorithm(E, Prime(11ul));
    CHECK(d.kodaira.str() == "I1");
    CHECK(d.tamagawa == 1);
    CHECK(d.multiplicative());
    CHECK(d.v_j == Valuation(-1));

    auto F = model({0, 1, 1, 0, 0});
    auto e = tate_algorithm(F, Prime(43ul));
    CHECK(e.kodaira.str() == "I1");
    CHECK(e.v_j == Valuation(-1));

    auto g = tate_algorithm(F, Prime(5ul));
    CHECK(g.kind == ReductionKind::good);
    CHECK(g.kodaira.str() == "I0");
    CHECK(g.tamagawa == 1);

    auto h = tate_algorithm(model({0, 0, 0, -25, 0}), Prime(5ul));
    CHECK(h.kodaira.str() == "I0*");
    CHECK(h.tamagawa == 4);
    check_reduction_invariants(h);

    auto k = tate_algorithm(model({0, 0, 0, 4, 0}), Prime(2ul));
    CHECK(k.kodaira.str() == "I3*");
    check_reduction_invariants(k);

    // y^2 = x^3 - 432*64 is not minimal at 2; its minimal model is y^2 + y = x^3 - 7.
    auto m = tate_algorithm(model({0, 0, 0, 0, -432 * 64}), Prime(3ul));
    CHECK(m.kodaira.str() == "IV*");
    CHECK(m.tamagawa == 3);
    auto [M, iso] = global_minimal_model(model({0, 0, 0, 0, -432 * 64}));
    CHECK(M->str() == "[0,0,1,0,-7]");
}

TEST_CASE("minimal models")
{
    auto E = model({0, -1, 1, 0, 0});
    auto [same, id] = minimal_model_at(E, Prime(11ul));
    CHECK(*same == *E);
    CHECK(id.is_identity());

    auto scaled = E->transform(IsomorphismData{Rational(Integer(1), Integer(11)), 0, 0, 0});
    CHECK(scaled->disc() == E->disc() * Rational(Integer(11)).pow(12));
    auto [back, iso] = minimal_model_at(scaled, Prime(11ul));
    CHECK(*back == *E);
    CHECK(*scaled->transform(iso) == *back);

    auto G = model({0, 0, 0, -2401, 1});
    auto [g7, iso7] = minimal_model_at(G, Prime(7ul));
    CHECK(*g7 == *G);
    CHECK(iso7.is_identity());

    for (const auto& c : kCorpus) {
        auto M = model(c.ainvs);
        for (const auto& d : bad_primes(M)) {
            Prime ell(d.prime);
            auto [once, i1] = minimal_model_at(M, ell);
            auto [twice, i2] = minimal_model_at(once, ell);
            REQUIRE(*twice == *once);
            REQUIRE(i2.is_identity());
        }
    }
}

TEST_CASE("bad primes")
{
    auto a = bad_primes(model({0, -1, 1, 0, 0}));
    REQUIRE(a.size() == 1);
    CHECK(a[0].prime == 11);

    auto b = bad_primes(model({0, 0, 0, -2401, 1}));
    REQUIRE(b.size() == 3);
    CHECK(b[0].prime == 2);
    CHECK(b[1].prime == 1069);
    CHECK(b[2].prime == 51791533);

    CHECK(bad_primes(model({0, 1, 1, 0, 0})).size() == 1);

    FactorizationBudget tiny{10, 1};
    try {
        bad_primes(model({0, 0, 0, -2401, 1}), tiny);
        FAIL("incomplete factorization accepted");
    } catch (const IncompleteFactorization& e) {
        CHECK(e.cofactor() == Integer(1069) * 51791533);
    }
}

TEST_CASE("reduction invariants on scaled and translated models")
{
    for (const auto& c : kCorpus) {
        auto E = model(c.ainvs);
        auto F = E->transform(IsomorphismData{Rational(Integer(1), Integer(6)), Rational(3), Rational(-1), Rational(2)});
        auto expected = bad_primes(E);
        for (const auto& d : expected) {
            auto got = tate_algorithm(F, Prime(d.prime));
            CAPTURE(c.label);
            CHECK(got.kodaira == d.kodaira);
            CHECK(got.tamagawa == d.tamagawa);
            CHECK(got.kind == d.kind);
            check_reduction_invariants(got);
        }
        for (unsigned long ell : {2ul, 3ul, 5ul, 7ul}) {
            check_reduction_invariants(tate_algorithm(F, Prime(ell)));
        }
    }
}
