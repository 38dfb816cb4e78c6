#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ecur/criteria.hpp"
#include "ecur/finite_field.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <set>

using namespace ecur;

namespace {

ModelPtr model(const std::array<long, 5>& a) { return WeierstrassModel::from_ainvs({a[0], a[1], a[2], a[3], a[4]}); }

struct Ex52 {
    ModelPtr E = model({0, 1, 1, 0, 0});
    RationalPoint G = RationalPoint::affine(E, 0, 0);
    Prime p{13ul};
};

struct Ex53 {
    ModelPtr E = model({0, 0, 0, -2401, 1});
    RationalPoint P = RationalPoint::affine(E, 0, 1);
    RationalPoint Q = RationalPoint::affine(E, -49, 1);
    RationalPoint R = RationalPoint::affine(E, -1, 49);
    Prime p{7ul};
};

/// Exhaustive check that the reduction of P at ell is outside pE(F_ell).
bool outside_p_multiples(const RationalPoint& P, std::uint64_t ell, std::uint64_t p)
{
    auto C = ff::reduce_curve(*P.model(), Prime(static_cast<unsigned long>(ell)));
    std::set<std::uint64_t> image;
    image.insert(C.point_key(ff::Point{}));
    for (std::uint64_t i = 0; i < C.field().order(); ++i) {
        for (const auto& Q : C.lift_x(C.field().from_index(i))) image.insert(C.point_key(C.mul(p, Q)));
    }
    return image.count(C.point_key(ff::reduce_point(P, C))) == 0;
}

std::vector<WitnessCertificate> proved(std::vector<WitnessCertificate> certs, const Prime& p)
{
    for (auto& c : certs) c.not_in_pE = not_divisible(c.point, p);
    return certs;
}

}  // namespace

TEST_CASE("check_mult")
{
    Ex52 a;
    auto m = check_mult(*a.E, a.p);
    CHECK(m.state == MultState::holds);
    REQUIRE(m.poles.size() == 1);
    CHECK(m.poles[0].ell == 43);
    CHECK(m.poles[0].v_j == -1);

    Ex53 b;
    auto n = check_mult(*b.E, b.p);
    CHECK(n.state == MultState::holds);
    REQUIRE(n.poles.size() == 2);
    CHECK(n.poles[0].ell == 1069);
    CHECK(n.poles[1].ell == 51791533);

    auto f = check_mult(*model({0, -1, 1, -10, -20}), Prime(5ul));  // v_11(j) = -5
    CHECK(f.state == MultState::fails);
    REQUIRE(f.ell.has_value());
    CHECK(*f.ell == 11);

    auto u = check_mult(*b.E, b.p, FactorizationBudget{10, 1});
    CHECK(u.state == MultState::unknown);
    CHECK_FALSE(u.reason.empty());
}

TEST_CASE("check_add")
{
    CHECK(check_add(model({0, 0, 0, -2401, 1}), Prime(7ul)).state == AddState::vacuous);
    auto f = check_add(model({0, 0, 1, 0, 1}), Prime(3ul));  // additive, potentially good at 5
    CHECK(f.state == AddState::fails);
    REQUIRE(f.ell.has_value());
    CHECK(*f.ell == 5);
    CHECK(check_add(model({0, 1, 1, 0, 0}), Prime(3ul)).state == AddState::holds);
    CHECK(check_add(model({0, -1, 1, 0, 0}), Prime(3ul)).state == AddState::holds);
}

TEST_CASE("check_inj")
{
    CHECK(check_inj(*model({0, 1, 1, 0, 0}), Prime(13ul)).state == InjState::proved_large_p);
    auto E = model({0, -1, 1, 0, 0});
    CHECK(check_inj(*E, Prime(5ul)).state == InjState::proved_twist_torsion);
    auto T = E->quadratic_twist(Integer(5));
    CHECK(check_inj(*T, Prime(5ul)).state == InjState::unknown);
}

TEST_CASE("check_irreducible")
{
    Ex52 a;
    auto c = check_irreducible(*a.E, a.p);
    CHECK(c.state == IrreducibleState::certified);
    REQUIRE(c.ell.has_value());
    CHECK(*c.ell == 3);
    CHECK(c.a_ell == -2);
    CHECK(oracle::legendre(4 - 12, 13) == -1);

    auto E = model({0, -1, 1, 0, 0});
    CHECK(check_irreducible(*E, Prime(5ul)).state == IrreducibleState::unknown);
    CHECK(check_irreducible(*E, Prime(5ul), 200, true).state == IrreducibleState::assumed);
}

TEST_CASE("irreducibility is never certified with rational p-torsion")
{
    const std::vector<std::array<long, 5>> corpus = {
        {0, -1, 1, -10, -20}, {0, -1, 1, 0, 0}, {1, 0, 1, 4, -6}, {1, 1, 1, -10, -10}, {0, 0, 1, 0, 0},
        {0, 0, 0, -1, 0},     {0, 0, 1, -1, 0}, {0, 1, 1, -23, -50}, {0, 1, 1, 0, 0},  {0, 0, 0, 0, 1},
        {0, 0, 0, -2401, 1},  {0, 1, 1, -2, 0},
    };
    int certified = 0;
    for (const auto& a : corpus) {
        auto E = model(a);
        auto tors = torsion_subgroup(E);
        for (unsigned long p : {3ul, 5ul, 7ul}) {
            auto c = check_irreducible(*E, Prime(p));
            if (tors.has_point_of_order(static_cast<int>(p))) REQUIRE(c.state != IrreducibleState::certified);
            certified += c.state == IrreducibleState::certified;
        }
    }
    CHECK(certified > 10);
}

TEST_CASE("theorem_b_check")
{
    Ex52 a;
    auto cond = check_conditions(a.E, a.p);
    auto P19 = scalar_mul(19, a.G);
    for (unsigned n : {1u, 2u}) {
        auto r = theorem_b_check(P19, a.p, n, cond);
        CHECK(r.accepted);
        CHECK(r.vpX == Valuation(-6));
        CHECK(r.vpXY == Valuation(3));
        CHECK(r.formal_route == std::optional<bool>(true));
    }
    auto r3 = theorem_b_check(P19, a.p, 3, cond);
    CHECK_FALSE(r3.accepted);
    CHECK(r3.formal_route == std::optional<bool>(false));

    auto g = theorem_b_check(a.G, a.p, 1, cond);
    CHECK_FALSE(g.accepted);
    CHECK(g.vpX >= Valuation(0));
    CHECK_FALSE(g.formal_route.has_value());

    Ex53 b;
    auto q = theorem_b_check(scalar_mul(3, b.Q), b.p, 1, check_conditions(b.E, b.p));
    CHECK(q.accepted);
    CHECK(q.vpX == Valuation(-4));
    CHECK(q.vpXY == Valuation(2));

    // (Mult) fails for 11a1 at p = 5: raw valuations only.
    auto E = model({0, -1, 1, -10, -20});
    auto bad = check_conditions(E, Prime(5ul));
    REQUIRE(bad.mult.state == MultState::fails);
    auto Pt = RationalPoint::affine(E, 5, 5);
    for (long k = 1; k <= 5; ++k) {
        auto r = theorem_b_check(scalar_mul(k, Pt), Prime(5ul), 1, bad);
        CHECK_FALSE(r.accepted);
    }
}

TEST_CASE("witness_search")
{
    Ex52 a;
    auto cond = check_conditions(a.E, a.p);
    WitnessSearchOptions opt;
    opt.k_max = 25;
    auto hits = witness_search({a.G}, a.p, 1, cond, opt);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].multiplier == 19);
    CHECK(hits[0].formal_oracle_agrees);
    CHECK(hits[0].not_in_pE.state == DivisibilityState::unknown);

    Ex53 b;
    auto c3 = check_conditions(b.E, b.p);
    opt.k_max = 5;
    opt.base_ids = {"P", "Q", "R"};
    auto w = witness_search({b.P, b.Q, b.R}, b.p, 1, c3, opt);
    REQUIRE(w.size() == 3);
    CHECK(w[0].base_id == "P");
    CHECK(w[0].multiplier == 3);
    CHECK(w[1].base_id == "Q");
    CHECK(w[1].multiplier == 3);
    CHECK(w[2].base_id == "R");
    CHECK(w[2].multiplier == 2);
    for (const auto& c : w) {
        CHECK(c.vpX < Valuation(0));
        CHECK(c.vpXY >= Valuation(2));
        CHECK(c.formal_oracle_agrees);
    }

    opt.first_hit_only = false;
    auto all = witness_search({b.P, b.Q, b.R}, b.p, 1, c3, opt);
    CHECK(all.size() > 3);
    for (std::size_t i = 1; i < all.size(); ++i) {
        bool ordered = all[i - 1].base_index < all[i].base_index ||
                       (all[i - 1].base_index == all[i].base_index && all[i - 1].multiplier < all[i].multiplier);
        CHECK(ordered);
    }

    opt.k_max = 0;
    CHECK(witness_search({b.P}, b.p, 1, c3, opt).empty());
}

TEST_CASE("not_divisible")
{
    Ex52 a;
    NotDivisibleOptions with_basis;
    with_basis.basis = std::vector<RationalPoint>{a.G};
    auto P19 = scalar_mul(19, a.G);
    auto s = not_divisible(P19, a.p, with_basis);
    CHECK(s.state == DivisibilityState::not_divisible);

    NotDivisibleOptions basis_only = with_basis;
    basis_only.aux_bound = 2;
    auto t = not_divisible(P19, a.p, basis_only);
    CHECK(t.state == DivisibilityState::not_divisible);
    CHECK(t.method == "basis");
    REQUIRE(t.coefficients.size() == 1);
    CHECK(t.coefficients[0] == 19);

    auto pG = not_divisible(scalar_mul(13, a.G), a.p, basis_only);
    CHECK(pG.state == DivisibilityState::divisible);
    CHECK(not_divisible(scalar_mul(13, a.G), a.p).state == DivisibilityState::unknown);

    Ex53 b;
    auto P3 = scalar_mul(3, b.P);
    auto u = not_divisible(P3, b.p);
    CHECK(u.state == DivisibilityState::not_divisible);
    CHECK(u.method == "aux_prime");
    REQUIRE(u.ell.has_value());
    CHECK(*u.ell <= 1000);
    CHECK(outside_p_multiples(P3, *u.ell, 7));

    NotDivisibleOptions none;
    none.aux_bound = 2;
    CHECK(not_divisible(P19, a.p, none).state == DivisibilityState::unknown);
}

TEST_CASE("aux-prime decisions are confirmed exhaustively")
{
    Ex53 b;
    for (const auto& B : {b.P, b.Q, b.R}) {
        for (long k = 1; k <= 6; ++k) {
            auto P = scalar_mul(k, B);
            auto s = not_divisible(P, b.p);
            if (s.state == DivisibilityState::not_divisible && s.method == "aux_prime") {
                REQUIRE(outside_p_multiples(P, *s.ell, 7));
            }
        }
    }
}

TEST_CASE("independence_mod_p")
{
    Ex53 b;
    std::vector<RationalPoint> pts{scalar_mul(3, b.P), scalar_mul(3, b.Q), scalar_mul(2, b.R)};
    auto r = independence_mod_p(pts, b.p);
    CHECK(r.rank == 3);
    auto s = independence_mod_p_serial(pts, b.p);
    CHECK(s.rank == r.rank);
    CHECK(s.ells_used == r.ells_used);

    std::vector<RationalPoint> perm = pts;
    std::sort(perm.begin(), perm.end(), [](const auto& x, const auto& y) { return x.x() < y.x(); });
    do {
        CHECK(independence_mod_p(perm, b.p).rank == 3);
    } while (std::next_permutation(perm.begin(), perm.end(), [](const auto& x, const auto& y) { return x.x() < y.x(); }));

    CHECK(independence_mod_p({b.P, scalar_mul(2, b.P)}, b.p).rank == 1);
    CHECK(independence_mod_p({b.P, b.Q, add(b.P, b.Q)}, b.p).rank == 2);
    CHECK(independence_mod_p({scalar_mul(7, b.P)}, b.p).rank == 0);
    CHECK(independence_mod_p({b.P, b.Q, b.R, add(b.P, b.R)}, b.p).rank <= 3);

    Ex52 a;
    CHECK(independence_mod_p({scalar_mul(19, a.G)}, a.p).rank == 1);
}

TEST_CASE("rank_mod_p")
{
    CHECK(rank_mod_p({{1, 2}, {2, 4}}, 7) == 1);
    CHECK(rank_mod_p({{1, 2}, {2, 5}}, 7) == 2);
    CHECK(rank_mod_p({{7, 14}}, 7) == 0);
    CHECK(rank_mod_p({}, 7) == 0);
}

TEST_CASE("assemble_bounds")
{
    Ex52 a;
    auto cond = check_conditions(a.E, a.p);
    for (unsigned n : {1u, 2u}) {
        auto certs = proved(witness_search({a.G}, a.p, n, cond), a.p);
        auto b = assemble_bounds(cond, certs, 1, a.p, n);
        CHECK(b.r_ur_lower == n);
        CHECK(b.class_valuation_lower == 2 * n);
        CHECK(b.multiplicity_lower == (n == 1 ? std::optional<unsigned>(1) : std::nullopt));
        CHECK(b.blockers.empty());
        CHECK(b.conditional_on.empty());
    }

    Ex53 e;
    auto c3 = check_conditions(e.E, e.p);
    WitnessSearchOptions opt;
    opt.k_max = 5;
    auto certs = proved(witness_search({e.P, e.Q, e.R}, e.p, 1, c3, opt), e.p);
    auto b3 = assemble_bounds(c3, certs, 3, e.p, 1);
    CHECK(b3.r_ur_lower == 3);
    CHECK(b3.class_valuation_lower == 6);
    CHECK(b3.multiplicity_lower == std::optional<unsigned>(3));

    // Monotone in the certificate list.
    unsigned last = 0;
    for (std::size_t k = 0; k <= certs.size(); ++k) {
        std::vector<WitnessCertificate> prefix(certs.begin(), certs.begin() + static_cast<long>(k));
        std::vector<RationalPoint> pts;
        for (const auto* c : eligible_witnesses(prefix)) pts.push_back(c->point);
        unsigned rank = pts.empty() ? 0 : independence_mod_p(pts, e.p).rank;
        auto b = assemble_bounds(c3, prefix, rank, e.p, 1);
        CHECK(b.r_ur_lower >= last);
        CHECK(b.multiplicity_lower.value_or(0) <= b.r_ur_lower);
        last = b.r_ur_lower;
    }

    auto empty = assemble_bounds(c3, {}, 0, e.p, 1);
    CHECK(empty.r_ur_lower == 0);
    CHECK(empty.class_valuation_lower == 0);
    CHECK(empty.multiplicity_lower.value_or(0) == 0);
}

TEST_CASE("gating never emits an unconditional bound from an unknown hypothesis")
{
    Ex53 e;
    auto base = check_conditions(e.E, e.p);
    WitnessSearchOptions opt;
    opt.k_max = 5;
    auto certs = proved(witness_search({e.P, e.Q, e.R}, e.p, 1, base, opt), e.p);

    auto inj_unknown = base;
    inj_unknown.inj.state = InjState::unknown;
    auto b1 = assemble_bounds(inj_unknown, certs, 3, e.p, 1);
    CHECK(b1.class_valuation_lower == 0);
    CHECK_FALSE(b1.blockers.empty());

    auto irr_unknown = base;
    irr_unknown.irreducible.state = IrreducibleState::unknown;
    auto b2 = assemble_bounds(irr_unknown, certs, 3, e.p, 1);
    CHECK(b2.class_valuation_lower == 0);
    CHECK_FALSE(b2.blockers.empty());

    auto irr_assumed = base;
    irr_assumed.irreducible.state = IrreducibleState::assumed;
    auto b3 = assemble_bounds(irr_assumed, certs, 3, e.p, 1);
    CHECK(b3.class_valuation_lower == 6);
    CHECK_FALSE(b3.conditional_on.empty());

    auto unproved = certs;
    for (auto& c : unproved) c.not_in_pE = {};
    auto b4 = assemble_bounds(base, unproved, 0, e.p, 1);
    CHECK(b4.class_valuation_lower == 0);
    bool named = std::any_of(b4.blockers.begin(), b4.blockers.end(),
                             [](const std::string& s) { return s.find("not_divisible unknown") != std::string::npos; });
    CHECK(named);
}

TEST_CASE("torsion heuristic")
{
    auto E = model({0, -1, 1, 0, 0});
    auto T = RationalPoint::affine(E, 0, 0);
    auto h = torsion_unramified_heuristic(T, Prime(5ul), 6);
    CHECK(h.positive);
    REQUIRE(h.degree.has_value());
    CHECK(*h.degree == 5);
    REQUIRE(h.rows.size() == 5);
    CHECK(h.rows[4].group_order == 3025);
    CHECK(h.rows[4].p_primary == "Z/25");
    CHECK(h.rows[4].in_p_multiple);
    for (int d = 0; d < 4; ++d) CHECK_FALSE(h.rows[static_cast<std::size_t>(d)].in_p_multiple);
    CHECK_FALSE(h.note.empty());

    auto neg = torsion_unramified_heuristic(T, Prime(5ul), 4);
    CHECK_FALSE(neg.positive);
    CHECK(neg.rows.size() == 4);

    Ex52 a;
    CHECK_THROWS(torsion_unramified_heuristic(a.G, a.p, 6));
    CHECK_THROWS(torsion_unramified_heuristic(T, Prime(11ul), 6));
}
