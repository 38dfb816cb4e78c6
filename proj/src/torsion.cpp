// Rational torsion via Nagell-Lutz on the integral short model
// Y^2 = X^3 - 27 c4 X - 54 c6, X = 36x + 3 b2, Y = 108 (2y + a1 x + a3).

#include "ecur/curve.hpp"

#include <algorithm>
#include <stdexcept>

namespace ecur {
namespace {

// f(x) = x^3 + A x + C
Integer cubic_at(const Integer& A, const Integer& C, const Integer& x) { return x * x * x + A * x + C; }

// Integer root of the monotone function on [lo, hi], if any.
std::optional<Integer> monotone_root(const Integer& A, const Integer& C, Integer lo, Integer hi, bool increasing)
{
    if (lo > hi) return std::nullopt;
    while (lo < hi) {
        Integer mid;
        mpz_fdiv_q_2exp(mid.get_mpz_t(), Integer(lo + hi).get_mpz_t(), 1);
        Integer v = cubic_at(A, C, mid);
        bool below = increasing ? v < 0 : v > 0;
        if (below) lo = mid + 1;
        else hi = mid;
    }
    if (cubic_at(A, C, lo) == 0) return lo;
    return std::nullopt;
}

std::vector<Integer> integer_roots(const Integer& A, const Integer& C)
{
    Integer bound = 1 + std::max(Integer(abs(A)), Integer(abs(C)));
    std::vector<Integer> roots;
    auto push = [&](std::optional<Integer> r) {
        if (r && std::find(roots.begin(), roots.end(), *r) == roots.end()) roots.push_back(*r);
    };
    if (A >= 0) {
        push(monotone_root(A, C, -bound, bound, true));
    } else {
        Integer third = -A / 3;  // floor, since -A > 0
        Integer s = sqrt(third);
        push(monotone_root(A, C, -bound, -s - 1, true));
        push(monotone_root(A, C, -s, s, false));
        push(monotone_root(A, C, s + 1, bound, true));
    }
    return roots;
}

// All y >= 1 with y^2 | n, from a complete factorization of n.
std::vector<Integer> square_divisor_roots(const Factorization& f)
{
    std::vector<Integer> out{Integer(1)};
    for (const auto& [p, e] : f.factors) {
        std::size_t n = out.size();
        Integer pk = 1;
        for (unsigned long k = 1; k <= e / 2; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] * pk);
        }
    }
    return out;
}

}  // namespace

std::string TorsionSubgroup::structure() const
{
    if (invariants.empty()) return "trivial";
    std::string s;
    for (std::size_t i = 0; i < invariants.size(); ++i) {
        if (i) s += " x ";
        s += "Z/" + std::to_string(invariants[i]);
    }
    return s;
}

bool TorsionSubgroup::has_point_of_order(int m) const
{
    for (const auto& p : points) {
        if (torsion_order(p, 12) == m) return true;
    }
    return false;
}

TorsionSubgroup torsion_subgroup(const ModelPtr& model, const FactorizationBudget& budget)
{
    const auto& m = *model;
    auto [integral, iso] = m.integral_model();
    Integer A = (-27 * integral->c4()).num();
    Integer B = (-54 * integral->c6()).num();
    Integer N = 4 * A * A * A + 27 * B * B;
    Factorization f = factorize(N, budget);
    if (!f.complete) {
        throw std::runtime_error("torsion search needs a complete factorization of " + N.get_str() +
                                 "; unfactored cofactor " + f.cofactor.get_str());
    }

    std::vector<Integer> ys{Integer(0)};
    for (auto& y : square_divisor_roots(f)) {
        ys.push_back(y);
        ys.push_back(-y);
    }

    const auto& im = *integral;
    TorsionSubgroup out;
    out.points.push_back(RationalPoint::infinity(model));
    IsomorphismData back = iso.inverse();
    for (const auto& Y : ys) {
        for (const auto& X : integer_roots(A, B - Y * Y)) {
            Rational x = (Rational(X) - 3 * im.b2()) / 36;
            Rational y = (Rational(Y) / 108 - im.a1() * x - im.a3()) / 2;
            if (!im.contains(x, y)) continue;
            RationalPoint on_integral = RationalPoint::affine(integral, x, y);
            if (torsion_order(on_integral, 12) == 0) continue;
            RationalPoint p = transport(on_integral, back, model);
            if (std::find(out.points.begin(), out.points.end(), p) == out.points.end()) out.points.push_back(p);
        }
    }

    std::size_t n = out.points.size();
    if (n == 1) return out;
    const RationalPoint* best = nullptr;
    int best_order = 0;
    for (const auto& p : out.points) {
        int o = torsion_order(p, 12);
        if (o > best_order) { best_order = o; best = &p; }
    }
    out.generators.push_back(*best);
    if (static_cast<std::size_t>(best_order) == n) {
        out.invariants = {best_order};
    } else {
        if (n != 2 * static_cast<std::size_t>(best_order) || best_order % 2 != 0) {
            throw std::logic_error("unexpected torsion structure of order " + std::to_string(n));
        }
        out.invariants = {2, best_order};
        RationalPoint half = scalar_mul(best_order / 2, *best);
        for (const auto& p : out.points) {
            if (torsion_order(p, 12) == 2 && !(p == half)) { out.generators.push_back(p); break; }
        }
    }
    return out;
}

}  // namespace ecur
