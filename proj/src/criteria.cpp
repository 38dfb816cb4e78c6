#include "ecur/criteria.hpp"

#include "ecur/finite_field.hpp"
#include "ecur/formal_group.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>
#include <unordered_map>

namespace ecur {
namespace {

using u64 = std::uint64_t;

u64 seed_for(u64 seed, u64 ell) { return seed ^ (ell * 0x9E3779B97F4A7C15ull); }

bool good_at(const WeierstrassModel& model, const Prime& ell)
{
    return model.is_integral_at(ell) && vp(model.disc(), ell) == Valuation(0);
}

void require_odd(const Prime& p)
{
    if (p.value() == 2) throw std::invalid_argument("p must be an odd prime");
}

u64 small_prime(const Prime& p)
{
    if (!p.fits_ulong() || p.ul() >= (1ul << 32)) throw std::invalid_argument("p too large for reduction scans");
    return p.ul();
}

std::string point_label(const std::string& id, long k) { return k == 1 ? id : std::to_string(k) + "*" + id; }

}  // namespace

std::string to_string(MultState s)
{
    switch (s) {
    case MultState::holds: return "holds";
    case MultState::fails: return "fails";
    case MultState::unknown: return "unknown";
    }
    return "?";
}

std::string to_string(AddState s)
{
    switch (s) {
    case AddState::holds: return "holds";
    case AddState::fails: return "fails";
    case AddState::vacuous: return "vacuous";
    case AddState::unknown: return "unknown";
    }
    return "?";
}

std::string to_string(InjState s)
{
    switch (s) {
    case InjState::proved_large_p: return "proved_large_p";
    case InjState::proved_twist_torsion: return "proved_twist_torsion";
    case InjState::unknown: return "unknown";
    }
    return "?";
}

std::string to_string(IrreducibleState s)
{
    switch (s) {
    case IrreducibleState::certified: return "certified";
    case IrreducibleState::assumed: return "assumed";
    case IrreducibleState::unknown: return "unknown";
    }
    return "?";
}

std::string to_string(DivisibilityState s)
{
    switch (s) {
    case DivisibilityState::not_divisible: return "proved";
    case DivisibilityState::divisible: return "divisible";
    case DivisibilityState::unknown: return "unknown";
    }
    return "?";
}

MultCondition check_mult(const WeierstrassModel& model, const Prime& p, const FactorizationBudget& budget)
{
    MultCondition out;
    Factorization f = factorize(model.j().den(), budget);
    for (const auto& pp : f.factors) {
        if (pp.prime == p.value()) continue;
        long v = -static_cast<long>(pp.exponent);
        out.poles.push_back({pp.prime, v});
        if (!out.ell && Integer(v) % p.value() == 0) out.ell = pp.prime;
    }
    if (out.ell) {
        out.state = MultState::fails;
        out.reason = "p divides v_l(j) at l = " + out.ell->get_str();
    } else if (!f.complete) {
        out.state = MultState::unknown;
        out.reason = "denominator of j not completely factored; unfactored cofactor " + f.cofactor.get_str();
    } else {
        out.state = MultState::holds;
        out.reason = out.poles.empty() ? "j is integral away from p" : "p does not divide v_l(j) at any pole of j";
    }
    return out;
}

AddCondition check_add(const ModelPtr& model, const Prime& p, const FactorizationBudget& budget)
{
    require_odd(p);
    AddCondition out;
    if (p.value() != 3) {
        out.state = AddState::vacuous;
        out.reason = "only constrains p = 3";
        return out;
    }
    std::vector<ReductionData> bad;
    try {
        bad = bad_primes(model, budget);
    } catch (const IncompleteFactorization& e) {
        out.state = AddState::unknown;
        out.reason = e.what();
        return out;
    }
    for (const auto& d : bad) {
        if (d.prime == 3) continue;
        if (d.kind == ReductionKind::additive && d.potential == PotentialReduction::good) {
            out.state = AddState::fails;
            out.ell = d.prime;
            out.reason = "additive potentially good reduction at " + d.prime.get_str() + " (" + d.kodaira.str() + ")";
            return out;
        }
    }
    out.state = AddState::holds;
    out.reason = "no additive potentially good prime other than 3";
    return out;
}

InjCondition check_inj(const WeierstrassModel& model, const Prime& p, const FactorizationBudget& budget)
{
    require_odd(p);
    InjCondition out;
    if (p.value() >= 13) {
        out.state = InjState::proved_large_p;
        out.reason = "p >= 13";
        return out;
    }
    try {
        ModelPtr twist = model.quadratic_twist(p.value());
        TorsionSubgroup t = torsion_subgroup(twist, budget);
        if (t.has_point_of_order(static_cast<int>(p.ul()))) {
            out.state = InjState::unknown;
            out.reason = "quadratic twist by p has a rational point of order p";
        } else {
            out.state = InjState::proved_twist_torsion;
            out.reason = "quadratic twist by p has torsion " + t.structure();
        }
    } catch (const std::runtime_error& e) {
        out.state = InjState::unknown;
        out.reason = std::string("twist torsion not determined: ") + e.what();
    }
    return out;
}

IrreducibleCondition check_irreducible(const WeierstrassModel& model, const Prime& p, u64 ell_bound, bool assume)
{
    require_odd(p);
    IrreducibleCondition out;
    for (u64 ell : primes_up_to(ell_bound)) {
        Prime l(static_cast<unsigned long>(ell));
        if (l == p || !good_at(model, l)) continue;
        long a = ff::frobenius_trace(ff::reduce_curve(model, l));
        Integer disc = Integer(a) * a - 4 * Integer(static_cast<unsigned long>(ell));
        if (legendre(disc, p.value()) == -1) {
            out.state = IrreducibleState::certified;
            out.ell = ell;
            out.a_ell = a;
            std::string mid = a == 0 ? "" : (a > 0 ? " - " : " + ") + std::to_string(a > 0 ? a : -a) + "x";
            out.reason = "x^2" + mid + " + " + std::to_string(ell) + " is irreducible mod p";
            return out;
        }
    }
    out.state = assume ? IrreducibleState::assumed : IrreducibleState::unknown;
    out.reason = "no good prime l <= " + std::to_string(ell_bound) + " gives an irreducible Frobenius polynomial mod p" +
                 (assume ? "; irreducibility assumed by the caller" : "");
    return out;
}

ConditionsReport check_conditions(const ModelPtr& model, const Prime& p, u64 ell_bound, bool assume_irreducible,
                                  const FactorizationBudget& budget)
{
    ConditionsReport r;
    r.mult = check_mult(*model, p, budget);
    r.add = check_add(model, p, budget);
    r.inj = check_inj(*model, p, budget);
    r.irreducible = check_irreducible(*model, p, ell_bound, assume_irreducible);
    return r;
}

// ---- divisibility -----------------------------------------------------------

unsigned rank_mod_p(std::vector<std::vector<u64>> rows, u64 p)
{
    auto mulmod = [p](u64 a, u64 b) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p); };
    auto inv = [&](u64 a) {
        u64 r = 1, e = p - 2;
        while (e) {
            if (e & 1) r = mulmod(r, a);
            a = mulmod(a, a);
            e >>= 1;
        }
        return r;
    };
    std::size_t cols = 0;
    for (auto& r : rows) {
        for (auto& v : r) v %= p;
        cols = std::max(cols, r.size());
    }
    for (auto& r : rows) r.resize(cols, 0);
    unsigned rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t sel = rank;
        while (sel < rows.size() && rows[sel][c] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[sel], rows[rank]);
        u64 iv = inv(rows[rank][c]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == rank || rows[i][c] == 0) continue;
            u64 f = mulmod(rows[i][c], iv);
            for (std::size_t k = c; k < cols; ++k) rows[i][k] = (rows[i][k] + p - mulmod(f, rows[rank][k])) % p;
        }
        ++rank;
    }
    return rank;
}

std::optional<BasisRepresentation> express_in_basis(const RationalPoint& P, const std::vector<RationalPoint>& basis,
                                                    const TorsionSubgroup& torsion, long bound)
{
    const ModelPtr& model = P.model();
    for (const auto& g : basis) {
        if (!g.same_model(P)) throw ModelMismatch();
    }
    std::size_t r = basis.size();
    if (r == 0) {
        for (const auto& t : torsion.points) {
            if (t == P) return BasisRepresentation{{}, t};
        }
        return std::nullopt;
    }

    // Prune with reductions at a few good primes, then verify exactly.
    std::vector<ff::ReducedCurve> curves;
    for (u64 ell : primes_up_to(2000)) {
        if (ell < 101) continue;
        Prime l(static_cast<unsigned long>(ell));
        if (!good_at(*model, l)) continue;
        curves.push_back(ff::reduce_curve(*model, l));
        if (curves.size() == 3) break;
    }
    if (curves.empty()) throw std::runtime_error("no good prime available for basis pruning");
    const ff::ReducedCurve& E0 = curves[0];

    std::size_t width = static_cast<std::size_t>(2 * bound + 1);
    std::vector<std::vector<ff::Point>> mult(r);  // mult[i][c + bound] = c G_i on E0
    for (std::size_t i = 0; i < r; ++i) {
        ff::Point g = ff::reduce_point(basis[i], E0);
        mult[i].resize(width);
        ff::Point acc;
        mult[i][bound] = acc;
        for (long c = 1; c <= bound; ++c) {
            acc = E0.add(acc, g);
            mult[i][bound + c] = acc;
            mult[i][bound - c] = E0.neg(acc);
        }
    }
    std::unordered_multimap<u64, long> last;  // key(c G_{r-1}) -> c
    for (long c = -bound; c <= bound; ++c) last.emplace(E0.point_key(mult[r - 1][bound + c]), c);

    auto exact_check = [&](const std::vector<long>& c, const RationalPoint& t) -> std::optional<BasisRepresentation> {
        for (std::size_t k = 1; k < curves.size(); ++k) {
            const auto& Ek = curves[k];
            ff::Point s = ff::reduce_point(t, Ek);
            for (std::size_t i = 0; i < r; ++i) s = Ek.add(s, Ek.mul(Integer(c[i]), ff::reduce_point(basis[i], Ek)));
            if (!(s == ff::reduce_point(P, Ek))) return std::nullopt;
        }
        RationalPoint s = t;
        for (std::size_t i = 0; i < r; ++i) s = add(s, scalar_mul(c[i], basis[i]));
        if (!(s == P)) return std::nullopt;
        BasisRepresentation rep{{}, t};
        for (long ci : c) rep.coefficients.push_back(Integer(ci));
        return rep;
    };

    ff::Point pbar = ff::reduce_point(P, E0);
    std::vector<long> c(r, -bound);
    while (true) {
        ff::Point partial;
        for (std::size_t i = 0; i + 1 < r; ++i) partial = E0.add(partial, mult[i][bound + c[i]]);
        for (const auto& t : torsion.points) {
            ff::Point need = E0.add(pbar, E0.neg(E0.add(partial, ff::reduce_point(t, E0))));
            auto [lo, hi] = last.equal_range(E0.point_key(need));
            std::vector<long> cands;
            for (auto it = lo; it != hi; ++it) cands.push_back(it->second);
            std::sort(cands.begin(), cands.end(), [](long a, long b) { return std::abs(a) < std::abs(b) || (std::abs(a) == std::abs(b) && a < b); });
            for (long cl : cands) {
                c[r - 1] = cl;
                if (auto rep = exact_check(c, t)) return rep;
            }
        }
        std::size_t i = 0;
        while (i + 1 < r && ++c[i] > bound) c[i++] = -bound;
        if (i + 1 >= r) break;
    }
    return std::nullopt;
}

namespace {

std::optional<DivisibilityStatus> aux_prime_route(const RationalPoint& P, const Prime& p, u64 aux_bound, u64 seed)
{
    const ModelPtr& model = P.model();
    u64 ps = small_prime(p);
    for (u64 ell : primes_up_to(aux_bound)) {
        Prime l(static_cast<unsigned long>(ell));
        if (!good_at(*model, l)) continue;
        ff::ReducedCurve E = ff::reduce_curve(*model, l);
        ff::PrimaryDecomposition pd(E, ps, seed_for(seed, ell));
        if (pd.valuation() == 0) continue;
        if (!pd.in_p_multiple(ff::reduce_point(P, E))) {
            DivisibilityStatus s;
            s.state = DivisibilityState::not_divisible;
            s.method = "aux_prime";
            s.ell = ell;
            s.reason = "reduction lies outside pE(F_" + std::to_string(ell) + "), E(F_l)[p^inf] = " + pd.structure();
            return s;
        }
    }
    return std::nullopt;
}

}  // namespace

DivisibilityStatus not_divisible(const RationalPoint& P, const Prime& p, const NotDivisibleOptions& options)
{
    require_odd(p);
    if (P.is_infinity()) return {DivisibilityState::divisible, "", std::nullopt, {}, "", "the identity lies in pE(Q)"};
    if (auto s = aux_prime_route(P, p, options.aux_bound, options.seed)) return *s;

    std::string aux_reason = "no good auxiliary prime l <= " + std::to_string(options.aux_bound) +
                             " separates the point from pE(F_l)";
    if (!options.basis) return {DivisibilityState::unknown, "", std::nullopt, {}, "", aux_reason};

    TorsionSubgroup tors = torsion_subgroup(P.model());
    auto rep = express_in_basis(P, *options.basis, tors, options.coefficient_bound);
    if (!rep) {
        return {DivisibilityState::unknown, "", std::nullopt, {}, "",
                aux_reason + "; no basis representation with |c_i| <= " + std::to_string(options.coefficient_bound)};
    }
    DivisibilityStatus s;
    s.method = "basis";
    s.coefficients = rep->coefficients;
    s.torsion_part = rep->torsion.str();
    bool all_divisible = std::all_of(rep->coefficients.begin(), rep->coefficients.end(),
                                     [&](const Integer& c) { return c % p.value() == 0; });
    if (!all_divisible) {
        s.state = DivisibilityState::not_divisible;
        s.reason = "a basis coefficient is prime to p";
        return s;
    }
    bool torsion_divisible = false;
    for (const auto& t : tors.points) {
        if (scalar_mul(p.value(), t) == rep->torsion) torsion_divisible = true;
    }
    s.state = torsion_divisible ? DivisibilityState::divisible : DivisibilityState::not_divisible;
    s.reason = torsion_divisible ? "all basis coefficients divisible by p and torsion part in pE(Q)_tors"
                                 : "torsion part is not in pE(Q)_tors";
    return s;
}

// ---- independence -----------------------------------------------------------

namespace {

struct PrimeImage {
    u64 ell = 0;
    bool contributes = false;
    std::vector<std::vector<u64>> rows;  // per point
};

PrimeImage image_at(const std::vector<RationalPoint>& points, u64 p, u64 ell, u64 seed)
{
    PrimeImage img;
    img.ell = ell;
    const WeierstrassModel& model = *points.front().model();
    Prime l(static_cast<unsigned long>(ell));
    if (!good_at(model, l)) return img;
    ff::ReducedCurve E = ff::reduce_curve(model, l);
    ff::PrimaryDecomposition pd(E, p, seed_for(seed, ell));
    if (pd.valuation() == 0) return img;
    img.contributes = true;
    for (const auto& P : points) img.rows.push_back(pd.image_mod_p(ff::reduce_point(P, E)));
    return img;
}

class IndependenceFold {
public:
    IndependenceFold(std::size_t n, u64 p) : rows_(n), p_(p) {}

    // Returns true once the rank is full.
    bool fold(const PrimeImage& img, IndependenceResult& out)
    {
        out.ell_max_scanned = img.ell;
        if (!img.contributes) return false;
        out.ells_used.push_back(img.ell);
        for (std::size_t i = 0; i < rows_.size(); ++i) rows_[i].insert(rows_[i].end(), img.rows[i].begin(), img.rows[i].end());
        out.rank = rank_mod_p(rows_, p_);
        return out.rank == rows_.size();
    }

private:
    std::vector<std::vector<u64>> rows_;
    u64 p_;
};

void check_points(const std::vector<RationalPoint>& points)
{
    for (const auto& P : points) {
        if (!P.same_model(points.front())) throw ModelMismatch();
    }
}

}  // namespace

IndependenceResult independence_mod_p_serial(const std::vector<RationalPoint>& points, const Prime& p, u64 aux_bound,
                                             u64 seed)
{
    require_odd(p);
    IndependenceResult out;
    if (points.empty()) return out;
    check_points(points);
    u64 ps = small_prime(p);
    IndependenceFold fold(points.size(), ps);
    for (u64 ell : primes_up_to(aux_bound)) {
        if (fold.fold(image_at(points, ps, ell, seed), out)) break;
    }
    return out;
}

IndependenceResult independence_mod_p(const std::vector<RationalPoint>& points, const Prime& p, u64 aux_bound, u64 seed)
{
    require_odd(p);
    IndependenceResult out;
    if (points.empty()) return out;
    check_points(points);
    u64 ps = small_prime(p);
    std::vector<u64> ells = primes_up_to(aux_bound);
    IndependenceFold fold(points.size(), ps);
    constexpr std::size_t kBatch = 32;
    for (std::size_t start = 0; start < ells.size(); start += kBatch) {
        std::size_t stop = std::min(ells.size(), start + kBatch);
        std::vector<PrimeImage> images(stop - start);
        std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = start; i < stop; ++i) {
            try {
                images[i - start] = image_at(points, ps, ells[i], seed);
            } catch (...) {
#pragma omp critical
                if (!error) error = std::current_exception();
            }
        }
        if (error) std::rethrow_exception(error);
        for (const auto& img : images) {
            if (fold.fold(img, out)) return out;
        }
    }
    return out;
}

// ---- valuation criterion ----------------------------------------------------

namespace {

// Minimal model at p and its formal log, shared across many checks.
struct LocalFrame {
    LocalFrame(const ModelPtr& model, const Prime& p, unsigned n) : prime(p)
    {
        require_odd(p);
        std::tie(minimal, iso) = minimal_model_at(model, p);
        log = formal_log(*minimal, default_log_precision(p, n));
    }

    TheoremBResult check(const RationalPoint& P, unsigned n, const ConditionsReport& conditions) const
    {
        TheoremBResult r;
        if (P.is_infinity()) {
            r.vpX = Valuation::infinity();
            r.vpXY = Valuation::infinity();
            r.rejection = "point at infinity";
            return r;
        }
        RationalPoint Pm = transport(P, iso, minimal);
        const Rational &X = Pm.x(), &Y = Pm.y();
        r.vpX = vp(X, prime);
        if (Y.is_zero()) {
            r.vpXY = Valuation::infinity();
            r.rejection = "Y = 0 (point of order 2)";
            return r;
        }
        r.vpXY = vp(X / Y, prime);
        Valuation need(static_cast<long>(n) + 1);
        r.valuation_route = r.vpX < Valuation(0) && r.vpXY >= need;
        if (r.vpX < Valuation(0)) r.formal_route = e1_divisibility(Pm, prime, n, log).divisible;

        if (r.vpX >= Valuation(0)) {
            r.rejection = "v_p(X) = " + r.vpX.str() + " is not negative";
        } else if (!r.valuation_route) {
            r.rejection = "v_p(X/Y) = " + r.vpXY.str() + " < " + need.str();
        } else if (r.formal_route != true) {
            r.rejection = "formal-log oracle disagrees with the valuation test";
        } else if (!conditions.witnesses_applicable()) {
            r.rejection = "(Mult) " + to_string(conditions.mult.state) + ", (Add) " + to_string(conditions.add.state) +
                          ": valuation test not applicable";
        } else {
            r.accepted = true;
        }
        return r;
    }

    Prime prime;
    ModelPtr minimal;
    IsomorphismData iso;
    TruncatedSeries log = TruncatedSeries::zero(0);
};

}  // namespace

TheoremBResult theorem_b_check(const RationalPoint& P, const Prime& p, unsigned n, const ConditionsReport& conditions)
{
    if (n == 0) throw std::invalid_argument("level n must be positive");
    return LocalFrame(P.model(), p, n).check(P, n, conditions);
}

std::vector<WitnessCertificate> witness_search(const std::vector<RationalPoint>& bases, const Prime& p, unsigned n,
                                               const ConditionsReport& conditions, const WitnessSearchOptions& options)
{
    if (n == 0) throw std::invalid_argument("level n must be positive");
    if (bases.empty() || options.k_max <= 0) return {};
    check_points(bases);
    LocalFrame frame(bases.front().model(), p, n);

    std::vector<std::vector<WitnessCertificate>> found(bases.size());
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t b = 0; b < bases.size(); ++b) {
        try {
            const RationalPoint& B = bases[b];
            std::string id = b < options.base_ids.size() ? options.base_ids[b] : "P" + std::to_string(b + 1);
            bool torsion = torsion_order(B) != 0;
            RationalPoint Q = RationalPoint::infinity(B.model());
            for (long k = 1; k <= options.k_max; ++k) {
                Q = add(Q, B);
                if (Q.is_infinity()) continue;
                TheoremBResult r = frame.check(Q, n, conditions);
                if (!r.accepted) continue;
                found[b].push_back({id, b, k, n, Q, r.vpX, r.vpXY, r.formal_route == true, torsion, {}});
                if (options.first_hit_only) break;
            }
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    std::vector<WitnessCertificate> out;
    for (auto& v : found) {
        for (auto& c : v) out.push_back(std::move(c));
    }
    return out;
}

// ---- bounds -----------------------------------------------------------------

std::vector<const WitnessCertificate*> eligible_witnesses(const std::vector<WitnessCertificate>& certificates)
{
    std::vector<const WitnessCertificate*> out;
    for (const auto& c : certificates) {
        if (!c.torsion_base && c.not_in_pE.state == DivisibilityState::not_divisible) out.push_back(&c);
    }
    return out;
}

BoundReport assemble_bounds(const ConditionsReport& conditions, const std::vector<WitnessCertificate>& certificates,
                            unsigned independence_rank, const Prime& p, unsigned n)
{
    require_odd(p);
    BoundReport b;
    if (!conditions.witnesses_applicable()) {
        b.blockers.push_back("(Mult) " + to_string(conditions.mult.state) + ": " + conditions.mult.reason);
        if (conditions.add.state == AddState::fails || conditions.add.state == AddState::unknown) {
            b.blockers.push_back("(Add) " + to_string(conditions.add.state) + ": " + conditions.add.reason);
        }
    }

    auto eligible = eligible_witnesses(certificates);
    bool basis_used = false;
    for (const auto& c : certificates) {
        std::string label = point_label(c.base_id, c.multiplier);
        if (c.torsion_base) {
            b.heuristic_notes.push_back(label + " passes the valuation test but has a torsion base; not counted");
            continue;
        }
        if (c.not_in_pE.state == DivisibilityState::unknown) {
            b.blockers.push_back("not_divisible unknown: " + label + " (" + c.not_in_pE.reason + ")");
        } else if (c.not_in_pE.state == DivisibilityState::divisible) {
            b.blockers.push_back(label + " lies in pE(Q)");
        } else if (c.not_in_pE.method == "basis") {
            basis_used = true;
        }
    }
    if (certificates.empty()) b.blockers.push_back("no witness found");

    if (n == 1) {
        b.r_ur_lower = std::min<unsigned>(independence_rank, static_cast<unsigned>(eligible.size()));
    } else {
        bool level_n = std::any_of(eligible.begin(), eligible.end(), [&](auto* c) { return c->level >= n; });
        b.r_ur_lower = level_n ? n : 0;
    }

    bool inj_ok = conditions.inj.state != InjState::unknown;
    bool irr_ok = conditions.irreducible.state != IrreducibleState::unknown;
    if (!inj_ok) b.blockers.push_back("(Inj) unknown: " + conditions.inj.reason);
    if (!irr_ok) b.blockers.push_back("irreducibility of E[p] unknown: " + conditions.irreducible.reason);
    if (conditions.irreducible.state == IrreducibleState::assumed) {
        b.conditional_on.push_back("E[p] irreducible (assumed)");
    }
    if (basis_used) b.conditional_on.push_back("supplied generators form a basis of E(Q) modulo torsion");

    bool gated = inj_ok && irr_ok;
    b.class_valuation_lower = gated ? 2 * b.r_ur_lower : 0;
    if (n == 1) b.multiplicity_lower = gated ? b.r_ur_lower : 0;
    return b;
}

TorsionHeuristic torsion_unramified_heuristic(const RationalPoint& T, const Prime& p, unsigned degree_bound, u64 seed)
{
    require_odd(p);
    u64 ps = small_prime(p);
    if (T.is_infinity() || torsion_order(T) != static_cast<int>(ps)) {
        throw std::invalid_argument("point " + T.str() + " is not a rational point of order p");
    }
    auto [minimal, iso] = minimal_model_at(T.model(), p);
    if (vp(minimal->disc(), p) != Valuation(0)) {
        throw std::invalid_argument("curve has bad reduction at p");
    }
    RationalPoint Tm = transport(T, iso, minimal);

    TorsionHeuristic h;
    u64 q = 1;
    for (unsigned d = 1; d <= degree_bound; ++d) {
        q *= ps;
        if (q > ff::kBruteForceCeiling) break;
        ff::ReducedCurve E = ff::reduce_curve(*minimal, p, d);
        ff::PrimaryDecomposition pd(E, ps, seed_for(seed, d));
        HeuristicRow row{d, Integer(static_cast<unsigned long>(pd.group_order())), pd.structure(),
                         pd.in_p_multiple(ff::reduce_point(Tm, E))};
        h.rows.push_back(row);
        if (row.in_p_multiple) {
            h.positive = true;
            h.degree = d;
            break;
        }
    }
    std::string ptxt = p.value().get_str();
    if (h.positive) {
        const auto& row = h.rows.back();
        h.note = "heuristic: the reduction of " + T.str() + " lies in " + ptxt + "E(F_" + ptxt + "^" +
                 std::to_string(row.degree) + ") where |E| = " + row.group_order.get_str() + " with " + ptxt +
                 "-primary part " + row.p_primary + "; this suggests " + T.str() + " is " + ptxt +
                 "-divisible over the maximal unramified extension of Q_" + ptxt +
                 ", which would give Hom(Cl(K_1), E[" + ptxt + "]) != 0 and v_" + ptxt +
                 "(h) > 0 (lifting step not verified)";
    } else {
        h.note = "no degree d <= " + std::to_string(degree_bound) + " places the reduction of " + T.str() + " in " +
                 ptxt + "E(F_" + ptxt + "^d)";
    }
    return h;
}

}  // namespace ecur
