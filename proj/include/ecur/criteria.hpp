#pragma once

#include "ecur/curve.hpp"
#include "ecur/exact.hpp"
#include "ecur/local_reduction.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ecur {

inline constexpr long kDefaultKMax = 50;
inline constexpr std::uint64_t kDefaultAuxBound = 1000;
inline constexpr std::uint64_t kDefaultEllBound = 200;
inline constexpr unsigned kDefaultDegreeBound = 6;
inline constexpr std::uint64_t kDefaultSeed = 12345;
/// Largest |c_i| tried when expressing a point in a supplied basis.
inline constexpr long kDefaultCoefficientBound = 60;

// ---- hypotheses -------------------------------------------------------------

enum class MultState { holds, fails, unknown };
enum class AddState { holds, fails, vacuous, unknown };
enum class InjState { proved_large_p, proved_twist_torsion, unknown };
enum class IrreducibleState { certified, assumed, unknown };

std::string to_string(MultState s);
std::string to_string(AddState s);
std::string to_string(InjState s);
std::string to_string(IrreducibleState s);

struct JPole {
    Integer ell;
    long v_j;
};

struct MultCondition {
    MultState state = MultState::unknown;
    std::optional<Integer> ell;  // failing prime
    std::vector<JPole> poles;    // primes l != p with v_l(j) < 0
    std::string reason;
};

struct AddCondition {
    AddState state = AddState::unknown;
    std::optional<Integer> ell;
    std::string reason;
};

struct InjCondition {
    InjState state = InjState::unknown;
    std::string reason;
};

struct IrreducibleCondition {
    IrreducibleState state = IrreducibleState::unknown;
    std::optional<std::uint64_t> ell;  // certifying prime
    long a_ell = 0;
    std::string reason;
};

struct ConditionsReport {
    MultCondition mult;
    AddCondition add;
    InjCondition inj;
    IrreducibleCondition irreducible;

    /// (Mult) and (Add) both established, so valuation witnesses are unramified.
    bool witnesses_applicable() const
    {
        return mult.state == MultState::holds && (add.state == AddState::holds || add.state == AddState::vacuous);
    }
};

/// Every l != p with v_l(j) < 0 must have p not dividing v_l(j).
MultCondition check_mult(const WeierstrassModel& model, const Prime& p, const FactorizationBudget& budget = {});
/// For p = 3: no prime l != 3 of additive, potentially good reduction. Vacuous for p >= 5.
AddCondition check_add(const ModelPtr& model, const Prime& p, const FactorizationBudget& budget = {});
/// p >= 13, or the quadratic twist by p has no rational p-torsion.
InjCondition check_inj(const WeierstrassModel& model, const Prime& p, const FactorizationBudget& budget = {});
/// Looks for a good l <= ell_bound with x^2 - a_l x + l irreducible mod p.
IrreducibleCondition check_irreducible(const WeierstrassModel& model, const Prime& p,
                                       std::uint64_t ell_bound = kDefaultEllBound, bool assume = false);

ConditionsReport check_conditions(const ModelPtr& model, const Prime& p, std::uint64_t ell_bound = kDefaultEllBound,
                                  bool assume_irreducible = false, const FactorizationBudget& budget = {});

// ---- divisibility -----------------------------------------------------------

enum class DivisibilityState { not_divisible, divisible, unknown };
std::string to_string(DivisibilityState s);

struct DivisibilityStatus {
    DivisibilityState state = DivisibilityState::unknown;
    std::string method;                  // "aux_prime" or "basis"
    std::optional<std::uint64_t> ell;    // auxiliary prime that decided it
    std::vector<Integer> coefficients;   // coordinates in the basis
    std::string torsion_part;            // basis route: the torsion summand
    std::string reason;
};

struct NotDivisibleOptions {
    std::uint64_t aux_bound = kDefaultAuxBound;
    std::uint64_t seed = kDefaultSeed;
    /// Generators of E(Q) modulo torsion, when known.
    std::optional<std::vector<RationalPoint>> basis;
    long coefficient_bound = kDefaultCoefficientBound;
};

/// Proves P outside pE(Q) through a good auxiliary prime, or decides it
/// from coordinates in a supplied basis.
DivisibilityStatus not_divisible(const RationalPoint& P, const Prime& p, const NotDivisibleOptions& options = {});

/// Coordinates of P in `basis` plus a torsion point, searched within
/// |c_i| <= bound using reductions to prune. Empty when none is found.
struct BasisRepresentation {
    std::vector<Integer> coefficients;
    RationalPoint torsion;
};
std::optional<BasisRepresentation> express_in_basis(const RationalPoint& P, const std::vector<RationalPoint>& basis,
                                                    const TorsionSubgroup& torsion, long bound);

struct IndependenceResult {
    unsigned rank = 0;
    std::vector<std::uint64_t> ells_used;  // primes whose images were folded in
    std::uint64_t ell_max_scanned = 0;
};

/// Rank over F_p of the images of the points in the product of
/// E(F_l)/pE(F_l) over good l <= aux_bound, stopping once the rank is full.
IndependenceResult independence_mod_p(const std::vector<RationalPoint>& points, const Prime& p,
                                      std::uint64_t aux_bound = kDefaultAuxBound, std::uint64_t seed = kDefaultSeed);
/// One prime at a time; same result as the batched OpenMP version.
IndependenceResult independence_mod_p_serial(const std::vector<RationalPoint>& points, const Prime& p,
                                             std::uint64_t aux_bound = kDefaultAuxBound,
                                             std::uint64_t seed = kDefaultSeed);

/// Rank over F_p of integer row vectors.
unsigned rank_mod_p(std::vector<std::vector<std::uint64_t>> rows, std::uint64_t p);

// ---- valuation criterion ----------------------------------------------------

struct TheoremBResult {
    bool accepted = false;
    Valuation vpX = 0;
    Valuation vpXY = 0;
    bool valuation_route = false;          // vpX < 0 and vpXY >= n + 1
    std::optional<bool> formal_route;      // e1_divisibility, when vpX < 0
    std::string rejection;
};

/// The valuation test on a model minimal at p, cross-checked by the formal log.
/// Accepts only when the conditions make the test applicable.
TheoremBResult theorem_b_check(const RationalPoint& P, const Prime& p, unsigned n, const ConditionsReport& conditions);

struct WitnessCertificate {
    std::string base_id;
    std::size_t base_index = 0;
    long multiplier = 1;
    unsigned level = 1;
    RationalPoint point;
    Valuation vpX = 0;
    Valuation vpXY = 0;
    bool formal_oracle_agrees = false;
    bool torsion_base = false;
    DivisibilityStatus not_in_pE;
};

struct WitnessSearchOptions {
    long k_max = kDefaultKMax;
    /// Stop at the first multiple of each base that passes.
    bool first_hit_only = true;
    std::vector<std::string> base_ids;  // defaults to P1, P2, ...
};

/// Scans k B for 1 <= k <= k_max over the base points, in base then k order.
/// not_in_pE is left unknown; fill it with not_divisible.
std::vector<WitnessCertificate> witness_search(const std::vector<RationalPoint>& bases, const Prime& p, unsigned n,
                                               const ConditionsReport& conditions,
                                               const WitnessSearchOptions& options = {});

// ---- bounds -----------------------------------------------------------------

struct BoundReport {
    unsigned r_ur_lower = 0;
    unsigned class_valuation_lower = 0;
    std::optional<unsigned> multiplicity_lower;  // n = 1 only
    std::vector<std::string> conditional_on;
    std::vector<std::string> blockers;
    std::vector<std::string> heuristic_notes;

    friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

/// `independence_rank` is a certified lower bound for the rank in E(Q)/pE(Q)
/// of the eligible (non-torsion, proved outside pE(Q)) witnesses.
BoundReport assemble_bounds(const ConditionsReport& conditions, const std::vector<WitnessCertificate>& certificates,
                            unsigned independence_rank, const Prime& p, unsigned n);

/// Certificates usable for the bound: accepted, non-torsion base, proved outside pE(Q).
std::vector<const WitnessCertificate*> eligible_witnesses(const std::vector<WitnessCertificate>& certificates);

struct HeuristicRow {
    unsigned degree = 0;
    Integer group_order;
    std::string p_primary;
    bool in_p_multiple = false;
};

struct TorsionHeuristic {
    bool positive = false;
    std::optional<unsigned> degree;  // first degree with a positive finding
    std::vector<HeuristicRow> rows;
    std::string note;
};

/// For d <= degree_bound, whether the reduction of a rational p-torsion point
/// lies in pE(F_{p^d}). A positive result is only a heuristic signal.
TorsionHeuristic torsion_unramified_heuristic(const RationalPoint& T, const Prime& p,
                                              unsigned degree_bound = kDefaultDegreeBound,
                                              std::uint64_t seed = kDefaultSeed);

}  // namespace ecur
