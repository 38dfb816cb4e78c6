#pragma once

#include "ecur/curve.hpp"
#include "ecur/exact.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ecur {

/// Kodaira symbol: I_n, I_n*, II, III, IV, IV*, III*, II*.
struct Kodaira {
    enum class Family { I, I_star, II, III, IV, IV_star, III_star, II_star };
    Family family = Family::I;
    unsigned n = 0;  // only for I and I_star

    std::string str() const;
    static Kodaira parse(const std::string& s);
    friend bool operator==(const Kodaira&, const Kodaira&) = default;
};

enum class ReductionKind { good, split_multiplicative, nonsplit_multiplicative, additive };
enum class PotentialReduction { good, multiplicative };

std::string to_string(ReductionKind k);
std::string to_string(PotentialReduction k);

struct ReductionData {
    Integer prime;
    Kodaira kodaira;
    unsigned tamagawa = 1;
    ReductionKind kind = ReductionKind::good;
    PotentialReduction potential = PotentialReduction::good;
    Valuation v_disc_min = 0;
    Valuation v_c4 = 0;
    Valuation v_j = 0;

    bool multiplicative() const
    {
        return kind == ReductionKind::split_multiplicative || kind == ReductionKind::nonsplit_multiplicative;
    }
};

/// An ell-integral model with minimal discriminant valuation at ell, and the
/// coordinate change from `model` to it. Identity when already minimal.
std::pair<ModelPtr, IsomorphismData> minimal_model_at(const ModelPtr& model, const Prime& ell);

/// Tate's algorithm at ell (all primes, including 2 and 3).
ReductionData tate_algorithm(const ModelPtr& model, const Prime& ell);

class IncompleteFactorization : public std::runtime_error {
public:
    IncompleteFactorization(const std::string& what, Integer cofactor)
        : std::runtime_error(what), cofactor_(std::move(cofactor)) {}
    const Integer& cofactor() const { return cofactor_; }

private:
    Integer cofactor_;
};

/// Local data at every prime of bad reduction, ascending. Throws
/// IncompleteFactorization naming the unfactored cofactor.
std::vector<ReductionData> bad_primes(const ModelPtr& model, const FactorizationBudget& budget = {});

/// Model minimal at every prime, obtained prime by prime, with the composite transform.
std::pair<ModelPtr, IsomorphismData> global_minimal_model(const ModelPtr& model,
                                                          const FactorizationBudget& budget = {});

}  // namespace ecur
