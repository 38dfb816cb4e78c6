#pragma once

#include "ecur/criteria.hpp"

#include <json.hpp>

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ecur {

inline constexpr const char* kVersion = "0.1.0";

/// One curve to analyse. Rationals are carried as decimal strings.
struct CurveJob {
    std::string label;
    std::array<std::string, 5> ainvs;
    std::string p;
    unsigned n = 1;
    std::vector<std::array<std::string, 2>> gens;
    bool basis = false;  // gens generate E(Q) modulo torsion
    bool assume_irreducible = false;
    long k_max = kDefaultKMax;
    std::uint64_t aux_bound = kDefaultAuxBound;
    std::uint64_t ell_bound = kDefaultEllBound;
    unsigned degree_bound = kDefaultDegreeBound;
    std::uint64_t seed = kDefaultSeed;
    std::vector<std::string> notes;

    friend bool operator==(const CurveJob&, const CurveJob&) = default;
};

enum class JobError { invalid_input, singular_curve, even_prime, not_prime, invalid_generator, internal };
std::string to_string(JobError e);

class JobFailure : public std::runtime_error {
public:
    JobFailure(JobError code, const std::string& what) : std::runtime_error(what), code_(code) {}
    JobError code() const { return code_; }

private:
    JobError code_;
};

struct LocalRow {
    std::string prime, kodaira, kind, potential;
    unsigned tamagawa = 1;
    std::string v_disc_min, v_c4, v_j;
    friend bool operator==(const LocalRow&, const LocalRow&) = default;
};

struct ConditionRow {
    std::string status;
    std::string detail;
    std::string ell;  // empty when not applicable
    friend bool operator==(const ConditionRow&, const ConditionRow&) = default;
};

struct CertificateRow {
    std::string base_id;
    long multiplier = 1;
    unsigned level = 1;
    std::string x, y, x_factored, y_factored;
    std::string vpX, vpXY;
    bool formal_oracle_agrees = false;
    bool torsion_base = false;
    std::string not_in_pE, method, ell, reason;
    friend bool operator==(const CertificateRow&, const CertificateRow&) = default;
};

struct HeuristicRecord {
    std::string point;
    unsigned degree = 0;
    std::string group_order, p_primary;
    bool in_p_multiple = false;
    friend bool operator==(const HeuristicRecord&, const HeuristicRecord&) = default;
};

struct Report {
    std::string version = kVersion;
    CurveJob job;
    std::optional<std::pair<std::string, std::string>> error;  // code, message

    std::string model, disc, disc_factored, j, j_factored, torsion;
    std::vector<LocalRow> local;
    ConditionRow mult, add, inj, irreducible;
    std::vector<CertificateRow> certificates;
    unsigned independence_rank = 0;
    std::string independence_method;
    std::vector<std::uint64_t> independence_ells;
    std::vector<HeuristicRecord> heuristic;
    BoundReport bounds;
    std::vector<std::string> caveats;

    friend bool operator==(const Report&, const Report&) = default;
};

void to_json(nlohmann::json& j, const CurveJob& job);
void from_json(const nlohmann::json& j, CurveJob& job);
void to_json(nlohmann::json& j, const Report& r);
void from_json(const nlohmann::json& j, Report& r);

/// Parses one line-delimited job record. Throws JobFailure(invalid_input).
CurveJob parse_job(const std::string& line);

/// Full pipeline. Throws JobFailure with a distinct code for bad input.
Report run_job(const CurveJob& job);
/// Never throws: failures are recorded in Report::error.
Report run_job_captured(const CurveJob& job);

/// Only the curve invariants and local table.
Report local_report(const CurveJob& job);

std::string render_text(const Report& r);
std::string render_json(const Report& r);

/// Jobs for the three worked examples.
std::vector<CurveJob> builtin_example_jobs();
/// Expected values keyed by job label, then by JSON pointer into the report.
nlohmann::json builtin_expected_values();

struct Mismatch {
    std::string label, pointer, expected, actual;
};

/// Reports that differ from the expected values at any listed pointer.
std::vector<Mismatch> compare_expected(const std::vector<Report>& reports, const nlohmann::json& expected);

}  // namespace ecur
