#include "ecur/report.hpp"

#include "ecur/finite_field.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ecur {

using nlohmann::json;

std::string to_string(JobError e)
{
    switch (e) {
    case JobError::invalid_input: return "invalid_input";
    case JobError::singular_curve: return "singular_curve";
    case JobError::even_prime: return "even_prime";
    case JobError::not_prime: return "not_prime";
    case JobError::invalid_generator: return "invalid_generator";
    case JobError::internal: return "internal";
    }
    return "?";
}

// ---- JSON ---------------------------------------------------------------------

void to_json(json& j, const CurveJob& job)
{
    json gens = json::array();
    for (const auto& g : job.gens) gens.push_back({g[0], g[1]});
    j = json{{"label", job.label},
             {"ainvs", job.ainvs},
             {"p", job.p},
             {"n", job.n},
             {"gens", gens},
             {"basis", job.basis},
             {"assume_irreducible", job.assume_irreducible},
             {"k_max", job.k_max},
             {"aux_bound", job.aux_bound},
             {"ell_bound", job.ell_bound},
             {"degree_bound", job.degree_bound},
             {"seed", job.seed},
             {"notes", job.notes}};
}

namespace {

std::string scalar_string(const json& v, const char* what)
{
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return v.dump();
    throw JobFailure(JobError::invalid_input, std::string(what) + " must be a string or an integer");
}

}  // namespace

void from_json(const json& j, CurveJob& job)
{
    static const std::set<std::string> known{"label",   "ainvs",     "p",         "n",            "gens",
                                             "basis",   "assume_irreducible",    "k_max",        "aux_bound",
                                             "ell_bound", "degree_bound", "seed", "notes"};
    if (!j.is_object()) throw JobFailure(JobError::invalid_input, "job must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) throw JobFailure(JobError::invalid_input, "unknown job field '" + key + "'");
    }
    job = CurveJob{};
    if (!j.contains("ainvs") || !j.contains("p")) throw JobFailure(JobError::invalid_input, "job needs ainvs and p");
    const json& a = j.at("ainvs");
    if (!a.is_array() || a.size() != 5) throw JobFailure(JobError::invalid_input, "ainvs must list five values");
    for (std::size_t i = 0; i < 5; ++i) job.ainvs[i] = scalar_string(a[i], "a-invariant");
    job.p = scalar_string(j.at("p"), "p");
    if (j.contains("label")) job.label = j.at("label").get<std::string>();
    if (j.contains("n")) {
        long n = j.at("n").get<long>();
        if (n < 1) throw JobFailure(JobError::invalid_input, "n must be positive");
        job.n = static_cast<unsigned>(n);
    }
    if (j.contains("gens")) {
        for (const auto& g : j.at("gens")) {
            if (!g.is_array() || g.size() != 2) throw JobFailure(JobError::invalid_input, "each generator is [x, y]");
            job.gens.push_back({scalar_string(g[0], "coordinate"), scalar_string(g[1], "coordinate")});
        }
    }
    if (j.contains("basis")) job.basis = j.at("basis").get<bool>();
    if (j.contains("assume_irreducible")) job.assume_irreducible = j.at("assume_irreducible").get<bool>();
    if (j.contains("k_max")) job.k_max = j.at("k_max").get<long>();
    if (j.contains("aux_bound")) job.aux_bound = j.at("aux_bound").get<std::uint64_t>();
    if (j.contains("ell_bound")) job.ell_bound = j.at("ell_bound").get<std::uint64_t>();
    if (j.contains("degree_bound")) job.degree_bound = j.at("degree_bound").get<unsigned>();
    if (j.contains("seed")) job.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("notes")) job.notes = j.at("notes").get<std::vector<std::string>>();
}

void to_json(json& j, const BoundReport& b)
{
    j = json{{"r_ur_lower", b.r_ur_lower},
             {"class_valuation_lower", b.class_valuation_lower},
             {"multiplicity_lower", b.multiplicity_lower ? json(*b.multiplicity_lower) : json(nullptr)},
             {"conditional_on", b.conditional_on},
             {"blockers", b.blockers},
             {"heuristic_notes", b.heuristic_notes}};
}

void from_json(const json& j, BoundReport& b)
{
    b.r_ur_lower = j.at("r_ur_lower").get<unsigned>();
    b.class_valuation_lower = j.at("class_valuation_lower").get<unsigned>();
    const json& m = j.at("multiplicity_lower");
    b.multiplicity_lower = m.is_null() ? std::nullopt : std::optional<unsigned>(m.get<unsigned>());
    b.conditional_on = j.at("conditional_on").get<std::vector<std::string>>();
    b.blockers = j.at("blockers").get<std::vector<std::string>>();
    b.heuristic_notes = j.at("heuristic_notes").get<std::vector<std::string>>();
}

void to_json(json& j, const LocalRow& r)
{
    j = json{{"prime", r.prime},   {"kodaira", r.kodaira},       {"tamagawa", r.tamagawa}, {"kind", r.kind},
             {"potential", r.potential}, {"v_disc_min", r.v_disc_min}, {"v_c4", r.v_c4},         {"v_j", r.v_j}};
}

void from_json(const json& j, LocalRow& r)
{
    j.at("prime").get_to(r.prime);
    j.at("kodaira").get_to(r.kodaira);
    j.at("tamagawa").get_to(r.tamagawa);
    j.at("kind").get_to(r.kind);
    j.at("potential").get_to(r.potential);
    j.at("v_disc_min").get_to(r.v_disc_min);
    j.at("v_c4").get_to(r.v_c4);
    j.at("v_j").get_to(r.v_j);
}

void to_json(json& j, const ConditionRow& r) { j = json{{"status", r.status}, {"detail", r.detail}, {"ell", r.ell}}; }

void from_json(const json& j, ConditionRow& r)
{
    j.at("status").get_to(r.status);
    j.at("detail").get_to(r.detail);
    j.at("ell").get_to(r.ell);
}

void to_json(json& j, const CertificateRow& c)
{
    j = json{{"base_id", c.base_id},
             {"multiplier", c.multiplier},
             {"level", c.level},
             {"x", c.x},
             {"y", c.y},
             {"x_factored", c.x_factored},
             {"y_factored", c.y_factored},
             {"vpX", c.vpX},
             {"vpXY", c.vpXY},
             {"formal_oracle_agrees", c.formal_oracle_agrees},
             {"torsion_base", c.torsion_base},
             {"not_in_pE", c.not_in_pE},
             {"method", c.method},
             {"ell", c.ell},
             {"reason", c.reason}};
}

void from_json(const json& j, CertificateRow& c)
{
    j.at("base_id").get_to(c.base_id);
    j.at("multiplier").get_to(c.multiplier);
    j.at("level").get_to(c.level);
    j.at("x").get_to(c.x);
    j.at("y").get_to(c.y);
    j.at("x_factored").get_to(c.x_factored);
    j.at("y_factored").get_to(c.y_factored);
    j.at("vpX").get_to(c.vpX);
    j.at("vpXY").get_to(c.vpXY);
    j.at("formal_oracle_agrees").get_to(c.formal_oracle_agrees);
    j.at("torsion_base").get_to(c.torsion_base);
    j.at("not_in_pE").get_to(c.not_in_pE);
    j.at("method").get_to(c.method);
    j.at("ell").get_to(c.ell);
    j.at("reason").get_to(c.reason);
}

void to_json(json& j, const HeuristicRecord& h)
{
    j = json{{"point", h.point},
             {"degree", h.degree},
             {"group_order", h.group_order},
             {"p_primary", h.p_primary},
             {"in_p_multiple", h.in_p_multiple}};
}

void from_json(const json& j, HeuristicRecord& h)
{
    j.at("point").get_to(h.point);
    j.at("degree").get_to(h.degree);
    j.at("group_order").get_to(h.group_order);
    j.at("p_primary").get_to(h.p_primary);
    j.at("in_p_multiple").get_to(h.in_p_multiple);
}

void to_json(json& j, const Report& r)
{
    j = json{{"version", r.version}, {"seed", r.job.seed}, {"job", r.job}};
    if (r.error) {
        j["error"] = {{"code", r.error->first}, {"message", r.error->second}};
        return;
    }
    j["model"] = {{"ainvs", r.model},     {"disc", r.disc},       {"disc_factored", r.disc_factored},
                  {"j", r.j},             {"j_factored", r.j_factored}, {"torsion", r.torsion}};
    j["local"] = r.local;
    j["conditions"] = {{"mult", r.mult}, {"add", r.add}, {"inj", r.inj}, {"irreducible", r.irreducible}};
    j["certificates"] = r.certificates;
    j["independence"] = {{"rank", r.independence_rank},
                         {"method", r.independence_method},
                         {"ells_used", r.independence_ells}};
    j["heuristic"] = r.heuristic;
    j["bounds"] = r.bounds;
    j["caveats"] = r.caveats;
}

void from_json(const json& j, Report& r)
{
    r = Report{};
    j.at("version").get_to(r.version);
    j.at("job").get_to(r.job);
    if (j.contains("error")) {
        r.error = std::make_pair(j.at("error").at("code").get<std::string>(), j.at("error").at("message").get<std::string>());
        return;
    }
    const json& m = j.at("model");
    m.at("ainvs").get_to(r.model);
    m.at("disc").get_to(r.disc);
    m.at("disc_factored").get_to(r.disc_factored);
    m.at("j").get_to(r.j);
    m.at("j_factored").get_to(r.j_factored);
    m.at("torsion").get_to(r.torsion);
    j.at("local").get_to(r.local);
    const json& c = j.at("conditions");
    c.at("mult").get_to(r.mult);
    c.at("add").get_to(r.add);
    c.at("inj").get_to(r.inj);
    c.at("irreducible").get_to(r.irreducible);
    j.at("certificates").get_to(r.certificates);
    const json& ind = j.at("independence");
    ind.at("rank").get_to(r.independence_rank);
    ind.at("method").get_to(r.independence_method);
    ind.at("ells_used").get_to(r.independence_ells);
    j.at("heuristic").get_to(r.heuristic);
    j.at("bounds").get_to(r.bounds);
    j.at("caveats").get_to(r.caveats);
}

CurveJob parse_job(const std::string& line)
{
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& e) {
        throw JobFailure(JobError::invalid_input, std::string("malformed job record: ") + e.what());
    }
    try {
        return j.get<CurveJob>();
    } catch (const json::exception& e) {
        throw JobFailure(JobError::invalid_input, std::string("malformed job field: ") + e.what());
    }
}

// ---- pipeline -----------------------------------------------------------------

namespace {

struct Parsed {
    ModelPtr model;
    Integer p;
    std::vector<RationalPoint> gens;
};

Parsed parse_inputs(const CurveJob& job, bool need_prime)
{
    Parsed out;
    AInvariants a;
    for (std::size_t i = 0; i < 5; ++i) {
        try {
            a[i] = Rational::parse(job.ainvs[i]);
        } catch (const std::exception& e) {
            throw JobFailure(JobError::invalid_input, "a-invariant '" + job.ainvs[i] + "': " + e.what());
        }
    }
    try {
        out.model = WeierstrassModel::from_ainvs(a);
    } catch (const SingularCurve& e) {
        throw JobFailure(JobError::singular_curve, e.what());
    }
    if (need_prime) {
        if (out.p.set_str(job.p, 10) != 0) throw JobFailure(JobError::invalid_input, "p '" + job.p + "' is not an integer");
        if (mpz_even_p(out.p.get_mpz_t())) throw JobFailure(JobError::even_prime, "p = " + job.p + " is even; p must be an odd prime");
        if (out.p < 3 || !is_prime(out.p)) throw JobFailure(JobError::not_prime, "p = " + job.p + " is not prime");
        if (!out.p.fits_ulong_p() || out.p.get_ui() >= (1ul << 32)) {
            throw JobFailure(JobError::invalid_input, "p = " + job.p + " exceeds 2^32");
        }
    }
    for (const auto& g : job.gens) {
        try {
            out.gens.push_back(RationalPoint::affine(out.model, Rational::parse(g[0]), Rational::parse(g[1])));
        } catch (const std::exception& e) {
            throw JobFailure(JobError::invalid_generator, "generator (" + g[0] + ", " + g[1] + "): " + e.what());
        }
    }
    return out;
}

ConditionRow row(const std::string& status, const std::string& detail, std::string ell = "")
{
    return {status, detail, std::move(ell)};
}

void fill_model(Report& r, const ModelPtr& E)
{
    r.model = E->str();
    r.disc = E->disc().str();
    r.disc_factored = factored_str(E->disc());
    r.j = E->j().str();
    r.j_factored = factored_str(E->j());
    try {
        r.torsion = torsion_subgroup(E).structure();
    } catch (const std::runtime_error& e) {
        r.torsion = "unknown";
        r.caveats.push_back(std::string("torsion not determined: ") + e.what());
    }
    try {
        for (const auto& d : bad_primes(E)) {
            r.local.push_back({d.prime.get_str(), d.kodaira.str(), to_string(d.kind), to_string(d.potential), d.tamagawa,
                               d.v_disc_min.str(), d.v_c4.str(), d.v_j.str()});
        }
    } catch (const IncompleteFactorization& e) {
        r.caveats.push_back(std::string("local table incomplete: ") + e.what());
    }
}

}  // namespace

Report local_report(const CurveJob& job)
{
    Report r;
    r.job = job;
    Parsed in = parse_inputs(job, false);
    fill_model(r, in.model);
    return r;
}

Report run_job(const CurveJob& job)
{
    Report r;
    r.job = job;
    Parsed in = parse_inputs(job, true);
    const ModelPtr& E = in.model;
    Prime p(in.p);
    fill_model(r, E);
    r.caveats.insert(r.caveats.end(), job.notes.begin(), job.notes.end());

    ConditionsReport cond = check_conditions(E, p, job.ell_bound, job.assume_irreducible);
    auto ell_str = [](const auto& o) { return o ? o->get_str() : std::string(); };
    r.mult = row(to_string(cond.mult.state), cond.mult.reason, ell_str(cond.mult.ell));
    r.add = row(to_string(cond.add.state), cond.add.reason, ell_str(cond.add.ell));
    r.inj = row(to_string(cond.inj.state), cond.inj.reason);
    r.irreducible = row(to_string(cond.irreducible.state), cond.irreducible.reason,
                        cond.irreducible.ell ? std::to_string(*cond.irreducible.ell) : "");

    WitnessSearchOptions wopt;
    wopt.k_max = job.k_max;
    for (std::size_t i = 0; i < in.gens.size(); ++i) wopt.base_ids.push_back("G" + std::to_string(i + 1));
    std::vector<WitnessCertificate> certs = witness_search(in.gens, p, job.n, cond, wopt);

    std::vector<RationalPoint> basis;
    for (const auto& g : in.gens) {
        if (torsion_order(g) == 0) basis.push_back(g);
    }
    NotDivisibleOptions dopt;
    dopt.aux_bound = job.aux_bound;
    dopt.seed = job.seed;
    if (job.basis) dopt.basis = basis;
    for (auto& c : certs) {
        if (!c.torsion_base) c.not_in_pE = not_divisible(c.point, p, dopt);
    }

    std::vector<RationalPoint> eligible;
    for (const auto* c : eligible_witnesses(certs)) eligible.push_back(c->point);
    IndependenceResult ind = independence_mod_p(eligible, p, job.aux_bound, job.seed);
    r.independence_rank = ind.rank;
    r.independence_method = "aux_prime";
    r.independence_ells = ind.ells_used;
    if (job.basis && ind.rank < eligible.size()) {
        // Coordinates in the supplied basis give the rank mod p directly.
        TorsionSubgroup tors = torsion_subgroup(E);
        std::vector<std::vector<std::uint64_t>> rows;
        bool complete = true;
        for (const auto& P : eligible) {
            auto rep = express_in_basis(P, basis, tors, dopt.coefficient_bound);
            if (!rep) {
                complete = false;
                break;
            }
            std::vector<std::uint64_t> v;
            for (const auto& c : rep->coefficients) {
                Integer m;
                mpz_fdiv_r(m.get_mpz_t(), c.get_mpz_t(), in.p.get_mpz_t());
                v.push_back(m.get_ui());
            }
            rows.push_back(v);
        }
        unsigned brank = complete ? rank_mod_p(rows, p.ul()) : 0;
        if (brank > ind.rank) {
            r.independence_rank = brank;
            r.independence_method = "basis";
        }
    }

    BoundReport bounds = assemble_bounds(cond, certs, r.independence_rank, p, job.n);
    if (r.independence_method == "basis" && bounds.r_ur_lower > 0 &&
        std::find(bounds.conditional_on.begin(), bounds.conditional_on.end(),
                  "supplied generators form a basis of E(Q) modulo torsion") == bounds.conditional_on.end()) {
        bounds.conditional_on.push_back("supplied generators form a basis of E(Q) modulo torsion");
    }

    for (std::size_t i = 0; i < in.gens.size(); ++i) {
        const auto& g = in.gens[i];
        if (torsion_order(g) != static_cast<int>(p.ul())) continue;
        try {
            TorsionHeuristic h = torsion_unramified_heuristic(g, p, job.degree_bound, job.seed);
            for (const auto& row : h.rows) {
                r.heuristic.push_back({wopt.base_ids[i], row.degree, row.group_order.get_str(), row.p_primary, row.in_p_multiple});
            }
            bounds.heuristic_notes.push_back(wopt.base_ids[i] + ": " + h.note);
        } catch (const std::invalid_argument& e) {
            r.caveats.push_back(wopt.base_ids[i] + ": torsion heuristic not applicable: " + e.what());
        }
    }
    r.bounds = std::move(bounds);

    for (const auto& c : certs) {
        CertificateRow row;
        row.base_id = c.base_id;
        row.multiplier = c.multiplier;
        row.level = c.level;
        row.x = c.point.x().str();
        row.y = c.point.y().str();
        row.x_factored = factored_str(c.point.x());
        row.y_factored = factored_str(c.point.y());
        row.vpX = c.vpX.str();
        row.vpXY = c.vpXY.str();
        row.formal_oracle_agrees = c.formal_oracle_agrees;
        row.torsion_base = c.torsion_base;
        row.not_in_pE = c.torsion_base ? "not_applicable" : to_string(c.not_in_pE.state);
        row.method = c.not_in_pE.method;
        row.ell = c.not_in_pE.ell ? std::to_string(*c.not_in_pE.ell) : "";
        row.reason = c.not_in_pE.reason;
        r.certificates.push_back(std::move(row));
    }
    return r;
}

Report run_job_captured(const CurveJob& job)
{
    try {
        return run_job(job);
    } catch (const JobFailure& e) {
        Report r;
        r.job = job;
        r.error = std::make_pair(to_string(e.code()), std::string(e.what()));
        return r;
    } catch (const std::exception& e) {
        Report r;
        r.job = job;
        r.error = std::make_pair(to_string(JobError::internal), std::string(e.what()));
        return r;
    }
}

std::string render_json(const Report& r) { return json(r).dump(); }

std::string render_text(const Report& r)
{
    std::ostringstream o;
    o << "== " << (r.job.label.empty() ? "job" : r.job.label) << " (p = " << r.job.p << ", n = " << r.job.n << ")\n";
    if (r.error) {
        o << "error " << r.error->first << ": " << r.error->second << "\n";
        return o.str();
    }
    o << "model " << r.model << "\n";
    o << "  disc = " << r.disc_factored << "\n";
    o << "  j    = " << r.j_factored << "\n";
    o << "  torsion " << r.torsion << "\n";
    if (!r.local.empty()) {
        o << "local data\n";
        for (const auto& l : r.local) {
            o << "  " << l.prime << ": " << l.kodaira << " c=" << l.tamagawa << " " << l.kind << " (potentially "
              << l.potential << ") v(disc)=" << l.v_disc_min << " v(j)=" << l.v_j << "\n";
        }
    }
    if (!r.mult.status.empty()) {
        auto cond = [&](const char* name, const ConditionRow& c) {
            o << "  " << name << " " << c.status;
            if (!c.ell.empty()) o << " [l = " << c.ell << "]";
            o << ": " << c.detail << "\n";
        };
        o << "conditions\n";
        cond("(Mult)", r.mult);
        cond("(Add) ", r.add);
        cond("(Inj) ", r.inj);
        cond("E[p] irreducible", r.irreducible);
        o << "witnesses\n";
        if (r.certificates.empty()) o << "  none\n";
        for (const auto& c : r.certificates) {
            o << "  " << c.multiplier << "*" << c.base_id << " = (" << c.x_factored << ", " << c.y_factored << ")\n";
            o << "    v_p(X) = " << c.vpX << ", v_p(X/Y) = " << c.vpXY << ", formal log agrees: "
              << (c.formal_oracle_agrees ? "yes" : "no") << "\n";
            o << "    outside pE(Q): " << c.not_in_pE;
            if (!c.method.empty()) o << " via " << c.method << (c.ell.empty() ? "" : " l = " + c.ell);
            o << "\n";
        }
        o << "independence rank mod p: " << r.independence_rank << " (" << r.independence_method << ")\n";
        for (const auto& h : r.heuristic) {
            o << "  " << h.point << " over F_p^" << h.degree << ": |E| = " << h.group_order << ", p-part "
              << h.p_primary << (h.in_p_multiple ? ", in pE" : "") << "\n";
        }
        const auto& b = r.bounds;
        o << "bounds\n";
        o << "  r_ur >= " << b.r_ur_lower << "\n";
        o << "  v_p(h) >= " << b.class_valuation_lower << "\n";
        if (b.multiplicity_lower) o << "  r_E[p] >= " << *b.multiplicity_lower << "\n";
        for (const auto& s : b.conditional_on) o << "  conditional on: " << s << "\n";
        for (const auto& s : b.blockers) o << "  blocker: " << s << "\n";
        for (const auto& s : b.heuristic_notes) o << "  note: " << s << "\n";
    }
    for (const auto& s : r.caveats) o << "caveat: " << s << "\n";
    return o.str();
}

// ---- built-in examples ------------------------------------------------------------

std::vector<CurveJob> builtin_example_jobs()
{
    CurveJob a;
    a.label = "11.a3/p5";
    a.ainvs = {"0", "-1", "1", "0", "0"};
    a.p = "5";
    a.gens = {{"0", "0"}};
    a.notes = {"j = -2^12/11 computed exactly; renderings with 11^-11 in the literature differ, only p | v_l(j) matters"};

    CurveJob b;
    b.label = "43.a1/p13/n1";
    b.ainvs = {"0", "1", "1", "0", "0"};
    b.p = "13";
    b.gens = {{"0", "0"}};
    b.basis = true;
    b.notes = {"j = -2^12/43 computed exactly; renderings with a positive sign differ, only p | v_l(j) matters"};

    CurveJob c = b;
    c.label = "43.a1/p13/n2";
    c.n = 2;

    CurveJob d;
    d.label = "x3-2401x+1/p7";
    d.ainvs = {"0", "0", "0", "-2401", "1"};
    d.p = "7";
    d.gens = {{"0", "1"}, {"-49", "1"}, {"-1", "49"}};
    d.k_max = 5;
    return {a, b, c, d};
}

json builtin_expected_values()
{
    return json::parse(R"JSON({
  "11.a3/p5": {
    "/model/torsion": "Z/5",
    "/model/j_factored": "-2^12/11",
    "/local/0/prime": "11",
    "/local/0/v_j": "-1",
    "/conditions/mult/status": "holds",
    "/conditions/inj/status": "proved_twist_torsion",
    "/heuristic/4/degree": 5,
    "/heuristic/4/group_order": "3025",
    "/heuristic/4/p_primary": "Z/25",
    "/heuristic/4/in_p_multiple": true,
    "/bounds/r_ur_lower": 0
  },
  "43.a1/p13/n1": {
    "/model/j_factored": "-2^12/43",
    "/conditions/mult/status": "holds",
    "/conditions/inj/status": "proved_large_p",
    "/conditions/irreducible/status": "certified",
    "/conditions/irreducible/ell": "3",
    "/certificates/0/multiplier": 19,
    "/certificates/0/x_factored": "-2^3*3^2*5*11*59*61*107/(13^6*37^2)",
    "/certificates/0/y_factored": "3^4*11^2*17*59^2*173*211/(13^9*37^3)",
    "/certificates/0/vpX": "-6",
    "/certificates/0/vpXY": "3",
    "/certificates/0/not_in_pE": "proved",
    "/bounds/r_ur_lower": 1,
    "/bounds/class_valuation_lower": 2,
    "/bounds/multiplicity_lower": 1
  },
  "43.a1/p13/n2": {
    "/certificates/0/multiplier": 19,
    "/certificates/0/not_in_pE": "proved",
    "/bounds/r_ur_lower": 2,
    "/bounds/class_valuation_lower": 4,
    "/bounds/multiplicity_lower": null
  },
  "x3-2401x+1/p7": {
    "/model/j_factored": "2^8*3^3*7^12/(1069*51791533)",
    "/conditions/mult/status": "holds",
    "/conditions/inj/status": "proved_twist_torsion",
    "/conditions/irreducible/status": "certified",
    "/certificates/0/multiplier": 3,
    "/certificates/0/x_factored": "-2^3*79*199*367*2399/7^16",
    "/certificates/0/y_factored": "37*4691*19523423*169609859/7^24",
    "/certificates/1/multiplier": 3,
    "/certificates/1/x_factored": "-5^2*13*53*181*1777*73483/(2^2*7^4*67^2*439^2)",
    "/certificates/1/y_factored": "29*31*6151*12992635846499/(2^3*7^6*67^3*439^3)",
    "/certificates/2/multiplier": 2,
    "/certificates/2/x_factored": "3^2*139*1153/7^4",
    "/certificates/2/y_factored": "5*345311039/7^6",
    "/independence/rank": 3,
    "/bounds/r_ur_lower": 3,
    "/bounds/class_valuation_lower": 6,
    "/bounds/multiplicity_lower": 3
  }
})JSON");
}

std::vector<Mismatch> compare_expected(const std::vector<Report>& reports, const json& expected)
{
    std::vector<Mismatch> out;
    for (const auto& [label, fields] : expected.items()) {
        auto it = std::find_if(reports.begin(), reports.end(), [&](const Report& r) { return r.job.label == label; });
        if (it == reports.end()) {
            out.push_back({label, "", "a report", "missing"});
            continue;
        }
        json actual = *it;
        for (const auto& [pointer, value] : fields.items()) {
            json::json_pointer ptr(pointer);
            std::string got = actual.contains(ptr) ? actual.at(ptr).dump() : "missing";
            if (got != value.dump()) out.push_back({label, pointer, value.dump(), got});
        }
    }
    return out;
}

}  // namespace ecur
