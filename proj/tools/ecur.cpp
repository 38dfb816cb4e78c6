#include "ecur/report.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <thread>

namespace {

struct CommonFlags {
    std::string p = "3";
    unsigned n = 1;
    long k_max = ecur::kDefaultKMax;
    std::uint64_t aux_bound = ecur::kDefaultAuxBound;
    std::uint64_t ell_bound = ecur::kDefaultEllBound;
    unsigned degree_bound = ecur::kDefaultDegreeBound;
    std::uint64_t seed = ecur::kDefaultSeed;
};

void add_search_flags(CLI::App* cmd, CommonFlags& f)
{
    cmd->add_option("--p", f.p, "odd prime p")->required();
    cmd->add_option("--n", f.n, "level n >= 1")->check(CLI::PositiveNumber);
    cmd->add_option("--kmax", f.k_max, "largest multiplier tried")->check(CLI::PositiveNumber);
    cmd->add_option("--aux-bound", f.aux_bound, "largest auxiliary prime");
    cmd->add_option("--ell-bound", f.ell_bound, "largest prime tried for irreducibility");
    cmd->add_option("--degree-bound", f.degree_bound, "largest extension degree for the torsion heuristic");
    cmd->add_option("--seed", f.seed, "seed for random points over finite fields");
}

void apply(const CommonFlags& f, ecur::CurveJob& job)
{
    job.p = f.p;
    job.n = f.n;
    job.k_max = f.k_max;
    job.aux_bound = f.aux_bound;
    job.ell_bound = f.ell_bound;
    job.degree_bound = f.degree_bound;
    job.seed = f.seed;
}

void emit(const ecur::Report& r, bool json)
{
    if (json)
        std::cout << ecur::render_json(r) << "\n";
    else
        std::cout << ecur::render_text(r) << "\n";
}

std::array<std::string, 5> ainvs_from(const std::vector<std::string>& v)
{
    if (v.size() != 5) throw ecur::JobFailure(ecur::JobError::invalid_input, "expected five a-invariants");
    return {v[0], v[1], v[2], v[3], v[4]};
}

std::vector<std::array<std::string, 2>> gens_from(const std::vector<std::string>& v)
{
    std::vector<std::array<std::string, 2>> out;
    for (const auto& g : v) {
        auto comma = g.find(',');
        if (comma == std::string::npos)
            throw ecur::JobFailure(ecur::JobError::invalid_generator, "generator '" + g + "' is not x,y");
        out.push_back({g.substr(0, comma), g.substr(comma + 1)});
    }
    return out;
}

int run_analyze(const std::string& path, unsigned workers, bool json)
{
    std::ifstream file;
    if (path != "-") {
        file.open(path);
        if (!file) {
            std::cerr << "cannot open " << path << "\n";
            return 1;
        }
    }
    std::istream& in = path == "-" ? std::cin : file;

    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
    }

    std::vector<ecur::Report> reports(lines.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < lines.size();) {
            try {
                reports[i] = ecur::run_job_captured(ecur::parse_job(lines[i]));
            } catch (const ecur::JobFailure& e) {
                reports[i].job.label = "line " + std::to_string(i + 1);
                reports[i].error = std::make_pair(ecur::to_string(e.code()), std::string(e.what()));
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < std::max(1u, workers); ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int status = 0;
    for (const auto& r : reports) {
        emit(r, json);
        if (r.error) status = 1;
    }
    return status;
}

int run_reproduce(const std::string& expected_path, bool json)
{
    nlohmann::json expected = ecur::builtin_expected_values();
    if (!expected_path.empty()) {
        std::ifstream f(expected_path);
        if (!f) {
            std::cerr << "cannot open " << expected_path << "\n";
            return 2;
        }
        try {
            expected = nlohmann::json::parse(f);
        } catch (const nlohmann::json::exception& e) {
            std::cerr << "malformed expected values: " << e.what() << "\n";
            return 2;
        }
    }
    std::vector<ecur::Report> reports;
    for (const auto& job : ecur::builtin_example_jobs()) {
        reports.push_back(ecur::run_job_captured(job));
        emit(reports.back(), json);
    }
    auto mismatches = ecur::compare_expected(reports, expected);
    for (const auto& m : mismatches) {
        std::cerr << "MISMATCH " << m.label << " " << m.pointer << ": expected " << m.expected << ", got " << m.actual
                  << "\n";
    }
    std::cerr << (mismatches.empty() ? "all expected values reproduced" : "expected values differ") << "\n";
    return mismatches.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Lower bounds for unramified p-rank from rational points on elliptic curves"};
    app.set_version_flag("--version", std::string(ecur::kVersion));
    app.require_subcommand(1);

    bool json = false;
    app.add_flag("--json", json, "one JSON object per report");

    std::string input = "-";
    unsigned workers = 1;
    auto* analyze = app.add_subcommand("analyze", "run line-delimited JSON jobs");
    analyze->add_option("input", input, "job file, or - for stdin");
    analyze->add_option("--workers", workers, "jobs run concurrently")->check(CLI::PositiveNumber);

    std::vector<std::string> ainvs, gens;
    auto* local = app.add_subcommand("local", "minimal model data and Tate's algorithm at each bad prime");
    local->add_option("--ainvs", ainvs, "a1,a2,a3,a4,a6")->delimiter(',')->required()->allow_extra_args(false);

    CommonFlags flags;
    bool basis = false, assume_irreducible = false;
    auto* witness = app.add_subcommand("witness", "search multiples of the given points for witnesses");
    witness->add_option("--ainvs", ainvs, "a1,a2,a3,a4,a6")->delimiter(',')->required()->allow_extra_args(false);
    witness->add_option("--gen", gens, "generator x,y (repeatable)")->allow_extra_args(false);
    witness->add_flag("--basis", basis, "generators form a basis of E(Q) modulo torsion");
    witness->add_flag("--assume-irreducible", assume_irreducible, "take E[p] irreducible as given");
    add_search_flags(witness, flags);

    std::string expected_path;
    auto* reproduce = app.add_subcommand("reproduce-examples", "rerun the built-in examples and compare");
    reproduce->add_option("--expected", expected_path, "expected values JSON overriding the built-in table");

    for (auto* sub : {analyze, local, witness, reproduce}) sub->add_flag("--json", json, "one JSON object per report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*analyze) return run_analyze(input, workers, json);
        if (*reproduce) return run_reproduce(expected_path, json);

        ecur::CurveJob job;
        job.ainvs = ainvs_from(ainvs);
        if (*local) {
            ecur::Report r = ecur::local_report(job);
            emit(r, json);
            return 0;
        }
        apply(flags, job);
        job.gens = gens_from(gens);
        job.basis = basis;
        job.assume_irreducible = assume_irreducible;
        ecur::Report r = ecur::run_job_captured(job);
        emit(r, json);
        return r.error ? 1 : 0;
    } catch (const ecur::JobFailure& e) {
        std::cerr << ecur::to_string(e.code()) << ": " << e.what() << "\n";
        return 1;
    }
}
