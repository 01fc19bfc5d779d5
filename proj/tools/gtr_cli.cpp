// gtr: run verification suites or a single scenario computation.
//
//   gtr --suite springer [--seed S] [--truncation N] [--prime P] [--jobs J] [--json|--text]
//   gtr --scenario file.json [--seed S] [--truncation N] [--prime P]
//
// Exit codes: 0 pass, 1 check or operation failure, 2 usage or parse error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gtr/json_io.hpp"
#include "gtr/scenario.hpp"
#include "gtr/suites.hpp"

namespace {

using gtr::json_io::json;

json suite_json(const gtr::SuiteReport& r) {
    json out = gtr::json_io::to_json(r.report);
    out["schema"] = gtr::json_io::kReportSchema;
    out["suite"] = r.suite;
    out["seed"] = r.seed;
    out["wall_seconds"] = r.seconds;
    return out;
}

void print_text(const gtr::SuiteReport& r) {
    std::size_t passed = 0;
    for (auto& c : r.report.checks) {
        if (c.pass) ++passed;
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name;
        if (!c.pass && !c.witness.empty()) std::cout << "  [" << c.witness << "]";
        std::cout << "\n";
    }
    std::cout << "suite " << r.suite << ": " << passed << "/" << r.report.checks.size() << " checks passed in " << r.seconds << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verification suites and scenario computations for gl2 connection modules"};
    std::string suite, scenario_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> truncation;
    std::optional<long> prime;
    unsigned jobs = 1;
    bool as_json = false, as_text = false;
    auto* s_opt = app.add_option("--suite", suite, "springer, vk, structure, translation, counit, weights, theorem, appendix or all");
    auto* c_opt = app.add_option("--scenario", scenario_path, "scenario file (gtr-scenario/1)");
    s_opt->excludes(c_opt);
    app.add_option("--seed", seed, "RNG seed (default 0)");
    app.add_option("--truncation", truncation, "truncation order N (default: per operation)")->check(CLI::Range(1, 64));
    app.add_option("--prime", prime, "prime parameter p (default 5)")->check(CLI::Range(2, 1000003));
    app.add_option("--jobs", jobs, "worker threads for suites")->check(CLI::Range(1, 64));
    auto* j_flag = app.add_flag("--json", as_json, "JSON report");
    auto* t_flag = app.add_flag("--text", as_text, "text report (default for suites)");
    j_flag->excludes(t_flag);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    if (suite.empty() == scenario_path.empty()) {
        std::cerr << "exactly one of --suite or --scenario is required\n";
        return 2;
    }

    if (!suite.empty()) {
        gtr::SuiteOptions o;
        o.seed = seed.value_or(0);
        o.truncation = truncation.value_or(0);
        o.prime = prime.value_or(5);
        o.jobs = jobs;
        gtr::SuiteReport r;
        try {
            r = gtr::run_suite(suite, o);
        } catch (const gtr::UnknownSuite& e) {
            std::cerr << "UnknownSuite: " << suite << "\n";
            return 2;
        }
        if (as_json) std::cout << suite_json(r).dump(2) << "\n";
        else print_text(r);
        return r.ok() ? 0 : 1;
    }

    std::ifstream in(scenario_path);
    if (!in) {
        std::cerr << "ParseError: cannot open " << scenario_path << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        gtr::Scenario s = gtr::parse_scenario(buf.str());
        if (seed) s.config.seed = *seed;
        if (truncation) s.config.truncation = *truncation;
        if (prime) s.config.prime = *prime;
        auto res = gtr::compute(s);
        std::cout << res.output.dump(2) << "\n";
        return res.exit_code;
    } catch (const gtr::ParseError& e) {
        std::cerr << "ParseError: " << e.what() << "\n";
        return 2;
    }
}
