// forcelab: run scenario configs and print a verdict table.
//
// Exit codes: 0 all scenarios ran, 1 some scenario failed, 2 bad usage or config.

#include <cstdio>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "forcelab/forcelab.hpp"

using namespace forcelab;

namespace {

struct RunArgs {
    std::string out;
    unsigned jobs = 0;
    std::vector<std::string> only;
};

void add_run_flags(CLI::App* cmd, RunArgs& a) {
    cmd->add_option("--out", a.out, "output directory (default $FORCELAB_OUT or ./forcelab_out)");
    cmd->add_option("--jobs,-j", a.jobs, "worker threads (default: hardware concurrency)");
    cmd->add_option("--only", a.only, "run only these scenario ids");
}

int execute(const std::vector<ScenarioConfig>& configs, const RunArgs& a) {
    RunOptions opt;
    opt.out_dir = a.out.empty() ? default_out_dir() : std::filesystem::path(a.out);
    opt.jobs = a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
    opt.only = a.only;
    const auto res = run_scenarios(configs, opt);
    for (const auto& e : res.entries) {
        if (e.ok) {
            std::printf("%-32s %-18s condition=%-12s simulation=%-12s %s (%.1fs)\n", e.id.c_str(), e.theorem.c_str(),
                        verdict3_name(e.report->condition), verdict3_name(e.report->simulation),
                        consistency_name(e.report->consistency), e.seconds);
        } else {
            std::printf("%-32s %-18s ERROR %s\n", e.id.c_str(), e.theorem.c_str(), e.error.c_str());
        }
    }
    if (!res.manifest_error.empty()) std::printf("manifest not written: %s\n", res.manifest_error.c_str());
    std::printf("agree=%zu disagree=%zu inconclusive=%zu; outputs in %s\n", res.count(Consistency::Agree),
                res.count(Consistency::Disagree), res.count(Consistency::Inconclusive), opt.out_dir.c_str());
    return res.all_ok() ? 0 : 1;
}

int check_expr(const std::string& text, const std::vector<double>& at) {
    Expr e;
    try {
        e = parse_expr(text);
    } catch (const ParseError& err) {
        std::cerr << "parse error: " << err.what() << '\n';
        return 2;
    }
    std::cout << "parsed:     " << e.str() << '\n';
    std::cout << "derivative: " << differentiate(e).str() << '\n';
    for (double t : at) {
        try {
            std::cout << "f(" << format_double(t) << ") = " << format_double(e(t)) << '\n';
        } catch (const std::exception& err) {
            std::cout << "f(" << format_double(t) << "): " << err.what() << '\n';
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"forcelab: weighted asymptotics of forced linear ODEs"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    RunArgs run_args;
    std::string config;
    auto* run = app.add_subcommand("run", "run the scenarios of a JSON config");
    run->add_option("config", config, "config file")->required();
    add_run_flags(run, run_args);

    RunArgs corpus_args;
    auto* corpus = app.add_subcommand("corpus", "run the built-in reference scenarios");
    add_run_flags(corpus, corpus_args);

    std::string expr_text;
    std::vector<double> at = {0.0, 1.0, 10.0};
    auto* chk = app.add_subcommand("check-expr", "parse an expression in t and evaluate it");
    chk->add_option("expr", expr_text, "expression")->required();
    chk->add_option("--at", at, "evaluation points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run) return execute(load_config(config), run_args);
        if (*corpus) return execute(parse_config_text(std::string(kBuiltinCorpus)), corpus_args);
        if (*chk) return check_expr(expr_text, at);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
