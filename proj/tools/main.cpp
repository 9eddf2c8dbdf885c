#include <iostream>

#include <CLI11.hpp>

#include "qhyper/cli.hpp"

namespace {

using qhyper::cli::kConfigError;

int explain_command(const std::string& name) {
    const auto id = qhyper::parse_identity(name);
    if (!id) {
        std::cerr << "error: unknown identity '" << name << "'\n";
        return kConfigError;
    }
    std::cout << qhyper::cli::explain(*id);
    return qhyper::cli::kSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verify multiple basic hypergeometric summations on random instances"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "Sample parameters and check identities");
    std::string config_path, ids, ranks, backend, format, out;
    std::string trials, seed, precision, epsilon, max_terms, pole_floor;
    verify->add_option("--config", config_path, "key=value file; flags override it");
    verify->add_option("--ids", ids, "comma-separated identity ids, or all");
    verify->add_option("--r", ranks, "rank or range min..max");
    verify->add_option("--trials", trials, "trials per id and rank");
    verify->add_option("--seed", seed, "rng seed");
    verify->add_option("--backend", backend, "exact or float");
    verify->add_option("--precision", precision, "float precision in bits");
    verify->add_option("--epsilon", epsilon, "tail tolerance");
    verify->add_option("--max-terms", max_terms, "truncation cap");
    verify->add_option("--pole-floor", pole_floor, "smallest admissible float denominator");
    verify->add_option("--out", out, "report path");
    verify->add_option("--format", format, "json or tsv");

    auto* explain = app.add_subcommand("explain", "Describe an identity");
    std::string explain_id;
    explain->add_option("id", explain_id, "identity id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    if (explain->parsed()) return explain_command(explain_id);

    qhyper::cli::RunConfig cfg;
    try {
        if (!config_path.empty()) qhyper::cli::apply_config_file(config_path, cfg);
        const std::pair<const char*, const std::string*> flags[] = {
            {"ids", &ids},         {"r", &ranks},          {"trials", &trials},        {"seed", &seed},
            {"backend", &backend}, {"precision", &precision}, {"epsilon", &epsilon}, {"max-terms", &max_terms},
            {"pole-floor", &pole_floor}, {"out", &out},    {"format", &format}};
        for (const auto& [key, value] : flags)
            if (!value->empty()) qhyper::cli::apply_setting(key, *value, cfg);
    } catch (const qhyper::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
    return qhyper::cli::run(cfg, std::cout, std::cerr);
}
