#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qhyper/cli.hpp"

using namespace qhyper;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

cli::RunConfig small_run(const fs::path& out) {
    cli::RunConfig cfg;
    cfg.ids = {"new_ar_8phi7", "jackson_8phi7"};
    cfg.r_min = 1;
    cfg.r_max = 2;
    cfg.trials = 2;
    cfg.seed = 42;
    cfg.out = out.string();
    return cfg;
}

int run_quietly(const cli::RunConfig& cfg) {
    std::ostringstream summary, errors;
    return cli::run(cfg, summary, errors);
}

}  // namespace

TEST_CASE("exit codes") {
    const fs::path dir = fs::temp_directory_path() / "qhyper_cli_test";
    fs::create_directories(dir);
    cli::RunConfig cfg = small_run(dir / "ok.jsonl");
    CHECK(run_quietly(cfg) == cli::kSuccess);

    cli::RunConfig zero = cfg;
    zero.trials = 0;
    CHECK(run_quietly(zero) == cli::kConfigError);

    cli::RunConfig nonterminating = cfg;
    nonterminating.ids = {"bailey_6psi6"};
    CHECK(run_quietly(nonterminating) == cli::kConfigError);

    cli::RunConfig unknown = cfg;
    unknown.ids = {"bogus"};
    CHECK(run_quietly(unknown) == cli::kConfigError);

    cli::RunConfig unwritable = cfg;
    unwritable.out = (dir / "missing" / "x.jsonl").string();
    CHECK(run_quietly(unwritable) == cli::kIoError);
}

TEST_CASE("reports are deterministic and carry the fixed field set") {
    const fs::path dir = fs::temp_directory_path() / "qhyper_cli_test";
    fs::create_directories(dir);
    REQUIRE(run_quietly(small_run(dir / "one.jsonl")) == cli::kSuccess);
    REQUIRE(run_quietly(small_run(dir / "two.jsonl")) == cli::kSuccess);
    const std::string body = slurp(dir / "one.jsonl");
    CHECK(body == slurp(dir / "two.jsonl"));
    // new_ar_8phi7 at r = 1, 2 and jackson at r = 1 only.
    CHECK(std::count(body.begin(), body.end(), '\n') == 6);
    const std::string first = body.substr(0, body.find('\n'));
    CHECK(first.rfind("{\"backend\":\"exact\",\"id\":\"new_ar_8phi7\"", 0) == 0);
    for (const char* key : {"\"lhs\"", "\"rhs\"", "\"r\"", "\"residual\"", "\"seed\"", "\"terms\"", "\"trial\"",
                            "\"verdict\":\"pass\"", "\"window\"", "\"parameters\""})
        CHECK(first.find(key) != std::string::npos);
}

TEST_CASE("config file settings with flag overrides") {
    const fs::path path = fs::temp_directory_path() / "qhyper_cli_test.cfg";
    {
        std::ofstream out(path);
        out << "# sample\nids = new_ar_6phi5_nonterm, qbinomial\nr = 1..2\ntrials=3  # per rank\n"
               "backend=float\nprecision=192\nepsilon=1e-25\nformat=tsv\nout=/tmp/x.tsv\n";
    }
    cli::RunConfig cfg;
    cli::apply_config_file(path.string(), cfg);
    cli::apply_setting("trials", "4", cfg);
    CHECK(cfg.ids == std::vector<std::string>{"new_ar_6phi5_nonterm", "qbinomial"});
    CHECK(cfg.r_min == 1);
    CHECK(cfg.r_max == 2);
    CHECK(cfg.trials == 4);
    CHECK(cfg.backend == BackendKind::Float);
    CHECK(cfg.precision_bits == 192);
    CHECK(cfg.numeric.epsilon_tail == doctest::Approx(1e-25));
    CHECK(cfg.format == cli::Format::Tsv);
    CHECK_THROWS_AS(cli::apply_setting("colour", "red", cfg), Error);
    CHECK_THROWS_AS(cli::apply_setting("trials", "-1", cfg), Error);
    cfg.precision_bits = 32;
    CHECK_THROWS_AS(cli::validate(cfg), Error);
}

TEST_CASE("selection of all identities depends on the backend") {
    cli::RunConfig cfg;
    for (IdentityId id : cli::selected_identities(cfg)) CHECK(descriptor(id).terminating());
    cfg.backend = BackendKind::Float;
    CHECK(cli::selected_identities(cfg).size() == all_identities().size());
}

TEST_CASE("explain") {
    const std::string bilateral = cli::explain(IdentityId::new_ar_6psi6);
    CHECK(bilateral.find("Bilateral") != std::string::npos);
    CHECK(bilateral.find("|a^{r+1}q / bCdE| < 1") != std::string::npos);
    const std::string jackson = cli::explain(IdentityId::jackson_8phi7);
    CHECK(jackson.find("balanced") != std::string::npos);
    CHECK(jackson.find("very-well-poised") != std::string::npos);
    CHECK_FALSE(parse_identity("bogus").has_value());
}
