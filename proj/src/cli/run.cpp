#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qhyper/cli.hpp"

namespace qhyper::cli {

namespace {

Backend backend_for(const RunConfig& cfg) {
    return cfg.backend == BackendKind::Exact ? Backend::exact() : Backend::floating(cfg.precision_bits);
}

std::string scalar_text(const std::optional<Scalar>& s) { return s ? s->to_string() : ""; }

std::string tsv_escape(std::string s) {
    for (char& c : s)
        if (c == '\t' || c == '\n') c = ' ';
    return s;
}

}  // namespace

std::vector<VerificationReport> execute(const RunConfig& cfg) {
    const NumericConfig& numeric = cfg.numeric;
    SamplingOptions opts;
    opts.backend = backend_for(cfg);
    std::vector<VerificationReport> reports;
    for (IdentityId id : selected_identities(cfg)) {
        const bool rank_one = descriptor(id).rank_one_only;
        for (std::size_t r = cfg.r_min; r <= cfg.r_max; ++r) {
            if (rank_one && r != 1) continue;
            for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
                const std::uint64_t seed = trial_seed(cfg.seed, id, r, trial);
                VerificationReport rep;
                try {
                    const ParameterAssignment p = sample_parameters(id, r, seed, numeric, opts);
                    rep = verify_instance(id, p, numeric);
                } catch (const Error& e) {
                    rep.id = std::string(to_string(id));
                    rep.r = r;
                    rep.backend = opts.backend;
                    rep.pass = false;
                    rep.detail = e.what();
                }
                rep.seed = seed;
                rep.trial = trial;
                reports.push_back(std::move(rep));
            }
        }
    }
    return reports;
}

std::string json_record(const VerificationReport& report) {
    nlohmann::json j;
    j["id"] = report.id;
    j["r"] = report.r;
    j["trial"] = report.trial;
    j["seed"] = report.seed;
    j["backend"] = report.backend.name();
    j["lhs"] = scalar_text(report.lhs);
    j["rhs"] = scalar_text(report.rhs);
    j["residual"] = report.residual;
    j["terms"] = report.truncation.terms;
    j["window"] = report.truncation.window;
    j["verdict"] = report.pass ? "pass" : "fail";
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [name, value] : report.parameters) params[name] = value;
    j["parameters"] = std::move(params);
    if (!report.pass) j["error"] = report.detail;
    return j.dump();
}

std::string tsv_header() {
    return "id\tr\ttrial\tseed\tbackend\tverdict\tresidual\tterms\twindow\tlhs\trhs\tparameters\terror";
}

std::string tsv_record(const VerificationReport& report) {
    std::ostringstream out;
    std::string params;
    for (const auto& [name, value] : report.parameters) params += (params.empty() ? "" : ";") + name + "=" + value;
    char residual[32];
    std::snprintf(residual, sizeof residual, "%.17g", report.residual);
    out << report.id << '\t' << report.r << '\t' << report.trial << '\t' << report.seed << '\t'
        << report.backend.name() << '\t' << (report.pass ? "pass" : "fail") << '\t' << residual << '\t'
        << report.truncation.terms << '\t' << report.truncation.window << '\t' << scalar_text(report.lhs) << '\t'
        << scalar_text(report.rhs) << '\t' << tsv_escape(params) << '\t'
        << (report.pass ? "" : tsv_escape(report.detail));
    return out.str();
}

void write_summary(const std::vector<VerificationReport>& reports, std::ostream& out) {
    struct Row {
        std::size_t trials = 0, passes = 0, terms = 0;
        double max_residual = 0.0;
    };
    std::vector<std::pair<std::string, std::size_t>> order;
    std::map<std::pair<std::string, std::size_t>, Row> rows;
    for (const auto& rep : reports) {
        const auto key = std::make_pair(rep.id, rep.r);
        if (!rows.count(key)) order.push_back(key);
        Row& row = rows[key];
        ++row.trials;
        row.passes += rep.pass ? 1 : 0;
        row.terms += rep.truncation.terms;
        row.max_residual = std::max(row.max_residual, rep.residual);
    }
    out << std::left << std::setw(24) << "id" << std::right << std::setw(4) << "r" << std::setw(8) << "trials"
        << std::setw(8) << "passes" << std::setw(14) << "max_residual" << std::setw(12) << "mean_terms" << '\n';
    for (const auto& key : order) {
        const Row& row = rows[key];
        char residual[32];
        std::snprintf(residual, sizeof residual, "%.3e", row.max_residual);
        out << std::left << std::setw(24) << key.first << std::right << std::setw(4) << key.second << std::setw(8)
            << row.trials << std::setw(8) << row.passes << std::setw(14) << residual << std::setw(12)
            << std::fixed << std::setprecision(1) << static_cast<double>(row.terms) / static_cast<double>(row.trials)
            << std::defaultfloat << '\n';
    }
}

int run(const RunConfig& cfg, std::ostream& summary, std::ostream& errors) {
    std::vector<VerificationReport> reports;
    try {
        validate(cfg);
        reports = execute(cfg);
    } catch (const Error& e) {
        errors << "error: " << e.what() << '\n';
        return kConfigError;
    }

    std::ostringstream body;
    if (cfg.format == Format::Tsv) body << tsv_header() << '\n';
    for (const auto& rep : reports) body << (cfg.format == Format::Json ? json_record(rep) : tsv_record(rep)) << '\n';
    {
        std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
        if (!file || !(file << body.str()) || !file.flush()) {
            errors << "error: cannot write report to " << cfg.out << '\n';
            return kIoError;
        }
    }

    write_summary(reports, summary);
    bool all_pass = true;
    for (const auto& rep : reports) {
        if (!rep.pass) {
            all_pass = false;
            errors << "FAIL " << rep.id << " r=" << rep.r << " trial=" << rep.trial << ": " << rep.detail << '\n';
        }
    }
    return all_pass ? kSuccess : kVerificationFailed;
}

std::string explain(IdentityId id) {
    const IdentityDescriptor& d = descriptor(id);
    std::ostringstream out;
    out << to_string(id) << ": " << d.title << '\n';
    out << "parameters:";
    for (Field f : d.schema) out << ' ' << to_string(f);
    if (d.rank_one_only) out << "  (r = 1 only)";
    out << '\n';
    out << "domain: " << to_string(d.domain) << (d.terminating() ? " (terminating)" : " (nonterminating)") << '\n';
    out << "constraints:\n";
    for (const auto& c : d.constraints) out << "  " << c.description << '\n';
    if (!d.notes.empty()) {
        out << "notes:\n";
        for (const auto& n : d.notes) out << "  " << n << '\n';
    }
    return out.str();
}

}  // namespace qhyper::cli
