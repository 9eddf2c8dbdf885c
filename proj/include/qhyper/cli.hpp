#pragma once

// Batch verification driver behind the qhyper executable.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qhyper/identities.hpp"

namespace qhyper::cli {

enum class Format { Json, Tsv };

struct RunConfig {
    std::vector<std::string> ids{"all"};
    std::size_t r_min = 1;
    std::size_t r_max = 1;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    BackendKind backend = BackendKind::Exact;
    unsigned precision_bits = 256;
    NumericConfig numeric;
    std::string out;
    Format format = Format::Json;
};

enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kConfigError = 2, kIoError = 3 };

/// Applies key=value lines (keys as the long flag names without dashes; '#'
/// starts a comment) on top of cfg. Throws ConfigError.
void apply_config_file(const std::string& path, RunConfig& cfg);
void apply_setting(const std::string& key, const std::string& value, RunConfig& cfg);

/// Parses "a..b" or a single integer.
void parse_rank_range(const std::string& text, RunConfig& cfg);

/// Identities selected by cfg. "all" means every id the backend can
/// evaluate: terminating ids for Exact, everything for Float.
std::vector<IdentityId> selected_identities(const RunConfig& cfg);

void validate(const RunConfig& cfg);

/// One record per (id, r, trial) in deterministic order.
std::vector<VerificationReport> execute(const RunConfig& cfg);

std::string json_record(const VerificationReport& report);
std::string tsv_header();
std::string tsv_record(const VerificationReport& report);

void write_summary(const std::vector<VerificationReport>& reports, std::ostream& out);

/// Validates, executes, writes the report file and the summary. Returns an ExitCode.
int run(const RunConfig& cfg, std::ostream& summary, std::ostream& errors);

/// Schema, domain, constraints and notes of an identity.
std::string explain(IdentityId id);

}  // namespace qhyper::cli
