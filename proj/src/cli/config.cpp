#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "qhyper/cli.hpp"

namespace qhyper::cli {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

template <typename T>
T parse_unsigned(const std::string& key, const std::string& value) {
    T out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end || value.empty()) {
        throw Error(ErrorKind::Config, key + ": expected a nonnegative integer, got '" + value + "'");
    }
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != value.size()) {
        throw Error(ErrorKind::Config, key + ": expected a number, got '" + value + "'");
    }
    return out;
}

}  // namespace

void parse_rank_range(const std::string& text, RunConfig& cfg) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        cfg.r_min = cfg.r_max = parse_unsigned<std::size_t>("r", text);
        return;
    }
    cfg.r_min = parse_unsigned<std::size_t>("r", text.substr(0, dots));
    cfg.r_max = parse_unsigned<std::size_t>("r", text.substr(dots + 2));
}

void apply_setting(const std::string& key, const std::string& value, RunConfig& cfg) {
    if (key == "ids") {
        cfg.ids.clear();
        std::stringstream ss(value);
        for (std::string item; std::getline(ss, item, ',');)
            if (!trim(item).empty()) cfg.ids.push_back(trim(item));
    } else if (key == "r") {
        parse_rank_range(value, cfg);
    } else if (key == "trials") {
        cfg.trials = parse_unsigned<std::size_t>(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_unsigned<std::uint64_t>(key, value);
    } else if (key == "backend") {
        if (value == "exact") {
            cfg.backend = BackendKind::Exact;
        } else if (value == "float") {
            cfg.backend = BackendKind::Float;
        } else {
            throw Error(ErrorKind::Config, "backend must be exact or float, got '" + value + "'");
        }
    } else if (key == "precision") {
        cfg.precision_bits = parse_unsigned<unsigned>(key, value);
    } else if (key == "epsilon") {
        cfg.numeric.epsilon_tail = parse_double(key, value);
    } else if (key == "max-terms") {
        cfg.numeric.max_terms = parse_unsigned<std::size_t>(key, value);
    } else if (key == "pole-floor") {
        cfg.numeric.pole_floor = parse_double(key, value);
    } else if (key == "out") {
        cfg.out = value;
    } else if (key == "format") {
        if (value == "json") {
            cfg.format = Format::Json;
        } else if (value == "tsv") {
            cfg.format = Format::Tsv;
        } else {
            throw Error(ErrorKind::Config, "format must be json or tsv, got '" + value + "'");
        }
    } else {
        throw Error(ErrorKind::Config, "unknown setting '" + key + "'");
    }
}

void apply_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot read config file " + path);
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::Config, path + ":" + std::to_string(line_no) + ": expected key=value");
        }
        apply_setting(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), cfg);
    }
}

std::vector<IdentityId> selected_identities(const RunConfig& cfg) {
    std::vector<IdentityId> out;
    for (const auto& name : cfg.ids) {
        if (name == "all") {
            for (IdentityId id : all_identities()) {
                if (cfg.backend == BackendKind::Float || descriptor(id).terminating()) out.push_back(id);
            }
            continue;
        }
        const auto id = parse_identity(name);
        if (!id) throw Error(ErrorKind::Config, "unknown identity '" + name + "'");
        if (cfg.backend == BackendKind::Exact && !descriptor(*id).terminating()) {
            throw Error(ErrorKind::Config, name + " is nonterminating and needs --backend float");
        }
        out.push_back(*id);
    }
    std::vector<IdentityId> unique;
    for (IdentityId id : out)
        if (std::find(unique.begin(), unique.end(), id) == unique.end()) unique.push_back(id);
    return unique;
}

void validate(const RunConfig& cfg) {
    if (cfg.trials < 1) throw Error(ErrorKind::Config, "trials must be at least 1");
    if (cfg.r_min < 1 || cfg.r_min > cfg.r_max) throw Error(ErrorKind::Config, "r range must satisfy 1 <= min <= max");
    if (cfg.ids.empty()) throw Error(ErrorKind::Config, "no identities selected");
    if (cfg.backend == BackendKind::Float && cfg.precision_bits < kMinPrecisionBits) {
        throw Error(ErrorKind::Config, "precision must be at least " + std::to_string(kMinPrecisionBits) + " bits");
    }
    if (cfg.out.empty()) throw Error(ErrorKind::Config, "an output path is required");
    cfg.numeric.validate();
    selected_identities(cfg);
}

}  // namespace qhyper::cli
