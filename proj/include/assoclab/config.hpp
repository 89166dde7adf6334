// Declarative experiment configs: INI-style sections, a resolved-echo
// writer whose output re-parses to the identical experiment, and the
// eigenvalue-profile mini-language shared with the CLI.
#pragma once

#include <map>
#include <optional>
#include <string>

#include "assoclab/montecarlo.hpp"

namespace assoclab {

struct SweepSpec {
    std::vector<double> beta_grid;
    bool vary_y = true;
    bool use_correlation = true;
};

struct OutputSpec {
    bool csv = false;
    bool histogram = false;
    bool spin_dump = false;  // debug: raw replicate spins, one byte per spin
    int hist_bins = 60;
};

struct ParsedConfig {
    ExperimentConfig experiment;
    std::optional<SweepSpec> sweep;
    OutputSpec output;
};

// base_dir resolves relative file references (explicit matrices, eigenvalue
// files). Throws ErrorKind::Config on any problem.
ParsedConfig parse_config_text(const std::string& text, const std::string& base_dir);
ParsedConfig parse_config_file(const std::string& path);

// Canonical echo: parsing the returned text yields an identical experiment.
std::string resolved_config_text(const ParsedConfig& cfg);

// "const:c" | "power:p" | "exp:+:q" | "exp:-:q"
OlsProfile parse_profile(const std::string& text);
std::string profile_to_text(const OlsProfile& profile);

using ConfigSection = std::map<std::string, std::string>;

// Parses one model section ("kind = ...") into a descriptor; used by the
// config loader and by the assumptions subcommand.
ModelDesc parse_model_section(const ConfigSection& section, int n,
                              const std::string& section_name,
                              const std::string& base_dir);

}  // namespace assoclab
