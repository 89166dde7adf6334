// Built-in experiment presets (the paper-figure reproductions at desk
// scale) and the per-theorem verification harness behind `verify`.
#pragma once

#include <string>
#include <vector>

#include "assoclab/montecarlo.hpp"

namespace assoclab {

inline constexpr uint64_t kDefaultMasterSeed = 20260809ULL;

std::vector<std::string> preset_names();
bool has_preset(const std::string& name);
std::string preset_config_text(const std::string& name);  // throws Config if unknown

struct CheckLine {
    std::string label;
    double observed = 0.0;
    double lo = 0.0, hi = 0.0;  // pass iff lo <= observed <= hi
    bool pass = false;
    std::string detail;
};

struct VerifyResult {
    std::string id;
    std::vector<CheckLine> checks;
    bool pass = false;
};

// T1, T2, C3, T3, T4i, T4ii, C5, T5
std::vector<std::string> verify_ids();
VerifyResult run_verify(const std::string& theorem_id, uint64_t master_seed, int threads);

}  // namespace assoclab
