#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace gaplab {

inline constexpr const char* kGaplabVersion = "0.1.0";

// Validated experiment configuration. Unknown keys are rejected with field
// paths; seeds must be nonempty; parameters are checked against the target
// experiment's schema.
struct ExperimentConfig {
    std::string experiment;  // sa-gap | psd | bch | expansion | lasserre-complete |
                             // soundness | full-pipeline
    nlohmann::json params;
    std::vector<uint64_t> seeds;
    std::string out_path;  // optional JSON report destination
    std::string csv_path;  // optional per-seed CSV table destination

    static ExperimentConfig from_json(const nlohmann::json& doc);
    static ExperimentConfig from_file(const std::string& path);
};

// Flattened per-seed table: one row per seed, columns are the scalar leaves
// of the per-seed JSON in sorted key order ("a.b" for one level of nesting),
// header row first.
std::string per_seed_csv(const nlohmann::json& per_seed);

struct GapReport {
    nlohmann::json document;
    bool all_pass = true;
    std::string to_string() const { return document.dump(1); }
};

// Deterministic given (config, seeds, version). Seed sweeps run on
// GAPLAB_WORKERS threads (default: hardware concurrency); per-seed results
// are merged in seed order.
GapReport run_experiment(const ExperimentConfig& config);

int worker_count();

}  // namespace gaplab
