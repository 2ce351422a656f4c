#pragma once

#include <string>

#include <json.hpp>

#include "mic/baselines.hpp"
#include "mic/inference.hpp"
#include "mic/mic.hpp"
#include "mic/simlab.hpp"

namespace mic {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

json mle_block(const Dataset& d, const MleFit& fit, double bic);
json mic_block(const Dataset& d, const MicFit& fit, const InferenceReport& inf);
json best_subset_block(const Dataset& d, const SubsetSearchResult& r, double lambda0);
json simulation_json(const SimReport& r, bool include_reps = false);
json sweep_json(const Dataset& d, const ARobustness& r);

// Plain-text renderings; cosmetic, not part of the byte-identity contract.
std::string fit_table(const json& report);
std::string simulation_table(const SimReport& r);
std::string sweep_table(const json& report);

// Long-format trajectory rows: coefficient, a, gamma, beta.
std::string sweep_csv(const Dataset& d, const ARobustness& r);

// Writes to "<path>.tmp" then renames over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace mic
