#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardlattice/analysis.hpp"
#include "hardlattice/configuration.hpp"
#include "hardlattice/sampler.hpp"

namespace hardlattice {

// Shortest decimal string that parses back to the same double.
std::string format_shortest(double x);

// Configuration JSON:
//   {"N": int, "l": real, "epsilon": real, "positions": [x0, y0, x1, y1, ...]}
// with the 2N^2 coordinates in row-major canonical site order.
nlohmann::json to_json(const Configuration& cfg);
Configuration configuration_from_json(const nlohmann::json& j);

// Checkpoint JSON:
//   {"format": "hardlattice-checkpoint/1", "configuration": {...},
//    "proposal_radius": real, "random_scan": bool,
//    "rng": {"algorithm": str, "state": str}, "accepted": int, "proposed": int}
nlohmann::json checkpoint_to_json(const Chain& chain);
Chain chain_from_checkpoint(const nlohmann::json& j);

inline const std::vector<std::string> kScanCsvColumns{
    "N",           "l",        "epsilon",      "sweeps",      "n_samples",    "acceptance_rate",
    "mean_op_id",  "se_op_id", "mean_op_lid",  "se_op_lid",   "mean_bond_dx", "se_bond_dx",
    "mean_bond_dy", "se_bond_dy", "identities_ok"};

std::string scan_csv(const std::vector<ScanRecord>& records);

// Plain-text data blocks, one per N, separated by two blank lines:
// l mean_op_id se_op_id mean_op_lid se_op_lid
std::string scan_gnuplot(const std::vector<ScanRecord>& records);

// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

std::string read_file(const std::filesystem::path& path);

}  // namespace hardlattice
