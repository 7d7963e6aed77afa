#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "clustercert/clustering.hpp"
#include "clustercert/geometry.hpp"
#include "clustercert/reductions.hpp"

namespace clustercert {

using ordered_json = nlohmann::ordered_json;

// Grid file format:
//   {"dim": N, "center": [...], "side": r, "m": m, "values": [...]}
// with values in the fixed lexicographic order.
ordered_json grid_function_to_json(const GridFunction& u);
GridFunction grid_function_from_json(const ordered_json& j);
void write_grid_function(const std::filesystem::path& path, const GridFunction& u);
GridFunction read_grid_function(const std::filesystem::path& path);

// Function spec format: {"family": "...", "params": {...}}.
ordered_json function_spec_to_json(const FunctionSpec& f);
FunctionSpec function_spec_from_json(const ordered_json& j);

/// Accepts inline JSON, or "@path" to read the JSON from a file.
FunctionSpec parse_function_spec(const std::string& text);

ordered_json certificate_to_json(const ClusterCertificate& cert);
ordered_json corollary_result_to_json(const CorollaryResult& result);
ordered_json partition_report_to_json(const PartitionReport& report);

/// Per-subcube CSV for the given depths: one row per subcube with its index,
/// superlevel counts at c and lambda*c, and its class.
void write_partition_csv(std::ostream& out, const GridFunction& u, double c,
                         double alpha, double lambda,
                         const std::vector<int>& ks);

std::string dump_json(const ordered_json& j);
void write_json_file(const std::filesystem::path& path, const ordered_json& j);

}  // namespace clustercert
