#pragma once

#include <string>
#include <vector>

#include "cyclid/identification.hpp"
#include "cyclid/network.hpp"
#include "cyclid/synthgen.hpp"
#include "cyclid/weight_search.hpp"
#include "cyclid/weights.hpp"

namespace cyclid {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// Writes content to path via a temporary file in the same directory plus a
/// rename, so readers never observe a partially written file.
void atomic_write(const std::string& path, const std::string& content);

// Network file: `nodes,<n>` and `criteria,<r>` header lines, then one line
// per arc `tail,head,c_1,...,c_r`. All indices 0-based.
std::string serialize_network(const MultiCostNetwork& network);
MultiCostNetwork parse_network(const std::string& text);
void write_network(const std::string& path, const MultiCostNetwork& network);
MultiCostNetwork read_network(const std::string& path);

// O-D file: one line per pair `origin,destination,demand`.
std::string serialize_od_pairs(const std::vector<ODPair>& pairs);
std::vector<ODPair> parse_od_pairs(const std::string& text);
void write_od_pairs(const std::string& path, const std::vector<ODPair>& pairs);
std::vector<ODPair> read_od_pairs(const std::string& path);

// Measured-flows file: one line per measured arc `arc_index,flow`.
std::string serialize_measured_flows(const MeasuredFlows& measured);
MeasuredFlows parse_measured_flows(const std::string& text);
void write_measured_flows(const std::string& path, const MeasuredFlows& measured);
MeasuredFlows read_measured_flows(const std::string& path);

// Weights file: one weight per line, coordinates comma-separated.
std::string serialize_weight_set(const WeightSet& weights);
WeightSet parse_weight_set(const std::string& text);
void write_weight_set(const std::string& path, const WeightSet& weights);
WeightSet read_weight_set(const std::string& path);

Instance read_instance(const std::string& network_path, const std::string& od_path,
                       const std::string& flows_path);

// truth.json: {"seed": ..., "weights": [[...]], "alpha": [...]}.
void write_ground_truth(const std::string& path, const GroundTruth& truth);
GroundTruth read_ground_truth(const std::string& path);

// Result JSON for a single fit: {"alpha": [...], "g": ..., "weights": [[...]]}.
std::string serialize_identification_result(const IdentificationResult& result);
void write_identification_result(const std::string& path, const IdentificationResult& result);

// Result JSON for a full search: adds per-phase objectives and the
// per-iteration trace records {"t", "epsilon", "set_size", "g"}.
std::string serialize_search_result(const SearchResult& result);
void write_search_result(const std::string& path, const SearchResult& result);
SearchResult read_search_result(const std::string& path);

}  // namespace cyclid
