#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cyclid/synthgen.hpp"
#include "cyclid/weight_search.hpp"

namespace cyclid {

struct BatchParams {
    int num_instances = 1;
    std::uint64_t seed_base = 0;   // instance i runs with seed seed_base + i
    GeneratorParams generator;     // its seed field is overwritten per instance
    SearchConfig search;
};

/// Outcome of generate + search + evaluate on one instance. On failure only
/// index, seed, failed and error are meaningful.
struct RunReport {
    int index = 0;
    std::uint64_t seed = 0;
    bool failed = false;
    std::string error;
    double g_initial = 0.0;
    double g_after_refine = 0.0;
    double g_after_cluster = 0.0;
    double g_final = 0.0;
    int iterations = 0;
    std::vector<double> recovery_distances;
    std::vector<std::vector<double>> weights;
    std::vector<double> alpha;
    double time_sp_seconds = 0.0;
    double time_qp_seconds = 0.0;
};

/// Runs the full pipeline per instance, in index order. Per-instance
/// failures are captured in the report, not thrown.
std::vector<RunReport> run_batch(const BatchParams& params);

/// CSV histogram over `values`: 20 equal-width bins spanning [min, max],
/// lines `bin_low,bin_high,count`, the last bin closed on the right.
std::string serialize_histogram(const std::vector<double>& values, int bins = 20);

/// Writes results.json, histogram CSVs, timing.csv / timing_totals.csv and,
/// when failures occurred, errors.json into `dir`. Everything except the two
/// timing files is a deterministic function of the reports' deterministic
/// fields.
void write_batch_outputs(const std::string& dir, const std::vector<RunReport>& reports);

std::vector<RunReport> read_batch_results(const std::string& path);

/// Histogram CSVs derived from previously written batch results; used by the
/// report command.
void write_report_outputs(const std::string& dir, const std::vector<RunReport>& reports);

/// Sums the sp_seconds and qp_seconds columns of a timing.csv.
std::pair<double, double> read_timing_csv_totals(const std::string& path);
void write_timing_totals(const std::string& path, double sp_seconds, double qp_seconds);

}  // namespace cyclid
