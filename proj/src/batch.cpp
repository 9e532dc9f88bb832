#include "cyclid/batch.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "cyclid/io.hpp"

namespace cyclid {

namespace {

using nlohmann::json;

json report_to_json(const RunReport& r) {
    json j;
    j["index"] = r.index;
    j["seed"] = r.seed;
    j["failed"] = r.failed;
    j["error"] = r.error;
    j["g_initial"] = r.g_initial;
    j["g_after_refine"] = r.g_after_refine;
    j["g_after_cluster"] = r.g_after_cluster;
    j["g_final"] = r.g_final;
    j["iterations"] = r.iterations;
    j["recovery_distances"] = r.recovery_distances;
    j["weights"] = r.weights;
    j["alpha"] = r.alpha;
    return j;
}

RunReport report_from_json(const json& j) {
    RunReport r;
    r.index = j.at("index").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.failed = j.at("failed").get<bool>();
    r.error = j.at("error").get<std::string>();
    r.g_initial = j.at("g_initial").get<double>();
    r.g_after_refine = j.at("g_after_refine").get<double>();
    r.g_after_cluster = j.at("g_after_cluster").get<double>();
    r.g_final = j.at("g_final").get<double>();
    r.iterations = j.at("iterations").get<int>();
    r.recovery_distances = j.at("recovery_distances").get<std::vector<double>>();
    r.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    r.alpha = j.at("alpha").get<std::vector<double>>();
    return r;
}

void write_histograms(const std::string& dir, const std::vector<RunReport>& reports) {
    std::vector<double> g_initial, g_final, distances;
    for (const auto& r : reports) {
        if (r.failed) continue;
        g_initial.push_back(r.g_initial);
        g_final.push_back(r.g_final);
        distances.insert(distances.end(), r.recovery_distances.begin(),
                         r.recovery_distances.end());
    }
    atomic_write(dir + "/hist_g_initial.csv", serialize_histogram(g_initial));
    atomic_write(dir + "/hist_g_final.csv", serialize_histogram(g_final));
    atomic_write(dir + "/hist_recovery_distance.csv", serialize_histogram(distances));
}

}  // namespace

std::vector<RunReport> run_batch(const BatchParams& params) {
    if (params.num_instances < 1) {
        throw std::invalid_argument("num_instances must be >= 1");
    }
    params.search.check();

    std::vector<RunReport> reports;
    reports.reserve(params.num_instances);
    for (int i = 0; i < params.num_instances; ++i) {
        RunReport report;
        report.index = i;
        report.seed = params.seed_base + std::uint64_t(i);
        try {
            GeneratorParams gen = params.generator;
            gen.seed = report.seed;
            auto [instance, truth] = generate_instance(gen);
            IdentificationEngine engine(std::move(instance));
            const auto result = search(engine, params.search);

            report.g_initial = result.trace.g_initial;
            report.g_after_refine = result.trace.g_after_refine;
            report.g_after_cluster = result.trace.g_after_cluster;
            report.g_final = result.trace.g_final;
            report.iterations = result.trace.refine_iterations;
            report.recovery_distances =
                recovery_distance(truth.weights, result.weights).distances;
            for (const auto& w : result.weights) report.weights.push_back(w.coords());
            report.alpha = result.alpha;
            report.time_sp_seconds = engine.sp_seconds();
            report.time_qp_seconds = engine.qp_seconds();
        } catch (const std::exception& e) {
            report.failed = true;
            report.error = e.what();
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

std::string serialize_histogram(const std::vector<double>& values, int bins) {
    if (bins < 1) throw std::invalid_argument("bins must be >= 1");
    std::string out = "bin_low,bin_high,count\n";
    if (values.empty()) return out;

    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (!(hi > lo)) hi = lo + 1.0;
    const double width = (hi - lo) / bins;

    std::vector<long> counts(bins, 0);
    for (double v : values) {
        int idx = static_cast<int>((v - lo) / width);
        idx = std::clamp(idx, 0, bins - 1);
        ++counts[idx];
    }
    for (int b = 0; b < bins; ++b) {
        out += format_double(lo + b * width) + "," + format_double(lo + (b + 1) * width) +
               "," + std::to_string(counts[b]) + "\n";
    }
    return out;
}

void write_batch_outputs(const std::string& dir, const std::vector<RunReport>& reports) {
    std::filesystem::create_directories(dir);

    json results = json::array();
    for (const auto& r : reports) results.push_back(report_to_json(r));
    atomic_write(dir + "/results.json", results.dump(2) + "\n");

    write_histograms(dir, reports);

    // Wall-clock diagnostics; excluded from the determinism guarantee.
    std::string timing = "index,seed,sp_seconds,qp_seconds\n";
    double total_sp = 0.0, total_qp = 0.0;
    for (const auto& r : reports) {
        timing += std::to_string(r.index) + "," + std::to_string(r.seed) + "," +
                  format_double(r.time_sp_seconds) + "," +
                  format_double(r.time_qp_seconds) + "\n";
        total_sp += r.time_sp_seconds;
        total_qp += r.time_qp_seconds;
    }
    atomic_write(dir + "/timing.csv", timing);
    write_timing_totals(dir + "/timing_totals.csv", total_sp, total_qp);

    json errors = json::array();
    for (const auto& r : reports) {
        if (r.failed) {
            errors.push_back({{"index", r.index}, {"seed", r.seed}, {"error", r.error}});
        }
    }
    if (!errors.empty()) {
        atomic_write(dir + "/errors.json", errors.dump(2) + "\n");
    }
}

std::vector<RunReport> read_batch_results(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    std::vector<RunReport> reports;
    for (const auto& entry : j) reports.push_back(report_from_json(entry));
    return reports;
}

void write_report_outputs(const std::string& dir, const std::vector<RunReport>& reports) {
    std::filesystem::create_directories(dir);
    write_histograms(dir, reports);
}

std::pair<double, double> read_timing_csv_totals(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("index,seed,", 0) != 0) {
        throw std::runtime_error(path + " is not a timing.csv");
    }
    double sp = 0.0, qp = 0.0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto last = line.rfind(',');
        const auto second_last = line.rfind(',', last - 1);
        if (last == std::string::npos || second_last == std::string::npos) {
            throw std::runtime_error("malformed timing row: '" + line + "'");
        }
        sp += std::stod(line.substr(second_last + 1, last - second_last - 1));
        qp += std::stod(line.substr(last + 1));
    }
    return {sp, qp};
}

void write_timing_totals(const std::string& path, double sp_seconds, double qp_seconds) {
    atomic_write(path, "total_sp_seconds,total_qp_seconds\n" + format_double(sp_seconds) +
                           "," + format_double(qp_seconds) + "\n");
}

}  // namespace cyclid
