#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "cyclid/batch.hpp"
#include "cyclid/identification.hpp"
#include "cyclid/io.hpp"
#include "cyclid/synthgen.hpp"
#include "cyclid/weight_search.hpp"

namespace {

using cyclid::SearchConfig;
using cyclid::StoppingRule;

struct InstanceFlags {
    std::string network_path;
    std::string od_path;
    std::string flows_path;
    bool normalize = false;
};

void add_instance_flags(CLI::App* cmd, InstanceFlags& flags) {
    cmd->add_option("--network", flags.network_path, "Network CSV file")->required();
    cmd->add_option("--od", flags.od_path, "O-D pairs CSV file")->required();
    cmd->add_option("--flows", flags.flows_path, "Measured flows CSV file")->required();
    cmd->add_flag("--normalize", flags.normalize,
                  "Renormalize basic costs after loading (otherwise the file "
                  "must already satisfy equal per-criterion cost sums)");
}

cyclid::Instance load_instance(const InstanceFlags& flags) {
    auto instance =
        cyclid::read_instance(flags.network_path, flags.od_path, flags.flows_path);
    if (flags.normalize) instance.network = cyclid::normalize_costs(instance.network);
    return instance;
}

void add_search_flags(CLI::App* cmd, SearchConfig& config, std::string& rule) {
    cmd->add_option("--tol1", config.tol1, "Refinement epsilon cap")
        ->capture_default_str();
    cmd->add_option("--tol2", config.tol2, "Required per-iteration objective reduction factor")
        ->capture_default_str();
    cmd->add_option("--tol3", config.tol3, "Local search terminal step size")
        ->capture_default_str();
    cmd->add_option("--epsilon0", config.epsilon0, "Initial support threshold")
        ->capture_default_str();
    cmd->add_option("--grid", config.grid_resolution, "Initial simplex grid resolution")
        ->capture_default_str();
    cmd->add_option("--cutoff", config.cluster_cutoff, "Clustering distance cutoff")
        ->capture_default_str();
    cmd->add_option("--max-iterations", config.max_outer_iterations,
                    "Hard cap on refinement iterations")
        ->capture_default_str();
    cmd->add_option("--stopping-rule", rule,
                    "Refinement stop rule: 'improvement' stops once epsilon reaches tol1 or "
                    "the objective drop misses the tol2 factor; 'conjunctive' stops once "
                    "epsilon is below tol1 and the drop meets it")
        ->check(CLI::IsMember({"improvement", "conjunctive"}))
        ->capture_default_str();
}

void add_generator_flags(CLI::App* cmd, cyclid::GeneratorParams& params) {
    cmd->add_option("--grid-side", params.grid_side, "Grid network side length")
        ->capture_default_str();
    cmd->add_option("--od-count", params.num_od, "Number of O-D pairs")
        ->capture_default_str();
    cmd->add_option("--demand", params.demand, "Users per O-D pair")
        ->capture_default_str();
    cmd->add_option("--criteria", params.criteria, "Number of cost criteria")
        ->capture_default_str();
    cmd->add_option("--q", params.true_weight_count, "Number of true weights")
        ->capture_default_str();
    cmd->add_option("--cost-min", params.cost_min, "Minimum integer basic cost")
        ->capture_default_str();
    cmd->add_option("--cost-max", params.cost_max, "Maximum integer basic cost")
        ->capture_default_str();
    cmd->add_option("--measured-fraction", params.measured_fraction,
                    "Fraction of arcs with observed flows")
        ->capture_default_str();
}

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
    } else {
        cyclid::atomic_write(out_path, content);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cyclid: fits route-choice criteria weights to observed arc flows"};
    app.set_config("--config", "", "Read options from a key=value file");
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "Generate a synthetic instance");
    cyclid::GeneratorParams gen_params;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    add_generator_flags(generate, gen_params);
    generate->add_option("--seed", gen_seed, "Generator seed")->required();
    generate->add_option("--out", gen_out, "Output directory")->required();

    // identify
    auto* identify = app.add_subcommand("identify", "Fit probabilities for a fixed weight set");
    InstanceFlags id_flags;
    std::string id_weights_path, id_out;
    add_instance_flags(identify, id_flags);
    identify->add_option("--weights", id_weights_path, "Weight set CSV file")->required();
    identify->add_option("--out", id_out, "Result JSON path (stdout when omitted)");

    // search
    auto* search_cmd = app.add_subcommand("search", "Search for the weight set and probabilities");
    InstanceFlags search_flags;
    SearchConfig search_config;
    std::string search_rule = "improvement";
    std::string search_out;
    std::uint64_t search_seed = 0;
    add_instance_flags(search_cmd, search_flags);
    add_search_flags(search_cmd, search_config, search_rule);
    search_cmd
        ->add_option("--seed", search_seed,
                     "Accepted for interface compatibility; the search is deterministic "
                     "and ignores it")
        ->capture_default_str();
    search_cmd->add_option("--out", search_out, "Result JSON path (stdout when omitted)");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Recovery distances of a result against a ground truth");
    std::string eval_result_path, eval_truth_path, eval_out;
    evaluate->add_option("--result", eval_result_path, "Search result JSON")->required();
    evaluate->add_option("--truth", eval_truth_path, "truth.json of the instance")->required();
    evaluate->add_option("--out", eval_out, "Output JSON path (stdout when omitted)");

    // report
    auto* report = app.add_subcommand("report", "Histogram CSVs from batch results");
    std::string report_results_path, report_timing_path, report_out;
    report->add_option("--results", report_results_path, "results.json from a batch run")
        ->required();
    report->add_option("--timing", report_timing_path,
                       "timing.csv from the same run; adds timing_totals.csv");
    report->add_option("--out", report_out, "Output directory")->required();

    // batch
    auto* batch_cmd = app.add_subcommand("batch", "Generate + search + evaluate over many seeds");
    cyclid::BatchParams batch_params;
    std::string batch_rule = "improvement";
    std::string batch_out;
    batch_cmd->add_option("--instances", batch_params.num_instances, "Number of instances")
        ->capture_default_str();
    batch_cmd->add_option("--seed", batch_params.seed_base, "Base seed (instance i uses seed+i)")
        ->required();
    add_generator_flags(batch_cmd, batch_params.generator);
    add_search_flags(batch_cmd, batch_params.search, batch_rule);
    batch_cmd->add_option("--out", batch_out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) {
            gen_params.seed = gen_seed;
            auto [instance, truth] = cyclid::generate_instance(gen_params);
            std::filesystem::create_directories(gen_out);
            cyclid::write_network(gen_out + "/network.csv", instance.network);
            cyclid::write_od_pairs(gen_out + "/od.csv", instance.od_pairs);
            cyclid::write_measured_flows(gen_out + "/flows.csv", instance.measured);
            cyclid::write_ground_truth(gen_out + "/truth.json", truth);
            std::cout << "wrote instance with " << instance.network.arc_count()
                      << " arcs and " << instance.measured.size() << " measured arcs to "
                      << gen_out << "\n";
        } else if (identify->parsed()) {
            auto instance = load_instance(id_flags);
            const auto weights = cyclid::read_weight_set(id_weights_path);
            const auto result = cyclid::identify_once(std::move(instance), weights);
            emit(cyclid::serialize_identification_result(result), id_out);
        } else if (search_cmd->parsed()) {
            search_config.stopping_rule = search_rule == "conjunctive"
                                              ? StoppingRule::conjunctive
                                              : StoppingRule::improvement_based;
            cyclid::IdentificationEngine engine(load_instance(search_flags));
            const auto result = cyclid::search(engine, search_config);
            emit(cyclid::serialize_search_result(result), search_out);
        } else if (evaluate->parsed()) {
            const auto result = cyclid::read_search_result(eval_result_path);
            const auto truth = cyclid::read_ground_truth(eval_truth_path);
            const auto match = cyclid::recovery_distance(truth.weights, result.weights);
            nlohmann::json j;
            j["pairs"] = match.pairs;
            j["distances"] = match.distances;
            j["unmatched_true"] = match.unmatched_true;
            j["unmatched_estimated"] = match.unmatched_estimated;
            emit(j.dump(2) + "\n", eval_out);
        } else if (report->parsed()) {
            const auto reports = cyclid::read_batch_results(report_results_path);
            cyclid::write_report_outputs(report_out, reports);
            if (!report_timing_path.empty()) {
                const auto [sp, qp] = cyclid::read_timing_csv_totals(report_timing_path);
                cyclid::write_timing_totals(report_out + "/timing_totals.csv", sp, qp);
            }
            std::cout << "wrote histograms for " << reports.size() << " runs to "
                      << report_out << "\n";
        } else if (batch_cmd->parsed()) {
            batch_params.search.stopping_rule = batch_rule == "conjunctive"
                                                    ? StoppingRule::conjunctive
                                                    : StoppingRule::improvement_based;
            const auto reports = cyclid::run_batch(batch_params);
            cyclid::write_batch_outputs(batch_out, reports);
            int failures = 0;
            for (const auto& r : reports) failures += r.failed ? 1 : 0;
            std::cout << (reports.size() - failures) << "/" << reports.size()
                      << " instances completed\n";
            if (failures > 0) {
                std::cerr << failures << " instance(s) failed; see " << batch_out
                          << "/errors.json\n";
                return 1;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
