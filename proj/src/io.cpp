#include "cyclid/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace cyclid {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double_token(const std::string& raw) {
    const std::string token = trim(raw);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw std::runtime_error("malformed number: '" + raw + "'");
    }
    return value;
}

int parse_int_token(const std::string& raw) {
    const std::string token = trim(raw);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw std::runtime_error("malformed integer: '" + raw + "'");
    }
    return value;
}

std::vector<std::string> nonempty_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) lines.push_back(line);
    }
    return lines;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json load_json(const std::string& path) { return json::parse(read_file(path)); }

json weight_set_to_json(const WeightSet& weights) {
    json arr = json::array();
    for (const auto& w : weights) arr.push_back(w.coords());
    return arr;
}

WeightSet weight_set_from_json(const json& arr) {
    WeightSet out;
    for (const auto& entry : arr) {
        out.insert(WeightVector(entry.get<std::vector<double>>()));
    }
    return out;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, ptr);
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write to " + tmp + " failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("rename to " + path + " failed: " + ec.message());
}

std::string serialize_network(const MultiCostNetwork& network) {
    std::string out = "nodes," + std::to_string(network.node_count()) + "\n";
    out += "criteria," + std::to_string(network.criteria_count()) + "\n";
    for (int a = 0; a < network.arc_count(); ++a) {
        const Arc& arc = network.arc(a);
        out += std::to_string(arc.tail) + "," + std::to_string(arc.head);
        for (int h = 0; h < network.criteria_count(); ++h) {
            out += "," + format_double(network.cost(h, a));
        }
        out += "\n";
    }
    return out;
}

MultiCostNetwork parse_network(const std::string& text) {
    const auto lines = nonempty_lines(text);
    if (lines.size() < 2) throw std::runtime_error("network file is missing header lines");
    const auto header1 = split(lines[0], ',');
    const auto header2 = split(lines[1], ',');
    if (header1.size() != 2 || trim(header1[0]) != "nodes") {
        throw std::runtime_error("first network line must be 'nodes,<n>'");
    }
    if (header2.size() != 2 || trim(header2[0]) != "criteria") {
        throw std::runtime_error("second network line must be 'criteria,<r>'");
    }
    const int nodes = parse_int_token(header1[1]);
    const int criteria = parse_int_token(header2[1]);
    MultiCostNetwork network(nodes, criteria);
    std::vector<double> costs(criteria);
    for (std::size_t i = 2; i < lines.size(); ++i) {
        const auto fields = split(lines[i], ',');
        if (static_cast<int>(fields.size()) != 2 + criteria) {
            throw std::runtime_error("arc line has wrong field count: '" + lines[i] + "'");
        }
        for (int h = 0; h < criteria; ++h) costs[h] = parse_double_token(fields[2 + h]);
        network.add_arc(parse_int_token(fields[0]), parse_int_token(fields[1]), costs);
    }
    return network;
}

void write_network(const std::string& path, const MultiCostNetwork& network) {
    atomic_write(path, serialize_network(network));
}

MultiCostNetwork read_network(const std::string& path) {
    return parse_network(read_file(path));
}

std::string serialize_od_pairs(const std::vector<ODPair>& pairs) {
    std::string out;
    for (const auto& od : pairs) {
        out += std::to_string(od.origin) + "," + std::to_string(od.destination) + "," +
               std::to_string(od.demand) + "\n";
    }
    return out;
}

std::vector<ODPair> parse_od_pairs(const std::string& text) {
    std::vector<ODPair> pairs;
    for (const auto& line : nonempty_lines(text)) {
        const auto fields = split(line, ',');
        if (fields.size() != 3) {
            throw std::runtime_error("O-D line must be origin,destination,demand: '" + line + "'");
        }
        pairs.push_back({parse_int_token(fields[0]), parse_int_token(fields[1]),
                         parse_int_token(fields[2])});
    }
    return pairs;
}

void write_od_pairs(const std::string& path, const std::vector<ODPair>& pairs) {
    atomic_write(path, serialize_od_pairs(pairs));
}

std::vector<ODPair> read_od_pairs(const std::string& path) {
    return parse_od_pairs(read_file(path));
}

std::string serialize_measured_flows(const MeasuredFlows& measured) {
    std::string out;
    for (int i = 0; i < measured.size(); ++i) {
        out += std::to_string(measured.arcs[i]) + "," + format_double(measured.flows[i]) + "\n";
    }
    return out;
}

MeasuredFlows parse_measured_flows(const std::string& text) {
    std::vector<std::pair<int, double>> entries;
    for (const auto& line : nonempty_lines(text)) {
        const auto fields = split(line, ',');
        if (fields.size() != 2) {
            throw std::runtime_error("flow line must be arc_index,flow: '" + line + "'");
        }
        entries.push_back({parse_int_token(fields[0]), parse_double_token(fields[1])});
    }
    return MeasuredFlows::from_pairs(std::move(entries));
}

void write_measured_flows(const std::string& path, const MeasuredFlows& measured) {
    atomic_write(path, serialize_measured_flows(measured));
}

MeasuredFlows read_measured_flows(const std::string& path) {
    return parse_measured_flows(read_file(path));
}

std::string serialize_weight_set(const WeightSet& weights) {
    std::string out;
    for (const auto& w : weights) {
        for (int h = 0; h < w.dimension(); ++h) {
            if (h > 0) out += ",";
            out += format_double(w[h]);
        }
        out += "\n";
    }
    return out;
}

WeightSet parse_weight_set(const std::string& text) {
    WeightSet out;
    for (const auto& line : nonempty_lines(text)) {
        const auto fields = split(line, ',');
        std::vector<double> coords;
        coords.reserve(fields.size());
        for (const auto& f : fields) coords.push_back(parse_double_token(f));
        out.insert(WeightVector(std::move(coords)));
    }
    return out;
}

void write_weight_set(const std::string& path, const WeightSet& weights) {
    atomic_write(path, serialize_weight_set(weights));
}

WeightSet read_weight_set(const std::string& path) {
    return parse_weight_set(read_file(path));
}

Instance read_instance(const std::string& network_path, const std::string& od_path,
                       const std::string& flows_path) {
    return Instance{read_network(network_path), read_od_pairs(od_path),
                    read_measured_flows(flows_path)};
}

void write_ground_truth(const std::string& path, const GroundTruth& truth) {
    json j;
    j["seed"] = truth.seed;
    j["weights"] = weight_set_to_json(truth.weights);
    j["alpha"] = truth.alpha;
    atomic_write(path, j.dump(2) + "\n");
}

GroundTruth read_ground_truth(const std::string& path) {
    const json j = load_json(path);
    GroundTruth truth;
    truth.seed = j.at("seed").get<std::uint64_t>();
    truth.weights = weight_set_from_json(j.at("weights"));
    truth.alpha = j.at("alpha").get<std::vector<double>>();
    return truth;
}

std::string serialize_identification_result(const IdentificationResult& result) {
    json j;
    j["alpha"] = result.alpha;
    j["g"] = result.g_value;
    j["weights"] = weight_set_to_json(result.weight_set);
    return j.dump(2) + "\n";
}

void write_identification_result(const std::string& path,
                                 const IdentificationResult& result) {
    atomic_write(path, serialize_identification_result(result));
}

std::string serialize_search_result(const SearchResult& result) {
    json j;
    j["weights"] = weight_set_to_json(result.weights);
    j["alpha"] = result.alpha;
    j["g"] = result.g;
    j["g_initial"] = result.trace.g_initial;
    j["g_after_refine"] = result.trace.g_after_refine;
    j["g_after_cluster"] = result.trace.g_after_cluster;
    j["g_final"] = result.trace.g_final;
    j["refine_iterations"] = result.trace.refine_iterations;
    j["cluster_count"] = result.trace.cluster_count;
    json trace = json::array();
    for (const auto& rec : result.trace.refine_records) {
        trace.push_back({{"t", rec.t},
                         {"epsilon", rec.epsilon},
                         {"set_size", rec.set_size},
                         {"g", rec.g}});
    }
    j["trace"] = trace;
    return j.dump(2) + "\n";
}

void write_search_result(const std::string& path, const SearchResult& result) {
    atomic_write(path, serialize_search_result(result));
}

SearchResult read_search_result(const std::string& path) {
    const json j = load_json(path);
    SearchResult result;
    result.weights = weight_set_from_json(j.at("weights"));
    result.alpha = j.at("alpha").get<std::vector<double>>();
    result.g = j.at("g").get<double>();
    result.trace.g_initial = j.at("g_initial").get<double>();
    result.trace.g_after_refine = j.at("g_after_refine").get<double>();
    result.trace.g_after_cluster = j.at("g_after_cluster").get<double>();
    result.trace.g_final = j.at("g_final").get<double>();
    result.trace.refine_iterations = j.at("refine_iterations").get<int>();
    result.trace.cluster_count = j.at("cluster_count").get<int>();
    for (const auto& rec : j.at("trace")) {
        result.trace.refine_records.push_back({rec.at("t").get<int>(),
                                               rec.at("epsilon").get<double>(),
                                               rec.at("set_size").get<int>(),
                                               rec.at("g").get<double>()});
    }
    return result;
}

}  // namespace cyclid
