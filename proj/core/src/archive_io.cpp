#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "benchgen/engine.hpp"

namespace benchgen {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

ordered optimizer_to_json(const OptimizerConfig& c) {
    ordered j;
    j["algorithm"] = algorithm_name(c.algorithm);
    j["population_size"] = c.population_size;
    j["budget"] = c.budget;
    switch (c.algorithm) {
        case Algorithm::de:
            j["f"] = c.de_f;
            j["cr"] = c.de_cr;
            break;
        case Algorithm::shade:
            j["history"] = c.shade_history;
            j["p_max"] = c.shade_p_max;
            break;
        case Algorithm::cmaes:
            j["sigma0"] = c.cmaes_sigma0;
            break;
    }
    return j;
}

OptimizerConfig optimizer_from_json(const json& j) {
    OptimizerConfig c;
    c.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
    c.population_size = j.at("population_size").get<int>();
    c.budget = j.at("budget").get<int>();
    switch (c.algorithm) {
        case Algorithm::de:
            c.de_f = j.at("f").get<double>();
            c.de_cr = j.at("cr").get<double>();
            break;
        case Algorithm::shade:
            c.shade_history = j.at("history").get<int>();
            c.shade_p_max = j.at("p_max").get<double>();
            break;
        case Algorithm::cmaes:
            c.cmaes_sigma0 = j.at("sigma0").get<double>();
            break;
    }
    return c;
}

ordered config_to_json(const EngineConfig& c) {
    ordered j;
    j["population_size"] = c.population_size;
    j["max_generations"] = c.max_generations;
    j["crossover_rate"] = c.crossover_rate;
    j["mutation_rate"] = c.mutation_rate;
    j["random_init_threshold"] = c.random_init_threshold;
    j["repetitions"] = c.repetitions;
    j["pool_repetitions"] = c.pool_repetitions;
    j["domain"] = ordered{{"lower", c.domain.lower},
                          {"upper", c.domain.upper},
                          {"dimension", c.domain.dimension}};
    j["init_height_min"] = c.init_height_min;
    j["init_height_max"] = c.init_height_max;
    j["equal_best_eps"] = c.equal_best_eps;
    j["fdc_samples"] = c.fdc_samples;
    j["walk_steps"] = c.walk_steps;
    j["neutrality_eps"] = c.neutrality_eps;
    j["opt1"] = optimizer_to_json(c.opt1);
    j["opt2"] = optimizer_to_json(c.opt2);
    return j;
}

EngineConfig config_from_json(const json& j) {
    EngineConfig c;
    c.population_size = j.at("population_size").get<int>();
    c.max_generations = j.at("max_generations").get<int>();
    c.crossover_rate = j.at("crossover_rate").get<double>();
    c.mutation_rate = j.at("mutation_rate").get<double>();
    c.random_init_threshold = j.at("random_init_threshold").get<int>();
    c.repetitions = j.at("repetitions").get<int>();
    c.pool_repetitions = j.value("pool_repetitions", false);
    const json& d = j.at("domain");
    c.domain = Domain{d.at("lower").get<double>(), d.at("upper").get<double>(),
                      d.at("dimension").get<int>()};
    c.init_height_min = j.value("init_height_min", 3);
    c.init_height_max = j.value("init_height_max", 6);
    c.equal_best_eps = j.value("equal_best_eps", 0.005);
    c.fdc_samples = j.value("fdc_samples", 5000);
    c.walk_steps = j.value("walk_steps", 5000);
    c.neutrality_eps = j.value("neutrality_eps", 0.005);
    c.opt1 = optimizer_from_json(j.at("opt1"));
    c.opt2 = optimizer_from_json(j.at("opt2"));
    return c;
}

}  // namespace

std::string archive_to_json(const Archive& archive, const EngineConfig& config) {
    ordered root;
    root["config"] = config_to_json(config);
    root["seed"] = config.seed;
    ordered cells = ordered::array();
    for (const Elite* e : archive.elites()) {
        ordered cell;
        cell["bin"] = {e->descriptors.bin.i, e->descriptors.bin.j, e->descriptors.bin.k};
        cell["expr"] = e->tree.str();
        cell["d"] = e->score.d;
        cell["best_f1"] = e->score.best_f1;
        cell["best_f2"] = e->score.best_f2;
        cell["fdc"] = e->descriptors.fdc;
        cell["neutrality"] = e->descriptors.neutrality;
        cell["equal_best"] = e->descriptors.equal_best;
        cell["generation_found"] = e->generation_found;
        cells.push_back(std::move(cell));
    }
    root["cells"] = std::move(cells);
    return root.dump(2) + "\n";
}

ArchiveFile archive_from_json(std::string_view text) {
    const json root = json::parse(text);
    ArchiveFile file;
    file.config = config_from_json(root.at("config"));
    file.config.seed = root.at("seed").get<std::uint64_t>();
    for (const json& cell : root.at("cells")) {
        Elite e{parse(cell.at("expr").get<std::string>()), {}, {}, 0};
        e.score.d = cell.at("d").get<double>();
        e.score.best_f1 = cell.at("best_f1").get<double>();
        e.score.best_f2 = cell.at("best_f2").get<double>();
        e.score.equal_best = cell.at("equal_best").get<bool>();
        e.score.valid = true;
        e.descriptors.fdc = cell.at("fdc").get<double>();
        e.descriptors.neutrality = cell.at("neutrality").get<double>();
        e.descriptors.equal_best = e.score.equal_best;
        const json& bin = cell.at("bin");
        e.descriptors.bin = BinIndex{bin.at(0).get<int>(), bin.at(1).get<int>(),
                                     bin.at(2).get<int>()};
        e.generation_found = cell.at("generation_found").get<int>();
        file.archive.insert(std::move(e));
    }
    return file;
}

std::string heatmap_csv(const Archive& archive, int layer) {
    if (layer != 0 && layer != 1) throw std::invalid_argument("layer must be 0 or 1");
    std::ostringstream out;
    out.precision(17);
    for (int i = 0; i < kFdcBins; ++i) {
        for (int j = 0; j < kNeutralityBins; ++j) {
            if (j > 0) out << ',';
            if (const Elite* e = archive.cell(BinIndex{i, j, layer})) out << e->score.d;
        }
        out << '\n';
    }
    return out.str();
}

std::string progress_csv(const std::vector<GenerationStats>& stats) {
    std::ostringstream out;
    out.precision(17);
    out << "generation,filled_cells,max_d,mean_d\n";
    for (const GenerationStats& s : stats)
        out << s.generation << ',' << s.filled_cells << ',' << s.max_d << ',' << s.mean_d << '\n';
    return out.str();
}

}  // namespace benchgen
