#ifndef BENCHGEN_ENGINE_HPP
#define BENCHGEN_ENGINE_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "benchgen/behavior.hpp"
#include "benchgen/expr.hpp"
#include "benchgen/fla.hpp"
#include "benchgen/optim.hpp"

namespace benchgen {

struct Elite {
    ExprTree tree;
    BehaviorScore score;
    DescriptorVector descriptors;
    int generation_found = 0;
};

/// MAP-Elites grid over (fdc bin, neutrality bin, equal-best layer). One
/// elite per cell; a candidate replaces the incumbent only with a strictly
/// larger behavioral distance.
class Archive {
public:
    Archive() : cells_(kArchiveCells) {}

    const Elite* cell(const BinIndex& bin) const {
        const auto& slot = cells_[static_cast<std::size_t>(bin.flat())];
        return slot ? &*slot : nullptr;
    }

    /// Requires a valid score and finite descriptors.
    bool insert(Elite candidate);

    int filled() const { return filled_; }
    double max_d() const;
    double mean_d() const;

    /// Filled cells in flat-bin order.
    std::vector<const Elite*> elites() const;

private:
    std::vector<std::optional<Elite>> cells_;
    int filled_ = 0;
};

struct EngineConfig {
    int population_size = 50;
    int max_generations = 1000;
    double crossover_rate = 0.9;
    double mutation_rate = 0.3;
    int random_init_threshold = 200;  // MAP-Elites parameter s
    int repetitions = 3;
    bool pool_repetitions = false;
    std::uint64_t seed = 0;
    OptimizerConfig opt1;
    OptimizerConfig opt2;
    Domain domain{-5.0, 5.0, 2};
    int init_height_min = 3;
    int init_height_max = 6;
    double equal_best_eps = 0.005;
    int fdc_samples = 5000;
    int walk_steps = 5000;
    double neutrality_eps = 0.005;
    int threads = 1;

    void validate() const;  // throws std::invalid_argument
};

struct GenerationStats {
    int generation = 0;
    int filled_cells = 0;
    double max_d = 0.0;
    double mean_d = 0.0;
};

using ProgressFn = std::function<void(const GenerationStats&)>;

/// One batch of candidate functions: fresh random trees while the archive
/// holds fewer than `random_init_threshold` elites, otherwise uniformly
/// selected parents recombined pairwise and mutated.
std::vector<ExprTree> generate_batch(const Archive& archive, const EngineConfig& config, Rng& rng);

/// The full evolution loop. Candidate evaluation within a generation is
/// spread over `config.threads` workers; archive insertion stays in
/// candidate order, so the result is identical for any thread count.
Archive evolve(const EngineConfig& config, const ProgressFn& progress = {});

/// Elite with the largest behavioral distance, optionally restricted to
/// cells where the two optimizers reached different best fitnesses.
/// Throws std::runtime_error when no elite qualifies.
const Elite& best_separating(const Archive& archive, bool require_unequal_best);

// --- persistence (archive_io.cpp) ------------------------------------------

std::string archive_to_json(const Archive& archive, const EngineConfig& config);

struct ArchiveFile {
    EngineConfig config;
    Archive archive;
};

ArchiveFile archive_from_json(std::string_view text);

/// 20x20 grid of behavioral distances for one equal-best layer; rows are
/// fdc bins, columns neutrality bins, empty cells stay empty.
std::string heatmap_csv(const Archive& archive, int layer);

std::string progress_csv(const std::vector<GenerationStats>& stats);

}  // namespace benchgen

#endif
