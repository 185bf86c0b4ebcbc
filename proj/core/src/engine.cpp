#include "benchgen/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace benchgen {

bool Archive::insert(Elite candidate) {
    if (!candidate.score.valid) throw std::invalid_argument("cannot archive an invalid score");
    auto& slot = cells_[static_cast<std::size_t>(candidate.descriptors.bin.flat())];
    if (slot && slot->score.d >= candidate.score.d) return false;
    if (!slot) ++filled_;
    slot = std::move(candidate);
    return true;
}

double Archive::max_d() const {
    double m = 0.0;
    for (const auto& slot : cells_)
        if (slot) m = std::max(m, slot->score.d);
    return m;
}

double Archive::mean_d() const {
    if (filled_ == 0) return 0.0;
    double sum = 0.0;
    for (const auto& slot : cells_)
        if (slot) sum += slot->score.d;
    return sum / filled_;
}

std::vector<const Elite*> Archive::elites() const {
    std::vector<const Elite*> out;
    out.reserve(static_cast<std::size_t>(filled_));
    for (const auto& slot : cells_)
        if (slot) out.push_back(&*slot);
    return out;
}

void EngineConfig::validate() const {
    if (population_size < 2 || population_size % 2 != 0)
        throw std::invalid_argument("population_size must be even and positive");
    if (max_generations < 0) throw std::invalid_argument("max_generations must be >= 0");
    if (crossover_rate < 0.0 || crossover_rate > 1.0 || mutation_rate < 0.0 || mutation_rate > 1.0)
        throw std::invalid_argument("rates must be in [0,1]");
    if (random_init_threshold < 0 || random_init_threshold > kArchiveCells)
        throw std::invalid_argument("random_init_threshold must be in [0, 800]");
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (init_height_min < 1 || init_height_min > init_height_max ||
        init_height_max > kMaxTreeHeight)
        throw std::invalid_argument("invalid initialization height range");
    if (domain.lower >= domain.upper || domain.dimension < 1)
        throw std::invalid_argument("invalid domain");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    opt1.validate();
    opt2.validate();
}

std::vector<ExprTree> generate_batch(const Archive& archive, const EngineConfig& config,
                                     Rng& rng) {
    std::vector<ExprTree> batch;
    batch.reserve(static_cast<std::size_t>(config.population_size));

    if (archive.filled() < config.random_init_threshold) {
        for (int i = 0; i < config.population_size; ++i)
            batch.push_back(random_tree(rng, config.domain, config.init_height_min,
                                        config.init_height_max));
        return batch;
    }

    const std::vector<const Elite*> elites = archive.elites();
    auto pick = [&]() -> const ExprTree& {
        return elites[rng.uniform_index(elites.size())]->tree;
    };

    for (int i = 0; i < config.population_size; i += 2) {
        const ExprTree& p1 = pick();
        const ExprTree& p2 = pick();
        if (rng.bernoulli(config.crossover_rate)) {
            auto [c1, c2] = subtree_crossover(rng, p1, p2);
            batch.push_back(std::move(c1));
            batch.push_back(std::move(c2));
        } else {
            batch.push_back(p1);
            batch.push_back(p2);
        }
    }
    for (ExprTree& child : batch)
        if (rng.bernoulli(config.mutation_rate))
            child = subtree_mutation(rng, config.domain, child);
    return batch;
}

namespace {

struct CandidateResult {
    BehaviorScore score;
    DescriptorVector descriptors;
    bool usable = false;
};

CandidateResult evaluate_candidate(const ExprTree& tree, const EngineConfig& config,
                                   const Rng& stream) {
    CandidateResult result;
    PairOptions options;
    options.repetitions = config.repetitions;
    options.pool_repetitions = config.pool_repetitions;
    options.equal_best_eps = config.equal_best_eps;

    const Objective objective = make_objective(tree);
    result.score =
        evaluate_pair(objective, config.opt1, config.opt2, config.domain, options,
                      stream.derive(0));
    if (!result.score.valid) return result;

    try {
        result.descriptors = compute_descriptors(objective, config.domain, config.fdc_samples,
                                                 config.walk_steps, config.neutrality_eps,
                                                 result.score.equal_best, stream.derive(1));
    } catch (const std::invalid_argument&) {
        return result;  // non-finite descriptors: candidate is dropped
    }
    result.usable = true;
    return result;
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            body(i);
        }
    };
    std::vector<std::thread> pool;
    const int n = std::min(threads, count);
    pool.reserve(static_cast<std::size_t>(n - 1));
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
}

}  // namespace

Archive evolve(const EngineConfig& config, const ProgressFn& progress) {
    config.validate();
    Archive archive;
    const Rng master(config.seed);
    Rng variation = master.derive(1);

    for (int gen = 0; gen < config.max_generations; ++gen) {
        const std::vector<ExprTree> batch = generate_batch(archive, config, variation);

        std::vector<CandidateResult> results(batch.size());
        const Rng gen_stream = master.derive(2).derive(static_cast<std::uint64_t>(gen));
        parallel_for(static_cast<int>(batch.size()), config.threads, [&](int i) {
            results[static_cast<std::size_t>(i)] = evaluate_candidate(
                batch[static_cast<std::size_t>(i)], config,
                gen_stream.derive(static_cast<std::uint64_t>(i)));
        });

        // insertion is serialized in candidate order: identical results for
        // any thread count
        for (std::size_t i = 0; i < results.size(); ++i) {
            CandidateResult& r = results[i];
            if (!r.usable) continue;
            archive.insert(Elite{batch[i], std::move(r.score), r.descriptors, gen});
        }

        if (progress)
            progress(GenerationStats{gen, archive.filled(), archive.max_d(), archive.mean_d()});
    }
    return archive;
}

const Elite& best_separating(const Archive& archive, bool require_unequal_best) {
    const Elite* best = nullptr;
    for (const Elite* e : archive.elites()) {
        if (require_unequal_best && e->score.equal_best) continue;
        if (!best || e->score.d > best->score.d) best = e;
    }
    if (!best) throw std::runtime_error("no separating elite");
    return *best;
}

}  // namespace benchgen
