#ifndef BENCHGEN_OPTIM_HPP
#define BENCHGEN_OPTIM_HPP

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "benchgen/expr.hpp"
#include "benchgen/rng.hpp"

namespace benchgen {

/// Minimization objective over a point in the domain.
using Objective = std::function<double(std::span<const double>)>;

Objective make_objective(const ExprTree& tree);

enum class Algorithm { de, shade, cmaes };

std::string_view algorithm_name(Algorithm a);
Algorithm algorithm_from_name(std::string_view name);

struct OptimizerConfig {
    Algorithm algorithm = Algorithm::de;
    int population_size = 20;
    int budget = 500;  // max objective evaluations, initial population included

    // DE
    double de_f = 0.5;
    double de_cr = 0.9;

    // SHADE
    int shade_history = 20;
    double shade_p_max = 0.2;

    // CMA-ES
    double cmaes_sigma0 = 6.0;

    void validate() const;  // throws std::invalid_argument
};

/// Ordered record of every objective evaluation an optimizer performed.
/// Points are stored row-major and always lie inside the domain.
struct SolutionTrace {
    int dimension = 0;
    std::vector<double> points;     // size() * dimension
    std::vector<double> fitnesses;  // non-finite objective values recorded as +inf
    std::vector<double> best_point;
    double best_fitness = std::numeric_limits<double>::infinity();

    std::size_t size() const { return fitnesses.size(); }
    std::span<const double> point(std::size_t i) const {
        return {points.data() + static_cast<std::size_t>(dimension) * i,
                static_cast<std::size_t>(dimension)};
    }
};

std::string trace_to_csv(const SolutionTrace& trace);

struct InitialPopulation {
    int dimension = 0;
    std::vector<double> points;  // row-major

    int size() const {
        return dimension == 0 ? 0 : static_cast<int>(points.size()) / dimension;
    }
    std::span<const double> point(int i) const {
        return {points.data() + static_cast<std::size_t>(dimension) * static_cast<std::size_t>(i),
                static_cast<std::size_t>(dimension)};
    }
};

InitialPopulation random_population(Rng& rng, const Domain& domain, int size);

/// Runs the configured optimizer against the objective until exactly
/// config.budget evaluations were spent (the last generation is truncated
/// if needed). Deterministic given (config, objective, init, rng stream).
SolutionTrace run(const OptimizerConfig& config, const Objective& objective,
                  const Domain& domain, const InitialPopulation& init, Rng rng);

// --- step-level API -------------------------------------------------------
// The per-generation building blocks are exposed for tests and for callers
// that need custom evaluation accounting.

/// Records evaluations against a fixed budget; maps non-finite objective
/// values to +inf so they are never selected as bests.
class TraceRecorder {
public:
    TraceRecorder(const Objective& objective, int dimension, int budget)
        : objective_(objective), budget_(budget) {
        trace_.dimension = dimension;
        trace_.points.reserve(static_cast<std::size_t>(budget) *
                              static_cast<std::size_t>(dimension));
        trace_.fitnesses.reserve(static_cast<std::size_t>(budget));
    }

    bool exhausted() const { return static_cast<int>(trace_.size()) >= budget_; }
    int remaining() const { return budget_ - static_cast<int>(trace_.size()); }

    double evaluate(std::span<const double> x);

    SolutionTrace take();

private:
    const Objective& objective_;
    int budget_;
    SolutionTrace trace_;
};

struct Population {
    int dimension = 0;
    std::vector<double> x;  // row-major
    std::vector<double> f;

    int size() const { return static_cast<int>(f.size()); }
    std::span<double> row(int i) {
        return {x.data() + static_cast<std::size_t>(dimension) * static_cast<std::size_t>(i),
                static_cast<std::size_t>(dimension)};
    }
    std::span<const double> row(int i) const {
        return {x.data() + static_cast<std::size_t>(dimension) * static_cast<std::size_t>(i),
                static_cast<std::size_t>(dimension)};
    }
    double best() const;
};

/// One DE generation (rand/1/bin, greedy replacement). Stops early when the
/// recorder's budget runs out; untried parents keep their current values.
void de_step(Population& pop, double f, double cr, Rng& rng, const Domain& domain,
             TraceRecorder& recorder);

struct ShadeState {
    Population pop;
    std::vector<double> memory_f;   // size H
    std::vector<double> memory_cr;  // size H
    int memory_pos = 0;
    double p_max = 0.2;
    std::vector<double> archive;  // row-major, evicted at random beyond pop size

    int archive_size() const {
        return pop.dimension == 0 ? 0 : static_cast<int>(archive.size()) / pop.dimension;
    }
};

ShadeState shade_init(Population pop, int history, double p_max);

/// One SHADE generation: success-history parameter sampling,
/// current-to-pbest/1 mutation with external archive, memory update via
/// weighted Lehmer (F) and weighted arithmetic (CR) means.
void shade_step(ShadeState& state, Rng& rng, const Domain& domain, TraceRecorder& recorder);

struct CmaesState {
    int dimension = 0;
    int lambda = 0;
    int mu = 0;
    std::vector<double> weights;  // mu recombination weights
    double mu_eff = 0.0;
    double c_sigma = 0.0, d_sigma = 0.0, c_c = 0.0, c_1 = 0.0, c_mu = 0.0, chi_n = 0.0;

    std::vector<double> mean;
    double sigma = 0.0;
    std::vector<double> cov;         // dimension x dimension, row-major, symmetric
    std::vector<double> path_sigma;  // conjugate evolution path
    std::vector<double> path_c;      // covariance evolution path
    std::vector<double> eig_basis;   // B, columns are eigenvectors
    std::vector<double> eig_scale;   // sqrt of eigenvalues
    long generation = 0;
};

CmaesState cmaes_init(int dimension, std::span<const double> mean0, double sigma0, int lambda);

/// One CMA-ES generation of the standard (mu/mu_w, lambda) formulation:
/// sampling from N(m, sigma^2 C) with evaluation-time clamping, rank-one and
/// rank-mu covariance updates, cumulative step-size adaptation. If the
/// remaining budget cannot fit a full generation, the leftover samples are
/// evaluated and recorded but no adaptation happens.
void cmaes_step(CmaesState& state, Rng& rng, const Domain& domain, TraceRecorder& recorder);

}  // namespace benchgen

#endif
