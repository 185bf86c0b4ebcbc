#ifndef BENCHGEN_BEHAVIOR_HPP
#define BENCHGEN_BEHAVIOR_HPP

#include <span>
#include <vector>

#include "benchgen/expr.hpp"
#include "benchgen/optim.hpp"
#include "benchgen/rng.hpp"

namespace benchgen {

/// 1-Wasserstein distance between the empirical distributions of two
/// sample multisets (equal weight per sample, CDF-difference integral).
/// Sizes may differ. Throws std::invalid_argument on empty input.
double wasserstein_1d(std::span<const double> u, std::span<const double> v);

/// Average over dimensions of the per-coordinate 1-Wasserstein distance
/// between two point sets (row-major flat storage). Throws on empty input
/// or when either flat size is not a multiple of the dimension.
double behavioral_distance(std::span<const double> u_points, std::span<const double> v_points,
                           int dimension);

/// Behavioral difference of two optimizers on one candidate function.
struct BehaviorScore {
    double d = 0.0;        // averaged Wasserstein distance
    double best_f1 = 0.0;  // best fitness of opt1, min over repetitions
    double best_f2 = 0.0;
    bool equal_best = false;  // |best_f1 - best_f2| <= eps
    bool valid = true;        // false when non-finite values poisoned the score
    std::vector<double> rep_distances;  // per-repetition d (empty when pooled)
};

struct PairOptions {
    int repetitions = 3;
    /// Average the per-repetition distances (default) or pool all sampled
    /// points across repetitions into one distance.
    bool pool_repetitions = false;
    double equal_best_eps = 0.005;
    /// Salts of the per-optimizer RNG streams; swapping them together with
    /// the optimizer arguments mirrors the evaluation exactly.
    std::uint64_t opt1_salt = 1;
    std::uint64_t opt2_salt = 2;
};

/// Runs both optimizers on `h` for `options.repetitions` repetitions, one
/// shared initial population per repetition, and measures how differently
/// they sampled the domain. Deterministic in the rng stream.
BehaviorScore evaluate_pair(const ExprTree& h, const OptimizerConfig& opt1,
                            const OptimizerConfig& opt2, const Domain& domain,
                            const PairOptions& options, const Rng& rng);

/// Same contract for an arbitrary objective (used by baseline comparisons).
BehaviorScore evaluate_pair(const Objective& objective, const OptimizerConfig& opt1,
                            const OptimizerConfig& opt2, const Domain& domain,
                            const PairOptions& options, const Rng& rng);

}  // namespace benchgen

#endif
