#include "benchgen/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace benchgen {

double wasserstein_1d(std::span<const double> u, std::span<const double> v) {
    if (u.empty() || v.empty()) throw std::invalid_argument("empty sample set");

    std::vector<double> us(u.begin(), u.end());
    std::vector<double> vs(v.begin(), v.end());
    std::sort(us.begin(), us.end());
    std::sort(vs.begin(), vs.end());

    // integral of |F_u - F_v| over the merged support
    std::vector<double> all;
    all.reserve(us.size() + vs.size());
    std::merge(us.begin(), us.end(), vs.begin(), vs.end(), std::back_inserter(all));

    double distance = 0.0;
    std::size_t iu = 0, iv = 0;
    for (std::size_t k = 0; k + 1 < all.size(); ++k) {
        while (iu < us.size() && us[iu] <= all[k]) ++iu;
        while (iv < vs.size() && vs[iv] <= all[k]) ++iv;
        const double cdf_u = static_cast<double>(iu) / static_cast<double>(us.size());
        const double cdf_v = static_cast<double>(iv) / static_cast<double>(vs.size());
        distance += std::fabs(cdf_u - cdf_v) * (all[k + 1] - all[k]);
    }
    return distance;
}

double behavioral_distance(std::span<const double> u_points, std::span<const double> v_points,
                           int dimension) {
    if (dimension <= 0) throw std::invalid_argument("dimension must be positive");
    const auto dim = static_cast<std::size_t>(dimension);
    if (u_points.empty() || v_points.empty()) throw std::invalid_argument("empty point set");
    if (u_points.size() % dim != 0 || v_points.size() % dim != 0)
        throw std::invalid_argument("point data does not match dimension");

    const std::size_t nu = u_points.size() / dim;
    const std::size_t nv = v_points.size() / dim;
    std::vector<double> cu(nu), cv(nv);
    double total = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
        for (std::size_t i = 0; i < nu; ++i) cu[i] = u_points[i * dim + d];
        for (std::size_t i = 0; i < nv; ++i) cv[i] = v_points[i * dim + d];
        total += wasserstein_1d(cu, cv);
    }
    return total / static_cast<double>(dimension);
}

namespace {

bool all_finite(std::span<const double> xs) {
    for (double x : xs)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

BehaviorScore evaluate_pair(const Objective& objective, const OptimizerConfig& opt1,
                            const OptimizerConfig& opt2, const Domain& domain,
                            const PairOptions& options, const Rng& rng) {
    if (options.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");

    BehaviorScore score;
    score.best_f1 = std::numeric_limits<double>::infinity();
    score.best_f2 = std::numeric_limits<double>::infinity();

    std::vector<double> pooled_u, pooled_v;
    double d_sum = 0.0;

    for (int k = 0; k < options.repetitions; ++k) {
        const Rng rep = rng.derive(static_cast<std::uint64_t>(k));
        Rng init_rng = rep.derive(0);
        const InitialPopulation shared =
            random_population(init_rng, domain, std::max(opt1.population_size,
                                                         opt2.population_size));
        auto slice = [&](int size) {
            InitialPopulation part;
            part.dimension = shared.dimension;
            part.points.assign(shared.points.begin(),
                               shared.points.begin() +
                                   static_cast<std::ptrdiff_t>(
                                       static_cast<std::size_t>(size) *
                                       static_cast<std::size_t>(shared.dimension)));
            return part;
        };

        const SolutionTrace trace_u =
            run(opt1, objective, domain, slice(opt1.population_size), rep.derive(options.opt1_salt));
        const SolutionTrace trace_v =
            run(opt2, objective, domain, slice(opt2.population_size), rep.derive(options.opt2_salt));

        if (!all_finite(trace_u.points) || !all_finite(trace_v.points)) score.valid = false;

        score.best_f1 = std::min(score.best_f1, trace_u.best_fitness);
        score.best_f2 = std::min(score.best_f2, trace_v.best_fitness);

        if (options.pool_repetitions) {
            pooled_u.insert(pooled_u.end(), trace_u.points.begin(), trace_u.points.end());
            pooled_v.insert(pooled_v.end(), trace_v.points.begin(), trace_v.points.end());
        } else {
            const double dk =
                score.valid ? behavioral_distance(trace_u.points, trace_v.points, domain.dimension)
                            : std::numeric_limits<double>::quiet_NaN();
            score.rep_distances.push_back(dk);
            d_sum += dk;
        }
    }

    if (options.pool_repetitions) {
        score.d = score.valid
                      ? behavioral_distance(pooled_u, pooled_v, domain.dimension)
                      : std::numeric_limits<double>::quiet_NaN();
    } else {
        score.d = d_sum / options.repetitions;
    }

    if (!std::isfinite(score.d) || !std::isfinite(score.best_f1) || !std::isfinite(score.best_f2))
        score.valid = false;
    score.equal_best = std::fabs(score.best_f1 - score.best_f2) <= options.equal_best_eps;
    return score;
}

BehaviorScore evaluate_pair(const ExprTree& h, const OptimizerConfig& opt1,
                            const OptimizerConfig& opt2, const Domain& domain,
                            const PairOptions& options, const Rng& rng) {
    return evaluate_pair(make_objective(h), opt1, opt2, domain, options, rng);
}

}  // namespace benchgen
