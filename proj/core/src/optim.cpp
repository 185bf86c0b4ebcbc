#include "benchgen/optim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace benchgen {

std::string_view algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::de: return "de";
        case Algorithm::shade: return "shade";
        case Algorithm::cmaes: return "cmaes";
    }
    return "";
}

Algorithm algorithm_from_name(std::string_view name) {
    if (name == "de") return Algorithm::de;
    if (name == "shade") return Algorithm::shade;
    if (name == "cmaes") return Algorithm::cmaes;
    throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

void OptimizerConfig::validate() const {
    if (population_size < 1) throw std::invalid_argument("population_size must be positive");
    if (budget < population_size)
        throw std::invalid_argument("budget must be at least population_size");
    if ((algorithm == Algorithm::de || algorithm == Algorithm::shade) && population_size < 4)
        throw std::invalid_argument("DE/SHADE require population_size >= 4");
    if (algorithm == Algorithm::de && (de_cr < 0.0 || de_cr > 1.0))
        throw std::invalid_argument("CR must be in [0,1]");
    if (algorithm == Algorithm::shade &&
        (shade_history < 1 || shade_p_max <= 0.0 || shade_p_max > 1.0))
        throw std::invalid_argument("SHADE requires H >= 1 and p_max in (0,1]");
    if (algorithm == Algorithm::cmaes && cmaes_sigma0 <= 0.0)
        throw std::invalid_argument("sigma0 must be positive");
}

Objective make_objective(const ExprTree& tree) {
    return [compiled = CompiledExpr(tree)](std::span<const double> x) { return compiled(x); };
}

InitialPopulation random_population(Rng& rng, const Domain& domain, int size) {
    InitialPopulation init;
    init.dimension = domain.dimension;
    init.points.reserve(static_cast<std::size_t>(size) *
                        static_cast<std::size_t>(domain.dimension));
    for (int i = 0; i < size; ++i)
        for (int d = 0; d < domain.dimension; ++d)
            init.points.push_back(rng.uniform(domain.lower, domain.upper));
    return init;
}

double TraceRecorder::evaluate(std::span<const double> x) {
    double f = objective_(x);
    if (!std::isfinite(f)) f = std::numeric_limits<double>::infinity();
    trace_.points.insert(trace_.points.end(), x.begin(), x.end());
    trace_.fitnesses.push_back(f);
    return f;
}

SolutionTrace TraceRecorder::take() {
    std::size_t best = 0;
    for (std::size_t i = 1; i < trace_.size(); ++i)
        if (trace_.fitnesses[i] < trace_.fitnesses[best]) best = i;
    if (!trace_.fitnesses.empty()) {
        trace_.best_fitness = trace_.fitnesses[best];
        auto pt = trace_.point(best);
        trace_.best_point.assign(pt.begin(), pt.end());
    }
    return std::move(trace_);
}

double Population::best() const {
    double b = std::numeric_limits<double>::infinity();
    for (double v : f) b = std::min(b, v);
    return b;
}

std::string trace_to_csv(const SolutionTrace& trace) {
    std::ostringstream out;
    out.precision(17);
    out << "eval_index";
    for (int d = 0; d < trace.dimension; ++d) out << ",x_" << d;
    out << ",fitness\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out << i;
        for (double v : trace.point(i)) out << ',' << v;
        out << ',' << trace.fitnesses[i] << '\n';
    }
    return out.str();
}

namespace {

Population evaluate_initial(const InitialPopulation& init, TraceRecorder& recorder) {
    Population pop;
    pop.dimension = init.dimension;
    pop.x = init.points;
    pop.f.reserve(static_cast<std::size_t>(init.size()));
    for (int i = 0; i < init.size() && !recorder.exhausted(); ++i)
        pop.f.push_back(recorder.evaluate(init.point(i)));
    pop.x.resize(pop.f.size() * static_cast<std::size_t>(init.dimension));
    return pop;
}

}  // namespace

SolutionTrace run(const OptimizerConfig& config, const Objective& objective,
                  const Domain& domain, const InitialPopulation& init, Rng rng) {
    config.validate();
    if (init.size() != config.population_size)
        throw std::invalid_argument("initial population size does not match config");
    if (init.dimension != domain.dimension)
        throw std::invalid_argument("initial population dimension does not match domain");

    TraceRecorder recorder(objective, domain.dimension, config.budget);
    switch (config.algorithm) {
        case Algorithm::de: {
            Population pop = evaluate_initial(init, recorder);
            while (!recorder.exhausted())
                de_step(pop, config.de_f, config.de_cr, rng, domain, recorder);
            break;
        }
        case Algorithm::shade: {
            ShadeState state =
                shade_init(evaluate_initial(init, recorder), config.shade_history,
                           config.shade_p_max);
            while (!recorder.exhausted()) shade_step(state, rng, domain, recorder);
            break;
        }
        case Algorithm::cmaes: {
            // CMA-ES does not consume the shared population; its initial mean
            // is the population centroid.
            std::vector<double> mean(static_cast<std::size_t>(domain.dimension), 0.0);
            for (int i = 0; i < init.size(); ++i) {
                auto pt = init.point(i);
                for (int d = 0; d < domain.dimension; ++d)
                    mean[static_cast<std::size_t>(d)] += pt[static_cast<std::size_t>(d)];
            }
            for (double& m : mean) m /= init.size();
            CmaesState state =
                cmaes_init(domain.dimension, mean, config.cmaes_sigma0, config.population_size);
            while (!recorder.exhausted()) cmaes_step(state, rng, domain, recorder);
            break;
        }
    }
    return recorder.take();
}

}  // namespace benchgen
