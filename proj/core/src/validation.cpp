#include "benchgen/validation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace benchgen {

LiftedFunction::LiftedFunction(ExprTree base, int dimension)
    : base_(std::move(base)), compiled_(base_), dimension_(dimension) {
    if (dimension < 2) throw std::invalid_argument("lifted dimension must be >= 2");
    if (base_.max_variable() > 1)
        throw std::invalid_argument("lifting requires a function of x0 and x1 only");
}

double LiftedFunction::operator()(std::span<const double> x) const {
    double sum = 0.0;
    for (int i = 0; i + 1 < dimension_; ++i) {
        const double pair[2] = {x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i) + 1]};
        sum += compiled_(pair);
    }
    return sum / (dimension_ - 1);
}

double delta_x(std::span<const double> a_points, std::span<const double> b_points, int dimension,
               const Domain& domain) {
    if (dimension <= 0) throw std::invalid_argument("dimension must be positive");
    const auto dim = static_cast<std::size_t>(dimension);
    if (a_points.empty() || b_points.empty()) throw std::invalid_argument("empty best set");
    if (a_points.size() % dim != 0 || b_points.size() % dim != 0)
        throw std::invalid_argument("point data does not match dimension");

    const std::size_t na = a_points.size() / dim;
    const std::size_t nb = b_points.size() / dim;
    double sum = 0.0;
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            double acc = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double delta = a_points[i * dim + d] - b_points[j * dim + d];
                acc += delta * delta;
            }
            sum += std::sqrt(acc);
        }
    }
    const double diameter = std::sqrt(static_cast<double>(dimension)) * domain.range();
    return sum / (static_cast<double>(na) * static_cast<double>(nb)) / diameter;
}

double delta_f(std::span<const double> a_fitness, std::span<const double> b_fitness) {
    if (a_fitness.empty() || b_fitness.empty()) throw std::invalid_argument("empty best set");
    double f_min = a_fitness[0], f_max = a_fitness[0];
    for (double f : a_fitness) {
        f_min = std::min(f_min, f);
        f_max = std::max(f_max, f);
    }
    for (double f : b_fitness) {
        f_min = std::min(f_min, f);
        f_max = std::max(f_max, f);
    }
    if (f_max == f_min) return 0.0;  // indistinguishable bests

    double sum = 0.0;
    for (double fa : a_fitness)
        for (double fb : b_fitness) sum += std::fabs(fa - fb);
    return sum / (static_cast<double>(a_fitness.size()) * static_cast<double>(b_fitness.size())) /
           (f_max - f_min);
}

ValidationReport validate(const Objective& objective, const OptimizerConfig& opt1,
                          const OptimizerConfig& opt2, const Domain& domain, int repetitions,
                          int budget, const Rng& rng) {
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    ValidationReport report;
    report.dimension = domain.dimension;
    report.repetitions = repetitions;
    report.budget = budget;

    auto run_side = [&](const OptimizerConfig& base_config, std::uint64_t salt,
                        std::vector<double>& points, std::vector<double>& fitness) {
        OptimizerConfig config = base_config;
        config.budget = budget;
        for (int k = 0; k < repetitions; ++k) {
            const Rng rep = rng.derive(salt).derive(static_cast<std::uint64_t>(k));
            Rng init_rng = rep.derive(0);
            const InitialPopulation init =
                random_population(init_rng, domain, config.population_size);
            const SolutionTrace trace = run(config, objective, domain, init, rep.derive(1));
            points.insert(points.end(), trace.best_point.begin(), trace.best_point.end());
            fitness.push_back(trace.best_fitness);
        }
    };
    run_side(opt1, 1, report.a_points, report.a_fitness);
    run_side(opt2, 2, report.b_points, report.b_fitness);

    report.delta_x = delta_x(report.a_points, report.b_points, domain.dimension, domain);
    report.delta_f = delta_f(report.a_fitness, report.b_fitness);
    return report;
}

std::string report_to_json(const ValidationReport& report) {
    using ordered = nlohmann::ordered_json;
    ordered j;
    j["function"] = report.function_name;
    j["dimension"] = report.dimension;
    j["repetitions"] = report.repetitions;
    j["budget"] = report.budget;
    j["delta_x"] = report.delta_x;
    j["delta_f"] = report.delta_f;
    const auto dim = static_cast<std::size_t>(report.dimension);
    auto side = [&](const std::vector<double>& points, const std::vector<double>& fitness) {
        ordered list = ordered::array();
        for (std::size_t i = 0; i < fitness.size(); ++i) {
            ordered entry;
            entry["point"] = std::vector<double>(points.begin() + static_cast<std::ptrdiff_t>(i * dim),
                                                 points.begin() +
                                                     static_cast<std::ptrdiff_t>((i + 1) * dim));
            entry["fitness"] = fitness[i];
            list.push_back(std::move(entry));
        }
        return list;
    };
    j["A"] = side(report.a_points, report.a_fitness);
    j["B"] = side(report.b_points, report.b_fitness);
    return j.dump(2) + "\n";
}

namespace {

double sphere(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double rastrigin(std::span<const double> x) {
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
    return s;
}

double ackley(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    double sq = 0.0, cs = 0.0;
    for (double v : x) {
        sq += v * v;
        cs += std::cos(2.0 * std::numbers::pi * v);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) + 20.0 +
           std::numbers::e;
}

double rosenbrock(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        s += 100.0 * a * a + b * b;
    }
    return s;
}

double griewank(std::span<const double> x) {
    double sum = 0.0, prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += x[i] * x[i] / 4000.0;
        prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return sum - prod + 1.0;
}

}  // namespace

Objective baseline(std::string_view name) {
    if (name == "sphere") return sphere;
    if (name == "rastrigin") return rastrigin;
    if (name == "ackley") return ackley;
    if (name == "rosenbrock") return rosenbrock;
    if (name == "griewank") return griewank;
    throw std::invalid_argument("unknown baseline '" + std::string(name) + "'");
}

const std::vector<std::string>& baseline_names() {
    static const std::vector<std::string> names = {"sphere", "rastrigin", "ackley", "rosenbrock",
                                                   "griewank"};
    return names;
}

}  // namespace benchgen
