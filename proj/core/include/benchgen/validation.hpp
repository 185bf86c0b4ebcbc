#ifndef BENCHGEN_VALIDATION_HPP
#define BENCHGEN_VALIDATION_HPP

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "benchgen/expr.hpp"
#include "benchgen/optim.hpp"
#include "benchgen/rng.hpp"

namespace benchgen {

/// D-dimensional extension of a 2-D function: the average of the base
/// function over consecutive coordinate pairs. For D = 2 it reduces to the
/// base function exactly.
class LiftedFunction {
public:
    /// Throws std::invalid_argument when the base uses variables beyond
    /// x0/x1 or dimension < 2.
    LiftedFunction(ExprTree base, int dimension);

    double operator()(std::span<const double> x) const;

    int dimension() const { return dimension_; }
    const ExprTree& base() const { return base_; }

private:
    ExprTree base_;
    CompiledExpr compiled_;
    int dimension_;
};

/// Mean pairwise distance between two best-solution sets, normalized by the
/// domain diameter sqrt(D) * (UB - LB). Points are row-major.
double delta_x(std::span<const double> a_points, std::span<const double> b_points, int dimension,
               const Domain& domain);

/// Mean pairwise |fitness difference| normalized by the joint fitness range;
/// 0 when the range collapses.
double delta_f(std::span<const double> a_fitness, std::span<const double> b_fitness);

struct ValidationReport {
    std::string function_name;  // s-expression or baseline name
    int dimension = 0;
    int repetitions = 0;
    int budget = 0;
    double delta_x = 0.0;
    double delta_f = 0.0;
    std::vector<double> a_points;  // row-major best points, one per repetition
    std::vector<double> a_fitness;
    std::vector<double> b_points;
    std::vector<double> b_fitness;
};

/// Runs each optimizer `repetitions` times with independent initial
/// populations (no sharing between the two optimizers), collects the best
/// solution of every run, and computes the differentiation metrics.
ValidationReport validate(const Objective& objective, const OptimizerConfig& opt1,
                          const OptimizerConfig& opt2, const Domain& domain, int repetitions,
                          int budget, const Rng& rng);

std::string report_to_json(const ValidationReport& report);

/// Classic unshifted test functions: sphere, rastrigin, ackley, rosenbrock,
/// griewank. Dimension-generic. Throws on unknown names.
Objective baseline(std::string_view name);

const std::vector<std::string>& baseline_names();

}  // namespace benchgen

#endif
