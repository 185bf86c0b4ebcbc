#include "benchgen/fla.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace benchgen {

BinIndex to_bin(double fdc, double neutrality, bool equal_best) {
    if (!std::isfinite(fdc) || !std::isfinite(neutrality))
        throw std::invalid_argument("undefined descriptor");
    const int i = std::clamp(static_cast<int>(std::floor((fdc + 1.0) / 2.0 * kFdcBins)), 0,
                             kFdcBins - 1);
    const int j = std::clamp(static_cast<int>(std::floor(neutrality * kNeutralityBins)), 0,
                             kNeutralityBins - 1);
    return BinIndex{i, j, equal_best ? 1 : 0};
}

FdcResult fdc_from_samples(std::span<const double> points, std::span<const double> fitnesses,
                           int dimension) {
    if (dimension <= 0) throw std::invalid_argument("dimension must be positive");
    const auto dim = static_cast<std::size_t>(dimension);
    const std::size_t n = fitnesses.size();
    if (n < 2 || points.size() != n * dim)
        throw std::invalid_argument("need at least two samples with matching dimension");

    for (double f : fitnesses)
        if (!std::isfinite(f)) return {std::numeric_limits<double>::quiet_NaN(), false};

    // reference optimum: best sample (minimization)
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (fitnesses[i] < fitnesses[best]) best = i;
    const double* ref = points.data() + best * dim;

    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            const double delta = points[i * dim + d] - ref[d];
            acc += delta * delta;
        }
        dist[i] = std::sqrt(acc);
    }

    double f_mean = 0.0, d_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        f_mean += fitnesses[i];
        d_mean += dist[i];
    }
    f_mean /= static_cast<double>(n);
    d_mean /= static_cast<double>(n);

    double cov = 0.0, f_var = 0.0, d_var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double df = fitnesses[i] - f_mean;
        const double dd = dist[i] - d_mean;
        cov += df * dd;
        f_var += df * df;
        d_var += dd * dd;
    }
    if (f_var <= 0.0 || d_var <= 0.0) return {0.0, true};
    const double r = cov / std::sqrt(f_var * d_var);
    // guard rounding at the boundary of the correlation range
    return {std::clamp(r, -1.0, 1.0), false};
}

FdcResult fdc(const Objective& h, const Domain& domain, int n_samples, Rng& rng) {
    if (n_samples < 2) throw std::invalid_argument("fdc needs at least two samples");
    const auto dim = static_cast<std::size_t>(domain.dimension);
    std::vector<double> points(static_cast<std::size_t>(n_samples) * dim);
    std::vector<double> fitnesses(static_cast<std::size_t>(n_samples));
    std::vector<double> x(dim);
    for (int i = 0; i < n_samples; ++i) {
        for (std::size_t d = 0; d < dim; ++d) {
            x[d] = rng.uniform(domain.lower, domain.upper);
            points[static_cast<std::size_t>(i) * dim + d] = x[d];
        }
        fitnesses[static_cast<std::size_t>(i)] = h(x);
    }
    return fdc_from_samples(points, fitnesses, domain.dimension);
}

double neutrality_from_fitnesses(std::span<const double> walk_fitnesses, double eps) {
    if (walk_fitnesses.size() < 2)
        throw std::invalid_argument("neutrality needs a walk of at least two points");
    std::size_t neutral = 0;
    for (std::size_t i = 0; i + 1 < walk_fitnesses.size(); ++i)
        if (std::fabs(walk_fitnesses[i] - walk_fitnesses[i + 1]) < eps) ++neutral;
    return static_cast<double>(neutral) / static_cast<double>(walk_fitnesses.size() - 1);
}

double neutrality(const Objective& h, const Domain& domain, int steps, double eps, Rng& rng) {
    if (steps < 2) throw std::invalid_argument("neutrality needs at least two walk points");
    const auto dim = static_cast<std::size_t>(domain.dimension);
    const double step_scale = 0.1 * domain.range();

    std::vector<double> x(dim);
    for (std::size_t d = 0; d < dim; ++d) x[d] = rng.uniform(domain.lower, domain.upper);

    std::vector<double> fitnesses;
    fitnesses.reserve(static_cast<std::size_t>(steps));
    fitnesses.push_back(h(x));
    for (int i = 1; i < steps; ++i) {
        for (std::size_t d = 0; d < dim; ++d)
            x[d] = std::clamp(x[d] + rng.uniform(-step_scale, step_scale), domain.lower,
                              domain.upper);
        fitnesses.push_back(h(x));
    }
    return neutrality_from_fitnesses(fitnesses, eps);
}

DescriptorVector compute_descriptors(const Objective& h, const Domain& domain, int fdc_samples,
                                     int walk_steps, double eps, bool equal_best, const Rng& rng) {
    Rng fdc_rng = rng.derive(0);
    Rng walk_rng = rng.derive(1);
    DescriptorVector out;
    out.fdc = fdc(h, domain, fdc_samples, fdc_rng).value;
    out.neutrality = neutrality(h, domain, walk_steps, eps, walk_rng);
    out.equal_best = equal_best;
    out.bin = to_bin(out.fdc, out.neutrality, equal_best);  // throws on non-finite
    return out;
}

}  // namespace benchgen
