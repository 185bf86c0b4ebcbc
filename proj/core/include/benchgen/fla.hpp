#ifndef BENCHGEN_FLA_HPP
#define BENCHGEN_FLA_HPP

#include <span>

#include "benchgen/expr.hpp"
#include "benchgen/optim.hpp"
#include "benchgen/rng.hpp"

namespace benchgen {

inline constexpr int kFdcBins = 20;
inline constexpr int kNeutralityBins = 20;
inline constexpr int kArchiveCells = kFdcBins * kNeutralityBins * 2;

/// Archive cell address: fdc bin x neutrality bin x equal-best layer.
struct BinIndex {
    int i = 0;  // fdc, [0, 19]
    int j = 0;  // neutrality, [0, 19]
    int k = 0;  // equal-best flag, {0, 1}

    int flat() const { return (i * kNeutralityBins + j) * 2 + k; }
    friend bool operator==(const BinIndex&, const BinIndex&) = default;
};

/// Maps descriptor values to their archive cell by floor-then-clamp.
/// Throws std::invalid_argument on non-finite input.
BinIndex to_bin(double fdc, double neutrality, bool equal_best);

struct FdcResult {
    double value = 0.0;
    bool degenerate = false;  // zero variance in fitness or distance
};

/// Fitness-distance correlation of pre-sampled data. The reference optimum
/// is the best (lowest fitness) sample; distances are Euclidean. Returns
/// value 0 with degenerate=true when either variance vanishes, and NaN when
/// the fitness sample contains non-finite values.
FdcResult fdc_from_samples(std::span<const double> points, std::span<const double> fitnesses,
                           int dimension);

/// FDC from n uniform samples of the domain.
FdcResult fdc(const Objective& h, const Domain& domain, int n_samples, Rng& rng);

/// Fraction of consecutive random-walk steps whose fitness difference is
/// strictly below eps.
double neutrality_from_fitnesses(std::span<const double> walk_fitnesses, double eps);

/// Random walk of `steps` points: start uniform, each coordinate then
/// perturbed uniformly within 10% of the domain range and clamped.
double neutrality(const Objective& h, const Domain& domain, int steps, double eps, Rng& rng);

struct DescriptorVector {
    double fdc = 0.0;
    double neutrality = 0.0;
    bool equal_best = false;
    BinIndex bin;
};

/// Convenience: both descriptors plus the cell address. The two metrics
/// consume independent sub-streams of `rng`. Throws when a descriptor
/// comes out non-finite.
DescriptorVector compute_descriptors(const Objective& h, const Domain& domain, int fdc_samples,
                                     int walk_steps, double eps, bool equal_best, const Rng& rng);

}  // namespace benchgen

#endif
