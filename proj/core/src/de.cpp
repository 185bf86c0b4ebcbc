#include <algorithm>
#include <cstddef>

#include "benchgen/optim.hpp"

namespace benchgen {

namespace {

// index in [0, n) distinct from every entry of `taken`
int distinct_index(Rng& rng, int n, std::initializer_list<int> taken) {
    for (;;) {
        int r = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(n)));
        bool clash = false;
        for (int t : taken)
            if (r == t) clash = true;
        if (!clash) return r;
    }
}

}  // namespace

void de_step(Population& pop, double f, double cr, Rng& rng, const Domain& domain,
             TraceRecorder& recorder) {
    const int n = pop.size();
    const int dim = pop.dimension;
    std::vector<double> trial(static_cast<std::size_t>(dim));
    // next generation is assembled aside so every mutant draws from the
    // current one
    std::vector<double> next_x = pop.x;
    std::vector<double> next_f = pop.f;

    for (int i = 0; i < n && !recorder.exhausted(); ++i) {
        int r1 = distinct_index(rng, n, {i});
        int r2 = distinct_index(rng, n, {i, r1});
        int r3 = distinct_index(rng, n, {i, r1, r2});
        auto x1 = pop.row(r1);
        auto x2 = pop.row(r2);
        auto x3 = pop.row(r3);
        auto parent = pop.row(i);

        // rand/1 mutant with binomial crossover; jrand guarantees at least
        // one mutant coordinate survives.
        const int jrand = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(dim)));
        for (int j = 0; j < dim; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            if (j == jrand || rng.uniform01() < cr) {
                double y = x1[ju] + f * (x2[ju] - x3[ju]);
                trial[ju] = std::clamp(y, domain.lower, domain.upper);
            } else {
                trial[ju] = parent[ju];
            }
        }

        double ft = recorder.evaluate(trial);
        if (ft <= pop.f[static_cast<std::size_t>(i)]) {
            std::copy(trial.begin(), trial.end(),
                      next_x.begin() + static_cast<std::ptrdiff_t>(
                                           static_cast<std::size_t>(i) *
                                           static_cast<std::size_t>(dim)));
            next_f[static_cast<std::size_t>(i)] = ft;
        }
    }

    pop.x = std::move(next_x);
    pop.f = std::move(next_f);
}

}  // namespace benchgen
