#include <algorithm>
#include <cmath>
#include <cstddef>

#include "benchgen/optim.hpp"

namespace benchgen {

ShadeState shade_init(Population pop, int history, double p_max) {
    ShadeState state;
    state.pop = std::move(pop);
    state.memory_f.assign(static_cast<std::size_t>(history), 0.5);
    state.memory_cr.assign(static_cast<std::size_t>(history), 0.5);
    state.memory_pos = 0;
    state.p_max = p_max;
    return state;
}

namespace {

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

void shade_step(ShadeState& state, Rng& rng, const Domain& domain, TraceRecorder& recorder) {
    Population& pop = state.pop;
    const int n = pop.size();
    const int dim = pop.dimension;

    // fitness ranking for pbest selection
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return pop.f[static_cast<std::size_t>(a)] < pop.f[static_cast<std::size_t>(b)];
    });

    std::vector<double> trial(static_cast<std::size_t>(dim));
    std::vector<double> next_x = pop.x;
    std::vector<double> next_f = pop.f;
    std::vector<double> success_f, success_cr, success_delta;
    std::vector<double> replaced_parents;  // appended to the external archive

    const double p_min = 2.0 / n;
    const std::size_t h = state.memory_f.size();

    for (int i = 0; i < n && !recorder.exhausted(); ++i) {
        const std::size_t r = rng.uniform_index(h);

        double cr = std::clamp(rng.normal(state.memory_cr[r], 0.1), 0.0, 1.0);
        double f;
        do {
            f = rng.cauchy(state.memory_f[r], 0.1);
        } while (f <= 0.0);
        f = std::min(f, 1.0);

        // current-to-pbest/1: pbest drawn from the ceil(p*n) best members
        const double p = rng.uniform(p_min, state.p_max);
        const int top = std::max(1, static_cast<int>(std::ceil(p * n)));
        const int pbest = order[rng.uniform_index(static_cast<std::size_t>(top))];

        const int r1 = distinct_index(rng, n, {i});
        const int union_size = n + state.archive_size();
        int r2;
        do {
            r2 = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(union_size)));
        } while (r2 == i || r2 == r1);
        const double* x_r2 = r2 < n ? pop.row(r2).data()
                                    : state.archive.data() +
                                          static_cast<std::size_t>(r2 - n) *
                                              static_cast<std::size_t>(dim);

        auto parent = pop.row(i);
        auto x_pbest = pop.row(pbest);
        auto x_r1 = pop.row(r1);
        const int jrand = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(dim)));
        for (int j = 0; j < dim; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            if (j == jrand || rng.uniform01() < cr) {
                double y = parent[ju] + f * (x_pbest[ju] - parent[ju]) +
                           f * (x_r1[ju] - x_r2[ju]);
                trial[ju] = std::clamp(y, domain.lower, domain.upper);
            } else {
                trial[ju] = parent[ju];
            }
        }

        const double ft = recorder.evaluate(trial);
        const double fp = pop.f[static_cast<std::size_t>(i)];
        if (ft < fp) {
            double delta = fp - ft;
            // an infinite improvement (parent at +inf) would turn the memory
            // weights into NaN; cap it instead
            if (!std::isfinite(delta)) delta = 1e300 / n;
            success_f.push_back(f);
            success_cr.push_back(cr);
            success_delta.push_back(delta);
            replaced_parents.insert(replaced_parents.end(), parent.begin(), parent.end());
        }
        if (ft <= fp) {
            std::copy(trial.begin(), trial.end(),
                      next_x.begin() + static_cast<std::ptrdiff_t>(
                                           static_cast<std::size_t>(i) *
                                           static_cast<std::size_t>(dim)));
            next_f[static_cast<std::size_t>(i)] = ft;
        }
    }

    pop.x = std::move(next_x);
    pop.f = std::move(next_f);

    // memory update: weighted Lehmer mean for F, weighted arithmetic for CR
    if (!success_f.empty()) {
        double dsum = 0.0;
        for (double d : success_delta) dsum += d;
        double lehmer_num = 0.0, lehmer_den = 0.0, cr_mean = 0.0;
        for (std::size_t k = 0; k < success_f.size(); ++k) {
            const double w = success_delta[k] / dsum;
            lehmer_num += w * success_f[k] * success_f[k];
            lehmer_den += w * success_f[k];
            cr_mean += w * success_cr[k];
        }
        state.memory_f[static_cast<std::size_t>(state.memory_pos)] = lehmer_num / lehmer_den;
        state.memory_cr[static_cast<std::size_t>(state.memory_pos)] = cr_mean;
        state.memory_pos = (state.memory_pos + 1) % static_cast<int>(h);
    }

    // defeated parents join the external archive; random eviction keeps it
    // at population capacity
    state.archive.insert(state.archive.end(), replaced_parents.begin(), replaced_parents.end());
    while (state.archive_size() > n) {
        const std::size_t victim =
            rng.uniform_index(static_cast<std::size_t>(state.archive_size()));
        const auto begin = state.archive.begin() +
                           static_cast<std::ptrdiff_t>(victim * static_cast<std::size_t>(dim));
        state.archive.erase(begin, begin + dim);
    }
}

}  // namespace benchgen
