#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

#include "benchgen/optim.hpp"

namespace benchgen {

namespace {

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Dimensions here
// are tiny (2 during evolution, 10 in validation), so this converges in a
// handful of sweeps. basis comes out column-major: column k is the
// eigenvector of eigenvalue[k].
void symmetric_eig(int n, const std::vector<double>& m, std::vector<double>& eigenvalues,
                   std::vector<double>& basis) {
    const auto nn = static_cast<std::size_t>(n);
    std::vector<double> a = m;
    basis.assign(nn * nn, 0.0);
    for (int i = 0; i < n; ++i) basis[static_cast<std::size_t>(i) * nn + static_cast<std::size_t>(i)] = 1.0;

    auto at = [&](int r, int c) -> double& {
        return a[static_cast<std::size_t>(r) * nn + static_cast<std::size_t>(c)];
    };
    auto bt = [&](int r, int c) -> double& {
        return basis[static_cast<std::size_t>(r) * nn + static_cast<std::size_t>(c)];
    };

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
        if (off < 1e-30) break;

        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::fabs(at(p, q)) < 1e-300) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double bkp = bt(k, p), bkq = bt(k, q);
                    bt(k, p) = c * bkp - s * bkq;
                    bt(k, q) = s * bkp + c * bkq;
                }
            }
        }
    }

    eigenvalues.resize(nn);
    for (int i = 0; i < n; ++i)
        eigenvalues[static_cast<std::size_t>(i)] = at(i, i);
}

// refresh B and D = sqrt(eigenvalues) from C, flooring eigenvalues so the
// factorization never collapses
void update_eigensystem(CmaesState& st) {
    const auto n = static_cast<std::size_t>(st.dimension);
    std::vector<double> evals;
    symmetric_eig(st.dimension, st.cov, evals, st.eig_basis);
    double max_ev = 0.0;
    for (double v : evals) max_ev = std::max(max_ev, v);
    if (!(max_ev > 0.0) || !std::isfinite(max_ev)) {
        // degenerate covariance: reset to identity
        std::fill(st.cov.begin(), st.cov.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) st.cov[i * n + i] = 1.0;
        symmetric_eig(st.dimension, st.cov, evals, st.eig_basis);
        max_ev = 1.0;
    }
    const double floor_ev = 1e-12 * max_ev;
    st.eig_scale.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        st.eig_scale[i] = std::sqrt(std::max(evals[i], floor_ev));
}

}  // namespace

CmaesState cmaes_init(int dimension, std::span<const double> mean0, double sigma0, int lambda) {
    CmaesState st;
    st.dimension = dimension;
    st.lambda = lambda;
    st.mu = lambda / 2;
    const double nd = dimension;

    // log-rank recombination weights
    st.weights.resize(static_cast<std::size_t>(st.mu));
    double wsum = 0.0;
    for (int i = 0; i < st.mu; ++i) {
        st.weights[static_cast<std::size_t>(i)] =
            std::log(st.lambda / 2.0 + 0.5) - std::log(i + 1.0);
        wsum += st.weights[static_cast<std::size_t>(i)];
    }
    double w2sum = 0.0;
    for (double& w : st.weights) {
        w /= wsum;
        w2sum += w * w;
    }
    st.mu_eff = 1.0 / w2sum;

    st.c_sigma = (st.mu_eff + 2.0) / (nd + st.mu_eff + 5.0);
    st.d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((st.mu_eff - 1.0) / (nd + 1.0)) - 1.0) +
                 st.c_sigma;
    st.c_c = (4.0 + st.mu_eff / nd) / (nd + 4.0 + 2.0 * st.mu_eff / nd);
    st.c_1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + st.mu_eff);
    st.c_mu = std::min(1.0 - st.c_1, 2.0 * (st.mu_eff - 2.0 + 1.0 / st.mu_eff) /
                                         ((nd + 2.0) * (nd + 2.0) + st.mu_eff));
    st.chi_n = std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));

    st.mean.assign(mean0.begin(), mean0.end());
    st.sigma = sigma0;
    const auto n = static_cast<std::size_t>(dimension);
    st.cov.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) st.cov[i * n + i] = 1.0;
    st.path_sigma.assign(n, 0.0);
    st.path_c.assign(n, 0.0);
    update_eigensystem(st);
    return st;
}

void cmaes_step(CmaesState& st, Rng& rng, const Domain& domain, TraceRecorder& recorder) {
    const int n = st.dimension;
    const auto nu = static_cast<std::size_t>(n);
    const int count = std::min(st.lambda, recorder.remaining());

    // y_i = B D z_i ~ N(0, C); x_i = m + sigma y_i
    std::vector<double> ys(static_cast<std::size_t>(count) * nu);
    std::vector<double> fitness(static_cast<std::size_t>(count));
    std::vector<double> x(nu), z(nu), clamped(nu);
    for (int k = 0; k < count; ++k) {
        for (std::size_t i = 0; i < nu; ++i) z[i] = st.eig_scale[i] * rng.normal();
        double* y = ys.data() + static_cast<std::size_t>(k) * nu;
        for (std::size_t r = 0; r < nu; ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < nu; ++c) acc += st.eig_basis[r * nu + c] * z[c];
            y[r] = acc;
            x[r] = st.mean[r] + st.sigma * acc;
            clamped[r] = std::clamp(x[r], domain.lower, domain.upper);
        }
        fitness[static_cast<std::size_t>(k)] = recorder.evaluate(clamped);
    }

    // a truncated final generation cannot be ranked against the full
    // weight vector; record only
    if (count < st.lambda) return;

    std::vector<int> order(static_cast<std::size_t>(count));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return fitness[static_cast<std::size_t>(a)] < fitness[static_cast<std::size_t>(b)];
    });

    // weighted mean step in y-space
    std::vector<double> y_w(nu, 0.0);
    for (int r = 0; r < st.mu; ++r) {
        const double* y = ys.data() + static_cast<std::size_t>(order[static_cast<std::size_t>(r)]) * nu;
        const double w = st.weights[static_cast<std::size_t>(r)];
        for (std::size_t i = 0; i < nu; ++i) y_w[i] += w * y[i];
    }
    for (std::size_t i = 0; i < nu; ++i) st.mean[i] += st.sigma * y_w[i];

    // conjugate path: ps <- (1-cs) ps + sqrt(cs(2-cs) mu_eff) C^-1/2 y_w
    std::vector<double> c_inv_y(nu, 0.0);
    for (std::size_t r = 0; r < nu; ++r) {
        // C^-1/2 = B D^-1 B^T
        double proj = 0.0;
        for (std::size_t i = 0; i < nu; ++i) proj += st.eig_basis[i * nu + r] * y_w[i];
        c_inv_y[r] = proj / st.eig_scale[r];
    }
    std::vector<double> tmp(nu, 0.0);
    for (std::size_t r = 0; r < nu; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < nu; ++c) acc += st.eig_basis[r * nu + c] * c_inv_y[c];
        tmp[r] = acc;
    }
    const double cs_norm = std::sqrt(st.c_sigma * (2.0 - st.c_sigma) * st.mu_eff);
    double ps_sq = 0.0;
    for (std::size_t i = 0; i < nu; ++i) {
        st.path_sigma[i] = (1.0 - st.c_sigma) * st.path_sigma[i] + cs_norm * tmp[i];
        ps_sq += st.path_sigma[i] * st.path_sigma[i];
    }

    ++st.generation;
    const double ps_norm = std::sqrt(ps_sq);
    const double expected = st.chi_n;
    const bool hsig =
        ps_norm / std::sqrt(1.0 - std::pow(1.0 - st.c_sigma, 2.0 * st.generation)) / expected <
        1.4 + 2.0 / (n + 1.0);

    const double cc_norm = std::sqrt(st.c_c * (2.0 - st.c_c) * st.mu_eff);
    for (std::size_t i = 0; i < nu; ++i)
        st.path_c[i] = (1.0 - st.c_c) * st.path_c[i] + (hsig ? cc_norm * y_w[i] : 0.0);

    // covariance: rank-one (path) + rank-mu (elite samples)
    const double c1a = st.c_1 * (1.0 - (hsig ? 0.0 : 1.0) * st.c_c * (2.0 - st.c_c));
    for (std::size_t r = 0; r < nu; ++r) {
        for (std::size_t c = 0; c < nu; ++c) {
            double rank_mu = 0.0;
            for (int k = 0; k < st.mu; ++k) {
                const double* y =
                    ys.data() + static_cast<std::size_t>(order[static_cast<std::size_t>(k)]) * nu;
                rank_mu += st.weights[static_cast<std::size_t>(k)] * y[r] * y[c];
            }
            st.cov[r * nu + c] = (1.0 - c1a - st.c_mu) * st.cov[r * nu + c] +
                                 st.c_1 * st.path_c[r] * st.path_c[c] + st.c_mu * rank_mu;
        }
    }

    st.sigma *= std::exp((st.c_sigma / st.d_sigma) * (ps_norm / expected - 1.0));
    if (!std::isfinite(st.sigma) || st.sigma <= 0.0) st.sigma = 1e-12;
    for (double& m : st.mean)
        if (!std::isfinite(m)) m = 0.5 * (domain.lower + domain.upper);

    update_eigensystem(st);
}

}  // namespace benchgen
