#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <limits>
#include <vector>

namespace lagtori {

struct SimplexSearchOptions {
    double initial_step = 0.05;
    double x_tol = 1e-11;
    double f_tol = 1e-15;
    int max_iter = 5000;
    double improvement_rtol = 1e-13;  // smaller decreases of the best value are not counted
};

template <int N>
struct SimplexSearchResult {
    Eigen::Matrix<double, N, 1> x;
    double value = 0.0;
    int iterations = 0;
    int improvements = 0;            // iterations that lowered the best value beyond rounding
    std::vector<double> best_trace;  // best value after every iteration, starting with the initial vertex
};

// Nelder-Mead polytope descent with standard coefficients (1, 2, 1/2, 1/2).
// f may return +inf to mark infeasible points.
template <int N, typename Fn>
SimplexSearchResult<N> simplex_search(Fn&& f, const Eigen::Matrix<double, N, 1>& x0,
                                      const SimplexSearchOptions& opt = {}) {
    using Vec = Eigen::Matrix<double, N, 1>;
    std::array<Vec, N + 1> p;
    std::array<double, N + 1> fv;
    p[0] = x0;
    for (int i = 0; i < N; ++i) {
        p[i + 1] = x0;
        p[i + 1][i] += opt.initial_step;
    }
    for (int i = 0; i <= N; ++i) fv[i] = f(p[i]);

    SimplexSearchResult<N> res;
    res.best_trace.push_back(fv[0]);
    double best = fv[0];

    auto order = [&] {
        std::array<int, N + 1> idx;
        for (int i = 0; i <= N; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
        auto pp = p;
        auto ff = fv;
        for (int i = 0; i <= N; ++i) p[i] = pp[idx[i]], fv[i] = ff[idx[i]];
    };

    order();
    int it = 0;
    for (; it < opt.max_iter; ++it) {
        double size = 0.0;
        for (int i = 1; i <= N; ++i) size = std::max(size, (p[i] - p[0]).template lpNorm<Eigen::Infinity>());
        if (size < opt.x_tol && fv[N] - fv[0] <= opt.f_tol * std::max(1.0, std::abs(fv[0]))) break;

        Vec c = Vec::Zero();
        for (int i = 0; i < N; ++i) c += p[i];
        c /= N;
        Vec xr = c + (c - p[N]);
        double fr = f(xr);
        if (fr < fv[0]) {
            Vec xe = c + 2.0 * (c - p[N]);
            double fe = f(xe);
            if (fe < fr) p[N] = xe, fv[N] = fe;
            else p[N] = xr, fv[N] = fr;
        } else if (fr < fv[N - 1]) {
            p[N] = xr, fv[N] = fr;
        } else {
            bool outside = fr < fv[N];
            Vec xc = outside ? Vec(c + 0.5 * (xr - c)) : Vec(c + 0.5 * (p[N] - c));
            double fc = f(xc);
            if (fc < (outside ? fr : fv[N])) {
                p[N] = xc, fv[N] = fc;
            } else {
                for (int i = 1; i <= N; ++i) {
                    p[i] = p[0] + 0.5 * (p[i] - p[0]);
                    fv[i] = f(p[i]);
                }
            }
        }
        order();
        if (fv[0] < best - opt.improvement_rtol * std::abs(best)) {
            best = fv[0];
            ++res.improvements;
        }
        res.best_trace.push_back(fv[0]);
    }
    res.x = p[0];
    res.value = fv[0];
    res.iterations = it;
    return res;
}

}  // namespace lagtori
