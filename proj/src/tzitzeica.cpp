#include "lagtori/tzitzeica.hpp"

#include "lagtori/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace lagtori {

namespace {

// Spectral operators of one grid, flattened to vectors in column-major sample order.
struct GridOps {
    Grid g;
    RArray lap;
    RArray inv_prec;  // 1 / (12 - lap), the symbol of (12 - Delta)^{-1}

    explicit GridOps(const Grid& grid) : g(grid), lap(laplacian_symbol(grid)) { inv_prec = 1.0 / (12.0 - lap); }

    Eigen::Index size() const { return Eigen::Index(g.n1) * g.n2; }

    Eigen::VectorXd filter(const Eigen::VectorXd& x, const RArray& sym) const {
        Eigen::Map<const RArray> a(x.data(), g.n1, g.n2);
        CArray h = fft2(a.cast<cplx>());
        h *= sym.cast<cplx>();
        RArray out = ifft2(h).real();
        return Eigen::Map<const Eigen::VectorXd>(out.data(), out.size());
    }
    Eigen::VectorXd laplace(const Eigen::VectorXd& x) const { return filter(x, lap); }
    Eigen::VectorXd precondition(const Eigen::VectorXd& x) const { return filter(x, inv_prec); }
};

Eigen::VectorXd flat(const RealField& f) { return Eigen::Map<const Eigen::VectorXd>(f.values.data(), f.values.size()); }

RealField unflat(const Grid& g, const Eigen::VectorXd& x) { return {g, Eigen::Map<const RArray>(x.data(), g.n1, g.n2)}; }

Eigen::VectorXd potential(const Eigen::VectorXd& v) {
    return (8.0 * (-2.0 * v.array()).exp() + 4.0 * v.array().exp()).matrix();
}

Eigen::VectorXd residual_vec(const GridOps& ops, const Eigen::VectorXd& v) {
    return ops.laplace(v) - (4.0 * ((-2.0 * v.array()).exp() - v.array().exp())).matrix();
}

double sup(const Eigen::VectorXd& x) {
    if (!x.allFinite()) return std::numeric_limits<double>::infinity();
    return x.cwiseAbs().maxCoeff();
}

double half_range(const RealField& v) { return 0.5 * (v.values.maxCoeff() - v.values.minCoeff()); }

}  // namespace

const char* to_string(NewtonStatus s) {
    switch (s) {
        case NewtonStatus::converged: return "converged";
        case NewtonStatus::diverged: return "diverged";
        case NewtonStatus::singular: return "singular";
        case NewtonStatus::max_iter: return "max_iter";
    }
    return "unknown";
}

RealField residual(const RealField& v) {
    return {v.grid, laplacian(v).values - 4.0 * ((-2.0 * v.values).exp() - v.values.exp())};
}

RealField jacobian_apply(const RealField& v, const RealField& w) {
    detail::require_same_grid(v.grid, w.grid);
    return {v.grid, laplacian(w).values + (8.0 * (-2.0 * v.values).exp() + 4.0 * v.values.exp()) * w.values};
}

double bifurcation_period(int j, int l) {
    if (j == 0 && l == 0) throw std::invalid_argument("bifurcation_period: mode (0,0) is not a bifurcation direction");
    return 2.0 * pi * std::sqrt(double(j * j + l * l)) / std::sqrt(12.0);
}

std::pair<double, double> bifurcation_periods(int j, int l, double aspect) {
    if (j == 0 && l == 0) throw std::invalid_argument("bifurcation_periods: mode (0,0) is not a bifurcation direction");
    if (!(aspect > 0)) throw std::invalid_argument("bifurcation_periods: aspect must be positive");
    // (2 pi j / L)^2 + (2 pi l / (aspect L))^2 = 12
    const double L = 2.0 * pi * std::sqrt(j * j + l * l / (aspect * aspect)) / std::sqrt(12.0);
    return {L, aspect * L};
}

RealField seed_field(const Grid& g, BranchMode mode, double eps, SeedShape shape) {
    const double a = 2.0 * pi / g.L1, b = 2.0 * pi / g.L2;
    return RealField::sample(g, [&](double x, double y) {
        double s = std::cos(a * mode.j * x + b * mode.l * y);
        if (shape == SeedShape::cross) s += std::cos(-a * mode.l * x + b * mode.j * y);
        return eps * s;
    });
}

TzitzeicaSolution solve_newton(const RealField& v0, const NewtonOptions& opt) {
    const Grid& g = v0.grid;
    if (std::min(g.n1, g.n2) < 32) throw std::invalid_argument("solve_newton: grid must be at least 32 x 32");
    if (!(opt.tol >= 1e-12)) throw std::invalid_argument("solve_newton: tol must be >= 1e-12");
    if (!v0.values.allFinite()) throw std::invalid_argument("solve_newton: seed is not finite");

    GridOps ops(g);
    Eigen::VectorXd v = flat(v0);
    Eigen::VectorXd F = residual_vec(ops, v);
    double r = sup(F);

    TzitzeicaSolution out;
    out.L1 = g.L1;
    out.L2 = g.L2;
    out.residual_history.push_back(r);

    Eigen::VectorXd best = v;
    double best_r = r;
    int growth = 0;
    bool linear_failed = false;
    NewtonStatus status = NewtonStatus::max_iter;

    if (r <= opt.tol) status = NewtonStatus::converged;
    for (int it = 1; status != NewtonStatus::converged && it <= opt.max_iter; ++it) {
        const Eigen::VectorXd c = potential(v);
        auto apply_j = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd { return ops.laplace(w) + c.cwiseProduct(w); };
        auto apply_p = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd { return ops.precondition(w); };
        MinresResult lin = minres(apply_j, apply_p, Eigen::VectorXd(-F), opt.krylov_rtol, opt.krylov_max_iter);
        linear_failed = lin.relative_residual > 1e-6;
        out.iterations = it;

        double alpha = 1.0, rt = 0.0;
        Eigen::VectorXd trial, Ft;
        bool accepted = false;
        for (int bt = 0; bt <= opt.max_backtracks; ++bt, alpha *= 0.5) {
            trial = v + alpha * lin.x;
            Ft = residual_vec(ops, trial);
            rt = sup(Ft);
            if (rt < r) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            trial = v + lin.x;
            Ft = residual_vec(ops, trial);
            rt = sup(Ft);
        }
        growth = rt > r ? growth + 1 : 0;
        v = trial;
        F = Ft;
        r = rt;
        out.residual_history.push_back(r);
        if (r < best_r) {
            best_r = r;
            best = v;
        }
        if (r <= opt.tol) {
            status = NewtonStatus::converged;
        } else if (growth >= 3 || !std::isfinite(r)) {
            status = linear_failed ? NewtonStatus::singular : NewtonStatus::diverged;
            break;
        }
    }
    if (status == NewtonStatus::max_iter && linear_failed) status = NewtonStatus::singular;

    out.status = status;
    out.v = unflat(g, best);
    out.residual_norm = best_r;
    out.amplitude = half_range(out.v);
    return out;
}

Branch continue_branch(BranchMode mode, double L_start, double L_end, int steps, const ContinuationOptions& opt) {
    if (steps < 1) throw std::invalid_argument("continue_branch: steps must be >= 1");
    if (!(L_start > 0 && L_end > 0)) throw std::invalid_argument("continue_branch: periods must be positive");
    bifurcation_period(mode.j, mode.l);

    auto solve_at = [&](const RealField& guess, double L) {
        RealField seed(Grid::square(opt.grid, L), guess.values);
        TzitzeicaSolution s = solve_newton(seed, opt.newton);
        s.mode = mode;
        return s;
    };

    Branch br;
    const Grid g0 = Grid::square(opt.grid, L_start);
    TzitzeicaSolution first = solve_newton(seed_field(g0, mode, opt.eps, opt.shape), opt.newton);
    first.mode = mode;
    if (!first.nontrivial()) {
        br.truncated = true;
        br.flag = first.ok() ? "collapsed" : "seed";
        return br;
    }
    br.solutions.push_back(first);
    if (steps == 1) return br;

    const double nominal = (L_end - L_start) / (steps - 1);
    const double min_step = std::abs(nominal) / opt.min_step_fraction;
    TzitzeicaSolution prev = first;
    double L_prev = L_start;
    for (int i = 1; i < steps; ++i) {
        const double target = L_start + i * nominal;
        double h = target - L_prev;
        while (true) {
            const bool last = std::abs(target - (L_prev + h)) <= 1e-14 * std::abs(target);
            const double L = last ? target : L_prev + h;
            TzitzeicaSolution s = solve_at(prev.v, L);
            if (s.nontrivial()) {
                prev = s;
                L_prev = L;
                if (last) {
                    br.solutions.push_back(s);
                    break;
                }
                h = target - L_prev;
                continue;
            }
            h *= 0.5;
            if (std::abs(h) < min_step) {
                br.truncated = true;
                br.flag = "fold";
                return br;
            }
        }
    }
    return br;
}

JacobianSpectrum jacobian_spectrum(const RealField& v, int count, double shift, double cluster_tol, unsigned seed) {
    GridOps ops(v.grid);
    const Eigen::VectorXd c = potential(flat(v)).array() - shift;
    auto apply_shifted = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd { return ops.laplace(w) + c.cwiseProduct(w); };
    auto apply_p = [&](const Eigen::VectorXd& w) -> Eigen::VectorXd { return ops.precondition(w); };
    auto apply_inverse = [&](const Eigen::VectorXd& b) -> Eigen::VectorXd {
        return minres(apply_shifted, apply_p, b, 1e-14, 2000).x;
    };

    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::VectorXd start(ops.size());
    for (Eigen::Index i = 0; i < start.size(); ++i) start[i] = nd(rng);

    LanczosResult lr = lanczos(apply_inverse, start, 40);
    struct Pair {
        double lambda, res;
    };
    std::vector<Pair> pairs;
    for (Eigen::Index i = 0; i < lr.ritz_values.size(); ++i) {
        const double theta = lr.ritz_values[i];
        if (std::abs(theta) < 1e-300) continue;
        // residual of (J - shift)^{-1} maps to roughly res / theta^2 on the eigenvalue of J
        pairs.push_back({shift + 1.0 / theta, lr.residual_bounds[i] / (theta * theta)});
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return std::abs(a.lambda) < std::abs(b.lambda); });

    JacobianSpectrum out;
    for (const auto& p : pairs) {
        if (int(out.eigenvalues.size()) >= count) break;
        out.eigenvalues.push_back(p.lambda);
        out.residuals.push_back(p.res);
    }
    if (!pairs.empty()) {
        out.smallest = std::abs(pairs.front().lambda);
        out.next = std::numeric_limits<double>::infinity();
        for (const auto& p : pairs)
            if (std::abs(p.lambda) - out.smallest > cluster_tol) {
                out.next = std::abs(p.lambda);
                break;
            }
        out.ratio = out.smallest / out.next;
    }
    return out;
}

}  // namespace lagtori
