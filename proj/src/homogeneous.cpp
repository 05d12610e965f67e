#include "lagtori/homogeneous.hpp"
#include "lagtori/simplex_search.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lagtori {

namespace {

double wrap_phase(double p) {
    double w = std::remainder(p, 2.0 * pi);
    return w <= -pi ? w + 2.0 * pi : w;
}

}  // namespace

TorusTriple::TorusTriple(double a, double b, double c, double tol) : r1(a), r2(b), r3(c) {
    if (!(a > 0.0 && b > 0.0 && c > 0.0))
        throw std::invalid_argument("TorusTriple: every r_i must be positive");
    double s = a * a + b * b + c * c;
    if (!(std::abs(s - 1.0) <= tol))
        throw std::invalid_argument("TorusTriple: r1^2 + r2^2 + r3^2 = " + std::to_string(s) + " is not 1");
}

TorusTriple TorusTriple::normalized(double a, double b, double c, double tol) {
    if (!(a > 0.0 && b > 0.0 && c > 0.0))
        throw std::invalid_argument("TorusTriple: every r_i must be positive");
    double n = std::sqrt(a * a + b * b + c * c);
    if (!(std::abs(n * n - 1.0) <= tol))
        throw std::invalid_argument("TorusTriple: r1^2 + r2^2 + r3^2 = " + std::to_string(n * n) + " is not 1");
    return {a / n, b / n, c / n, 1e-12};
}

TorusTriple TorusTriple::clifford() {
    double c = 1.0 / std::sqrt(3.0);
    return {c, c, c};
}

HomogeneousExponents exponents(const TorusTriple& t) {
    double s = t.r2 * t.r2 + t.r3 * t.r3;
    double a = -t.r1 * t.r1 / s;
    HomogeneousExponents e;
    e.ax << 1.0, a, a;
    e.ay << 0.0, t.r1 * t.r3 / (t.r2 * s), -t.r1 * t.r2 / (t.r3 * s);
    return e;
}

LiftJet lift(const TorusTriple& t, double x, double y) {
    auto e = exponents(t);
    Eigen::Vector3d amp(t.r1, t.r2, t.r3);
    LiftJet j;
    for (int c = 0; c < 3; ++c) {
        cplx wx(0.0, 2.0 * pi * e.ax[c]), wy(0.0, 2.0 * pi * e.ay[c]);
        cplx r = amp[c] * std::exp(cplx(0.0, 2.0 * pi * (e.ax[c] * x + e.ay[c] * y)));
        j.r[c] = r;
        j.rx[c] = wx * r;
        j.ry[c] = wy * r;
        j.rxx[c] = wx * wx * r;
        j.rxy[c] = wx * wy * r;
        j.ryy[c] = wy * wy * r;
    }
    return j;
}

HomogeneousInvariants invariants(const TorusTriple& t) {
    const double q1 = t.r1 * t.r1, q2 = t.r2 * t.r2, q3 = t.r3 * t.r3, s = q2 + q3;
    Lattice2 lat(Eigen::Vector2d(s, 0.0), Eigen::Vector2d(q3, t.r2 * t.r3 / t.r1));
    // Bloch phases read off the first component: its exponent is (1, 0).
    return HomogeneousInvariants{
        4.0 * pi * pi * q1 / s,
        2.0 * pi * (1.0 - 3.0 * q1) / s,
        -2.0 * pi * t.r1 * (q2 - q3) / (t.r2 * t.r3 * s),
        pi * pi * (1.0 - q2) * (q1 + q2) / (q2 * q3),
        lat,
        wrap_phase(2.0 * pi * lat.e1.x()),
        wrap_phase(2.0 * pi * lat.e2.x()),
    };
}

double energy_closed(const TorusTriple& t) {
    const double q1 = t.r1 * t.r1, q2 = t.r2 * t.r2, q3 = t.r3 * t.r3;
    return pi * pi * (1.0 - q1) * (1.0 - q2) * (1.0 - q3) / (2.0 * t.r1 * t.r2 * t.r3);
}

double energy_quadrature(const TorusTriple& t) {
    auto inv = invariants(t);
    return 0.5 * inv.potential_V * inv.lattice.cell_area();
}

EnergySplit decompose(const TorusTriple& t) {
    auto inv = invariants(t);
    double grad2 = inv.beta_x * inv.beta_x + inv.beta_y * inv.beta_y;
    // |H|^2 dsigma = (e^{-v}/2)|grad beta|^2 * 2e^v dx dy
    return {4.0 * pi * pi * t.r1 * t.r2 * t.r3, grad2 * inv.lattice.cell_area()};
}

HomogeneousLift::HomogeneousLift(const TorusTriple& t) : t_(t), inv_(invariants(t)) {
    auto e = exponents(t);
    freq_ = 2.0 * pi * std::max(e.ax.cwiseAbs().maxCoeff(), e.ay.cwiseAbs().maxCoeff());
}

std::vector<Eigen::Vector2d> simplex_starts(int grid) {
    if (grid < 1) throw std::invalid_argument("simplex_starts: grid must be positive");
    // Unit square (s, w) in (0,1)^2 mapped onto the triangle: r1^2 = s(1 - w), r2^2 = s w.
    std::vector<Eigen::Vector2d> out;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            double s = (i + 0.5) / grid, w = (j + 0.5) / grid;
            out.emplace_back(s * (1.0 - w), s * w);
        }
    return out;
}

MinimizeResult minimize_energy(const MinimizeConfig& cfg) {
    auto starts = cfg.starts.empty() ? simplex_starts(cfg.grid) : cfg.starts;
    auto interior = [](const Eigen::Vector2d& u) { return u[0] > 0.0 && u[1] > 0.0 && u[0] + u[1] < 1.0; };
    for (auto& s : starts)
        if (!interior(s)) throw std::invalid_argument("minimize_energy: start lies outside the open simplex");

    auto f = [&](const Eigen::Vector2d& u) {
        if (!interior(u)) return std::numeric_limits<double>::infinity();
        return energy_closed(TorusTriple(std::sqrt(u[0]), std::sqrt(u[1]), std::sqrt(1.0 - u[0] - u[1]), 1e-9));
    };

    MinimizeResult best{TorusTriple::clifford(), std::numeric_limits<double>::infinity(), -1, {}};
    for (int k = 0; k < int(starts.size()); ++k) {
        const auto& u = starts[k];
        SimplexSearchOptions opt;
        opt.initial_step = 0.5 * std::min({u[0], u[1], 1.0 - u[0] - u[1]});
        opt.x_tol = cfg.x_tol;
        opt.max_iter = cfg.max_iter;
        auto r = simplex_search<2>(f, u, opt);
        best.trace.push_back({k, u, f(u), r.value, r.iterations, r.improvements});
        if (r.value < best.value) {
            best.value = r.value;
            best.best_start = k;
            double u3 = 1.0 - r.x[0] - r.x[1];
            best.argmin = TorusTriple::normalized(std::sqrt(r.x[0]), std::sqrt(r.x[1]), std::sqrt(u3), 1e-9);
        }
    }
    return best;
}

std::vector<SimplexScanRow> scan_simplex(int grid) {
    if (grid < 3) throw std::invalid_argument("scan_simplex: grid must be at least 3");
    std::vector<SimplexScanRow> rows;
    for (int i = 1; i < grid; ++i)
        for (int j = 1; i + j < grid; ++j) {
            double u = double(i) / grid, w = double(j) / grid;
            auto t = TorusTriple::normalized(std::sqrt(u), std::sqrt(w), std::sqrt(1.0 - u - w), 1e-9);
            rows.push_back({t.r1, t.r2, t.r3, energy_closed(t)});
        }
    return rows;
}

}  // namespace lagtori
