#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace lagtori {

struct MinresResult {
    Eigen::VectorXd x;
    int iterations = 0;
    double relative_residual = 0.0;  // preconditioned residual norm over its initial value
    bool converged = false;
};

// Preconditioned MINRES (Paige-Saunders) for a symmetric operator A with an SPD preconditioner
// apply_minv = M^{-1}. On singular consistent systems it returns the minimum-norm iterate.
template <typename Op, typename Prec>
MinresResult minres(Op&& apply_a, Prec&& apply_minv, const Eigen::VectorXd& b, double rtol, int max_iter) {
    const Eigen::Index n = b.size();
    MinresResult res;
    res.x = Eigen::VectorXd::Zero(n);

    Eigen::VectorXd r1 = b, y = apply_minv(b);
    const double beta1 = std::sqrt(std::max(0.0, r1.dot(y)));
    if (beta1 == 0.0) {
        res.converged = true;
        return res;
    }
    Eigen::VectorXd r2 = r1, w = Eigen::VectorXd::Zero(n), w1(n), w2 = Eigen::VectorXd::Zero(n), v(n);
    double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1, cs = -1.0, sn = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();

    for (int itn = 1; itn <= max_iter; ++itn) {
        v = y / beta;
        y = apply_a(v);
        if (itn >= 2) y -= (beta / oldb) * r1;
        const double alfa = v.dot(y);
        y -= (alfa / beta) * r2;
        r1 = r2;
        r2 = y;
        y = apply_minv(r2);
        oldb = beta;
        beta = std::sqrt(std::max(0.0, r2.dot(y)));

        const double oldeps = epsln;
        const double delta = cs * dbar + sn * alfa;
        const double gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        const double gamma = std::max(std::hypot(gbar, beta), eps);
        cs = gbar / gamma;
        sn = beta / gamma;
        const double phi = cs * phibar;
        phibar *= sn;

        w1 = w2;
        w2 = w;
        w = (v - oldeps * w1 - delta * w2) / gamma;
        res.x += phi * w;
        res.iterations = itn;
        res.relative_residual = phibar / beta1;
        if (res.relative_residual <= rtol || beta == 0.0) {
            res.converged = true;
            break;
        }
    }
    return res;
}

struct LanczosResult {
    Eigen::VectorXd ritz_values;     // ascending
    Eigen::VectorXd residual_bounds;  // |beta_m * last component| per Ritz pair
    int steps = 0;
};

// Lanczos with full reorthogonalization for a symmetric operator.
template <typename Op>
LanczosResult lanczos(Op&& apply, const Eigen::VectorXd& start, int steps) {
    const Eigen::Index n = start.size();
    steps = int(std::min<Eigen::Index>(steps, n));
    Eigen::MatrixXd Q(n, steps + 1);
    std::vector<double> alpha, beta;
    Q.col(0) = start.normalized();
    int m = 0;
    double last_beta = 0.0;
    for (int k = 0; k < steps; ++k) {
        Eigen::VectorXd w = apply(Eigen::VectorXd(Q.col(k)));
        const double a = Q.col(k).dot(w);
        alpha.push_back(a);
        for (int pass = 0; pass < 2; ++pass)
            w -= Q.leftCols(k + 1) * (Q.leftCols(k + 1).transpose() * w);
        const double b = w.norm();
        m = k + 1;
        last_beta = b;
        if (b < 1e-14 * std::abs(a) || b == 0.0) break;
        beta.push_back(b);
        Q.col(k + 1) = w / b;
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    LanczosResult out;
    out.steps = m;
    out.ritz_values = es.eigenvalues();
    out.residual_bounds = (last_beta * es.eigenvectors().row(m - 1).transpose()).cwiseAbs();
    return out;
}

}  // namespace lagtori
