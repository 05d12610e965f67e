#include "lagtori/hmk_family.hpp"
#include "lagtori/homogeneous.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lagtori {

namespace {

double denom(const HMKTriple& t, double x) {
    const double m = t.m, n = t.n, k = t.k;
    return 2.0 * m * n - k * (m + n) + k * (m - n) * std::cos(2.0 * x);
}

double numer(const HMKTriple& t, double x) {
    return t.m + t.n - double(t.m - t.n) * std::cos(2.0 * x);
}

constexpr double kRtol = 1e-13;

}  // namespace

HMKTriple::HMKTriple(int m_, int n_, int k_) : m(m_), n(n_), k(k_) {
    if (!(m >= n && n > 0 && k < 0))
        throw std::invalid_argument("HMKTriple: requires m >= n > 0 > k");
    p = std::gcd(m - k, n - k);
    r = (n - k) / p;
}

ProfileJet profile(const HMKTriple& t, double x) {
    const double m = t.m, n = t.n, k = t.k;
    const double c1 = std::sqrt(k / (k - m)), c2 = std::sqrt(k / (k - n));
    const double s = std::sin(x), c = std::cos(x);
    const double a = n / (n - k), b = m / (m - k) - a;
    const double q = a + b * s * s, dq = b * std::sin(2.0 * x), d2q = 2.0 * b * std::cos(2.0 * x);
    const double u3 = std::sqrt(q);
    ProfileJet j;
    j.u << s * c1, c * c2, u3;
    j.du << c * c1, -s * c2, dq / (2.0 * u3);
    j.d2u << -s * c1, -c * c2, d2q / (2.0 * u3) - dq * dq / (4.0 * u3 * u3 * u3);
    return j;
}

MetricPair metrics(const HMKTriple& t, double x) {
    const double k = t.k, dmn = t.m - t.n;
    const double N = numer(t, x), D = denom(t, x);
    const double dN = 2.0 * dmn * std::sin(2.0 * x), dD = -2.0 * k * dmn * std::sin(2.0 * x);
    MetricPair g;
    g.g11 = -k * N / D;
    g.g22 = -2.0 * k * pi * pi * N;
    g.dg11 = -k * (dN * D - N * dD) / (D * D);
    g.dg22 = -2.0 * k * pi * pi * dN;
    return g;
}

double area(const HMKTriple& t) {
    auto f = [&](double x) { return -std::sqrt(2.0) * t.k * pi * numer(t, x) / std::sqrt(denom(t, x)); };
    return periodic_integral(f, 2.0 * pi, kRtol) / t.p;
}

double willmore(const HMKTriple& t) {
    const double s = t.k + t.m + t.n;
    auto f = [&](double x) { return 2.0 * std::sqrt(2.0) * s * s * pi / std::sqrt(denom(t, x)); };
    return periodic_integral(f, 2.0 * pi, kRtol) / t.p;
}

double energy(const HMKTriple& t) { return area(t) + willmore(t) / 8.0; }

double energy_single(const HMKTriple& t) {
    const double m = t.m, n = t.n, k = t.k;
    auto f = [&](double x) {
        return (4.0 * k * (m - n) * std::cos(2.0 * x) + (m + n - k) * (m + n - k)) / std::sqrt(denom(t, x));
    };
    return periodic_integral(f, 2.0 * pi, kRtol) * pi / (2.0 * std::sqrt(2.0)) / t.p;
}

HMKReport audit_bound(const HMKTriple& t) {
    const double m = t.m, n = t.n, k = t.k;
    HMKReport rep{t.m, t.n, t.k, t.p, t.r, area(t), willmore(t), 0.0, energy_single(t), {}, 0.0, true, {}};
    rep.energy = rep.area + rep.willmore / 8.0;

    // (i): the denominator replaced by its maximum sqrt(2mn - k(m+n) - k(m-n)).
    const double dmax = std::sqrt(2.0 * m * n - k * (m + n) - k * (m - n));
    auto f1 = [&](double x) { return (4.0 * k * (m - n) * std::cos(2.0 * x) + (m + n - k) * (m + n - k)) / dmax; };
    rep.bound_chain[0] = periodic_integral(f1, 2.0 * pi, kRtol) * pi / (2.0 * std::sqrt(2.0)) / t.p;
    rep.bound_chain[1] = pi * pi / (2.0 * t.p) * (m + n - k) * (m + n - k) / std::sqrt(m * (n - k));
    rep.bound_chain[2] = (m / t.p + t.r) * pi * pi;
    rep.margin = rep.energy - clifford_energy();

    const double slack = 1e-10;
    auto fail = [&](const char* what) {
        if (rep.chain_holds) rep.failure = what;
        rep.chain_holds = false;
    };
    if (!(rep.energy >= rep.bound_chain[0] * (1.0 - slack))) fail("E >= (i)");
    if (!(std::abs(rep.bound_chain[0] - rep.bound_chain[1]) <= slack * rep.bound_chain[1])) fail("(i) = (ii)");
    if (!(rep.bound_chain[1] >= rep.bound_chain[2] * (1.0 - slack))) fail("(ii) >= (iii)");
    if (!(rep.bound_chain[2] > clifford_energy())) fail("(iii) > E(Clifford)");
    if (!(std::abs(rep.energy - rep.energy_single) <= 1e-9 * rep.energy)) fail("A + W/8 = single-integral E");
    return rep;
}

std::vector<HMKReport> scan(int m_max, int n_max, int k_min) {
    std::vector<HMKReport> rows;
    for (int m = 1; m <= m_max; ++m)
        for (int n = 1; n <= std::min(m, n_max); ++n)
            for (int k = k_min; k <= -1; ++k) rows.push_back(audit_bound(HMKTriple(m, n, k)));
    return rows;
}

HMKLift::HMKLift(const HMKTriple& t) : t_(t) {
    // sigma is even and pi-periodic: expand in cos(2 j x) from M samples on [0, pi).
    const int M = 512;
    std::vector<double> s(M);
    for (int i = 0; i < M; ++i) s[i] = sigma(pi * i / M);
    for (int j = 0; j <= M / 2; ++j) {
        double acc = 0.0;
        for (int i = 0; i < M; ++i) acc += s[i] * std::cos(2.0 * j * pi * i / M);
        double c = acc / M * (j == 0 ? 1.0 : 2.0);
        if (j > 0 && std::abs(c) < 1e-18 * std::abs(c_[0])) break;
        c_.push_back(c);
    }
    freq_ = 2.0 * pi * std::max({t.m, t.n, -t.k});
}

double HMKLift::sigma(double x) const {
    auto g = metrics(t_, x);
    return std::sqrt(g.g11 / g.g22);
}

double HMKLift::xi_of_x(double x) const {
    double xi = c_[0] * x;
    for (std::size_t j = 1; j < c_.size(); ++j) xi += c_[j] * std::sin(2.0 * j * x) / (2.0 * j);
    return xi;
}

double HMKLift::x_of_xi(double xi) const {
    double x = xi / c_[0];
    for (int it = 0; it < 60; ++it) {
        double dx = (xi_of_x(x) - xi) / sigma(x);
        x -= dx;
        if (std::abs(dx) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

LiftJet HMKLift::jet_xy(double x, double y) const {
    auto pj = profile(t_, x);
    Eigen::Vector3d w(t_.m, t_.n, t_.k);
    w *= 2.0 * pi;
    LiftJet j;
    for (int c = 0; c < 3; ++c) {
        cplx ph = std::exp(cplx(0.0, w[c] * y)), iw(0.0, w[c]);
        j.r[c] = pj.u[c] * ph;
        j.rx[c] = pj.du[c] * ph;
        j.rxx[c] = pj.d2u[c] * ph;
        j.ry[c] = iw * j.r[c];
        j.rxy[c] = iw * j.rx[c];
        j.ryy[c] = iw * iw * j.r[c];
    }
    return j;
}

LiftJet HMKLift::jet(double xi, double y) const {
    const double x = x_of_xi(xi);
    auto g = metrics(t_, x);
    const double rho = std::sqrt(g.g22 / g.g11);
    const double drho = 0.5 * rho * (g.dg22 / g.g22 - g.dg11 / g.g11);
    LiftJet j = jet_xy(x, y);
    LiftJet out = j;
    out.rx = rho * j.rx;
    out.rxx = rho * rho * j.rxx + rho * drho * j.rx;
    out.rxy = rho * j.rxy;
    return out;
}

}  // namespace lagtori
