#pragma once

#include "lagtori/field2d.hpp"
#include "lagtori/lift.hpp"

#include <array>
#include <string>
#include <vector>

namespace lagtori {

struct HMKTriple {
    int m, n, k;
    int p;  // gcd(m - k, n - k)
    int r;  // (n - k) / p

    // Requires m >= n > 0 > k.
    HMKTriple(int m_, int n_, int k_);
};

struct ProfileJet {
    Eigen::Vector3d u, du, d2u;  // profile curve and its first two x-derivatives
};

struct MetricPair {
    double g11, g22;    // 2e^{v1(x)}, 2e^{v2(x)}
    double dg11, dg22;  // x-derivatives
};

ProfileJet profile(const HMKTriple& t, double x);
MetricPair metrics(const HMKTriple& t, double x);

double area(const HMKTriple& t);
double willmore(const HMKTriple& t);
double energy(const HMKTriple& t);
// Energy from the combined single integrand.
double energy_single(const HMKTriple& t);

struct HMKReport {
    int m, n, k, p, r;
    double area, willmore, energy, energy_single;
    std::array<double, 3> bound_chain;  // successive lower bounds (i), (ii), (iii)
    double margin;                      // energy - E(Clifford)
    bool chain_holds;
    std::string failure;  // first violated inequality, empty when the chain holds
};

HMKReport audit_bound(const HMKTriple& t);
// All triples with m_max >= m >= n >= 1 (n <= n_max), k_min <= k <= -1, ordered by (m, n, k).
std::vector<HMKReport> scan(int m_max, int n_max, int k_min);

// Integral over one period of a smooth periodic integrand, trapezoid rule doubled until the
// relative change drops below rtol.
template <typename Fn>
double periodic_integral(Fn&& f, double period, double rtol = 1e-12, int max_points = 1 << 20) {
    int n = 16;
    double h = period / n, sum = 0.0;
    for (int i = 0; i < n; ++i) sum += f(i * h);
    double prev = sum * h;
    while (n < max_points) {
        double add = 0.0;
        for (int i = 0; i < n; ++i) add += f((i + 0.5) * h);
        sum += add;
        n *= 2;
        h *= 0.5;
        double cur = sum * h;
        if (std::abs(cur - prev) <= rtol * std::abs(cur) + 1e-300) return cur;
        prev = cur;
    }
    throw std::runtime_error("periodic_integral: no convergence");
}

// The lift reparametrized conformally: (xi, y) with d xi = sqrt(g11 / g22) dx.
class HMKLift {
public:
    explicit HMKLift(const HMKTriple& t);
    LiftJet jet(double xi, double y) const;
    Eigen::Vector2d beta_gradient(double, double) const { return {0.0, 2.0 * pi * (t_.m + t_.n + t_.k)}; }
    double beta_laplacian(double, double) const { return 0.0; }
    double frequency() const { return freq_; }
    double xi_of_x(double x) const;
    double x_of_xi(double xi) const;
    double xi_period() const { return 2.0 * pi * c_[0]; }
    // Jet of the original (x, y) parametrization.
    LiftJet jet_xy(double x, double y) const;
    const HMKTriple& triple() const { return t_; }

private:
    double sigma(double x) const;
    HMKTriple t_;
    std::vector<double> c_;  // cosine coefficients of sigma in cos(2 j x)
    double freq_;
};

}  // namespace lagtori
