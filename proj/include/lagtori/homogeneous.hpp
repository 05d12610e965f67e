#pragma once

#include "lagtori/field2d.hpp"
#include "lagtori/lift.hpp"

#include <vector>

namespace lagtori {

// E of the Clifford torus, 4 pi^2 / (3 sqrt 3).
inline double clifford_energy() { return 4.0 * pi * pi / (3.0 * std::sqrt(3.0)); }

struct TorusTriple {
    double r1, r2, r3;

    // Requires r_i > 0 and r1^2 + r2^2 + r3^2 = 1 within tol.
    TorusTriple(double a, double b, double c, double tol = 1e-12);
    // Rescales a positive triple onto the unit sphere; rejects inputs farther than tol from it.
    static TorusTriple normalized(double a, double b, double c, double tol);
    static TorusTriple clifford();
};

struct HomogeneousInvariants {
    double conformal_factor;  // 2e^v
    double beta_x, beta_y;
    double potential_V;
    Lattice2 lattice;
    double bloch_p1, bloch_p2;  // in (-pi, pi]
};

struct EnergySplit {
    double area, willmore;
};

// Exponents (alpha_j, gamma_j) with r_j = r_j e^{2 pi i (alpha_j x + gamma_j y)}.
struct HomogeneousExponents {
    Eigen::Vector3d ax, ay;
};

HomogeneousExponents exponents(const TorusTriple& t);
LiftJet lift(const TorusTriple& t, double x, double y);
HomogeneousInvariants invariants(const TorusTriple& t);
double energy_closed(const TorusTriple& t);
double energy_quadrature(const TorusTriple& t);
EnergySplit decompose(const TorusTriple& t);

class HomogeneousLift {
public:
    explicit HomogeneousLift(const TorusTriple& t);
    LiftJet jet(double x, double y) const { return lift(t_, x, y); }
    Eigen::Vector2d beta_gradient(double, double) const { return {inv_.beta_x, inv_.beta_y}; }
    double beta_laplacian(double, double) const { return 0.0; }
    // Largest angular frequency of the lift, used to scale finite-difference steps.
    double frequency() const { return freq_; }
    const TorusTriple& triple() const { return t_; }

private:
    TorusTriple t_;
    HomogeneousInvariants inv_;
    double freq_;
};

struct MinimizeConfig {
    int grid = 5;                      // grid x grid deterministic starts
    std::vector<Eigen::Vector2d> starts;  // explicit (r1^2, r2^2) starts; overrides grid when non-empty
    double x_tol = 1e-12;
    int max_iter = 5000;
};

struct MinimizeTraceEntry {
    int start;
    Eigen::Vector2d start_point;
    double start_value;
    double final_value;
    int iterations;
    int improvements;
};

struct MinimizeResult {
    TorusTriple argmin;
    double value;
    int best_start;
    std::vector<MinimizeTraceEntry> trace;
};

// Starting points in (r1^2, r2^2) for a grid x grid multistart inside the simplex.
std::vector<Eigen::Vector2d> simplex_starts(int grid);
MinimizeResult minimize_energy(const MinimizeConfig& cfg = {});

struct SimplexScanRow {
    double r1, r2, r3, energy;
};

// Interior lattice points (i/N, j/N) of the (r1^2, r2^2) simplex.
std::vector<SimplexScanRow> scan_simplex(int grid);

}  // namespace lagtori
