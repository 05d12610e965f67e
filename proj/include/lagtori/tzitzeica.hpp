#pragma once

#include "lagtori/field2d.hpp"

#include <string>
#include <utility>
#include <vector>

namespace lagtori {

enum class NewtonStatus { converged, diverged, singular, max_iter };
const char* to_string(NewtonStatus s);

enum class SeedShape { plane, cross };

struct BranchMode {
    int j = 1, l = 0;
};

struct TzitzeicaSolution {
    RealField v;
    double residual_norm = 0.0;
    BranchMode mode;
    double amplitude = 0.0;  // (max v - min v) / 2
    double L1 = 0.0, L2 = 0.0;
    int iterations = 0;
    NewtonStatus status = NewtonStatus::max_iter;
    std::vector<double> residual_history;

    bool ok() const { return status == NewtonStatus::converged; }
    bool nontrivial(double floor = 1e-2) const { return ok() && amplitude > floor; }
};

// Delta v - 4(e^{-2v} - e^v)
RealField residual(const RealField& v);
// J[w] = Delta w + (8 e^{-2v} + 4 e^v) w
RealField jacobian_apply(const RealField& v, const RealField& w);

// Square-torus period at which the (j, l) Fourier mode enters the kernel of J at v = 0.
double bifurcation_period(int j, int l);
std::pair<double, double> bifurcation_periods(int j, int l, double aspect = 1.0);

RealField seed_field(const Grid& g, BranchMode mode, double eps, SeedShape shape = SeedShape::plane);

struct NewtonOptions {
    double tol = 1e-11;
    int max_iter = 40;
    double krylov_rtol = 1e-12;
    int krylov_max_iter = 600;
    int max_backtracks = 12;
};

TzitzeicaSolution solve_newton(const RealField& v0, const NewtonOptions& opt = {});

struct ContinuationOptions {
    int grid = 64;
    double eps = 0.3;
    SeedShape shape = SeedShape::plane;
    int min_step_fraction = 64;  // smallest step = nominal / this
    NewtonOptions newton;
};

struct Branch {
    std::vector<TzitzeicaSolution> solutions;
    bool truncated = false;
    std::string flag;  // empty, "fold", "collapsed" or "seed"
};

Branch continue_branch(BranchMode mode, double L_start, double L_end, int steps,
                       const ContinuationOptions& opt = {});

struct JacobianSpectrum {
    std::vector<double> eigenvalues;  // Ritz values near zero, ascending in magnitude
    std::vector<double> residuals;
    double smallest = 0.0, next = 0.0;  // smallest magnitude and the next distinct magnitude
    double ratio = 0.0;
};

// Shift-invert Lanczos on J at v; distinct means separated by more than cluster_tol.
JacobianSpectrum jacobian_spectrum(const RealField& v, int count = 6, double shift = -0.5, double cluster_tol = 1e-6,
                                   unsigned seed = 1);

}  // namespace lagtori
