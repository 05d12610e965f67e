#pragma once

#include "lagtori/field2d.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace lagtori {

// Residual norm of an equation: sup|residual| divided by the largest sup-norm among its terms when that exceeds 1.
double relative_sup(const RArray& residual, std::initializer_list<const RArray*> terms);
double relative_sup(const CArray& residual, std::initializer_list<const CArray*> terms);

struct EigenPair {
    RealField s1, s2;
};

// s1 = vx^2 - vy^2 + vxx - vyy, s2 = vx vy + vxy
EigenPair eigenfunctions_s(const RealField& v);

// |Delta s + 12 e^v s|_inf / |s|_inf, or the absolute value when |s|_inf < 1e-9.
double check_eigen(const RealField& v, const RealField& s);

struct DeformationData {
    RealField s, a1, a2;
    RealField b1, b2, a3, b3, sigma1;
};

DeformationData deformation_data(const RealField& v);

struct SystemResiduals {
    double eq5 = 0, eq6 = 0, eq7 = 0, eq8 = 0, eq9 = 0, eq10 = 0;

    double max() const;
    std::array<double, 6> values() const { return {eq5, eq6, eq7, eq8, eq9, eq10}; }
};

SystemResiduals system_residuals(const RealField& v, const DeformationData& d, const RealField& v_t);

struct VelocityForms {
    RealField from_frame;       // v_t = e^{-v/2}(2 a2_y + a2 v_y + 2 a1_x + a1 v_x) / (2 sqrt2)
    RealField from_first_eq;    // v_t = -e^{-2v}(-sqrt2 e^{3v/2} a2 v_y - 2 sqrt2 e^{3v/2} a1_x + s_x) / 2
    double disagreement = 0.0;  // relative sup-norm
};

VelocityForms v_dot_forms(const RealField& v);
RealField v_dot(const RealField& v);
// Throws std::runtime_error when the two forms differ by more than tol.
RealField v_dot_checked(const RealField& v, double tol = 1e-8);

struct AreaExactness {
    double area_rate = 0.0;  // integral of Omega
    double exactness = 0.0;  // |Omega - d omega|_inf
};

AreaExactness area_form_exactness(const RealField& v, const DeformationData& d);

// Metric gradient of s/2: e^{-v}(s_x, s_y)/4.
std::pair<RealField, RealField> hamiltonian_normal_velocity(const RealField& v, const DeformationData& d);

// 2 Re h with h = (5 v1 v2^2 + 5 v1^2 v3 - 5 v2 v3 - v1^5)/9, v_j = dz^j v.
RealField nv2_rhs(const RealField& v);
// 2 Re(h - v5/9), the combination that reproduces v_dot.
RealField nv2_rhs_corrected(const RealField& v);

struct NV2Check {
    double printed = 0.0;    // |e^v v_dot - 2 Re h|_inf
    double corrected = 0.0;  // |v_dot - 2 Re(h - v5/9)|_inf, relative
    double imaginary = 0.0;  // |Im(h + conj h)|_inf
};

NV2Check nv2_check(const RealField& v);

struct L5Coefficients {
    ComplexField u3, w3, u1, w1;
    RealField V;
};

struct L5Residuals {
    double eq11_u3 = 0;          // (u3)_zbar - 5 V_z
    double eq11_w3 = 0;          // (w3)_z - 5 V_zbar
    double eq11_w3_printed = 0;  // (w3)_zbar - 5 V_zbar
    double eq12 = 0;
    double eq13 = 0;
    double eq12_printed_u1 = 0;  // Eq. 12 with the printed u1 (v_z^2 term in place of v_zz^2)
    double convention_lock = 0;  // dzbar(-(5/3)(v_z^2 + v_zz)) - 5 dz e^v, absolute

    double max_consistent() const;
};

L5Coefficients coefficients_L5(const RealField& v, bool printed_u1 = false);
L5Residuals l5_residuals(const RealField& v);

struct L3Residuals {
    double example1_u = 0;  // u_zbar - 3 V_z
    double example1_w = 0;  // w_z - 3 V_zbar
    double theorem4_z = 0;
    double theorem4_zbar = 0;

    double max() const;
};

std::pair<ComplexField, ComplexField> coefficients_L3(const RealField& v);
L3Residuals l3_residuals(const RealField& v);

enum class FlowScheme { implicit_midpoint, rk4 };
const char* to_string(FlowScheme s);

struct FlowDiagnostics {
    double area = 0.0;
    double tzitzeica_residual = 0.0;
    std::array<double, 5> eq_residuals{};  // Eqs. 5, 7, 8, 9, 10
    double nv2_mismatch = 0.0;             // printed relation, |e^v v_dot - 2 Re h|_inf
};

struct FlowState {
    double t = 0.0;
    RealField v;
    FlowDiagnostics diagnostics;
};

struct FlowOptions {
    FlowScheme scheme = FlowScheme::implicit_midpoint;
    int record_every = 100;
    double abort_residual = 1e-5;
    double implicit_tol = 1e-13;
    int implicit_max_iter = 50;
};

struct FlowResult {
    std::vector<FlowState> states;
    bool truncated = false;
    std::string flag;  // empty, "residual", "blowup" or "implicit"
    int steps_taken = 0;
    double relative_area_drift() const;
    double max_tzitzeica_residual() const;
};

FlowDiagnostics flow_diagnostics(const RealField& v);
// Fourier multiplier of the linear part of v_dot: -(dz^5 + dzbar^5)/9.
CArray flow_linear_symbol(const Grid& g);
FlowResult flow_integrate(const RealField& v0, double dt, int steps, const FlowOptions& opt = {});

}  // namespace lagtori
