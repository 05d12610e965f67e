#include "lagtori/nv_flow.hpp"

#include "lagtori/tzitzeica.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lagtori {

namespace {

const double kSqrt2 = std::sqrt(2.0);

RArray dealias_mask(const Grid& g) {
    const int cut = dealias_cut(g);
    RArray m(g.n1, g.n2);
    for (int j = 0; j < g.n2; ++j)
        for (int i = 0; i < g.n1; ++i)
            m(i, j) = std::abs(mode_index(i, g.n1)) < cut && std::abs(mode_index(j, g.n2)) < cut ? 1.0 : 0.0;
    return m;
}

// Spectral multiplier restricted to the dealiased band.
CArray filtered(const Grid& g, const CArray& a, const CArray& sym) {
    CArray h = fft2(a);
    h *= sym * dealias_mask(g).cast<cplx>();
    return ifft2(h);
}

RArray D(const Grid& g, const RArray& a, int ax, int ay) {
    return filtered(g, a.cast<cplx>(), derivative_symbol(g, ax, ay)).real();
}
RArray D(const RealField& f, int ax, int ay) { return D(f.grid, f.values, ax, ay); }

CArray Dz(const Grid& g, const CArray& a, int order = 1) { return filtered(g, a, dz_symbol(g, order, false)); }
CArray Dzb(const Grid& g, const CArray& a, int order = 1) { return filtered(g, a, dz_symbol(g, order, true)); }
CArray Dz(const RealField& f, int order = 1) { return Dz(f.grid, f.values.cast<cplx>(), order); }
CArray Dzb(const RealField& f, int order = 1) { return Dzb(f.grid, f.values.cast<cplx>(), order); }
RArray Lap(const RealField& f) { return filtered(f.grid, f.values.cast<cplx>(), laplacian_symbol(f.grid).cast<cplx>()).real(); }

double sup(const RArray& a) { return a.abs().maxCoeff(); }

struct ZJets {
    std::array<CArray, 6> p;  // p[j] = dz^j v
};

ZJets z_jets(const RealField& v, int top) {
    ZJets z;
    for (int j = 1; j <= top; ++j) z.p[j] = Dz(v, j);
    return z;
}

// sqrt2 e^{-v} + (sqrt2/9)(-p1^4 + 4 p1^2 p2 + p1 p3 - 3 p2^2 - p4); a1 + i a2 = e^{v/2} phi
CArray phi_field(const RArray& v, const ZJets& z) {
    const CArray &p1 = z.p[1], &p2 = z.p[2], &p3 = z.p[3], &p4 = z.p[4];
    const CArray poly = -p1.square().square() + 4.0 * p1.square() * p2 + p1 * p3 - 3.0 * p2.square() - p4;
    return kSqrt2 * (-v).exp().cast<cplx>() + (kSqrt2 / 9.0) * poly;
}

VelocityForms forms_from(const RealField& v, const DeformationData& d) {
    const Grid& g = v.grid;
    const RArray vx = D(v, 1, 0), vy = D(v, 0, 1);
    const RArray a1x = D(d.a1, 1, 0), a2y = D(d.a2, 0, 1), sx = D(d.s, 1, 0);
    const RArray& e = v.values;
    VelocityForms f;
    f.from_frame = RealField(
        g, (-0.5 * e).exp() * (2.0 * a2y + d.a2.values * vy + 2.0 * a1x + d.a1.values * vx) / (2.0 * kSqrt2));
    f.from_first_eq = RealField(g, -0.5 * (-2.0 * e).exp() *
                                       (-kSqrt2 * (1.5 * e).exp() * d.a2.values * vy -
                                        2.0 * kSqrt2 * (1.5 * e).exp() * a1x + sx));
    f.disagreement = relative_sup(f.from_frame.values - f.from_first_eq.values, {&f.from_frame.values, &f.from_first_eq.values});
    return f;
}

}  // namespace

double relative_sup(const RArray& residual, std::initializer_list<const RArray*> terms) {
    double scale = 0.0;
    for (const RArray* t : terms) scale = std::max(scale, t->abs().maxCoeff());
    return residual.abs().maxCoeff() / std::max(1.0, scale);
}

double relative_sup(const CArray& residual, std::initializer_list<const CArray*> terms) {
    double scale = 0.0;
    for (const CArray* t : terms) scale = std::max(scale, t->abs().maxCoeff());
    return residual.abs().maxCoeff() / std::max(1.0, scale);
}

EigenPair eigenfunctions_s(const RealField& v) {
    const RArray vx = D(v, 1, 0), vy = D(v, 0, 1);
    return {RealField(v.grid, vx * vx - vy * vy + D(v, 2, 0) - D(v, 0, 2)), RealField(v.grid, vx * vy + D(v, 1, 1))};
}

double check_eigen(const RealField& v, const RealField& s) {
    detail::require_same_grid(v.grid, s.grid);
    const double res = sup(laplacian(s).values + 12.0 * v.values.exp() * s.values);
    const double norm = sup(s.values);
    return norm > 1e-9 ? res / norm : res;
}

DeformationData deformation_data(const RealField& v) {
    const Grid& g = v.grid;
    const RArray& e = v.values;
    const CArray phi = phi_field(e, z_jets(v, 4));
    DeformationData d;
    d.s = RealField(g, eigenfunctions_s(v).s1.values / 3.0);
    d.a1 = RealField(g, (0.5 * e).exp() * phi.real());
    d.a2 = RealField(g, (0.5 * e).exp() * phi.imag());

    const RArray vx = D(v, 1, 0), vy = D(v, 0, 1);
    const RArray sx = D(d.s, 1, 0), sy = D(d.s, 0, 1), sxx = D(d.s, 2, 0), sxy = D(d.s, 1, 1);
    const RArray a2x = D(d.a2, 1, 0);
    const RArray& a1 = d.a1.values;
    const RArray& a2 = d.a2.values;
    const RArray& s = d.s.values;

    d.b1 = RealField(g, (-0.5 * e).exp() * sx / (2.0 * kSqrt2));
    d.b2 = RealField(g, (-0.5 * e).exp() * sy / (2.0 * kSqrt2));
    d.a3 = RealField(g, (-2.0 * e).exp() * (kSqrt2 * sy - 2.0 * (1.5 * e).exp() * (a1 * vy - 2.0 * a2x)) /
                            (4.0 * kSqrt2));
    d.b3 = RealField(g, (-1.5 * e).exp() *
                            (-8.0 * a2 - kSqrt2 * (0.5 * e).exp() * (sx * vy + sy * vx - 2.0 * sxy)) /
                            (8.0 * kSqrt2));
    d.sigma1 = RealField(g, (-1.5 * e).exp() *
                                (8.0 * a1 + kSqrt2 * (0.5 * e).exp() * (8.0 * e.exp() * s + sy * vy - sx * vx + 2.0 * sxx)) /
                                (8.0 * kSqrt2));
    return d;
}

double SystemResiduals::max() const {
    auto v = values();
    return *std::max_element(v.begin(), v.end());
}

SystemResiduals system_residuals(const RealField& v, const DeformationData& d, const RealField& v_t) {
    const Grid& g = v.grid;
    detail::require_same_grid(g, v_t.grid);
    const RArray& e = v.values;
    const RArray& a1 = d.a1.values;
    const RArray& a2 = d.a2.values;
    const RArray vx = D(v, 1, 0), vy = D(v, 0, 1);
    const RArray a1x = D(d.a1, 1, 0), a1y = D(d.a1, 0, 1), a2x = D(d.a2, 1, 0), a2y = D(d.a2, 0, 1);
    const RArray sx = D(d.s, 1, 0), sy = D(d.s, 0, 1);
    const RArray e32 = (1.5 * e).exp();

    SystemResiduals r;
    {
        const RArray t1 = -0.5 * (-2.0 * e).exp() * kSqrt2 * e32 * a2 * vy;
        const RArray t2 = -0.5 * (-2.0 * e).exp() * 2.0 * kSqrt2 * e32 * a1x;
        const RArray t3 = 0.5 * (-2.0 * e).exp() * sx;
        r.eq5 = relative_sup(v_t.values + t1 + t2 + t3, {&v_t.values, &t1, &t2, &t3});
    }
    r.eq6 = check_eigen(v, d.s);
    {
        const RArray t1 = 2.0 * a1x, t2 = -2.0 * a2y, t3 = -a1 * vx, t4 = a2 * vy, t5 = -kSqrt2 * (-1.5 * e).exp() * sx;
        r.eq7 = relative_sup(t1 + t2 + t3 + t4 + t5, {&t1, &t2, &t3, &t4, &t5});
    }
    {
        const RArray t1 = 2.0 * a1y, t2 = 2.0 * a2x, t3 = -a1 * vy, t4 = -a2 * vx, t5 = kSqrt2 * (-1.5 * e).exp() * sy;
        r.eq8 = relative_sup(t1 + t2 + t3 + t4 + t5, {&t1, &t2, &t3, &t4, &t5});
    }
    {
        const RArray s1x = D(d.sigma1, 1, 0);
        const RArray t1 = kSqrt2 * e32 * a2 * vy, t2 = 2.0 * kSqrt2 * e32 * a1x, t3 = -sx;
        const RArray t4 = 2.0 * (3.0 * e).exp() * (d.b3.values * vy + sx + s1x);
        r.eq9 = relative_sup(t1 + t2 + t3 + t4, {&t1, &t2, &t3, &t4});
    }
    {
        const RArray t1 = 2.0 * (-e).exp() * d.a3.values, t2 = -D(d.sigma1, 0, 1), t3 = d.b3.values * vx;
        r.eq10 = relative_sup(t1 + t2 + t3, {&t1, &t2, &t3});
    }
    return r;
}

VelocityForms v_dot_forms(const RealField& v) { return forms_from(v, deformation_data(v)); }

RealField v_dot(const RealField& v) { return v_dot_forms(v).from_frame; }

RealField v_dot_checked(const RealField& v, double tol) {
    VelocityForms f = v_dot_forms(v);
    if (!(f.disagreement < tol))
        throw std::runtime_error("v_dot: the two velocity forms disagree by " + std::to_string(f.disagreement));
    return f.from_frame;
}

AreaExactness area_form_exactness(const RealField& v, const DeformationData& d) {
    const Grid& g = v.grid;
    const RArray& e = v.values;
    const RArray vt = forms_from(v, d).from_frame.values;
    const RArray omega = 2.0 * e.exp() * vt;
    const RArray w1 = kSqrt2 * (0.5 * e).exp() * d.a1.values, w2 = kSqrt2 * (0.5 * e).exp() * d.a2.values;
    const RArray domega = D(g, w1, 1, 0) + D(g, w2, 0, 1);
    return {integrate(RealField(g, omega)), sup(omega - domega)};
}

std::pair<RealField, RealField> hamiltonian_normal_velocity(const RealField& v, const DeformationData& d) {
    const RArray w = 0.25 * (-v.values).exp();
    return {RealField(v.grid, w * D(d.s, 1, 0)), RealField(v.grid, w * D(d.s, 0, 1))};
}

namespace {

CArray h_poly(const std::array<CArray, 6>& p) {
    const CArray &p1 = p[1], &p2 = p[2], &p3 = p[3];
    return (5.0 * p1 * p2.square() + 5.0 * p1.square() * p3 - 5.0 * p2 * p3 - p1.square().square() * p1) / 9.0;
}

}  // namespace

RealField nv2_rhs(const RealField& v) { return {v.grid, 2.0 * h_poly(z_jets(v, 3).p).real()}; }

RealField nv2_rhs_corrected(const RealField& v) {
    ZJets z = z_jets(v, 5);
    return {v.grid, 2.0 * (h_poly(z.p) - z.p[5] / 9.0).real()};
}

NV2Check nv2_check(const RealField& v) {
    ZJets z = z_jets(v, 5);
    std::array<CArray, 6> q;
    for (int j = 1; j <= 3; ++j) q[j] = Dzb(v, j);
    const CArray h = h_poly(z.p), hb = h_poly(q);
    const RArray vt = v_dot(v).values;
    const RArray lhs = v.values.exp() * vt, rhs = 2.0 * h.real();
    const RArray p5 = 2.0 * z.p[5].real() / 9.0;
    NV2Check c;
    c.printed = relative_sup(lhs - rhs, {&lhs, &rhs});
    c.corrected = relative_sup(vt - rhs + p5, {&vt, &rhs, &p5});
    c.imaginary = sup((h + hb).imag());
    return c;
}

double L5Residuals::max_consistent() const { return std::max({eq11_u3, eq11_w3, eq12, eq13}); }

L5Coefficients coefficients_L5(const RealField& v, bool printed_u1) {
    const Grid& g = v.grid;
    ZJets z = z_jets(v, 4);
    const CArray &p1 = z.p[1], &p2 = z.p[2], &p3 = z.p[3], &p4 = z.p[4];
    L5Coefficients c;
    c.V = RealField(g, v.values.exp());
    c.u3 = ComplexField(g, -5.0 / 3.0 * (p1.square() + p2));
    c.w3 = ComplexField(g, c.u3.values.conjugate());
    const CArray quad = printed_u1 ? CArray(p1.square()) : CArray(p2.square());
    c.u1 = ComplexField(g, 5.0 / 9.0 * p1.square().square() + 10.0 / 9.0 * p1.square() * p2 - 5.0 / 3.0 * quad -
                               20.0 / 9.0 * p1 * p3 - 10.0 / 9.0 * p4);
    c.w1 = ComplexField(g, c.u1.values.conjugate());
    return c;
}

namespace {

double eq12_residual(const L5Coefficients& c, const CArray& Vz) {
    const Grid& g = c.V.grid;
    const CArray& u3 = c.u3.values;
    const CArray lhs = Dzb(g, c.u1.values);
    const CArray t1 = 10.0 * Dz(c.V, 3), t2 = 3.0 * u3 * Vz,
                 t3 = Dz(g, u3) * c.V.values.cast<cplx>(), t4 = -Dz(g, Dzb(g, u3), 2);
    return relative_sup(lhs - t1 - t2 - t3 - t4, {&lhs, &t1, &t2, &t3, &t4});
}

}  // namespace

L5Residuals l5_residuals(const RealField& v) {
    const Grid& g = v.grid;
    L5Coefficients c = coefficients_L5(v);
    const CArray Vz = Dz(c.V), Vzb = Dzb(c.V);
    const CArray& u3 = c.u3.values;
    const CArray& w3 = c.w3.values;
    L5Residuals r;
    {
        const CArray a = Dzb(g, u3), b = 5.0 * Vz;
        r.eq11_u3 = relative_sup(a - b, {&a, &b});
        r.convention_lock = (a - b).abs().maxCoeff();
    }
    {
        const CArray a = Dz(g, w3), b = 5.0 * Vzb;
        r.eq11_w3 = relative_sup(a - b, {&a, &b});
    }
    {
        const CArray a = Dzb(g, w3), b = 5.0 * Vzb;
        r.eq11_w3_printed = relative_sup(a - b, {&a, &b});
    }
    r.eq12 = eq12_residual(c, Vz);
    {
        const CArray lhs = Dz(g, c.w1.values);
        const CArray t1 = 10.0 * Dzb(c.V, 3), t2 = 3.0 * w3 * Vzb,
                     t3 = Dzb(g, w3) * c.V.values.cast<cplx>(), t4 = -Dz(g, Dzb(g, w3, 2));
        r.eq13 = relative_sup(lhs - t1 - t2 - t3 - t4, {&lhs, &t1, &t2, &t3, &t4});
    }
    r.eq12_printed_u1 = eq12_residual(coefficients_L5(v, true), Vz);
    return r;
}

double L3Residuals::max() const { return std::max({example1_u, example1_w, theorem4_z, theorem4_zbar}); }

std::pair<ComplexField, ComplexField> coefficients_L3(const RealField& v) {
    ZJets z = z_jets(v, 2);
    ComplexField u(v.grid, -(z.p[1].square() + z.p[2]));
    return {u, ComplexField(v.grid, u.values.conjugate())};
}

L3Residuals l3_residuals(const RealField& v) {
    const Grid& g = v.grid;
    auto [u, w] = coefficients_L3(v);
    const RealField V(g, v.values.exp());
    const CArray Vz = Dz(V), Vzb = Dzb(V);
    L3Residuals r;
    {
        const CArray a = Dzb(g, u.values), b = 3.0 * Vz;
        r.example1_u = relative_sup(a - b, {&a, &b});
    }
    {
        const CArray a = Dz(g, w.values), b = 3.0 * Vzb;
        r.example1_w = relative_sup(a - b, {&a, &b});
    }
    // E = e^{-2v} - e^v - v_{z zbar}
    const RealField E(g, (-2.0 * v.values).exp() - v.values.exp() - 0.25 * Lap(v));
    const CArray Ec = E.values.cast<cplx>();
    {
        const CArray a = Dz(E), b = 2.0 * Dz(v) * Ec;
        r.theorem4_z = relative_sup(a + b, {&a, &b});
    }
    {
        const CArray a = Dzb(E), b = 2.0 * Dzb(v) * Ec;
        r.theorem4_zbar = relative_sup(a + b, {&a, &b});
    }
    return r;
}

const char* to_string(FlowScheme s) { return s == FlowScheme::rk4 ? "rk4" : "implicit-midpoint"; }

CArray flow_linear_symbol(const Grid& g) { return -(dz_symbol(g, 5, false) + dz_symbol(g, 5, true)) / 9.0; }

FlowDiagnostics flow_diagnostics(const RealField& v) {
    FlowDiagnostics f;
    f.area = integrate(RealField(v.grid, 2.0 * v.values.exp()));
    f.tzitzeica_residual = sup_norm(residual(v));
    DeformationData d = deformation_data(v);
    SystemResiduals r = system_residuals(v, d, forms_from(v, d).from_frame);
    f.eq_residuals = {r.eq5, r.eq7, r.eq8, r.eq9, r.eq10};
    f.nv2_mismatch = nv2_check(v).printed;
    return f;
}

double FlowResult::relative_area_drift() const {
    if (states.empty()) return 0.0;
    const double a0 = states.front().diagnostics.area;
    double worst = 0.0;
    for (const auto& s : states) worst = std::max(worst, std::abs(s.diagnostics.area - a0) / a0);
    return worst;
}

double FlowResult::max_tzitzeica_residual() const {
    double worst = 0.0;
    for (const auto& s : states) worst = std::max(worst, s.diagnostics.tzitzeica_residual);
    return worst;
}

namespace {

// Spectral right-hand side of v_t on a dealiased band; same formula as v_dot.
class FlowRhs {
public:
    explicit FlowRhs(const Grid& g) : g_(g), mask_(RArray::Zero(g.n1, g.n2)) {
        const int cut = dealias_cut(g);
        for (int j = 0; j < g.n2; ++j)
            for (int i = 0; i < g.n1; ++i)
                if (std::abs(mode_index(i, g.n1)) < cut && std::abs(mode_index(j, g.n2)) < cut) mask_(i, j) = 1.0;
        for (int k = 1; k <= 4; ++k) dz_[k] = dz_symbol(g, k, false);
        dx_ = derivative_symbol(g, 1, 0);
        dy_ = derivative_symbol(g, 0, 1);
        lin_ = flow_linear_symbol(g) * mask_.cast<cplx>();
    }

    const CArray& linear() const { return lin_; }
    CArray project(const CArray& h) const { return h * mask_.cast<cplx>(); }

    CArray operator()(const CArray& vh) const {
        const RArray v = ifft2(vh).real();
        ZJets z;
        for (int k = 1; k <= 4; ++k) z.p[k] = ifft2(vh * dz_[k]);
        const CArray phi = phi_field(v, z);
        const RArray ev = v.exp();
        const CArray g1 = fft2((ev * phi.real()).cast<cplx>()), g2 = fft2((ev * phi.imag()).cast<cplx>());
        const RArray div = ifft2(g1 * dx_ + g2 * dy_).real();
        return project(fft2(((-v).exp() * div / kSqrt2).cast<cplx>()));
    }

private:
    Grid g_;
    RArray mask_;
    std::array<CArray, 5> dz_;
    CArray dx_, dy_, lin_;
};

}  // namespace

FlowResult flow_integrate(const RealField& v0, double dt, int steps, const FlowOptions& opt) {
    if (!(dt > 0)) throw std::invalid_argument("flow_integrate: dt must be positive");
    if (steps < 0) throw std::invalid_argument("flow_integrate: steps must be non-negative");
    if (opt.record_every < 1) throw std::invalid_argument("flow_integrate: record_every must be >= 1");
    const Grid& g = v0.grid;
    FlowRhs rhs(g);
    const double nn = double(g.n1) * g.n2;
    CArray u = rhs.project(fft2(v0.values.cast<cplx>()));

    FlowResult out;
    auto record = [&](int step) {
        FlowState st;
        st.t = step * dt;
        st.v = RealField(g, ifft2(u).real());
        st.diagnostics = flow_diagnostics(st.v);
        out.states.push_back(std::move(st));
        if (!(out.states.back().diagnostics.tzitzeica_residual <= opt.abort_residual)) {
            out.truncated = true;
            out.flag = "residual";
        }
    };
    record(0);

    CArray damp;
    if (opt.scheme == FlowScheme::implicit_midpoint) damp = 1.0 / (1.0 - 0.5 * dt * rhs.linear());
    for (int n = 1; n <= steps && !out.truncated; ++n) {
        if (opt.scheme == FlowScheme::rk4) {
            const CArray k1 = rhs(u);
            const CArray k2 = rhs(u + 0.5 * dt * k1);
            const CArray k3 = rhs(u + 0.5 * dt * k2);
            const CArray k4 = rhs(u + dt * k3);
            u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        } else {
            // midpoint m = u + dt/2 (L m + N(m)), solved by fixed-point iteration on the nonlinear part
            CArray m = u;
            bool converged = false;
            for (int it = 0; it < opt.implicit_max_iter; ++it) {
                const CArray next = damp * (u + 0.5 * dt * (rhs(m) - rhs.linear() * m));
                const double change = (next - m).abs().maxCoeff() / nn;
                m = next;
                if (!std::isfinite(change)) break;
                if (change <= opt.implicit_tol) {
                    converged = true;
                    break;
                }
            }
            if (!converged) {
                out.truncated = true;
                out.flag = "implicit";
            }
            u = 2.0 * m - u;
        }
        out.steps_taken = n;
        if (!u.allFinite() || u.abs().maxCoeff() / nn > 1e6) {
            out.truncated = true;
            out.flag = "blowup";
            break;
        }
        if (n % opt.record_every == 0 || n == steps || out.truncated) record(n);
    }
    return out;
}

}  // namespace lagtori
