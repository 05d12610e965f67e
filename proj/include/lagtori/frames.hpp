#pragma once

#include "lagtori/field2d.hpp"
#include "lagtori/lift.hpp"

#include <algorithm>
#include <concepts>
#include <sstream>
#include <stdexcept>

namespace lagtori {

// An analytic conformal horizontal lift with closed-form Lagrangian-angle derivatives.
template <typename L>
concept LiftSampler = requires(const L& l, double x, double y) {
    { l.jet(x, y) } -> std::convertible_to<LiftJet>;
    { l.beta_gradient(x, y) } -> std::convertible_to<Eigen::Vector2d>;
    { l.beta_laplacian(x, y) } -> std::convertible_to<double>;
    { l.frequency() } -> std::convertible_to<double>;
};

struct FrameSample {
    Eigen::Vector2d point;
    LiftJet jet;
    Eigen::Matrix3cd R, A, B;
    double v, beta, F, G;
    double vx, vy, beta_x, beta_y;  // from the logarithmic derivative of det(r, r_x, r_y)
};

namespace detail {

inline cplx det_rows(const Eigen::Vector3cd& a, const Eigen::Vector3cd& b, const Eigen::Vector3cd& c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
}

inline double nearest_branch(double phase, double ref) {
    return phase + 2.0 * pi * std::round((ref - phase) / (2.0 * pi));
}

struct AngleJet {
    double phase;
    Eigen::Vector2d grad;
};

template <LiftSampler L>
AngleJet angle_at(const L& lift, double x, double y) {
    auto j = lift.jet(x, y);
    const cplx D = det_rows(j.r, j.rx, j.ry);
    const cplx Dx = det_rows(j.r, j.rxx, j.ry) + det_rows(j.r, j.rx, j.rxy);
    const cplx Dy = det_rows(j.r, j.rxy, j.ry) + det_rows(j.r, j.rx, j.ryy);
    return {std::arg(D), Eigen::Vector2d((Dx / D).imag(), (Dy / D).imag())};
}

// Continues beta from a to b along the segment, bisecting until the angle changes by
// less than 0.5 rad per piece; each piece picks the branch nearest the trapezoid prediction.
template <LiftSampler L>
double continue_beta(const L& lift, const Eigen::Vector2d& a, const AngleJet& ja, double beta_a,
                     const Eigen::Vector2d& b, int depth = 0) {
    const AngleJet jb = angle_at(lift, b.x(), b.y());
    const Eigen::Vector2d d = b - a;
    const double swing = std::max(ja.grad.norm(), jb.grad.norm()) * d.norm();
    if (swing <= 0.5 || depth > 60) return nearest_branch(jb.phase, beta_a + 0.5 * (ja.grad + jb.grad).dot(d));
    const Eigen::Vector2d m = 0.5 * (a + b);
    const double bm = continue_beta(lift, a, ja, beta_a, m, depth + 1);
    return continue_beta(lift, m, angle_at(lift, m.x(), m.y()), bm, b, depth + 1);
}

inline double fd1(double fm2, double fm1, double fp1, double fp2, double h) {
    return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
}

template <typename M>
M fd1(const M& fm2, const M& fm1, const M& fp1, const M& fp2, double h) {
    return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
}

inline double normalized(double residual, double dominant) { return dominant > 1.0 ? residual / dominant : residual; }

}  // namespace detail

// Lagrangian angle at (x, y) continued from the principal branch at the origin.
template <LiftSampler L>
double track_beta(const L& lift, double x, double y) {
    const auto j0 = detail::angle_at(lift, 0.0, 0.0);
    return detail::continue_beta(lift, Eigen::Vector2d::Zero(), j0, j0.phase, Eigen::Vector2d(x, y));
}

// Frame at (x, y) with beta taken on the branch nearest beta_ref.
template <LiftSampler L>
FrameSample build_frame_near(const L& lift, double x, double y, double beta_ref, double conformal_tol = 1e-9) {
    using detail::det_rows;
    FrameSample s;
    s.point = {x, y};
    s.jet = lift.jet(x, y);
    const auto& j = s.jet;
    const double gxx = herm(j.rx, j.rx).real(), gyy = herm(j.ry, j.ry).real();
    if (std::abs(gxx - gyy) > conformal_tol * std::max(gxx, gyy)) {
        std::ostringstream msg;
        msg << "build_frame: lift is not conformal at (" << x << ", " << y << "): |r_x|^2 = " << gxx
            << ", |r_y|^2 = " << gyy;
        throw std::invalid_argument(msg.str());
    }
    const double ev = 0.5 * gxx;
    s.v = std::log(ev);

    const cplx D = det_rows(j.r, j.rx, j.ry);
    const cplx Dx = det_rows(j.r, j.rxx, j.ry) + det_rows(j.r, j.rx, j.rxy);
    const cplx Dy = det_rows(j.r, j.rxy, j.ry) + det_rows(j.r, j.rx, j.ryy);
    const cplx lx = Dx / D, ly = Dy / D;
    s.vx = lx.real(), s.beta_x = lx.imag();
    s.vy = ly.real(), s.beta_y = ly.imag();
    s.beta = detail::nearest_branch(std::arg(D), beta_ref);

    const cplx I(0.0, 1.0);
    const cplx c = std::exp(-0.5 * s.v - 0.5 * I * s.beta) / std::sqrt(2.0);
    s.R.row(0) = j.r.transpose();
    s.R.row(1) = c * j.rx.transpose();
    s.R.row(2) = c * j.ry.transpose();

    s.F = (-(herm(j.rxy, j.ry) - ev * lx) / (2.0 * I)).real();
    s.G = ((herm(j.rxy, j.rx) - ev * ly) / (2.0 * I)).real();

    const double emv = 1.0 / ev;
    const cplx up = std::sqrt(2.0) * std::exp(0.5 * (s.v + I * s.beta));
    const cplx dn = -std::sqrt(2.0) * std::exp(0.5 * (s.v - I * s.beta));
    const double ga = emv * s.G + 0.5 * s.beta_y, fb = -emv * s.F + 0.5 * s.beta_x;
    s.A << 0.0, up, 0.0,
           dn, I * s.F * emv, -0.5 * s.vy + I * ga,
           0.0, 0.5 * s.vy + I * ga, -I * s.F * emv;
    s.B << 0.0, 0.0, up,
           0.0, I * s.G * emv, 0.5 * s.vx + I * fb,
           dn, -0.5 * s.vx + I * fb, -I * s.G * emv;
    return s;
}

template <LiftSampler L>
FrameSample build_frame(const L& lift, double x, double y, double conformal_tol = 1e-9) {
    return build_frame_near(lift, x, y, track_beta(lift, x, y), conformal_tol);
}

// Finite-difference step h rescaled to the lift's fastest oscillation (h is the step at unit frequency 2 pi).
template <LiftSampler L>
double scaled_step(const L& lift, double h) {
    return h * 2.0 * pi / std::max(2.0 * pi, double(lift.frequency()));
}

struct FrameOdeResidual {
    double rx, ry;  // Frobenius norms of R_x - A R and R_y - B R
};

template <LiftSampler L>
FrameOdeResidual check_frame_odes(const L& lift, double x, double y, double h,
                                  const Eigen::Matrix3cd& dA = Eigen::Matrix3cd::Zero(),
                                  const Eigen::Matrix3cd& dB = Eigen::Matrix3cd::Zero()) {
    auto c = build_frame(lift, x, y);
    auto at = [&](double px, double py) { return build_frame_near(lift, px, py, c.beta).R; };
    Eigen::Matrix3cd Rx = detail::fd1<Eigen::Matrix3cd>(at(x - 2 * h, y), at(x - h, y), at(x + h, y), at(x + 2 * h, y), h);
    Eigen::Matrix3cd Ry = detail::fd1<Eigen::Matrix3cd>(at(x, y - 2 * h), at(x, y - h), at(x, y + h), at(x, y + 2 * h), h);
    return {(Rx - (c.A + dA) * c.R).norm(), (Ry - (c.B + dB) * c.R).norm()};
}

struct SchrodingerResidual {
    double absolute;  // max_j |(L r)_j|
    double relative;  // absolute / dominant term when that exceeds 1
};

// L = (d_x - s (i/2) beta_x)^2 + (d_y - s (i/2) beta_y)^2 + V with V = 4e^v + |grad beta|^2/4 + (i/2) lap beta.
// sign = +1 is the convention of the operator; sign = -1 is the rejected reading.
template <LiftSampler L>
SchrodingerResidual check_schrodinger(const L& lift, double x, double y, int sign = 1) {
    const auto j = lift.jet(x, y);
    const Eigen::Vector2d gb = lift.beta_gradient(x, y);
    const double lb = lift.beta_laplacian(x, y);
    const double ev = 0.5 * herm(j.rx, j.rx).real();
    const cplx I(0.0, 1.0);
    const cplx V = 4.0 * ev + 0.25 * gb.squaredNorm() + 0.5 * I * lb;
    const double s = sign;
    Eigen::Vector3cd lap = j.rxx + j.ryy;
    Eigen::Vector3cd drift = -I * s * (gb.x() * j.rx + gb.y() * j.ry);
    Eigen::Vector3cd zero = -s * 0.5 * I * lb * j.r - 0.25 * gb.squaredNorm() * j.r + V * j.r;
    Eigen::Vector3cd Lr = lap + drift + zero;
    double res = Lr.cwiseAbs().maxCoeff();
    double dom = std::max({lap.cwiseAbs().maxCoeff(), drift.cwiseAbs().maxCoeff(), (V * j.r).cwiseAbs().maxCoeff()});
    return {res, detail::normalized(res, dom)};
}

struct CompatibilityResidual {
    double eq_f;            // 2F_x + 2G_y = (beta_xx - beta_yy) e^v
    double eq_g;            // 2F_y - 2G_x = (beta_x v_y + beta_y v_x) e^v
    double eq_v;            // lap v = 4(F^2 + G^2) e^{-2v} - 4e^v - 2(F beta_x - G beta_y) e^{-v}
    double zero_curvature;  // ||A_y - B_x + [A, B]||
};

template <LiftSampler L>
CompatibilityResidual check_compatibility(const L& lift, double x, double y, double h) {
    const auto c = build_frame(lift, x, y);
    auto at = [&](double px, double py) { return build_frame_near(lift, px, py, c.beta); };
    const FrameSample xm2 = at(x - 2 * h, y), xm1 = at(x - h, y), xp1 = at(x + h, y), xp2 = at(x + 2 * h, y);
    const FrameSample ym2 = at(x, y - 2 * h), ym1 = at(x, y - h), yp1 = at(x, y + h), yp2 = at(x, y + 2 * h);
    auto dx = [&](auto get) { return detail::fd1(get(xm2), get(xm1), get(xp1), get(xp2), h); };
    auto dy = [&](auto get) { return detail::fd1(get(ym2), get(ym1), get(yp1), get(yp2), h); };

    const double Fx = dx([](const FrameSample& s) { return s.F; });
    const double Fy = dy([](const FrameSample& s) { return s.F; });
    const double Gx = dx([](const FrameSample& s) { return s.G; });
    const double Gy = dy([](const FrameSample& s) { return s.G; });
    const double bxx = dx([](const FrameSample& s) { return s.beta_x; });
    const double byy = dy([](const FrameSample& s) { return s.beta_y; });
    const double lapv = dx([](const FrameSample& s) { return s.vx; }) + dy([](const FrameSample& s) { return s.vy; });
    const double ev = std::exp(c.v);

    CompatibilityResidual out{};
    {
        double lhs = 2 * Fx + 2 * Gy, rhs = (bxx - byy) * ev;
        out.eq_f = detail::normalized(std::abs(lhs - rhs), std::max({std::abs(2 * Fx), std::abs(2 * Gy), std::abs(rhs)}));
    }
    {
        double lhs = 2 * Fy - 2 * Gx, rhs = (c.beta_x * c.vy + c.beta_y * c.vx) * ev;
        out.eq_g = detail::normalized(std::abs(lhs - rhs), std::max({std::abs(2 * Fy), std::abs(2 * Gx), std::abs(rhs)}));
    }
    {
        double t1 = 4 * (c.F * c.F + c.G * c.G) / (ev * ev), t2 = 4 * ev, t3 = 2 * (c.F * c.beta_x - c.G * c.beta_y) / ev;
        out.eq_v = detail::normalized(std::abs(lapv - (t1 - t2 - t3)),
                                      std::max({std::abs(lapv), std::abs(t1), std::abs(t2), std::abs(t3)}));
    }
    {
        Eigen::Matrix3cd Ay = dy([](const FrameSample& s) { return Eigen::Matrix3cd(s.A); });
        Eigen::Matrix3cd Bx = dx([](const FrameSample& s) { return Eigen::Matrix3cd(s.B); });
        Eigen::Matrix3cd comm = c.A * c.B - c.B * c.A;
        double res = (Ay - Bx + comm).norm();
        out.zero_curvature = detail::normalized(res, std::max({Ay.norm(), Bx.norm(), comm.norm()}));
    }
    return out;
}

}  // namespace lagtori
