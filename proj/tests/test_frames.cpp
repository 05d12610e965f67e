#include "doctest.h"

#include "lagtori/frames.hpp"
#include "lagtori/hmk_family.hpp"
#include "lagtori/homogeneous.hpp"

#include <random>

using namespace lagtori;

namespace {

// The original (x, y) parametrization of an HMK torus, which is not conformal.
struct RawHMK {
    HMKLift lift;
    LiftJet jet(double x, double y) const { return lift.jet_xy(x, y); }
    Eigen::Vector2d beta_gradient(double, double) const { return {0, 0}; }
    double beta_laplacian(double, double) const { return 0; }
    double frequency() const { return lift.frequency(); }
};

static_assert(LiftSampler<HomogeneousLift>);
static_assert(LiftSampler<HMKLift>);

void check_su3(const FrameSample& s) {
    using M = Eigen::Matrix3cd;
    CHECK((s.R * s.R.adjoint() - M::Identity()).norm() < 1e-10);
    CHECK(std::abs(s.R.determinant() - 1.0) < 1e-10);
    double scale = std::max(1.0, s.A.norm() + s.B.norm());
    CHECK((s.A + s.A.adjoint()).norm() < 1e-10 * scale);
    CHECK((s.B + s.B.adjoint()).norm() < 1e-10 * scale);
    CHECK(std::abs(s.A.trace()) < 1e-10 * scale);
    CHECK(std::abs(s.B.trace()) < 1e-10 * scale);
}

}  // namespace

TEST_CASE("Clifford frame is constant") {
    HomogeneousLift cl(TorusTriple::clifford());
    auto f0 = build_frame(cl, 0, 0);
    // det(r, r_x, r_y) is a negative real at the origin: the principal branch is pi
    CHECK(std::abs(std::cos(f0.beta) + 1) < 1e-14);
    CHECK(std::abs(f0.beta_x) < 1e-12);
    CHECK(std::abs(f0.beta_y) < 1e-12);
    check_su3(f0);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int k = 0; k < 10; ++k) {
        auto f = build_frame(cl, u(rng), u(rng));
        CHECK(std::abs(f.beta - f0.beta) < 1e-10);
        CHECK(std::abs(f.F - f0.F) < 1e-9);
        CHECK(std::abs(f.G - f0.G) < 1e-9);
        CHECK((f.A - f0.A).norm() < 1e-9);
        CHECK((f.B - f0.B).norm() < 1e-9);
    }
}

TEST_CASE("frames lie in SU(3) on both families") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    HomogeneousLift hom(TorusTriple::normalized(1 / std::sqrt(2.0), 0.5, 0.5, 1e-12));
    for (int k = 0; k < 20; ++k) check_su3(build_frame(hom, u(rng), u(rng)));
    for (auto t : {HMKTriple(2, 1, -1), HMKTriple(4, 3, -2)}) {
        HMKLift lift(t);
        for (int k = 0; k < 10; ++k) check_su3(build_frame(lift, u(rng), u(rng)));
    }
}

TEST_CASE("beta gradient agrees with the closed form") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 20; ++k) {
        std::exponential_distribution<double> e(1.0);
        double a = e(rng), b = e(rng), c = e(rng), s = a + b + c;
        HomogeneousLift lift(TorusTriple::normalized(std::sqrt(a / s), std::sqrt(b / s), std::sqrt(c / s), 1e-12));
        auto f = build_frame(lift, u(rng), u(rng));
        Eigen::Vector2d g = lift.beta_gradient(0, 0);
        CHECK(std::abs(f.beta_x - g.x()) < 1e-10 * std::max(1.0, g.norm()));
        CHECK(std::abs(f.beta_y - g.y()) < 1e-10 * std::max(1.0, g.norm()));
        // tracked beta is the linear function through the origin value
        double b0 = track_beta(lift, 0, 0);
        double x = f.point.x(), y = f.point.y();
        CHECK(std::abs(f.beta - (b0 + g.x() * x + g.y() * y)) < 1e-9 * std::max(1.0, g.norm()));
    }
}

TEST_CASE("Lagrangian angle on the HMK family") {
    HMKLift lift(HMKTriple(1, 1, -1));
    auto f = build_frame(lift, 0.3, 0.2);
    cplx expected = cplx(0, 1) * std::exp(cplx(0, 2 * pi * 0.2));
    CHECK(std::abs(std::exp(cplx(0, f.beta)) - expected) < 1e-12);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1, 1);
    for (auto t : {HMKTriple(2, 1, -1), HMKTriple(3, 1, -5), HMKTriple(6, 6, -1)}) {
        HMKLift l(t);
        for (int k = 0; k < 10; ++k) {
            double x = 3 * u(rng), y = u(rng);
            auto s = build_frame(l, x, y);
            cplx e = cplx(0, 1) * std::exp(cplx(0, 2 * pi * (t.m + t.n + t.k) * y));
            CHECK(std::abs(std::exp(cplx(0, s.beta)) - e) < 1e-11);
            CHECK(std::abs(s.beta_y - 2 * pi * (t.m + t.n + t.k)) < 1e-9);
            CHECK(std::abs(s.beta_x) < 1e-9);
        }
    }
}

TEST_CASE("non-conformal lifts are rejected") {
    RawHMK raw{HMKLift(HMKTriple(2, 1, -1))};
    CHECK_THROWS_AS(build_frame(raw, 0.3, 0.1), std::invalid_argument);
}

TEST_CASE("frame equations R_x = AR, R_y = BR") {
    HomogeneousLift cl(TorusTriple::clifford());
    auto r = check_frame_odes(cl, 0.31, -0.7, 1e-3);
    CHECK(r.rx < 1e-9);
    CHECK(r.ry < 1e-9);

    HomogeneousLift gen(TorusTriple::normalized(0.4, 0.5, std::sqrt(1 - 0.41), 1e-12));
    double h = scaled_step(gen, 2e-2);
    auto coarse = check_frame_odes(gen, 0.2, 0.1, h);
    auto fine = check_frame_odes(gen, 0.2, 0.1, h / 2);
    CHECK(coarse.rx / fine.rx == doctest::Approx(16).epsilon(0.05));
    CHECK(coarse.ry / fine.ry == doctest::Approx(16).epsilon(0.05));

    Eigen::Matrix3cd bump = Eigen::Matrix3cd::Zero();
    bump(1, 2) = 0.1;
    auto bad = check_frame_odes(gen, 0.2, 0.1, scaled_step(gen, 1e-3), bump);
    CHECK(bad.rx > 0.05);

    HMKLift hmk(HMKTriple(2, 1, -1));
    auto rh = check_frame_odes(hmk, 0.4, 0.3, scaled_step(hmk, 1e-3));
    CHECK(rh.rx < 1e-7);
    CHECK(rh.ry < 1e-7);
}

TEST_CASE("Schrodinger operator annihilates the lift") {
    HomogeneousLift cl(TorusTriple::clifford());
    CHECK(check_schrodinger(cl, 0.2, 0.9).absolute < 1e-10);

    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1, 1);
    HomogeneousLift gen(TorusTriple::normalized(0.3, 0.6, std::sqrt(1 - 0.45), 1e-12));
    for (int k = 0; k < 20; ++k) {
        double x = u(rng), y = u(rng);
        CHECK(check_schrodinger(gen, x, y).absolute < 1e-10);
        CHECK(check_schrodinger(gen, x, y, -1).absolute > 0.1);
    }
    HMKLift hmk(HMKTriple(3, 2, -1));
    for (int k = 0; k < 10; ++k) CHECK(check_schrodinger(hmk, 2 * u(rng), u(rng)).relative < 1e-10);
}

TEST_CASE("compatibility system") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1, 1);
    for (auto t : {TorusTriple::clifford(), TorusTriple::normalized(0.3, 0.6, std::sqrt(1 - 0.45), 1e-12),
                   TorusTriple::normalized(0.8, 0.5, std::sqrt(1 - 0.89), 1e-12)}) {
        HomogeneousLift lift(t);
        auto c = check_compatibility(lift, u(rng), u(rng), scaled_step(lift, 1e-3));
        CHECK(c.eq_f < 1e-8);
        CHECK(c.eq_g < 1e-8);
        CHECK(c.eq_v < 1e-8);
        CHECK(c.zero_curvature < 1e-8);
    }
    HMKLift hmk(HMKTriple(2, 1, -1));
    for (int k = 0; k < 10; ++k) {
        auto c = check_compatibility(hmk, 3 * u(rng), u(rng), scaled_step(hmk, 1e-3));
        CHECK(c.zero_curvature < 1e-7);
        CHECK(c.eq_f < 1e-7);
        CHECK(c.eq_g < 1e-7);
        CHECK(c.eq_v < 1e-7);
    }
}
