#include "doctest.h"

#include "lagtori/homogeneous.hpp"

#include <algorithm>
#include <array>
#include <random>

using namespace lagtori;

namespace {

// Uniform point on the open positive octant of the unit sphere.
TorusTriple random_triple(std::mt19937_64& rng) {
    std::exponential_distribution<double> e(1.0);
    double a = e(rng), b = e(rng), c = e(rng), s = a + b + c;
    return TorusTriple::normalized(std::sqrt(a / s), std::sqrt(b / s), std::sqrt(c / s), 1e-12);
}

const TorusTriple kGeneric = TorusTriple::normalized(1 / std::sqrt(2.0), 0.5, 0.5, 1e-12);

}  // namespace

TEST_CASE("triple validation") {
    CHECK_THROWS_AS(TorusTriple(0.5, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(TorusTriple(1.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(TorusTriple(-0.6, 0.6, std::sqrt(0.28)), std::invalid_argument);
    CHECK_NOTHROW(TorusTriple(0.6, 0.0 + 0.6, std::sqrt(0.28)));
    auto n = TorusTriple::normalized(0.57735, 0.57735, 0.57735, 1e-4);
    CHECK(n.r1 == doctest::Approx(1 / std::sqrt(3.0)));
    CHECK_THROWS(TorusTriple::normalized(0.5, 0.5, 0.5, 1e-4));
}

TEST_CASE("lift at the origin and its horizontality") {
    auto j = lift(TorusTriple::clifford(), 0, 0);
    for (int c = 0; c < 3; ++c) CHECK(std::abs(j.r[c] - 1 / std::sqrt(3.0)) < 1e-15);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int k = 0; k < 20; ++k) {
        auto t = random_triple(rng);
        const double q1 = t.r1 * t.r1, s = 1 - q1;
        for (int p = 0; p < 100; ++p) {
            auto l = lift(t, u(rng), u(rng));
            CHECK(std::abs(herm(l.r, l.r) - 1.0) < 1e-12);
            CHECK(std::abs(herm(l.rx, l.r)) < 1e-12);
            CHECK(std::abs(herm(l.ry, l.r)) < 1e-12);
            double scale = herm(l.rx, l.rx).real();
            CHECK(std::abs(herm(l.rx, l.ry)) < 1e-12 * std::max(1.0, scale));
            CHECK(std::abs(scale - 4 * pi * pi * q1 / s) < 1e-12 * scale);
            CHECK(std::abs(herm(l.ry, l.ry).real() - scale) < 1e-12 * scale);
        }
    }
}

TEST_CASE("Clifford invariants") {
    auto inv = invariants(TorusTriple::clifford());
    CHECK(inv.conformal_factor == doctest::Approx(2 * pi * pi).epsilon(1e-14));
    CHECK(std::abs(inv.beta_x) < 1e-14);
    CHECK(std::abs(inv.beta_y) < 1e-14);
    CHECK(inv.potential_V == doctest::Approx(4 * pi * pi).epsilon(1e-14));
}

TEST_CASE("lattice of the (1/sqrt2, 1/2, 1/2) torus") {
    auto inv = invariants(kGeneric);
    CHECK(inv.lattice.e1.x() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(inv.lattice.e1.y() == 0.0);
    CHECK(inv.lattice.e2.x() == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(inv.lattice.e2.y() == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-14));
}

TEST_CASE("Bloch property of the lift") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 50; ++k) {
        auto t = random_triple(rng);
        auto inv = invariants(t);
        CHECK(std::abs(std::abs(std::exp(cplx(0, inv.bloch_p1))) - 1) < 1e-12);
        double x = u(rng), y = u(rng);
        auto base = lift(t, x, y);
        std::array<std::pair<Eigen::Vector2d, double>, 2> shifts{{{inv.lattice.e1, inv.bloch_p1}, {inv.lattice.e2, inv.bloch_p2}}};
        for (auto& [e, p] : shifts) {
            auto moved = lift(t, x + e.x(), y + e.y());
            CHECK((moved.r - std::exp(cplx(0, p)) * base.r).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("closed-form energy") {
    auto cl = TorusTriple::clifford();
    const double ecl = 4 * pi * pi / (3 * std::sqrt(3.0));
    CHECK(std::abs(energy_closed(cl) - ecl) < 1e-13 * ecl);
    CHECK(std::abs(energy_quadrature(cl) - ecl) < 1e-13 * ecl);
    CHECK(clifford_energy() == doctest::Approx(7.5976250103520751621).epsilon(1e-15));

    // (1/sqrt2, 1/2, 1/2): (1/2)(3/4)(3/4) pi^2 / (2 (1/sqrt2)(1/2)(1/2)) = 9 sqrt2 pi^2 / 16
    CHECK(energy_closed(kGeneric) / (pi * pi) == doctest::Approx(9 * std::sqrt(2.0) / 16).epsilon(1e-14));
    CHECK(energy_closed(kGeneric) == doctest::Approx(7.85122).epsilon(1e-6));

    // unsimplified form of the same energy
    auto expanded = [](const TorusTriple& t) {
        const double a = t.r1, b = t.r2, c = t.r3, a2 = a * a, b2 = b * b, c2 = c * c;
        return 4 * pi * pi * a * b * c +
               pi * pi * (a2 * b2 * b2 + b2 * c2 - 8 * a2 * b2 * c2 + 9 * a2 * a2 * b2 * c2 + a2 * c2 * c2) /
                   (2 * a * b * c * (b2 + c2));
    };
    std::mt19937_64 rng(3);
    for (int k = 0; k < 200; ++k) {
        auto t = random_triple(rng);
        double e = energy_closed(t);
        CHECK(std::abs(expanded(t) - e) < 1e-11 * e);
    }
}

TEST_CASE("energy is symmetric under permutations") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 100; ++k) {
        auto t = random_triple(rng);
        std::array<double, 3> r{t.r1, t.r2, t.r3};
        std::sort(r.begin(), r.end());
        double e0 = energy_closed(t);
        do {
            CHECK(std::abs(energy_closed(TorusTriple(r[0], r[1], r[2])) - e0) < 1e-13 * e0);
        } while (std::next_permutation(r.begin(), r.end()));
    }
}

TEST_CASE("quadrature, decomposition and potential identities") {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 10000; ++k) {
        auto t = random_triple(rng);
        double e = energy_closed(t);
        CHECK(std::abs(energy_quadrature(t) - e) < 1e-12 * e);
        auto d = decompose(t);
        CHECK(std::abs(d.area + d.willmore / 8 - e) < 1e-12 * e);
        CHECK(e >= clifford_energy() * (1 - 1e-15));
        auto inv = invariants(t);
        double V = 2 * inv.conformal_factor + 0.25 * (inv.beta_x * inv.beta_x + inv.beta_y * inv.beta_y);
        CHECK(std::abs(V - inv.potential_V) < 1e-11 * V);
    }
    auto cl = decompose(TorusTriple::clifford());
    CHECK(std::abs(cl.willmore) < 1e-12);
    CHECK(cl.area == doctest::Approx(clifford_energy()).epsilon(1e-14));
    auto g = decompose(kGeneric);
    CHECK(g.area == doctest::Approx(pi * pi / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("energy blows up toward the simplex boundary") {
    double prev = 0;
    for (double r1 = 0.3; r1 > 1e-4; r1 *= 0.5) {
        double rest = std::sqrt((1 - r1 * r1) / 2);
        double e = energy_closed(TorusTriple(r1, rest, rest));
        CHECK(e > prev);
        prev = e;
    }
    CHECK(prev > 1e3);
}

TEST_CASE("multistart simplex minimization") {
    auto res = minimize_energy();
    const double c = 1 / std::sqrt(3.0);
    CHECK(res.trace.size() == 25);
    CHECK(std::abs(res.argmin.r1 - c) < 1e-6);
    CHECK(std::abs(res.argmin.r2 - c) < 1e-6);
    CHECK(std::abs(res.argmin.r3 - c) < 1e-6);
    CHECK(std::abs(res.value - clifford_energy()) < 1e-10);
    for (auto& tr : res.trace) CHECK(tr.final_value <= tr.start_value);

    MinimizeConfig one;
    one.starts = {Eigen::Vector2d(1 / 3.0, 1 / 3.0)};
    auto r1 = minimize_energy(one);
    CHECK(r1.trace[0].improvements == 0);
    CHECK(std::abs(r1.value - r1.trace[0].start_value) < 1e-13 * r1.value);

    MinimizeConfig bad;
    bad.starts = {Eigen::Vector2d(0.0, 0.5)};
    CHECK_THROWS_AS(minimize_energy(bad), std::invalid_argument);
    bad.starts = {Eigen::Vector2d(0.5, 0.5)};
    CHECK_THROWS_AS(minimize_energy(bad), std::invalid_argument);
}

TEST_CASE("simplex scan") {
    auto rows = scan_simplex(10);
    CHECK(rows.size() == 36);
    for (auto& r : rows) CHECK(r.energy >= clifford_energy());
    CHECK_THROWS(scan_simplex(2));
}
