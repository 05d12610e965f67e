#include "doctest.h"

#include "lagtori/hmk_family.hpp"
#include "lagtori/homogeneous.hpp"

using namespace lagtori;

TEST_CASE("triple validation and gcd") {
    CHECK_THROWS_AS(HMKTriple(1, 2, -1), std::invalid_argument);
    CHECK_THROWS_AS(HMKTriple(2, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(HMKTriple(2, 0, -1), std::invalid_argument);
    HMKTriple a(1, 1, -1), b(2, 1, -1), c(6, 6, -1);
    CHECK(a.p == 2);
    CHECK(a.r == 1);
    CHECK(b.p == 1);
    CHECK(b.r == 2);
    CHECK(c.p == 7);
    CHECK(c.r == 1);
}

TEST_CASE("profile curve constraints") {
    auto j = profile(HMKTriple(1, 1, -1), pi / 2);
    CHECK(j.u[0] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(std::abs(j.u[1]) < 1e-15);
    CHECK(j.u[2] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
    for (int m = 1; m <= 6; ++m)
        for (int n = 1; n <= m; ++n)
            for (int k = -6; k <= -1; ++k) {
                HMKTriple t(m, n, k);
                for (int i = 0; i < 50; ++i) {
                    double x = 0.13 * i;
                    auto p = profile(t, x);
                    CHECK(std::abs(p.u.squaredNorm() - 1) < 1e-12);
                    CHECK(std::abs(m * p.u[0] * p.u[0] + n * p.u[1] * p.u[1] + k * p.u[2] * p.u[2]) < 1e-12);
                    if (m == n) CHECK(std::abs(p.u[2] - std::sqrt(double(n) / (n - k))) < 1e-14);
                    // derivatives of the constraints
                    CHECK(std::abs(p.u.dot(p.du)) < 1e-12);
                    CHECK(std::abs(p.u.dot(p.d2u) + p.du.squaredNorm()) < 1e-11);
                }
            }
}

TEST_CASE("metric coefficients") {
    for (double x : {0.0, 0.4, 1.9}) {
        auto g = metrics(HMKTriple(1, 1, -1), x);
        CHECK(g.g11 == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(g.g22 == doctest::Approx(4 * pi * pi).epsilon(1e-15));
    }
    CHECK(metrics(HMKTriple(2, 1, -1), 0.0).g11 == doctest::Approx(1 / 3.0).epsilon(1e-15));

    for (int m = 1; m <= 6; ++m)
        for (int n = 1; n <= m; ++n)
            for (int k = -6; k <= -1; ++k) {
                HMKTriple t(m, n, k);
                HMKLift lift(t);
                for (int i = 0; i < 1000; ++i) {
                    double x = 2 * pi * i / 1000;
                    auto g = metrics(t, x);
                    CHECK(g.g11 > 0);
                    CHECK(g.g22 > 0);
                    if (i % 100 == 7) {
                        auto j = lift.jet_xy(x, 0.3);
                        CHECK(std::abs(herm(j.rx, j.rx).real() - g.g11) < 1e-12 * g.g11);
                        CHECK(std::abs(herm(j.ry, j.ry).real() - g.g22) < 1e-12 * g.g22);
                        auto h = 1e-5;
                        double d11 = (metrics(t, x + h).g11 - metrics(t, x - h).g11) / (2 * h);
                        CHECK(std::abs(d11 - g.dg11) < 1e-6 * std::max(1.0, std::abs(g.dg11)));
                    }
                }
            }
}

TEST_CASE("integrals of the (1,1,-1) torus") {
    HMKTriple t(1, 1, -1);
    const double s2p2 = std::sqrt(2.0) * pi * pi;
    CHECK(area(t) == doctest::Approx(s2p2).epsilon(1e-13));
    CHECK(willmore(t) == doctest::Approx(s2p2).epsilon(1e-13));
    CHECK(std::abs(energy(t) - 9 * pi * pi / (4 * std::sqrt(2.0))) < 1e-12);
    CHECK(std::abs(energy_single(t) - 9 * pi * pi / (4 * std::sqrt(2.0))) < 1e-12);
}

TEST_CASE("integrals against high-precision reference values") {
    struct Ref {
        int m, n, k;
        double a, w, e;
    };
    // 30-digit adaptive quadrature of the integrands, rounded to double
    const Ref refs[] = {
        {2, 1, -1, 31.395168496777153328, 84.735054887450225298, 41.987050357708431491},
        {3, 2, -5, 114.3467078116651824, 0.0, 114.3467078116651824},
        {6, 1, -6, 152.05226154277421699, 8.1322130068693825773, 153.06878816863288981},
        {6, 6, -1, 5.2214160750469502911, 105.29855751344683087, 18.38373576422780415},
        {4, 2, -2, 31.395168496777153328, 84.735054887450225298, 41.987050357708431491},
    };
    for (auto& r : refs) {
        HMKTriple t(r.m, r.n, r.k);
        CHECK(area(t) == doctest::Approx(r.a).epsilon(1e-12));
        CHECK(std::abs(willmore(t) - r.w) < 1e-12 * std::max(1.0, r.w));
        CHECK(energy(t) == doctest::Approx(r.e).epsilon(1e-12));
        CHECK(energy_single(t) == doctest::Approx(r.e).epsilon(1e-12));
    }
    CHECK(energy(HMKTriple(2, 1, -1)) / (pi * pi) == doctest::Approx(4.25417763989).epsilon(1e-10));
}

TEST_CASE("bound chain") {
    auto a = audit_bound(HMKTriple(1, 1, -1));
    CHECK(a.chain_holds);
    CHECK(a.bound_chain[2] == doctest::Approx(1.5 * pi * pi).epsilon(1e-15));
    CHECK(a.bound_chain[2] < a.energy);
    auto b = audit_bound(HMKTriple(2, 1, -1));
    CHECK(b.p == 1);
    CHECK(b.r == 2);
    CHECK(b.bound_chain[2] == doctest::Approx(4 * pi * pi).epsilon(1e-15));
    CHECK(b.energy > b.bound_chain[2]);

    for (auto& row : scan(6, 6, -6)) {
        CHECK_MESSAGE(row.chain_holds, row.m, ",", row.n, ",", row.k, " ", row.failure);
        CHECK(row.margin > 0);
        CHECK(row.bound_chain[0] <= row.energy * (1 + 1e-10));
        CHECK(row.bound_chain[1] >= row.bound_chain[2]);
        CHECK(std::abs(row.energy - (row.area + row.willmore / 8)) < 1e-12 * row.energy);
    }
}

TEST_CASE("scan enumeration") {
    auto rows = scan(3, 3, -3);
    CHECK(rows.size() == 18);
    for (auto& r : rows) CHECK(r.energy > 7.598);
    CHECK(rows.front().m == 1);
    CHECK(rows.front().k == -3);
    CHECK(rows.back().m == 3);
    CHECK(rows.back().n == 3);
    CHECK(rows.back().k == -1);
    auto one = audit_bound(HMKTriple(1, 1, -1));
    for (auto& r : rows)
        if (r.m == 1 && r.n == 1 && r.k == -1) CHECK(r.energy == one.energy);
    CHECK(scan(0, 3, -3).empty());
    CHECK(scan(3, 3, 0).empty());
}

TEST_CASE("conformal reparametrization") {
    for (auto t : {HMKTriple(2, 1, -1), HMKTriple(5, 2, -3), HMKTriple(1, 1, -1)}) {
        HMKLift lift(t);
        for (double xi : {0.0, 0.37, 1.5, 4.0, 7.5}) {
            double x = lift.x_of_xi(xi);
            CHECK(std::abs(lift.xi_of_x(x) - xi) < 1e-13);
            auto j = lift.jet(xi, 0.21);
            double gxx = herm(j.rx, j.rx).real(), gyy = herm(j.ry, j.ry).real();
            CHECK(std::abs(gxx - gyy) < 1e-12 * gyy);
            // second derivative against differences of the first
            double h = 1e-6;
            Eigen::Vector3cd fd = (lift.jet(xi + h, 0.21).rx - lift.jet(xi - h, 0.21).rx) / (2 * h);
            CHECK((fd - j.rxx).cwiseAbs().maxCoeff() < 1e-6 * std::max(1.0, j.rxx.cwiseAbs().maxCoeff()) + 1e-7);
        }
    }
}
