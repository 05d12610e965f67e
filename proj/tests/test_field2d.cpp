#include "doctest.h"

#include "lagtori/field2d.hpp"
#include "lagtori/pfld.hpp"

#include <random>
#include <sstream>

using namespace lagtori;

namespace {

RealField smooth_field(const Grid& g) {
    return RealField::sample(g, [&](double x, double y) {
        double a = 2 * pi * x / g.L1, b = 2 * pi * y / g.L2;
        return std::exp(0.3 * std::sin(a) * std::cos(2 * b)) + 0.2 * std::cos(3 * a + b);
    });
}

}  // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(Grid(7, 8, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(Grid(6, 6, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(Grid(8, 8, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(Lattice2(Eigen::Vector2d(1, 2), Eigen::Vector2d(2, 4)), std::invalid_argument);
    CHECK(Grid(8, 10, 1, 2).lattice().cell_area() == doctest::Approx(2.0));
}

TEST_CASE("derivative of a constant vanishes") {
    Grid g = Grid::square(16, 3.0);
    RealField c = RealField::sample(g, [](double, double) { return 2.5; });
    for (int ax = 0; ax <= 3; ++ax)
        for (int ay = 0; ax + ay <= 5; ++ay) {
            if (ax + ay == 0) continue;
            CHECK(sup_norm(derivative(c, ax, ay)) < 1e-13);
        }
}

TEST_CASE("spectral derivative of sin") {
    const double L = 1.7;
    Grid g = Grid::square(64, L);
    RealField f = RealField::sample(g, [&](double x, double) { return std::sin(2 * pi * x / L); });
    RealField d = derivative(f, 1, 0);
    double err = 0;
    for (int j = 0; j < 64; ++j)
        for (int i = 0; i < 64; ++i)
            err = std::max(err, std::abs(d(i, j) - 2 * pi / L * std::cos(2 * pi * g.x(i) / L)));
    CHECK(err < 1e-12);
    CHECK(sup_norm(derivative(f, 0, 1)) < 1e-13);
}

TEST_CASE("derivative order and grid limits") {
    Grid g = Grid::square(16, 1.0);
    RealField f(g);
    CHECK_THROWS_AS(derivative(f, 3, 3), std::invalid_argument);
    CHECK_THROWS_AS(derivative(f, -1, 0), std::invalid_argument);
    CHECK_THROWS_AS(dz(f, 6), std::invalid_argument);
    CHECK_NOTHROW(derivative(f, 0, 5));
}

TEST_CASE("spectral exactness on a trigonometric polynomial") {
    Grid g(32, 16, 2.0, 3.0);
    auto trig = [&](double x, double y) {
        return std::cos(2 * pi * 5 * x / 2.0 + 1.0) * std::sin(2 * pi * 3 * y / 3.0);
    };
    RealField f = RealField::sample(g, trig);
    const double kx = 2 * pi * 5 / 2.0, ky = 2 * pi * 3 / 3.0;
    // d^2/dx^2 d^3/dy^3: kx^2 * ky^3 times a shifted product
    RealField d = derivative(f, 2, 3);
    RealField ref = RealField::sample(g, [&](double x, double y) {
        return kx * kx * ky * ky * ky * std::cos(2 * pi * 5 * x / 2.0 + 1.0) * std::cos(2 * pi * 3 * y / 3.0);
    });
    CHECK(sup_norm(RealField(g, d.values - ref.values)) < 1e-12 * sup_norm(ref));
}

TEST_CASE("complex-coordinate derivatives") {
    const double L = 2.3;
    Grid g = Grid::square(64, L);
    ComplexField e = ComplexField::sample(g, [&](double x, double) { return std::exp(cplx(0, 2 * pi * x / L)); });
    ComplexField d = dzbar(e);
    double err = 0;
    for (int j = 0; j < 64; ++j)
        for (int i = 0; i < 64; ++i) err = std::max(err, std::abs(d(i, j) - cplx(0, pi / L) * e(i, j)));
    CHECK(err < 1e-12);

    RealField f = smooth_field(g);
    ComplexField a = dz(f), b = dzbar(f);
    CHECK((a.values.conjugate() - b.values).abs().maxCoeff() < 1e-13);

    ComplexField lap4 = dz(dzbar(f));
    RealField lap = laplacian(f);
    CHECK((4.0 * lap4.values - lap.values.cast<cplx>()).abs().maxCoeff() < 1e-12 * std::max(1.0, sup_norm(lap)));
    RealField lap2 = RealField(g, derivative(f, 2, 0).values + derivative(f, 0, 2).values);
    CHECK((lap.values - lap2.values).abs().maxCoeff() < 1e-11);

    // dz^2 agrees with two applications of dz
    ComplexField twice = dz(dz(f)), direct = dz(f, 2);
    CHECK((twice.values - direct.values).abs().maxCoeff() < 1e-11);
}

TEST_CASE("integration") {
    Grid g = Grid::square(16, 2 * pi);
    CHECK(integrate(RealField::sample(g, [](double, double) { return 1.0; })) == doctest::Approx(4 * pi * pi));
    Grid u = Grid::square(32, 1.0);
    CHECK(std::abs(integrate(RealField::sample(u, [](double x, double) { return std::sin(2 * pi * x); }))) < 1e-14);
    CHECK(integrate(RealField::sample(u, [](double x, double) { return std::pow(std::sin(2 * pi * x), 2); })) ==
          doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("integration by parts") {
    Grid g(32, 24, 1.3, 0.9);
    RealField f = smooth_field(g);
    RealField h = RealField::sample(g, [&](double x, double y) {
        return std::cos(2 * pi * x / g.L1 - 0.4) * std::exp(0.2 * std::sin(2 * pi * y / g.L2));
    });
    double lhs = integrate(RealField(g, f.values * derivative(h, 1, 0).values));
    double rhs = -integrate(RealField(g, h.values * derivative(f, 1, 0).values));
    CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("Laplace-Beltrami operator") {
    Grid g = Grid::square(32, 2 * pi);
    RealField zero(g);
    RealField s = RealField::sample(g, [](double x, double) { return std::sin(x); });
    RealField lb = laplace_beltrami(s, zero);
    CHECK((lb.values - 0.5 * s.values).abs().maxCoeff() < 1e-13);
    RealField c = RealField::sample(g, [](double, double) { return 3.0; });
    CHECK(sup_norm(laplace_beltrami(c, zero)) < 1e-13);
    CHECK_THROWS_AS(laplace_beltrami(s, RealField(Grid::square(16, 2 * pi))), std::invalid_argument);

    // flat eigenfunction of the eigenvalue relation lap s + 12 s = 0
    const double L = pi / std::sqrt(3.0);
    Grid h = Grid::square(32, L);
    RealField e = RealField::sample(h, [&](double x, double) { return std::cos(2 * pi * x / L); });
    CHECK((laplace_beltrami(e, RealField(h)).values - 6.0 * e.values).abs().maxCoeff() < 1e-11);
}

TEST_CASE("resample is exact for band-limited fields") {
    Grid g(16, 12, 1.0, 2.0);
    RealField f = smooth_field(Grid(64, 64, 1.0, 2.0));
    RealField band = lowpass(f, 5);
    RealField coarse = resample(band, 16, 12);
    RealField back = resample(coarse, 64, 64);
    CHECK((back.values - band.values).abs().maxCoeff() < 1e-13);
    // Nyquist content survives an up-and-down round trip
    RealField nyq = RealField::sample(g, [&](double x, double) { return std::cos(2 * pi * 8 * x); });
    RealField rt = resample(resample(nyq, 32, 24), 16, 12);
    CHECK((rt.values - nyq.values).abs().maxCoeff() < 1e-13);
}

TEST_CASE("PFLD1 round trip") {
    Grid g(8, 10, 1.25, std::sqrt(2.0));
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    RealField f(g);
    for (int j = 0; j < 10; ++j)
        for (int i = 0; i < 8; ++i) f.values(i, j) = nd(rng) * 1e-3 + 1e5 * (i == j);
    std::stringstream ss;
    write_pfld(ss, f);
    std::string first;
    std::getline(ss, first);
    CHECK(first.rfind("PFLD1 8 10 1.25 ", 0) == 0);
    CHECK(first.substr(first.size() - 4) == "real");
    ss.seekg(0);
    auto back = std::get<RealField>(read_pfld(ss));
    CHECK(back.grid == g);
    CHECK((back.values - f.values).abs().maxCoeff() == 0.0);

    ComplexField z = ComplexField::sample(g, [](double x, double y) { return cplx(std::sin(x), y / 3.0); });
    std::stringstream zs;
    write_pfld(zs, z);
    auto zb = std::get<ComplexField>(read_pfld(zs));
    CHECK((zb.values - z.values).abs().maxCoeff() == 0.0);

    std::stringstream bad("PFLD2 8 8 1 1 real\n");
    CHECK_THROWS(read_pfld(bad));
    std::stringstream trunc("PFLD1 8 8 1 1 real\n1\n2\n");
    CHECK_THROWS(read_pfld(trunc));
}
