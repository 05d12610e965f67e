#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <type_traits>

namespace lagtori {

using cplx = std::complex<double>;

// Sample storage: rows index x, columns index y. Column-major, so x runs fastest.
template <typename Scalar>
using Samples = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using RArray = Samples<double>;
using CArray = Samples<cplx>;

inline constexpr double pi = std::numbers::pi;

struct Lattice2 {
    Eigen::Vector2d e1, e2;

    Lattice2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) : e1(a), e2(b) {
        if (std::abs(det()) == 0.0 || !std::isfinite(det()))
            throw std::invalid_argument("Lattice2: degenerate period basis");
    }
    static Lattice2 rectangular(double L1, double L2) {
        return {Eigen::Vector2d(L1, 0.0), Eigen::Vector2d(0.0, L2)};
    }
    double det() const { return e1.x() * e2.y() - e1.y() * e2.x(); }
    double cell_area() const { return std::abs(det()); }
};

struct Grid {
    int n1 = 0, n2 = 0;
    double L1 = 0.0, L2 = 0.0;

    Grid() = default;
    Grid(int n1_, int n2_, double L1_, double L2_) : n1(n1_), n2(n2_), L1(L1_), L2(L2_) {
        if (n1 < 8 || n2 < 8 || n1 % 2 || n2 % 2)
            throw std::invalid_argument("Grid: sizes must be even and at least 8");
        if (!(L1 > 0.0) || !(L2 > 0.0) || !std::isfinite(L1) || !std::isfinite(L2))
            throw std::invalid_argument("Grid: periods must be positive");
    }
    static Grid square(int n, double L) { return {n, n, L, L}; }

    double x(int i) const { return i * L1 / n1; }
    double y(int j) const { return j * L2 / n2; }
    double cell() const { return L1 * L2; }
    Lattice2 lattice() const { return Lattice2::rectangular(L1, L2); }
    bool operator==(const Grid&) const = default;
};

template <typename Scalar>
struct PeriodicField {
    using scalar_type = Scalar;

    Grid grid;
    Samples<Scalar> values;

    PeriodicField() = default;
    explicit PeriodicField(const Grid& g) : grid(g), values(Samples<Scalar>::Zero(g.n1, g.n2)) {}
    template <typename Derived>
    PeriodicField(const Grid& g, const Eigen::ArrayBase<Derived>& vals) : grid(g), values(vals) {
        if (values.rows() != g.n1 || values.cols() != g.n2)
            throw std::invalid_argument("PeriodicField: sample array does not match grid");
    }

    template <typename Fn>
    static PeriodicField sample(const Grid& g, Fn&& f) {
        PeriodicField out(g);
        for (int j = 0; j < g.n2; ++j)
            for (int i = 0; i < g.n1; ++i) out.values(i, j) = f(g.x(i), g.y(j));
        return out;
    }

    int n1() const { return grid.n1; }
    int n2() const { return grid.n2; }
    Scalar operator()(int i, int j) const { return values(i, j); }
};

using RealField = PeriodicField<double>;
using ComplexField = PeriodicField<cplx>;

// 2-D discrete Fourier transforms (unnormalized forward, 1/N inverse).
CArray fft2(const CArray& a);
CArray ifft2(const CArray& a);

// Integer wavenumber index for FFT slot i of n (Nyquist reported as -n/2).
inline int mode_index(int i, int n) { return i <= n / 2 - 1 ? i : i - n; }

namespace detail {

inline double wavenumber(int i, int n, double L) { return 2.0 * pi * mode_index(i, n) / L; }

// (i k)^p with the Nyquist coefficient dropped for odd p.
inline cplx ik_pow(int i, int n, double L, int p) {
    if (p == 0) return 1.0;
    if (p % 2 == 1 && i == n / 2) return 0.0;
    return std::pow(cplx(0.0, wavenumber(i, n, L)), p);
}

inline void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw std::invalid_argument("grid mismatch");
}

template <typename Scalar>
CArray to_complex(const Samples<Scalar>& a) {
    return a.template cast<cplx>();
}

template <typename Scalar>
Samples<Scalar> from_complex(const CArray& a) {
    if constexpr (std::is_same_v<Scalar, double>)
        return a.real();
    else
        return a;
}

}  // namespace detail

// Multiplier of d^{ax}/dx^{ax} d^{ay}/dy^{ay} on the FFT grid.
CArray derivative_symbol(const Grid& g, int ax, int ay);
// Multiplier of dz^order (conj = false) or dzbar^order (conj = true).
CArray dz_symbol(const Grid& g, int order, bool conj);
// Multiplier of the Laplacian.
RArray laplacian_symbol(const Grid& g);

template <typename Scalar>
PeriodicField<Scalar> derivative(const PeriodicField<Scalar>& f, int ax, int ay) {
    if (ax < 0 || ay < 0 || ax + ay > 5)
        throw std::invalid_argument("derivative: total order must be in [0, 5]");
    if (ax + ay == 0) return f;
    CArray h = fft2(detail::to_complex(f.values));
    h *= derivative_symbol(f.grid, ax, ay);
    return {f.grid, detail::from_complex<Scalar>(ifft2(h))};
}

template <typename Scalar>
ComplexField dz(const PeriodicField<Scalar>& f, int order = 1) {
    if (order < 0 || order > 5) throw std::invalid_argument("dz: order must be in [0, 5]");
    CArray h = fft2(detail::to_complex(f.values));
    h *= dz_symbol(f.grid, order, false);
    return {f.grid, ifft2(h)};
}

template <typename Scalar>
ComplexField dzbar(const PeriodicField<Scalar>& f, int order = 1) {
    if (order < 0 || order > 5) throw std::invalid_argument("dzbar: order must be in [0, 5]");
    CArray h = fft2(detail::to_complex(f.values));
    h *= dz_symbol(f.grid, order, true);
    return {f.grid, ifft2(h)};
}

template <typename Scalar>
PeriodicField<Scalar> laplacian(const PeriodicField<Scalar>& f) {
    CArray h = fft2(detail::to_complex(f.values));
    h *= laplacian_symbol(f.grid).template cast<cplx>();
    return {f.grid, detail::from_complex<Scalar>(ifft2(h))};
}

template <typename Scalar>
Scalar integrate(const PeriodicField<Scalar>& f) {
    return f.values.mean() * f.grid.cell();
}

template <typename Scalar>
double sup_norm(const PeriodicField<Scalar>& f) {
    return f.values.abs().maxCoeff();
}

// -e^{-v} Δs / 2, the Laplace-Beltrami operator of 2e^v(dx^2 + dy^2) with positive spectrum.
inline RealField laplace_beltrami(const RealField& s, const RealField& v) {
    detail::require_same_grid(s.grid, v.grid);
    return {s.grid, -0.5 * (-v.values).exp() * laplacian(s).values};
}

// Zero every Fourier mode with |index| >= cut along either axis.
template <typename Scalar>
PeriodicField<Scalar> lowpass(const PeriodicField<Scalar>& f, int cut) {
    CArray h = fft2(detail::to_complex(f.values));
    for (int j = 0; j < f.grid.n2; ++j)
        for (int i = 0; i < f.grid.n1; ++i)
            if (std::abs(mode_index(i, f.grid.n1)) >= cut || std::abs(mode_index(j, f.grid.n2)) >= cut)
                h(i, j) = 0.0;
    return {f.grid, detail::from_complex<Scalar>(ifft2(h))};
}

// Two-thirds dealiasing cut for a grid: modes with |index| >= min(n1, n2) / 3 are removed.
inline int dealias_cut(const Grid& g) { return std::min(g.n1, g.n2) / 3; }

namespace detail {

// Target slots (and weights) in an m-point spectrum for source slot i of an n-point spectrum.
inline int resample_targets(int i, int n, int m, int* slot, double* w) {
    int k = mode_index(i, n);
    auto at = [m](int idx) { return idx >= 0 ? idx : idx + m; };
    if (m > n && k == -n / 2) {
        slot[0] = at(-n / 2), slot[1] = at(n / 2), w[0] = w[1] = 0.5;
        return 2;
    }
    if (m < n && std::abs(k) > m / 2) return 0;
    if (m < n && std::abs(k) == m / 2) {
        slot[0] = at(-m / 2), w[0] = 1.0;
        return 1;
    }
    slot[0] = at(k), w[0] = 1.0;
    return 1;
}

}  // namespace detail

// Trigonometric interpolation onto an m1 x m2 grid with the same periods.
template <typename Scalar>
PeriodicField<Scalar> resample(const PeriodicField<Scalar>& f, int m1, int m2) {
    Grid out(m1, m2, f.grid.L1, f.grid.L2);
    const int n1 = f.grid.n1, n2 = f.grid.n2;
    CArray h = fft2(detail::to_complex(f.values));
    CArray g = CArray::Zero(m1, m2);
    int si[2], sj[2];
    double wi[2], wj[2];
    for (int j = 0; j < n2; ++j) {
        int cj = detail::resample_targets(j, n2, m2, sj, wj);
        for (int i = 0; i < n1; ++i) {
            int ci = detail::resample_targets(i, n1, m1, si, wi);
            for (int b = 0; b < cj; ++b)
                for (int a = 0; a < ci; ++a) g(si[a], sj[b]) += h(i, j) * (wi[a] * wj[b]);
        }
    }
    g *= double(m1) * m2 / (double(n1) * n2);
    return {out, detail::from_complex<Scalar>(ifft2(g))};
}

}  // namespace lagtori
