#include "lagtori/field2d.hpp"

#include <unsupported/Eigen/FFT>

#include <vector>

namespace lagtori {

namespace {

Eigen::FFT<double>& engine() {
    thread_local Eigen::FFT<double> fft;
    return fft;
}

CArray transform(const CArray& a, bool forward) {
    const Eigen::Index n1 = a.rows(), n2 = a.cols();
    CArray out(n1, n2);
    auto& fft = engine();
    std::vector<cplx> in, res;

    in.resize(n1);
    for (Eigen::Index j = 0; j < n2; ++j) {
        for (Eigen::Index i = 0; i < n1; ++i) in[i] = a(i, j);
        forward ? fft.fwd(res, in) : fft.inv(res, in);
        for (Eigen::Index i = 0; i < n1; ++i) out(i, j) = res[i];
    }
    in.resize(n2);
    for (Eigen::Index i = 0; i < n1; ++i) {
        for (Eigen::Index j = 0; j < n2; ++j) in[j] = out(i, j);
        forward ? fft.fwd(res, in) : fft.inv(res, in);
        for (Eigen::Index j = 0; j < n2; ++j) out(i, j) = res[j];
    }
    return out;
}

double binomial(int n, int k) {
    double b = 1.0;
    for (int t = 1; t <= k; ++t) b = b * (n - k + t) / t;
    return b;
}

}  // namespace

CArray fft2(const CArray& a) { return transform(a, true); }
CArray ifft2(const CArray& a) { return transform(a, false); }

CArray derivative_symbol(const Grid& g, int ax, int ay) {
    CArray s(g.n1, g.n2);
    for (int j = 0; j < g.n2; ++j) {
        cplx sy = detail::ik_pow(j, g.n2, g.L2, ay);
        for (int i = 0; i < g.n1; ++i) s(i, j) = detail::ik_pow(i, g.n1, g.L1, ax) * sy;
    }
    return s;
}

CArray dz_symbol(const Grid& g, int order, bool conj) {
    // (d_x -+ i d_y)^n / 2^n expanded binomially so each axis keeps its own Nyquist rule.
    const cplx rot = conj ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
    CArray s = CArray::Zero(g.n1, g.n2);
    for (int a = 0; a <= order; ++a) {
        cplx c = binomial(order, a) * std::pow(rot, order - a) / std::pow(2.0, order);
        s += c * derivative_symbol(g, a, order - a);
    }
    return s;
}

RArray laplacian_symbol(const Grid& g) {
    RArray s(g.n1, g.n2);
    for (int j = 0; j < g.n2; ++j) {
        double ky = detail::wavenumber(j, g.n2, g.L2);
        for (int i = 0; i < g.n1; ++i) {
            double kx = detail::wavenumber(i, g.n1, g.L1);
            s(i, j) = -(kx * kx + ky * ky);
        }
    }
    return s;
}

}  // namespace lagtori
